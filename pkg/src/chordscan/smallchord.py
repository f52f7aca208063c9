"""Short-chord route: classical curve average, moments, blind-spot ellipse.

For chords short against the curve's geometry the chord function is the plain
classical average over the quantized curve,

    chi_s(xi) = (1/2 pi) \\oint dtheta exp[i x(theta) ∧ xi / hbar],

(J_0(r |xi| / hbar) for an unsheared ring). Its Taylor coefficients at the
origin are classical moments of the curve; the quantum moments come instead
from differentiating an evaluated chord function at the origin. Truncating
either expansion at second order and solving for the nearest zero along the
mean direction yields the blind-spot ellipse estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Chord, ChordValue, Flag, PhasePoint, wedge
from .curves import CurveSpec
from .quadrature import periodic_mean, richardson_derivative


def chi_small(curve: CurveSpec, xi, tol: float = 1e-10) -> ChordValue:
    """Classical curve average of the chord plane wave."""
    xi_p, xi_q = float(xi[0]), float(xi[1])

    def plane_wave(theta):
        p, q = curve.point(theta)
        return np.exp(1j / curve.hbar * (p * xi_q - q * xi_p))

    mean, _ = periodic_mean(plane_wave, n0=64, tol=tol)
    return ChordValue(complex(mean))


def chi_small_grid(curve: CurveSpec, xi_p_axis, xi_q_axis,
                   n0: int = 256, tol: float = 1e-10,
                   max_doublings: int = 10) -> np.ndarray:
    """chi_s on a tensor grid by rank-one accumulation.

    Each curve sample contributes the separable factor
    exp(-i q xi_p / hbar) ⊗ exp(i p xi_q / hbar), so a pass over theta nodes
    is a single matrix product; refinement interleaves midpoints, reusing the
    accumulated sum of previous passes.
    """
    xi_p_axis = np.asarray(xi_p_axis, dtype=float)
    xi_q_axis = np.asarray(xi_q_axis, dtype=float)

    def node_sum(theta):
        p, q = curve.point(theta)
        left = np.exp(-1j / curve.hbar * np.outer(xi_p_axis, q))
        right = np.exp(1j / curve.hbar * np.outer(p, xi_q_axis))
        return left @ right

    n = n0
    total = node_sum(2.0 * np.pi * np.arange(n) / n)
    est = total / n
    for _ in range(max_doublings):
        total = total + node_sum(2.0 * np.pi * (np.arange(n) + 0.5) / n)
        n *= 2
        new = total / n
        if np.max(np.abs(new - est)) < tol:
            return new
        est = new
    raise RuntimeError(f"short-chord grid average stalled at {n} nodes")


# -- classical moments ----------------------------------------------------


@dataclass(frozen=True)
class MomentTable:
    """Raw classical moments m[j, k] = <q^j p^k> over the curve.

    ``table[j, k]`` is valid for j + k <= order and NaN beyond.
    """

    order: int
    table: np.ndarray

    def raw(self, j: int, k: int) -> float:
        if j < 0 or k < 0 or j + k > self.order:
            raise ValueError(f"moment ({j}, {k}) outside table of order {self.order}")
        return float(self.table[j, k])

    @property
    def mean(self) -> PhasePoint:
        return PhasePoint(self.raw(0, 1), self.raw(1, 0))


def classical_moments(curve: CurveSpec, order: int = 4,
                      tol: float = 1e-12) -> MomentTable:
    """Uniform-angle averages <q^j p^k> for all j + k <= order."""
    if order < 1:
        raise ValueError("need order >= 1")
    pairs = [(j, k) for j in range(order + 1) for k in range(order + 1 - j)]

    def monomials(theta):
        p, q = curve.point(theta)
        return np.stack([q ** j * p ** k for j, k in pairs])

    means, _ = periodic_mean(monomials, n0=64, tol=tol)
    table = np.full((order + 1, order + 1), np.nan)
    for (j, k), m in zip(pairs, means.real):
        table[j, k] = m
    return MomentTable(order=order, table=table)


def chi_taylor(moments: MomentTable, hbar: float, xi, order: int | None = None) -> ChordValue:
    """Taylor polynomial of the chord function built from raw moments.

    chi(xi) = sum_n (1/n!) (i/hbar)^n <(x ∧ xi)^n>, with the wedge-power
    averages expanded binomially into the moment table. Feeding classical
    moments gives the short-chord expansion; the order is capped by the table.
    """
    if order is None:
        order = moments.order
    if order > moments.order:
        raise ValueError(f"table of order {moments.order} cannot support order {order}")
    xi_p, xi_q = float(xi[0]), float(xi[1])
    total = 0.0 + 0.0j
    for n in range(order + 1):
        # (x ∧ xi)^n = sum_k C(n,k) (p xi_q)^k (-q xi_p)^(n-k)
        wedge_mean = sum(math.comb(n, k) * (-1.0) ** (n - k)
                         * moments.raw(n - k, k)
                         * xi_q ** k * xi_p ** (n - k)
                         for k in range(n + 1))
        total += (1j / hbar) ** n / math.factorial(n) * wedge_mean
    return ChordValue(total)


# -- quantum moments from an evaluated chord function ----------------------


@dataclass(frozen=True)
class SecondOrderMoments:
    """Mean vector and raw second moments of the state behind a chord function.

    ``pq`` is the symmetrized cross moment <(qp + pq)/2>; for commuting
    (classical) inputs it is the plain <q p>.
    """

    mean: PhasePoint
    p2: float
    q2: float
    pq: float
    errors: dict = field(default_factory=dict, compare=False)

    def matrix(self) -> np.ndarray:
        """Quadratic form M with <(x ∧ xi)^2> = xi · M xi on (xi_p, xi_q)."""
        return np.array([[self.q2, -self.pq], [-self.pq, self.p2]])

    def covariance(self) -> np.ndarray:
        """Centered covariance [[var p, cov], [cov, var q]]."""
        mp, mq = self.mean
        return np.array([[self.p2 - mp * mp, self.pq - mp * mq],
                         [self.pq - mp * mq, self.q2 - mq * mq]])

    def uncertainty_det(self) -> float:
        """det of the centered covariance; >= (hbar/2)^2 for genuine states."""
        return float(np.linalg.det(self.covariance()))


def second_order_from_table(moments: MomentTable) -> SecondOrderMoments:
    return SecondOrderMoments(mean=moments.mean, p2=moments.raw(0, 2),
                              q2=moments.raw(2, 0), pq=moments.raw(1, 1))


def moments_from_chi(fn, hbar: float, h0: float | None = None,
                     tol: float = 1e-8) -> SecondOrderMoments:
    """Extract mean and raw second moments by differentiating chi at 0.

    <q^m> = (i hbar)^m d^m chi / d xi_p^m |_0 and
    <p^m> = (-i hbar)^m d^m chi / d xi_q^m |_0; the symmetrized cross moment
    comes from the diagonal direction, 2 chi_pq = chi_dd - chi_pp - chi_qq.
    ``fn`` maps (xi_p, xi_q) to a complex value (ChordValue accepted).
    """
    if h0 is None:
        h0 = 0.5 * math.sqrt(hbar)

    def val(xi_p, xi_q):
        return complex(fn((xi_p, xi_q)))

    errors = {}

    def deriv(direction, m, key):
        d, err = richardson_derivative(lambda s: val(*(s * direction[0], s * direction[1])),
                                       order=m, h0=h0, tol=tol)
        errors[key] = err
        return d

    d1_p = deriv((1.0, 0.0), 1, "d1_xi_p")
    d1_q = deriv((0.0, 1.0), 1, "d1_xi_q")
    d2_p = deriv((1.0, 0.0), 2, "d2_xi_p")
    d2_q = deriv((0.0, 1.0), 2, "d2_xi_q")
    d2_d = deriv((1.0, 1.0), 2, "d2_diag")

    mean_q = (1j * hbar * d1_p).real
    mean_p = (-1j * hbar * d1_q).real
    q2 = (-hbar * hbar * d2_p).real
    p2 = (-hbar * hbar * d2_q).real
    pq = (hbar * hbar * 0.5 * (d2_d - d2_p - d2_q)).real

    # hermiticity leaves first derivatives imaginary and second ones real;
    # leakage into the other component signals a bad evaluator or step size
    leak = max(abs(d1_p.real), abs(d1_q.real)) * hbar
    leak2 = max(abs(d2_p.imag), abs(d2_q.imag), abs(d2_d.imag)) * hbar * hbar
    scale = max(p2, q2, hbar)
    if leak > 1e-4 * scale or leak2 > 1e-4 * scale:
        raise RuntimeError(
            f"moment extraction inconsistent with a hermitian field "
            f"(leakage {leak:.2e}, {leak2:.2e} against scale {scale:.2e})")

    return SecondOrderMoments(mean=PhasePoint(mean_p, mean_q),
                              p2=p2, q2=q2, pq=pq, errors=errors)


# -- blind-spot ellipse ----------------------------------------------------


@dataclass(frozen=True)
class BlindSpotEstimate:
    """Second-order estimate of the blind spots nearest the origin.

    The second-order zero condition splits into <x> ∧ xi = 0 (chord aligned
    with the mean) and xi · M xi = 2 hbar^2 (the ellipse); ``spots`` holds the
    aligned ellipse crossings +/- s u. When the mean vanishes every direction
    is equivalent and no spot is singled out: ``degenerate`` is set and
    ``spots`` is empty.
    """

    matrix: np.ndarray
    level: float
    spots: tuple[Chord, ...]
    degenerate: bool
    flag: Flag

    @property
    def radius(self) -> float:
        """Distance |s| of the estimated spots from the origin."""
        if not self.spots:
            raise ValueError("degenerate estimate has no spots")
        return self.spots[0].norm


def closest_blind_spot_estimate(moments: SecondOrderMoments,
                                hbar: float) -> BlindSpotEstimate:
    level = 2.0 * hbar * hbar
    m = moments.matrix()
    eigs = np.linalg.eigvalsh(m)
    if eigs[0] <= 0.0:
        raise ValueError(f"second-moment form is not positive definite (eigenvalues {eigs})")
    mp, mq = moments.mean
    norm = math.hypot(mp, mq)
    if norm < 1e-8 * math.sqrt(moments.p2 + moments.q2):
        return BlindSpotEstimate(matrix=m, level=level, spots=(),
                                 degenerate=True, flag=Flag.DEGENERATE_SYMMETRY)
    u = np.array([mp, mq]) / norm
    s = math.sqrt(level / float(u @ m @ u))
    spots = (Chord(s * u[0], s * u[1]), Chord(-s * u[0], -s * u[1]))
    return BlindSpotEstimate(matrix=m, level=level, spots=spots,
                             degenerate=False, flag=Flag.OK)
