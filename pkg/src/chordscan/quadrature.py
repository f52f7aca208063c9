"""Convergence-certified quadrature and differentiation helpers.

Every estimate in the package that comes from a discretized integral or a
finite difference goes through one of these routines: each refines until two
successive refinements agree to tolerance and raises ConvergenceError (with
the last two estimates attached) if the budget runs out, so callers never get
an uncertified number.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


class ConvergenceError(RuntimeError):
    """Refinement budget exhausted before two estimates agreed."""

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous


@lru_cache(maxsize=32)
def _gl_nodes(n: int):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def periodic_mean(f, n0: int = 64, tol: float = 1e-12, max_doublings: int = 14):
    """Mean over [0, 2pi) of a smooth periodic integrand, by trapezoid doubling.

    Parameters
    ----------
    f : callable
        Maps an array of angles to an array of samples; the *last* axis must
        be the node axis (stacked integrands are averaged together).
    tol : float
        Absolute tolerance on the change between successive doublings,
        measured uniformly over any stacked components.

    Returns
    -------
    (mean, nodes) where ``mean`` has the shape of ``f``'s output minus the
    node axis.

    The trapezoid rule is spectrally accurate for periodic integrands, so the
    doubling certificate is conservative.
    """
    n = n0
    theta = 2.0 * np.pi * np.arange(n) / n
    total = np.sum(f(theta), axis=-1, dtype=complex)
    est = total / n
    prev = None
    for _ in range(max_doublings):
        if prev is not None and np.max(np.abs(est - prev)) < tol:
            return est, n
        prev = est
        # refine: new nodes interleave the old ones, so reuse the running sum
        theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        total = total + np.sum(f(theta), axis=-1, dtype=complex)
        n *= 2
        est = total / n
    raise ConvergenceError(
        f"periodic mean did not settle to {tol:g} within {n} nodes",
        last=est, previous=prev,
    )


def gauss_segment(f, a: float, b: float, n0: int = 32, tol: float = 1e-12,
                  max_doublings: int = 8):
    """Integral of a smooth integrand over [a, b] by Gauss-Legendre doubling."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    n = n0
    prev = None
    for _ in range(max_doublings + 1):
        x, w = _gl_nodes(n)
        est = half * np.sum(w * f(half * x + mid), axis=-1)
        if prev is not None and np.max(np.abs(est - prev)) < tol:
            return est, n
        prev = est
        n *= 2
    raise ConvergenceError(
        f"Gauss-Legendre integral on [{a:g}, {b:g}] did not settle to {tol:g}",
        last=est, previous=prev,
    )


# Central-difference stencils for the n-th derivative, error O(h^2).
_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def richardson_derivative(f, order: int, h0: float, tol: float = 1e-8,
                          levels: int = 6):
    """n-th derivative of ``f`` at 0 by central differences + Richardson table.

    Halves the step up to ``levels`` times; the extrapolation error is
    estimated from the last two diagonal entries. Raises ConvergenceError
    (suggesting a different starting step) if the certificate fails.
    """
    if order not in _STENCILS:
        raise ValueError(f"derivative order {order} not supported (1..4)")
    stencil = _STENCILS[order]

    def central(h):
        return sum(c * f(k * h) for k, c in stencil) / h ** order

    diag = []
    rows = []
    for i in range(levels):
        h = h0 / 2 ** i
        row = [central(h)]
        for j in range(1, i + 1):
            fac = 4.0 ** j
            row.append((fac * row[j - 1] - rows[i - 1][j - 1]) / (fac - 1.0))
        rows.append(row)
        diag.append(row[-1])
        if i >= 1:
            err = abs(diag[-1] - diag[-2])
            if err < tol:
                return diag[-1], err
    raise ConvergenceError(
        f"derivative (order {order}) did not converge to {tol:g}; "
        f"try a starting step different from {h0:g}",
        last=diag[-1], previous=diag[-2],
    )
