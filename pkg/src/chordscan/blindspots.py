"""Nodal lines and blind spots of a chord-function field.

Nodal lines of the real and imaginary components are traced from a scanned
grid by marching squares (linear interpolation along cell edges, saddle cells
resolved by the cell-center sign, segments chained through shared edge keys).
Blind spots -- common zeros of both components -- are seeded from cells where
both components change sign and polished by a damped Newton iteration on the
underlying evaluator, so their final accuracy is set by the evaluator, not by
the scan resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import Chord, Flag
from .gridscan import ChordFieldGrid

# a component whose largest modulus is this far under the field's own scale
# is identically zero by symmetry: every point is nodal and no line is defined
DEGENERACY_RATIO = 1e-8


@dataclass(frozen=True)
class NodalCurve:
    """One polyline of the nodal set, in chord coordinates (xi_p, xi_q)."""

    points: np.ndarray
    closed: bool

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class NodalSet:
    component: str
    curves: tuple[NodalCurve, ...]
    flag: Flag

    @property
    def degenerate(self) -> bool:
        return self.flag is Flag.DEGENERATE_SYMMETRY


def _edge_point(axis_a, axis_b, va, vb):
    t = va / (va - vb)
    return axis_a + t * (axis_b - axis_a)


def _cell_segments(comp, xp, xq, i, j):
    """Marching-squares segments for the cell [i, i+1] x [j, j+1].

    Returns a list of ((key_a, pt_a), (key_b, pt_b)) pairs, where keys label
    grid edges exactly, so chaining across cells is lossless.
    """
    a = comp[i, j]
    b = comp[i + 1, j]
    c = comp[i + 1, j + 1]
    d = comp[i, j + 1]
    crossings = {}
    if (a > 0) != (b > 0):
        crossings["bottom"] = (("p", i, j),
                               (_edge_point(xp[i], xp[i + 1], a, b), xq[j]))
    if (b > 0) != (c > 0):
        crossings["right"] = (("q", i + 1, j),
                              (xp[i + 1], _edge_point(xq[j], xq[j + 1], b, c)))
    if (d > 0) != (c > 0):
        crossings["top"] = (("p", i, j + 1),
                            (_edge_point(xp[i], xp[i + 1], d, c), xq[j + 1]))
    if (a > 0) != (d > 0):
        crossings["left"] = (("q", i, j),
                             (xp[i], _edge_point(xq[j], xq[j + 1], a, d)))
    n = len(crossings)
    if n == 0:
        return []
    if n == 2:
        (ka, pa), (kb, pb) = crossings.values()
        return [((ka, pa), (kb, pb))]
    if n == 4:
        # saddle: corners alternate in sign; the center decides which corner
        # pair the nodal lines isolate
        center = 0.25 * (a + b + c + d)
        if (center > 0) == (a > 0):
            pairs = (("bottom", "right"), ("top", "left"))
        else:
            pairs = (("bottom", "left"), ("right", "top"))
        return [(crossings[u], crossings[v]) for u, v in pairs]
    # n == 1 or 3 would need a corner sitting exactly on zero; nudging the
    # component field (done by the caller) rules it out
    raise RuntimeError(f"inconsistent crossing count {n} in cell ({i}, {j})")


def nodal_contours(grid: ChordFieldGrid, component: str = "real") -> NodalSet:
    """Trace the nodal lines of one component of a scanned field."""
    comp = grid.component(component)
    scale = float(np.max(np.abs(grid.values)))
    if float(np.max(np.abs(comp))) < DEGENERACY_RATIO * scale:
        return NodalSet(component=component, curves=(),
                        flag=Flag.DEGENERATE_SYMMETRY)
    # nudge exact zeros off the lattice so every cell has 0, 2 or 4 crossings
    tiny = 1e-14 * scale
    comp = np.where(comp == 0.0, tiny, comp)

    xp, xq = grid.xi_p_axis, grid.xi_q_axis
    segments = []
    for i in range(len(xp) - 1):
        for j in range(len(xq) - 1):
            segments.extend(_cell_segments(comp, xp, xq, i, j))

    # chain segments through shared edge keys
    coords = {}
    links = {}
    for (ka, pa), (kb, pb) in segments:
        coords[ka] = pa
        coords[kb] = pb
        links.setdefault(ka, []).append(kb)
        links.setdefault(kb, []).append(ka)

    def walk(start, first):
        path = [start, first]
        seen_pairs = {frozenset((start, first))}
        while True:
            here = path[-1]
            nxt = [k for k in links[here] if frozenset((here, k)) not in seen_pairs]
            if not nxt:
                return path, False
            path.append(nxt[0])
            seen_pairs.add(frozenset((here, nxt[0])))
            if path[-1] == path[0]:
                return path, True

    consumed = set()
    curves = []

    def emit(path, closed):
        for k in path:
            consumed.add(k)
        pts = np.array([coords[k] for k in path])
        curves.append(NodalCurve(points=pts, closed=closed))

    # open curves first (endpoints have a single neighbour)
    for key in sorted(k for k, nb in links.items() if len(nb) == 1):
        if key in consumed:
            continue
        path, closed = walk(key, links[key][0])
        emit(path, closed)
    # whatever remains sits on closed loops
    for key in sorted(links):
        if key in consumed:
            continue
        path, closed = walk(key, links[key][0])
        emit(path, closed)

    curves.sort(key=lambda c: -len(c.points))
    return NodalSet(component=component, curves=tuple(curves), flag=Flag.OK)


# -- blind spots ------------------------------------------------------------


@dataclass(frozen=True)
class BlindSpot:
    chord: Chord
    value: complex
    iterations: int

    @property
    def radius(self) -> float:
        return self.chord.norm


@dataclass(frozen=True)
class BlindSpotSearch:
    spots: tuple[BlindSpot, ...]
    n_seeds: int
    tol: float

    def nearest(self) -> BlindSpot:
        if not self.spots:
            raise ValueError("no blind spots found in the scanned region")
        return self.spots[0]


def _newton_polish(evaluator, seed, step, tol, max_iter=40):
    xi = np.array(seed, dtype=float)

    def f(v):
        z = complex(evaluator((v[0], v[1])))
        return np.array([z.real, z.imag]), abs(z)

    fv, mag = f(xi)
    for it in range(1, max_iter + 1):
        if mag < tol:
            return xi, mag, it - 1
        jac = np.empty((2, 2))
        for k in range(2):
            e = np.zeros(2)
            e[k] = step
            fp, _ = f(xi + e)
            fm, _ = f(xi - e)
            jac[:, k] = (fp - fm) / (2.0 * step)
        try:
            delta = np.linalg.solve(jac, -fv)
        except np.linalg.LinAlgError:
            return xi, mag, it
        lam = 1.0
        for _ in range(8):
            cand = xi + lam * delta
            fc, mc = f(cand)
            if mc < mag:
                xi, fv, mag = cand, fc, mc
                break
            lam *= 0.5
        else:
            return xi, mag, it  # damping failed; stuck
    return xi, mag, max_iter


def find_blind_spots(evaluator, grid: ChordFieldGrid,
                     tol: float = 1e-8) -> BlindSpotSearch:
    """Locate common zeros of Re chi and Im chi inside the scanned region.

    Cells where both components change sign seed a damped Newton iteration
    on the evaluator; converged roots closer than one cell diagonal are
    merged. Spots are returned sorted by distance from the origin.
    """
    re = grid.values.real
    im = grid.values.imag
    scale = float(np.max(np.abs(grid.values)))
    if (float(np.max(np.abs(im))) < DEGENERACY_RATIO * scale
            or float(np.max(np.abs(re))) < DEGENERACY_RATIO * scale):
        # a vanishing component turns isolated zeros into whole nodal lines
        raise ValueError(
            "a field component is identically zero by symmetry; blind spots "
            "are not isolated points (trace nodal_contours instead)")
    xp, xq = grid.xi_p_axis, grid.xi_q_axis

    def sign_change(c, i, j):
        block = c[i:i + 2, j:j + 2]
        return block.min() < 0.0 < block.max()

    seeds = [(0.5 * (xp[i] + xp[i + 1]), 0.5 * (xq[j] + xq[j + 1]))
             for i in range(len(xp) - 1) for j in range(len(xq) - 1)
             if sign_change(re, i, j) and sign_change(im, i, j)]

    width = max(xp[-1] - xp[0], xq[-1] - xq[0])
    step = 1e-6 * width
    cell_diag = math.hypot(xp[1] - xp[0], xq[1] - xq[0])
    found = []
    for seed in seeds:
        xi, mag, iters = _newton_polish(evaluator, seed, step, tol)
        if mag >= tol:
            continue
        if any(math.hypot(xi[0] - s.chord.xi_p, xi[1] - s.chord.xi_q) < cell_diag
               for s in found):
            continue
        found.append(BlindSpot(chord=Chord(float(xi[0]), float(xi[1])),
                               value=complex(evaluator((xi[0], xi[1]))),
                               iterations=iters))
    found.sort(key=lambda s: s.radius)
    return BlindSpotSearch(spots=tuple(found), n_seeds=len(seeds), tol=tol)


def first_zero_along(evaluator, direction, s_max: float, n_scan: int = 400,
                     tol: float = 1e-9) -> float:
    """First zero of the chord function along the ray xi = s * direction.

    Valid along directions where the field is real (for example the mean
    direction of the state, where chi is the characteristic function of a
    marginal distribution); a residual imaginary part above ``tol`` at the
    root is rejected.
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.hypot(u[0], u[1])

    def along(s):
        return complex(evaluator((s * u[0], s * u[1])))

    ss = np.linspace(0.0, s_max, n_scan + 1)[1:]
    prev_s, prev_v = ss[0], along(ss[0])
    for s in ss[1:]:
        v = along(s)
        if (prev_v.real > 0) != (v.real > 0):
            root = brentq(lambda x: along(x).real, prev_s, s, xtol=1e-13)
            residual = abs(along(root))
            if residual > tol:
                raise RuntimeError(
                    f"real part vanishes at s={root:.6f} but |chi|={residual:.2e}: "
                    "the ray does not carry a real field")
            return float(root)
        prev_s, prev_v = s, v
    raise RuntimeError(f"no zero on the ray within s <= {s_max}")
