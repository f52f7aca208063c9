"""Uniform access to every chord-function evaluator.

An evaluator is a callable mapping a chord (xi_p, xi_q) to a ChordValue; it
carries ``name`` and ``state`` attributes, and may offer a vectorized
``grid(xi_p_axis, xi_q_axis) -> (values, flags)`` fast path that scan_grid
will pick up.
"""

from __future__ import annotations

import numpy as np

from .core import FLAG_CODES, ChordValue
from .curves import CurveSpec
from .exact import ExactEvaluator
from .semiclassical import chi_semiclassical, sp_full, sp_small
from .smallchord import chi_small, chi_small_grid, chi_taylor, classical_moments

EVALUATOR_NAMES = ("exact", "small", "semiclassical", "sp_small", "sp_full", "taylor")


class SmallChordEvaluator:
    """Classical curve average; vectorized over grids."""

    name = "small"

    def __init__(self, state: CurveSpec, tol: float = 1e-10):
        self.state = state
        self.tol = tol

    def __call__(self, xi) -> ChordValue:
        return chi_small(self.state, xi, tol=self.tol)

    def grid(self, xi_p_axis, xi_q_axis):
        values = chi_small_grid(self.state, xi_p_axis, xi_q_axis, tol=self.tol)
        return values, np.zeros(values.shape, dtype=np.uint8)


class TaylorEvaluator:
    """Short-chord Taylor polynomial from classical moments."""

    def __init__(self, state: CurveSpec, order: int = 4):
        self.state = state
        self.order = order
        self.name = f"taylor:{order}"
        self._moments = classical_moments(state, order=order)

    def __call__(self, xi) -> ChordValue:
        return chi_taylor(self._moments, self.state.hbar, xi)


class _PointwiseEvaluator:
    def __init__(self, state: CurveSpec, fn, name: str):
        self.state = state
        self._fn = fn
        self.name = name

    def __call__(self, xi) -> ChordValue:
        return self._fn(self.state, xi)


class SemiclassicalEvaluator:
    """Composite chi_s - sp_small + sp_full with a grid fast path.

    On grids the classical average comes from the vectorized accumulation of
    chi_small_grid and only the two stationary-phase sums run pointwise.
    """

    name = "semiclassical"

    def __init__(self, state: CurveSpec, tol: float = 1e-10):
        self.state = state
        self.tol = tol

    def __call__(self, xi) -> ChordValue:
        return chi_semiclassical(self.state, xi, tol=self.tol)

    def grid(self, xi_p_axis, xi_q_axis):
        classical = chi_small_grid(self.state, xi_p_axis, xi_q_axis, tol=self.tol)
        values = np.empty(classical.shape, dtype=complex)
        flags = np.empty(classical.shape, dtype=np.uint8)
        for i, xi_p in enumerate(xi_p_axis):
            for j, xi_q in enumerate(xi_q_axis):
                out = chi_semiclassical(self.state, (float(xi_p), float(xi_q)),
                                        tol=self.tol, _classical=classical[i, j])
                values[i, j] = out.value
                flags[i, j] = FLAG_CODES[out.flag]
        return values, flags


def make_evaluator(name: str, state: CurveSpec):
    """Build an evaluator by name; Taylor orders spell ``taylor:K``."""
    if name == "exact":
        return ExactEvaluator(state)
    if name == "small":
        return SmallChordEvaluator(state)
    if name == "semiclassical":
        return SemiclassicalEvaluator(state)
    if name in ("sp_small", "sp-small"):
        return _PointwiseEvaluator(state, sp_small, "sp_small")
    if name in ("sp_full", "sp-full"):
        return _PointwiseEvaluator(state, sp_full, "sp_full")
    if name.startswith("taylor"):
        _, _, suffix = name.partition(":")
        order = int(suffix) if suffix else 4
        return TaylorEvaluator(state, order=order)
    raise ValueError(f"unknown evaluator {name!r}; known: {', '.join(EVALUATOR_NAMES)}")
