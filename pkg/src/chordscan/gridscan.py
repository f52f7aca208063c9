"""Chord-function fields on rectangular grids of chords."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FLAGS_BY_CODE, FLAG_CODES, Flag, worst_flag


@dataclass(frozen=True)
class ChordFieldGrid:
    """A chord-function field sampled on the tensor grid xi_p_axis x xi_q_axis.

    ``values[i, j]`` belongs to the chord (xi_p_axis[i], xi_q_axis[j]);
    ``flags`` stores the matching quality codes (see core.FLAG_CODES).
    """

    xi_p_axis: np.ndarray
    xi_q_axis: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    hbar: float
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nshape = (self.xi_p_axis.size, self.xi_q_axis.size)
        if self.values.shape != nshape or self.flags.shape != nshape:
            raise ValueError(
                f"field shape {self.values.shape}/{self.flags.shape} does not "
                f"match axes {nshape}")

    @property
    def worst_flag(self) -> Flag:
        return worst_flag(*(FLAGS_BY_CODE[int(c)] for c in np.unique(self.flags)))

    def flag_counts(self) -> dict[Flag, int]:
        codes, counts = np.unique(self.flags, return_counts=True)
        return {FLAGS_BY_CODE[int(c)]: int(k) for c, k in zip(codes, counts)}

    def component(self, name: str) -> np.ndarray:
        if name == "real":
            return self.values.real
        if name == "imag":
            return self.values.imag
        if name == "abs":
            return np.abs(self.values)
        raise ValueError(f"unknown component {name!r} (want real/imag/abs)")


def axis(lo: float, hi: float, count: int) -> np.ndarray:
    if count < 2 or not hi > lo:
        raise ValueError(f"bad axis [{lo}, {hi}] x {count}")
    return np.linspace(lo, hi, count)


def scan_grid(evaluator, xi_p_axis, xi_q_axis, extra_metadata: dict | None = None) -> ChordFieldGrid:
    """Evaluate a chord-function evaluator over a chord grid.

    Uses the evaluator's vectorized ``grid`` method when it has one and falls
    back to looping its pointwise call. The evaluator must expose ``state``
    (a CurveSpec) and ``name``.
    """
    xi_p_axis = np.asarray(xi_p_axis, dtype=float)
    xi_q_axis = np.asarray(xi_q_axis, dtype=float)
    if hasattr(evaluator, "grid"):
        values, flags = evaluator.grid(xi_p_axis, xi_q_axis)
        values = np.asarray(values, dtype=complex)
        flags = np.asarray(flags, dtype=np.uint8)
    else:
        values = np.empty((xi_p_axis.size, xi_q_axis.size), dtype=complex)
        flags = np.empty(values.shape, dtype=np.uint8)
        for i, xi_p in enumerate(xi_p_axis):
            for j, xi_q in enumerate(xi_q_axis):
                out = evaluator((xi_p, xi_q))
                values[i, j] = out.value
                flags[i, j] = FLAG_CODES[out.flag]
    state = evaluator.state
    metadata = {
        "evaluator": evaluator.name,
        "n": state.n, "hbar": state.hbar, "alpha": list(state.alpha), "t": state.t,
        "xi_p": [float(xi_p_axis[0]), float(xi_p_axis[-1]), int(xi_p_axis.size)],
        "xi_q": [float(xi_q_axis[0]), float(xi_q_axis[-1]), int(xi_q_axis.size)],
    }
    if extra_metadata:
        metadata.update(extra_metadata)
    return ChordFieldGrid(xi_p_axis=xi_p_axis, xi_q_axis=xi_q_axis,
                          values=values, flags=flags, hbar=state.hbar,
                          metadata=metadata)
