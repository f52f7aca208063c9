"""Shared phase-space primitives and conventions.

Every module in the package builds on the conventions fixed here:

* 2-vectors are ordered ``(p, q)``; phase points are ``x = (p, q)`` and
  chords (phase-space displacements) are ``xi = (xi_p, xi_q)``.
* The symplectic wedge is ``wedge(a, b) = a_p * b_q - a_q * b_p``, so
  ``wedge(xi, x) = xi_p * q - xi_q * p``.
* Units put the oscillator mass and frequency at 1; ``hbar`` is the only
  scale parameter and enters everywhere explicitly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple


class PhasePoint(NamedTuple):
    """Point of the classical phase plane, ordered (p, q)."""

    p: float
    q: float


class Chord(NamedTuple):
    """Phase-space displacement (the argument of the chord function)."""

    xi_p: float
    xi_q: float

    @property
    def norm(self) -> float:
        return math.hypot(self.xi_p, self.xi_q)


class Flag(enum.Enum):
    """Qualifier attached to evaluated chord-function values.

    OK                   value trusted at the evaluator's stated accuracy
    NEAR_CAUSTIC         a stationary-phase denominator fell below tolerance
    EVANESCENT           chord longer than any chord of the curve (no real
                         realizations; semiclassical value decays)
    DEGENERATE_SYMMETRY  a quantity is identically zero by symmetry, so a
                         derived object (nodal line, blind-spot direction)
                         is not defined
    """

    OK = "ok"
    NEAR_CAUSTIC = "near_caustic"
    EVANESCENT = "evanescent"
    DEGENERATE_SYMMETRY = "degenerate_symmetry"


_FLAG_SEVERITY = {
    Flag.OK: 0,
    Flag.EVANESCENT: 1,
    Flag.NEAR_CAUSTIC: 2,
    Flag.DEGENERATE_SYMMETRY: 3,
}

# Stable small-int codes used when flags are stored in arrays / CSV output.
FLAG_CODES = {flag: code for code, flag in enumerate(Flag)}
FLAGS_BY_CODE = {code: flag for flag, code in FLAG_CODES.items()}


def worst_flag(*flags: Flag) -> Flag:
    """The most severe of the given flags (OK < EVANESCENT < NEAR_CAUSTIC < ...)."""
    return max(flags, key=_FLAG_SEVERITY.__getitem__)


@dataclass(frozen=True)
class ChordValue:
    """A chord-function value together with its quality flag.

    The real part is the even ("cosine") component and the imaginary part the
    odd ("sine") component of the chord function; both are exposed as short
    properties because downstream code reasons about them separately.
    """

    value: complex
    flag: Flag = Flag.OK

    @property
    def c(self) -> float:
        return self.value.real

    @property
    def s(self) -> float:
        return self.value.imag

    def __complex__(self) -> complex:
        return complex(self.value)


def wedge(a, b):
    """Symplectic wedge a ∧ b = a_p * b_q - a_q * b_p of two (p, q) vectors.

    Antisymmetric and bilinear; accepts any indexable pair, including numpy
    arrays in the components, and broadcasts elementwise in that case.
    """
    return a[0] * b[1] - a[1] * b[0]


def translate(x, xi) -> PhasePoint:
    """Rigid translation of a phase point by a chord (group action)."""
    return PhasePoint(x[0] + xi[0], x[1] + xi[1])
