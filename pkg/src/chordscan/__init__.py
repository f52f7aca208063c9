"""chordscan: chord-function scans of Bohr-quantized states.

The chord function of a state is the expectation value of the phase-space
translation by minus the chord; sampled over chords it carries the same
information as the state itself. This package evaluates it for
Bohr-quantized states of cubic-in-momentum Hamiltonians three ways -- an
exact quadrature oracle, a short-chord classical average, and a
stationary-phase composite -- and extracts the structures that make the
function useful: moments, nodal lines, and blind spots (isolated zeros).

Quick start::

    from chordscan import CurveSpec, make_evaluator

    state = CurveSpec(n=5, hbar=0.1, alpha=(0, 1, 1, 1), t=0.1)
    chi = make_evaluator("exact", state)
    print(chi((0.2, 0.3)).value)

or from the shell: ``chordscan scan --region=-1.6:1.6:161 --output field.csv``.
"""

from .blindspots import (
    BlindSpot,
    BlindSpotSearch,
    NodalCurve,
    NodalSet,
    find_blind_spots,
    first_zero_along,
    nodal_contours,
)
from .core import Chord, ChordValue, Flag, PhasePoint, wedge, worst_flag
from .curves import CurveSpec, InvalidStateError
from .evaluators import EVALUATOR_NAMES, make_evaluator
from .exact import (
    ExactEvaluator,
    GridTooSmallError,
    QuadratureSpec,
    correlation_C,
    evolved_chi,
    evolved_chi_grid,
    fock_chi_closed,
    fourier_invariance_residual,
    hermite_psi,
)
from .gridscan import ChordFieldGrid, axis, scan_grid
from .quadrature import ConvergenceError
from .semiclassical import (
    chi_semiclassical,
    chord_realizations,
    sp_full,
    sp_small,
    tangency_points,
)
from .smallchord import (
    BlindSpotEstimate,
    MomentTable,
    SecondOrderMoments,
    chi_small,
    chi_taylor,
    classical_moments,
    closest_blind_spot_estimate,
    moments_from_chi,
    second_order_from_table,
)

__all__ = [
    "BlindSpot",
    "BlindSpotEstimate",
    "BlindSpotSearch",
    "Chord",
    "ChordFieldGrid",
    "ChordValue",
    "ConvergenceError",
    "CurveSpec",
    "EVALUATOR_NAMES",
    "ExactEvaluator",
    "Flag",
    "GridTooSmallError",
    "InvalidStateError",
    "MomentTable",
    "NodalCurve",
    "NodalSet",
    "PhasePoint",
    "QuadratureSpec",
    "SecondOrderMoments",
    "axis",
    "chi_semiclassical",
    "chi_small",
    "chi_taylor",
    "chord_realizations",
    "classical_moments",
    "closest_blind_spot_estimate",
    "correlation_C",
    "evolved_chi",
    "evolved_chi_grid",
    "find_blind_spots",
    "first_zero_along",
    "fock_chi_closed",
    "fourier_invariance_residual",
    "hermite_psi",
    "make_evaluator",
    "moments_from_chi",
    "nodal_contours",
    "scan_grid",
    "second_order_from_table",
    "sp_full",
    "sp_small",
    "tangency_points",
    "wedge",
    "worst_flag",
]

__version__ = "0.1.0"
