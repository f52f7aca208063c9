"""Certified-quadrature oracle and its Fourier self-consistency checks."""

import numpy as np
import pytest

from chordscan import (ConvergenceError, CurveSpec, ExactEvaluator,
                       GridTooSmallError, QuadratureSpec, correlation_C,
                       evolved_chi, evolved_chi_grid, fock_chi_closed,
                       fourier_invariance_residual, hermite_psi, scan_grid)
from chordscan.exact import fock_chi_radial
from chordscan.gridscan import axis

HBAR = 0.1


# -- momentum eigenfunctions -------------------------------------------------


def test_hermite_psi_orthonormal():
    p = np.linspace(-6.0, 6.0, 4001)
    dp = p[1] - p[0]
    psis = [hermite_psi(n, HBAR, p) for n in range(7)]
    for a in range(7):
        for b in range(a, 7):
            overlap = np.sum(np.conj(psis[a]) * psis[b]) * dp
            assert abs(overlap - (1.0 if a == b else 0.0)) < 1e-10


def test_hermite_psi_far_tail_underflows_to_zero():
    vals = hermite_psi(12, HBAR, np.array([40.0, -55.0]))
    assert np.all(vals == 0.0)
    assert np.all(np.isfinite(vals))


def test_hermite_psi_rejects_bad_index():
    with pytest.raises(ValueError):
        hermite_psi(-1, HBAR, 0.0)


# -- closed form vs quadrature ------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 5, 10])
def test_quadrature_matches_closed_form(n):
    """At zero shear the oracle must land on exp(-r^2/4h) L_n(r^2/2h)."""
    state = CurveSpec(n=n, hbar=HBAR)
    rng = np.random.default_rng(42 + n)
    for _ in range(25):
        xi = rng.uniform(-2.0, 2.0, size=2)
        got = complex(evolved_chi(state, xi))
        want = complex(fock_chi_closed(n, HBAR, xi))
        assert abs(got - want) < 1e-10


def test_fock_chi_radial_matches_pointwise():
    rho = np.linspace(0.0, 3.0, 31)
    vals = fock_chi_radial(5, HBAR, rho)
    for r, v in zip(rho, vals):
        assert v == pytest.approx(complex(fock_chi_closed(5, HBAR, (r, 0.0))).real)


def test_normalization_at_zero_chord(sheared):
    assert complex(evolved_chi(sheared, (0.0, 0.0))) == pytest.approx(1.0, abs=1e-12)


def test_hermiticity_and_modulus_bound(sheared):
    rng = np.random.default_rng(314)
    for _ in range(40):
        xi = rng.uniform(-1.9, 1.9, size=2)
        plus = complex(evolved_chi(sheared, xi))
        minus = complex(evolved_chi(sheared, -xi))
        assert abs(minus - np.conj(plus)) < 1e-12
        assert abs(plus) <= 1.0 + 1e-10


def test_grid_matches_pointwise(sheared):
    xp = axis(-1.0, 1.0, 7)
    xq = axis(-0.8, 1.2, 6)
    values = evolved_chi_grid(sheared, xp, xq)
    assert values.shape == (7, 6)
    for i in [0, 3, 6]:
        for j in [0, 2, 5]:
            assert values[i, j] == pytest.approx(
                complex(evolved_chi(sheared, (xp[i], xq[j]))), abs=1e-12)


def test_evaluator_interface(sheared):
    ev = ExactEvaluator(sheared)
    assert ev.name == "exact"
    assert ev.state is sheared
    out = ev((0.3, -0.2))
    assert abs(complex(out)) <= 1.0
    values, flags = ev.grid(axis(-0.5, 0.5, 5), axis(-0.5, 0.5, 5))
    assert values.shape == flags.shape == (5, 5)
    assert np.all(flags == 0)  # the oracle never degrades


# -- quadrature controls -------------------------------------------------------


@pytest.mark.parametrize("kwargs", [
    dict(nodes=4), dict(half_width_mult=0.5), dict(tol=0.0), dict(tol=-1e-9),
])
def test_quadrature_spec_rejects_unusable_controls(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_starved_quadrature_raises(sheared):
    starved = QuadratureSpec(nodes=8, tol=1e-14, max_doublings=0)
    with pytest.raises(ConvergenceError):
        evolved_chi(sheared, (0.5, 0.5), quad=starved)


# -- Fourier self-consistency ---------------------------------------------------


@pytest.fixture(scope="module")
def fock1_grid():
    state = CurveSpec(n=1, hbar=HBAR)
    return scan_grid(ExactEvaluator(state), axis(-2.5, 2.5, 81),
                     axis(-2.5, 2.5, 81))


def test_fourier_invariance_of_pure_state(fock1_grid):
    """|chi|^2 of a pure state reproduces itself under the symplectic DFT."""
    assert fourier_invariance_residual(fock1_grid) < 1e-3


def test_correlation_equals_modulus_squared(fock1_grid):
    c = correlation_C(fock1_grid)
    abs2 = np.abs(fock1_grid.values) ** 2
    assert c[40, 40] == pytest.approx(1.0, abs=1e-3)  # purity at the center
    assert np.max(np.abs(c - abs2)) < 1e-3


def test_truncated_region_is_refused(ring):
    grid = scan_grid(ExactEvaluator(ring), axis(-1.0, 1.0, 21),
                     axis(-1.0, 1.0, 21))
    with pytest.raises(GridTooSmallError):
        fourier_invariance_residual(grid)
    with pytest.raises(GridTooSmallError):
        correlation_C(grid)
