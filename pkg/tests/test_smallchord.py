"""Short-chord route: classical averages, moment tables, ellipse estimate."""

import math

import numpy as np
import pytest
from scipy.special import j0

from chordscan import (Flag, chi_small, chi_taylor, classical_moments,
                       closest_blind_spot_estimate, make_evaluator,
                       moments_from_chi, second_order_from_table)
from chordscan.smallchord import SecondOrderMoments, chi_small_grid

# Ladder-operator / curve-average values for n = 5, hbar = 0.1 sheared for
# t = 0.1 under H = p + p^2 + p^3 (I = 0.55, r^2 = 1.1):
#   <q>   = t <H'(p)>      = t (1 + 3 I)                     = 0.265
#   <qp>  = t <p H'(p)>    = 2 t I                           = 0.11
#   <p^4> classical (3/8) r^4 = 0.45375 ; quantum (hbar^2/4)(6n^2+6n+3) = 0.4575
#   <q^2> = I + t^2 <H'^2> = 0.55 + t^2 (1 + 10 I + 9 <p^4>)
CLASSICAL_Q2 = 0.55 + 0.01 * (1 + 5.5 + 9 * 0.45375)   # 0.6558375
QUANTUM_Q2 = 0.55 + 0.01 * (1 + 5.5 + 9 * 0.4575)      # 0.656175


@pytest.mark.parametrize("s", np.linspace(0.05, 1.8, 8))
@pytest.mark.parametrize("angle", [0.0, 0.7, 2.4])
def test_ring_average_is_bessel(ring, s, angle):
    """For the unsheared ring the classical average is J0(r |xi| / hbar)."""
    xi = (s * math.cos(angle), s * math.sin(angle))
    got = complex(chi_small(ring, xi))
    assert got.imag == pytest.approx(0.0, abs=1e-12)
    assert got.real == pytest.approx(j0(ring.radius * s / ring.hbar), abs=1e-10)


def test_grid_average_matches_pointwise(sheared):
    xp = np.linspace(-1.3, 1.3, 9)
    xq = np.linspace(-0.9, 1.1, 8)
    values = chi_small_grid(sheared, xp, xq)
    rng = np.random.default_rng(5)
    for _ in range(10):
        i, j = rng.integers(0, 9), rng.integers(0, 8)
        assert values[i, j] == pytest.approx(
            complex(chi_small(sheared, (xp[i], xq[j]))), abs=1e-9)


def test_grid_average_stall_raises(sheared):
    with pytest.raises(RuntimeError):
        chi_small_grid(sheared, [0.0, 0.5], [0.0, 0.5], tol=0.0,
                       max_doublings=1)


class TestClassicalMoments:
    def test_frozen_values(self, sheared):
        m = classical_moments(sheared, order=4)
        assert m.raw(0, 0) == pytest.approx(1.0, abs=1e-12)
        assert m.raw(1, 0) == pytest.approx(0.265, abs=1e-10)
        assert m.raw(0, 1) == pytest.approx(0.0, abs=1e-12)
        assert m.raw(0, 2) == pytest.approx(0.55, abs=1e-10)
        assert m.raw(2, 0) == pytest.approx(CLASSICAL_Q2, abs=1e-9)
        assert m.raw(1, 1) == pytest.approx(0.11, abs=1e-10)
        assert m.raw(0, 4) == pytest.approx(0.45375, abs=1e-9)

    def test_mean_property(self, sheared):
        mean = classical_moments(sheared, order=2).mean
        assert mean.p == pytest.approx(0.0, abs=1e-12)
        assert mean.q == pytest.approx(0.265, abs=1e-10)

    def test_out_of_table_access(self, sheared):
        m = classical_moments(sheared, order=2)
        with pytest.raises(ValueError):
            m.raw(2, 1)
        with pytest.raises(ValueError):
            classical_moments(sheared, order=0)


class TestTaylor:
    def test_zero_chord_is_one(self, sheared):
        m = classical_moments(sheared, order=4)
        assert complex(chi_taylor(m, sheared.hbar, (0.0, 0.0))) == 1.0

    def test_matches_average_at_short_chords(self, sheared):
        # the leading truncation term is (r |xi| / hbar)^7 / 7! ~ 1e-8 here
        m = classical_moments(sheared, order=6)
        for xi in [(0.02, 0.01), (-0.015, 0.02), (0.01, -0.025)]:
            want = complex(chi_small(sheared, xi))
            got = complex(chi_taylor(m, sheared.hbar, xi))
            assert abs(got - want) < 5e-8

    def test_truncation_error_shrinks_with_order(self, sheared):
        m = classical_moments(sheared, order=6)
        xi = (0.04, 0.03)
        want = complex(chi_small(sheared, xi))
        errs = [abs(complex(chi_taylor(m, sheared.hbar, xi, order=k)) - want)
                for k in (2, 4, 6)]
        assert errs[0] > errs[1] > errs[2]

    def test_order_capped_by_table(self, sheared):
        m = classical_moments(sheared, order=2)
        with pytest.raises(ValueError):
            chi_taylor(m, sheared.hbar, (0.1, 0.1), order=4)


class TestQuantumMoments:
    def test_exact_oracle_moments(self, sheared):
        """Differentiating the oracle recovers the ladder-operator moments."""
        mom = moments_from_chi(make_evaluator("exact", sheared), sheared.hbar)
        assert mom.mean.q == pytest.approx(0.265, abs=1e-7)
        assert mom.mean.p == pytest.approx(0.0, abs=1e-8)
        assert mom.p2 == pytest.approx(0.55, abs=1e-7)
        assert mom.q2 == pytest.approx(QUANTUM_Q2, abs=1e-6)
        assert mom.pq == pytest.approx(0.11, abs=1e-6)

    def test_derivative_errors_reported(self, sheared):
        mom = moments_from_chi(make_evaluator("exact", sheared), sheared.hbar)
        assert set(mom.errors) == {"d1_xi_p", "d1_xi_q", "d2_xi_p", "d2_xi_q",
                                   "d2_diag"}
        assert all(err < 1e-8 for err in mom.errors.values())

    def test_non_hermitian_field_refused(self):
        # a real-valued exponential leaks a real first derivative
        with pytest.raises(RuntimeError, match="hermitian"):
            moments_from_chi(lambda xi: complex(np.exp(xi[0] + 0.5 * xi[1])),
                             hbar=0.1)


def test_second_order_from_table(sheared):
    table = classical_moments(sheared, order=2)
    mom = second_order_from_table(table)
    assert mom.p2 == pytest.approx(0.55, abs=1e-10)
    assert mom.q2 == pytest.approx(CLASSICAL_Q2, abs=1e-9)
    assert mom.pq == pytest.approx(0.11, abs=1e-10)
    var_q = CLASSICAL_Q2 - 0.265 ** 2
    np.testing.assert_allclose(mom.covariance(),
                               [[0.55, 0.11], [0.11, var_q]], atol=1e-9)
    assert mom.uncertainty_det() == pytest.approx(0.55 * var_q - 0.11 ** 2,
                                                  abs=1e-9)


class TestBlindSpotEstimate:
    def test_sheared_state_ellipse(self, sheared):
        mom = moments_from_chi(make_evaluator("exact", sheared), sheared.hbar)
        est = closest_blind_spot_estimate(mom, sheared.hbar)
        assert not est.degenerate
        assert est.flag is Flag.OK
        # the mean points along +q, so the aligned zero sits on the xi_q axis
        # at sqrt(2 hbar^2 / <p^2>)
        assert est.radius == pytest.approx(math.sqrt(2 * 0.01 / 0.55), rel=1e-4)
        a, b = est.spots
        assert a.xi_p == pytest.approx(-b.xi_p, abs=1e-12)
        assert a.xi_q == pytest.approx(-b.xi_q, abs=1e-12)
        assert abs(a.xi_p) < 1e-5

    def test_symmetric_state_is_degenerate(self, ring):
        mom = second_order_from_table(classical_moments(ring, order=2))
        est = closest_blind_spot_estimate(mom, ring.hbar)
        assert est.degenerate
        assert est.flag is Flag.DEGENERATE_SYMMETRY
        assert est.spots == ()
        with pytest.raises(ValueError):
            est.radius

    def test_indefinite_moments_refused(self):
        bad = SecondOrderMoments(mean=(0.0, 0.3), p2=-1.0, q2=1.0, pq=0.0)
        with pytest.raises(ValueError, match="positive definite"):
            closest_blind_spot_estimate(bad, 0.1)
