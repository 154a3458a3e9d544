"""Closed-form difference laws, series formulas, and the exact registry."""

import math

import numpy as np
import pytest
import scipy.integrate as spi
import scipy.special as sps

from realeig.analytic import (beta_series_probability, convolution,
                              exact_probability, gamma_asymptotic,
                              gamma_sum_probability, registry,
                              tabulate_convolution)
from realeig.distributions import (bernoulli_pm1, cauchy, gaussian, laplace,
                                   pdf, symmetric_beta, symmetric_gamma,
                                   uniform)


def _numeric_q(spec, z):
    """Oracle: density of x1 - x2 at z by direct scipy integration.

    Split at the density kinks/singularities (0 and z) because quad's
    break points do not combine with infinite bounds.
    """
    f = lambda v: pdf(spec, v) * pdf(spec, v - z)
    cuts = sorted({-np.inf, 0.0, float(z), np.inf})
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, _ = spi.quad(f, a, b, limit=800)
        total += val
    return total


@pytest.mark.parametrize("spec,zs", [
    (uniform(), [0.3, 1.0, 1.7]),
    (gaussian(), [0.2, 1.5, 4.0]),
    (laplace(), [0.1, 1.0, 5.0]),
    (cauchy(), [0.5, 2.0, 20.0]),
    (symmetric_gamma(0.5), [0.05, 0.8, 3.0]),
    (symmetric_gamma(2.0), [0.3, 2.0, 8.0]),
], ids=lambda v: str(getattr(v, "family", v)))
def test_difference_density_against_scipy(spec, zs):
    conv = convolution(spec)
    for z in zs:
        assert abs(conv.density(z) - _numeric_q(spec, z)) < 5e-7


@pytest.mark.parametrize("spec", [uniform(), gaussian(), laplace(), cauchy(),
                                  symmetric_gamma(0.5), symmetric_beta(0.0, 2.0)],
                         ids=lambda s: s.family)
def test_difference_cdf_consistent_with_density(spec):
    conv = convolution(spec)
    for t in (0.4, 1.1, 2.7):
        part, _ = spi.quad(conv.density, 0, t, limit=400)
        # the symmetrized-Gamma table and quad's handling of the log
        # singularity at 0 each contribute ~1e-6
        assert abs(conv.half_integral(t) - part) < 5e-6


def test_difference_cdf_total_mass_half():
    for spec in (uniform(), gaussian(), laplace(), symmetric_gamma(0.5)):
        conv = convolution(spec)
        big = 60.0 if not spec.bounded else 2.0 * spec.scale
        assert abs(conv.half_integral(big) - 0.5) < 3e-6


def test_bernoulli_difference_atoms():
    # difference of two +-1 draws: mass 1/2 at 0, 1/4 at each of +-2;
    # the boundary atom at |z| = 2 enters Q with half weight
    conv = convolution(bernoulli_pm1())
    assert conv.half_integral(1.0) == 0.25
    assert conv.half_integral(2.0) == 0.375
    assert conv.half_integral(3.0) == 0.5


def test_tabulated_convolution_matches_closed_form():
    _, _, half = tabulate_convolution(
        lambda x: np.where(np.abs(x) <= 1.0, 0.5, 0.0), 1.0)
    for t in (0.2, 0.9, 1.6):
        exact = t - t * t / 4.0  # triangular law cdf on one side, halved
        assert abs(half(t) - 0.5 * exact) < 1e-6


def test_scaled_convolution():
    conv = convolution(gaussian(scale=3.0))
    ref = convolution(gaussian())
    for t in (0.5, 2.0):
        assert abs(conv.half_integral(t) - ref.half_integral(t / 3.0)) < 1e-12


# ---------------------------------------------------------------------------
# Series formulas (exact rational arithmetic inside).
# ---------------------------------------------------------------------------


def test_beta_series_small_cases_by_quadrature():
    # oracle: direct 2-d integral of the real-pair probability
    for k, label in ((1, "beta_nu_2"), (2, "beta_nu_4")):
        val = beta_series_probability(k)
        assert abs(val - exact_probability(label).value) < 1e-12


def test_beta_series_monotone_to_five_eighths():
    vals = [beta_series_probability(k) for k in (1, 2, 10, 100, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert abs(vals[-1] - 0.625) < 1e-3


def test_gamma_sum_probability_known_values():
    assert abs(gamma_sum_probability(1) - 11.0 / 15.0) < 1e-15
    assert abs(gamma_sum_probability(2) - exact_probability("gamma_2").value) < 1e-9
    assert abs(gamma_sum_probability(3) - exact_probability("gamma_3").value) < 1e-9


def test_gamma_asymptotic_gap_halves():
    # the large-shape correction scales like 1/sqrt(gamma)
    g50 = gamma_asymptotic(50.0) - 0.625
    g200 = gamma_asymptotic(200.0) - 0.625
    assert abs(g50 / g200 - 2.0) < 1e-12


# ---------------------------------------------------------------------------
# Registry.
# ---------------------------------------------------------------------------


def test_registry_closed_forms():
    assert exact_probability("uniform").value == pytest.approx(49.0 / 72.0, abs=1e-15)
    assert exact_probability("gaussian").value == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    assert exact_probability("laplace").value == pytest.approx(11.0 / 15.0, abs=1e-15)
    assert exact_probability("cauchy").value == pytest.approx(0.75, abs=1e-6)
    assert exact_probability("bernoulli").value == pytest.approx(0.625, abs=0)
    assert exact_probability("gamma_half").value == pytest.approx(
        0.625 + 1.0 / (2.0 * math.pi), abs=1e-12)
    assert exact_probability("beta_nu_minus_half").value == pytest.approx(
        (41.0 - math.pi - 2.0 * math.log(2.0)) / 48.0, abs=1e-12)
    assert exact_probability("smooth_eta_1").value == pytest.approx(
        489341.0 / 705600.0, abs=1e-15)
    assert exact_probability("gaussian_product_K2").value == pytest.approx(
        math.pi / 4.0, abs=1e-15)
    assert exact_probability("gaussian_decorrelated_K2").value == pytest.approx(
        11.0 / 15.0, abs=1e-15)


def test_registry_aliases_and_unknown():
    assert exact_probability("beta_nu_0").value == exact_probability("uniform").value
    assert exact_probability("gamma_1").value == exact_probability("laplace").value
    with pytest.raises(KeyError):
        exact_probability("nonexistent_label")


def test_registry_ginibre_all_real_column():
    # P(all eigenvalues real) for i.i.d. standard normal n x n: 2^{-n(n-1)/4}
    for n in range(2, 9):
        ev = exact_probability(f"ginibre_all_real_n{n}")
        assert ev.value == pytest.approx(2.0 ** (-n * (n - 1) / 4.0), rel=1e-12)


def test_registry_single_matrix_values_in_bound_interval():
    for label, ev in registry().items():
        if ev.category == "single_2x2":
            assert 0.625 - 1e-12 <= ev.value <= 0.875 + 1e-12, label
