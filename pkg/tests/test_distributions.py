"""Entry-law families: densities, cdfs, samplers, characteristic functions."""

import json
import math
from importlib import resources

import numpy as np
import pytest
import scipy.integrate as spi
import scipy.special as sps
import scipy.stats as sts

from realeig.distributions import (DensityUnavailable, DistributionSpec,
                                   ParameterDomainError, ProductMarginal,
                                   bernoulli_pm1, cauchy, cdf,
                                   characteristic_function, gaussian, laplace,
                                   lognormal_product, pdf, powerlaw,
                                   product_marginal_pdf, sample,
                                   smooth_bounded, spec_from_dict,
                                   spec_to_dict, support_bound,
                                   symmetric_beta, symmetric_gamma, uniform)
from realeig.rng import RandomStream

ALL_SPECS = [
    uniform(),
    gaussian(),
    laplace(),
    symmetric_gamma(0.5),
    symmetric_gamma(3.0),
    symmetric_beta(1.0, 0.0),
    symmetric_beta(0.5, -0.3),
    smooth_bounded(1.0),
    smooth_bounded(-0.5),
    cauchy(),
    powerlaw(2.0),
    lognormal_product(0.0, 1.0, 2),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family + str(s.params))
def test_density_normalizes_to_one(spec):
    u = support_bound(spec)
    hi = u if math.isfinite(u) else np.inf
    total, _ = spi.quad(lambda x: pdf(spec, x), 0, hi, limit=400,
                        points=[0, 1] if math.isfinite(u) else None)
    assert abs(2.0 * total - 1.0) < 1e-8


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family + str(s.params))
def test_cdf_is_integral_of_pdf(spec):
    for x in (0.2, 0.9, 2.5):
        part, _ = spi.quad(lambda v: pdf(spec, v), 0, x, limit=400)
        assert abs(cdf(spec, x) - (0.5 + part)) < 1e-8
        assert abs(cdf(spec, -x) - (0.5 - part)) < 1e-8


@pytest.mark.parametrize("spec,frozen", [
    (gaussian(), sts.norm()),
    (laplace(), sts.laplace()),
    (uniform(), sts.uniform(-1, 2)),
    (cauchy(), sts.cauchy()),
])
def test_samples_match_scipy_law(spec, frozen):
    x = sample(spec, RandomStream(5), 40_000)
    stat, pval = sts.kstest(x, frozen.cdf)
    assert pval > 1e-4


def test_sample_symmetric_gamma_matches_cdf():
    spec = symmetric_gamma(0.25)
    x = sample(spec, RandomStream(6), 40_000)
    stat, pval = sts.kstest(x, lambda v: cdf(spec, v))
    assert pval > 1e-4


def test_sample_powerlaw_matches_cdf():
    spec = powerlaw(2.0)
    x = sample(spec, RandomStream(7), 40_000)
    stat, pval = sts.kstest(x, lambda v: cdf(spec, v))
    assert pval > 1e-4


def test_bernoulli_support():
    x = sample(bernoulli_pm1(), RandomStream(8), 1000)
    assert set(np.unique(x)) == {-1.0, 1.0}


def test_sample_shapes():
    x = sample(gaussian(), RandomStream(9), (3, 4, 5))
    assert x.shape == (3, 4, 5)
    assert np.isscalar(sample(gaussian(), RandomStream(9)))


@pytest.mark.parametrize("spec", [uniform(), gaussian(), laplace(),
                                  symmetric_gamma(0.5), symmetric_beta(2.0, 1.0),
                                  cauchy(), bernoulli_pm1()],
                         ids=lambda s: s.family)
def test_characteristic_function_vs_numeric_fourier(spec):
    # independent oracle: direct cosine transform of the density
    for w in (0.3, 1.0, 4.0):
        if spec.family == "bernoulli_pm1":
            ref = math.cos(w)
        elif math.isfinite(support_bound(spec)):
            ref, _ = spi.quad(lambda x: 2.0 * pdf(spec, x) * math.cos(w * x),
                              0, support_bound(spec), limit=600)
        else:
            # head by ordinary quad (integrable singularities at 0),
            # tail by QUADPACK's Fourier rule (slowly decaying laws)
            head, _ = spi.quad(lambda x: 2.0 * pdf(spec, x) * math.cos(w * x),
                               0, 1, limit=600)
            tail, _ = spi.quad(lambda x: 2.0 * pdf(spec, x), 1, np.inf,
                               weight="cos", wvar=w, limit=600)
            ref = head + tail
        assert abs(characteristic_function(spec, w) - ref) < 1e-7


def test_scale_parameter_consistency():
    base, scaled = laplace(), laplace(scale=2.5)
    x = 1.3
    assert abs(pdf(scaled, x) - pdf(base, x / 2.5) / 2.5) < 1e-14
    assert abs(cdf(scaled, x) - cdf(base, x / 2.5)) < 1e-14
    assert abs(characteristic_function(scaled, 0.7)
               - characteristic_function(base, 0.7 * 2.5)) < 1e-12


# ---------------------------------------------------------------------------
# Product marginals.
# ---------------------------------------------------------------------------


def test_gaussian_product_marginal_is_bessel():
    pm = ProductMarginal(gaussian(), 2)
    z = np.array([0.1, 0.5, 1.0, 2.0])
    assert np.allclose(product_marginal_pdf(pm, z), sps.k0(z) / math.pi,
                       rtol=1e-10)
    # spot value: K0(1)/pi
    assert abs(product_marginal_pdf(pm, 1.0) - 0.134016241017) < 1e-10


def test_laplace_product_marginal_is_bessel():
    pm = ProductMarginal(laplace(), 2)
    z = np.array([0.2, 1.0, 3.0])
    assert np.allclose(product_marginal_pdf(pm, z),
                       sps.k0(2.0 * np.sqrt(z)), rtol=1e-10)


def test_cauchy_product_marginal_closed_form():
    pm = ProductMarginal(cauchy(), 2)
    z = np.array([0.3, 2.0, 10.0])
    ref = np.log(z ** 2) / (math.pi ** 2 * (z ** 2 - 1.0))
    assert np.allclose(product_marginal_pdf(pm, z), ref, rtol=1e-10)


@pytest.mark.parametrize("K", [2, 3, 5])
def test_uniform_product_marginal_log_power(K):
    pm = ProductMarginal(uniform(), K)
    z = np.array([0.05, 0.3, 0.9])
    ref = 0.5 * np.log(1.0 / z) ** (K - 1) / math.factorial(K - 1)
    assert np.allclose(product_marginal_pdf(pm, z), ref, rtol=1e-12)


@pytest.mark.parametrize("K", [2, 4])
def test_product_marginal_vs_monte_carlo(K):
    # histogram of sampled K-fold products against the closed form
    pm = ProductMarginal(uniform(), K)
    gen = RandomStream(77).generator
    z = np.abs(np.prod(gen.uniform(-1, 1, (200_000, K)), axis=1))
    edges = np.linspace(0.05, 0.95, 10)
    counts, _ = np.histogram(z, bins=edges)
    hist = counts / (len(z) * np.diff(edges))  # not renormalized to the window
    # bin-averaged folded density (the log-power law is steep near 0)
    fine = np.linspace(edges[:-1], edges[1:], 41, axis=1)
    ref = np.trapezoid(2.0 * product_marginal_pdf(pm, fine), fine, axis=1) / np.diff(edges)
    assert np.all(np.abs(hist - ref) < 6.0 * np.sqrt(ref / (200_000 * np.diff(edges))) + 0.01)


def test_product_marginal_unavailable():
    with pytest.raises(DensityUnavailable):
        product_marginal_pdf(ProductMarginal(gaussian(), 3), 0.5)


# ---------------------------------------------------------------------------
# Validation and serialization.
# ---------------------------------------------------------------------------


def test_parameter_domain_errors():
    with pytest.raises(ParameterDomainError):
        symmetric_gamma(-0.1)
    with pytest.raises(ParameterDomainError):
        symmetric_beta(0.0, -1.0)
    with pytest.raises(ParameterDomainError):
        powerlaw(0.5)
    with pytest.raises(ParameterDomainError):
        DistributionSpec("gaussian", params={"bogus": 1})
    with pytest.raises(ParameterDomainError):
        DistributionSpec("no_such_family")


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family + str(s.params))
def test_spec_dict_round_trip(spec):
    assert spec_from_dict(spec_to_dict(spec)) == spec


def test_spec_dict_validates_against_schema():
    import jsonschema

    schema = json.loads(resources.files("realeig.schemas")
                        .joinpath("distribution.schema.json").read_text())
    for spec in ALL_SPECS:
        jsonschema.validate(spec_to_dict(spec), schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"family": "gaussian", "scale": -1.0}, schema)
