"""Symmetric entry-law families for random-matrix experiments.

Each family is described by an immutable DistributionSpec carrying the
family tag, its shape parameters, and a positive scale.  Module-level
operations provide the density, CDF, exact sampler, characteristic
function, and — where a closed form exists — the marginal density of a
K-fold product of independent draws.

Families (canonical tags, with accepted aliases in parentheses):

    uniform             flat on [-scale, scale]
    gaussian            standard normal
    laplace             (1/2) e^{-|x|}
    symmetric_gamma     |x|^{gamma-1} e^{-|x|} / 2 Gamma(gamma)   ("gamma")
    symmetric_beta      ~ (1-|x|)^mu |x|^nu on [-1, 1]            ("beta")
    smooth_bounded      ~ (1-x^2)^eta on [-1, 1]                  ("smooth")
    cauchy              1 / pi (1+x^2)
    powerlaw            ~ 1 / (1+x^{2a}),  a >= 1
    bernoulli_pm1       +/-1 with probability 1/2 each            ("bernoulli")
    lognormal_product   symmetrized log-normal of a K-fold product ("lognormal")

All densities are even, so characteristic functions are real-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._quad import _osc_tail, geometric_mesh, panel_integrate
from .rng import RandomStream
from .special import bessel_k0, erf_vec, log_gamma, reg_beta_inc, reg_gamma_p

__all__ = [
    "DistributionSpec",
    "ProductMarginal",
    "ParameterDomainError",
    "DensityUnavailable",
    "uniform",
    "gaussian",
    "laplace",
    "symmetric_gamma",
    "symmetric_beta",
    "smooth_bounded",
    "cauchy",
    "powerlaw",
    "bernoulli_pm1",
    "lognormal_product",
    "lognormal_from_base",
    "pdf",
    "cdf",
    "sample",
    "characteristic_function",
    "product_marginal_pdf",
    "support_bound",
    "spec_to_dict",
    "spec_from_dict",
]


class ParameterDomainError(ValueError):
    """A family parameter is outside its admissible range."""


class DensityUnavailable(ValueError):
    """No closed-form density exists; callers must fall back to sampling."""


_ALIASES = {
    "gamma": "symmetric_gamma",
    "beta": "symmetric_beta",
    "smooth": "smooth_bounded",
    "bernoulli": "bernoulli_pm1",
    "lognormal": "lognormal_product",
}

# family -> ordered parameter names
_PARAMS = {
    "uniform": (),
    "gaussian": (),
    "laplace": (),
    "symmetric_gamma": ("gamma",),
    "symmetric_beta": ("mu", "nu"),
    "smooth_bounded": ("eta",),
    "cauchy": (),
    "powerlaw": ("a",),
    "bernoulli_pm1": (),
    "lognormal_product": ("mu_log", "sigma_log", "K"),
}


def _validate(family: str, params: dict) -> None:
    if family == "symmetric_gamma" and not params["gamma"] > 0.0:
        raise ParameterDomainError("symmetric_gamma requires gamma > 0")
    if family == "symmetric_beta" and not (params["mu"] > -1.0 and params["nu"] > -1.0):
        raise ParameterDomainError("symmetric_beta requires mu > -1 and nu > -1")
    if family == "smooth_bounded" and not params["eta"] > -1.0:
        raise ParameterDomainError("smooth_bounded requires eta > -1")
    if family == "powerlaw" and not params["a"] >= 1.0:
        raise ParameterDomainError("powerlaw requires a >= 1")
    if family == "lognormal_product":
        if not params["sigma_log"] > 0.0:
            raise ParameterDomainError("lognormal_product requires sigma_log > 0")
        if int(params["K"]) != params["K"] or params["K"] < 1:
            raise ParameterDomainError("lognormal_product requires integer K >= 1")


@dataclass(frozen=True)
class DistributionSpec:
    """One symmetric entry law: family tag + shape parameters + scale."""

    family: str
    params: dict = field(default_factory=dict)
    scale: float = 1.0

    def __post_init__(self):
        fam = _ALIASES.get(self.family, self.family)
        if fam not in _PARAMS:
            raise ParameterDomainError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        expected = set(_PARAMS[fam])
        got = set(self.params)
        if got != expected:
            raise ParameterDomainError(
                f"{fam} expects parameters {sorted(expected)}, got {sorted(got)}"
            )
        object.__setattr__(self, "params", dict(self.params))
        if not self.scale > 0.0:
            raise ParameterDomainError("scale must be positive")
        _validate(fam, self.params)

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items())), self.scale))

    @property
    def bounded(self) -> bool:
        return self.family in ("uniform", "symmetric_beta", "smooth_bounded",
                               "bernoulli_pm1")


def uniform(scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("uniform", scale=scale)


def gaussian(scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("gaussian", scale=scale)


def laplace(scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("laplace", scale=scale)


def symmetric_gamma(gamma: float, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("symmetric_gamma", {"gamma": float(gamma)}, scale)


def symmetric_beta(mu: float, nu: float, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("symmetric_beta", {"mu": float(mu), "nu": float(nu)}, scale)


def smooth_bounded(eta: float, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("smooth_bounded", {"eta": float(eta)}, scale)


def cauchy(scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("cauchy", scale=scale)


def powerlaw(a: float, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("powerlaw", {"a": float(a)}, scale)


def bernoulli_pm1(scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec("bernoulli_pm1", scale=scale)


def lognormal_product(mu_log: float, sigma_log: float, K: int = 1,
                      scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec(
        "lognormal_product",
        {"mu_log": float(mu_log), "sigma_log": float(sigma_log), "K": int(K)},
        scale,
    )


def support_bound(spec: DistributionSpec) -> float:
    """Half-width u of the support: scale for bounded families, inf otherwise."""
    return spec.scale if spec.bounded else math.inf


# ---------------------------------------------------------------------------
# Density and CDF.
# ---------------------------------------------------------------------------


def _norm_const(spec: DistributionSpec) -> float:
    """Normalization prefactor of the unit-scale density (log-Gamma based)."""
    f, p = spec.family, spec.params
    if f == "symmetric_beta":
        return 0.5 * math.exp(
            log_gamma(p["mu"] + p["nu"] + 2.0)
            - log_gamma(p["mu"] + 1.0) - log_gamma(p["nu"] + 1.0)
        )
    if f == "smooth_bounded":
        return math.exp(log_gamma(p["eta"] + 1.5) - log_gamma(p["eta"] + 1.0)) / math.sqrt(math.pi)
    if f == "symmetric_gamma":
        return 0.5 * math.exp(-log_gamma(p["gamma"]))
    if f == "powerlaw":
        a = p["a"]
        return a * math.sin(0.5 * math.pi / a) / math.pi
    raise KeyError(f)


def _unit_pdf(spec: DistributionSpec, y: np.ndarray) -> np.ndarray:
    """Density of the unit-scale law at y (array in, array out)."""
    f, p = spec.family, spec.params
    ay = np.abs(y)
    if f == "uniform":
        return np.where(ay <= 1.0, 0.5, 0.0)
    if f == "gaussian":
        return np.exp(-0.5 * y * y) / math.sqrt(2.0 * math.pi)
    if f == "laplace":
        return 0.5 * np.exp(-ay)
    if f == "symmetric_gamma":
        g = p["gamma"]
        out = np.zeros_like(ay)
        pos = ay > 0.0
        out[pos] = _norm_const(spec) * np.exp((g - 1.0) * np.log(ay[pos]) - ay[pos])
        if g == 1.0:
            out[~pos] = 0.5
        elif g < 1.0:
            out[~pos] = np.inf
        return out
    if f == "symmetric_beta":
        mu, nu = p["mu"], p["nu"]
        c = _norm_const(spec)
        out = np.zeros_like(ay)
        inside = ay <= 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            v = c * (1.0 - ay[inside]) ** mu * ay[inside] ** nu
        out[inside] = np.where(np.isfinite(v), v, np.inf)
        return out
    if f == "smooth_bounded":
        eta = p["eta"]
        c = _norm_const(spec)
        out = np.zeros_like(ay)
        inside = ay <= 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            v = c * (1.0 - y[inside] * y[inside]) ** eta
        out[inside] = np.where(np.isfinite(v), v, np.inf)
        return out
    if f == "cauchy":
        return 1.0 / (math.pi * (1.0 + y * y))
    if f == "powerlaw":
        a = p["a"]
        return _norm_const(spec) / (1.0 + ay ** (2.0 * a))
    if f == "bernoulli_pm1":
        # probability mass, not a density: 1/2 at each of +/-1
        return np.where(np.isclose(ay, 1.0), 0.5, 0.0)
    if f == "lognormal_product":
        m, s, K = p["mu_log"], p["sigma_log"], p["K"]
        out = np.zeros_like(ay)
        pos = ay > 0.0
        la = np.log(ay[pos])
        var = K * s * s
        out[pos] = np.exp(-0.5 * (la - K * m) ** 2 / var) / (
            2.0 * ay[pos] * math.sqrt(2.0 * math.pi * var)
        )
        return out
    raise KeyError(f)


def pdf(spec: DistributionSpec, x):
    """Density p(x); zero outside the support.  Scalar or array argument."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    y = np.atleast_1d(x) / spec.scale
    out = _unit_pdf(spec, y) / spec.scale
    return float(out[0]) if scalar else out


def _powerlaw_mag_cdf(a: float, m: np.ndarray) -> np.ndarray:
    """Integral of the power-law density from 0 to m >= 0 (numeric)."""
    c = powerlaw(a)
    out = np.empty_like(m)
    lo = m <= 1.0
    dens = lambda x: _unit_pdf(c, x)
    for i, v in enumerate(m):
        if v <= 0.0:
            out[i] = 0.0
        elif v <= 1.0:
            out[i] = panel_integrate(dens, np.linspace(0.0, v, 9))
        else:
            # tail via x = v/t, smooth on (0, 1] for a >= 1
            tail = panel_integrate(
                lambda t: dens(v / t) * v / (t * t),
                geometric_mesh(0.0, 1.0, tiny=1e-10),
            )
            out[i] = 0.5 - tail
    return out


def cdf(spec: DistributionSpec, x):
    """Cumulative distribution function F(x)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    y = np.atleast_1d(x).astype(float) / spec.scale
    f, p = spec.family, spec.params
    ay = np.abs(y)
    sgn = np.sign(y)
    if f == "uniform":
        out = np.clip(0.5 * (y + 1.0), 0.0, 1.0)
    elif f == "gaussian":
        out = 0.5 * (1.0 + erf_vec(y / math.sqrt(2.0)))
    elif f == "laplace":
        out = np.where(y < 0.0, 0.5 * np.exp(y), 1.0 - 0.5 * np.exp(-np.abs(y)))
    elif f == "symmetric_gamma":
        out = 0.5 + 0.5 * sgn * reg_gamma_p(p["gamma"], ay)
    elif f == "symmetric_beta":
        out = 0.5 + 0.5 * sgn * reg_beta_inc(p["nu"] + 1.0, p["mu"] + 1.0, np.minimum(ay, 1.0))
    elif f == "smooth_bounded":
        t = np.clip(0.5 * (y + 1.0), 0.0, 1.0)
        out = reg_beta_inc(p["eta"] + 1.0, p["eta"] + 1.0, t)
    elif f == "cauchy":
        out = 0.5 + np.arctan(y) / math.pi
    elif f == "powerlaw":
        out = 0.5 + sgn * _powerlaw_mag_cdf(p["a"], ay)
    elif f == "bernoulli_pm1":
        out = np.where(y < -1.0, 0.0, np.where(y < 1.0, 0.5, 1.0))
    elif f == "lognormal_product":
        m, s, K = p["mu_log"], p["sigma_log"], p["K"]
        out = np.full_like(y, 0.5)
        pos = ay > 0.0
        z = (np.log(ay[pos]) - K * m) / (s * math.sqrt(K))
        half = 0.5 * (1.0 + erf_vec(z / math.sqrt(2.0)))
        out[pos] = 0.5 + sgn[pos] * 0.5 * half
    else:
        raise KeyError(f)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Sampling.
# ---------------------------------------------------------------------------

_POWERLAW_ENVELOPE: dict[float, float] = {}


def _powerlaw_envelope(a: float) -> float:
    """sup_x p_a(x) / cauchy(x), the rejection constant against a Cauchy envelope."""
    if a not in _POWERLAW_ENVELOPE:
        A = a * math.sin(0.5 * math.pi / a)
        ratio = lambda x: A * (1.0 + x * x) / (1.0 + x ** (2.0 * a))
        xs = np.linspace(0.0, 3.0, 3001)
        i = int(np.argmax(ratio(xs)))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
        for _ in range(60):  # golden-free bisection on a unimodal bump
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if ratio(m1) < ratio(m2):
                lo = m1
            else:
                hi = m2
        _POWERLAW_ENVELOPE[a] = ratio(0.5 * (lo + hi)) * 1.0000001
    return _POWERLAW_ENVELOPE[a]


def _sample_powerlaw(a: float, gen: np.random.Generator, n: int) -> np.ndarray:
    M = _powerlaw_envelope(a)
    A = a * math.sin(0.5 * math.pi / a)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = int((n - filled) * M * 1.3) + 16
        x = np.tan(math.pi * (gen.random(m) - 0.5))
        # accept with prob p(x) / (M * cauchy(x))
        accept = gen.random(m) * M < A * (1.0 + x * x) / (1.0 + np.abs(x) ** (2.0 * a))
        got = x[accept]
        take = min(len(got), n - filled)
        out[filled:filled + take] = got[:take]
        filled += take
    return out


def sample(spec: DistributionSpec, stream: RandomStream, size=None):
    """Exact draws from the law.  Returns a scalar if size is None."""
    gen = stream.generator
    n = 1 if size is None else int(np.prod(size))
    f, p = spec.family, spec.params
    sign = lambda: gen.integers(0, 2, n) * 2.0 - 1.0
    if f == "uniform":
        out = gen.uniform(-1.0, 1.0, n)
    elif f == "gaussian":
        out = gen.standard_normal(n)
    elif f == "laplace":
        out = sign() * gen.standard_gamma(1.0, n)
    elif f == "symmetric_gamma":
        out = sign() * gen.standard_gamma(p["gamma"], n)
    elif f == "symmetric_beta":
        mu, nu = p["mu"], p["nu"]
        if mu == 0.0:
            # inverse-CDF of the magnitude: |x| = U^{1/(nu+1)}
            out = sign() * gen.random(n) ** (1.0 / (nu + 1.0))
        else:
            out = sign() * gen.beta(nu + 1.0, mu + 1.0, n)
    elif f == "smooth_bounded":
        eta = p["eta"]
        out = 2.0 * gen.beta(eta + 1.0, eta + 1.0, n) - 1.0
    elif f == "cauchy":
        out = np.tan(math.pi * (gen.random(n) - 0.5))
    elif f == "powerlaw":
        out = _sample_powerlaw(p["a"], gen, n)
    elif f == "bernoulli_pm1":
        out = sign()
    elif f == "lognormal_product":
        m, s, K = p["mu_log"], p["sigma_log"], p["K"]
        out = sign() * np.exp(gen.normal(K * m, s * math.sqrt(K), n))
    else:
        raise KeyError(f)
    out = out * spec.scale
    if size is None:
        return float(out[0])
    return out.reshape(size)


# ---------------------------------------------------------------------------
# Characteristic function.
# ---------------------------------------------------------------------------


def _cf_closed(spec: DistributionSpec, w: float) -> float | None:
    f, p = spec.family, spec.params
    aw = abs(w)
    if f == "gaussian":
        return math.exp(-0.5 * w * w)
    if f == "cauchy":
        return math.exp(-aw)
    if f == "laplace":
        return 1.0 / (1.0 + w * w)
    if f == "uniform":
        return math.sin(w) / w if w != 0.0 else 1.0
    if f == "bernoulli_pm1":
        return math.cos(w)
    if f == "symmetric_gamma":
        g = p["gamma"]
        return math.cos(g * math.atan(aw)) * (1.0 + w * w) ** (-0.5 * g)
    return None


def _cf_numeric(spec: DistributionSpec, w: float, tol: float) -> float:
    """2 int_0^u p(x) cos(w x) dx by panels (+ oscillatory tail if unbounded)."""
    aw = abs(w)
    dens = lambda x: _unit_pdf(spec, x)
    if spec.bounded:
        mesh = np.union1d(
            geometric_mesh(0.0, 1.0, tiny=1e-12),
            1.0 - geometric_mesh(0.0, 1.0, tiny=1e-12),
        )
        cells = max(16, 4 * int(math.ceil(aw / math.pi)))
        mesh = np.union1d(mesh, np.linspace(0.0, 1.0, cells + 1))
        return 2.0 * panel_integrate(lambda x: dens(x) * np.cos(aw * x), mesh)
    head_end = max(1.0, 2.0 * math.pi / aw) if aw > 0.0 else 8.0
    if aw == 0.0:
        # normalization check path: integrate the density itself far out
        head = panel_integrate(dens, geometric_mesh(0.0, 60.0, tiny=1e-12))
        return 2.0 * head
    cells = max(16, 4 * int(math.ceil(head_end * aw / math.pi)))
    mesh = np.union1d(geometric_mesh(0.0, head_end, tiny=1e-12),
                      np.linspace(0.0, head_end, cells + 1))
    head = panel_integrate(lambda x: dens(x) * np.cos(aw * x), mesh)
    # cos tail as a shifted sine: int_s p(x) cos(w x) dx = int p(y - pi/2w) sin(w y) dy
    shift = 0.5 * math.pi / aw
    tail, _, _ = _osc_tail(lambda y: dens(y - shift), aw, head_end + shift, 0.25 * tol)
    return 2.0 * (head + tail)


def characteristic_function(spec: DistributionSpec, omega: float,
                            tol: float = 1e-9) -> float:
    """Real-valued Fourier transform p~(omega) of the (symmetric) density."""
    w = float(omega) * spec.scale
    closed = _cf_closed(spec, w)
    if closed is not None:
        return closed
    if w == 0.0:
        return 1.0
    return _cf_numeric(spec, w, tol)


# ---------------------------------------------------------------------------
# Product marginals.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductMarginal:
    """Marginal law of z = x_1 ... x_K with i.i.d. factors from `base`."""

    base: DistributionSpec
    K: int = 1

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ParameterDomainError("ProductMarginal requires integer K >= 1")
        object.__setattr__(self, "K", int(self.K))


def product_marginal_pdf(pm: ProductMarginal, z):
    """Closed-form density of the K-fold product; DensityUnavailable otherwise.

    Closed forms: any symmetric Beta with mu = 0 (uniform included) for all K;
    Gaussian, Laplace and Cauchy bases for K = 2; log-normal products for any K.
    """
    base, K = pm.base, pm.K
    if K == 1:
        return pdf(base, z)
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    s = base.scale ** K
    y = np.atleast_1d(z).astype(float) / s
    ay = np.abs(y)
    f, p = base.family, base.params
    nu = None
    if f == "uniform":
        nu = 0.0
    elif f == "symmetric_beta" and p["mu"] == 0.0:
        nu = p["nu"]
    if nu is not None:
        out = np.zeros_like(ay)
        inside = (ay > 0.0) & (ay < 1.0)
        m = ay[inside]
        lognorm = K * math.log(nu + 1.0) - log_gamma(float(K))
        out[inside] = np.exp(lognorm + nu * np.log(m)) * (-np.log(m)) ** (K - 1) / 2.0
        out[ay == 0.0] = np.inf if (nu > 0.0 or K > 1) else 0.5
    elif f == "gaussian" and K == 2:
        out = np.where(ay > 0.0, bessel_k0(np.maximum(ay, 1e-300)) / math.pi, np.inf)
    elif f == "laplace" and K == 2:
        out = np.where(ay > 0.0, bessel_k0(2.0 * np.sqrt(np.maximum(ay, 1e-300))), np.inf)
    elif f == "cauchy" and K == 2:
        out = np.empty_like(ay)
        near1 = np.abs(ay - 1.0) < 1e-8
        zz = y[~near1] * y[~near1]
        with np.errstate(divide="ignore"):
            out[~near1] = np.log(zz) / (math.pi ** 2 * (zz - 1.0))
        out[near1] = 1.0 / math.pi ** 2
        out[ay == 0.0] = np.inf
    elif f == "lognormal_product":
        merged = lognormal_product(p["mu_log"], p["sigma_log"], p["K"] * K)
        out = _unit_pdf(merged, y)
    else:
        raise DensityUnavailable(
            f"no closed-form product marginal for base={f!r}, K={K}; use Monte Carlo"
        )
    out = out / s
    return float(out[0]) if scalar else out


_LOGNORMAL_CACHE: dict[DistributionSpec, tuple[float, float]] = {}


def lognormal_from_base(base: DistributionSpec, K: int, n_draws: int = 10_000_000,
                        seed: int = 20260823) -> DistributionSpec:
    """Log-normal surrogate for a K-fold product of `base` draws.

    (mu_log, sigma_log) default to the mean and standard deviation of
    log|x| under the base law, estimated once by Monte Carlo and cached.
    """
    if base.family == "bernoulli_pm1":
        raise ParameterDomainError("log|x| is degenerate for bernoulli_pm1")
    if base not in _LOGNORMAL_CACHE:
        stream = RandomStream(seed)
        logs = np.log(np.abs(sample(base, stream, n_draws)))
        _LOGNORMAL_CACHE[base] = (float(np.mean(logs)), float(np.std(logs)))
    m, s = _LOGNORMAL_CACHE[base]
    return lognormal_product(m, s, K)


# ---------------------------------------------------------------------------
# JSON serialization.
# ---------------------------------------------------------------------------


def spec_to_dict(spec: DistributionSpec) -> dict:
    """{"family": ..., "params": {...}, "scale": ...} per the shipped schema."""
    return {"family": spec.family, "params": dict(spec.params), "scale": spec.scale}


def spec_from_dict(obj: dict) -> DistributionSpec:
    import json
    from importlib import resources

    import jsonschema

    schema = json.loads(
        resources.files("realeig.schemas").joinpath("distribution.schema.json").read_text()
    )
    jsonschema.validate(obj, schema)
    return DistributionSpec(obj["family"], obj.get("params", {}), obj.get("scale", 1.0))
