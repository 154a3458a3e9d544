"""Deterministic evaluation of the real-eigenvalue probability for 2x2 matrices.

Both master representations of P_{2,2} are implemented: the convolution
route (difference-law CDF Q integrated against the two off-diagonal
magnitudes) and the characteristic-function route (oscillatory frequency
integral).  The outer double integral over the off-diagonal magnitudes is
reduced to one dimension when the density is a pure power on [0, 1]
(the measure then factors through x*y); otherwise it is evaluated as a
2-D tensor-product Gauss-Legendre rule on graded meshes, with unbounded
supports handled by truncation at a tail quantile (light tails) or the
algebraic map x = s/(1-s) (heavy tails).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import (
    QuadratureError,
    _panel_points,
    geometric_mesh,
    panel_integrate,
    refine_mesh,
    sin_over_w_integral,
)
from .analytic import ConvolutionDensity, _two_sided_mesh, convolution, tabulate_convolution
from .distributions import (
    DensityUnavailable,
    DistributionSpec,
    ProductMarginal,
    cdf,
    lognormal_product,
    pdf,
    product_marginal_pdf,
    support_bound,
)

__all__ = [
    "QuadratureResult",
    "UnsupportedRouteError",
    "prob_real_convolution_route",
    "prob_real_cf_route",
    "prob_real_product_law",
]

CONVOLUTION_ROUTE = "ConvolutionRoute"
CHARACTERISTIC_ROUTE = "CharacteristicRoute"

# default tolerances: tighter when the difference law is closed form
TOL_CLOSED = 1e-6
TOL_TABLE = 1e-4

_HEAVY_FAMILIES = ("cauchy", "powerlaw")


class UnsupportedRouteError(ValueError):
    """The requested route is not available for this entry law."""


@dataclass(frozen=True)
class QuadratureResult:
    """Integral-based probability with an absolute error estimate."""

    value: float
    abs_error_estimate: float
    evaluations: int
    method: str

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"probability {self.value} outside [0, 1]")


# ---------------------------------------------------------------------------
# Outer integral machinery.
# ---------------------------------------------------------------------------


def _finite_or_zero(arr: np.ndarray) -> np.ndarray:
    return np.where(np.isfinite(arr), arr, 0.0)


def _light_tail_cut(one_sided_tail, eps: float, start: float = 1.0) -> float:
    """Smallest doubling point X with tail mass beyond X at most eps."""
    x = start
    for _ in range(60):
        if one_sided_tail(x) <= eps:
            return x
        x *= 2.0
    raise QuadratureError(f"could not truncate tail below {eps:g}")


def _bulk_mesh(upper: float, fill: int = 48) -> np.ndarray:
    """Graded toward 0, linear fill through the bulk up to `upper`."""
    return np.union1d(geometric_mesh(0.0, upper, tiny=1e-12, ratio=1.5),
                      np.linspace(0.0, upper, fill)[1:])


def _tensor_double_integral(density, weight_mesh, x_of, jac_of, G, order: int = 8):
    """I = int int density(x) density(y) G(2 sqrt(x y)) dx dy on [0, X]^2.

    Returns (I, mass, mass_beyond_Gtable, evaluations); `mass` is the
    one-sided density mass captured by the rule (used for error budgets).
    """
    nodes, weights = _panel_points(weight_mesh, order)
    x = x_of(nodes)
    wp = _finite_or_zero(weights * density(x) * jac_of(nodes))
    tmax = getattr(G, "tmax", math.inf)
    total = 0.0
    beyond = 0.0
    block = 512
    for i in range(0, x.size, block):
        t = 2.0 * np.sqrt(np.outer(x[i:i + block], x))
        total += wp[i:i + block] @ G(t) @ wp
        if math.isfinite(tmax):
            beyond += (np.outer(wp[i:i + block], wp) * (t > tmax)).sum()
    return float(total), float(wp.sum()), float(beyond), x.size * x.size


def _outer_probability(density, axis, G, G_err: float, trunc_err: float,
                       tol: float, method: str) -> QuadratureResult:
    """P = 1 - 4 I with Richardson-style refine-and-compare error control."""
    mesh, x_of, jac_of = axis
    evals = 0
    prev = None
    best = None
    err = math.inf
    for _ in range(3):
        I, mass, beyond, n = _tensor_double_integral(density, mesh, x_of, jac_of, G)
        evals += n
        if prev is not None:
            tail_err = 4.0 * beyond * getattr(G, "beyond_err", 0.0)
            err = 4.0 * abs(I - prev) + 4.0 * mass * mass * G_err + trunc_err + tail_err
            best = 1.0 - 4.0 * I
            if err <= tol:
                return QuadratureResult(min(max(best, 0.0), 1.0), err, evals, method)
        prev = I
        mesh = refine_mesh(mesh)
    raise QuadratureError(
        f"outer double integral did not reach tol={tol:g} (error ~ {err:g})",
        best=best, error=err,
    )


def _power_measure_probability(nu: float, scale: float, G, G_err: float,
                               tol: float, method: str) -> QuadratureResult:
    """1-D reduction when the one-sided density is (nu+1) x^nu on [0, scale].

    The product measure x^nu y^nu dx dy pushed through m = sqrt(x y) has
    density proportional to m^{2 nu + 1} log(1/m), giving
    P = 1 - 4 (nu+1)^2 int_0^1 v^{2 nu + 1} log(1/v) G(2 scale v) dv.
    """
    c = 4.0 * (nu + 1.0) ** 2

    def f(v):
        return _finite_or_zero(v ** (2.0 * nu + 1.0) * np.log(1.0 / v)
                               * G(2.0 * scale * v))

    mesh = _two_sided_mesh(0.0, 1.0)
    coarse = panel_integrate(f, mesh, order=16)
    fine_mesh = refine_mesh(mesh)
    fine = panel_integrate(f, fine_mesh, order=16)
    evals = 16 * (len(mesh) + len(fine_mesh) - 2)
    err = c * abs(fine - coarse) + G_err
    value = 1.0 - c * fine
    if err > tol:
        raise QuadratureError(
            f"radial reduction did not reach tol={tol:g} (error ~ {err:g})",
            best=value, error=err,
        )
    return QuadratureResult(min(max(value, 0.0), 1.0), err, evals, method)


def _axis_for_spec(spec: DistributionSpec, tol: float):
    """(mesh, x_of, jac_of, truncation_error) for one positive half-axis."""
    u = support_bound(spec)
    identity = (lambda s: s, lambda s: np.ones_like(s))
    if math.isfinite(u):
        return (_two_sided_mesh(0.0, u), *identity), 0.0
    if spec.family in _HEAVY_FAMILIES:
        # algebraic map x = L s / (1 - s); exact, no truncation error
        L = spec.scale

        def x_of(s):
            return L * s / (1.0 - s)

        def jac_of(s):
            return L / (1.0 - s) ** 2

        return (_two_sided_mesh(0.0, 1.0), x_of, jac_of), 0.0
    eps = min(tol / 40.0, 1e-7)
    X = _light_tail_cut(lambda x: 1.0 - cdf(spec, x), eps, start=spec.scale)
    return (_bulk_mesh(X), *identity), 2.0 * eps


def _power_exponent(spec: DistributionSpec):
    """nu if the one-sided density is (nu+1) x^nu / scale on [0, scale]."""
    if spec.family == "uniform":
        return 0.0
    if spec.family == "symmetric_beta" and spec.params["mu"] == 0.0:
        return spec.params["nu"]
    return None


def _check_supported(spec: DistributionSpec):
    if spec.family == "smooth_bounded" and spec.params["eta"] < -0.6:
        raise UnsupportedRouteError(
            "quadrature is unstable for smooth_bounded eta < -0.6; use Monte Carlo"
        )


# ---------------------------------------------------------------------------
# Convolution route.
# ---------------------------------------------------------------------------


def _default_tol(conv: ConvolutionDensity, tol: float | None) -> float:
    if tol is not None:
        if tol <= 0.0:
            raise ValueError("tol must be positive")
        return tol
    return TOL_CLOSED if conv.form in ("closed", "discrete") else TOL_TABLE


def prob_real_convolution_route(spec: DistributionSpec,
                                tol: float | None = None) -> QuadratureResult:
    """P(both eigenvalues real) via the difference-law representation.

    P = 1 - 4 int_0^u int_0^u p(x) p(y) Q(2 sqrt(x y)) dx dy with
    Q(t) = int_0^t q and q the self-convolution density of the entry law.
    """
    _check_supported(spec)
    conv = convolution(spec)
    tol = _default_tol(conv, tol)
    G = conv.half_integral
    G_err = conv.err_estimate

    if spec.family == "bernoulli_pm1":
        # single atom at x = y = scale, one-sided mass 1/2 each axis
        value = 1.0 - float(G(2.0 * spec.scale))
        return QuadratureResult(value, G_err, 1, CONVOLUTION_ROUTE)

    nu = _power_exponent(spec)
    if nu is not None:
        return _power_measure_probability(nu, spec.scale, G, G_err, tol,
                                          CONVOLUTION_ROUTE)

    axis, trunc = _axis_for_spec(spec, tol)
    return _outer_probability(lambda x: pdf(spec, x), axis, G, G_err, trunc,
                              tol, CONVOLUTION_ROUTE)


# ---------------------------------------------------------------------------
# Characteristic-function route.
# ---------------------------------------------------------------------------


def _cf_square_components(spec: DistributionSpec):
    """(g, components, head_freq) with g(w) = |cf(w)|^2 at unit scale.

    Components decompose g into envelope * cos(c w) pieces whose sine
    expansions alternate over half-periods (see sin_over_w_integral).
    """
    f, p = spec.family, spec.params
    if f == "gaussian":
        g = lambda w: np.exp(-w * w)
        return g, [(g, 0.0)], 0.0
    if f == "cauchy":
        g = lambda w: np.exp(-2.0 * np.abs(w))
        return g, [(g, 0.0)], 0.0
    if f == "laplace":
        g = lambda w: 1.0 / (1.0 + w * w) ** 2
        return g, [(g, 0.0)], 0.0
    if f == "uniform":
        def g(w):
            w = np.asarray(w, dtype=float)
            return np.where(np.abs(w) < 1e-8, 1.0 - w * w / 3.0,
                            (np.sin(w) / np.where(w == 0.0, 1.0, w)) ** 2)

        half_sq = lambda w: 0.5 / (w * w)
        neg_half_sq = lambda w: -0.5 / (w * w)
        return g, [(half_sq, 0.0), (neg_half_sq, 2.0)], 0.0
    if f == "bernoulli_pm1":
        g = lambda w: np.cos(w) ** 2
        half = lambda w: 0.5 + 0.0 * w
        return g, [(half, 0.0), (half, 2.0)], 0.0
    if f == "symmetric_gamma":
        gamma = p["gamma"]

        def g(w):
            return np.cos(gamma * np.arctan(w)) ** 2 * (1.0 + w * w) ** (-gamma)

        return g, [(g, 0.0)], 2.0 * gamma
    raise UnsupportedRouteError(
        f"no closed-form characteristic function for family {f!r}"
    )


class _FrequencyHalfIntegral:
    """G(t) = (1/pi) int_0^inf |cf(w)|^2 sin(t w)/w dw, tabulated in t.

    Linear interpolation on a graded grid; above `tmax` the limiting
    value 1/2 is returned with `beyond_err` bounding the truncation.
    """

    def __init__(self, spec: DistributionSpec, tmax_unit: float, tol: float):
        g, components, head_freq = _cf_square_components(spec)
        s = spec.scale
        head_end = min(8.0, tmax_unit)
        # graded toward 0: several G's have t log(1/t)-type curvature there
        tgrid = np.union1d(
            geometric_mesh(0.0, head_end, tiny=1e-8, ratio=1.1),
            np.linspace(0.0, head_end, 1400)[1:],
        )
        if tmax_unit > head_end:
            tgrid = np.union1d(tgrid, np.geomspace(head_end, tmax_unit, 300))
        vals = np.empty_like(tgrid)
        worst = 0.0
        evals = 0
        for i, t in enumerate(tgrid):
            val, err, ev = sin_over_w_integral(g, float(t), tol=tol,
                                               components=components,
                                               head_freq=head_freq)
            vals[i] = val / math.pi
            worst = max(worst, err / math.pi)
            evals += ev
        # |cf|^2 scale: F_s(t) = F_1(t / s)
        self.tgrid = tgrid * s
        self.vals = vals
        self.tmax = float(self.tgrid[-1])
        self.beyond_err = abs(vals[-1] - 0.5)
        if len(vals) > 2:
            # linear-interpolation bound h^2 |G''| / 8 from divided
            # differences (the grid is non-uniform at the head/body seam)
            h0 = np.diff(self.tgrid)[:-1]
            h1 = np.diff(self.tgrid)[1:]
            second = 2.0 * ((vals[2:] - vals[1:-1]) / h1
                            - (vals[1:-1] - vals[:-2]) / h0) / (h0 + h1)
            interp_err = float(np.max(np.maximum(h0, h1) ** 2 * np.abs(second))) / 8.0
        else:
            interp_err = 0.0
        self.err = worst + interp_err
        self.evaluations = evals

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.tgrid, self.vals,
                        left=float(self.vals[0]), right=0.5)
        small = t < self.tgrid[0]
        if np.any(small):
            out = np.where(small, self.vals[0] * t / self.tgrid[0], out)
        return out


def prob_real_cf_route(spec: DistributionSpec,
                       tol: float = 1e-6) -> QuadratureResult:
    """P(both eigenvalues real) via the squared characteristic function.

    P = 1 - (4/pi) int_0^u int_0^u p(x) p(y)
              int_0^inf |cf(w)|^2 sin(2 w sqrt(x y))/w dw dx dy.
    The frequency integral is accelerated over sine half-periods; the
    outer double integral reuses the convolution-route machinery with
    G(t) = F(t)/pi in place of Q(t).
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_supported(spec)
    g, components, head_freq = _cf_square_components(spec)

    if spec.family == "bernoulli_pm1":
        val, err, ev = sin_over_w_integral(g, 2.0, tol=tol * math.pi / 4.0,
                                           components=components)
        return QuadratureResult(1.0 - val / math.pi, err / math.pi, ev,
                                CHARACTERISTIC_ROUTE)

    u = support_bound(spec)
    if math.isfinite(u):
        tmax_unit = 2.0 * u / spec.scale
    elif spec.family in _HEAVY_FAMILIES:
        tmax_unit = 400.0
    else:
        eps = min(tol / 40.0, 1e-7)
        X = _light_tail_cut(lambda x: 1.0 - cdf(spec, x), eps, start=spec.scale)
        tmax_unit = 2.0 * X / spec.scale
    G = _FrequencyHalfIntegral(spec, tmax_unit, tol=tol * math.pi / 8.0)

    nu = _power_exponent(spec)
    if nu is not None:
        res = _power_measure_probability(nu, spec.scale, G, G.err, tol,
                                         CHARACTERISTIC_ROUTE)
    else:
        axis, trunc = _axis_for_spec(spec, tol)
        res = _outer_probability(lambda x: pdf(spec, x), axis, G, G.err, trunc,
                                 tol, CHARACTERISTIC_ROUTE)
    return QuadratureResult(res.value, res.abs_error_estimate,
                            res.evaluations + G.evaluations, res.method)


# ---------------------------------------------------------------------------
# Product laws (Hadamard powers): convolution route with p = p_K.
# ---------------------------------------------------------------------------


def _product_convolution(pm: ProductMarginal):
    """(Q, q_err, support_scale) for the difference of two K-fold products."""
    base, K = pm.base, pm.K
    f, p = base.family, base.params
    s = base.scale ** K
    if f == "gaussian" and K == 2:
        # the product density's self-convolution is a Laplace law
        def Q(t):
            return 0.5 * (1.0 - np.exp(-np.asarray(t, dtype=float) / s))

        return Q, 0.0
    if f == "lognormal_product":
        merged = lognormal_product(p["mu_log"], p["sigma_log"], p["K"] * K)
        conv = convolution(merged)
        return conv.half_integral, conv.err_estimate
    dens = lambda z: product_marginal_pdf(pm, z)
    if f == "uniform" or (f == "symmetric_beta" and p["mu"] == 0.0):
        # log(1/x)^{K-1} singularity: truncated mass decays like
        # tiny * log(1/tiny)^{2K-2}, so grade much deeper than usual; the
        # difference law also piles up near z = 0 as K grows, hence the
        # tight grading ratio
        _, _, Qtab = tabulate_convolution(dens, s, singular=(0.0,), tiny=1e-40,
                                          grid_ratio=1.0 + 0.6 / K)
    elif f == "laplace" and K == 2:
        _, _, Qtab = tabulate_convolution(dens, math.inf,
                                          z_max=s * 180.0)
    elif f == "cauchy" and K == 2:
        _, _, Qtab = tabulate_convolution(dens, math.inf, z_max=s * 1e10)
    else:
        raise DensityUnavailable(
            f"no closed-form product marginal for base={f!r}, K={K}; use Monte Carlo"
        )
    err = abs(Qtab.total - 0.5) + Qtab.tail_mass
    return Qtab, err


def _product_axis(pm: ProductMarginal, tol: float):
    base, K = pm.base, pm.K
    s = base.scale ** K
    identity = (lambda t: t, lambda t: np.ones_like(t))
    u = support_bound(base)
    if math.isfinite(u):
        return (_two_sided_mesh(0.0, u ** K), *identity), 0.0
    if base.family in _HEAVY_FAMILIES or base.family == "lognormal_product":
        def x_of(t):
            return s * t / (1.0 - t)

        def jac_of(t):
            return s / (1.0 - t) ** 2

        return (_two_sided_mesh(0.0, 1.0), x_of, jac_of), 0.0
    # light-tail product marginal: numeric one-sided tail via v = X/t map
    dens = lambda z: product_marginal_pdf(pm, z)

    def tail(X):
        return panel_integrate(lambda t: dens(X / t) * X / (t * t),
                               geometric_mesh(0.0, 1.0, tiny=1e-10), order=8)

    eps = min(tol / 40.0, 1e-7)
    X = _light_tail_cut(tail, eps, start=s)
    return (_bulk_mesh(X), *identity), 2.0 * eps


def prob_real_product_law(pm: ProductMarginal,
                          tol: float | None = None) -> QuadratureResult:
    """P(both eigenvalues real) for a matrix of K-fold entrywise products.

    Runs the convolution route with the product marginal in place of the
    entry law.  Requires a closed-form product density; otherwise raises
    DensityUnavailable (Monte Carlo covers the rest).
    """
    if pm.K == 1:
        return prob_real_convolution_route(pm.base, tol)
    Q, q_err = _product_convolution(pm)
    if tol is None:
        tol = TOL_TABLE if isinstance(q_err, float) and q_err > 0.0 else TOL_CLOSED
    elif tol <= 0.0:
        raise ValueError("tol must be positive")
    base, K = pm.base, pm.K
    nu = None
    if base.family == "uniform":
        nu = 0.0
    elif base.family == "symmetric_beta" and base.params["mu"] == 0.0:
        nu = base.params["nu"]
    if nu is not None and K >= 1:
        return _product_power_probability(nu, K, base.scale ** K, Q, q_err, tol)
    axis, trunc = _product_axis(pm, tol)
    return _outer_probability(lambda z: product_marginal_pdf(pm, z), axis, Q,
                              q_err, trunc, tol, CONVOLUTION_ROUTE)


def _product_power_probability(nu: float, K: int, scale: float, G, G_err: float,
                               tol: float) -> QuadratureResult:
    """1-D reduction for K-fold products of pure-power laws on [0, 1].

    The one-sided K-product density is A x^nu log(1/x)^{K-1} / 2 with
    A = (nu+1)^K / (K-1)!.  Substituting x = e^{-alpha}, y = e^{-beta}
    and integrating over alpha + beta = const turns the double integral
    into a Beta function times a single radial integral:

        P = 1 - A^2 B(K, K) 2^{2K}
                int_0^1 v^{2 nu + 1} log(1/v)^{2K-1} G(2 s v) dv.
    """
    A = (nu + 1.0) ** K / math.gamma(K)
    log_beta = 2.0 * math.lgamma(K) - math.lgamma(2.0 * K)
    c = A * A * math.exp(2.0 * K * math.log(2.0) + log_beta)

    def f(v):
        L = np.log(1.0 / v)
        return _finite_or_zero(v ** (2.0 * nu + 1.0) * L ** (2 * K - 1)
                               * G(2.0 * scale * v))
    mesh = _two_sided_mesh(0.0, 1.0)
    coarse = panel_integrate(f, mesh, order=16)
    fine_mesh = refine_mesh(mesh)
    fine = panel_integrate(f, fine_mesh, order=16)
    evals = 16 * (len(mesh) + len(fine_mesh) - 2)
    err = c * abs(fine - coarse) + G_err
    value = 1.0 - c * fine
    if err > tol:
        raise QuadratureError(
            f"radial reduction did not reach tol={tol:g} (error ~ {err:g})",
            best=value, error=err,
        )
    return QuadratureResult(min(max(value, 0.0), 1.0), err, evals,
                            CONVOLUTION_ROUTE)
