"""Monte Carlo engine for real-eigenvalue statistics of matrix products.

Samples n x n matrices with i.i.d. entries, forms products in three modes
(ordinary chains with per-step Frobenius renormalization, entrywise
Hadamard products, and decorrelated reassemblies from independent
chains), counts real eigenvalues (exact discriminant for n = 2, real
Schur form otherwise), and post-processes tallies into probabilities,
expected counts, entry correlations, and saturation power-law fits.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._schur import count_real_batch
from .distributions import DistributionSpec, sample, spec_from_dict, spec_to_dict
from .rng import RandomStream

__all__ = [
    "ExperimentConfig",
    "RealCountTally",
    "CorrelationReport",
    "PowerLawFit",
    "ModelViolationError",
    "SchurConvergenceError",
    "random_matrix",
    "chain_product",
    "count_real_eigenvalues",
    "estimate_Pnk",
    "expected_real",
    "correlation_metric",
    "fit_saturation",
    "tally_rows",
    "results_to_csv",
    "config_to_dict",
    "config_from_dict",
]

MODES = ("ordinary", "hadamard", "decorrelated")
_CHUNK = 1 << 15
# rescale Hadamard/decorrelated entries only when exponents threaten
# overflow; a positive scalar multiple never changes eigenvalue reality
_LOG_SAFE = 600.0


class ModelViolationError(ValueError):
    """Data contradicts the assumed model (e.g. P-hat above the asymptote)."""


class SchurConvergenceError(RuntimeError):
    """QR iteration failed to converge for a sampled matrix."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment: product of K n x n matrices, tallied."""

    n: int
    K: int
    spec: DistributionSpec
    mode: str = "ordinary"
    samples: int = 100_000
    seed: int = 0
    eig_tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "mode", str(self.mode).lower())
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        if int(self.K) != self.K or self.K < 1:
            raise ValueError("K must be an integer >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if int(self.samples) != self.samples or self.samples <= 0:
            raise ValueError("samples must be a positive integer")
        if not (self.eig_tol > 0.0):
            raise ValueError("eig_tol must be positive")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "samples", int(self.samples))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass
class RealCountTally:
    """Histogram of real-eigenvalue counts over independent samples."""

    counts: dict = field(default_factory=dict)
    samples: int = 0
    discards: int = 0

    def add(self, k: int, count: int = 1):
        self.counts[k] = self.counts.get(k, 0) + count
        self.samples += count

    def merge(self, other: "RealCountTally") -> "RealCountTally":
        for k, c in other.counts.items():
            self.counts[k] = self.counts.get(k, 0) + c
        self.samples += other.samples
        self.discards += other.discards
        return self

    def phat(self, k: int) -> float:
        return self.counts.get(k, 0) / self.samples

    def stderr(self, k: int) -> float:
        p = self.phat(k)
        return math.sqrt(p * (1.0 - p) / self.samples)

    def expected_real(self) -> tuple[float, float]:
        """(mean real count, Monte Carlo standard error)."""
        ks = np.array(sorted(self.counts))
        ps = np.array([self.phat(int(k)) for k in ks])
        mean = float(np.dot(ks, ps))
        var = float(np.dot(ks * ks, ps) - mean * mean)
        return mean, math.sqrt(max(var, 0.0) / self.samples)


@dataclass(frozen=True)
class CorrelationReport:
    """Entry-moment correlations C_1..C_4 of 2x2 ordinary products."""

    C: tuple
    stderr: tuple
    undefined: tuple
    K: int
    samples: int
    renormalized: bool
    divided_by_K: bool


@dataclass(frozen=True)
class PowerLawFit:
    """P(K) = P_inf - C / K^theta fitted to a Monte Carlo series."""

    P_inf: float
    C: float
    theta: float
    residual: float


# ---------------------------------------------------------------------------
# Sampling and products.
# ---------------------------------------------------------------------------


def random_matrix(n: int, spec: DistributionSpec, stream: RandomStream) -> np.ndarray:
    """One n x n matrix with i.i.d. entries drawn from `spec`."""
    return sample(spec, stream, (n, n))


def _frobenius(mats: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("mij,mij->m", mats, mats))


def _ordinary_batch(spec, n, K, stream, m, renormalize=True):
    """(m, n, n) left-to-right products; returns (mats, bad_mask).

    `bad` flags samples that overflowed or collapsed to zero norm; the
    caller resamples them.  Renormalization divides by the Frobenius
    norm after every multiplication (never before the first factor).
    """
    mats = sample(spec, stream, (m, n, n))
    bad = ~np.isfinite(mats).all(axis=(1, 2))
    for _ in range(K - 1):
        fresh = sample(spec, stream, (m, n, n))
        mats = np.matmul(fresh, mats)
        bad |= ~np.isfinite(mats).all(axis=(1, 2))
        if renormalize:
            norms = _frobenius(mats)
            zero = (norms == 0.0) | ~np.isfinite(norms)
            bad |= zero
            norms[zero] = 1.0
            mats /= norms[:, None, None]
    return mats, bad


def _hadamard_batch(spec, n, K, stream, m):
    """Entrywise K-fold products via log-magnitude accumulation."""
    signs = np.ones((m, n, n))
    logs = np.zeros((m, n, n))
    with np.errstate(divide="ignore"):
        for _ in range(K):
            x = sample(spec, stream, (m, n, n))
            signs *= np.sign(x)
            logs += np.log(np.abs(x))
    top = logs.max(axis=(1, 2))
    shift = np.where(top > _LOG_SAFE, top - _LOG_SAFE, 0.0)
    vals = signs * np.exp(logs - shift[:, None, None])
    vals[logs == -np.inf] = 0.0
    bad = ~np.isfinite(vals).all(axis=(1, 2)) | (top == -np.inf)
    return vals, bad


def _decorrelated_batch(spec, n, K, stream, m):
    """Entry (i, j) taken from an independent unrenormalized chain."""
    mats = np.empty((m, n, n))
    bad = np.zeros(m, dtype=bool)
    for i in range(n):
        for j in range(n):
            chain, b = _ordinary_batch(spec, n, K, stream, m, renormalize=False)
            mats[:, i, j] = chain[:, i, j]
            bad |= b
    return mats, bad


def _batch(config: ExperimentConfig, stream: RandomStream, m: int):
    """m product matrices plus the number of resampled (discarded) draws."""
    makers = {
        "ordinary": lambda: _ordinary_batch(config.spec, config.n, config.K, stream, m),
        "hadamard": lambda: _hadamard_batch(config.spec, config.n, config.K, stream, m),
        "decorrelated": lambda: _decorrelated_batch(config.spec, config.n, config.K,
                                                    stream, m),
    }
    mats, bad = makers[config.mode]()
    discards = 0
    tries = 0
    while np.any(bad):
        tries += 1
        if tries > 64:
            raise RuntimeError("persistent overflow/underflow while resampling")
        discards += int(bad.sum())
        fresh, fbad = makers[config.mode]()
        mats[bad] = fresh[bad]
        bad &= fbad
    return mats, discards


def chain_product(config: ExperimentConfig, stream: RandomStream | None = None) -> np.ndarray:
    """A single product matrix drawn according to `config`."""
    if stream is None:
        stream = RandomStream(config.seed)
    mats, _ = _batch(config, stream, 1)
    return mats[0]


# ---------------------------------------------------------------------------
# Counting.
# ---------------------------------------------------------------------------


def count_real_eigenvalues(mat: np.ndarray, eig_tol: float = 1e-9) -> int:
    """Number of real eigenvalues (same parity as n).

    n = 2 uses the exact discriminant sign; larger n reduces to real
    Schur form and counts 1x1 blocks plus real-pair 2x2 blocks.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.isfinite(mat).all():
        raise ValueError("matrix entries must be finite")
    n = mat.shape[0]
    if n == 2:
        disc = (mat[0, 0] - mat[1, 1]) ** 2 + 4.0 * mat[0, 1] * mat[1, 0]
        return 2 if disc >= 0.0 else 0
    k = count_real_batch(mat[None, :, :], eig_tol)[0]
    if k < 0:
        raise SchurConvergenceError("QR iteration did not converge")
    return int(k)


def _count_batch(mats: np.ndarray, eig_tol: float) -> np.ndarray:
    n = mats.shape[1]
    if n == 2:
        disc = (mats[:, 0, 0] - mats[:, 1, 1]) ** 2 + 4.0 * mats[:, 0, 1] * mats[:, 1, 0]
        return np.where(disc >= 0.0, 2, 0).astype(np.int64)
    return count_real_batch(mats, eig_tol)


# ---------------------------------------------------------------------------
# Estimation.
# ---------------------------------------------------------------------------


def _worker_counts() -> int:
    try:
        w = int(os.environ.get("REALSPEC_THREADS", "1"))
    except ValueError:
        w = 1
    return max(w, 1)


def estimate_Pnk(config: ExperimentConfig) -> RealCountTally:
    """Tally of real-eigenvalue counts over `config.samples` products.

    Deterministic for a fixed (seed, REALSPEC_THREADS) pair: each worker
    owns a child stream spawned from the master seed and tallies merge
    associatively.
    """
    if config.samples < 1_000:
        raise ValueError("need at least 10^3 samples")
    workers = _worker_counts()
    streams = RandomStream(config.seed).spawn(workers)
    shares = [config.samples // workers + (1 if i < config.samples % workers else 0)
              for i in range(workers)]

    def run(stream, share) -> RealCountTally:
        tally = RealCountTally()
        done = 0
        while done < share:
            m = min(_CHUNK, share - done)
            mats, discards = _batch(config, stream, m)
            ks = _count_batch(mats, config.eig_tol)
            good = ks >= 0
            tally.discards += discards + int(np.count_nonzero(~good))
            for k, c in zip(*np.unique(ks[good], return_counts=True)):
                tally.add(int(k), int(c))
            done += m
        return tally

    total = RealCountTally()
    if workers == 1:
        total = run(streams[0], shares[0])
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(run, streams, shares):
                total.merge(part)
    if total.discards > 0.001 * total.samples:
        warnings.warn(
            f"discard rate {total.discards / total.samples:.2%} exceeds 0.1%",
            RuntimeWarning,
        )
    return total


def expected_real(config: ExperimentConfig) -> tuple[float, float]:
    """Mean number of real eigenvalues with Monte Carlo standard error."""
    return estimate_Pnk(config).expected_real()


# ---------------------------------------------------------------------------
# Entry correlations of ordinary 2x2 products.
# ---------------------------------------------------------------------------


def _signed_root(base: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """base^(1/K) with sign care; (values, undefined mask)."""
    vals = np.empty_like(base)
    undef = np.zeros(base.shape, dtype=bool)
    pos = base > 0.0
    neg = base < 0.0
    vals[pos] = base[pos] ** (1.0 / K)
    vals[base == 0.0] = 0.0
    if K % 2 == 1:
        vals[neg] = -((-base[neg]) ** (1.0 / K))
    else:
        vals[neg] = np.nan
        undef |= neg
    return vals, undef


def correlation_metric(K: int, spec: DistributionSpec, samples: int,
                       stream: RandomStream, renormalize: bool = False,
                       divide_by_K: bool = False) -> CorrelationReport:
    """C_i from covariances of entry 1 with entries i of 2x2 products.

    Products are ordinary chains, by default *without* per-step
    renormalization (renormalizing rescales the raw moments).  With
    cov_i = <x1 x_i> - <x1><x_i> the reported metric is
    (cov_i / K)^{1/K} when `divide_by_K` else cov_i^{1/K}; negative
    bases with even K are flagged undefined.  Standard errors come from
    32 equal batches.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    mats, _ = _ordinary_batch(spec, 2, K, stream, samples,
                              renormalize=renormalize)
    x = mats.reshape(samples, 4)  # row-major x1..x4

    def metric(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mean = block.mean(axis=0)
        cov = (block * block[:, :1]).mean(axis=0) - mean * mean[0]
        base = cov / K if divide_by_K else cov
        return _signed_root(base, K)

    C, undef = metric(x)
    nb = 32
    edge = samples - samples % nb
    blocks = x[:edge].reshape(nb, -1, 4)
    batch_vals = np.array([metric(b)[0] for b in blocks])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        se = np.nanstd(batch_vals, axis=0) / math.sqrt(nb)
    return CorrelationReport(
        C=tuple(float(v) for v in C),
        stderr=tuple(float(v) for v in se),
        undefined=tuple(bool(u) for u in undef),
        K=K,
        samples=samples,
        renormalized=renormalize,
        divided_by_K=divide_by_K,
    )


# ---------------------------------------------------------------------------
# Saturation fit.
# ---------------------------------------------------------------------------


def _wls_loglog(Ks, gaps, sigmas):
    """Weighted LS of log(gap) on log(K); returns (C, theta, residual)."""
    y = np.log(gaps)
    t = np.log(Ks)
    w = (gaps / sigmas) ** 2  # var of log(gap) ~ (sigma/gap)^2
    W = np.sum(w)
    tbar = np.sum(w * t) / W
    ybar = np.sum(w * y) / W
    slope = np.sum(w * (t - tbar) * (y - ybar)) / np.sum(w * (t - tbar) ** 2)
    intercept = ybar - slope * tbar
    resid = float(np.sum(w * (y - intercept - slope * t) ** 2))
    return math.exp(intercept), -slope, resid


def fit_saturation(series, fix_Pinf: float | None = None) -> PowerLawFit:
    """Fit P(K) = P_inf - C K^{-theta} to (K, phat, stderr) triples.

    With `fix_Pinf` given, a single weighted log-log regression; else
    P_inf is profiled over a 1e-3 grid above the largest phat and the
    residual-minimizing value kept.
    """
    pts = sorted(series, key=lambda r: r[0])
    if len(pts) < 5:
        raise ValueError("need at least 5 points")
    Ks = np.array([float(p[0]) for p in pts])
    ph = np.array([float(p[1]) for p in pts])
    se = np.array([float(p[2]) for p in pts])
    if np.any(np.diff(Ks) <= 0.0):
        raise ValueError("K values must be strictly increasing")
    se = np.where(se > 0.0, se, max(float(np.min(se[se > 0.0])) if np.any(se > 0.0)
                                    else 1e-12, 1e-12))

    def fit_at(pinf: float):
        gaps = pinf - ph
        if np.any(gaps <= 0.0):
            raise ModelViolationError(
                f"phat >= P_inf={pinf:g} for some K; saturation model violated"
            )
        return _wls_loglog(Ks, gaps, se)

    if fix_Pinf is not None:
        C, theta, resid = fit_at(float(fix_Pinf))
        return PowerLawFit(float(fix_Pinf), C, theta, resid)
    top = float(np.max(ph))
    grid = np.arange(math.floor(top * 1000 + 2) / 1000, 1.0, 1e-3)
    best = None
    for pinf in grid:
        try:
            C, theta, resid = fit_at(float(pinf))
        except ModelViolationError:
            continue
        if best is None or resid < best[3]:
            best = (float(pinf), C, theta, resid)
    if best is None:
        raise ModelViolationError("no admissible P_inf on the search grid")
    return PowerLawFit(*best)


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def tally_rows(config: ExperimentConfig, tally: RealCountTally) -> list[dict]:
    """CSV-ready rows: one per observed real-count k."""
    import json

    rows = []
    for k in sorted(tally.counts):
        rows.append({
            "n": config.n,
            "K": config.K,
            "mode": config.mode,
            "family": config.spec.family,
            "params": json.dumps(dict(config.spec.params), sort_keys=True),
            "k": k,
            "count": tally.counts[k],
            "samples": tally.samples,
            "phat": f"{tally.phat(k):.10g}",
            "stderr": f"{tally.stderr(k):.6g}",
            "seed": config.seed,
            "workers": _worker_counts(),
        })
    return rows


_CSV_FIELDS = ["n", "K", "mode", "family", "params", "k", "count", "samples",
               "phat", "stderr", "seed", "workers"]


def results_to_csv(rows: list[dict], path):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "n": config.n,
        "K": config.K,
        "spec": spec_to_dict(config.spec),
        "mode": config.mode,
        "samples": config.samples,
        "seed": config.seed,
        "eig_tol": config.eig_tol,
    }


def config_from_dict(obj: dict) -> ExperimentConfig:
    import json
    from importlib import resources

    import jsonschema

    pkg = resources.files("realeig.schemas")
    schema = json.loads(pkg.joinpath("experiment.schema.json").read_text())
    # inline the sibling $ref so no resolver registry is needed
    schema["properties"]["spec"] = json.loads(
        pkg.joinpath("distribution.schema.json").read_text()
    )
    jsonschema.validate(obj, schema)
    return ExperimentConfig(
        n=obj["n"],
        K=obj["K"],
        spec=spec_from_dict(obj["spec"]),
        mode=obj.get("mode", "ordinary"),
        samples=obj.get("samples", 100_000),
        seed=obj.get("seed", 0),
        eig_tol=obj.get("eig_tol", 1e-9),
    )
