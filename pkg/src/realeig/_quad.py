"""Low-level quadrature building blocks.

Panel-based Gauss-Legendre rules on explicit meshes, a bisection-adaptive
driver, graded/geometric mesh builders for endpoint singularities, and a
half-period partition with Euler acceleration for slowly decaying
oscillatory integrals of the form  int_0^inf g(w) sin(t w) / w dw.

Integrands are expected to be numpy-vectorized.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "QuadratureError",
    "gl_nodes",
    "panel_integrate",
    "adaptive_integrate",
    "geometric_mesh",
    "refine_mesh",
    "sin_over_w_integral",
]


class QuadratureError(RuntimeError):
    """Raised when a requested tolerance cannot be certified."""

    def __init__(self, message: str, best: float | None = None, error: float | None = None):
        super().__init__(message)
        self.best = best
        self.error = error


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _panel_points(mesh: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """All nodes/weights for GL(order) on each cell of `mesh`, flattened."""
    x, w = gl_nodes(order)
    a = mesh[:-1]
    hw = 0.5 * np.diff(mesh)
    mid = a + hw
    nodes = (mid[:, None] + hw[:, None] * x[None, :]).ravel()
    weights = (hw[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_integrate(f, mesh: np.ndarray, order: int = 16) -> float:
    """Composite Gauss-Legendre over an explicit mesh (single f call)."""
    nodes, weights = _panel_points(np.asarray(mesh, dtype=float), order)
    return float(np.dot(weights, f(nodes)))


def panel_cumulative(f, mesh: np.ndarray, order: int = 16) -> np.ndarray:
    """Cumulative integral of f at each mesh node (starting at 0)."""
    mesh = np.asarray(mesh, dtype=float)
    x, w = gl_nodes(order)
    hw = 0.5 * np.diff(mesh)
    mid = mesh[:-1] + hw
    nodes = mid[:, None] + hw[:, None] * x[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    panels = hw * (vals @ w)
    return np.concatenate([[0.0], np.cumsum(panels)])


def adaptive_integrate(
    f,
    a: float,
    b: float,
    tol: float,
    order: int = 16,
    max_levels: int = 14,
    initial_cells: int = 8,
) -> tuple[float, float, int]:
    """Adaptive composite GL by uniform-in-cell bisection.

    Returns (value, error_estimate, n_evaluations).  Cells whose
    refine-by-two correction exceeds their share of `tol` are split.
    """
    cells = [(a + (b - a) * i / initial_cells, a + (b - a) * (i + 1) / initial_cells)
             for i in range(initial_cells)]
    total = 0.0
    err = 0.0
    evals = 0
    level = 0
    while cells and level <= max_levels:
        next_cells = []
        coarse_vals = []
        fine_vals = []
        for lo, hi in cells:
            coarse = panel_integrate(f, np.array([lo, hi]), order)
            mid = 0.5 * (lo + hi)
            fine = panel_integrate(f, np.array([lo, mid, hi]), order)
            evals += 3 * order
            coarse_vals.append(coarse)
            fine_vals.append(fine)
        for (lo, hi), coarse, fine in zip(cells, coarse_vals, fine_vals):
            delta = abs(fine - coarse)
            local_tol = tol * (hi - lo) / (b - a)
            if delta <= max(local_tol, 1e-16 * max(1.0, abs(fine))) or level == max_levels:
                total += fine
                err += delta
            else:
                mid = 0.5 * (lo + hi)
                next_cells.append((lo, mid))
                next_cells.append((mid, hi))
        cells = next_cells
        level += 1
    if err > 10.0 * tol:
        raise QuadratureError(
            f"adaptive quadrature did not reach tol={tol:g} (error ~ {err:g})",
            best=total,
            error=err,
        )
    return total, err, evals


def geometric_mesh(a: float, b: float, tiny: float = 1e-14, ratio: float = 1.6,
                   linear_cells: int = 0) -> np.ndarray:
    """Mesh on [a, b] geometrically graded toward `a` (a may be 0).

    The first node is placed at a + tiny*(b-a) so endpoint singularities at
    `a` are truncated, with successive cells growing by `ratio`.
    """
    span = b - a
    pts = [a + tiny * span]
    while pts[-1] < b:
        step = (pts[-1] - a) * (ratio - 1.0)
        pts.append(min(pts[-1] + max(step, tiny * span), b))
    mesh = np.array(pts)
    if linear_cells > 1:
        # subdivide the final (largest) cells linearly for smooth bulk
        mesh = np.unique(np.concatenate([mesh, np.linspace(a + 0.1 * span, b, linear_cells)]))
    return mesh


def refine_mesh(mesh: np.ndarray, factor: int = 2) -> np.ndarray:
    """Insert factor-1 equally spaced points into each cell."""
    mesh = np.asarray(mesh, dtype=float)
    extra = []
    for k in range(1, factor):
        extra.append(mesh[:-1] + np.diff(mesh) * k / factor)
    return np.unique(np.concatenate([mesh] + extra))


def _wynn_epsilon(partial_sums: np.ndarray) -> tuple[float, float]:
    """Wynn's epsilon extrapolation of a partial-sum sequence.

    Handles the mixed alternating/monotone tails produced by multi-frequency
    oscillatory integrands.  Returns (limit, error_estimate); the estimate is
    the spread of the last few even-column entries (with a safety factor).
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    eps_prev2 = np.zeros(n + 1)  # epsilon_{-1} column
    eps_prev1 = s.copy()  # epsilon_0 column
    even_tail = [s[-1]]
    col = eps_prev1
    for _ in range(n - 1):
        diff = col[1:] - col[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = eps_prev2[1:len(col)] + 1.0 / diff
        nxt = np.where(np.isfinite(nxt), nxt, col[1:])
        eps_prev2, col = col, nxt
        if len(col) == 0:
            break
        # even-indexed columns are the sequence-to-limit approximants
        if (n - len(col)) % 2 == 0:
            even_tail.append(col[-1])
    even_tail = [v for v in even_tail if np.isfinite(v)]
    best = even_tail[-1]
    if len(even_tail) >= 3:
        err = 4.0 * (abs(even_tail[-1] - even_tail[-2]) + abs(even_tail[-2] - even_tail[-3]))
    elif len(even_tail) == 2:
        err = 10.0 * abs(even_tail[-1] - even_tail[-2])
    else:
        err = abs(best)
    return best, err + 1e-16 * abs(best)


def _osc_tail(env, nu: float, start: float, tol: float, order: int = 16,
              max_half_periods: int = 240) -> tuple[float, float, int]:
    """int_start^inf env(w) * sin(nu*w) dw by half-period partition + Wynn.

    `env` must be smooth and non-oscillatory (it may be a constant); each
    half-period contribution then alternates in sign, which the epsilon
    algorithm accelerates reliably.
    """
    if nu == 0.0:
        return 0.0, 0.0, 0
    sgn = 1.0 if nu > 0.0 else -1.0
    nu = abs(nu)
    h = math.pi / nu
    contributions = []
    evals = 0
    best = err = 0.0
    for k in range(max_half_periods):
        a = start + k * h
        # subdivide wide cells so a decaying envelope is resolved
        ratio = (a + h) / a
        n_sub = max(1, min(64, int(math.ceil(4.0 * math.log2(ratio)))))
        if ratio > 4.0:
            mesh = np.geomspace(a, a + h, n_sub + 1)
        else:
            mesh = np.linspace(a, a + h, n_sub + 1)
        val = panel_integrate(lambda w: env(w) * np.sin(nu * w), mesh, order)
        evals += n_sub * order
        contributions.append(val)
        # rapidly decaying envelopes finish without acceleration (Wynn's
        # epsilon table degenerates when successive terms are ~equal tiny)
        if k >= 2 and all(abs(c) < 0.05 * tol for c in contributions[-3:]):
            tail_bound = 2.0 * max(abs(c) for c in contributions[-3:])
            return sgn * float(np.sum(contributions)), tail_bound, evals
        if k >= 7 and k % 2 == 1:
            best, err = _wynn_epsilon(np.cumsum(contributions))
            if err <= tol:
                return sgn * best, err, evals
    if err > tol:
        raise QuadratureError(
            f"oscillatory tail failed to reach tol={tol:g} (error ~ {err:g})",
            best=sgn * best,
            error=err,
        )
    return sgn * best, err, evals


def sin_over_w_integral(g, t: float, tol: float = 1e-9, order: int = 16,
                        components=None, split: float = None,
                        head_freq: float = 0.0) -> tuple[float, float, int]:
    """int_0^inf g(w) * sin(t*w) / w dw for t > 0.

    The head [0, split] is integrated directly.  For the tail, `components`
    decomposes g as sum_i env_i(w) * cos(c_i * w) with smooth envelopes
    (list of (env, c) pairs; default a single (g, 0) component).  Each
    cos(c w) * sin(t w) product is expanded into pure sine frequencies whose
    half-period series alternate, so Wynn acceleration applies even when g
    itself oscillates (e.g. cos^2 w or (sin w / w)^2).  `head_freq` is a
    resolution hint for additional variation of g on the head interval
    (chirped envelopes whose frequency is not captured by `components`).
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    if components is None:
        components = [(g, 0.0)]
    if split is None:
        # one sine period when that is short; for small t cap the head so
        # the envelope (unit variation scale) stays resolved and leave the
        # long first half-periods to the subdividing tail rule
        split = max(1.0, min(2.0 * math.pi / t, 32.0))

    def head_integrand(w):
        w = np.asarray(w, dtype=float)
        out = np.empty_like(w)
        small = np.abs(w) < 1e-12
        ws = w[~small]
        out[~small] = g(ws) * np.sin(t * ws) / ws
        if np.any(small):
            out[small] = g(np.maximum(w[small], 1e-12)) * t
        return out

    max_freq = max([t, head_freq, 1.0] + [t + abs(c) for _, c in components])
    n_head = max(8, int(math.ceil(split * max_freq / math.pi)) * 4)
    head = panel_integrate(head_integrand, np.linspace(0.0, split, n_head + 1), order)
    evals = n_head * order
    total = head
    err_total = 0.0
    for env, c in components:
        # env(w) cos(c w) sin(t w)/w = env(w)/(2w) [sin((t+c)w) + sin((t-c)w)]
        if c == 0.0:
            pieces = [(lambda w, e=env: e(w) / w, t)]
        else:
            pieces = [
                (lambda w, e=env: e(w) / (2.0 * w), t + c),
                (lambda w, e=env: e(w) / (2.0 * w), t - c),
            ]
        for piece_env, nu in pieces:
            val, err, ev = _osc_tail(piece_env, nu, split, tol / (2 * len(components)))
            total += val
            err_total += err
            evals += ev
    return total, err_total, evals
