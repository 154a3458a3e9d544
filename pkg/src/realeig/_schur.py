"""Real-eigenvalue counting by real Schur form (double-shift QR).

Hessenberg reduction by Householder reflectors followed by the classic
implicit double-shift QR iteration without eigenvector accumulation.
Eigenvalues emerge as 1x1 diagonal blocks (always real) or 2x2 blocks,
whose pair is declared real when the block discriminant is at least
-eig_tol times the block's squared Frobenius norm.  Compiled with numba
so Monte Carlo loops over millions of matrices stay cheap.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_EPS = 2.220446049250313e-16


@njit(cache=True)
def hessenberg_inplace(h):
    """Householder reduction of a square matrix to upper Hessenberg form."""
    n = h.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += h[i, k] * h[i, k]
        norm = np.sqrt(norm2)
        if norm == 0.0:
            continue
        alpha = -norm if h[k + 1, k] >= 0.0 else norm
        vnorm2 = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] -= alpha
        for i in range(k + 1, n):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left: h <- (I - beta v v^T) h on rows k+1..n-1
        for j in range(k, n):
            s = 0.0
            for i in range(k + 1, n):
                s += v[i] * h[i, j]
            s *= beta
            for i in range(k + 1, n):
                h[i, j] -= s * v[i]
        # right: h <- h (I - beta v v^T) on cols k+1..n-1
        for i in range(n):
            s = 0.0
            for j in range(k + 1, n):
                s += h[i, j] * v[j]
            s *= beta
            for j in range(k + 1, n):
                h[i, j] -= s * v[j]
        for i in range(k + 2, n):
            h[i, k] = 0.0


@njit(cache=True)
def count_real_hessenberg(h, eig_tol):
    """Number of real eigenvalues of an upper Hessenberg matrix.

    Returns -1 if the QR iteration fails to converge within 30 sweeps per
    eigenvalue (exceptional ad-hoc shifts are injected every 10 stalled
    sweeps).  The 2x2-block reality test is disc >= -eig_tol * ||block||_F^2.
    """
    n = h.shape[0]
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(h[i, j])
    if anorm == 0.0:
        return n
    count = 0
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            # search for a negligible subdiagonal element
            ll = nn
            while ll > 0:
                s = abs(h[ll - 1, ll - 1]) + abs(h[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(h[ll, ll - 1]) <= _EPS * s:
                    h[ll, ll - 1] = 0.0
                    break
                ll -= 1
            x = h[nn, nn]
            if ll == nn:
                count += 1  # isolated 1x1 block: real
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if ll == nn - 1:
                # 2x2 block; disc/4 = p^2 + w is shift-invariant
                p = 0.5 * (y - x)
                q = p * p + w
                scale2 = (h[nn - 1, nn - 1] * h[nn - 1, nn - 1]
                          + h[nn - 1, nn] * h[nn - 1, nn]
                          + h[nn, nn - 1] * h[nn, nn - 1]
                          + h[nn, nn] * h[nn, nn])
                if q >= -0.25 * eig_tol * scale2:
                    count += 2
                nn -= 2
                break
            if its == 30:
                return -1
            if its == 10 or its == 20:
                # exceptional shift
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                y = 0.75 * s
                x = y
                w = -0.4375 * s * s
            its += 1
            # two consecutive small subdiagonals
            m = nn - 2
            while m >= ll:
                z = h[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / h[m + 1, m] + h[m, m + 1]
                q = h[m + 1, m + 1] - z - r - s
                r = h[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == ll:
                    break
                u = abs(h[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[m - 1, m - 1]) + abs(z) + abs(h[m + 1, m + 1]))
                if u <= _EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                h[i, i - 2] = 0.0
            for i in range(m + 3, nn + 1):
                h[i, i - 3] = 0.0
            # double QR sweep over rows ll..nn
            for k in range(m, nn):
                if k != m:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = h[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = np.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s == 0.0:
                    continue
                if k == m:
                    if ll != m:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p = h[k, j] + q * h[k + 1, j]
                    if k != nn - 1:
                        p += r * h[k + 2, j]
                        h[k + 2, j] -= p * z
                    h[k + 1, j] -= p * y
                    h[k, j] -= p * x
                mmin = nn if nn < k + 3 else k + 3
                for i in range(ll, mmin + 1):
                    p = x * h[i, k] + y * h[i, k + 1]
                    if k != nn - 1:
                        p += z * h[i, k + 2]
                        h[i, k + 2] -= p * r
                    h[i, k + 1] -= p * q
                    h[i, k] -= p
        if nn < 0:
            break
    return count


@njit(cache=True)
def count_real_schur(mat, eig_tol):
    """Real-eigenvalue count of a general square matrix (-1: no convergence)."""
    h = mat.copy()
    hessenberg_inplace(h)
    return count_real_hessenberg(h, eig_tol)


@njit(cache=True)
def count_real_batch(mats, eig_tol):
    """Counts for a stack of matrices; -1 entries mark QR failures."""
    m = mats.shape[0]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        out[i] = count_real_schur(mats[i], eig_tol)
    return out
