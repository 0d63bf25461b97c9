"""Small dense complex linear algebra.

General eigendecomposition (closed forms for dim 2 and 3, shifted
Hessenberg QR above that), a scaling-and-squaring matrix exponential and
a bracketed scalar root finder. Everything here works on plain numpy
arrays and is written out explicitly so that it can serve as an
independent check on the library routines used elsewhere.
"""

import math

import numpy as np

from .errors import DefectiveMatrix, DimensionMismatch, NoBracket, NonSquare

MAX_DIM = 16
_EPS = np.finfo(float).eps


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise NonSquare("empty matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def sort_eigenvalues(vals, scale=1.0):
    """Return the permutation ordering eigenvalues by real part, then imaginary part.

    Real parts closer than ``1e-10 * scale`` count as ties, so that
    conjugate pairs coming out of a round-off perturbed solver are still
    ordered by their imaginary parts.
    """
    vals = np.asarray(vals)
    order = np.argsort(vals.real, kind="stable")
    gap = 1e-10 * max(scale, 1e-300)
    out = []
    i = 0
    n = len(order)
    while i < n:
        j = i + 1
        while j < n and vals.real[order[j]] - vals.real[order[j - 1]] <= gap:
            j += 1
        block = order[i:j]
        out.extend(block[np.argsort(vals.imag[block], kind="stable")])
        i = j
    return np.asarray(out, dtype=int)


# closed forms ----------------------------------------------------------

def _eig2(m):
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    half = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    # avoid cancellation in the smaller root
    big = half + disc if abs(half + disc) >= abs(half - disc) else half - disc
    det = a * d - b * c
    small = det / big if big != 0 else half - (big - half)
    vals = np.array([big, small])
    vecs = np.zeros((2, 2), dtype=complex)
    for k, lam in enumerate(vals):
        u = np.array([b, lam - a])
        w = np.array([lam - d, c])
        v = u if np.linalg.norm(u) >= np.linalg.norm(w) else w
        if np.linalg.norm(v) <= 1e-14 * max(np.abs(m).max(), 1e-300):
            v = np.eye(2, dtype=complex)[k]
        vecs[:, k] = v / np.linalg.norm(v)
    return vals, vecs


def _cubic_roots(a, b, c):
    """Roots of x^3 + a x^2 + b x + c by the trigonometric method, Newton polished."""
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    s = np.sqrt(-p / 3.0 + 0j)
    if abs(s) <= 1e-15 * max(1.0, abs(a), abs(q) ** (1.0 / 3.0)):
        r = (-q + 0j) ** (1.0 / 3.0)
        w = np.exp(2j * np.pi / 3.0)
        t = np.array([r, r * w, r * w * w])
    else:
        arg = -q / (2.0 * s ** 3)
        theta = np.arccos(arg + 0j) / 3.0
        t = 2.0 * s * np.cos(theta - 2.0 * np.pi * np.arange(3) / 3.0)
    x = t - a / 3.0
    for _ in range(4):
        f = ((x + a) * x + b) * x + c
        df = (3.0 * x + 2.0 * a) * x + b
        ok = np.abs(df) > 1e-300
        step = np.where(ok, f / np.where(ok, df, 1.0), 0.0)
        x = x - step
    return x


def _eig3(m):
    tr = np.trace(m)
    minors = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
              + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
              + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    det = np.linalg.det(m)
    vals = _cubic_roots(-tr, minors, -det)
    vecs = np.zeros((3, 3), dtype=complex)
    scale = max(np.abs(m).max(), 1e-300)
    for k, lam in enumerate(vals):
        r = m - lam * np.eye(3)
        cands = [np.cross(r[0], r[1]), np.cross(r[0], r[2]), np.cross(r[1], r[2])]
        norms = [np.linalg.norm(v) for v in cands]
        best = int(np.argmax(norms))
        if norms[best] <= 1e-13 * scale * scale:
            return None
        vecs[:, k] = cands[best] / norms[best]
    return vals, vecs


# Hessenberg QR ---------------------------------------------------------

def _hessenberg(a):
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
    return h, q


def _givens(a, b):
    r = math.hypot(abs(a), abs(b))
    if r == 0.0:
        return 1.0, 0j
    if a == 0:
        return 0.0, 1.0 + 0j
    c = abs(a) / r
    s = (a / abs(a)) * np.conj(b) / r
    return c, s


def _schur(a, maxit_per_eig=60):
    """Complex Schur form a = q t q^H by single-shift QR on the Hessenberg form."""
    n = a.shape[0]
    h, q = _hessenberg(a)
    hi = n - 1
    its = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])) or sub < 1e-300:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        if its > maxit_per_eig:
            raise RuntimeError("QR iteration failed to converge")
        aa, bb = h[hi - 1, hi - 1], h[hi - 1, hi]
        cc, dd = h[hi, hi - 1], h[hi, hi]
        if its % 11 == 0:
            shift = dd + abs(h[hi, hi - 1])
        else:
            half = 0.5 * (aa + dd)
            disc = np.sqrt(0.25 * (aa - dd) ** 2 + bb * cc)
            m1, m2 = half + disc, half - disc
            shift = m1 if abs(m1 - dd) < abs(m2 - dd) else m2
        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= shift
        rots = []
        for k in range(lo, hi):
            c, s = _givens(h[k, k], h[k + 1, k])
            rk = h[k, lo:].copy()
            rk1 = h[k + 1, lo:].copy()
            h[k, lo:] = c * rk + s * rk1
            h[k + 1, lo:] = -np.conj(s) * rk + c * rk1
            h[k + 1, k] = 0.0
            rots.append((k, c, s))
        for k, c, s in rots:
            top = min(k + 2, hi) + 1
            ck = h[:top, k].copy()
            ck1 = h[:top, k + 1].copy()
            h[:top, k] = c * ck + np.conj(s) * ck1
            h[:top, k + 1] = -s * ck + c * ck1
            qk = q[:, k].copy()
            qk1 = q[:, k + 1].copy()
            q[:, k] = c * qk + np.conj(s) * qk1
            q[:, k + 1] = -s * qk + c * qk1
        h[idx, idx] += shift
    return np.triu(h), q


def _eig_qr(m):
    n = m.shape[0]
    t, q = _schur(m)
    vals = np.diag(t).copy()
    small = _EPS * max(np.abs(t).max(), 1e-300)
    y = np.zeros((n, n), dtype=complex)
    for k in range(n):
        y[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            den = t[i, i] - t[k, k]
            if abs(den) < small:
                den = small
            y[i, k] = -(t[i, i + 1:k + 1] @ y[i + 1:k + 1, k]) / den
    vecs = q @ y
    vecs /= np.linalg.norm(vecs, axis=0)
    return vals, vecs


def eig_general(m, tol=1e-9):
    """Eigen-decomposition of a general complex square matrix.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Complex matrix, ``1 <= n <= 16``.
    tol : float
        Residual and conditioning tolerance. The eigenvector matrix is
        rejected as defective when its 2-norm condition number exceeds
        ``1/tol``.

    Returns
    -------
    vals : ndarray, shape (n,)
        Eigenvalues sorted by ascending real part, ties broken by
        ascending imaginary part.
    vecs : ndarray, shape (n, n)
        Unit-norm right eigenvectors stored as columns, ``vecs[:, k]``
        belonging to ``vals[k]``.

    Raises
    ------
    NonSquare
        If ``m`` is not square.
    DefectiveMatrix
        If the eigenvectors are numerically linearly dependent.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    m = _as_square(m)
    n = m.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    norm = np.linalg.norm(m, 2)

    res = None
    if n == 1:
        res = (m[0].copy(), np.ones((1, 1), dtype=complex))
    elif n == 2:
        res = _eig2(m)
    elif n == 3:
        res = _eig3(m)
    if res is not None:
        vals, vecs = res
        resid = np.linalg.norm(m @ vecs - vecs * vals, axis=0)
        if np.any(resid > tol * max(norm, 1e-300)):
            res = None
    if res is None:
        vals, vecs = _eig_qr(m)

    order = sort_eigenvalues(vals, scale=max(norm, 1.0))
    vals = vals[order]
    vecs = vecs[:, order]

    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > 1.0 / tol:
        raise DefectiveMatrix(f"eigenvector matrix condition number {cond:.3e} exceeds {1.0 / tol:.1e}")
    return vals, vecs


def expm(a):
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    a = _as_square(a)
    n = a.shape[0]
    nrm = np.abs(a).sum(axis=0).max()
    s = 0
    if nrm > 0.5:
        s = int(math.ceil(math.log2(nrm / 0.5)))
    b = a / (2.0 ** s)
    e = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ b / k
        e = e + term
        if np.abs(term).sum(axis=0).max() <= 1e-18 * np.abs(e).sum(axis=0).max():
            break
    for _ in range(s):
        e = e @ e
    return e


def expm_apply(m, t, v):
    """Return ``exp(m t) v``.

    Parameters
    ----------
    m : array_like, shape (n, n)
    t : float
    v : array_like, shape (n,)

    Returns
    -------
    ndarray, shape (n,)
    """
    m = _as_square(m)
    v = np.asarray(v, dtype=complex)
    if v.shape != (m.shape[0],):
        raise DimensionMismatch(f"vector of shape {v.shape} for matrix of dim {m.shape[0]}")
    return expm(m * t) @ v


def find_root_bracketed(f, lo, hi, tol=1e-10, maxiter=200):
    """Brent root finder on a sign-changing bracket.

    Inverse quadratic / secant steps are accepted only while they shrink
    the bracket fast enough; otherwise the step is a bisection.

    Parameters
    ----------
    f : callable
        Real scalar function.
    lo, hi : float
        Bracket with ``lo < hi`` and ``f(lo) * f(hi) <= 0``.
    tol : float
        Stop when ``|f| <= tol`` or the bracket is narrower than ``tol``.

    Returns
    -------
    float
        A point inside ``[lo, hi]``.

    Raises
    ------
    NoBracket
        If ``f`` has the same strict sign at both ends.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoBracket(f"f({a})={fa:.3e} and f({b})={fb:.3e} have the same sign")
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or abs(fb) <= tol or fb == 0.0:
            return min(max(b, lo), hi)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b = b + d if abs(d) > tol1 else b + math.copysign(tol1, xm)
        fb = float(f(b))
    # plain bisection if Brent stalls
    x0, x1 = min(b, c), max(b, c)
    f0 = float(f(x0))
    while x1 - x0 > tol:
        mid = 0.5 * (x0 + x1)
        fm = float(f(mid))
        if abs(fm) <= tol:
            return mid
        if (fm < 0) == (f0 < 0):
            x0, f0 = mid, fm
        else:
            x1 = mid
    return min(max(0.5 * (x0 + x1), lo), hi)
