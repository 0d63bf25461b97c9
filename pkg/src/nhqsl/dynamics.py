"""State decomposition, survival amplitude and orthogonality-time search.

Only the populations ``p_n = |c_n|^2`` enter the survival amplitude

    S(t) = sum_n p_n exp(-i w'_n t - g'_n t) / K(t),
    K(t) = sqrt(sum_n p_n exp(-2 g'_n t)),

so the batch routines below take a ``(m, n)`` array of populations.
Weights are handled in log space so that long horizons in dissipative
spectra do not underflow.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Underflow, ZeroState

log = logging.getLogger(__name__)

GOLDEN_ITERS = 80
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EigenbasisState:
    """Coefficients of a state in the right-eigenvector basis, ``sum |c|^2 = 1``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        norm = np.sum(np.abs(c) ** 2)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"coefficients are not normalized (sum |c|^2 = {norm!r})")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, c):
        """Normalize arbitrary nonzero coefficients."""
        c = np.asarray(c, dtype=complex).ravel()
        norm = np.sum(np.abs(c) ** 2)
        if norm < 1e-24:
            raise ZeroState("coefficient vector is zero")
        return cls(c / np.sqrt(norm))

    @classmethod
    def from_populations(cls, p, phases=None):
        p = np.clip(np.asarray(p, dtype=float), 0.0, None)
        p = p / p.sum()
        c = np.sqrt(p).astype(complex)
        if phases is not None:
            c = c * np.exp(1j * np.asarray(phases, dtype=float))
        return cls.from_coeffs(c)

    @property
    def populations(self):
        return np.abs(self.coeffs) ** 2

    @property
    def dim(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class SurvivalSample:
    t: float
    s: complex
    k: float


def decompose_state(sys, psi):
    """Expand ``psi`` on the right eigenvectors and normalize biorthogonally.

    ``c_n = <psi~_n|psi>`` rescaled so that ``sum |c_n|^2 = 1``.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (sys.dim,):
        raise DimensionMismatch(f"state of shape {psi.shape} for a {sys.dim}-level system")
    c = sys.dual @ psi
    norm = np.sum(np.abs(c) ** 2)
    if norm < 1e-24:
        raise ZeroState("state has no weight on the eigenbasis")
    return EigenbasisState(c / np.sqrt(norm))


def _pops(x):
    if isinstance(x, EigenbasisState):
        return x.populations
    return np.asarray(x, dtype=float)


def survival_curve(pops, spec, times):
    """Survival amplitude for every row of ``pops`` at every time.

    Parameters
    ----------
    pops : array_like, shape (n,) or (m, n)
    spec : ShiftedSpectrum
    times : array_like, shape (k,)

    Returns
    -------
    ndarray, complex, shape (k,) or (m, k)
    """
    p = np.asarray(pops, dtype=float)
    t = np.asarray(times, dtype=float)
    single = p.ndim == 1
    p2 = np.atleast_2d(p)[:, None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = np.log(p2)
        lw = lp - t[None, :, None] * spec.gamma
        top = lw.max(axis=-1, keepdims=True)
        w = np.exp(lw - top)
        num = np.sum(w * np.exp(-1j * t[None, :, None] * spec.omega), axis=-1)
        # p e^{-2 g t} = w^2 e^{2 top} / p
        k2 = np.sum(np.where(p2 > 0, w * w / p2, 0.0), axis=-1)
    s = num / np.sqrt(k2)
    return s[0] if single else s


def _abs_s_rows(p, spec, t):
    """|S(t_i)| for row-wise times: p shape (m, n), t shape (m,)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = np.log(p)
        lw = lp - t[:, None] * spec.gamma
        top = lw.max(axis=1, keepdims=True)
        w = np.exp(lw - top)
        num = np.sum(w * np.exp(-1j * t[:, None] * spec.omega), axis=1)
        k2 = np.sum(np.where(p > 0, w * w / p, 0.0), axis=1)
    return np.abs(num) / np.sqrt(k2)


def survival_amplitude(state, spec, t):
    """Survival amplitude ``S(t)`` and biorthogonal norm ``K(t)``.

    Raises
    ------
    Underflow
        If ``K(t) < 1e-150``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    p = _pops(state)
    if p.shape != (spec.dim,):
        raise DimensionMismatch("state and spectrum sizes differ")
    damp = np.exp(-spec.gamma * t)
    k = np.sqrt(np.sum(p * damp * damp))
    if not k >= 1e-150:
        raise Underflow(f"K({t}) = {k:.3e} underflows")
    s = np.sum(p * damp * np.exp(-1j * spec.omega * t)) / k
    if abs(s) > 1.0 + 1e-9:
        log.warning("|S(%g)| = %.15g exceeds 1", t, abs(s))
    return SurvivalSample(float(t), complex(s), float(k))


def default_horizon(spec):
    if spec.omega_max > 0:
        return 8.0 * np.pi / spec.omega_max
    raise ValueError("a horizon is required when the spectrum has zero width")


def search_grid(spec, horizon):
    """Uniform scan grid on [0, horizon] tied to the fastest oscillation."""
    if spec.omega_max > 0:
        h = np.pi / (64.0 * spec.omega_max)
    else:
        h = horizon / 4096.0
    n = max(int(np.ceil(horizon / h)), 2)
    return np.linspace(0.0, horizon, n + 1)


def orthogonality_times(pops, spec, horizon=None, eps=1e-8, chunk=2048):
    """First time at which ``|S| <= eps`` for each row of populations.

    A uniform grid with step ``pi / (64 w'_N)`` is scanned; every grid
    minimum low enough to hide a zero is refined by golden-section
    search on ``|S|``.

    Parameters
    ----------
    pops : array_like, shape (m, n)
    spec : ShiftedSpectrum
    horizon : float, optional
        Defaults to ``8 pi / w'_N``.
    eps : float

    Returns
    -------
    ndarray, shape (m,)
        Orthogonality times, ``nan`` where none exists within the horizon.
    """
    if horizon is None:
        horizon = default_horizon(spec)
    if not horizon > 0 or not eps > 0:
        raise ValueError("horizon and eps must be positive")
    p = np.atleast_2d(np.asarray(pops, dtype=float))
    grid = search_grid(spec, horizon)
    step = grid[1] - grid[0]
    # |dS/dt| <= w'_N + 2 g'_max bounds how far a zero can hide from the grid
    thresh = 1.05 * (spec.omega_max + 2.0 * spec.gamma_max) * step + eps
    out = np.full(len(p), np.nan)
    for start in range(0, len(p), chunk):
        block = p[start:start + chunk]
        a = np.abs(survival_curve(block, spec, grid))
        left = np.empty_like(a, dtype=bool)
        right = np.empty_like(a, dtype=bool)
        left[:, 0] = False
        left[:, 1:] = a[:, 1:] <= a[:, :-1]
        right[:, -1] = True
        right[:, :-1] = a[:, :-1] <= a[:, 1:]
        cand = left & right & (a <= thresh)
        rows, cols = np.nonzero(cand)
        if len(rows) == 0:
            continue
        lo = grid[cols - 1]
        hi = grid[np.minimum(cols + 1, len(grid) - 1)]
        tbest, vbest = _golden_rows(block[rows], spec, lo, hi)
        ok = vbest <= eps
        rows, tbest = rows[ok], tbest[ok]
        # earliest accepted minimum per state (rows come out sorted by time within a row)
        res = np.full(len(block), np.nan)
        for r, tb in zip(rows[::-1], tbest[::-1]):
            res[r] = tb
        out[start:start + chunk] = res
    return out


def _golden_rows(p, spec, lo, hi):
    a = lo.copy()
    b = hi.copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _abs_s_rows(p, spec, c)
    fd = _abs_s_rows(p, spec, d)
    for _ in range(GOLDEN_ITERS):
        go_left = fc < fd
        b = np.where(go_left, d, b)
        a = np.where(go_left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        # reuse one interior point per step
        c2 = np.where(go_left, new_c, d)
        d2 = np.where(go_left, c, new_d)
        fc2 = np.where(go_left, np.nan, fd)
        fd2 = np.where(go_left, fc, np.nan)
        need_c = go_left
        need_d = ~go_left
        if need_c.any():
            fc2[need_c] = _abs_s_rows(p[need_c], spec, c2[need_c])
        if need_d.any():
            fd2[need_d] = _abs_s_rows(p[need_d], spec, d2[need_d])
        c, d, fc, fd = c2, d2, fc2, fd2
    t = 0.5 * (a + b)
    v = _abs_s_rows(p, spec, t)
    # the search may have ended next to, not on, the grid point that was best
    return t, v


def orthogonality_time(state, spec, horizon=None, eps=1e-8):
    """Smallest ``tau`` in ``(0, horizon]`` with ``|S(tau)| <= eps``, or None."""
    p = _pops(state)
    if p.shape != (spec.dim,):
        raise DimensionMismatch("state and spectrum sizes differ")
    tau = orthogonality_times(p[None, :], spec, horizon, eps)[0]
    return None if np.isnan(tau) else float(tau)


def min_abs_survival(pops, spec, horizon, npts=4097):
    """Minimum of ``|S(t)|`` over a uniform grid on [0, horizon], per row."""
    t = np.linspace(0.0, horizon, npts)
    return np.abs(np.atleast_2d(survival_curve(pops, spec, t))).min(axis=1)
