"""Speed-limit functionals and the times at which they reach pi/2.

For populations ``p_n`` and weights ``w_n(t) = p_n exp(-g'_n t)``:

    F_ML  = t sum(w' w) / sum(w)
    F_MT  = sqrt(-R t + dW^2 t^2 exp(-g_pair t)) / sum(w)
    R     = 4 sum(g' w^2) - 2 sum(g' w) sum(w)
    F_wML = <W> t / exp(-g'_max t)
    F_wMT = sqrt(dW^2 t^2 exp(-g'_phi1 t) + 2 g'_max t) / exp(-g'_max t)

with ``W`` the Hermitian part (rates ``w'``) and ``dW^2`` its variance in
the initial state. ``g_pair`` is the smallest sum ``g'_n + g'_m`` over
distinct populated levels; see :func:`mt_components`. The geometric
functional ``F_G`` exists in closed form for two levels only.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativeRadicand, Underflow
from .linalg import find_root_bracketed

HALF_PI = 0.5 * np.pi
RADICAND_CLAMP = 1e-12
UNDERFLOW = 1e-150


class BoundKind(enum.Enum):
    ML = "ML"
    MT = "MT"
    WML = "WML"
    WMT = "WMT"
    G = "G"


@dataclass(frozen=True)
class BoundEvaluation:
    kind: BoundKind
    t: float
    value: float


@dataclass(frozen=True)
class MtComponents:
    """Pieces of the MT-type functional at one time.

    ``gamma_phi1`` is the second smallest rate of the whole spectrum;
    ``gamma_pair`` is the smallest ``g'_n + g'_m`` over distinct levels
    carrying population and is the rate used in the variance term.
    """

    variance: float
    r_value: float
    denom: float
    gamma_phi1: float
    gamma_pair: float


def _pops(state, spec):
    p = state.populations if hasattr(state, "populations") else np.asarray(state, dtype=float)
    if p.shape[-1] != spec.dim:
        raise DimensionMismatch(f"state has {p.shape[-1]} levels, spectrum {spec.dim}")
    return p


def variance(p, omega):
    """``1/2 sum_nm (w_n - w_m)^2 p_n p_m`` along the last axis."""
    d = omega[:, None] - omega[None, :]
    return 0.5 * np.einsum("...n,nm,...m->...", p, d * d, p)


def pair_rate(p, gamma):
    """Smallest ``g_n + g_m`` over distinct populated levels (0 if fewer than two)."""
    g = np.where(p > 0, gamma, np.inf)
    g = np.sort(g, axis=-1)
    s = g[..., 0] + g[..., 1]
    return np.where(np.isfinite(s), s, 0.0)


# vectorised kernels: p has shape (..., n), t broadcasts against p[..., 0]

def _weights(p, spec, t):
    t = np.asarray(t, dtype=float)
    if t.ndim > p.ndim - 1:
        return np.exp(-np.multiply.outer(t, spec.gamma)) * p
    return p * np.exp(-t[..., None] * spec.gamma)


def ml_kernel(p, spec, t):
    """F_ML and its denominator ``sum w``."""
    t = np.asarray(t, dtype=float)
    w = _weights(p, spec, t)
    d = w.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return t * (w @ spec.omega) / d, d


def mt_radicand(p, spec, t, spectrum_wide=False):
    """Radicand ``-R t + dW^2 t^2 e^{-g t}`` and the denominator ``sum w``."""
    t = np.asarray(t, dtype=float)
    w = _weights(p, spec, t)
    d = w.sum(axis=-1)
    r = 4.0 * (w * w) @ spec.gamma - 2.0 * (w @ spec.gamma) * d
    var = variance(p, spec.omega)
    g = spec.gamma_phi1 if spectrum_wide else pair_rate(p, spec.gamma)
    rad = -r * t + var * t * t * np.exp(-g * t)
    return rad, d


def mt_kernel(p, spec, t, spectrum_wide=False):
    """F_MT with negative radicands clamped to zero."""
    rad, d = mt_radicand(p, spec, t, spectrum_wide)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.sqrt(np.clip(rad, 0.0, None)) / d, d


def wml_kernel(p, spec, t):
    t = np.asarray(t, dtype=float)
    return (p @ spec.omega) * t * np.exp(spec.gamma_max * t)


def wmt_kernel(p, spec, t):
    t = np.asarray(t, dtype=float)
    var = variance(p, spec.omega)
    rad = var * t * t * np.exp(-spec.gamma_phi1 * t) + 2.0 * spec.gamma_max * t
    return np.sqrt(rad) * np.exp(spec.gamma_max * t)


def _check_t(t):
    if not t > 0:
        raise ValueError("t must be positive")


def f_ml(state, spec, t):
    """ML-type functional at time ``t``.

    Parameters
    ----------
    state : EigenbasisState or array_like of populations
    spec : ShiftedSpectrum
    t : float

    Returns
    -------
    BoundEvaluation
    """
    _check_t(t)
    p = _pops(state, spec)
    v, d = ml_kernel(p, spec, t)
    if not d >= UNDERFLOW:
        raise Underflow(f"denominator {d:.3e} underflows at t={t}")
    return BoundEvaluation(BoundKind.ML, float(t), float(v))


def mt_components(state, spec, t):
    _check_t(t)
    p = _pops(state, spec)
    w = p * np.exp(-spec.gamma * t)
    d = w.sum()
    if not d >= UNDERFLOW:
        raise Underflow(f"denominator {d:.3e} underflows at t={t}")
    r = 4.0 * np.sum(spec.gamma * w * w) - 2.0 * np.sum(spec.gamma * w) * d
    return MtComponents(float(variance(p, spec.omega)), float(r), float(d),
                        spec.gamma_phi1, float(pair_rate(p, spec.gamma)))


def f_mt(state, spec, t, spectrum_wide=False):
    """MT-type functional at time ``t``.

    Parameters
    ----------
    spectrum_wide : bool
        Use the second smallest rate of the whole spectrum in the
        variance term instead of the smallest populated pair sum. Both
        coincide for two-level systems and for every state supported
        on the levels with the two smallest rates.

    Raises
    ------
    NegativeRadicand
        If the radicand is below ``-1e-12``; the bound is then undefined.
    """
    c = mt_components(state, spec, t)
    g = c.gamma_phi1 if spectrum_wide else c.gamma_pair
    rad = -c.r_value * t + c.variance * t * t * math.exp(-g * t)
    if rad < -RADICAND_CLAMP:
        raise NegativeRadicand(f"MT radicand {rad:.3e} < 0 at t={t}", t=t, radicand=rad, components=c)
    return BoundEvaluation(BoundKind.MT, float(t), math.sqrt(max(rad, 0.0)) / c.denom)


def f_weak(state, spec, t):
    """Weak ML- and MT-type functionals ``(wml, wmt)`` at time ``t``."""
    _check_t(t)
    p = _pops(state, spec)
    return (BoundEvaluation(BoundKind.WML, float(t), float(wml_kernel(p, spec, t))),
            BoundEvaluation(BoundKind.WMT, float(t), float(wmt_kernel(p, spec, t))))


# geometric bound, two levels ------------------------------------------

def g_kernel(mu, nu, alpha, t):
    """Closed-form geometric functional, vectorised over ``t``.

    ``arctan(e^{nu t} tan a) - a`` is evaluated as a single arctangent of
    ``expm1(nu t) sin a cos a / (cos^2 a + e^{nu t} sin^2 a)`` so that
    small ``nu t`` and large ``e^{nu t}`` are both safe.
    """
    t = np.asarray(t, dtype=float)
    r = math.hypot(mu, nu)
    s, c = math.sin(alpha), math.cos(alpha)
    if nu == 0.0:
        return r * t * s * c
    x = nu * t
    with np.errstate(over="ignore", invalid="ignore"):
        pos = x > 0
        e = np.exp(-np.abs(x))
        em1 = -np.expm1(-np.abs(x))  # 1 - e^{-|x|}
        # nu t > 0: divide through by e^{nu t}
        num = np.where(pos, em1 * s * c, -em1 * s * c)
        den = np.where(pos, c * c * e + s * s, c * c + e * s * s)
        ang = np.arctan2(num, den)
    return r / nu * ang


def f_g_two_level(mu, nu, alpha, t):
    """Geometric functional ``sqrt(mu^2+nu^2)/nu (arctan(e^{nu t} tan a) - a)``.

    ``nu = 0`` uses the limit ``|mu| t sin a cos a``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    return BoundEvaluation(BoundKind.G, float(t), float(g_kernel(mu, nu, alpha, t)))


def tau_g_closed(mu, nu, alpha):
    """Closed-form solution of ``F_G = pi/2``, or None when it has none.

    No solution exists when ``a = alpha + pi nu / (2 r) >= pi/2`` (growth
    saturates the arctangent) or, for ``nu < 0``, when ``a <= 0``.
    """
    r = math.hypot(mu, nu)
    if r == 0.0:
        return None
    if nu == 0.0:
        sc = math.sin(alpha) * math.cos(alpha)
        return HALF_PI / (r * sc) if sc > 0 else None
    a = alpha + math.pi * nu / (2.0 * r)
    if a >= HALF_PI or a <= 0.0:
        return None
    return (math.log(math.tan(a)) - math.log(math.tan(alpha))) / nu


def solve_tau_g(mu, nu, alpha, horizon=None, tol=1e-14):
    """Root-solve ``F_G(t) = pi/2`` on ``(0, horizon]``.

    ``F_G`` is increasing in ``t``; the bracket is grown by doubling from
    ``1/r`` up to ``horizon`` (default ``1e8 / r``).
    """
    r = math.hypot(mu, nu)
    if r == 0.0:
        return None
    if horizon is None:
        horizon = 1e8 / r

    def f(t):
        return float(g_kernel(mu, nu, alpha, t)) - HALF_PI

    lo, hi = 0.0, min(1.0 / r, horizon)
    while f(hi) < 0:
        if hi >= horizon:
            return None
        lo, hi = hi, min(2.0 * hi, horizon)
    return find_root_bracketed(f, lo, hi, tol=tol * max(1.0, hi))


def two_level_angles(state, spec):
    """``(mu, nu, alpha)`` of a two-level state in the growth convention.

    Level 1 (larger ``w'``) plays the role of ``|lambda_+>``; ``nu`` is its
    growth rate relative to level 0 and ``tan(alpha) = |c_1| / |c_0|``.
    """
    if spec.dim != 2:
        raise DimensionMismatch("geometric bound is only available for two levels")
    p = _pops(state, spec)
    mu = float(spec.omega[1] - spec.omega[0])
    nu = float(spec.gamma[0] - spec.gamma[1])
    alpha = math.atan2(math.sqrt(p[1]), math.sqrt(p[0]))
    return mu, nu, alpha


# solving F(tau) = pi/2 -------------------------------------------------

def _scalar_fn(kind, p, spec):
    if kind is BoundKind.ML:
        return lambda t: ml_kernel(p, spec, t)[0]
    if kind is BoundKind.MT:
        return lambda t: mt_kernel(p, spec, t)[0]
    if kind is BoundKind.WML:
        return lambda t: wml_kernel(p, spec, t)
    if kind is BoundKind.WMT:
        return lambda t: wmt_kernel(p, spec, t)
    raise ValueError(kind)


def first_crossing(fn, t0, horizon, n_grid=1024, level=HALF_PI, tol=1e-13):
    """Smallest ``t`` in ``(0, horizon]`` with ``fn(t) = level`` from below.

    ``fn`` is scanned on a log grid from ``t0`` to ``horizon`` (undefined
    values count as below the level) and the first upward crossing is
    refined with :func:`find_root_bracketed`.
    """
    grid = np.concatenate([[0.0], np.geomspace(t0, horizon, n_grid)])
    with np.errstate(all="ignore"):
        v = np.asarray(fn(grid), dtype=float) - level
    v = np.where(np.isfinite(v), v, -level)
    above = np.nonzero(v >= 0)[0]
    if len(above) == 0:
        return None
    i = above[0]
    if i == 0:
        return 0.0
    lo, hi = grid[i - 1], grid[i]

    def g(t):
        with np.errstate(all="ignore"):
            x = float(fn(t)) - level
        return x if math.isfinite(x) else -level

    return find_root_bracketed(g, lo, hi, tol=tol * max(1.0, hi))


def tau_bound(kind, state, spec, horizon, n_grid=1024):
    """Smallest ``tau`` with ``F_kind(tau) = pi/2``, or None.

    Parameters
    ----------
    kind : BoundKind or str
    state : EigenbasisState or populations
    spec : ShiftedSpectrum
    horizon : float
    """
    kind = BoundKind(kind) if not isinstance(kind, BoundKind) else kind
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    p = _pops(state, spec)
    if kind is BoundKind.G:
        mu, nu, alpha = two_level_angles(p, spec)
        return solve_tau_g(mu, nu, alpha, horizon)
    width = spec.omega_max
    t0 = 1e-4 / width if width > 0 else 1e-6 * horizon
    t0 = min(t0, 1e-3 * horizon)
    return first_crossing(_scalar_fn(kind, p, spec), t0, horizon, n_grid)


def tau_comb(state, spec, horizon):
    """``max(tau_ML, tau_MT)``; None if either is absent."""
    a = tau_bound(BoundKind.ML, state, spec, horizon)
    if a is None:
        return None
    b = tau_bound(BoundKind.MT, state, spec, horizon)
    if b is None:
        return None
    return max(a, b)
