"""Fastest initial states, near-fastest families and the two-level region scan.

Near-FIS families are built in the shifted decay convention: level
weights at the orthogonality time are ``exp(y_n)`` with
``y_n = -g'_n tau``. Phases at that time are ``x_n = w'_n tau``.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bounds
from .biortho import ShiftedSpectrum
from .dynamics import EigenbasisState
from .errors import BadOrdering, DenominatorSignFlip, NumericalDomainError, ZeroBandwidth
from .models import StateAngles, TwoLevelCanonical, canonical_spectrum, canonical_state

HALF_PI = 0.5 * math.pi


def fis_populations(spec):
    """Populations of the fastest initial state.

    Support is the pair (lowest ``w'``, highest ``w'``); among levels tied
    in ``w'`` the one with the smallest ``g'`` is used. Weights are
    ``p_n ~ exp(pi g'_n / w'_N)``.
    """
    if spec.dim < 2:
        raise ZeroBandwidth("need at least two levels")
    width = spec.omega_max
    if not width > 0:
        raise ZeroBandwidth("spectral width w'_N is zero")
    lo_set = np.nonzero(spec.omega == spec.omega.min())[0]
    hi_set = np.nonzero(spec.omega == width)[0]
    lo = lo_set[np.argmin(spec.gamma[lo_set])]
    hi = hi_set[np.argmin(spec.gamma[hi_set])]
    p = np.zeros(spec.dim)
    # factor out the larger exponent to avoid overflow for strong damping
    e = math.pi * spec.gamma[[lo, hi]] / width
    e = np.exp(e - e.max())
    p[lo], p[hi] = e / e.sum()
    return p


def fis(spec):
    """Fastest initial state of a shifted spectrum (real, nonnegative coefficients)."""
    return EigenbasisState.from_populations(fis_populations(spec))


def alpha_ratio(state, spec, tau):
    """Ratio ``F_MT(tau) / F_ML(tau)`` at an orthogonality time ``tau``.

    Values below one mean the ML-type functional is the larger of the two
    at ``tau`` (the MT-type bound is the tighter one near the FIS).
    """
    return bounds.f_mt(state, spec, tau).value / bounds.f_ml(state, spec, tau).value


class NearFisRegime(enum.Enum):
    ALPHA_BELOW_ONE = "AlphaBelowOne"
    ALPHA_ABOVE_ONE = "AlphaAboveOne"


@dataclass(frozen=True)
class NearFisFamily:
    """One member of a near-FIS family.

    ``state`` is orthogonal to its evolved self at ``tau`` on ``spectrum``.
    Below-one members carry ``b_coefficient`` and the first-order
    populations; above-one members carry ``beta`` and the predictions.
    """

    regime: NearFisRegime
    ratio_alpha: float
    spectrum: ShiftedSpectrum
    tau: float
    state: EigenbasisState
    delta: Optional[float] = None
    k: Optional[int] = None
    b_coefficient: Optional[float] = None
    first_order_populations: Optional[np.ndarray] = None
    beta: Optional[float] = None
    f_ml_predicted: Optional[float] = None
    f_mt_predicted: Optional[float] = None


def b_coefficient(gamma0, gamma2, ratio_alpha, tau):
    """First-order coefficient of ``F_MT(tau) - pi/2`` in ``delta`` as printed.

    Arguments are in the growth convention of the printed expansion
    (weights ``exp(+gamma tau)``, ``gamma_1 = 0``).
    """
    e2 = math.exp(gamma2 * tau)
    e0 = math.exp(-gamma0 * tau)
    th = math.pi * (1.0 - ratio_alpha) / (2.0 * ratio_alpha)
    k = 1.0 + e2
    bracket = (-(gamma0 - gamma2) * tau * e2 / (math.pi * k)
               - 2.0 * gamma2 * tau * math.exp((2.0 * gamma2 - gamma0) * tau) / (math.pi * k * k)
               - (gamma0 + gamma2) * tau * e0 / (math.pi * k)
               + math.pi * e0 / (4.0 * k) * (1.0 + ratio_alpha ** -2)
               - math.pi * math.exp((gamma2 - gamma0) * tau) / (k * k)
               - math.pi * (1.0 - e2) * math.cos(th) / (2.0 * k * k)
               - math.sin(th) / k)
    return k / (2.0 * e2) * bracket


def _below_one_phases(ratio_alpha, delta):
    x1 = math.pi * (1.0 - ratio_alpha) / (2.0 * ratio_alpha)
    x2 = math.pi + x1 - delta * math.sin(x1)
    return np.array([0.0, x1, x2])


def below_one_populations(gamma, x, tau):
    """Exact populations making ``S(tau) = 0`` for phases ``x`` and decays ``gamma``.

    Solves normalisation, ``Re S = 0`` and ``Im S = 0`` as a 3x3 linear system.
    """
    w = np.exp(-np.asarray(gamma) * tau)
    a = np.array([np.ones(3), w * np.cos(x), w * np.sin(x)])
    return np.linalg.solve(a, [1.0, 0.0, 0.0])


def near_fis_below_one(gamma, ratio_alpha, delta, tau):
    """Three-level member with ``F_MT/F_ML`` close to ``ratio_alpha < 1``.

    Parameters
    ----------
    gamma : sequence of 3 floats
        Shifted decay rates ``(g'_0, g'_1, g'_2)`` with
        ``0 = g'_1 <= g'_2 <= g'_0``. A :class:`ShiftedSpectrum` is also
        accepted; only its rates are used.
    ratio_alpha : float
        Target ratio in ``(0, 1)``; sets ``x_1 = pi (1 - a) / (2 a)``.
    delta : float
        Detuning in ``[0, 0.2)``; ``x_2 = pi + x_1 - delta sin x_1``.
    tau : float
        Orthogonality time. The level frequencies are ``x_n / tau``.

    Returns
    -------
    NearFisFamily
    """
    g = np.asarray(gamma.gamma if isinstance(gamma, ShiftedSpectrum) else gamma, dtype=float)
    if g.shape != (3,):
        raise BadOrdering("the below-one family needs exactly three levels")
    if not (g[1] == 0.0 and g[1] <= g[2] <= g[0]):
        raise BadOrdering(f"need 0 = g'_1 <= g'_2 <= g'_0, got {g}")
    if not 0 < ratio_alpha < 1:
        raise ValueError("ratio_alpha must lie in (0, 1)")
    if not 0 <= delta < 0.2:
        raise ValueError("delta must lie in [0, 0.2)")
    if not tau > 0:
        raise ValueError("tau must be positive")
    x = _below_one_phases(ratio_alpha, delta)
    spec = ShiftedSpectrum(x / tau, g)
    p = below_one_populations(g, x, tau)
    if np.any(p < -1e-14):
        raise NumericalDomainError(f"construction gives negative populations {p}")
    p = np.clip(p, 0.0, None)

    # first-order expansion in delta, y_n = -g'_n tau
    y0, y2 = -g[0] * tau, -g[2] * tau
    lam = 1.0 / (1.0 + math.exp(y2))
    c1 = math.cos(x[1])
    p1st = np.array([
        delta * lam * math.exp(y2 - y0),
        lam * math.exp(y2) - delta * lam * lam * math.exp(y2) * (c1 + math.exp(y2 - y0)),
        lam - delta * lam * lam * (math.exp(y2 - y0) - math.exp(y2) * c1),
    ])
    b = b_coefficient(-g[0], -g[2], ratio_alpha, tau)
    return NearFisFamily(NearFisRegime.ALPHA_BELOW_ONE, ratio_alpha, spec, tau,
                         EigenbasisState.from_populations(p), delta=delta,
                         b_coefficient=b, first_order_populations=p1st)


def below_one_slope(gamma, ratio_alpha, tau, h=1e-4):
    """Derivative of ``F_MT(tau)`` in ``delta`` at ``delta = 0^+``.

    Second-order one-sided difference on the exact construction; ``p_0``
    is proportional to ``delta`` so the family stops at ``delta = 0``.
    """
    g = np.asarray(gamma, dtype=float)
    vals = []
    for d in (0.0, h, 2.0 * h):
        x = _below_one_phases(ratio_alpha, d)
        spec = ShiftedSpectrum(x / tau, g)
        p = np.clip(below_one_populations(g, x, tau), 0.0, None)
        vals.append(float(bounds.mt_kernel(p / p.sum(), spec, tau)[0]))
    return (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)


def near_fis_above_one(gamma1, gamma2k1, k, ratio_alpha, tau):
    """Three-level member on levels ``{0, 1, 2k+1}`` with ``F_MT/F_ML`` near ``ratio_alpha > 1``.

    Decay rates are ``0 < gamma1 < gamma2k1`` on levels 1 and 2k+1 and 0
    on level 0; phases at ``tau`` are ``0, pi, (2k+1) pi``.

    Returns
    -------
    NearFisFamily
        With ``beta``, ``f_ml_predicted`` and ``f_mt_predicted``.

    Raises
    ------
    DenominatorSignFlip
        If the denominator of ``beta`` is not positive (``k`` too small).
    """
    if not 0 < gamma1 < gamma2k1:
        raise BadOrdering("need 0 < gamma1 < gamma2k1")
    k = int(k)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not ratio_alpha > 1:
        raise ValueError("ratio_alpha must exceed 1")
    if not tau > 0:
        raise ValueError("tau must be positive")
    a2 = ratio_alpha ** 2
    e1 = math.exp(gamma1 * tau)
    gap = math.exp(-(gamma2k1 - gamma1) * tau)
    den = 1.0 + e1 - (a2 / k) * gap
    if not den > 0:
        raise DenominatorSignFlip(f"beta denominator {den:.3e} is not positive for k={k}")
    beta = 0.25 * (a2 - 1.0) / den
    eps = beta / k ** 2
    if not eps < 1:
        raise DenominatorSignFlip("beta / k^2 >= 1: no valid populations")
    w1, wk = math.exp(-gamma1 * tau), math.exp(-gamma2k1 * tau)
    q = np.array([(1.0 - eps) * w1 + eps * wk, 1.0 - eps, eps])
    p = q / q.sum()
    x = np.array([0.0, math.pi, (2 * k + 1) * math.pi])
    spec = ShiftedSpectrum(x / tau, np.array([0.0, gamma1, gamma2k1]))
    ml_pred = HALF_PI + math.pi * (a2 - 1.0) * gap / (4.0 * k * (1.0 + e1))
    mt_pred = HALF_PI * math.sqrt(1.0 + 4.0 * beta * (1.0 + e1))
    return NearFisFamily(NearFisRegime.ALPHA_ABOVE_ONE, ratio_alpha, spec, tau,
                         EigenbasisState.from_populations(p), k=k, beta=beta,
                         f_ml_predicted=ml_pred, f_mt_predicted=mt_pred)


def above_one_coefficient(gamma1, gamma2k1, ratio_alpha, tau):
    """Predicted limit of ``k (F_ML(tau) - pi/2)``."""
    return (math.pi * (ratio_alpha ** 2 - 1.0) * math.exp(-(gamma2k1 - gamma1) * tau)
            / (4.0 * (1.0 + math.exp(gamma1 * tau))))


# region scan -----------------------------------------------------------

class Region(enum.Enum):
    A = "A"  # tau_comb < tau_G
    B = "B"  # tau_comb > tau_G
    C = "C"  # tau_G does not exist


@dataclass(frozen=True)
class RegionScanCell:
    """One ``(theta, alpha)`` cell; ``mu' = cos theta``, ``nu' = sin theta``.

    ``delta_tau = tau_comb - tau_G``. It is None exactly in region C. When
    ``tau_G`` exists but the combined bound is never reached, ``delta_tau``
    is ``+inf`` (region B) and ``flag`` is ``"comb_absent"``.
    """

    theta: float
    alpha_angle: float
    delta_tau: Optional[float]
    region: Region
    tau_comb: Optional[float] = None
    tau_g: Optional[float] = None
    flag: Optional[str] = None


def scan_cell(theta, alpha, horizon=200.0, zeta=1.0):
    mu, nu = zeta * math.cos(theta), zeta * math.sin(theta)
    c = TwoLevelCanonical(mu, nu)
    tau_g = bounds.solve_tau_g(mu, nu, alpha, horizon)
    if tau_g is None:
        return RegionScanCell(theta, alpha, None, Region.C, None, None, None)
    spec, plus_first = canonical_spectrum(c)
    state = canonical_state(StateAngles(alpha), plus_first)
    tc = bounds.tau_comb(state, spec, horizon)
    if tc is None:
        flag = "comb_absent"
        if not np.isfinite(bounds.mt_kernel(state.populations, spec, horizon)[1]):
            flag = "overflow"
        return RegionScanCell(theta, alpha, math.inf, Region.B, None, tau_g, flag)
    d = tc - tau_g
    return RegionScanCell(theta, alpha, d, Region.A if d < 0 else Region.B, tc, tau_g, None)


def delta_tau_scan(theta_grid, alpha_grid, horizon=200.0, zeta=1.0):
    """Classify every ``(theta, alpha)`` cell (row-major over the grids).

    Parameters
    ----------
    theta_grid : sequence of float in (0, pi)
    alpha_grid : sequence of float in (0, pi/2)
    horizon : float
        Largest time searched for ``tau_comb`` and ``tau_G``.
    zeta : float
        Common scale of ``(mu, nu)``; the region map is independent of it
        up to the rescaled horizon.

    Returns
    -------
    list of RegionScanCell
    """
    return [scan_cell(float(th), float(al), horizon, zeta)
            for th in theta_grid for al in alpha_grid]


def no_solution(theta, alpha):
    """Analytic condition under which ``F_G`` never reaches pi/2 (unit ``r``)."""
    return alpha + HALF_PI * math.sin(theta) >= HALF_PI
