"""Concrete systems: the general two-level family and the three-coil WPT chain.

Two-level conventions
---------------------
The canonical pair has eigenvalues ``lambda_- = 0`` and
``lambda_+ = mu + i nu``; ``nu > 0`` means ``|lambda_+>`` grows relative
to ``|lambda_->`` under ``exp(-i H t)``. The state is
``cos(a)|lambda_-> + sin(a) e^{i phi}|lambda_+>``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .biortho import spectrum_from_eigenvalues
from .dynamics import EigenbasisState

EP_RTOL = 1e-12


@dataclass(frozen=True)
class TwoLevelParams:
    """Angle parametrisation ``xi, vartheta, varrho, beta_angle`` of a traceless 2x2 matrix."""

    xi: float
    vartheta: float
    varrho: float
    beta_angle: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError("xi must be positive")
        if not 0 <= self.vartheta <= math.pi:
            raise ValueError("vartheta must lie in [0, pi]")
        if not 0 <= self.varrho <= 2 * math.pi or not 0 <= self.beta_angle <= 2 * math.pi:
            raise ValueError("varrho and beta_angle must lie in [0, 2 pi]")


@dataclass(frozen=True)
class TwoLevelCanonical:
    mu: float
    nu: float

    def __post_init__(self):
        if self.mu == 0 and self.nu == 0:
            raise ValueError("(mu, nu) = (0, 0) is degenerate")


@dataclass(frozen=True)
class StateAngles:
    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= math.pi / 2:
            raise ValueError("alpha must lie in (0, pi/2]")


@dataclass(frozen=True)
class WptParams:
    sigma_res: float
    eta: float
    kappa: float

    def __post_init__(self):
        if self.eta < 0 or self.kappa < 0:
            raise ValueError("eta and kappa must be nonnegative")


class Regime(enum.Enum):
    PT_SYMMETRIC = "PTSymmetric"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    PT_BROKEN = "PTBroken"


def _principal_sqrt(z):
    """Square root with nonnegative real part; nonnegative imaginary part on the cut."""
    w = np.sqrt(complex(z))
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        w = -w
    return w


def build_two_level(p):
    """Matrix of the angle-parametrised family and its canonical ``(mu, nu)``.

    ``H = xi [[cos(vt) e^{i vr}, sin(vr) sin(b)], [sin(vr) cos(b), -cos(vt) e^{i vr}]]``
    with eigenvalues ``+- s``, ``s = xi sqrt(cos^2(vt) e^{2 i vr} + sin^2(vr) sin(2b) / 2)``
    (principal branch). Shifting by ``kappa = -s`` puts the eigenvalues at
    ``0`` and ``mu + i nu = 2 s``.

    Returns
    -------
    h : ndarray, shape (2, 2)
    canonical : TwoLevelCanonical
    """
    ct = math.cos(p.vartheta)
    ph = np.exp(1j * p.varrho)
    sr = math.sin(p.varrho)
    h = p.xi * np.array([[ct * ph, sr * math.sin(p.beta_angle)],
                         [sr * math.cos(p.beta_angle), -ct * ph]], dtype=complex)
    s = p.xi * _principal_sqrt(ct * ct * ph * ph + 0.5 * sr * sr * math.sin(2 * p.beta_angle))
    lam = 2.0 * s
    return h, TwoLevelCanonical(float(lam.real), float(lam.imag))


def canonical_spectrum(c):
    """Shifted spectrum and level order for the pair ``{0, mu + i nu}``.

    Returns
    -------
    spec : ShiftedSpectrum
        Levels sorted by ``w'``.
    plus_first : bool
        True when ``|lambda_+>`` is level 0 (``mu < 0``).
    """
    lam = complex(c.mu, c.nu)
    plus_first = c.mu < 0 or (c.mu == 0 and c.nu < 0)
    vals = [lam, 0j] if plus_first else [0j, lam]
    return spectrum_from_eigenvalues(vals), plus_first


def canonical_state(s, plus_first=False):
    c = [math.cos(s.alpha), math.sin(s.alpha) * np.exp(1j * s.phi)]
    if plus_first:
        c = c[::-1]
    return EigenbasisState.from_coeffs(c)


def closed_forms(mu, nu, alpha, t):
    """Two-level ``F_ML`` and the MT radicand/denominator from the printed algebra.

    Evaluated in the orientation ``mu >= 0``; for ``mu < 0`` the levels are
    relabelled, ``(mu, nu, alpha) -> (-mu, -nu, pi/2 - alpha)``. Written
    with ``cos^2``/``sin^2`` so that ``alpha = pi/2`` needs no special case.
    """
    if mu < 0:
        mu, nu, alpha = -mu, -nu, 0.5 * math.pi - alpha
    c2, s2 = math.cos(alpha) ** 2, math.sin(alpha) ** 2
    if nu <= 0:
        # |lambda_+> decays at rate |nu|
        e = math.exp(nu * t)
        den = c2 + s2 * e
        ml = s2 * mu * t * e / den
        rad = 2 * nu * t * s2 * s2 * e * e - 2 * nu * t * s2 * c2 * e + mu * mu * t * t * s2 * c2 * e
    else:
        # |lambda_-> decays at rate nu
        e = math.exp(-nu * t)
        den = c2 * e + s2
        ml = s2 * mu * t / den
        rad = -2 * nu * t * c2 * c2 * e * e + 2 * nu * t * c2 * s2 * e + mu * mu * t * t * s2 * c2 * e
    return ml, rad, den


def two_level_bounds(c, s, t, check=True, strict=True):
    """``(F_ML, F_MT, F_G)`` of the canonical two-level system at time ``t``.

    The first two come from the general bounds module applied to the
    shifted canonical spectrum; with ``check`` they are compared with the
    closed-form algebra to ``1e-9`` (relative). With ``strict=False`` a
    negative MT radicand is clamped to zero instead of raising.
    """
    spec, plus_first = canonical_spectrum(c)
    state = canonical_state(s, plus_first)
    ml = bounds.f_ml(state, spec, t).value
    if strict:
        mt = bounds.f_mt(state, spec, t).value
    else:
        mt = float(bounds.mt_kernel(state.populations, spec, t)[0])
    g = bounds.f_g_two_level(c.mu, c.nu, s.alpha, t).value
    if check:
        ml_c, rad_c, den_c = closed_forms(c.mu, c.nu, s.alpha, t)
        mt_c = math.sqrt(max(rad_c, 0.0)) / den_c
        for name, a, b in (("ML", ml, ml_c), ("MT", mt, mt_c)):
            if abs(a - b) > 1e-9 * max(1.0, abs(b)):
                raise ArithmeticError(f"{name}: pipeline {a!r} differs from closed form {b!r}")
    return ml, mt, g


def two_level_fis_alpha(c):
    """State angle of the fastest initial state of the canonical pair."""
    spec, plus_first = canonical_spectrum(c)
    w = np.exp(0.5 * math.pi * spec.gamma / spec.omega_max)
    if plus_first:
        w = w[::-1]
    return math.atan2(w[1], w[0])


def wpt_matrix(p):
    s, e, k = p.sigma_res, p.eta, p.kappa
    return np.array([[s + 1j * e, k, 0], [k, s, k], [0, k, s - 1j * e]], dtype=complex)


def wpt_regime(p):
    a, b = 2 * p.kappa ** 2, p.eta ** 2
    if abs(a - b) <= EP_RTOL * max(a, b, 1.0):
        return Regime.EXCEPTIONAL_POINT
    return Regime.PT_SYMMETRIC if a > b else Regime.PT_BROKEN


def build_wpt(p):
    """Three-coil gain/neutral/loss chain and its PT regime.

    Returns
    -------
    h : ndarray, shape (3, 3)
    regime : Regime
    """
    return wpt_matrix(p), wpt_regime(p)


def wpt_eigenvalues(p):
    """Closed-form eigenvalues ``sigma -+ sqrt(2 kappa^2 - eta^2)`` and ``sigma``."""
    r = np.sqrt(complex(2 * p.kappa ** 2 - p.eta ** 2))
    return np.array([p.sigma_res - r, p.sigma_res, p.sigma_res + r])


def wpt_tau_min(p):
    """Fastest orthogonality time ``pi / (2 sqrt(2 kappa^2 - eta^2))`` (PT-symmetric only)."""
    d = 2 * p.kappa ** 2 - p.eta ** 2
    if d <= 0:
        return None
    return math.pi / (2.0 * math.sqrt(d))
