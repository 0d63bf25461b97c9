"""Biorthogonal eigensystems and the shifted spectrum.

Eigenvalues use the decay convention ``E = omega - i*gamma``. The shifted
Hamiltonian ``H' = H - (omega_min - i*gamma_min) I`` has rates
``omega' >= 0`` and ``gamma' >= 0`` with both minima at zero.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, DimensionMismatch
from .linalg import eig_general

# rates within this relative distance of zero are snapped to exactly zero
SNAP = 1e-12


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Paired right/left eigenvectors of a non-Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
    right : ndarray, shape (n, n)
        Column ``k`` is the unit-norm right eigenvector ``|psi_k>``.
    dual : ndarray, shape (n, n)
        Row ``k`` is the bra ``<psi~_k|``, i.e. ``dual = right^{-1}``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    dual: np.ndarray

    @property
    def dim(self):
        return len(self.eigenvalues)

    @property
    def left(self):
        """Left eigenvectors ``|psi~_k>`` stored as columns."""
        return self.dual.conj().T

    @property
    def matrix(self):
        return (self.right * self.eigenvalues) @ self.dual


@dataclass(frozen=True)
class ShiftedSpectrum:
    """Nonnegative rates of the shifted Hamiltonian.

    Attributes
    ----------
    omega, gamma : ndarray
        ``omega'_n`` (ascending) and ``gamma'_n``.
    shift : complex
        ``omega_min - 1j * gamma_min``.
    order_phi : ndarray
        Permutation sorting ``gamma'`` ascending.
    """

    omega: np.ndarray
    gamma: np.ndarray
    shift: complex = 0j
    order_phi: np.ndarray = None

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=float)
        ga = np.asarray(self.gamma, dtype=float)
        if om.shape != ga.shape or om.ndim != 1:
            raise DimensionMismatch("omega and gamma must be 1-d arrays of equal length")
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "gamma", ga)
        if self.order_phi is None:
            object.__setattr__(self, "order_phi", np.argsort(ga, kind="stable"))

    @property
    def dim(self):
        return len(self.omega)

    @property
    def omega_max(self):
        """Spectral width ``omega'_N``."""
        return float(self.omega.max())

    @property
    def gamma_max(self):
        return float(self.gamma.max())

    @property
    def gamma_phi1(self):
        """Second smallest decay rate."""
        if self.dim < 2:
            return 0.0
        return float(self.gamma[self.order_phi[1]])

    @property
    def eigenvalues(self):
        """Shifted eigenvalues ``omega' - i gamma'``."""
        return self.omega - 1j * self.gamma


def spectrum_from_eigenvalues(vals):
    """Shift a sequence of eigenvalues ``omega - i gamma`` to nonnegative rates.

    The input order is kept. Rates within ``1e-12`` (relative to the
    largest eigenvalue modulus) of zero are set to exactly zero.
    """
    vals = np.asarray(vals, dtype=complex)
    om = vals.real
    ga = -vals.imag
    shift = complex(om.min(), -ga.min())
    scale = max(1.0, float(np.abs(vals).max()))
    omp = om - om.min()
    gap = ga - ga.min()
    omp[np.abs(omp) <= SNAP * scale] = 0.0
    gap[np.abs(gap) <= SNAP * scale] = 0.0
    return ShiftedSpectrum(omp, gap, shift)


def make_spectrum(omega, gamma):
    """Spectrum from explicit rates; shifts so that both minima are zero.

    ``omega`` must be non-decreasing so that the last level carries the
    spectral width.
    """
    omega = np.asarray(omega, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if omega.shape != gamma.shape:
        raise DimensionMismatch("omega and gamma differ in length")
    if np.any(np.diff(omega) < 0):
        raise ValueError("omega must be non-decreasing")
    return ShiftedSpectrum(omega - omega.min(), gamma - gamma.min(),
                           complex(omega.min(), -gamma.min()))


def build_biorthogonal(h, tol=1e-9):
    """Right eigenvectors and their biorthogonal duals.

    Parameters
    ----------
    h : array_like, shape (n, n)
    tol : float
        Passed to :func:`eig_general`; also the relative eigenvalue gap
        below which the spectrum is declared degenerate.

    Returns
    -------
    BiorthogonalSystem

    Raises
    ------
    Degenerate
        If two eigenvalues are closer than ``tol`` times the spectral width.
    DefectiveMatrix
        From the eigensolver, at or near an exceptional point.
    """
    vals, vecs = eig_general(h, tol)
    n = len(vals)
    if n > 1:
        d = np.abs(vals[:, None] - vals[None, :])
        width = d.max()
        d[np.diag_indices(n)] = np.inf
        if width == 0.0 or d.min() <= tol * width:
            raise Degenerate(f"eigenvalue gap {d.min():.3e} below {tol:.1e} x width {width:.3e}")
    dual = np.linalg.inv(vecs)
    return BiorthogonalSystem(vals, vecs, dual)


def shift_spectrum(sys):
    """Shifted rates of a biorthogonal system (eigenvalue order preserved)."""
    return spectrum_from_eigenvalues(sys.eigenvalues)


def spectral_operators(sys, spec):
    """Hermitian-part and decay-part operators and the spectral projectors.

    Returns
    -------
    omega_op : ndarray
        ``sum_n omega'_n |psi_n><psi~_n|``
    gamma_op : ndarray
        ``sum_n gamma'_n |psi_n><psi~_n|``
    projectors : ndarray, shape (n, dim, dim)
        ``projectors[n] = |psi_n><psi~_n|``
    """
    if sys.dim != spec.dim:
        raise DimensionMismatch(f"system has {sys.dim} levels, spectrum {spec.dim}")
    proj = np.einsum("in,nj->nij", sys.right, sys.dual)
    omega_op = np.einsum("n,nij->ij", spec.omega.astype(complex), proj)
    gamma_op = np.einsum("n,nij->ij", spec.gamma.astype(complex), proj)
    return omega_op, gamma_op, proj


__all__ = [
    "BiorthogonalSystem",
    "ShiftedSpectrum",
    "build_biorthogonal",
    "shift_spectrum",
    "spectral_operators",
    "spectrum_from_eigenvalues",
    "make_spectrum",
]
