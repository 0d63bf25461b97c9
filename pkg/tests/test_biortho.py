import math

import numpy as np
import pytest

from nhqsl.biortho import (build_biorthogonal, make_spectrum, shift_spectrum,
                           spectral_operators, spectrum_from_eigenvalues)
from nhqsl.dynamics import decompose_state, survival_curve
from nhqsl.errors import Degenerate, DimensionMismatch
from nhqsl.linalg import expm_apply
from nhqsl.models import WptParams, wpt_matrix

from conftest import SQRT115, random_matrix


def _check_biortho(sys, tol=1e-10):
    n = sys.dim
    assert np.allclose(sys.left.conj().T @ sys.right, np.eye(n), atol=tol)
    assert np.allclose(sys.right @ sys.dual, np.eye(n), atol=1e-9)
    assert np.allclose(np.linalg.norm(sys.right, axis=0), 1.0)


def test_hermitian_flip():
    sys = build_biorthogonal([[0, 1], [1, 0]])
    _check_biortho(sys)
    for k in range(2):
        # left equals right up to a phase
        assert abs(abs(np.vdot(sys.left[:, k], sys.right[:, k])) - 1) < 1e-12
        assert abs(np.linalg.norm(sys.left[:, k]) - 1) < 1e-12


@pytest.mark.parametrize("kappa", [2.5, 0.5])
def test_wpt_biorthonormal(kappa):
    sys = build_biorthogonal(wpt_matrix(WptParams(1.0, 1.0, kappa)))
    _check_biortho(sys)
    if kappa == 0.5:
        r = math.sqrt(0.5)
        assert np.allclose(sorted(sys.eigenvalues.imag), [-r, 0, r], atol=1e-12)
        assert np.allclose(sys.eigenvalues.real, 1.0, atol=1e-12)


def test_degenerate():
    with pytest.raises(Degenerate):
        build_biorthogonal(np.eye(2))


def test_shift_examples():
    s = spectrum_from_eigenvalues([2, 5])
    assert np.allclose(s.omega, [0, 3]) and np.all(s.gamma == 0) and s.shift == 2
    s = spectrum_from_eigenvalues([0, 2 - 1j])
    assert np.allclose(s.omega, [0, 2]) and np.allclose(s.gamma, [0, 1]) and s.shift == 0


def test_shift_wpt(wpt_spec):
    assert np.allclose(wpt_spec.omega, [0, SQRT115, 2 * SQRT115], atol=1e-12)
    assert np.all(wpt_spec.gamma == 0)
    assert wpt_spec.omega.min() == 0 and wpt_spec.gamma.min() == 0


def test_order_phi():
    s = make_spectrum([0, 1, 2, 3], [0.7, 0.0, 2.0, 0.3])
    assert np.all(np.diff(s.gamma[s.order_phi]) >= 0)
    assert s.gamma_phi1 == pytest.approx(0.3) and s.gamma_max == pytest.approx(2.0)


def test_make_spectrum_requires_sorted_omega():
    with pytest.raises(ValueError):
        make_spectrum([1, 0], [0, 0])


def test_spectral_operators_wpt(wpt_sys, wpt_spec):
    om, ga, proj = spectral_operators(wpt_sys, wpt_spec)
    h = wpt_matrix(WptParams(1.0, 1.0, 2.5))
    assert np.allclose(ga, 0, atol=1e-12)
    assert np.allclose(om, h - (1 - SQRT115) * np.eye(3), atol=1e-9)
    assert np.allclose(proj.sum(axis=0), np.eye(3), atol=1e-9)


def test_spectral_operators_dissipative():
    rng = np.random.default_rng(4)
    for dim in (2, 3, 4, 5):
        h = random_matrix(rng, dim)
        sys = build_biorthogonal(h)
        spec = shift_spectrum(sys)
        om, ga, proj = spectral_operators(sys, spec)
        assert np.allclose(om - 1j * ga, h - spec.shift * np.eye(dim), atol=1e-9)
        for n in range(dim):
            for m in range(dim):
                want = proj[n] if n == m else 0
                assert np.allclose(proj[n] @ proj[m], want, atol=1e-9)


def test_spectral_operators_mismatch(wpt_sys):
    with pytest.raises(DimensionMismatch):
        spectral_operators(wpt_sys, make_spectrum([0, 1], [0, 0]))


def test_shift_neutrality():
    rng = np.random.default_rng(9)
    for dim in (2, 3, 4):
        h = random_matrix(rng, dim)
        sys = build_biorthogonal(h)
        spec = shift_spectrum(sys)
        sys2 = build_biorthogonal(h - spec.shift * np.eye(dim))
        spec2 = shift_spectrum(sys2)
        assert np.allclose(spec2.omega, spec.omega, atol=1e-9)
        assert np.allclose(spec2.gamma, spec.gamma, atol=1e-9)
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        t = np.linspace(0, 3, 7)
        s1 = survival_curve(decompose_state(sys, psi).populations, spec, t)
        s2 = survival_curve(decompose_state(sys2, psi).populations, spec2, t)
        assert np.allclose(s1, s2, atol=1e-9)


def test_decay_convention():
    h = np.array([[0, 0.3], [0.2, 2 - 1j]])
    sys = build_biorthogonal(h)
    spec = shift_spectrum(sys)
    psi = np.array([1.0, 1.0j])
    c0 = sys.dual @ psi
    for t in (0.5, 1.0, 2.0):
        ct = sys.dual @ expm_apply(-1j * (h - spec.shift * np.eye(2)), t, psi)
        assert np.allclose(np.abs(ct), np.exp(-spec.gamma * t) * np.abs(c0), atol=1e-10)
