"""Fastest initial state of a random dissipative spectrum.

We draw a four-level spectrum, build its fastest initial state, and watch
the survival amplitude hit zero at pi / w'_N. Both bound functionals sit at
pi/2 there. A random state on the same spectrum is slower and its
functionals overshoot pi/2 at its own orthogonality time (if it has one).
"""

import math

import numpy as np

from nhqsl import bounds
from nhqsl.analysis import fis
from nhqsl.biortho import make_spectrum
from nhqsl.dynamics import EigenbasisState, orthogonality_time, survival_curve

rng = np.random.default_rng(1)
omega = np.sort(np.r_[0.0, rng.uniform(0, 3, 2), 3.0])
gamma = np.r_[0.0, rng.uniform(0, 1, 3)]
spec = make_spectrum(omega, gamma)
print("w' =", np.round(spec.omega, 4), " g' =", np.round(spec.gamma, 4))

st = fis(spec)
tmin = math.pi / spec.omega_max
print("FIS populations:", np.round(st.populations, 4))
print(f"tau_FIS = {orthogonality_time(st, spec):.12f}  pi/w'_N = {tmin:.12f}")
print(f"F_ML = {bounds.f_ml(st, spec, tmin).value:.12f}  F_MT = {bounds.f_mt(st, spec, tmin).value:.12f}")

t = np.linspace(0, 2 * tmin, 9)
print("|S(t)| on [0, 2 tau_min]:", np.round(np.abs(survival_curve(st.populations, spec, t)), 4))

# a generic state: usually never orthogonal in a dissipative spectrum
other = EigenbasisState.from_populations(rng.dirichlet(np.ones(4)))
tau = orthogonality_time(other, spec)
print("random state populations:", np.round(other.populations, 4), " tau =", tau)
print("combined lower bound on its tau:", bounds.tau_comb(other, spec, 8 * tmin))
