"""Random states on the three-coil wireless power transfer chain.

In the PT-unbroken phase (kappa = 2.5) the spectrum is real, so the bounds
reduce to their Hermitian forms and no state beats pi / (2 sqrt(11.5)).
Uniform random states almost never reach an exact zero of S(t), so we also
draw states on the orthogonal set directly. In the broken phase
(kappa = 0.5) no state ever becomes orthogonal.
"""

import math

import numpy as np

from nhqsl import bounds
from nhqsl.dynamics import orthogonality_times
from nhqsl.models import WptParams, wpt_eigenvalues, wpt_tau_min
from nhqsl.scatter import RunConfig, run_scatter, sample_orthogonal_populations, wpt_system

params, spec = wpt_system({"kappa": 2.5, "eta": 1.0, "sigma": 1.0})
print("eigenvalues:", np.round(wpt_eigenvalues(params), 6))
print(f"tau_min = {wpt_tau_min(params):.12f}")

records, summary = run_scatter(RunConfig(n_states=10000, seed=42, inject_fis=True))
print(f"random corpus: {summary.n_absent} of {summary.n_states} never orthogonal, "
      f"min tau = {summary.min_tau}, violations = {summary.n_violations}")

p, _ = sample_orthogonal_populations(spec, 5000, seed=7)
tau = orthogonality_times(p, spec)
ml = bounds.ml_kernel(p, spec, tau)[0]
mt = bounds.mt_kernel(p, spec, tau)[0]
print(f"orthogonal corpus: min tau = {np.nanmin(tau):.6f}, "
      f"min F_ML = {ml.min():.6f}, min F_MT = {mt.min():.6f} (pi/2 = {math.pi / 2:.6f})")

_, summary = run_scatter(RunConfig(model={"kappa": 0.5, "eta": 1.0, "sigma": 1.0},
                                   n_states=1000, seed=9, horizon=50.0))
print(f"broken phase: {summary.n_absent} of 1000 never orthogonal within t = 50")
print("broken-phase eigenvalues:", np.round(wpt_eigenvalues(WptParams(1.0, 1.0, 0.5)), 6))
