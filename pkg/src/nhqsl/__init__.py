"""Quantum speed limits for non-Hermitian Hamiltonians.

Biorthogonal eigensystems, survival amplitudes and orthogonality times,
ML/MT-type bounds and their weak and geometric variants, fastest initial
states and the two-level and WPT model systems.
"""

from .analysis import (alpha_ratio, delta_tau_scan, fis, near_fis_above_one,
                       near_fis_below_one)
from .biortho import (BiorthogonalSystem, ShiftedSpectrum, build_biorthogonal,
                      make_spectrum, shift_spectrum, spectrum_from_eigenvalues)
from .bounds import (BoundKind, f_g_two_level, f_ml, f_mt, f_weak, solve_tau_g,
                     tau_bound, tau_comb, tau_g_closed)
from .dynamics import (EigenbasisState, decompose_state, orthogonality_time,
                       survival_amplitude, survival_curve)
from .errors import *  # noqa: F401,F403
from .linalg import eig_general, expm, expm_apply, find_root_bracketed
from .models import (StateAngles, TwoLevelCanonical, TwoLevelParams, WptParams,
                     build_two_level, build_wpt, two_level_bounds)
from .scatter import RunConfig, run_scatter, sample_random_states

__version__ = "0.1.0"
