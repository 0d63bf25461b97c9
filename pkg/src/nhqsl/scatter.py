"""Random-state corpora and the scatter experiment.

States are drawn by populations on the eigenbasis simplex plus uniform
phases. Only populations enter the survival amplitude, so phases are kept
for the record but do not affect any time or bound.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds
from .analysis import fis_populations
from .biortho import build_biorthogonal, shift_spectrum
from .dynamics import EigenbasisState, default_horizon, orthogonality_times
from .models import WptParams, build_wpt, wpt_tau_min

log = logging.getLogger(__name__)

SAMPLING_LAW = "populations uniform on the eigenbasis simplex, phases uniform on [0, 2pi)"


def _rng(seed):
    # counter-based generator: streams depend only on the seed
    return np.random.Generator(np.random.Philox(int(seed) % 2 ** 64))


def sample_populations(dim, n, seed):
    """``(n, dim)`` populations uniform on the simplex (normalized exponentials)."""
    if dim < 2 or n < 1:
        raise ValueError("need dim >= 2 and n >= 1")
    e = _rng(seed).standard_exponential((n, dim))
    return e / e.sum(axis=1, keepdims=True)


def sample_random_coeffs(dim, n, seed):
    """``(n, dim)`` complex coefficients with simplex populations and uniform phases."""
    if dim < 2 or n < 1:
        raise ValueError("need dim >= 2 and n >= 1")
    rng = _rng(seed)
    e = rng.standard_exponential((n, dim))
    p = e / e.sum(axis=1, keepdims=True)
    ph = rng.uniform(0.0, 2.0 * math.pi, (n, dim))
    c = np.sqrt(p) * np.exp(1j * ph)
    # renormalize away the rounding of sqrt(p)^2
    return c / np.sqrt(np.sum(np.abs(c) ** 2, axis=1, keepdims=True))


def sample_random_states(dim, n, seed):
    """List of ``n`` random :class:`EigenbasisState` objects of size ``dim``."""
    return [EigenbasisState(c) for c in sample_random_coeffs(dim, n, seed)]


def sample_orthogonal_populations(spec, n, seed, t_max=None, max_tries=200):
    """Populations that become orthogonal at a random time.

    For each draw, ``t`` is uniform on ``[pi / w'_N, t_max]`` and a random
    simplex point is projected onto the affine set
    ``{sum p = 1, Re S(t) = 0, Im S(t) = 0}``; draws leaving the simplex
    are rejected. Rows are NaN where ``max_tries`` draws all failed.

    Returns
    -------
    p : ndarray, shape (n, dim)
    t : ndarray, shape (n,)
        The time at which each row is orthogonal (not necessarily the first).
    """
    if spec.omega_max <= 0:
        raise ValueError("spectrum has zero width")
    tmin = math.pi / spec.omega_max
    if t_max is None:
        t_max = 4.0 * tmin
    rng = _rng(seed)
    dim = spec.dim
    out = np.full((n, dim), np.nan)
    times = np.full(n, np.nan)
    todo = np.arange(n)
    for _ in range(max_tries):
        if len(todo) == 0:
            break
        m = len(todo)
        t = rng.uniform(tmin, t_max, m)
        e = rng.standard_exponential((m, dim))
        p0 = e / e.sum(axis=1, keepdims=True)
        w = np.exp(-t[:, None] * spec.gamma)
        a = np.stack([np.ones((m, dim)), w * np.cos(t[:, None] * spec.omega),
                      w * np.sin(t[:, None] * spec.omega)], axis=1)
        b = np.array([1.0, 0.0, 0.0])
        # minimum-norm correction: p = p0 - A^T (A A^T)^+ (A p0 - b)
        res = np.einsum("mij,mj->mi", a, p0) - b
        gram = np.einsum("mij,mkj->mik", a, a)
        lam = np.einsum("mij,mj->mi", np.linalg.pinv(gram), res)
        p = p0 - np.einsum("mij,mi->mj", a, lam)
        ok = np.all(p >= 0, axis=1) & (np.abs(np.einsum("mij,mj->mi", a, p) - b).max(axis=1) < 1e-10)
        idx = todo[ok]
        out[idx] = p[ok] / p[ok].sum(axis=1, keepdims=True)
        times[idx] = t[ok]
        todo = todo[~ok]
    if len(todo):
        log.warning("%d of %d orthogonal draws failed", len(todo), n)
    return out, times


@dataclass
class RunConfig:
    """Parameters of one CLI run.

    ``model`` holds the physical parameters (``kappa``, ``eta``, ``sigma``).
    """

    command: str = "scatter"
    model: dict = field(default_factory=lambda: {"kappa": 2.5, "eta": 1.0, "sigma": 1.0})
    seed: int = 0
    n_states: int = 1000
    horizon: Optional[float] = None
    eps: float = 1e-8
    output_path: Optional[str] = None
    format: str = "csv"
    inject_fis: bool = False

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be at least 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.horizon is not None and not self.horizon > 0:
            raise ValueError("horizon must be positive")


@dataclass(frozen=True)
class ScatterRecord:
    state_id: int
    tau: Optional[float]
    f_ml: Optional[float]
    f_mt: Optional[float]
    coeffs: np.ndarray


@dataclass(frozen=True)
class ScatterSummary:
    n_states: int
    min_tau: Optional[float]
    n_absent: int
    n_violations: int
    tau_floor: Optional[float]


def wpt_system(model):
    """Shifted spectrum of the WPT chain described by ``model``."""
    p = WptParams(model.get("sigma", 1.0), model.get("eta", 1.0), model.get("kappa", 2.5))
    h, _ = build_wpt(p)
    sys = build_biorthogonal(h)
    return p, shift_spectrum(sys)


def evaluate_states(coeffs, spec, horizon, eps=1e-8, tau_floor=None):
    """Orthogonality time and both functionals for each row of coefficients.

    Returns
    -------
    records : list of ScatterRecord
    summary : ScatterSummary
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    p = np.abs(coeffs) ** 2
    tau = orthogonality_times(p, spec, horizon, eps)
    found = ~np.isnan(tau)
    ml = np.full(len(p), np.nan)
    mt = np.full(len(p), np.nan)
    if found.any():
        ml[found] = bounds.ml_kernel(p[found], spec, tau[found])[0]
        mt[found] = bounds.mt_kernel(p[found], spec, tau[found])[0]
    bad = found & ((ml < bounds.HALF_PI - 1e-8) | (mt < bounds.HALF_PI - 1e-8))
    if tau_floor is not None:
        bad |= found & (tau < tau_floor - 1e-6)
    records = []
    for i in range(len(p)):
        ok = bool(found[i])
        records.append(ScatterRecord(i, float(tau[i]) if ok else None,
                                     float(ml[i]) if ok else None,
                                     float(mt[i]) if ok else None, coeffs[i]))
    summary = ScatterSummary(len(p), float(np.min(tau[found])) if found.any() else None,
                             int(np.sum(~found)), int(np.sum(bad)), tau_floor)
    return records, summary


def run_scatter(config):
    """Random-state scatter on the WPT chain.

    With ``inject_fis`` the fastest initial state replaces ``state_id 0``.
    Records are written to ``config.output_path`` when it is set.

    Returns
    -------
    records : list of ScatterRecord
    summary : ScatterSummary
    """
    params, spec = wpt_system(config.model)
    coeffs = sample_random_coeffs(spec.dim, config.n_states, config.seed)
    if config.inject_fis:
        coeffs[0] = np.sqrt(fis_populations(spec))
    horizon = config.horizon
    if horizon is None:
        horizon = default_horizon(spec) if spec.omega_max > 0 else 50.0
    records, summary = evaluate_states(coeffs, spec, horizon, config.eps, wpt_tau_min(params))
    if config.output_path:
        write_records(records, config.output_path, config.format, summary)
    return records, summary


def _fmt(x):
    return "" if x is None else "%.17g" % x


def record_columns(dim):
    cols = ["state_id", "tau", "f_ml", "f_mt"]
    for i in range(dim):
        cols += [f"c_re_{i}", f"c_im_{i}"]
    return cols


def write_records(records, dest, fmt="csv", summary=None):
    """Write scatter records as CSV (``%.17g`` floats, empty when absent) or JSON.

    ``dest`` is a path or an open text handle.
    """
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        with open(dest, "w", newline="") as fh:
            write_records(records, fh, fmt, summary)
        return
    fh = dest
    dim = len(records[0].coeffs) if records else 0
    if fmt == "csv":
        fh.write(f"# sampling: {SAMPLING_LAW}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(record_columns(dim))
        for r in records:
            row = [str(r.state_id), _fmt(r.tau), _fmt(r.f_ml), _fmt(r.f_mt)]
            for c in r.coeffs:
                row += [_fmt(c.real), _fmt(c.imag)]
            w.writerow(row)
    elif fmt == "json":
        doc = {"sampling": SAMPLING_LAW,
               "records": [{"state_id": r.state_id, "tau": r.tau, "f_ml": r.f_ml, "f_mt": r.f_mt,
                            "coeffs": [[float(c.real), float(c.imag)] for c in r.coeffs]}
                           for r in records]}
        if summary is not None:
            doc["summary"] = summary.__dict__
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
