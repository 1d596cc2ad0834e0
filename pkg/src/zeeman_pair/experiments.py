"""Named experiments shared by the command line and the demo scripts.

Each experiment returns an :class:`ExperimentResult` holding one CSV table,
optional plot series and a list of tolerance checks.  Nothing here touches
the filesystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import SimulationConfig, scheme_levels
from .coupling import Geometry, coupling_closed_form, coupling_from_tensor
from .dynamics import evolve, ground_state, pure_state, verify_evolution_equivalence
from .fewlevel import TruncationScheme, breakdown_report, large_delta_decoupling_check
from .operators import SystemParams
from .spectra import (
    dissipator_rotation_residual,
    hamiltonian_rotation_residual,
    spectrum_distance,
    spectrum_dipole,
    spectrum_full,
    symmetric_state,
)

__all__ = ["Check", "ExperimentResult", "EXPERIMENTS", "run", "random_geometry", "random_axis"]

DEFAULT_SEED = 20080101


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    kind: str = "<"

    @property
    def passed(self) -> bool:
        if self.kind == "<":
            return bool(self.value < self.tolerance)
        return bool(self.value > self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "kind": self.kind, "passed": self.passed}


@dataclass
class ExperimentResult:
    name: str
    header: list
    rows: list
    checks: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    plot: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_axis(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_geometry(rng: np.random.Generator, r_range=(0.05, 5.0), R=None) -> Geometry:
    """Uniform direction on the sphere; R uniform in ``r_range`` unless fixed."""
    r = rng.uniform(*r_range) if R is None else R
    return Geometry(r, math.acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 2.0 * math.pi))


def random_density_matrix(rng: np.random.Generator, dim: int = 16) -> np.ndarray:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def _couplings(cfg: SimulationConfig, rng) -> ExperimentResult:
    g = cfg.geometry
    c = coupling_from_tensor(g)
    ref = coupling_closed_form(g)
    header = ["R", "theta", "phi", "eta"]
    row = [g.R, g.theta, g.phi, g.eta]
    for name, mat in (("omega", c.omega), ("gamma", c.gamma)):
        for i in range(3):
            for j in range(i + 1):
                header += [f"{name}_{i + 1}{j + 1}_re", f"{name}_{i + 1}{j + 1}_im"]
                row += [mat[i, j].real, mat[i, j].imag]
    worst = 0.0
    for a, b in ((c.omega, ref.omega), (c.gamma, ref.gamma)):
        diff = np.abs(a - b)
        scale = np.maximum(np.abs(a), np.abs(b))
        rel = np.where(diff < 1e-14, 0.0, diff / np.where(scale > 0, scale, 1.0))
        worst = max(worst, float(rel.max()))
    checks = [Check("closed-form agreement (relative, abs floor 1e-14)", worst, 1e-12)]
    return ExperimentResult("couplings", header, [row], checks)


def _spectrum(cfg: SimulationConfig, rng) -> ExperimentResult:
    g, delta = cfg.geometry, cfg.params.delta
    dip = spectrum_dipole(g)
    full = spectrum_full(g, delta)
    rows = [[k, dip.eigenvalues[k], dip.block_labels[k], full.eigenvalues[k], full.block_labels[k]]
            for k in range(len(dip.eigenvalues))]
    dip_var = full_var = phi_var = 0.0
    for _ in range(cfg.run.samples):
        other = random_geometry(rng, R=g.R)
        dip_var = max(dip_var, spectrum_distance(dip, spectrum_dipole(other)))
        if delta == 0.0:
            full_var = max(full_var, spectrum_distance(full, spectrum_full(other, delta)))
        phi_var = max(phi_var, spectrum_distance(full, spectrum_full(Geometry(g.R, g.theta, other.phi), delta)))
    checks = [
        Check("H_Omega spectrum variation over orientations", dip_var, 1e-10),
        Check("H_A + H_Omega spectrum variation over phi", phi_var, 1e-10),
    ]
    if delta == 0.0:
        checks.append(Check("H_A + H_Omega spectrum variation over orientations (delta=0)", full_var, 1e-10))
    header = ["k", "h_omega", "h_omega_sector", "h_full", "h_full_sector"]
    return ExperimentResult("spectrum", header, rows, checks)


def _verify_theorem(cfg: SimulationConfig, rng) -> ExperimentResult:
    rows = []
    h_worst = l_worst = 0.0
    n_l = max(1, cfg.run.samples // 4)
    for k in range(cfg.run.samples):
        g = random_geometry(rng)
        u = random_axis(rng)
        alpha = rng.uniform(0.0, 2.0 * math.pi)
        h_res = hamiltonian_rotation_residual(g, u, alpha)
        l_res = float("nan")
        if k < n_l:
            states = [random_density_matrix(rng) for _ in range(cfg.run.states)]
            l_res = dissipator_rotation_residual(g, u, alpha, states)
            l_worst = max(l_worst, l_res)
        h_worst = max(h_worst, h_res)
        rows.append([k, g.R, g.theta, g.phi, *u, alpha, h_res, l_res])
    header = ["sample", "R", "theta", "phi", "axis_x", "axis_y", "axis_z", "angle",
              "hamiltonian_residual", "dissipator_residual"]
    checks = [
        Check("max |H_Omega(P) - W H_Omega(R) W^+|", h_worst, 1e-10),
        Check("max |L(P) rho - W[L(R)(W^+ rho W)]W^+|", l_worst, 1e-10),
    ]
    return ExperimentResult("verify-theorem", header, rows, checks)


def _leakage(cfg: SimulationConfig, rng) -> ExperimentResult:
    run = cfg.run
    traj = evolve(ground_state(), cfg.params, cfg.geometry, run.t_end, run.output_dt, dt=run.integrator_dt)
    obs = traj.observables
    header = ["t", "P_S", "P_V", "P_rest", "trace_err", "min_eig"]
    rows = [[traj.times[k]] + [obs[h][k] for h in header[1:]] for k in range(len(traj.times))]
    c = coupling_from_tensor(cfg.geometry)
    checks = [
        Check("trace error", traj.trace_error, 1e-8),
        Check("-min eigenvalue", -traj.min_eigenvalue, 1e-8),
        Check("hermiticity error", traj.hermiticity_error(), 1e-10),
    ]
    level2_decoupled = max(abs(c.omega[1, 0]), abs(c.gamma[1, 0]), abs(c.omega[2, 1]), abs(c.gamma[2, 1])) < 1e-14
    closure = float(np.abs(obs["P_S"] + obs["P_V"] - 1.0).max())
    if level2_decoupled:
        checks.append(Check("|P_S + P_V - 1|", closure, 1e-8))
    diagnostics = {"dt": traj.dt, "step_halving_change": traj.step_error,
                   "min_P_S": float(obs["P_S"].min()), "max_P_rest": float(obs["P_rest"].max()),
                   "max_trace_err": traj.trace_error, "min_eig": traj.min_eigenvalue,
                   "closure_error": closure}
    plot = {"x": traj.times, "series": {"P_S": obs["P_S"], "P_V": obs["P_V"]},
            "xlabel": "gamma t", "ylabel": "population"}
    return ExperimentResult("leakage", header, rows, checks, diagnostics, plot)


def _equivalence(cfg: SimulationConfig, rng) -> ExperimentResult:
    params = SystemParams(delta=cfg.params.delta)
    if params.delta != 0.0:
        u = np.array([0.0, 0.0, 1.0])
    else:
        u = random_axis(rng)
    alpha = rng.uniform(0.0, 2.0 * math.pi)
    rho0 = pure_state(symmetric_state(3))
    dev = verify_evolution_equivalence(cfg.geometry, u, alpha, params, rho0, cfg.run.t_end,
                                       output_dt=cfg.run.output_dt, dt=cfg.run.integrator_dt)
    header = ["axis_x", "axis_y", "axis_z", "angle", "t_end", "max_deviation"]
    rows = [[*u, alpha, cfg.run.t_end, dev]]
    return ExperimentResult("equivalence", header, rows, [Check("max |rho(P) - W rho(R) W^+|", dev, 1e-8)])


def _breakdown(cfg: SimulationConfig, rng) -> ExperimentResult:
    scheme = TruncationScheme(scheme_levels(cfg.run.scheme))
    thetas = np.linspace(0.0, math.pi / 2.0, cfg.run.n_theta)
    rep = breakdown_report(scheme, cfg.geometry.R, thetas, cfg.geometry.phi)
    nf, nt = rep.full_spectra.shape[1], rep.truncated_spectra.shape[1]
    header = (["theta"] + [f"full_{k}" for k in range(nf)] + [f"truncated_{k}" for k in range(nt)]
              + ["splitting_2abs_omega22"])
    rows = [[th, *fs, *ts, sp] for th, fs, ts, sp in rep.rows()]
    checks = [Check("full H_Omega spectrum variation over theta", rep.full_variation, 1e-10)]
    diagnostics = {"scheme": scheme.name, "truncated_variation": rep.truncated_variation,
                   "full_variation": rep.full_variation,
                   "splitting_relative_variation": float((rep.splitting.max() - rep.splitting.min())
                                                         / rep.splitting.max())}
    plot = {"x": thetas, "series": {"truncated max eigenvalue": rep.truncated_spectra[:, -1],
                                     "full max eigenvalue": rep.full_spectra[:, -1]},
            "xlabel": "theta (rad)", "ylabel": "eigenvalue / gamma"}
    return ExperimentResult("breakdown", header, rows, checks, diagnostics, plot)


def _decoupling(cfg: SimulationConfig, rng) -> ExperimentResult:
    params = cfg.params
    rep = large_delta_decoupling_check(cfg.geometry, params, t_end=min(cfg.run.t_end, 3.0))
    header = ["multiple", "delta", "max_abs_dP_S"]
    multiples = (10.0, 100.0, 1000.0)
    rows = [[m, d, v] for m, d, v in zip(multiples, rep.deltas, rep.deviations)]
    checks = [Check("deviation decreases with delta (1 = yes)", float(rep.monotone), 0.5, kind=">")]
    return ExperimentResult("decoupling", header, rows, checks, {"max_cross": rep.max_cross})


EXPERIMENTS = {
    "couplings": _couplings,
    "spectrum": _spectrum,
    "verify-theorem": _verify_theorem,
    "leakage": _leakage,
    "equivalence": _equivalence,
    "breakdown": _breakdown,
    "decoupling": _decoupling,
}


def run(name: str, cfg: SimulationConfig, seed: int | None = None) -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    return EXPERIMENTS[name](cfg, rng)
