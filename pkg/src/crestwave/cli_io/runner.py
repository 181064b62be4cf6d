"""Mode dispatch: turn a validated config into artifacts on disk.

Exit code convention: 0 clean, 1 a run was stopped by the blow-up
monitor (diagnostics still written), 2 configuration or input errors.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .. import halfplane_fields as hp
from ..energy_diag import BlowupThresholds, report_for
from ..evolution import SolverConfig, Trajectory, simulate
from ..mollify_cauchy import convergence_study
from ..singular_ops import DegenerateWeight
from ..stability_compare import pair_from_trajectories, stability_report
from .checkpoint import write_checkpoint
from .config import ConfigError, RunConfig
from .csvio import (
    DISPERSION_COLUMNS,
    ENERGY_COLUMNS,
    FIELDS_COLUMNS,
    STABILITY_COLUMNS,
    STUDY_COLUMNS,
    write_rows,
)
from .initial_data import BadSpec, generate_initial

__all__ = ["RunResult", "run"]


@dataclass
class RunResult:
    exit_code: int
    artifacts: dict = dc_field(default_factory=dict)
    summary: dict = dc_field(default_factory=dict)


def _solver_config(cfg: RunConfig) -> SolverConfig:
    s = cfg.solver
    return SolverConfig(
        dt=s.dt, t_final=s.t_final, snapshot_every=s.snapshot_every,
        krasny_threshold=s.krasny_threshold, reports=s.reports,
        report_method=s.report_method,
        thresholds=BlowupThresholds(energy_max=s.energy_max,
                                    taylor_tol=s.taylor_tol,
                                    defect_max=s.defect_max))


def _energy_rows(traj: Trajectory):
    rows = []
    for rep in traj.reports or ():
        d = rep.constraint_defects
        rows.append({
            "t": rep.t, "frak_e": rep.frak_e, "curly_E": rep.curly_E,
            "Ea": rep.Ea, "Eb": rep.Eb, "E2": rep.E2, "E3": rep.E3,
            "taylor_min": rep.taylor_min, "chord_arc": rep.chord_arc,
            "defect_zt": d.get("defect_zt", 0.0),
            "defect_za": d.get("defect_za", 0.0),
        })
    return rows


def _out_path(out_dir: str, name: str) -> str:
    return name if os.path.isabs(name) else os.path.join(out_dir, name)


def _write_summary(result: RunResult, out_dir: str, name: str | None) -> None:
    if not name:
        return
    path = _out_path(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    result.artifacts["summary"] = path


def _mode_simulate(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    state0 = generate_initial(cfg.initial.as_spec(), cfg.solver.n, seed)
    traj = simulate(state0, _solver_config(cfg))
    res = RunResult(0)
    if cfg.outputs.energy_csv:
        path = _out_path(out_dir, cfg.outputs.energy_csv)
        write_rows(path, ENERGY_COLUMNS, _energy_rows(traj))
        res.artifacts["energy_csv"] = path
    if cfg.outputs.checkpoint_out:
        path = _out_path(out_dir, cfg.outputs.checkpoint_out)
        write_checkpoint(path, traj.final)
        res.artifacts["checkpoint"] = path
    res.summary = {
        "mode": "simulate", "n": cfg.solver.n, "steps": int(round(
            cfg.solver.t_final / abs(cfg.solver.dt))),
        "t_final_reached": traj.final.t,
        "snapshots": len(traj.states),
        "blowup": None if traj.blowup is None else traj.blowup.reason,
    }
    if traj.blowup is not None:
        res.exit_code = 1
    return res


def _mode_diagnose(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    state = generate_initial(cfg.initial.as_spec(), cfg.solver.n, seed)
    rep = report_for(state, method=cfg.solver.report_method)
    res = RunResult(0)
    if cfg.outputs.energy_csv:
        path = _out_path(out_dir, cfg.outputs.energy_csv)
        d = rep.constraint_defects
        write_rows(path, ENERGY_COLUMNS, [{
            "t": rep.t, "frak_e": rep.frak_e, "curly_E": rep.curly_E,
            "Ea": rep.Ea, "Eb": rep.Eb, "E2": rep.E2, "E3": rep.E3,
            "taylor_min": rep.taylor_min, "chord_arc": rep.chord_arc,
            "defect_zt": d.get("defect_zt", 0.0),
            "defect_za": d.get("defect_za", 0.0)}])
        res.artifacts["energy_csv"] = path
    res.summary = {"mode": "diagnose", "n": cfg.solver.n,
                   "curly_E": rep.curly_E, "frak_e": rep.frak_e,
                   "taylor_min": rep.taylor_min, "chord_arc": rep.chord_arc}
    return res


def _mode_compare(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    if cfg.compare is None:
        raise ConfigError("compare mode needs a [compare] section")
    if cfg.solver.snapshot_every != 1:
        raise ConfigError("compare mode needs snapshot_every = 1")
    sc = _solver_config(cfg)
    a = generate_initial(cfg.initial.as_spec(), cfg.solver.n, seed)
    b = generate_initial(cfg.compare.other_initial.as_spec(), cfg.solver.n, seed)
    ta = simulate(a, sc)
    tb = simulate(b, sc)
    pair = pair_from_trajectories(ta, tb, cfg.compare.marker_count)
    rep = stability_report(pair, cfg.compare.M, stride=cfg.compare.stride)
    rows = []
    for f in rep.frames:
        lhs_total = sum(f.lhs[k] for k in
                        ("hhalf_zt", "hhalf_za", "hhalf_ztt",
                         "l2_lalpha", "l2_dzt", "l2_A1", "l2_balpha"))
        row = {"t": f.t, "F0": f.F0, "F1": f.F1, "F2": f.F2, "F3": f.F3,
               "F": f.F, "rhs0": rep.rhs0,
               "ratio": lhs_total / rep.rhs0 if rep.rhs0 > 0 else 0.0}
        for k in ("hhalf_zt", "hhalf_za", "hhalf_ztt",
                  "l2_lalpha", "l2_dzt", "l2_A1", "l2_balpha"):
            row[k] = f.lhs[k]
        rows.append(row)
    res = RunResult(0)
    if cfg.outputs.stability_csv:
        path = _out_path(out_dir, cfg.outputs.stability_csv)
        write_rows(path, STABILITY_COLUMNS, rows)
        res.artifacts["stability_csv"] = path
    res.summary = {"mode": "compare", "M": cfg.compare.M,
                   "sup_F": rep.sup_F, "rhs0": rep.rhs0,
                   "blowup": None if (ta.blowup is None and tb.blowup is None)
                   else (ta.blowup or tb.blowup).reason}
    if ta.blowup is not None or tb.blowup is not None:
        res.exit_code = 1
    return res


def _mode_mollify(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    if cfg.mollify is None:
        raise ConfigError("mollify-study mode needs a [mollify] section")
    state0 = generate_initial(cfg.initial.as_spec(), cfg.solver.n, seed)
    sc = _solver_config(cfg)
    m = cfg.mollify
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            study = convergence_study(state0, m.eps_list, sc, m.marker_count,
                                      m.M, m.stride, map_fn=pool.map)
    else:
        study = convergence_study(state0, m.eps_list, sc, m.marker_count,
                                  m.M, m.stride)
    rows = []
    for i in range(len(study.eps) - 1):
        row = {"eps_coarse": study.eps[i], "eps_fine": study.eps[i + 1],
               "sup_F": float(study.sup_F[i])}
        for k in study.pair_norms:
            row[k] = float(study.pair_norms[k][i])
        rows.append(row)
    res = RunResult(0)
    if cfg.outputs.study_csv:
        path = _out_path(out_dir, cfg.outputs.study_csv)
        write_rows(path, STUDY_COLUMNS, rows)
        res.artifacts["study_csv"] = path
    res.summary = {
        "mode": "mollify-study", "eps": list(study.eps),
        "rates": {k: float(v) for k, v in sorted(study.rates.items())},
        "monotone": {k: bool(v) for k, v in sorted(study.monotone.items())},
        "richardson_gain": study.richardson_gain,
        "sup_F": [float(v) for v in study.sup_F],
    }
    return res


def _mode_dispersion(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    from .config import DispersionSection
    from .initial_data import linear_mode

    d = cfg.dispersion or DispersionSection()
    n = cfg.solver.n
    rows = []
    for k in d.modes:
        state0 = linear_mode(n, int(k), d.amplitude)
        sc = SolverConfig(dt=cfg.solver.dt, t_final=d.t_final,
                          snapshot_every=1, reports=False)
        traj = simulate(state0, sc)
        ts = traj.times
        coef = np.array([s.zt_bar.coeffs[-int(k) % n] for s in traj.states])
        phase = np.unwrap(np.angle(coef))
        omega = float(np.polyfit(ts, phase, 1)[0])
        exact = float(np.sqrt(k))
        rows.append({"k": int(k), "omega_measured": omega,
                     "omega_exact": exact,
                     "rel_error": abs(omega - exact) / exact})
    res = RunResult(0)
    if cfg.outputs.dispersion_csv:
        path = _out_path(out_dir, cfg.outputs.dispersion_csv)
        write_rows(path, DISPERSION_COLUMNS, rows)
        res.artifacts["dispersion_csv"] = path
    res.summary = {"mode": "dispersion",
                   "worst_rel_error": max(r["rel_error"] for r in rows),
                   "modes": [r["k"] for r in rows]}
    return res


def _mode_fields(cfg: RunConfig, out_dir: str, seed, threads) -> RunResult:
    from .config import FieldsSection

    f = cfg.fields or FieldsSection()
    state = generate_initial(cfg.initial.as_spec(), cfg.solver.n, seed)
    n = state.n
    x = 2.0 * np.pi * np.arange(n) / n
    rows = []
    for y in f.depths:
        pos = hp.map_line(state, y)
        U = hp.velocity_line(state, y).values
        p = hp.pressure_line(state, y)
        try:
            resid = np.abs(hp.euler_residual(state, y).values)
        except DegenerateWeight:
            resid = np.full(n, float("nan"))
        for j in range(n):
            rows.append({"x": x[j], "y": y,
                         "psi_re": pos[j].real, "psi_im": pos[j].imag,
                         "u_re": U[j].real, "u_im": U[j].imag,
                         "pressure": p[j], "residual": resid[j]})
    res = RunResult(0)
    if cfg.outputs.fields_csv:
        path = _out_path(out_dir, cfg.outputs.fields_csv)
        write_rows(path, FIELDS_COLUMNS, rows)
        res.artifacts["fields_csv"] = path
    res.summary = {"mode": "fields", "depths": list(f.depths), "n": n}
    return res


_DISPATCH = {
    "simulate": _mode_simulate,
    "diagnose": _mode_diagnose,
    "compare": _mode_compare,
    "mollify-study": _mode_mollify,
    "dispersion": _mode_dispersion,
    "fields": _mode_fields,
}


def run(cfg: RunConfig, out_dir: str = ".", seed: int | None = None,
        threads: int = 1) -> RunResult:
    """Execute one configured job and write its artifacts."""
    if cfg.mode is None:
        raise ConfigError("config has no mode and no subcommand provided")
    os.makedirs(out_dir, exist_ok=True)
    try:
        result = _DISPATCH[cfg.mode](cfg, out_dir, seed, max(1, threads))
    except (BadSpec, ConfigError):
        raise
    except DegenerateWeight as exc:
        result = RunResult(1, summary={"mode": cfg.mode, "error": str(exc)})
    result.summary.setdefault("mode", cfg.mode)
    result.summary["exit_code"] = result.exit_code
    _write_summary(result, out_dir, cfg.outputs.summary_json)
    return result
