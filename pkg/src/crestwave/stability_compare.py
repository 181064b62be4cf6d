"""Comparison of two evolved surfaces after marker realignment.

Two solutions computed in their own parametrizations are compared by
the change of variables l that matches their Lagrangian markers: l maps
the position of a marker of the base run to the position of the same
marker of the other run. The comparison functional

    F = M F0 + F1 + F2 + 1/M F3

combines the stretch defect of l with weighted misfits of the Taylor
weight, the transport-derivative coefficient, and the acceleration
coefficient, plus signed half-norm pairings of the trace differences.
All slots are assembled in division-free form, so the functional stays
evaluable on degenerating surfaces.

The interpolation of l uses shape-preserving cubic (pchip) pieces over
the marker pairs, which keeps l monotone whenever the marker data is;
its stretch l_alpha is interpolated from the honestly tracked marker
Jacobians rather than differentiated from l.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .evolution import MarkerPaths, SolverConfig, Trajectory, lagrangian_markers, simulate
from .spectral_core import Field, grid, hhalf_pairing, norm_hhalf, norm_l2, norm_linf
from .state_model import WaterWaveState, derive

__all__ = [
    "DEFAULT_M",
    "SolutionPair",
    "StabilityFrame",
    "StabilityReport",
    "make_pair",
    "pair_from_trajectories",
    "build_l",
    "functionals_F",
    "stability_report",
]

DEFAULT_M = 4.0


@dataclass(frozen=True)
class SolutionPair:
    base: Trajectory
    other: Trajectory
    markers_base: MarkerPaths
    markers_other: MarkerPaths


@dataclass(frozen=True)
class StabilityFrame:
    t: float
    F0: float
    F1: float
    F2: float
    F3: float
    F: float
    lhs: dict
    l_alpha_min: float


@dataclass(frozen=True)
class StabilityReport:
    frames: tuple
    M: float
    rhs0: float          # F(0) plus the sup-norm misfit of the reciprocal traces
    sup_F: float

    @property
    def times(self) -> np.ndarray:
        return np.array([f.t for f in self.frames])

    def series(self, key: str) -> np.ndarray:
        if key in ("F0", "F1", "F2", "F3", "F"):
            return np.array([getattr(f, key) for f in self.frames])
        return np.array([f.lhs[key] for f in self.frames])


def pair_from_trajectories(ta: Trajectory, tb: Trajectory,
                           marker_count: int = 64,
                           substeps: int = 2) -> SolutionPair:
    """Build a comparison pair from already-computed runs."""
    if ta.snapshot_every != 1 or tb.snapshot_every != 1:
        raise ValueError("pair comparison needs snapshot_every == 1")
    m = min(len(ta.states), len(tb.states))
    if m < len(ta.states) or m < len(tb.states):
        ta = Trajectory(ta.states[:m], ta.dt, 1, ta.defects[:m], None, ta.blowup)
        tb = Trajectory(tb.states[:m], tb.dt, 1, tb.defects[:m], None, tb.blowup)
    ma = lagrangian_markers(ta, marker_count, substeps)
    mb = lagrangian_markers(tb, marker_count, substeps)
    return SolutionPair(ta, tb, ma, mb)


def make_pair(state_a: WaterWaveState, state_b: WaterWaveState,
              config: SolverConfig, marker_count: int = 64,
              substeps: int = 2) -> SolutionPair:
    """Evolve both states under the same solver settings and track markers."""
    if config.snapshot_every != 1:
        raise ValueError("pair comparison needs snapshot_every == 1")
    ta = simulate(state_a, config)
    tb = simulate(state_b, config)
    return pair_from_trajectories(ta, tb, marker_count, substeps)


def _periodic_pchip(x: np.ndarray, y: np.ndarray, query: np.ndarray) -> np.ndarray:
    # one period of (x, y-periodic-part) extended a full period both ways
    xs = np.concatenate([x - 2.0 * np.pi, x, x + 2.0 * np.pi])
    ys = np.concatenate([y, y, y])
    return PchipInterpolator(xs, ys)(query)


def build_l(h: np.ndarray, h_other: np.ndarray,
            logj: np.ndarray, logj_other: np.ndarray, n: int):
    """Realignment map and its stretch on the n-point grid.

    h, h_other: marker positions of the two runs (same marker labels);
    logj, logj_other: their tracked log Jacobians. Returns (l, l_alpha)
    as real arrays at the grid nodes; l carries the full map (identity
    plus periodic part), l_alpha the Jacobian ratio.
    """
    alpha = grid(n)
    base = np.mod(h, 2.0 * np.pi)
    order = np.argsort(base)
    shift = h_other - h
    ratio = np.exp(logj_other - logj)
    l = alpha + _periodic_pchip(base[order], shift[order], alpha)
    l_alpha = 1.0 + _periodic_pchip(base[order], ratio[order] - 1.0, alpha)
    return l, l_alpha


def _compose(f: Field, l: np.ndarray) -> Field:
    from .spectral_core import evaluate_at
    return Field(evaluate_at(f, l))


def functionals_F(state_a: WaterWaveState, state_b: WaterWaveState,
                  l: np.ndarray, l_alpha: np.ndarray,
                  M: float = DEFAULT_M) -> StabilityFrame:
    """Evaluate the comparison functionals at one time."""
    n = state_a.n
    da = derive(state_a, third_order=True)
    db = derive(state_b, third_order=True)

    A1a = da.A1.values.real
    A1b_l = _compose(db.A1, l).values.real
    la = np.asarray(l_alpha, float)
    w = np.sqrt(np.maximum(la, 0.0) / (A1a * A1b_l))  # kappa / A1

    def wint(slot: np.ndarray) -> float:
        return float(np.sum(w * np.abs(slot) ** 2) * 2.0 * np.pi / n)

    d_zt = (state_a.zt_bar - _compose(state_b.zt_bar, l))
    d_za = (state_a.inv_za - _compose(state_b.inv_za, l))
    d_ztt = (da.ztt_bar - _compose(db.ztt_bar, l))

    slot1 = A1a - A1b_l
    coefa = (da.b_alpha - da.dzt).values
    coefb_l = _compose(db.b_alpha - db.dzt, l).values
    slot2 = coefa - coefb_l
    acc_a = (da.A1 * (da.at_over_a + da.dzt.conj())).values
    acc_b = _compose(db.A1 * (db.at_over_a + db.dzt.conj()), l).values
    slot3 = acc_a - acc_b

    F0 = norm_l2(Field((la - 1.0).astype(complex))) ** 2
    F1 = wint(slot1) + hhalf_pairing(d_zt)
    F2 = wint(slot2) + hhalf_pairing(d_za)
    F3 = wint(slot3) + hhalf_pairing(d_ztt)
    F = M * F0 + F1 + F2 + F3 / M

    lhs = {
        "hhalf_zt": norm_hhalf(d_zt) ** 2,
        "hhalf_za": norm_hhalf(d_za) ** 2,
        "hhalf_ztt": norm_hhalf(d_ztt) ** 2,
        "l2_lalpha": F0,
        "l2_dzt": norm_l2(da.dzt - _compose(db.dzt, l)) ** 2,
        "l2_A1": norm_l2(Field(slot1.astype(complex))) ** 2,
        "l2_balpha": norm_l2(da.b_alpha - _compose(db.b_alpha, l)) ** 2,
        "linf_za": norm_linf(d_za),
    }
    return StabilityFrame(state_a.t, F0, F1, F2, F3, F, lhs, float(np.min(la)))


def stability_report(pair: SolutionPair, M: float = DEFAULT_M,
                     stride: int = 1) -> StabilityReport:
    """Per-snapshot comparison functionals for an evolved pair.

    `stride` thins the evaluated snapshots (the first and last are
    always included); marker data must cover every snapshot regardless.
    """
    frames = []
    mA, mB = pair.markers_base, pair.markers_other
    m = len(pair.base.states)
    picks = sorted(set(range(0, m, stride)) | {m - 1})
    for k in picks:
        sa, sb = pair.base.states[k], pair.other.states[k]
        l, la = build_l(mA.positions[k], mB.positions[k],
                        mA.log_jacobian[k], mB.log_jacobian[k], sa.n)
        frames.append(functionals_F(sa, sb, l, la, M))
    d0 = pair.base.states[0].inv_za - pair.other.states[0].inv_za
    rhs0 = frames[0].F + norm_linf(d0) ** 2
    sup_F = max(f.F for f in frames)
    return StabilityReport(tuple(frames), M, rhs0, sup_F)
