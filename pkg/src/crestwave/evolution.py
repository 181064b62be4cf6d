"""Time integration of the closed surface system and marker kinematics.

Evolved unknowns: the conjugate velocity trace, the reciprocal conformal
derivative, and the auxiliary position trace. Their tendencies at fixed
parameter value are

    d/dt zt_bar = ztt_bar - b d(zt_bar)
    d/dt inv_za = (b_alpha - D Zt) inv_za - b d(inv_za)
    d/dt z      = conj(zt_bar) - b (1 + d z)

with every coefficient produced by the closed derived-quantity layer.
All products are alias-free, so the combination on the right stays in
the holomorphic sector up to spectral-tail truncation; a cheap sector
projection after each step removes that drift and reports its size.

Marker kinematics integrates dh/dt = b(h, t) together with the log of
the marker Jacobian (d/dt log J = b_alpha(h, t)), using cubic-in-time
interpolation of the stored coefficient fields and exact trigonometric
evaluation in space.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .energy_diag import BlowupThresholds, EnergyReport, MonitorResult, blowup_monitor, report_for
from .spectral_core import Field, derivative, evaluate_at, krasny_filter, norm_linf, sector_restrict
from .state_model import WaterWaveState, derive

__all__ = [
    "BlowupDetected",
    "MarkerCrossing",
    "SolverConfig",
    "Trajectory",
    "MarkerPaths",
    "rhs",
    "step_rk4",
    "enforce_constraints",
    "simulate",
    "cfl_limit",
    "lagrangian_markers",
    "marker_residual",
]


class BlowupDetected(RuntimeError):
    """Raised when a run is stopped by the blow-up monitor.

    Carries the partial trajectory accumulated so far.
    """

    def __init__(self, reason: str, trajectory: "Trajectory"):
        super().__init__(reason)
        self.reason = reason
        self.trajectory = trajectory


class MarkerCrossing(RuntimeError):
    """Raised when adjacent surface markers stop being ordered."""


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_final: float
    snapshot_every: int = 1
    krasny_threshold: float | None = None
    reports: bool = False
    report_method: str = "spectral"
    thresholds: BlowupThresholds | None = None
    raise_on_blowup: bool = False
    enforce: bool = True
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.dt == 0.0:
            raise ValueError("dt must be nonzero")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        if self.t_final < 0:
            raise ValueError("t_final must be nonnegative")


@dataclass(frozen=True)
class Trajectory:
    states: tuple
    dt: float
    snapshot_every: int
    defects: tuple
    reports: tuple | None = None
    blowup: MonitorResult | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def final(self) -> WaterWaveState:
        return self.states[-1]


def cfl_limit(n: int) -> float:
    """Largest stable-ish step: half the period of the fastest mode's
    gravity frequency sqrt(n/2)."""
    return 0.5 / np.sqrt(n / 2.0)


def rhs(state: WaterWaveState):
    """Fixed-parameter tendencies of (zt_bar, inv_za, z)."""
    d = derive(state)
    dzt_bar = d.ztt_bar - d.b * derivative(state.zt_bar)
    dinv_za = (d.b_alpha - d.dzt) * state.inv_za - d.b * derivative(state.inv_za)
    if state.z is not None:
        dz = state.zt_bar.conj() - d.b * (1.0 + derivative(state.z))
    else:
        dz = None
    return dzt_bar, dinv_za, dz


def _advance(state: WaterWaveState, tend, dt: float) -> WaterWaveState:
    dzt, dza, dz = tend
    z = None
    if state.z is not None:
        z = state.z + dt * dz
    return WaterWaveState(state.zt_bar + dt * dzt, state.inv_za + dt * dza,
                          z, state.t + dt)


def step_rk4(state: WaterWaveState, dt: float) -> WaterWaveState:
    """One classical Runge-Kutta step; dt may be negative."""
    k1 = rhs(state)
    k2 = rhs(_advance(state, k1, dt / 2.0))
    k3 = rhs(_advance(state, k2, dt / 2.0))
    k4 = rhs(_advance(state, k3, dt))

    def combine(a, b, c, d):
        if a is None:
            return None
        return (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d)

    dzt = combine(k1[0], k2[0], k3[0], k4[0])
    dza = combine(k1[1], k2[1], k3[1], k4[1])
    dz = combine(k1[2], k2[2], k3[2], k4[2])
    z = state.z + dz if state.z is not None else None
    return WaterWaveState(state.zt_bar + dzt, state.inv_za + dza, z, state.t + dt)


def enforce_constraints(state: WaterWaveState) -> tuple[WaterWaveState, dict]:
    """Project the traces back onto their holomorphic sectors.

    zt_bar is restricted to strictly negative modes (zero mean), inv_za
    to 1 plus strictly negative modes, and z keeps its mean (the mean
    surface height is conserved mass). Returns the projected state and
    the sizes of the removed parts.
    """
    zt_p = sector_restrict(state.zt_bar, "holo")
    za_p = 1.0 + sector_restrict(state.inv_za - 1.0, "holo")
    defects = {
        "defect_zt": float(np.sqrt(2.0 * np.pi / state.n)
                           * np.linalg.norm((state.zt_bar - zt_p).values)),
        "defect_za": float(np.sqrt(2.0 * np.pi / state.n)
                           * np.linalg.norm((state.inv_za - za_p).values)),
    }
    z_p = state.z
    if state.z is not None:
        z_p = sector_restrict(state.z, "holo", keep_mean=True)
        defects["defect_z"] = float(np.sqrt(2.0 * np.pi / state.n)
                                    * np.linalg.norm((state.z - z_p).values))
    return WaterWaveState(zt_p, za_p, z_p, state.t), defects


def _guard(state: WaterWaveState, thresholds: BlowupThresholds) -> str | None:
    for name, f in (("zt_bar", state.zt_bar), ("inv_za", state.inv_za)):
        v = f.values
        if not np.all(np.isfinite(v)):
            return f"non-finite values in {name}"
        if norm_linf(f) > thresholds.value_max:
            return f"amplitude of {name} above {thresholds.value_max:.3e}"
    return None


def simulate(state0: WaterWaveState, config: SolverConfig) -> Trajectory:
    """Integrate forward, projecting and monitoring each step.

    Snapshots (every `snapshot_every` steps, plus the initial state) are
    retained with their post-projection defect sizes; optional per
    snapshot diagnostic reports feed the blow-up monitor. When the
    monitor trips, integration stops and the partial trajectory is
    returned (or raised inside BlowupDetected if configured to).
    """
    n = state0.n
    if abs(config.dt) > cfl_limit(n) * (1.0 + 1e-12):
        raise ValueError(
            f"dt {config.dt:g} exceeds the stability limit {cfl_limit(n):g} for n={n}")
    thresholds = config.thresholds or BlowupThresholds()
    n_steps = int(round(config.t_final / abs(config.dt)))
    if n_steps > config.max_steps:
        raise ValueError("step count exceeds max_steps")

    def project(s: WaterWaveState) -> tuple[WaterWaveState, dict]:
        projected, d = enforce_constraints(s)
        return (projected if config.enforce else s), d

    state, defects0 = project(state0)
    states = [state]
    defect_rows = [defects0]
    reports: list[EnergyReport] | None = [] if config.reports else None
    blowup: MonitorResult | None = None

    def snapshot_report(s: WaterWaveState, d: dict):
        if reports is None:
            return None
        rep = report_for(s, method=config.report_method, defects=d)
        reports.append(rep)
        return rep

    rep0 = snapshot_report(state, defects0)
    if rep0 is not None:
        res = blowup_monitor(rep0, thresholds)
        if not res.ok:
            blowup = res

    step = 0
    while blowup is None and step < n_steps:
        state = step_rk4(state, config.dt)
        if config.krasny_threshold is not None:
            state = WaterWaveState(
                krasny_filter(state.zt_bar, config.krasny_threshold),
                1.0 + krasny_filter(state.inv_za - 1.0, config.krasny_threshold),
                krasny_filter(state.z, config.krasny_threshold) if state.z is not None else None,
                state.t)
        state, defects = project(state)
        step += 1
        bad = _guard(state, thresholds)
        if bad is not None:
            blowup = MonitorResult(False, bad)
            break
        if step % config.snapshot_every == 0 or step == n_steps:
            states.append(state)
            defect_rows.append(defects)
            rep = snapshot_report(state, defects)
            if rep is not None:
                res = blowup_monitor(rep, thresholds)
                if not res.ok:
                    blowup = res

    traj = Trajectory(tuple(states), config.dt, config.snapshot_every,
                      tuple(defect_rows),
                      tuple(reports) if reports is not None else None,
                      blowup)
    if blowup is not None and config.raise_on_blowup:
        raise BlowupDetected(blowup.reason or "blow-up detected", traj)
    return traj


@dataclass(frozen=True)
class MarkerPaths:
    times: np.ndarray          # (m,)
    positions: np.ndarray      # (m, count) parameter positions, unwrapped
    log_jacobian: np.ndarray   # (m, count)

    @property
    def count(self) -> int:
        return self.positions.shape[1]


def _time_weights(ts: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Cubic Lagrange weights over a 4-snapshot window around t."""
    m = len(ts)
    j = int(np.searchsorted(ts, t, side="right") - 1)
    j = min(max(j, 0), m - 2)
    lo = min(max(j - 1, 0), max(m - 4, 0))
    idx = np.arange(lo, min(lo + 4, m))
    tk = ts[idx]
    w = np.ones(len(idx))
    for a in range(len(idx)):
        for b in range(len(idx)):
            if a != b:
                w[a] *= (t - tk[b]) / (tk[a] - tk[b])
    return idx, w


def lagrangian_markers(traj: Trajectory, count: int = 64, substeps: int = 2,
                       b_source=None) -> MarkerPaths:
    """Track surface markers through the stored transport field.

    Integrates dh/dt = b(h, t) and d(log J)/dt = b_alpha(h, t) with the
    same Runge-Kutta scheme as the surface itself, sampling b between
    snapshots by cubic interpolation in time (snapshots must be dense:
    snapshot_every == 1). A `b_source(t) -> (b_field, b_alpha_field)`
    hook replaces the trajectory data for synthetic tests. Raises
    MarkerCrossing if adjacent markers stop being ordered.
    """
    if b_source is None and traj.snapshot_every != 1:
        raise ValueError("marker tracking needs snapshot_every == 1")
    ts = traj.times
    m = len(ts)
    if m < 2:
        raise ValueError("need at least two snapshots")

    if b_source is None:
        coeff_b = []
        coeff_ba = []
        for s in traj.states:
            d = derive(s)
            coeff_b.append(d.b)
            coeff_ba.append(d.b_alpha)

        def fields_at(t: float):
            idx, w = _time_weights(ts, t)
            vb = sum(wi * coeff_b[i].values for i, wi in zip(idx, w))
            vba = sum(wi * coeff_ba[i].values for i, wi in zip(idx, w))
            return Field(vb), Field(vba)
    else:
        def fields_at(t: float):
            return b_source(t)

    def f(t: float, h: np.ndarray):
        bf, baf = fields_at(t)
        return evaluate_at(bf, h).real, evaluate_at(baf, h).real

    h = 2.0 * np.pi * np.arange(count) / count
    lj = np.zeros(count)
    H = np.empty((m, count))
    LJ = np.empty((m, count))
    H[0], LJ[0] = h, lj

    def check_order(hv: np.ndarray, t: float):
        gaps = np.diff(hv)
        wrap = hv[0] + 2.0 * np.pi - hv[-1]
        if np.any(gaps <= 0.0) or wrap <= 0.0:
            raise MarkerCrossing(f"markers crossed near t={t:.6g}")

    for k in range(m - 1):
        t0, t1 = ts[k], ts[k + 1]
        dt = (t1 - t0) / substeps
        t = t0
        for _ in range(substeps):
            b1, a1 = f(t, h)
            b2, a2 = f(t + dt / 2.0, h + dt / 2.0 * b1)
            b3, a3 = f(t + dt / 2.0, h + dt / 2.0 * b2)
            b4, a4 = f(t + dt, h + dt * b3)
            h = h + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            lj = lj + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            t += dt
        check_order(h, t)
        H[k + 1], LJ[k + 1] = h, lj
    return MarkerPaths(ts.copy(), H, LJ)


def marker_residual(paths: MarkerPaths, traj: Trajectory) -> np.ndarray:
    """Acceleration mismatch of the tracked markers.

    The physical marker position is h + z(h); its second time difference
    (centered) is compared with the closed-form surface acceleration
    i A1 conj(inv_za) - i evaluated at the marker. Returns the max
    mismatch per interior snapshot time.
    """
    ts, H = paths.times, paths.positions
    m = len(ts)
    if m < 3:
        raise ValueError("need at least three snapshots")
    P = np.empty((m, H.shape[1]), dtype=complex)
    acc_target = np.empty((m, H.shape[1]), dtype=complex)
    for k, s in enumerate(traj.states):
        if s.z is None:
            raise ValueError("marker residual needs the position trace z")
        P[k] = H[k] + evaluate_at(s.z, H[k])
        d = derive(s)
        fz = d.A1 * s.inv_za.conj()
        acc_target[k] = 1j * evaluate_at(fz, H[k]) - 1j
    out = np.empty(m - 2)
    for k in range(1, m - 1):
        h1, h2 = ts[k] - ts[k - 1], ts[k + 1] - ts[k]
        acc_fd = 2.0 * (h1 * P[k + 1] - (h1 + h2) * P[k] + h2 * P[k - 1]) \
            / (h1 * h2 * (h1 + h2))
        out[k - 1] = float(np.max(np.abs(acc_fd - acc_target[k])))
    return out
