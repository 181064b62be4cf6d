"""Energy functionals, geometric monitors, and the blow-up monitor.

All functionals are assembled from the state traces by products and
spectral derivatives only; every place the reciprocal conformal
derivative appears it enters multiplicatively, so the functionals stay
finite and evaluable on degenerating (crested) surfaces. The material
time derivatives inside the second-order functionals are eliminated by
the closed commutation identities

    (d_t + b d)(D f)   = D((d_t + b d) f) - (D Zt)(D f)
    (d_t + b d)(d f)   = d((d_t + b d) f) - b_alpha (d f)

so nothing is ever differenced in time.

Every functional can be evaluated through two routes: 'spectral'
(multiplier half-norm, commutator Taylor weight) and 'quadrature'
(double-sum half-norm, manifestly nonnegative double-integral Taylor
weight); the routes are independent and are cross-checked in the test
suite.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import quadrature as quad
from .spectral_core import (
    Field,
    derivative,
    norm_hhalf,
    norm_l2,
    poisson_smooth,
)
from .state_model import WaterWaveState, compute_A1, compute_b_alpha, compute_dzt, compute_ztt

__all__ = [
    "EnergyReport",
    "BlowupThresholds",
    "MonitorResult",
    "energy_frak_e",
    "energy_curly_E",
    "energy_Ea",
    "energy_Eb",
    "energy_Ek",
    "curly_E_depth_profile",
    "taylor_check",
    "chord_arc_delta",
    "blowup_monitor",
    "report_for",
]


@dataclass(frozen=True)
class BlowupThresholds:
    energy_max: float = 1e6      # on the curly energy
    taylor_tol: float = 1e-8     # A1 may not dip below 1 - taylor_tol
    defect_max: float = 1e-6     # holomorphy defect of either trace
    value_max: float = 1e8       # hard cap on any field amplitude


@dataclass(frozen=True)
class EnergyReport:
    t: float
    frak_e: float
    curly_E: float
    Ea: float
    Eb: float
    E2: float
    E3: float
    taylor_min: float
    chord_arc: float
    constraint_defects: dict


@dataclass(frozen=True)
class MonitorResult:
    ok: bool
    reason: str | None = None


def _hhalf_sq(f: Field, method: str) -> float:
    if method == "spectral":
        return norm_hhalf(f) ** 2
    return quad.hhalf_sq_pv(f)


def _l2_sq(f: Field) -> float:
    return norm_l2(f) ** 2


def _weighted_l2_sq(f: Field, weight: np.ndarray) -> float:
    # integral weight * |f|^2 by the trapezoid rule
    return float(np.sum(weight * np.abs(f.values) ** 2) * 2.0 * np.pi / f.n)


def _ingredients(state: WaterWaveState, method: str):
    za = state.inv_za
    zt_bar = state.zt_bar
    zt = zt_bar.conj()
    A1 = compute_A1(state, method="commutator" if method == "spectral" else "quadrature")
    dzt = compute_dzt(state)
    b_alpha = compute_b_alpha(state, dzt)
    ztt_bar = compute_ztt(state, A1)
    d_zt_bar = derivative(zt_bar)
    D_zt_bar = za * d_zt_bar
    D2_zt_bar = za * derivative(D_zt_bar)
    D_zt = dzt
    D2_zt = za * derivative(D_zt)
    d_ztt_bar = derivative(ztt_bar)
    D_ztt_bar = za * d_ztt_bar
    D2_ztt_bar = za * derivative(D_ztt_bar)
    return dict(za=za, zt_bar=zt_bar, zt=zt, A1=A1, dzt=dzt, b_alpha=b_alpha,
                ztt_bar=ztt_bar, d_zt_bar=d_zt_bar, D_zt_bar=D_zt_bar,
                D2_zt_bar=D2_zt_bar, D_zt=D_zt, D2_zt=D2_zt,
                d_ztt_bar=d_ztt_bar, D_ztt_bar=D_ztt_bar, D2_ztt_bar=D2_ztt_bar)


def energy_Ea(state: WaterWaveState, method: str = "spectral",
              _ing: dict | None = None) -> float:
    """First second-order functional.

    int (1/A1) |d(ztt_bar) - (D Zt) d(zt_bar)|^2 + half-norm(D zt_bar)^2,
    the weighted slot being the degeneracy-safe rewriting of
    Z_a (d_t + b d)(D zt_bar).
    """
    ing = _ing or _ingredients(state, method)
    slot = ing["d_ztt_bar"] - ing["D_zt"] * ing["d_zt_bar"]
    w = 1.0 / ing["A1"].values.real
    return _weighted_l2_sq(slot, w) + _hhalf_sq(ing["D_zt_bar"], method)


def energy_Eb(state: WaterWaveState, method: str = "spectral",
              _ing: dict | None = None) -> float:
    """Second second-order functional, on (1/Z_a) D^2 zt_bar.

    The transported slot is eliminated to
    (b_a - D Zt) D^2 zt_bar + D^2 ztt_bar - (D^2 Zt)(D zt_bar)
    - 2 (D Zt)(D^2 zt_bar).
    """
    ing = _ing or _ingredients(state, method)
    slot = (ing["b_alpha"] - ing["D_zt"]) * ing["D2_zt_bar"] \
        + ing["D2_ztt_bar"] \
        - ing["D2_zt"] * ing["D_zt_bar"] \
        - 2.0 * (ing["D_zt"] * ing["D2_zt_bar"])
    w = 1.0 / ing["A1"].values.real
    return _weighted_l2_sq(slot, w) + _hhalf_sq(ing["za"] * ing["D2_zt_bar"], method)


def energy_frak_e(state: WaterWaveState, method: str = "spectral",
                  _ing: dict | None = None) -> float:
    """Eight-term simplified second-order energy.

    |d ztt_bar|_L2^2 + |D zt_bar|_1/2^2 + |D^2 ztt_bar|_L2^2
    + |inv_za D^2 zt_bar|_1/2^2 + |d zt_bar|_L2^2 + |D^2 zt_bar|_L2^2
    + |d inv_za|_L2^2 + |inv_za(0)|^2.

    The point value uses the grid node alpha = 0.
    """
    ing = _ing or _ingredients(state, method)
    za = ing["za"]
    point = float(np.abs(za.values[0]) ** 2)
    return (_l2_sq(ing["d_ztt_bar"])
            + _hhalf_sq(ing["D_zt_bar"], method)
            + _l2_sq(ing["D2_ztt_bar"])
            + _hhalf_sq(za * ing["D2_zt_bar"], method)
            + _l2_sq(ing["d_zt_bar"])
            + _l2_sq(ing["D2_zt_bar"])
            + _l2_sq(derivative(za))
            + point)


def energy_curly_E(state: WaterWaveState, method: str = "spectral",
                   _ing: dict | None = None) -> float:
    """Seven-term low-regularity energy (admits crested surfaces).

    |d zt_bar|_L2^2 + |D^2 zt_bar|_L2^2 + |d inv_za|_L2^2
    + |D^2 inv_za|_L2^2 + |inv_za D^2 zt_bar|_1/2^2 + |D zt_bar|_1/2^2
    + |inv_za(0)|^2.
    """
    ing = _ing or _ingredients(state, method)
    za = ing["za"]
    D2_za = za * derivative(za * derivative(za))
    point = float(np.abs(za.values[0]) ** 2)
    return (_l2_sq(ing["d_zt_bar"])
            + _l2_sq(ing["D2_zt_bar"])
            + _l2_sq(derivative(za))
            + _l2_sq(D2_za)
            + _hhalf_sq(za * ing["D2_zt_bar"], method)
            + _hhalf_sq(ing["D_zt_bar"], method)
            + point)


def energy_Ek(state: WaterWaveState, k: int, method: str = "spectral",
              _ing: dict | None = None) -> float:
    """Higher-order functionals, k in {2, 3}.

    int (1/A1)|(d_t + b d) d^k zt_bar + (b_a - D Zt) d^k zt_bar|^2
    + halfnorm(inv_za d^k zt_bar)^2 + |d^k zt_bar|_L2^2,

    with the transported derivative eliminated through the
    d-commutation identity (all time derivatives closed).
    """
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    ing = _ing or _ingredients(state, method)
    zt_bar, ztt_bar = ing["zt_bar"], ing["ztt_bar"]
    b_alpha = ing["b_alpha"]
    d1 = ing["d_zt_bar"]
    d2 = derivative(d1)
    if k == 2:
        dk = d2
        transported = derivative(ing["d_ztt_bar"]) - derivative(b_alpha * d1) - b_alpha * d2
    else:
        d3 = derivative(d2)
        dk = d3
        transported = (derivative(derivative(ing["d_ztt_bar"]))
                       - derivative(derivative(b_alpha * d1))
                       - derivative(b_alpha * d2)
                       - b_alpha * d3)
    slot = transported + (b_alpha - ing["D_zt"]) * dk
    w = 1.0 / ing["A1"].values.real
    return (_weighted_l2_sq(slot, w)
            + _hhalf_sq(ing["za"] * dk, method)
            + _l2_sq(dk))


def curly_E_depth_profile(state: WaterWaveState, depths) -> dict:
    """Sample the six interior norms behind the low-regularity energy.

    Each constituent trace is holomorphic, so its interior values are
    the multiplier extension exp(y |k|); products of extensions equal
    extensions of products for same-sector factors, hence every sampled
    norm is bounded by its boundary value. Returns per-depth lists plus
    the boundary row (the seventh, pointwise term is excluded).
    """
    names = ["dzt_l2", "d2zt_l2", "dza_l2", "d2za_l2", "za_d2zt_hhalf", "dzt_hhalf"]

    def row(zt_bar: Field, za: Field) -> list[float]:
        d_zt = derivative(zt_bar)
        D_zt = za * d_zt
        D2_zt = za * derivative(D_zt)
        D2_za = za * derivative(za * derivative(za))
        return [
            _l2_sq(d_zt),
            _l2_sq(D2_zt),
            _l2_sq(derivative(za)),
            _l2_sq(D2_za),
            _hhalf_sq(za * D2_zt, "spectral"),
            _hhalf_sq(D_zt, "spectral"),
        ]

    boundary = row(state.zt_bar, state.inv_za)
    per_depth = {}
    for y in depths:
        if y >= 0:
            raise ValueError("depths must be negative")
        zt_y = poisson_smooth(state.zt_bar, -y)
        za_y = 1.0 + poisson_smooth(state.inv_za - 1.0, -y)
        per_depth[y] = row(zt_y, za_y)
    return {"names": names, "boundary": boundary, "per_depth": per_depth}


def taylor_check(state: WaterWaveState, method: str = "commutator") -> float:
    """min_alpha A1 - 1; nonnegative up to rounding for any velocity trace."""
    a1 = compute_A1(state, method=method)
    return float(np.min(a1.values.real) - 1.0)


def chord_arc_delta(state: WaterWaveState, reciprocal_floor: float = 1e-3,
                    stride: int = 1) -> float:
    """Smallest chord/arc ratio over grid pairs of the periodic surface.

    The surface is the infinite periodic curve Z(a + 2pi) = Z(a) + 2pi;
    for each ordered pair both the direct chord and the wrapped chord
    (through the periodic image) are compared against the corresponding
    arcs, so the flat interface scores exactly 1. Arc length uses
    |Z_a| = 1/|inv_za| when the reciprocal stays above the floor and
    falls back to the polyline length otherwise.
    """
    if state.z is None:
        raise ValueError("chord-arc needs the position trace z")
    n = state.n
    alpha = 2.0 * np.pi * np.arange(n) / n
    pos = alpha + state.z.values
    inv = np.abs(state.inv_za.values)
    h = 2.0 * np.pi / n
    if float(np.min(inv)) > reciprocal_floor:
        speed = 1.0 / inv
        # trapezoid cumulative arc length, with the wrap-around segment
        seg = 0.5 * (speed + np.roll(speed, -1)) * h
    else:
        seg = np.abs(np.roll(pos, -1) + np.where(np.arange(n) == n - 1, 2.0 * np.pi, 0.0) - pos)
    s = np.concatenate([[0.0], np.cumsum(seg)])  # s[j] = arc from node 0 to node j
    total = s[-1]
    idx = np.arange(0, n, stride)
    sv = s[idx]
    pv = pos[idx]
    ds = sv[None, :] - sv[:, None]
    chord = np.abs(pv[None, :] - pv[:, None])
    iu = np.triu_indices(len(idx), k=1)
    arc_direct = ds[iu]
    chord_direct = chord[iu]
    chord_wrap = np.abs((pv[:, None] + 2.0 * np.pi) - pv[None, :])[iu]
    arc_wrap = total - arc_direct
    r1 = chord_direct / arc_direct
    r2 = chord_wrap / arc_wrap
    return float(min(np.min(r1), np.min(r2)))


def blowup_monitor(report: EnergyReport, thresholds: BlowupThresholds) -> MonitorResult:
    """Classify a report as healthy or as a detected blow-up."""
    vals = [report.frak_e, report.curly_E, report.Ea, report.Eb,
            report.E2, report.E3, report.taylor_min, report.chord_arc]
    if any(not np.isfinite(v) for v in vals):
        return MonitorResult(False, "non-finite diagnostic value")
    if report.curly_E > thresholds.energy_max:
        return MonitorResult(False, f"energy {report.curly_E:.3e} above {thresholds.energy_max:.3e}")
    if report.taylor_min < -thresholds.taylor_tol:
        return MonitorResult(False, f"Taylor weight dipped to 1 + {report.taylor_min:.3e}")
    d = report.constraint_defects
    worst = max(d.get("defect_zt", 0.0), d.get("defect_za", 0.0))
    if worst > thresholds.defect_max:
        return MonitorResult(False, f"holomorphy defect {worst:.3e} above {thresholds.defect_max:.3e}")
    return MonitorResult(True)


def report_for(state: WaterWaveState, method: str = "spectral",
               defects: dict | None = None) -> EnergyReport:
    """Assemble the full diagnostic row for one state."""
    ing = _ingredients(state, method)
    if defects is None:
        defects = state.constraint_defects()
    chord = chord_arc_delta(state) if state.z is not None else float("nan")
    return EnergyReport(
        t=state.t,
        frak_e=energy_frak_e(state, method, _ing=ing),
        curly_E=energy_curly_E(state, method, _ing=ing),
        Ea=energy_Ea(state, method, _ing=ing),
        Eb=energy_Eb(state, method, _ing=ing),
        E2=energy_Ek(state, 2, method, _ing=ing),
        E3=energy_Ek(state, 3, method, _ing=ing),
        taylor_min=float(np.min(ing["A1"].values.real) - 1.0),
        chord_arc=chord,
        constraint_defects=dict(defects),
    )
