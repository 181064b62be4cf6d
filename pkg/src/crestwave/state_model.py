"""Surface state and the derived coefficient fields.

The moving surface is carried in conformal coordinates by two
holomorphic boundary traces and one auxiliary position trace:

    zt_bar : conjugate surface velocity (trace of a lower-half-plane
             holomorphic function, zero mean),
    inv_za : reciprocal of the conformal surface derivative (holomorphic
             with mean exactly 1),
    z      : periodic part of the surface position (position minus alpha).

Every coefficient of the closed evolution (transport velocity b, Taylor
sign weight A1, accelerations) is computed from these by products,
conjugations and commutators only; nothing here ever divides by the
conformal derivative, so states arbitrarily close to a degenerate
(crested) surface remain evaluable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from .singular_ops import commutator_h, commutator_h_d, triple_bracket
from .spectral_core import (
    Field,
    derivative,
    hilbert,
    norm_l2,
    sector_restrict,
    wavenumbers,
)

__all__ = [
    "WaterWaveState",
    "DerivedQuantities",
    "TaylorSignViolation",
    "compute_b",
    "compute_A1",
    "compute_b_alpha",
    "compute_ztt",
    "compute_dzt",
    "compute_a1_rate",
    "compute_at_over_a",
    "compute_zttt",
    "reconstruct_inv_za",
    "derive",
]


class TaylorSignViolation(RuntimeError):
    """The computed Taylor weight dropped below its unconditional floor."""


@dataclass(frozen=True)
class WaterWaveState:
    """State of the surface at one instant."""

    zt_bar: Field
    inv_za: Field
    z: Field | None = None
    t: float = 0.0

    def __post_init__(self):
        if self.inv_za.n != self.zt_bar.n:
            raise ValueError("zt_bar and inv_za must share one grid")
        if self.z is not None and self.z.n != self.zt_bar.n:
            raise ValueError("z must share the grid of zt_bar")

    @property
    def n(self) -> int:
        return self.zt_bar.n

    def constraint_defects(self) -> dict:
        """L2 size of the parts of each trace violating holomorphy.

        For zt_bar the constrained sector is k < 0 with zero mean; for
        inv_za the same holds for inv_za - 1.
        """
        d_zt = _sector_defect(self.zt_bar)
        d_za = _sector_defect(self.inv_za - 1.0)
        return {"defect_zt": d_zt, "defect_za": d_za}

    def validate(self, tol: float = 1e-8) -> None:
        d = self.constraint_defects()
        if d["defect_zt"] > tol or d["defect_za"] > tol:
            raise ValueError(f"holomorphy constraints violated: {d}")
        a1 = compute_A1(self)
        if float(np.min(a1.values.real)) < 1.0 - tol:
            raise ValueError("Taylor weight below 1")


def _sector_defect(f: Field) -> float:
    bad = f - sector_restrict(f, "holo")
    return norm_l2(bad)


@dataclass(frozen=True)
class DerivedQuantities:
    """Coefficients of the closed system at one instant.

    A = A1 * |inv_za|^2 is the Taylor weight pulled back to the
    non-conformal parametrization; a1_rate is the material derivative
    (d_t + b d_alpha) of A1 from its closed commutator formula.
    """

    b: Field
    b_alpha: Field
    A1: Field
    dzt: Field
    ztt_bar: Field
    A: Field
    a1_rate: Field | None = None
    at_over_a: Field | None = None
    zttt_bar: Field | None = None


def compute_b(state: WaterWaveState) -> Field:
    """Transport velocity b = Re (I - H)(conj(zt_bar) * inv_za).

    Real by construction; the conjugate velocity is multiplied by the
    reciprocal derivative rather than divided by the derivative.
    """
    zt = state.zt_bar.conj()
    x = zt * state.inv_za
    return (x - hilbert(x)).real()


def compute_A1(state: WaterWaveState, method: str = "commutator") -> Field:
    """Taylor sign weight A1 >= 1.

    commutator route: 1 - Im [Zt, H] d(zt_bar);
    quadrature route: 1 + (1/2pi) int |Zt(a)-Zt(b)|^2 K2(a-b) db,
    which is manifestly >= 1 term by term.
    """
    if method == "commutator":
        zt = state.zt_bar.conj()
        com = commutator_h(zt, derivative(state.zt_bar))
        a1 = 1.0 - com.imag()
    elif method == "quadrature":
        a1 = quad.a1_pv(state.zt_bar.conj())
    else:
        raise ValueError("method must be 'commutator' or 'quadrature'")
    if float(np.min(a1.values.real)) < 1.0 - 1e-8:
        raise TaylorSignViolation(
            f"min A1 = {float(np.min(a1.values.real)):.12f} < 1")
    return a1


def compute_dzt(state: WaterWaveState) -> Field:
    """Conformal derivative of the velocity, D Zt = inv_za * d(conj zt_bar)."""
    return derivative(state.zt_bar.conj()) * state.inv_za


def compute_b_alpha(state: WaterWaveState, dzt: Field | None = None) -> Field:
    """Closed formula for d(b)/dalpha (no differentiation of b itself).

    2 Re D Zt + Re( [inv_za, H] d(Zt) + [Zt, H] d(inv_za) ).
    """
    zt = state.zt_bar.conj()
    if dzt is None:
        dzt = compute_dzt(state)
    c1 = commutator_h(state.inv_za, derivative(zt))
    c2 = commutator_h_d(zt, state.inv_za)
    return 2.0 * dzt.real() + (c1 + c2).real()


def compute_ztt(state: WaterWaveState, A1: Field | None = None) -> Field:
    """Conjugate acceleration trace: ztt_bar = -i A1 inv_za + i."""
    if A1 is None:
        A1 = compute_A1(state)
    return -1j * (A1 * state.inv_za) + 1j


def reconstruct_inv_za(ztt_bar: Field, A1: Field) -> Field:
    """Invert the acceleration relation: inv_za = i (ztt_bar - i) / A1.

    A1 >= 1 so the division is pointwise safe; exact inverse of
    compute_ztt.
    """
    return Field(1j * (ztt_bar.values - 1j) / A1.values.real, copy=False)


def compute_a1_rate(state: WaterWaveState, b: Field | None = None,
                    A1: Field | None = None,
                    ztt_bar: Field | None = None,
                    bracket_method: str = "quadrature") -> Field:
    """Material derivative (d_t + b d_alpha) A1, closed form.

    -Im( [Ztt, H] d(zt_bar) + [Zt, H] d(ztt_bar) - [Zt, b; d(zt_bar)] ).
    Real by construction; no time differencing anywhere.
    """
    if b is None:
        b = compute_b(state)
    if A1 is None:
        A1 = compute_A1(state)
    if ztt_bar is None:
        ztt_bar = compute_ztt(state, A1)
    zt = state.zt_bar.conj()
    ztt = ztt_bar.conj()
    t1 = commutator_h(ztt, derivative(state.zt_bar))
    t2 = commutator_h(zt, derivative(ztt_bar))
    t3 = triple_bracket(zt, b, derivative(state.zt_bar), method=bracket_method)
    return -(t1 + t2 - t3).imag()


def compute_at_over_a(state: WaterWaveState, b: Field | None = None,
                      A1: Field | None = None,
                      b_alpha: Field | None = None,
                      dzt: Field | None = None,
                      bracket_method: str = "quadrature") -> Field:
    """Logarithmic rate of the Lagrangian acceleration coefficient.

    (d_t + b d_alpha)A1 / A1 + b_alpha - 2 Re D Zt, assembled purely
    from closed formulas (the only division is by A1 >= 1).
    """
    if b is None:
        b = compute_b(state)
    if A1 is None:
        A1 = compute_A1(state)
    if dzt is None:
        dzt = compute_dzt(state)
    if b_alpha is None:
        b_alpha = compute_b_alpha(state, dzt)
    rate = compute_a1_rate(state, b, A1, bracket_method=bracket_method)
    quotient = Field(rate.values.real / A1.values.real, copy=False)
    return quotient + b_alpha - 2.0 * dzt.real()


def compute_zttt(state: WaterWaveState, ztt_bar: Field | None = None,
                 at_over_a: Field | None = None,
                 dzt: Field | None = None) -> Field:
    """Third-order trace: zttt_bar = (ztt_bar - i)(at_over_a + conj D Zt)."""
    if ztt_bar is None:
        ztt_bar = compute_ztt(state)
    if at_over_a is None:
        at_over_a = compute_at_over_a(state)
    if dzt is None:
        dzt = compute_dzt(state)
    return (ztt_bar - 1j) * (at_over_a + dzt.conj())


def derive(state: WaterWaveState, method: str = "commutator",
           third_order: bool = False,
           bracket_method: str = "quadrature") -> DerivedQuantities:
    """Assemble all coefficient fields in dependency order."""
    zt = state.zt_bar.conj()
    b = compute_b(state)
    A1 = compute_A1(state, method=method)
    dzt = derivative(zt) * state.inv_za
    b_alpha = compute_b_alpha(state, dzt)
    ztt_bar = compute_ztt(state, A1)
    absza2 = state.inv_za * state.inv_za.conj()
    A = (A1 * absza2).real()
    a1_rate = None
    at_over_a = None
    zttt_bar = None
    if third_order:
        a1_rate = compute_a1_rate(state, b, A1, ztt_bar, bracket_method=bracket_method)
        quotient = Field(a1_rate.values.real / A1.values.real, copy=False)
        at_over_a = quotient + b_alpha - 2.0 * dzt.real()
        zttt_bar = (ztt_bar - 1j) * (at_over_a + dzt.conj())
    return DerivedQuantities(b=b, b_alpha=b_alpha, A1=A1, dzt=dzt,
                             ztt_bar=ztt_bar, A=A, a1_rate=a1_rate,
                             at_over_a=at_over_a, zttt_bar=zttt_bar)
