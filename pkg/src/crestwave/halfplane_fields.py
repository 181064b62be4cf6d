"""Interior fields below the surface in flattened coordinates.

Every surface trace is the boundary value of a function holomorphic in
the lower half plane; its values on the horizontal line at depth y < 0
follow from the mode-wise damping exp(y |k|). Products of same-sector
extensions equal extensions of products, so interior combinations can
be assembled line by line.

Provided here: the interior conjugate velocity and conformal map, the
closed-form interior pressure (zero on the boundary), its gradient, and
two strong-form residual checks (the interior momentum balance and the
pressure Poisson identity) that tie the evolved traces back to the bulk
equations they encode.
"""
from __future__ import annotations

import numpy as np

from .singular_ops import DegenerateWeight
from .spectral_core import Field, SpectralMultiplier, derivative, norm_linf, wavenumbers
from .state_model import WaterWaveState, compute_A1, compute_b, compute_b_alpha, compute_dzt, compute_ztt

__all__ = [
    "extend",
    "guarded_reciprocal",
    "velocity_line",
    "map_line",
    "pressure_line",
    "pressure_gradient_line",
    "pressure_laplacian_residual",
    "euler_residual",
    "fields_on_lines",
]


def extend(f: Field, depth: float) -> Field:
    """Trace of the harmonic extension of f on the line at `depth` <= 0.

    For a holomorphic trace this is also the holomorphic extension.
    """
    if depth > 0:
        raise ValueError("depth must be <= 0")
    if depth == 0:
        return f
    k = wavenumbers(f.n)
    return SpectralMultiplier(np.exp(depth * np.abs(k)))(f)


def guarded_reciprocal(f: Field, floor: float = 1e-12) -> Field:
    """1/f computed alias-free on the doubled grid; raises on small |f|."""
    fmin = float(np.min(np.abs(f.values)))
    if fmin < floor:
        raise DegenerateWeight(
            f"reciprocal of field reaching |f| = {fmin:.3e}, below {floor:.3e}")
    n = f.n
    h = n // 2
    c = f.coeffs
    out = np.zeros(2 * n, dtype=np.complex128)
    out[:h] = c[:h]
    out[2 * n - h:] = c[h:]
    fine = np.fft.ifft(out * 2 * n)
    q = np.fft.fft(1.0 / fine) / (2 * n)
    cc = np.zeros(n, dtype=np.complex128)
    cc[:h] = q[:h]
    cc[h:] = q[2 * n - h:]
    return Field.from_coeffs(cc)


def velocity_line(state: WaterWaveState, depth: float) -> Field:
    """Interior conjugate velocity on the line at `depth`."""
    return extend(state.zt_bar, depth)


def map_line(state: WaterWaveState, depth: float) -> np.ndarray:
    """Physical image of the grid line at `depth` under the conformal map."""
    if state.z is None:
        raise ValueError("needs the position trace z")
    n = state.n
    x = 2.0 * np.pi * np.arange(n) / n
    return x + 1j * depth + extend(state.z, depth).values


def _poisson_real(g: Field, depth: float) -> Field:
    # harmonic extension of a real trace (two-sided spectrum damping)
    return extend(g, depth)


def pressure_line(state: WaterWaveState, depth: float) -> np.ndarray:
    """Interior pressure on the line at `depth` (real array).

    p = -|U|^2 / 2 - y + (harmonic extension of |zt_bar|^2) / 2;
    identically zero on the boundary line.
    """
    U = velocity_line(state, depth)
    g = Field(np.abs(state.zt_bar.values) ** 2 + 0j)
    ext_g = _poisson_real(g, depth)
    return (-0.5 * np.abs(U.values) ** 2 - depth + 0.5 * ext_g.values.real)


def pressure_gradient_line(state: WaterWaveState, depth: float) -> np.ndarray:
    """(d_x - i d_y) of the interior pressure on the line at `depth`.

    All pieces are closed: the vertical derivative of the harmonic
    extension is the |k| multiplier, and the vertical derivative of the
    holomorphic velocity is i times its horizontal derivative.
    """
    n = state.n
    k = wavenumbers(n)
    absk = SpectralMultiplier(np.abs(k).astype(float))
    U = velocity_line(state, depth)
    dxU = derivative(U)
    g = Field(np.abs(state.zt_bar.values) ** 2 + 0j)
    ext_g = _poisson_real(g, depth)
    dPx = (-0.5 * derivative(Field(np.abs(U.values) ** 2 + 0j)).values.real
           + 0.5 * derivative(ext_g).values.real)
    # d_y |U|^2 = 2 Re(conj(U) i dxU); d_y ext(g) = |k| ext(g)
    dPy = (-np.real(np.conj(U.values) * 1j * dxU.values)
           - 1.0
           + 0.5 * absk(ext_g).values.real)
    return dPx - 1j * dPy


def _shift_line(vals: np.ndarray, h: float) -> np.ndarray:
    # exact horizontal translation of a real band-limited line sample
    n = vals.shape[0]
    c = np.fft.fft(vals) / n
    k = wavenumbers(n).astype(float)
    phase = np.exp(1j * k * h)
    phase[n // 2] = np.cos(k[n // 2] * h)  # keep the shifted sample real
    return np.fft.ifft(c * phase * n).real


def pressure_laplacian_residual(state: WaterWaveState, depth: float,
                                h: float | None = None) -> float:
    """Max-norm defect of the pressure Poisson identity lap p = -2|U'|^2.

    The Laplacian is formed by centered second differences with the same
    spacing in both directions (horizontal samples by exact band-limited
    translation, so the whole stencil refines with h), evaluated at
    `depth`; the stencil must stay inside the fluid (depth + h <= 0).
    """
    n = state.n
    if h is None:
        h = 2.0 * np.pi / n
    if depth + h > 0:
        raise ValueError("stencil must stay at or below the boundary")
    p0 = pressure_line(state, depth)
    pu = pressure_line(state, depth + h)
    pd = pressure_line(state, depth - h)
    lap_y = (pu - 2.0 * p0 + pd) / h ** 2
    lap_x = (_shift_line(p0, h) - 2.0 * p0 + _shift_line(p0, -h)) / h ** 2
    dxU = derivative(velocity_line(state, depth))
    target = -2.0 * np.abs(dxU.values) ** 2
    return float(np.max(np.abs(lap_x + lap_y - target)))


def euler_residual(state: WaterWaveState, depth: float,
                   floor: float = 1e-6) -> Field:
    """Interior momentum-balance defect on the line at `depth`.

    Assembles P' U_t - P_t U' + conj(U) U' - i P' + 2 d p with every
    factor extended from its own boundary trace (P' is the conformal
    derivative, guarded reciprocal of the evolved trace). Vanishes for
    exact solutions; on numerical states it measures the combined
    truncation and projection error, damped with depth.
    """
    A1 = compute_A1(state)
    dzt = compute_dzt(state)
    b = compute_b(state)
    ztt_bar = compute_ztt(state, A1)
    za_full = guarded_reciprocal(state.inv_za, floor)  # Z_alpha on the boundary
    ut_b = ztt_bar - b * derivative(state.zt_bar)
    psit_b = state.zt_bar.conj() - b * za_full
    U = extend(state.zt_bar, depth)
    Ut = extend(ut_b, depth)
    Psit = extend(psit_b, depth)
    Psiz = extend(za_full, depth)
    dxU = derivative(U)
    grad_p = pressure_gradient_line(state, depth)
    resid = (Psiz * Ut - Psit * dxU + U.conj() * dxU - 1j * Psiz).values + grad_p
    return Field(resid)


def fields_on_lines(state: WaterWaveState, depths) -> list[dict]:
    """Tabulate interior position, velocity and pressure on grid lines."""
    n = state.n
    x = 2.0 * np.pi * np.arange(n) / n
    rows = []
    for y in depths:
        if y > 0:
            raise ValueError("depths must be <= 0")
        pos = map_line(state, y) if state.z is not None else x + 1j * y
        U = velocity_line(state, y).values
        p = pressure_line(state, y)
        for j in range(n):
            rows.append({
                "depth": y, "alpha": x[j],
                "pos_re": pos[j].real, "pos_im": pos[j].imag,
                "vel_re": U[j].real, "vel_im": -U[j].imag,
                "pressure": p[j],
            })
    return rows
