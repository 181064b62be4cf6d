"""Direct-sum reference rules for the singular integrals.

These O(N^2) evaluations are the measuring stick for every spectral fast
path in the package. Principal-value integrals use the alternate-point
trapezoidal rule: the integrand is sampled only at grid nodes of parity
opposite to the target node, which straddles the singularity
symmetrically (effective spacing 4*pi/N) and is spectrally accurate for
periodic analytic integrands.

The line kernels (x - y)^{-m} are replaced by their exact periodizations

    sum_j (x - 2*pi*j)^{-1} = (1/2) cot(x/2)
    sum_j (x - 2*pi*j)^{-2} = (2 sin(x/2))^{-2}
    sum_j (x - 2*pi*j)^{-3} = (1/8) csc(x/2)^2 cot(x/2)
    sum_j (x - 2*pi*j)^{-4} = (1/48) (2 csc^2 cot^2 + csc^4)(x/2 resp.)

so the circle convention stays consistent with the half-plane one.
"""
from __future__ import annotations

import numpy as np

from .spectral_core import Field, derivative, grid

__all__ = [
    "periodized_kernel",
    "hilbert_pv",
    "commutator_h_pv",
    "commutator_h_d_pv",
    "triple_bracket_pv",
    "bracket_n_pv",
    "a1_pv",
    "hhalf_sq_pv",
    "pointwise_square_difference_pv",
    "poisson_extend_pv",
]


def periodized_kernel(x: np.ndarray, order: int) -> np.ndarray:
    """Periodization of (.)^{-order} over 2*pi images, order in 1..4."""
    x = np.asarray(x, dtype=np.float64)
    s = np.sin(0.5 * x)
    c = np.cos(0.5 * x)
    if order == 1:
        return 0.5 * c / s
    if order == 2:
        return 0.25 / s**2
    if order == 3:
        return 0.125 * c / s**3
    if order == 4:
        csc2 = 1.0 / s**2
        cot = c / s
        return (2.0 * csc2 * cot**2 + csc2**2) / 48.0
    raise ValueError(f"kernel order must be 1..4, got {order}")


def _parity_lattice(n: int):
    """Pairwise differences and the opposite-parity mask, cached per size."""
    key = n
    cache = _parity_lattice.__dict__.setdefault("cache", {})
    if key not in cache:
        a = grid(n)
        diff = a[:, None] - a[None, :]
        idx = np.arange(n)
        odd = ((idx[:, None] - idx[None, :]) & 1).astype(bool)
        cache[key] = (diff, odd)
    return cache[key]


def _pv_weight(n: int) -> float:
    # spacing of the opposite-parity subgrid
    return 4.0 * np.pi / n


def hilbert_pv(f: Field) -> Field:
    """Alternate-point rule for (1/(2*pi*i)) pv int cot((a-b)/2) f(b) db."""
    n = f.n
    diff, odd = _parity_lattice(n)
    ker = np.where(odd, 2.0 * periodized_kernel(np.where(odd, diff, 1.0), 1), 0.0)
    vals = (ker @ f.values) * (_pv_weight(n) / (2.0j * np.pi))
    return Field(vals, copy=False)


def commutator_h_pv(f: Field, g: Field) -> Field:
    """[f, H]g by the alternate-point rule.

    (1/(2*pi*i)) pv int cot((a-b)/2) (f(a) - f(b)) g(b) db
    """
    n = f.n
    diff, odd = _parity_lattice(n)
    ker = np.where(odd, 2.0 * periodized_kernel(np.where(odd, diff, 1.0), 1), 0.0)
    fd = f.values[:, None] - f.values[None, :]
    vals = ((ker * fd) @ g.values) * (_pv_weight(n) / (2.0j * np.pi))
    return Field(vals, copy=False)


def commutator_h_d_pv(f: Field, g: Field) -> Field:
    """[f, H] d/dalpha g: same rule applied to the spectral derivative of g."""
    return commutator_h_pv(f, derivative(g))


def triple_bracket_pv(f: Field, g: Field, h: Field) -> Field:
    """(1/(pi*i)) int (f(a)-f(b)) (g(a)-g(b)) K2(a-b) h(b) db.

    The integrand is bounded (the numerator vanishes quadratically), and
    the alternate-point rule keeps it consistent with the pv rules above.
    """
    n = f.n
    diff, odd = _parity_lattice(n)
    k2 = np.where(odd, periodized_kernel(np.where(odd, diff, 1.0), 2), 0.0)
    fd = f.values[:, None] - f.values[None, :]
    gd = g.values[:, None] - g.values[None, :]
    vals = ((k2 * fd * gd) @ h.values) * (_pv_weight(n) / (1.0j * np.pi))
    return Field(vals, copy=False)


def bracket_n_pv(f: Field, m: Field, g: Field, order: int) -> Field:
    """Generalized bracket with an n-fold difference weight, n = order.

    (1/(pi*i)) int (f(a)-f(b)) (m(a)-m(b))^n K_{n+1}(a-b) g'(b) db

    order 0 is [f, H]dg up to the shared quadrature; order 1 is the
    triple bracket with h = g'.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError(f"bracket order must be in 0..3, got {order}")
    n = f.n
    diff, odd = _parity_lattice(n)
    ker = np.where(odd, periodized_kernel(np.where(odd, diff, 1.0), order + 1), 0.0)
    fd = f.values[:, None] - f.values[None, :]
    if order > 0:
        md = (m.values[:, None] - m.values[None, :]) ** order
        ker = ker * md
    gp = derivative(g).values
    vals = ((ker * fd) @ gp) * (_pv_weight(n) / (1.0j * np.pi))
    return Field(vals, copy=False)


def a1_pv(zt: Field) -> Field:
    """Taylor-sign weight as a manifestly nonnegative double sum.

    1 + (1/(2*pi)) int |Zt(a) - Zt(b)|^2 K2(a-b) db >= 1 pointwise.
    """
    n = zt.n
    diff, odd = _parity_lattice(n)
    k2 = np.where(odd, periodized_kernel(np.where(odd, diff, 1.0), 2), 0.0)
    zd = np.abs(zt.values[:, None] - zt.values[None, :]) ** 2
    vals = 1.0 + ((k2 * zd) @ np.ones(n)) * (_pv_weight(n) / (2.0 * np.pi))
    return Field(vals.astype(np.complex128), copy=False)


def pointwise_square_difference_pv(f: Field) -> np.ndarray:
    """For each node a: int |f(a) - f(b)|^2 K2(a-b) db (real array).

    This is the pointwise quantity bounded by the Hardy inequality
    against |f'|_{L2}^2.
    """
    n = f.n
    diff, odd = _parity_lattice(n)
    k2 = np.where(odd, periodized_kernel(np.where(odd, diff, 1.0), 2), 0.0)
    fd = np.abs(f.values[:, None] - f.values[None, :]) ** 2
    return ((k2 * fd) @ np.ones(n)) * _pv_weight(n)


def hhalf_sq_pv(f: Field) -> float:
    """Squared half-derivative norm as the double-integral form.

    (1/(2*pi)) int int |f(a) - f(b)|^2 K2(a-b) db da; agrees with the
    multiplier form 2*pi sum |k| |c_k|^2 for band-limited f.
    """
    n = f.n
    inner = pointwise_square_difference_pv(f)
    return float(np.sum(inner) * (2.0 * np.pi / n) / (2.0 * np.pi))


def poisson_extend_pv(f: Field, depth: float, targets: np.ndarray | None = None,
                      oversample: int = 8) -> np.ndarray:
    """Harmonic extension at y = depth < 0 by direct Poisson convolution.

    The periodized lower-half-plane kernel is the disk kernel with
    r = exp(depth):  P_r(x) = (1 - r^2) / (2*pi (1 - 2 r cos x + r^2)).
    Plain trapezoid (no singularity for depth < 0); the source grid is
    oversampled by trigonometric interpolation because the kernel's own
    spectrum decays only like r^|k| and would otherwise alias at shallow
    depths.
    """
    if depth >= 0:
        raise ValueError("depth must be negative")
    n = f.n
    m = oversample * n
    fine = np.zeros(m, dtype=np.complex128)
    h = n // 2
    c = f.coeffs
    fine[:h] = c[:h]
    fine[m - h:] = c[h:]
    src_vals = np.fft.ifft(fine * m)
    src = 2.0 * np.pi * np.arange(m) / m
    x = grid(n) if targets is None else np.asarray(targets, dtype=np.float64)
    r = np.exp(depth)
    ker = (1.0 - r * r) / (2.0 * np.pi * (1.0 - 2.0 * r * np.cos(x[:, None] - src[None, :]) + r * r))
    return (ker @ src_vals) * (2.0 * np.pi / m)
