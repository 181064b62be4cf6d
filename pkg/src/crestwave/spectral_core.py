"""Periodic spectral fields and the basic Fourier-multiplier calculus.

Everything in this package lives on the uniform 2*pi-periodic grid

    alpha_j = 2*pi*j/N,   j = 0..N-1,   N a power of two,

with integer wavenumbers k in {-N/2, ..., N/2 - 1} and coefficients
normalized so that

    f(alpha) = sum_k c_k exp(i k alpha),   c_k = fft(f.values)[k] / N.

Boundary traces of functions holomorphic and bounded in the lower half
plane are exactly the fields with spectrum on k <= 0; the Hilbert
transform is the multiplier -sgn(k) (sgn(0) = 0), whose mean-zero fixed
points are those traces. Products of fields are always evaluated
alias-free (zero padding to 2N, pointwise multiply, truncate back), so
operator identities hold to rounding for band-limited inputs.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Field",
    "SpectralMultiplier",
    "grid",
    "wavenumbers",
    "hilbert",
    "project",
    "derivative",
    "poisson_smooth",
    "norms",
    "norm_l2",
    "norm_linf",
    "norm_hhalf",
    "hhalf_pairing",
    "krasny_filter",
    "evaluate_at",
]


def _check_size(n: int) -> None:
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"grid size must be a power of two >= 8, got {n}")


def grid(n: int) -> np.ndarray:
    """Nodes alpha_j = 2*pi*j/n."""
    _check_size(n)
    return 2.0 * np.pi * np.arange(n) / n


def wavenumbers(n: int) -> np.ndarray:
    """Integer wavenumbers in FFT storage order: 0..n/2-1, -n/2..-1."""
    _check_size(n)
    return np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)


class Field:
    """Complex samples of a 2*pi-periodic function on the uniform grid.

    Immutable by convention: `values` is exposed as a read-only view and
    the Fourier coefficients are cached on first use. Addition and scalar
    multiplication are pointwise; `f * g` between two Fields is the
    alias-free product (padded to 2N), truncated back to the resolved
    band, which is exact whenever the true product is band-limited.
    """

    __slots__ = ("_values", "_coeffs")

    def __init__(self, values: Iterable[complex], copy: bool = True):
        arr = np.asarray(values, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("Field values must be one-dimensional")
        _check_size(arr.shape[0])
        if copy:
            arr = arr.copy()
        arr.setflags(write=False)
        self._values = arr
        self._coeffs: np.ndarray | None = None

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def coeffs(self) -> np.ndarray:
        """Normalized coefficients c_k in FFT storage order."""
        if self._coeffs is None:
            c = np.fft.fft(self._values) / self.n
            c.setflags(write=False)
            self._coeffs = c
        return self._coeffs

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> "Field":
        c = np.asarray(coeffs, dtype=np.complex128)
        _check_size(c.shape[0])
        f = cls(np.fft.ifft(c * c.shape[0]), copy=False)
        cc = c.copy()
        cc.setflags(write=False)
        f._coeffs = cc
        return f

    @classmethod
    def from_modes(cls, n: int, modes: Mapping[int, complex]) -> "Field":
        """Build from {wavenumber: coefficient}; k must lie in [-n/2, n/2)."""
        _check_size(n)
        c = np.zeros(n, dtype=np.complex128)
        for k, a in modes.items():
            if not (-n // 2 <= k < n // 2):
                raise ValueError(f"mode {k} outside resolved band for n={n}")
            c[k % n] = a
        return cls.from_coeffs(c)

    @classmethod
    def zeros(cls, n: int) -> "Field":
        return cls(np.zeros(n, dtype=np.complex128), copy=False)

    @classmethod
    def constant(cls, n: int, value: complex) -> "Field":
        return cls(np.full(n, value, dtype=np.complex128), copy=False)

    def mean(self) -> complex:
        return complex(self._values.mean())

    def conj(self) -> "Field":
        return Field(np.conj(self._values), copy=False)

    def real(self) -> "Field":
        return Field(self._values.real.astype(np.complex128), copy=False)

    def imag(self) -> "Field":
        return Field(self._values.imag.astype(np.complex128), copy=False)

    def __add__(self, other):
        if isinstance(other, Field):
            return Field(self._values + other._values, copy=False)
        return Field(self._values + other, copy=False)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            return Field(self._values - other._values, copy=False)
        return Field(self._values - other, copy=False)

    def __rsub__(self, other):
        return Field(other - self._values, copy=False)

    def __neg__(self):
        return Field(-self._values, copy=False)

    def __mul__(self, other):
        if isinstance(other, Field):
            return Field(dealias_product(self._values, other._values), copy=False)
        return Field(self._values * other, copy=False)

    def __rmul__(self, other):
        # scalar * Field
        return Field(self._values * other, copy=False)

    def __repr__(self):
        return f"Field(n={self.n}, linf={norm_linf(self):.3e})"


class SpectralMultiplier:
    """A diagonal operator in Fourier space: (Mf)^_k = symbol(k) * c_k."""

    __slots__ = ("symbol",)

    def __init__(self, symbol: np.ndarray):
        sym = np.asarray(symbol, dtype=np.complex128)
        _check_size(sym.shape[0])
        sym.setflags(write=False)
        self.symbol = sym

    @classmethod
    def from_function(cls, n: int, fn) -> "SpectralMultiplier":
        k = wavenumbers(n)
        return cls(np.asarray([fn(int(kk)) for kk in k], dtype=np.complex128))

    def __call__(self, f: Field) -> Field:
        if f.n != self.symbol.shape[0]:
            raise ValueError("size mismatch between field and multiplier")
        return Field.from_coeffs(f.coeffs * self.symbol)


# cached raw symbols, keyed by grid size

@lru_cache(maxsize=None)
def _hilbert_symbol(n: int) -> np.ndarray:
    k = wavenumbers(n)
    s = -np.sign(k).astype(np.complex128)  # sgn(0) = 0
    s.setflags(write=False)
    return s


@lru_cache(maxsize=None)
def _derivative_symbol(n: int) -> np.ndarray:
    k = wavenumbers(n)
    s = (1j * k).astype(np.complex128)
    s[n // 2] = 0.0  # drop the unpaired Nyquist mode so real fields stay real
    s.setflags(write=False)
    return s


@lru_cache(maxsize=None)
def _abs_k(n: int) -> np.ndarray:
    s = np.abs(wavenumbers(n)).astype(np.float64)
    s.setflags(write=False)
    return s


def hilbert(f: Field) -> Field:
    """Periodic Hilbert transform, multiplier -sgn(k).

    Fixed points (with sgn(0) = 0 forcing a zero mean) are the boundary
    traces of functions holomorphic in the lower half plane; traces from
    the upper half plane are flipped in sign.
    """
    return Field.from_coeffs(f.coeffs * _hilbert_symbol(f.n))


def project(f: Field, part: str) -> Field:
    """Literal half-projections (I + H)/2 and (I - H)/2.

    The constant mode is halved by both, so project(1, 'holo') == 1/2 and
    the two parts always sum back to f exactly.
    """
    if part not in ("holo", "antiholo"):
        raise ValueError("part must be 'holo' or 'antiholo'")
    sgn = _hilbert_symbol(f.n)
    sym = 0.5 * (1.0 + sgn) if part == "holo" else 0.5 * (1.0 - sgn)
    return Field.from_coeffs(f.coeffs * sym)


def sector_restrict(f: Field, part: str, keep_mean: bool = False) -> Field:
    """Strict sector restriction: keep k < 0 ('holo') or k > 0 ('antiholo').

    Unlike `project` this zeroes the constant mode (unless keep_mean),
    matching the constraint set {f = Hf}, which in the periodic
    convention admits no constant component.
    """
    if part not in ("holo", "antiholo"):
        raise ValueError("part must be 'holo' or 'antiholo'")
    k = wavenumbers(f.n)
    mask = (k < 0) if part == "holo" else (k > 0)
    if keep_mean:
        mask = mask | (k == 0)
    return Field.from_coeffs(np.where(mask, f.coeffs, 0.0))


def derivative(f: Field) -> Field:
    """Spectral d/dalpha (multiplier ik, Nyquist dropped)."""
    return Field.from_coeffs(f.coeffs * _derivative_symbol(f.n))


def poisson_smooth(f: Field, eps: float) -> Field:
    """Multiplier exp(-eps |k|): harmonic extension sampled at depth eps.

    On holomorphic traces this is composition with the conformal
    coordinate shifted by -i*eps, i.e. sampling the same analytic object
    on a line strictly inside the fluid.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    return Field.from_coeffs(f.coeffs * np.exp(-eps * _abs_k(f.n)))


def norm_l2(f: Field) -> float:
    """sqrt(integral |f|^2) by the trapezoid rule; norm of 1 is sqrt(2*pi)."""
    return float(np.sqrt(2.0 * np.pi / f.n * np.sum(np.abs(f.values) ** 2)))


def norm_linf(f: Field) -> float:
    return float(np.max(np.abs(f.values)))


def norms(f: Field) -> dict:
    return {"l2": norm_l2(f), "linf": norm_linf(f)}


def norm_hhalf(f: Field) -> float:
    """Homogeneous half-derivative norm sqrt(2*pi * sum |k| |c_k|^2).

    Unit mode exp(i k alpha) has norm sqrt(2*pi*|k|); constants have
    norm zero.
    """
    c = f.coeffs
    return float(np.sqrt(2.0 * np.pi * np.sum(_abs_k(f.n) * np.abs(c) ** 2)))


def hhalf_pairing(f: Field) -> float:
    """Signed pairing integral(i f' conj(f)) = |P_H f|_1/2^2 - |P_A f|_1/2^2.

    Evaluated spectrally as -2*pi * sum_k k |c_k|^2, which equals the
    grid sum of Re(i f' conj(f)) * dalpha for band-limited f.
    """
    c = f.coeffs
    k = wavenumbers(f.n).astype(np.float64)
    k[f.n // 2] = 0.0  # derivative drops the Nyquist mode
    return float(-2.0 * np.pi * np.sum(k * np.abs(c) ** 2))


# alias-free products ------------------------------------------------------

def _pad_spectrum(fhat: np.ndarray) -> np.ndarray:
    # fhat is an unnormalized fft of length n; embed into length 2n
    n = fhat.shape[0]
    h = n // 2
    out = np.zeros(2 * n, dtype=np.complex128)
    out[:h] = fhat[:h]
    out[2 * n - h:] = fhat[h:]
    return out


def dealias_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise product of two grid functions without aliasing.

    Both factors are zero-padded to 2N in Fourier space, multiplied on
    the fine grid, and the result is truncated back to the resolved
    band. Exact whenever the true product fits in |k| <= N/2.
    """
    n = a.shape[0]
    h = n // 2
    fa = _pad_spectrum(np.fft.fft(a))
    fb = _pad_spectrum(np.fft.fft(b))
    prod = np.fft.ifft(fa) * np.fft.ifft(fb)
    fp = np.fft.fft(prod)
    out = np.empty(n, dtype=np.complex128)
    out[:h] = fp[:h]
    out[h:] = fp[2 * n - h:]
    # each padded ifft carried 1/(2n) against the coarse fft's n, so the
    # round trip is short by a net factor of 2
    return np.fft.ifft(out) * 2.0


def krasny_filter(f: Field, threshold: float) -> Field:
    """Zero every Fourier coefficient with |c_k| below the threshold."""
    c = np.array(f.coeffs)
    c[np.abs(c) < threshold] = 0.0
    return Field.from_coeffs(c)


def evaluate_at(f: Field, x: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of f at arbitrary points.

    Direct mode sum sum_k c_k exp(i k x); the unpaired Nyquist mode is
    evaluated as a cosine so that real grid functions interpolate to
    real values.
    """
    x = np.asarray(x, dtype=np.float64)
    c = f.coeffs
    n = f.n
    k = wavenumbers(n).astype(np.float64)
    ny = n // 2
    kk = np.delete(k, ny)
    cc = np.delete(c, ny)
    vals = np.exp(1j * np.outer(x, kk)) @ cc
    vals = vals + c[ny] * np.cos(ny * x)
    return vals
