"""Commutators and multilinear singular brackets.

The operators here are the algebraic workhorses of the evolution and of
the energy estimates: commutators of multiplication with the Hilbert
transform, and the bilinear bracket with the square kernel. Every
operator exists in two routes, a spectral fast path built from
alias-free products and the alternate-point quadrature of
`crestwave.quadrature`; the two are never collapsed into one another.
"""
from __future__ import annotations

import numpy as np

from . import quadrature as quad
from .spectral_core import Field, derivative, hilbert

__all__ = [
    "DegenerateWeight",
    "commutator_h",
    "commutator_h_d",
    "triple_bracket",
    "bracket_n",
    "d_weighted",
]


class DegenerateWeight(ValueError):
    """Raised when a weight passed to a weighted derivative is too close
    to zero for a pointwise reciprocal to be trustworthy."""


def commutator_h(f: Field, g: Field) -> Field:
    """[f, H] g = f * Hg - H(f g), with alias-free products.

    Kernel form: (1/(2*pi*i)) pv int cot((a-b)/2) (f(a)-f(b)) g(b) db.
    Annihilates pairs holomorphic on the same side; on e^{+ia}, e^{-ia}
    it returns the constant 1.
    """
    return f * hilbert(g) - hilbert(f * g)


def commutator_h_d(f: Field, g: Field) -> Field:
    """[f, H] d/dalpha g = f * H(g') - H(f g')."""
    gp = derivative(g)
    return f * hilbert(gp) - hilbert(f * gp)


def triple_bracket(f: Field, g: Field, h: Field, method: str = "quadrature") -> Field:
    """Bilinear bracket with the square kernel.

    (1/(pi*i)) int (f(a)-f(b)) (g(a)-g(b)) K2(a-b) h(b) db

    The default is the direct O(N^2) alternate-point rule. The spectral
    fast path follows from expanding the numerator and using
    FP(K2 conv u) = -pi*i*H(u'):

        [f,g;h] = -( f g H(dh) - f H(d(gh)) - g H(d(fh)) + H(d(fgh)) )
    """
    if method == "quadrature":
        return quad.triple_bracket_pv(f, g, h)
    if method == "spectral":
        fg = f * g
        fh = f * h
        gh = g * h
        fgh = fg * h
        return -(fg * hilbert(derivative(h))
                 - f * hilbert(derivative(gh))
                 - g * hilbert(derivative(fh))
                 + hilbert(derivative(fgh)))
    raise ValueError("method must be 'quadrature' or 'spectral'")


def bracket_n(f: Field, m: Field, g: Field, n: int) -> Field:
    """Generalized bracket of order n in {0,1,2,3}.

    (1/(pi*i)) int (f(a)-f(b)) (m(a)-m(b))^n K_{n+1}(a-b) g'(b) db

    n = 0 reduces to commutator_h_d(f, g); n = 1 to
    triple_bracket(f, m, g'). Orders above 3 have no periodized kernel
    shipped and are rejected.
    """
    if not isinstance(n, (int, np.integer)) or n < 0 or n > 3:
        raise ValueError(f"bracket order must be an integer in 0..3, got {n!r}")
    return quad.bracket_n_pv(f, m, g, int(n))


def d_weighted(f: Field, w: Field, floor: float = 1e-12) -> Field:
    """(1/w) d/dalpha f with a hard guard on the weight.

    The derivative is spectral; the division is carried out on the
    doubled grid and truncated back (the same alias-free convention as
    products). Raises DegenerateWeight when min |w| < floor.
    """
    wmin = float(np.min(np.abs(w.values)))
    if wmin < floor:
        raise DegenerateWeight(
            f"weight reaches |w| = {wmin:.3e}, below the floor {floor:.3e}")
    fp = derivative(f)
    n = f.n
    h = n // 2

    def _fine(c: np.ndarray) -> np.ndarray:
        out = np.zeros(2 * n, dtype=np.complex128)
        out[:h] = c[:h]
        out[2 * n - h:] = c[h:]
        return np.fft.ifft(out * 2 * n)

    ratio = _fine(fp.coeffs) / _fine(w.coeffs)
    rf = np.fft.fft(ratio) / (2 * n)
    keep = np.concatenate([rf[:h], rf[2 * n - h:]])
    return Field.from_coeffs(keep)
