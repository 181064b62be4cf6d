"""Commutators, the square-kernel bracket, and the weighted derivative."""
import numpy as np
import pytest

from crestwave.singular_ops import (DegenerateWeight, bracket_n, commutator_h,
                                    commutator_h_d, d_weighted, triple_bracket)
from crestwave.spectral_core import Field, derivative, norm_linf
from helpers import rand_mixed, rand_sector


def test_commutator_annihilates_same_sector_pairs(rng):
    n = 64
    for sector in ("holo", "antiholo"):
        f = rand_sector(n, 12, sector, rng)
        g = rand_sector(n, 12, sector, rng)
        assert norm_linf(commutator_h(f, g)) < 1e-13


def test_commutator_unit_cross_pair():
    # [e^{+ia}, H] e^{-ia} = 1
    n = 32
    f = Field.from_modes(n, {1: 1.0})
    g = Field.from_modes(n, {-1: 1.0})
    out = commutator_h(f, g)
    assert norm_linf(out - Field.constant(n, 1.0)) < 1e-13


def test_commutator_is_bilinear(rng):
    n = 32
    f, g, h = (rand_mixed(n, 8, rng) for _ in range(3))
    lhs = commutator_h(f, g + 2.0 * h)
    rhs = commutator_h(f, g) + 2.0 * commutator_h(f, h)
    assert norm_linf(lhs - rhs) < 1e-13


def test_commutator_kills_constant_first_slot(rng):
    n = 32
    g = rand_mixed(n, 8, rng)
    assert norm_linf(commutator_h(Field.constant(n, 2.0 + 1j), g)) < 1e-14


def test_commutator_h_d_is_commutator_with_derivative(rng):
    n = 64
    f = rand_mixed(n, 10, rng)
    g = rand_mixed(n, 10, rng)
    assert norm_linf(commutator_h_d(f, g) - commutator_h(f, derivative(g))) < 1e-13


def test_triple_bracket_routes_agree(rng):
    n = 64
    f, g, h = (rand_mixed(n, 8, rng) for _ in range(3))
    spect = triple_bracket(f, g, h, method="spectral")
    direct = triple_bracket(f, g, h, method="quadrature")
    assert norm_linf(spect - direct) < 1e-11
    with pytest.raises(ValueError):
        triple_bracket(f, g, h, method="fast")


def test_triple_bracket_symmetric_in_difference_slots(rng):
    n = 64
    f, g, h = (rand_mixed(n, 8, rng) for _ in range(3))
    a = triple_bracket(f, g, h, method="spectral")
    b = triple_bracket(g, f, h, method="spectral")
    assert norm_linf(a - b) <= 1e-14 * (1.0 + norm_linf(a))


def test_bracket_order_zero_reduces_to_commutator(rng):
    n = 64
    f = rand_mixed(n, 8, rng)
    m = rand_mixed(n, 8, rng)
    g = rand_mixed(n, 8, rng)
    assert norm_linf(bracket_n(f, m, g, 0) - commutator_h_d(f, g)) < 1e-11


def test_bracket_order_one_reduces_to_triple(rng):
    n = 64
    f = rand_mixed(n, 8, rng)
    m = rand_mixed(n, 8, rng)
    g = rand_mixed(n, 8, rng)
    lhs = bracket_n(f, m, g, 1)
    rhs = triple_bracket(f, m, derivative(g))
    assert norm_linf(lhs - rhs) < 1e-11


def test_bracket_rejects_bad_orders(rng):
    f = rand_mixed(16, 4, rng)
    for bad in (-1, 4, 1.5, "2"):
        with pytest.raises(ValueError):
            bracket_n(f, f, f, bad)


def test_d_weighted_constant_weight(rng):
    n = 32
    f = rand_mixed(n, 8, rng)
    out = d_weighted(f, Field.constant(n, 2.0))
    assert norm_linf(out - 0.5 * derivative(f)) < 1e-13


def test_d_weighted_matches_pointwise_ratio():
    # w = 2 + e^{-ia}/2 never vanishes; the geometric tail of f'/w decays
    # fast enough that the truncated spectral route matches pointwise
    n = 64
    f = Field.from_modes(n, {-2: 1.0})
    w = Field.from_modes(n, {-1: 0.5, 0: 2.0})
    out = d_weighted(f, w)
    expect = Field(derivative(f).values / w.values)
    assert norm_linf(out - expect) < 1e-10


def test_d_weighted_guards_degenerate_weight():
    n = 32
    f = Field.from_modes(n, {-1: 1.0})
    w = Field.from_modes(n, {0: 1.0, -1: 1.0})  # touches zero at alpha = pi
    with pytest.raises(DegenerateWeight):
        d_weighted(f, w, floor=1e-6)
    assert issubclass(DegenerateWeight, ValueError)
