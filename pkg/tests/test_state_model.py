"""Surface state invariants and the closed coefficient formulas."""
import numpy as np
import pytest

from crestwave.spectral_core import Field, derivative, norm_linf
from crestwave.state_model import (TaylorSignViolation, WaterWaveState,
                                   compute_A1, compute_a1_rate, compute_at_over_a,
                                   compute_b, compute_b_alpha, compute_dzt,
                                   compute_ztt, compute_zttt, derive,
                                   reconstruct_inv_za)
from crestwave.cli_io.initial_data import linear_mode, random_analytic, rest_state


@pytest.fixture(scope="module")
def states():
    return [random_analytic(64, seed=s, modes=10, decay=1.5, amplitude=0.04)
            for s in range(4)]


def test_state_grid_consistency():
    with pytest.raises(ValueError):
        WaterWaveState(Field.zeros(16), Field.constant(32, 1.0))
    with pytest.raises(ValueError):
        WaterWaveState(Field.zeros(16), Field.constant(16, 1.0), Field.zeros(32))
    st = WaterWaveState(Field.zeros(16), Field.constant(16, 1.0))
    assert st.n == 16 and st.t == 0.0 and st.z is None


def test_constraint_defects_flag_wrong_sector():
    n = 32
    good = linear_mode(n, 2, 0.02)
    d = good.constraint_defects()
    assert max(d.values()) < 1e-14
    good.validate()
    bad = WaterWaveState(Field.from_modes(n, {3: 0.1}), Field.constant(n, 1.0))
    assert bad.constraint_defects()["defect_zt"] > 1e-3
    with pytest.raises(ValueError):
        bad.validate()


def test_transport_velocity_is_real(states):
    for st in states:
        b = compute_b(st)
        assert float(np.max(np.abs(b.values.imag))) < 1e-14


def test_rest_state_coefficients():
    r = rest_state(32)
    d = derive(r)
    assert norm_linf(d.b) == 0.0
    assert norm_linf(d.b_alpha) == 0.0
    assert norm_linf(d.A1 - Field.constant(32, 1.0)) < 1e-14
    # flat surface at rest does not accelerate
    assert norm_linf(d.ztt_bar) < 1e-14


def test_taylor_weight_routes_and_floor(states):
    for st in states:
        spec = compute_A1(st, method="commutator")
        ref = compute_A1(st, method="quadrature")
        assert norm_linf(spec - ref) < 1e-10
        assert float(np.min(spec.values.real)) >= 1.0 - 1e-12
    with pytest.raises(ValueError):
        compute_A1(states[0], method="exact")
    assert issubclass(TaylorSignViolation, RuntimeError)


def test_slope_formula_matches_differentiated_velocity(states):
    for st in states:
        gap = norm_linf(compute_b_alpha(st) - derivative(compute_b(st)))
        assert gap < 1e-11


def test_acceleration_closure_round_trip(states):
    # i(ztt_bar - i)/A1 undoes compute_ztt exactly
    for st in states:
        A1 = compute_A1(st)
        ztt = compute_ztt(st, A1)
        back = reconstruct_inv_za(ztt, A1)
        assert norm_linf(back - st.inv_za) < 1e-12


def test_derived_bundle_is_consistent(states):
    st = states[0]
    d = derive(st, third_order=True)
    assert norm_linf(d.b - compute_b(st)) == 0.0
    assert norm_linf(d.dzt - compute_dzt(st)) == 0.0
    assert norm_linf(d.A - d.A1 * st.inv_za * st.inv_za.conj()) < 1e-13
    assert d.a1_rate is not None and d.at_over_a is not None
    assert d.zttt_bar is not None
    assert norm_linf(d.a1_rate - compute_a1_rate(st)) < 1e-12


def test_rate_formula_bracket_routes_agree(states):
    st = states[0]
    fast = compute_a1_rate(st, bracket_method="spectral")
    slow = compute_a1_rate(st, bracket_method="quadrature")
    assert norm_linf(fast - slow) < 1e-10
    assert float(np.max(np.abs(fast.values.imag))) < 1e-10


def test_higher_order_fields_evaluate(states):
    st = states[1]
    assert np.all(np.isfinite(compute_at_over_a(st).values))
    assert np.all(np.isfinite(compute_zttt(st).values))


def test_third_order_consistency_with_time_differences():
    # the material rate of ztt_bar, read at fixed alpha, matches centered
    # differences along a trajectory at second order in dt
    from crestwave.evolution import SolverConfig, simulate
    st0 = random_analytic(64, seed=9, modes=8, decay=2.0, amplitude=0.03)
    errs = []
    for dt in (2e-3, 1e-3):
        traj = simulate(st0, SolverConfig(dt=dt, t_final=0.02 + dt))
        i = int(round(0.02 / dt))
        zm = compute_ztt(traj.states[i - 1])
        zp = compute_ztt(traj.states[i + 1])
        fd = Field((zp.values - zm.values) / (2 * dt))
        s0 = traj.states[i]
        d = derive(s0, third_order=True)
        fixed_alpha = d.zttt_bar - d.b * derivative(compute_ztt(s0))
        errs.append(norm_linf(fd - fixed_alpha))
    order = np.log2(errs[0] / errs[1])
    assert order > 1.8
