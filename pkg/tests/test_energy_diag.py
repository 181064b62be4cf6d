"""Energy functionals (both routes), geometric monitors, reports."""
import numpy as np
import pytest

from crestwave.energy_diag import (BlowupThresholds, blowup_monitor,
                                   chord_arc_delta, curly_E_depth_profile,
                                   energy_Ea, energy_Eb, energy_Ek,
                                   energy_curly_E, energy_frak_e, report_for,
                                   taylor_check)
from crestwave.state_model import WaterWaveState
from crestwave.spectral_core import Field
from crestwave.cli_io.initial_data import (linear_mode, near_crest,
                                           random_analytic, rest_state)

FUNCTIONALS = [energy_frak_e, energy_curly_E, energy_Ea, energy_Eb,
               lambda s, method="spectral": energy_Ek(s, 2, method),
               lambda s, method="spectral": energy_Ek(s, 3, method)]


@pytest.fixture(scope="module")
def states():
    return [random_analytic(64, seed=s, modes=12, decay=1.5, amplitude=0.05)
            for s in (0, 7)]


def test_rest_state_baseline():
    r = rest_state(32)
    # the two point-anchored functionals carry the |inv_za(0)|^2 = 1 floor
    assert energy_frak_e(r) == pytest.approx(1.0)
    assert energy_curly_E(r) == pytest.approx(1.0)
    assert energy_Ea(r) == 0.0
    assert energy_Eb(r) == 0.0
    assert energy_Ek(r, 2) == 0.0
    assert energy_Ek(r, 3) == 0.0
    with pytest.raises(ValueError):
        energy_Ek(r, 4)


def test_both_routes_agree(states):
    for st in states:
        for fn in FUNCTIONALS:
            a = fn(st, method="spectral")
            b = fn(st, method="quadrature")
            assert abs(a - b) < 1e-9 * max(1.0, abs(a))


def test_functionals_are_nonnegative(states):
    for st in states:
        for fn in FUNCTIONALS:
            assert fn(st) >= 0.0


def test_taylor_check_floor(states):
    for st in states:
        assert taylor_check(st) >= -1e-12
        assert abs(taylor_check(st, method="quadrature") - taylor_check(st)) < 1e-10


def test_chord_arc_flat_is_one():
    assert chord_arc_delta(linear_mode(64, 2, 1e-8)) == pytest.approx(1.0, abs=1e-6)


def test_chord_arc_decreases_toward_crest():
    deltas = [chord_arc_delta(near_crest(256, rho)) for rho in (0.3, 0.6, 0.9)]
    assert deltas[0] > deltas[1] > deltas[2] > 0.0
    assert deltas[2] < 0.7


def test_chord_arc_needs_positions():
    st = WaterWaveState(Field.zeros(32), Field.constant(32, 1.0))
    with pytest.raises(ValueError):
        chord_arc_delta(st)


def test_depth_profile_contracts(states):
    prof = curly_E_depth_profile(states[0], [-0.2, -1.0])
    assert set(prof) == {"names", "boundary", "per_depth"}
    b = np.array(prof["boundary"])
    shallow = np.array(prof["per_depth"][-0.2])
    deep = np.array(prof["per_depth"][-1.0])
    # interior norms are bounded by the boundary row and shrink with depth
    assert np.all(shallow <= b + 1e-12)
    assert np.all(deep <= shallow + 1e-12)
    with pytest.raises(ValueError):
        curly_E_depth_profile(states[0], [0.1])


def test_report_collects_direct_calls(states):
    st = states[0]
    rep = report_for(st)
    assert rep.curly_E == pytest.approx(energy_curly_E(st))
    assert rep.taylor_min == pytest.approx(taylor_check(st), abs=1e-12)
    assert rep.chord_arc == pytest.approx(chord_arc_delta(st))
    assert set(rep.constraint_defects) == {"defect_zt", "defect_za"}


def test_monitor_classifies(states):
    rep = report_for(states[0])
    assert blowup_monitor(rep, BlowupThresholds()).ok
    for kw, token in (({"energy_max": 1e-12}, "energy"),
                      ({"defect_max": 1e-30}, "defect")):
        bad = blowup_monitor(rep, BlowupThresholds(**kw))
        assert not bad.ok and token in bad.reason
