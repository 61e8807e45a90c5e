"""Concurrence routes, EoF, and death/revival event extraction."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nmqsim.entanglement import (
    EntanglementEvent,
    EntanglementSeries,
    EventKind,
    concurrence_general,
    concurrence_general_series,
    concurrence_x,
    entanglement_of_formation,
    extract_events,
    markovian_rate,
    precursor,
    precursor_from_components,
    spin_flip,
)
from nmqsim.model import ModelParams
from nmqsim.pipeline import simulate
from nmqsim.presets import default_grid, preset_params
from nmqsim.propagator import TimeGrid
from nmqsim.reconstruction import XStateMatrix

BELL = 0.5 * np.array([
    [1, 0, 0, 1],
    [0, 0, 0, 0],
    [0, 0, 0, 0],
    [1, 0, 0, 1],
], dtype=complex)

# binary entropy at 0.9, evaluated with 50-digit arithmetic
H_09 = 0.46899559358928122125


def test_bell_state_concurrence():
    assert concurrence_general(BELL) == pytest.approx(1.0, abs=1e-12)
    x = XStateMatrix(a=0.5, b=0.0, c=0.0, d=0.5, f=0.5)
    assert concurrence_x(x) == pytest.approx(1.0, abs=1e-15)


def test_product_state_concurrence():
    rho = np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)
    assert concurrence_general(rho) == pytest.approx(0.0, abs=1e-12)


def test_x_state_examples():
    x = XStateMatrix(a=0.3, b=0.2, c=0.2, d=0.3, f=0.25)
    assert concurrence_x(x) == pytest.approx(0.1, abs=1e-15)
    assert concurrence_general(x.as_matrix()) == pytest.approx(0.1, abs=1e-10)

    x = XStateMatrix(a=0.46, b=0.04, c=0.04, d=0.46, f=0.3)
    assert concurrence_x(x) == pytest.approx(0.52, abs=1e-15)
    assert concurrence_general(x.as_matrix()) == pytest.approx(0.52, abs=1e-10)


def test_precursor_examples():
    x = XStateMatrix(a=0.32, b=0.18, c=0.18, d=0.32, f=0.1)
    assert precursor(x) == pytest.approx(-0.16, abs=1e-15)
    assert concurrence_x(x) == 0.0
    vals = precursor_from_components(
        np.array([0.18, 0.0]), np.array([0.18, 0.0]), np.array([0.1, 0.5])
    )
    assert vals == pytest.approx([-0.16, 1.0], abs=1e-15)
    # tiny negative populations from roundoff are treated as zero
    assert precursor_from_components(
        np.array([-1e-18]), np.array([0.09]), np.array([0.0])
    )[0] == 0.0


@settings(max_examples=80, deadline=None)
@given(
    pops=st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4),
    ratio=st.floats(0.0, 1.0),
    phase=st.floats(0.0, 2.0 * np.pi),
)
def test_analytic_route_matches_general_route(pops, ratio, phase):
    a, b, c, d = np.array(pops) / np.sum(pops)
    f = ratio * np.sqrt(a * d) * np.exp(1j * phase)
    x = XStateMatrix(a=a, b=b, c=c, d=d, f=f)
    assert abs(concurrence_x(x) - concurrence_general(x.as_matrix())) < 1e-10


def test_spin_flip_involution():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    assert np.abs(spin_flip(spin_flip(rho)) - rho).max() < 1e-14


def test_local_unitary_invariance():
    rng = np.random.default_rng(11)
    x = XStateMatrix(a=0.3, b=0.15, c=0.25, d=0.3, f=0.2 * np.exp(0.7j))
    rho = x.as_matrix()
    base = concurrence_general(rho)
    for _ in range(5):
        u1, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        u2, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        u = np.kron(u1, u2)
        rotated = u @ rho @ u.conj().T
        assert abs(concurrence_general(rotated) - base) < 1e-10


def test_series_route_is_batched_scalar_route():
    rng = np.random.default_rng(3)
    rhos = []
    for _ in range(6):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = m @ m.conj().T
        rhos.append(rho / np.trace(rho).real)
    rhos = np.array(rhos)
    series = concurrence_general_series(rhos)
    for i, rho in enumerate(rhos):
        assert abs(series[i] - concurrence_general(rho)) < 1e-13


def test_unphysical_input_rejected():
    rho = np.diag([0.7, 0.4, 0.0, -0.1]).astype(complex)
    with pytest.raises(ValueError):
        concurrence_general(rho)
    with pytest.raises(ValueError):
        concurrence_general(np.eye(4, dtype=complex))  # trace 4


def test_eof_endpoints_and_frozen_value():
    assert entanglement_of_formation(0.0) == 0.0
    assert entanglement_of_formation(1.0) == pytest.approx(1.0, abs=1e-15)
    # C = 0.6 puts the binary-entropy argument at 0.9
    assert entanglement_of_formation(0.6) == pytest.approx(H_09, abs=1e-14)


def test_eof_monotone():
    c = np.linspace(0.0, 1.0, 1000)
    e = entanglement_of_formation(c)
    assert np.all(np.diff(e) > 0)
    assert np.all((e >= 0) & (e <= 1))


def test_eof_domain_checked():
    with pytest.raises(ValueError):
        entanglement_of_formation(1.1)
    with pytest.raises(ValueError):
        entanglement_of_formation(-0.2)
    # roundoff-level excursions are tolerated
    assert entanglement_of_formation(1.0 + 5e-13) == pytest.approx(1.0, abs=1e-6)


def params_for(alpha, gamma, nbar):
    return ModelParams.from_detunings(
        omega1=10.0, delta1=0.0, delta2=0.0,
        alpha1=alpha, alpha2=alpha, gamma=gamma, nbar=nbar,
    )


def test_markovian_rate_values():
    assert markovian_rate(params_for(3.0, 27.0, 0.0), 1) == 1.0 / 3.0
    warm = markovian_rate(params_for(3.0, 27.0, 0.2), 1)
    assert abs(warm - 0.1701) < 1e-4
    assert markovian_rate(params_for(0.0, 1.0, 0.0), 1) == 0.0
    with pytest.raises(ValueError):
        markovian_rate(params_for(1.0, 0.0, 0.0), 1)


def make_series(t_end, s, fn=None):
    grid = TimeGrid(0.0, t_end, len(s))
    s = np.asarray(s, dtype=float)
    conc = np.clip(s, 0.0, None)
    return EntanglementSeries(
        grid=grid,
        concurrence=conc,
        precursor=s,
        eof=np.zeros_like(s),
        precursor_fn=fn,
    )


def test_no_events_when_positive():
    s = 0.5 + 0.1 * np.sin(np.linspace(0.0, 6.0, 61))
    assert extract_events(make_series(6.0, s)) == []


def test_shallow_dip_is_not_death():
    # drops under the revival level but never under the death threshold
    t = np.linspace(0.0, 1.0, 101)
    s = 5e-5 + 0.4 * (t - 0.5) ** 2
    assert extract_events(make_series(1.0, s)) == []


def test_single_death_with_interpolated_time():
    t = np.linspace(0.0, 1.0, 11)
    s = 0.5 - t
    events = extract_events(make_series(1.0, s))
    assert len(events) == 1
    assert events[0].kind is EventKind.FINAL_DEATH
    assert events[0].precise
    assert events[0].time == pytest.approx(0.5 - 1e-6, abs=1e-12)


def test_death_then_revival():
    t = np.linspace(0.0, 1.0, 101)
    s = 0.4 * np.abs(t - 0.5) - 0.01
    events = extract_events(make_series(1.0, s))
    assert [e.kind for e in events] == [EventKind.DEATH, EventKind.REVIVAL]
    assert all(e.precise for e in events)
    assert events[0].time == pytest.approx(0.5 - (0.01 + 1e-6) / 0.4, abs=1e-12)
    assert events[1].time == pytest.approx(0.5 + (0.01 + 1e-3) / 0.4, abs=1e-12)


def test_relapse_within_hysteresis_band_is_one_death():
    # recovery that never clears the revival level does not count
    t = np.linspace(0.0, 1.0, 201)
    s = np.full_like(t, 0.3)
    s[t > 0.3] = -0.01
    mid = (t > 0.5) & (t < 0.7)
    s[mid] = 5e-4
    s[t >= 0.7] = -0.02
    events = extract_events(make_series(1.0, s))
    assert [e.kind for e in events] == [EventKind.FINAL_DEATH]


def test_final_death_after_revivals():
    t = np.linspace(0.0, 1.0, 401)
    s = np.full_like(t, 0.3)
    s[(t > 0.15) & (t < 0.3)] = -0.05
    s[(t > 0.45) & (t < 0.6)] = -0.05
    s[t > 0.8] = -0.05
    events = extract_events(make_series(1.0, s))
    kinds = [e.kind for e in events]
    assert kinds == [
        EventKind.DEATH, EventKind.REVIVAL,
        EventKind.DEATH, EventKind.REVIVAL,
        EventKind.FINAL_DEATH,
    ]
    times = [e.time for e in events]
    assert times == sorted(times)


def test_starting_dead_emits_no_initial_death():
    t = np.linspace(0.0, 1.0, 101)
    s = 0.2 * t - 0.05
    events = extract_events(make_series(1.0, s))
    assert [e.kind for e in events] == [EventKind.REVIVAL]


def test_single_sample_dip_warns_and_flags():
    s = np.array([0.5, 0.4, 1e-9, 0.4, 0.5])
    with pytest.warns(UserWarning, match="within two grid steps"):
        events = extract_events(make_series(4.0, s))
    assert [e.kind for e in events] == [EventKind.DEATH, EventKind.REVIVAL]
    assert not events[0].precise
    assert not events[1].precise


def test_threshold_validation():
    s = np.array([0.5, 0.4, 0.3])
    with pytest.raises(ValueError):
        extract_events(make_series(1.0, s), threshold=0.0)
    with pytest.raises(ValueError):
        extract_events(make_series(1.0, s), threshold=-1e-6)


def test_bisection_uses_continuous_precursor():
    # convex decay: the chord crossing is ~1e-7 away from the true one,
    # so only bisection on the continuous function passes this bound
    fn = lambda u: 0.25 - u * u  # noqa: E731
    t = np.linspace(0.0, 1.0, 11)
    events = extract_events(make_series(1.0, fn(t), fn=fn))
    assert len(events) == 1
    assert events[0].kind is EventKind.FINAL_DEATH
    assert events[0].time == pytest.approx(np.sqrt(0.25 - 1e-6), abs=1e-8)


# event times frozen from an adaptive high-accuracy integration of the
# same dynamics with root polishing (rtol 1e-12, xtol 1e-12)
PRESET_EVENTS = {
    "fig2": [],
    "fig3": [
        ("DEATH", 0.8352782249), ("REVIVAL", 0.9690300133),
        ("DEATH", 2.4090885283), ("REVIVAL", 2.6122760538),
        ("DEATH", 3.9783942824), ("REVIVAL", 4.2945694630),
        ("DEATH", 5.5410606959), ("REVIVAL", 6.0768417446),
        ("FINAL_DEATH", 7.0939327783),
    ],
    "fig4": [("FINAL_DEATH", 4.6350425515)],
    "fig5": [],
    "fig6": [
        ("DEATH", 0.1946462602), ("REVIVAL", 0.4632443220),
        ("DEATH", 0.7996581993), ("REVIVAL", 1.1220091933),
        ("DEATH", 1.3974228217), ("REVIVAL", 1.7952114698),
        ("FINAL_DEATH", 1.9807781567),
    ],
    "fig7": [
        ("DEATH", 0.5527362627), ("REVIVAL", 1.0763426770),
        ("FINAL_DEATH", 1.7574492711),
    ],
    "fig8": [("FINAL_DEATH", 0.5093458544)],
    "fig9": [("FINAL_DEATH", 3.5289880764)],
    "fig10": [("FINAL_DEATH", 2.3335305259)],
}


@pytest.mark.parametrize("name", sorted(PRESET_EVENTS))
def test_preset_event_times(name):
    result = simulate(preset_params(name), default_grid())
    events = extract_events(result.series)
    expected = PRESET_EVENTS[name]
    assert [e.kind.value for e in events] == [k for k, _ in expected]
    for event, (_, t_ref) in zip(events, expected):
        assert event.time == pytest.approx(t_ref, abs=1e-6)
        assert event.precise


def test_alternation_invariant():
    # deaths and revivals must alternate in every preset
    for name in PRESET_EVENTS:
        kinds = [k for k, _ in PRESET_EVENTS[name]]
        for first, second in zip(kinds, kinds[1:]):
            if first == "DEATH":
                assert second == "REVIVAL"
            elif first == "REVIVAL":
                assert second in ("DEATH", "FINAL_DEATH")
