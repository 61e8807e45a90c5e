"""Generator construction, projectors and parameter validation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nmqsim.model import (
    InitialTerm,
    ModelParams,
    ParameterError,
    build_generator,
    initial_coefficients,
    projector_pair,
    thermal_state,
)


def make_params(alpha=2.0, delta=2.0, gamma=0.5, nbar=0.0, omega1=10.0):
    return ModelParams.from_detunings(
        omega1=omega1, delta1=delta, delta2=delta,
        alpha1=alpha, alpha2=alpha, gamma=gamma, nbar=nbar,
    )


def expected_generator(alpha, delta, omega, omega_aux, gamma_eff):
    # independent transcription of the coefficient equations of motion
    L = np.zeros((9, 9), dtype=complex)
    L[1, 2] = -2j * alpha
    L[2, 1] = -1j * alpha
    L[2, 2] = -gamma_eff
    L[2, 3] = 1j * delta
    L[2, 4] = 1j * alpha
    L[3, 2] = 1j * delta
    L[3, 3] = -gamma_eff
    L[4, 2] = 2j * alpha
    L[4, 4] = -2.0 * gamma_eff
    L[5, 5] = -1j * omega
    L[5, 6] = -1j * alpha
    L[6, 5] = -1j * alpha
    L[6, 6] = -(gamma_eff + 1j * omega_aux)
    L[7:9, 7:9] = np.conj(L[5:7, 5:7])
    return L


def test_generator_matches_equations_of_motion():
    params = make_params(alpha=2.0, delta=2.0, gamma=0.5, nbar=0.2)
    for k in (1, 2):
        L = build_generator(params, k)
        ref = expected_generator(
            params.coupling(k), params.detuning(k),
            params.qubit_frequency(k), params.auxiliary_frequency(k),
            params.gamma_eff,
        )
        assert np.array_equal(L, ref)


def test_generator_spot_entries():
    L = build_generator(make_params(alpha=2.0, delta=2.0, gamma=0.5), 1)
    assert L[1, 2] == -4j
    assert L[2, 1] == -2j
    assert L[2, 2] == -0.5
    assert L[2, 3] == 2j
    assert L[5, 5] == -10j
    assert L[6, 6] == -(0.5 + 8j)  # omega_aux = omega1 - delta1 = 8
    assert np.all(L[0] == 0) and np.all(L[:, 0] == 0)


def test_raising_lowering_blocks_conjugate():
    for nbar in (0.0, 0.2):
        L = build_generator(make_params(alpha=3.0, delta=1.5, nbar=nbar), 1)
        assert np.array_equal(L[7:9, 7:9], np.conj(L[5:7, 5:7]))


def test_generator_block_structure():
    L = build_generator(make_params(), 1)
    blocks = [[0], [1, 2, 3, 4], [5, 6], [7, 8]]
    mask = np.zeros((9, 9), dtype=bool)
    for idx in blocks:
        mask[np.ix_(idx, idx)] = True
    assert np.all(L[~mask] == 0)


@settings(max_examples=60, deadline=None)
@given(
    alpha=st.floats(0.0, 10.0),
    delta=st.floats(-10.0, 10.0),
    gamma=st.floats(0.01, 10.0),
    nbar=st.floats(0.0, 2.0),
    omega1=st.floats(0.0, 20.0),
)
def test_spectrum_never_amplifies(alpha, delta, gamma, nbar, omega1):
    params = make_params(alpha=alpha, delta=delta, gamma=gamma, nbar=nbar, omega1=omega1)
    eig = np.linalg.eigvals(build_generator(params, 1))
    assert eig.real.max() <= 1e-10


def test_gamma_eff():
    assert make_params(gamma=0.5, nbar=0.0).gamma_eff == 0.5
    assert make_params(gamma=0.5, nbar=0.2).gamma_eff == pytest.approx(0.7, abs=1e-15)


def test_projectors_idempotent_and_complementary():
    P, Q = projector_pair()
    assert np.issubdtype(P.dtype, np.integer) and np.issubdtype(Q.dtype, np.integer)
    assert np.array_equal(P + Q, np.eye(9, dtype=int))
    assert np.array_equal(P @ P, P)
    assert np.array_equal(Q @ Q, Q)
    assert np.all(P @ Q == 0)
    assert np.array_equal(np.diag(P), [1, 1, 0, 0, 0, 1, 0, 1, 0])


def test_thermal_state():
    assert np.array_equal(thermal_state(0.0), np.diag([0.0, 1.0]))
    th = thermal_state(0.2)
    assert np.allclose(th, np.diag([0.2, 1.2]) / 1.4, atol=1e-15)
    assert np.trace(th) == pytest.approx(1.0, abs=1e-15)


def test_initial_coefficients():
    ee = initial_coefficients(InitialTerm.EE, 0.0)
    assert np.array_equal(ee[:2], [1.0, 1.0]) and np.all(ee[2:] == 0)
    gg = initial_coefficients(InitialTerm.GG, 0.2)
    assert gg[0] == 1.0
    assert gg[1] == pytest.approx(-0.2 / 1.4, abs=1e-15)
    eg = initial_coefficients(InitialTerm.EG, 0.0)
    ge = initial_coefficients(InitialTerm.GE, 0.0)
    assert eg[5] == 1.0 and np.all(np.delete(eg, 5) == 0)
    assert ge[7] == 1.0 and np.all(np.delete(ge, 7) == 0)


def test_from_detunings_defaults():
    p = ModelParams.from_detunings(omega1=10.0, delta1=2.0, delta2=2.0,
                                   alpha1=1.0, alpha2=1.0, gamma=0.5, nbar=0.0)
    assert p.omega2 == 10.0
    assert p.omega3 == 8.0 and p.omega4 == 8.0
    assert p.delta1 == pytest.approx(2.0) and p.delta2 == pytest.approx(2.0)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        make_params(gamma=-0.1)
    with pytest.raises(ParameterError):
        make_params(nbar=-0.01)
    with pytest.raises(ParameterError):
        make_params(alpha=float("nan"))
    with pytest.raises(ParameterError):
        make_params(omega1=float("inf"))


def test_subsystem_index_checked():
    params = make_params()
    with pytest.raises(ValueError):
        build_generator(params, 3)
    with pytest.raises(ValueError):
        params.coupling(0)
