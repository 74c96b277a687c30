import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from namrspin.chain_model import FrequencySample, sample_errors, trial_stream
from namrspin.errors import DomainError, StructuralError
from namrspin.mode_solver import chain_modes
from namrspin.spin_dynamics import (
    COUPLING_NORMALIZATION,
    IsingCouplings,
    ModeSpinWeights,
    SpinState,
    chain_couplings,
    coupling_fluctuation,
    effective_couplings,
    fidelity,
    fidelity_vs_time,
    gate_fidelity,
    ideal_state,
    ising_evolve,
    mode_spin_weights,
    spin_values,
)

from conftest import G, LAMBDA, OMEGA_R, T_G, TWO_PI, paper_spec


def random_state(n, rng):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return SpinState(amps / np.linalg.norm(amps))


def random_couplings(n, rng):
    m = rng.normal(size=(n, n)) * 1e3
    m = m + m.T
    np.fill_diagonal(m, 0)
    return IsingCouplings(m)


def test_coupling_fluctuation():
    assert coupling_fluctuation(LAMBDA, OMEGA_R, OMEGA_R) == LAMBDA
    assert coupling_fluctuation(LAMBDA, OMEGA_R, 4 * OMEGA_R) == pytest.approx(LAMBDA / 2)
    assert coupling_fluctuation(LAMBDA, OMEGA_R, 1.01 * OMEGA_R) / TWO_PI == pytest.approx(49751.86, abs=0.01)
    with pytest.raises(DomainError):
        coupling_fluctuation(LAMBDA, OMEGA_R, 0.0)


def test_spin_value_table():
    s = spin_values(2)
    assert np.array_equal(s, [[1, 1], [1, -1], [-1, 1], [-1, -1]])


def test_single_resonator_weight():
    spec = paper_spec(1).with_changes(g=0.0)
    sample = FrequencySample.uniform(spec)
    w = mode_spin_weights(sample, chain_modes(spec, sample), LAMBDA)
    assert w.lambda_nk.shape == (1, 1)
    assert w.lambda_nk[0, 0] == pytest.approx(LAMBDA / 2, rel=1e-15)


def test_weights_linear_in_lambda():
    spec = paper_spec(5, 0.05)
    sample = sample_errors(spec, trial_stream(1))
    modes = chain_modes(spec, sample)
    one = mode_spin_weights(sample, modes, LAMBDA).lambda_nk
    two = mode_spin_weights(sample, modes, 2 * LAMBDA).lambda_nk
    assert np.allclose(two, 2 * one, rtol=1e-15)


def test_two_site_weights():
    spec = paper_spec(2)
    sample = FrequencySample.uniform(spec)
    modes = chain_modes(spec, sample)
    w = mode_spin_weights(sample, modes, LAMBDA).lambda_nk
    # mode 0 is the antisymmetric one (omega_r), mode 1 the symmetric one (sqrt 3 omega_r)
    for k, wt in enumerate([OMEGA_R, math.sqrt(3) * OMEGA_R]):
        mag = LAMBDA / 2 * math.sqrt(OMEGA_R / wt) / math.sqrt(2)
        assert np.allclose(np.abs(w[k]), mag, rtol=1e-12)
    assert w[0, 0] == pytest.approx(-w[0, 1], rel=1e-12)
    assert w[1, 0] == pytest.approx(w[1, 1], rel=1e-12)


def test_two_site_coupling_closed_form():
    # two modes: symmetric at sqrt(3) w_r and antisymmetric at w_r, weights +-(lambda/2) sqrt(w_r/w~)/sqrt 2
    w_plus, w_minus = math.sqrt(3) * OMEGA_R, OMEGA_R
    bare = (LAMBDA**2 / 8) * (OMEGA_R / w_plus**2 - OMEGA_R / w_minus**2)
    assert bare == pytest.approx(-LAMBDA**2 / (12 * OMEGA_R))
    m12 = chain_couplings(paper_spec(2), FrequencySample.uniform(paper_spec(2))).m_matrix[0, 1]
    assert m12 == pytest.approx(COUPLING_NORMALIZATION * bare, rel=1e-12)
    assert m12 / TWO_PI == pytest.approx(-5000 / 3, rel=1e-12)

    spec = paper_spec(2)
    sample = FrequencySample.uniform(spec)
    modes = chain_modes(spec, sample)
    plain = effective_couplings(mode_spin_weights(sample, modes, LAMBDA), modes, normalization=0.25)
    assert plain.m_matrix[0, 1] == pytest.approx(-LAMBDA**2 / (48 * OMEGA_R), rel=1e-12)


def test_decoupled_chain_has_no_couplings():
    spec = paper_spec(5, 0.1).with_changes(g=0.0)
    m = chain_couplings(spec, sample_errors(spec, trial_stream(2))).m_matrix
    assert np.max(np.abs(m)) <= 1e-12 * LAMBDA**2 / OMEGA_R


def test_couplings_symmetric_for_random_weights(rng):
    spec = paper_spec(4, 0.1)
    modes = chain_modes(spec, sample_errors(spec, trial_stream(0)))
    m = effective_couplings(ModeSpinWeights(rng.normal(size=(4, 4))), modes).m_matrix
    assert np.array_equal(m, m.T)
    assert np.all(np.diag(m) == 0)


def test_couplings_quadratic_in_lambda():
    spec = paper_spec(6, 0.05)
    sample = sample_errors(spec, trial_stream(5))
    m1 = chain_couplings(spec, sample).m_matrix
    m2 = chain_couplings(spec.with_changes(lambda_bar=2 * LAMBDA), sample).m_matrix
    assert np.allclose(m2, 4 * m1, rtol=1e-13, atol=0)


def test_evolve_single_spin_identity(rng):
    state = random_state(1, rng)
    out = ising_evolve(IsingCouplings(np.zeros((1, 1))), 1.7, state)
    assert np.array_equal(out.amplitudes, state.amplitudes)


@pytest.mark.parametrize("sign", [1, -1])
def test_evolve_two_spin_entangler(sign):
    m = sign * 1234.5
    t = math.pi / (4 * abs(m))
    out = ising_evolve(IsingCouplings([[0, m], [m, 0]]), t, SpinState.plus(2)).amplitudes
    assert np.allclose(np.abs(out), 0.5, rtol=1e-14)
    rel = out[1] / out[0]
    assert cmath.phase(rel) == pytest.approx(-sign * math.pi / 2, abs=1e-12)
    assert out[2] / out[0] == pytest.approx(rel, abs=1e-12)
    assert out[3] / out[0] == pytest.approx(1.0, abs=1e-12)
    target = SpinState(np.array([1, 1j, 1j, 1]) / 2)
    f = fidelity(out_state := SpinState(out), target)
    assert f == pytest.approx(1.0 if sign < 0 else 0.0, abs=1e-12)
    assert out_state.n == 2


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 7), seed=st.integers(0, 2**32), t1=st.floats(-1e-2, 1e-2), t2=st.floats(-1e-2, 1e-2))
def test_evolve_unitary_group_law(n, seed, t1, t2):
    rng = np.random.default_rng(seed)
    m = random_couplings(n, rng)
    state = random_state(n, rng)
    a = ising_evolve(m, t1, ising_evolve(m, t2, state))
    b = ising_evolve(m, t1 + t2, state)
    assert abs(np.linalg.norm(a.amplitudes) - 1) <= 1e-12
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) <= 1e-12


def test_evolve_dimension_mismatch(rng):
    with pytest.raises(StructuralError):
        ising_evolve(random_couplings(3, rng), 1.0, SpinState.plus(2))


def test_fidelity_basics(rng):
    x = random_state(3, rng)
    assert fidelity(x, x) == pytest.approx(1.0, abs=1e-15)
    zero, one = SpinState.basis(1, 0), SpinState.basis(1, 1)
    assert fidelity(zero, one) == 0.0
    assert fidelity(zero, SpinState.plus(1)) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(StructuralError):
        fidelity(zero, SpinState.plus(2))
    with pytest.raises(DomainError):
        SpinState([1.0, 1.0])


@pytest.mark.parametrize("n", range(2, 12))
def test_gate_fidelity_clean_is_one(n):
    spec = paper_spec(n)
    assert gate_fidelity(spec, FrequencySample.uniform(spec), T_G) == pytest.approx(1.0, abs=1e-12)


def test_gate_fidelity_zero_time():
    spec = paper_spec(4, 0.1)
    assert gate_fidelity(spec, sample_errors(spec, trial_stream(1)), 0.0) == 1.0


def test_gate_fidelity_second_order():
    spec = paper_spec(4)
    pattern = np.array([0.7, -0.2, 0.9, -1.0])
    loss = [1 - gate_fidelity(spec, FrequencySample.from_delta(OMEGA_R, s * pattern), T_G)
            for s in (0.002, 0.004)]
    assert 3.5 <= loss[1] / loss[0] <= 4.5


def test_gate_fidelity_two_site_regression():
    spec = paper_spec(2)
    f = gate_fidelity(spec, FrequencySample.from_delta(OMEGA_R, [0.01, -0.01]), T_G)
    assert f >= 0.999
    assert f == pytest.approx(0.9999999657251709, rel=1e-9)


def test_gate_fidelity_independent_of_mode_order():
    spec = paper_spec(6, 0.05)
    sample = sample_errors(spec, trial_stream(17))
    modes = chain_modes(spec, sample)
    order = np.random.default_rng(0).permutation(6)
    shuffled = modes.permuted(order)
    m_a = effective_couplings(mode_spin_weights(sample, modes, LAMBDA), modes)
    m_b = effective_couplings(mode_spin_weights(sample, shuffled, LAMBDA), shuffled)
    target = ideal_state(spec, T_G)
    f_a = fidelity(ising_evolve(m_a, T_G, SpinState.plus(6)), target)
    f_b = fidelity(ising_evolve(m_b, T_G, SpinState.plus(6)), target)
    assert f_a == pytest.approx(f_b, abs=1e-9)
    assert f_a == pytest.approx(gate_fidelity(spec, sample, T_G), abs=1e-12)


def test_time_sweep_clean():
    spec = paper_spec(4)
    sweep = fidelity_vs_time(spec, FrequencySample.uniform(spec), 0.2e-3, 0.4e-3, 201, T_G)
    assert sweep.f_best == pytest.approx(1.0, abs=1e-12)
    assert sweep.t_best == pytest.approx(T_G, rel=1e-12)
    assert len(sweep.times) == 201


def test_time_sweep_two_sites_recovers():
    spec = paper_spec(2, 0.01)
    sample = sample_errors(spec, trial_stream(3))
    m_actual = chain_couplings(spec, sample).m_matrix[0, 1]
    m_ideal = chain_couplings(spec, FrequencySample.uniform(spec)).m_matrix[0, 1]
    t_star = T_G * m_ideal / m_actual
    sweep = fidelity_vs_time(spec, sample, t_star - 1e-6, t_star + 1e-6, 2001, T_G)
    assert sweep.f_best >= 1 - 1e-6
    assert sweep.t_best == pytest.approx(t_star, abs=2e-9)


def test_time_sweep_validation():
    spec = paper_spec(2)
    with pytest.raises(DomainError):
        fidelity_vs_time(spec, FrequencySample.uniform(spec), 1.0, 0.5, 10, T_G)
    with pytest.raises(DomainError):
        fidelity_vs_time(spec, FrequencySample.uniform(spec), 0.0, 1.0, 1, T_G)
