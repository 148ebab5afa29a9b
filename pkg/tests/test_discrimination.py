import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qreading.channels import readout_pair
from qreading.discrimination import (
    BoundReport,
    OverlapFunction,
    bound_report,
    chernoff_infimum,
    classical_lb_noiseless,
    classical_lb_noisy,
    closed_form_qcb,
    fock_qcb_closed,
    helstrom,
    ln_classical_lb_noiseless,
    ln_classical_lb_noisy,
    mm_qcb_closed,
    psi_qcb_printed,
    qcb_numeric,
    qcb_pure,
    s_overlap,
    scenario_qcb,
)
from qreading.errors import CapacityError, ConsistencyError, UnsupportedModelError
from qreading.fock import ModeSpace, Operator, fidelity_pure
from qreading.logprob import LN_HALF
from qreading.scenario import ReadoutScenario
from qreading.states import TransmitterSpec, thermal_state

# frozen from tests/oracles.py at 50 digits
MM_REFERENCE = {
    (1, 0, 1e-5, 1): -2.0794415417798339,
    (2, 0, 0.1, 1): -2.1665212223476453,
    (4, 2, 0.1, 3): -19.500640942713268,
    (3, 2, 1e-5, 2): -49.517477762680637,
    (6, 0, 1.5, 1): -2.9501319534366707,
}
CLASSICAL_REFERENCE = {
    (1, 1, 0, 0, 1): -2.2781856825083331,
    (1, 1, 0.1, 0, 1): -2.2831522307260273,
    (35, 3, 0.1, 0, 1): -100.17669610881671,
    (5, 0.5, 1e-5, 0, 1): -3.8651365197717743,
    (2, 1.5, 1, 0.2, 0.9): -2.1247043609619512,
}
# ln <psi|rho0|psi> for the photon+coherent transmitter
PSI_FIDELITY_REFERENCE = {
    (1.0, 0.1): -1.5279338539896158,
    (1.0, 0.01): -1.4857964128142755,
    (0.75, 1e-5): -1.4131543098086808,
    (5.0, 0.0): -4.1815462688814654,
}
NOISELESS_M1_NS1 = 0.10246995118967495


def diag(values):
    values = np.asarray(values, dtype=float)
    return Operator(ModeSpace((values.size,)), np.diag(values))


@pytest.mark.parametrize("case", sorted(MM_REFERENCE))
def test_mm_closed_form_reference(case):
    assert math.isclose(mm_qcb_closed(*case), MM_REFERENCE[case], rel_tol=0, abs_tol=1e-12)


@pytest.mark.parametrize("case", sorted(MM_REFERENCE))
def test_mm_closed_form_matches_constructed_states(case):
    m, mp_, n_b, M = case
    pair = readout_pair(TransmitterSpec.mandm(m, mp_), n_b)
    assert math.isclose(qcb_pure(pair.psi, pair.rho0, M), MM_REFERENCE[case], abs_tol=1e-10)


def test_mm_noiseless_noon_is_perfect():
    assert mm_qcb_closed(2, 1, 0.0, 1) == -math.inf
    assert math.isclose(mm_qcb_closed(1, 0, 0.0, 1), LN_HALF - math.log(4))


@pytest.mark.parametrize("case", sorted(CLASSICAL_REFERENCE))
def test_classical_bound_reference(case):
    assert math.isclose(ln_classical_lb_noisy(*case), CLASSICAL_REFERENCE[case], abs_tol=1e-12)


def test_classical_noiseless_value():
    assert math.isclose(classical_lb_noiseless(1, 1.0, 0.0, 1.0), NOISELESS_M1_NS1, rel_tol=1e-14)
    assert math.isclose(classical_lb_noisy(1, 1.0, 0.1, 0.0, 1.0), 0.101962, abs_tol=5e-7)


def test_equal_reflectivities_give_exactly_half():
    for r in (0.0, 0.4, 1.0):
        assert classical_lb_noiseless(7, 2.0, r, r) == 0.5
        assert classical_lb_noisy(7, 2.0, 0.8, r, r) == 0.5


@settings(max_examples=100, deadline=None)
@given(
    M=st.integers(1, 60),
    n_s=st.floats(0.01, 8.0),
    r0=st.floats(0.0, 1.0),
    r1=st.floats(0.0, 1.0),
)
def test_noisy_reduces_to_noiseless(M, n_s, r0, r1):
    a = ln_classical_lb_noisy(M, n_s, 0.0, r0, r1)
    b = ln_classical_lb_noiseless(M, n_s, r0, r1)
    assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(M=st.integers(1, 40), n_s=st.floats(0.1, 6.0), n_b=st.floats(0.0, 2.0))
def test_classical_bound_monotone_in_copies(M, n_s, n_b):
    a = ln_classical_lb_noisy(M, n_s, n_b, 0.0, 1.0)
    b = ln_classical_lb_noisy(M + 1, n_s, n_b, 0.0, 1.0)
    assert b <= a + 1e-15 and a <= LN_HALF


@settings(max_examples=30, deadline=None)
@given(M=st.integers(1, 30), n_s=st.floats(0.1, 4.0), n_b=st.floats(0.0, 2.0))
def test_classical_bound_matches_mpmath(M, n_s, n_b):
    ref = float(oracles.ln_classical(M, n_s, n_b, 0, 1))
    assert math.isclose(ln_classical_lb_noisy(M, n_s, n_b, 0.0, 1.0), ref, rel_tol=1e-11)


@pytest.mark.parametrize("key", sorted(PSI_FIDELITY_REFERENCE))
def test_psi_fidelity_matches_laguerre_oracle(key):
    n_s, n_b = key
    pair = readout_pair(TransmitterSpec.photon_coherent_for_intensity(n_s), n_b)
    got = math.log(fidelity_pure(pair.psi, pair.rho0))
    assert math.isclose(got, PSI_FIDELITY_REFERENCE[key], abs_tol=1e-10)


def test_psi_printed_form_agrees_without_noise_only():
    for n_s in (0.5, 1.0, 2.0, 5.0):
        spec = TransmitterSpec.photon_coherent_for_intensity(n_s)
        sc0 = ReadoutScenario(1, n_s, 0.0)
        assert math.isclose(scenario_qcb(sc0, spec), psi_qcb_printed(n_s, 0.0, 1), abs_tol=1e-12)
    sc = ReadoutScenario(1, 1.0, 0.1)
    spec = TransmitterSpec.photon_coherent_for_intensity(1.0)
    assert abs(scenario_qcb(sc, spec) - psi_qcb_printed(1.0, 0.1, 1)) > 1e-2


def test_psi_at_half_photon_is_mm10():
    # at N_S = 1/2 the state is |1::0>, so the state-based bounds coincide
    for n_b in (1e-5, 0.1, 1.0):
        a = scenario_qcb(ReadoutScenario(2, 0.5, n_b), TransmitterSpec.photon_coherent(0.0))
        b = mm_qcb_closed(1, 0, n_b, 2)
        assert math.isclose(a, b, abs_tol=1e-12)


def test_fock_closed_form():
    for n_b in (0.01, 0.5):
        sc = ReadoutScenario(3, 1.0, n_b)
        assert math.isclose(
            scenario_qcb(sc, TransmitterSpec.single_fock()), fock_qcb_closed(n_b, 3), abs_tol=1e-12
        )
    assert fock_qcb_closed(0.0, 1) == -math.inf


def test_closed_form_dispatch():
    assert closed_form_qcb(TransmitterSpec.mandm(2, 0), 0.1, 1) == mm_qcb_closed(2, 0, 0.1, 1)
    assert closed_form_qcb(TransmitterSpec.single_fock(), 0.1, 1) == fock_qcb_closed(0.1, 1)


def test_overlap_endpoints_count_supports():
    # 0**0 := 0: Q_0 is Tr[P0 rho1], Q_1 is Tr[rho0 P1]
    rho0 = diag([0.5, 0.5, 0.0])
    rho1 = diag([0.0, 0.3, 0.7])
    assert math.isclose(s_overlap(rho0, rho1, 0.0), 0.3)
    assert math.isclose(s_overlap(rho0, rho1, 1.0), 0.5)


def test_overlap_for_commuting_states():
    p, q = np.array([0.2, 0.3, 0.5]), np.array([0.6, 0.1, 0.3])
    for s in (0.1, 0.5, 0.9):
        assert math.isclose(s_overlap(diag(p), diag(q), s), np.sum(p**s * q ** (1 - s)))


def test_orthogonal_states_have_zero_bound():
    rho0, rho1 = diag([1.0, 0.0]), diag([0.0, 1.0])
    assert chernoff_infimum(rho0, rho1).q_min == 0.0
    assert qcb_numeric(rho0, rho1, 1) == -math.inf
    assert helstrom(rho0, rho1) == 0.0


def test_identical_states_give_half():
    rho = thermal_state(0.4, 30)
    assert math.isclose(qcb_numeric(rho, rho, 5), LN_HALF, abs_tol=1e-12)
    assert math.isclose(helstrom(rho, rho), 0.5, abs_tol=1e-15)


def test_qubit_chernoff_against_brute_force_grid():
    rng = np.random.default_rng(11)
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a = g @ g.conj().T
    rho0 = Operator(ModeSpace((2,)), a / np.trace(a).real)
    rho1 = diag([0.8, 0.2])
    overlap = OverlapFunction(rho0, rho1)
    grid = min(overlap(s) for s in np.linspace(0, 1, 20001))
    result = chernoff_infimum(rho0, rho1)
    assert result.q_min <= grid + 1e-12
    assert 0.0 < result.s_star < 1.0


def test_pure_infimum_sits_at_one():
    pair = readout_pair(TransmitterSpec.mandm(4, 2), 0.1)
    result = chernoff_infimum(pair.rho0, pair.rho1)
    assert result.pure and result.s_star >= 1 - 1e-4


def test_misplaced_pure_argmin_raises(monkeypatch):
    import qreading.discrimination as disc

    monkeypatch.setattr(disc, "grid_golden_minimize", lambda *a, **k: (0.5, 0.3))
    pair = readout_pair(TransmitterSpec.mandm(2, 0), 0.1)
    with pytest.raises(ConsistencyError):
        disc.chernoff_infimum(pair.rho0, pair.rho1)


def test_helstrom_sandwich():
    pair = readout_pair(TransmitterSpec.mandm(2, 1), 1.0)
    p_h = helstrom(pair.rho0, pair.rho1)
    fid = fidelity_pure(pair.psi, pair.rho0)
    assert 0.5 * (1 - math.sqrt(1 - fid)) - 1e-12 <= p_h <= 0.5 * fid + 1e-12


def test_helstrom_two_copies_and_guard():
    rho0, rho1 = thermal_state(0.2, 12, tail_epsilon=1e-6), diag(np.eye(12)[1])
    one = helstrom(rho0, rho1)
    two = helstrom(rho0, rho1, copies=2)
    assert two <= one
    with pytest.raises(CapacityError):
        helstrom(rho0, rho1, copies=3)


def test_helstrom_matches_qubit_formula():
    # for two pure states the error is (1 - sqrt(1 - |<a|b>|^2)) / 2
    a = np.array([1.0, 0.0])
    b = np.array([math.cos(0.4), math.sin(0.4)])
    rho0 = Operator(ModeSpace((2,)), np.outer(a, a))
    rho1 = Operator(ModeSpace((2,)), np.outer(b, b))
    expected = 0.5 * (1 - math.sqrt(1 - math.cos(0.4) ** 2))
    assert math.isclose(helstrom(rho0, rho1), expected, rel_tol=1e-12)


def test_scenario_qcb_methods_agree():
    sc = ReadoutScenario(4, 2.5, 1.0)
    spec = TransmitterSpec.mandm(3, 2)
    assert math.isclose(
        scenario_qcb(sc, spec, "pure"), scenario_qcb(sc, spec, "numeric"), abs_tol=1e-10
    )
    with pytest.raises(ValueError):
        scenario_qcb(sc, spec, "guess")
    with pytest.raises(UnsupportedModelError):
        scenario_qcb(ReadoutScenario(1, 2.5, 1.0, r0=0.1), spec)


def test_bound_report_contents():
    sc = ReadoutScenario(1, 1.0, 0.1)
    report = bound_report(sc, TransmitterSpec.mandm(2, 0), with_helstrom=True)
    assert math.isclose(report.ln_p_qcb, report.ln_p_qcb_closed, abs_tol=1e-12)
    assert report.p_helstrom <= report.p_qcb
    lines = dict(line.split("=", 1) for line in report.as_lines())
    assert lines["method.ln_p_qcb_closed"] == "mm_closed"
    assert lines["quantum_advantage"] == "false"


def test_bound_report_validation():
    with pytest.raises(ValueError):
        BoundReport(ln_p_qcb=0.0, ln_p_classical_lb=LN_HALF)
    with pytest.raises(ConsistencyError):
        BoundReport(ln_p_qcb=math.log(0.1), ln_p_classical_lb=LN_HALF, p_helstrom=0.2)
    with pytest.raises(ValueError):
        bound_report(ReadoutScenario(1, 2.0, 0.1), TransmitterSpec.mandm(2, 0))


def test_multi_copy_bound_is_linear_in_copies():
    spec = TransmitterSpec.mandm(4, 2)
    ln = [scenario_qcb(ReadoutScenario(M, 3.0, 0.1), spec) for M in range(1, 36)]
    assert np.all(np.isfinite(ln))
    assert np.max(np.abs(np.diff(ln, 2))) < 1e-9


def test_mm_closed_form_matches_mpmath_deep_tail():
    # M = 400 puts the probability far below the smallest double
    ref = oracles.ln_mm(4, 2, 0.1, 400)
    assert mp.exp(ref) < mp.mpf("1e-400")
    assert math.isclose(mm_qcb_closed(4, 2, 0.1, 400), float(ref), rel_tol=1e-13)
