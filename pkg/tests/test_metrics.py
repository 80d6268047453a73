import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchsim.channels import HidingSpec, apply, hiding_channel
from switchsim.errors import ContractError, DegenerateOutcomeError, DimensionError
from switchsim.metrics import (
    classical_fidelity_threshold,
    conditional_coherence_closed_form,
    conditional_eigenvalues_closed_form,
    conditional_fidelity_closed_form,
    entropy_and_work,
    fidelity_pure,
    l1_coherence,
    maskable_pair_check,
    masking_reduced_states,
    von_neumann_entropy,
)
from switchsim.sampling import random_density_matrix, random_pure_state, random_spectrum
from switchsim.switch import ControlQubit, apply_switch, condition_on_control
from switchsim.tensor_core import DensityMatrix, PureState

seeds = st.integers(0, 2**32 - 1)
PLUS = PureState(np.array([1, 1]) / np.sqrt(2))


def conditioned(spectrum, psi, p, sign):
    """Reference route: brute-force switch, then project the control."""
    ch = hiding_channel(HidingSpec.square(spectrum))
    return condition_on_control(apply_switch(ch, ch, psi.density(), ControlQubit(p)), sign)


def binary_entropy(x):
    return -x * np.log(x) - (1 - x) * np.log(1 - x)


def test_work_of_conditional_states():
    plus = entropy_and_work(conditioned([0.5, 0.5], PLUS, 0.5, "+").normalized)
    minus = entropy_and_work(conditioned([0.5, 0.5], PLUS, 0.5, "-").normalized)
    # eigenvalues (0.6, 0.4) and (2/3, 1/3)
    assert abs(plus.work - (np.log(2) - binary_entropy(0.4))) <= 1e-12
    assert abs(minus.work - (np.log(2) - binary_entropy(1 / 3))) <= 1e-12
    assert round(plus.work, 3) == 0.020 and round(minus.work, 3) == 0.057
    assert entropy_and_work(DensityMatrix(np.eye(2) / 2)).work <= 1e-12


def test_work_units_are_nats():
    # the same numbers in bits would be 0.029 and 0.082
    plus = entropy_and_work(conditioned([0.5, 0.5], PLUS, 0.5, "+").normalized).work
    minus = entropy_and_work(conditioned([0.5, 0.5], PLUS, 0.5, "-").normalized).work
    assert round(plus / np.log(2), 3) == 0.029 and round(minus / np.log(2), 3) == 0.082


def test_work_of_biased_sigma():
    w = entropy_and_work(HidingSpec.square([0.3, 0.7]).sigma)
    assert abs(w.work - (np.log(2) - binary_entropy(0.3))) <= 1e-12
    assert round(w.work, 4) == 0.0823


def test_entropy_bounds(rng):
    for d in (2, 3, 5):
        rho = random_density_matrix(d, rng)
        report = entropy_and_work(rho)
        assert 0 <= report.entropy <= np.log(d)
        assert abs(report.entropy - von_neumann_entropy(rho)) <= 1e-12
        lam = np.linalg.eigvalsh(rho.matrix)
        assert abs(report.entropy + np.sum(lam * np.log(lam))) <= 1e-10
    pure = random_pure_state(3, rng).density()
    assert entropy_and_work(pure).work == pytest.approx(np.log(3), abs=1e-12)
    with pytest.raises(ContractError):
        entropy_and_work(DensityMatrix(np.eye(2) / 4, normalized=False))


def test_fidelity_example():
    out = conditioned([0.5, 0.5], PLUS, 0.5, "+")
    assert abs(fidelity_pure(PLUS, out.normalized) - 0.6) <= 1e-10
    assert abs(conditional_fidelity_closed_form([0.5, 0.5], PLUS, 0.5) - 0.6) <= 1e-10


@given(seeds, st.integers(2, 4), st.floats(0, 1))
@settings(max_examples=50, deadline=None)
def test_fidelity_closed_form(seed, d, p):
    rng = np.random.default_rng(seed)
    spectrum = random_spectrum(d, rng)
    psi = random_pure_state(d, rng)
    f = conditional_fidelity_closed_form(spectrum, psi, p)
    assert abs(f - fidelity_pure(psi, conditioned(spectrum, psi, p, "+").normalized)) <= 1e-10
    # never below the plain hiding output
    s = float(np.abs(psi.amplitudes) ** 2 @ spectrum)
    assert f >= s - 1e-12


def test_fidelity_without_coherence_is_sigma_overlap():
    psi = PureState(np.array([0.6, 0.8]))
    assert conditional_fidelity_closed_form([0.3, 0.7], psi, 1.0) == pytest.approx(0.36 * 0.3 + 0.64 * 0.7)


def test_fidelity_contracts():
    with pytest.raises(ContractError):
        fidelity_pure(PLUS, DensityMatrix(np.eye(2) / 4, normalized=False))
    with pytest.raises(DimensionError):
        fidelity_pure(PLUS, DensityMatrix(np.eye(3) / 3))
    assert classical_fidelity_threshold(2) == pytest.approx(2 / 3)


def test_coherence_of_hiding_output_vanishes(rng):
    for d in (2, 3, 4):
        spec = HidingSpec.square(random_spectrum(d, rng))
        out = apply(hiding_channel(spec), random_density_matrix(d, rng))
        assert l1_coherence(out) <= 1e-12


def test_coherence_examples():
    assert abs(l1_coherence(conditioned([0.5, 0.5], PLUS, 0.5, "+").normalized) - 0.2) <= 1e-10
    assert abs(l1_coherence(conditioned([0.5, 0.5], PLUS, 0.5, "-").normalized) - 1 / 3) <= 1e-10
    assert conditional_coherence_closed_form([0.5, 0.5], PLUS, 0.5, "+") == pytest.approx(0.2, abs=1e-12)
    assert conditional_coherence_closed_form([0.5, 0.5], PLUS, 0.5, "-") == pytest.approx(1 / 3, abs=1e-12)


@given(seeds, st.integers(2, 4), st.floats(0, 1), st.sampled_from("+-"))
@settings(max_examples=60, deadline=None)
def test_coherence_closed_form(seed, d, p, sign):
    rng = np.random.default_rng(seed)
    spectrum = random_spectrum(d, rng)
    psi = random_pure_state(d, rng)
    try:
        ref = l1_coherence(conditioned(spectrum, psi, p, sign).normalized)
    except DegenerateOutcomeError:
        return
    assert abs(conditional_coherence_closed_form(spectrum, psi, p, sign) - ref) <= 1e-10


@given(seeds, st.floats(0, 1), st.sampled_from("+-"))
@settings(max_examples=60, deadline=None)
def test_eigenvalue_closed_form(seed, p, sign):
    rng = np.random.default_rng(seed)
    spectrum = random_spectrum(2, rng)
    psi = random_pure_state(2, rng)
    try:
        rho = conditioned(spectrum, psi, p, sign).normalized
    except DegenerateOutcomeError:
        return
    ref = np.linalg.eigvalsh(rho.matrix)
    big, small = conditional_eigenvalues_closed_form(spectrum, psi, p, sign)
    assert big >= small
    assert abs(big - ref[1]) <= 1e-10 and abs(small - ref[0]) <= 1e-10


def test_eigenvalue_closed_form_errors():
    with pytest.raises(DimensionError):
        conditional_eigenvalues_closed_form([0.2, 0.3, 0.5], np.ones(3) / np.sqrt(3), 0.5, "+")
    with pytest.raises(DegenerateOutcomeError):
        conditional_eigenvalues_closed_form([1.0, 0.0], np.array([1.0, 0.0]), 0.5, "-")
    with pytest.raises(DegenerateOutcomeError):
        conditional_coherence_closed_form([1.0, 0.0], np.array([1.0, 0.0]), 0.5, "-")


def test_uniform_sigma_masks_everything(rng):
    for d in (2, 3):
        ch = hiding_channel(HidingSpec.square(np.ones(d) / d))
        c = ControlQubit(0.5)
        marginals = [masking_reduced_states(apply_switch(ch, ch, random_pure_state(d, rng).density(), c))
                     for _ in range(10)]
        sys0, ctl0 = marginals[0]
        for sys_, ctl in marginals[1:]:
            assert np.max(np.abs(sys_.matrix - sys0.matrix)) <= 1e-10
            assert np.max(np.abs(ctl.matrix - ctl0.matrix)) <= 1e-10


def test_biased_sigma_reveals_input_in_control():
    ch = hiding_channel(HidingSpec.square([0.3, 0.7]))
    c = ControlQubit(0.5)
    _, a = masking_reduced_states(apply_switch(ch, ch, PureState(np.array([1.0, 0.0])).density(), c))
    _, b = masking_reduced_states(apply_switch(ch, ch, PureState(np.array([0.0, 1.0])).density(), c))
    assert abs(a.matrix[0, 1] - 0.045) <= 1e-12 and abs(b.matrix[0, 1] - 0.245) <= 1e-12


def test_maskable_pairs():
    spec = [0.3, 0.7]
    psi = PureState(np.array([0.6, 0.8]))
    rephased = PureState(np.array([0.6, 0.8j]))
    verdict = maskable_pair_check(spec, psi, rephased)
    assert verdict and verdict.residual <= 1e-12
    assert verdict.trace_psi == pytest.approx(verdict.trace_phi)
    bad = maskable_pair_check(spec, PureState(np.array([1.0, 0.0])), PLUS)
    assert not bad
    assert bad.residual == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert (bad.trace_psi, bad.trace_phi) == pytest.approx((0.09, 0.29))


@given(seeds, st.integers(2, 4))
@settings(max_examples=30, deadline=None)
def test_rephased_pairs_have_equal_marginals(seed, d):
    rng = np.random.default_rng(seed)
    spectrum = random_spectrum(d, rng)
    psi = random_pure_state(d, rng)
    phi = PureState(psi.amplitudes * np.exp(1j * rng.uniform(0, 2 * np.pi, d)))
    assert maskable_pair_check(spectrum, psi, phi)
    ch = hiding_channel(HidingSpec.square(spectrum))
    c = ControlQubit(0.5)
    a = masking_reduced_states(apply_switch(ch, ch, psi.density(), c))
    b = masking_reduced_states(apply_switch(ch, ch, phi.density(), c))
    for x, y in zip(a, b):
        assert np.max(np.abs(x.matrix - y.matrix)) <= 1e-10
