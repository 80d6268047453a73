import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchsim.channels import HidingSpec
from switchsim.entangled import (
    ClosedFormParams,
    SchmidtPair,
    alpha_closed_form,
    conditional_alpha,
    entanglement_fidelity,
    entanglement_fidelity_closed_form,
    entanglement_fidelity_surface,
    modified_entanglement_fidelity,
    ppt_eigenvalues_closed_form,
    ppt_report,
    su2,
    switch_on_half,
    switch_on_half_closed_form,
)
from switchsim.errors import ContractError, DegenerateOutcomeError, DimensionError, ValidationError
from switchsim.sampling import random_density_matrix, random_spectrum, random_unitary
from switchsim.switch import ControlQubit
from switchsim.tensor_core import DensityMatrix, PureState, partial_trace

seeds = st.integers(0, 2**32 - 1)
X = np.array([[0, 1], [1, 0]])
BELL = SchmidtPair(2**-0.5, 2**-0.5)


def random_pair(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return SchmidtPair(v[0], v[1])


def rotate_b(rho, u):
    big = np.kron(np.eye(2), u)
    return DensityMatrix(big @ rho.matrix @ big.conj().T, (2, 2))


def test_pair_validation():
    with pytest.raises(ValidationError):
        SchmidtPair(1.0, 1.0)
    with pytest.raises(ValidationError):
        SchmidtPair.from_real(1.5)
    assert SchmidtPair.from_real(0.6).c1 == pytest.approx(0.8)


@given(seeds, st.floats(0, 1), st.sampled_from("+-"))
@settings(max_examples=50, deadline=None)
def test_alpha_closed_form_matches_brute_force(seed, p, sign):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    spectrum = random_spectrum(2, rng)
    c = ControlQubit(p)
    brute = switch_on_half(pair, spectrum, c)
    closed = switch_on_half_closed_form(pair, spectrum, c)
    assert np.max(np.abs(brute.joint.matrix - closed.joint.matrix)) <= 1e-10
    try:
        alpha = conditional_alpha(brute, sign)
    except DegenerateOutcomeError:
        assert np.max(np.abs(alpha_closed_form(pair, spectrum, p, sign))) <= 1e-12
        return
    assert np.max(np.abs(alpha.alpha.matrix - alpha_closed_form(pair, spectrum, p, sign))) <= 1e-10
    assert abs(alpha.prob - np.trace(alpha.alpha.matrix).real) <= 1e-12


def test_alpha_uniform_example():
    a = alpha_closed_form(BELL, [0.5, 0.5], 0.5, "+")
    assert np.allclose(np.diag(a).real, [3 / 16, 1 / 8, 1 / 8, 3 / 16], atol=1e-15)
    assert a[0, 3] == pytest.approx(1 / 16) and a[3, 0] == pytest.approx(1 / 16)
    assert np.trace(a).real == pytest.approx(5 / 8)


def test_ppt_uniform_example():
    alpha = conditional_alpha(switch_on_half(BELL, [0.5, 0.5], ControlQubit(0.5)), "+").alpha
    params = ClosedFormParams(BELL, [0.5, 0.5], 0.5, "+")
    report = ppt_report(alpha, params)
    assert np.allclose(report.eigenvalues, [1 / 16, 3 / 16, 3 / 16, 3 / 16], atol=1e-12)
    assert report.separable and report.residual <= 1e-12


def test_ppt_detects_bell_entanglement():
    report = ppt_report(BELL.density())
    assert report.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert not report.separable


@given(seeds, st.floats(0, 1), st.sampled_from("+-"))
@settings(max_examples=60, deadline=None)
def test_ppt_closed_form_and_separability(seed, p, sign):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    spectrum = random_spectrum(2, rng)
    a = alpha_closed_form(pair, spectrum, p, sign)
    report = ppt_report(DensityMatrix(a, (2, 2), normalized=False), ClosedFormParams(pair, spectrum, p, sign))
    assert report.residual <= 1e-10
    assert report.min_eigenvalue >= -1e-12


def test_ppt_needs_two_qubits():
    with pytest.raises(DimensionError):
        ppt_report(DensityMatrix(np.eye(6) / 6, (2, 3)))


def test_ppt_eigenvalues_sum_to_probability(rng):
    pair = random_pair(rng)
    lam = ppt_eigenvalues_closed_form(pair, [0.2, 0.8], 0.3, "-")
    assert lam.sum() == pytest.approx(np.trace(alpha_closed_form(pair, [0.2, 0.8], 0.3, "-")).real)


def test_fidelity_interior_point():
    alpha = conditional_alpha(switch_on_half(BELL, [0.5, 0.5], ControlQubit(0.5)), "+")
    normalized = DensityMatrix(alpha.alpha.matrix / alpha.prob, (2, 2))
    assert abs(entanglement_fidelity(BELL, normalized) - 0.4) <= 1e-10
    assert abs(entanglement_fidelity_closed_form(2**-0.5, 0.5) - 0.4) <= 1e-10


def test_fidelity_surface_corners():
    surf = entanglement_fidelity_surface(5, 5)
    assert surf[0, 0] == pytest.approx(1, abs=1e-12) and surf[0, -1] == pytest.approx(0, abs=1e-12)
    assert surf[-1, 0] == pytest.approx(0, abs=1e-12) and surf[-1, -1] == pytest.approx(1, abs=1e-12)


def test_fidelity_surface_matches_closed_form():
    surf = entanglement_fidelity_surface(41, 41)
    c0s = np.linspace(0, 1, 41)
    p0s = np.linspace(0, 1, 41)
    ref = np.array([[entanglement_fidelity_closed_form(c, q) for q in p0s] for c in c0s])
    assert np.max(np.abs(surf - ref)) <= 1e-10
    assert surf.min() >= 0 and surf.max() <= 1


@given(seeds, st.floats(0, 1))
@settings(max_examples=40, deadline=None)
def test_fidelity_closed_form_against_brute_force(seed, p0):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    alpha = conditional_alpha(switch_on_half(pair, [p0, 1 - p0], ControlQubit(0.5)), "+")
    normalized = DensityMatrix(alpha.alpha.matrix / alpha.prob, (2, 2))
    ref = entanglement_fidelity(pair, normalized)
    assert abs(entanglement_fidelity_closed_form(pair.c0, p0) - ref) <= 1e-10


def test_fidelity_contracts():
    with pytest.raises(ContractError):
        entanglement_fidelity(BELL, DensityMatrix(np.eye(4) / 8, (2, 2), normalized=False))


def test_su2_is_special_unitary():
    u = su2(0.3, 1.1, -2.0)
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) <= 1e-15
    assert abs(np.linalg.det(u) - 1) <= 1e-15
    assert np.array_equal(su2(0, 0, 0), np.eye(2))


def test_modified_fidelity_uniform():
    alpha = conditional_alpha(switch_on_half(BELL, [0.5, 0.5], ControlQubit(0.5)), "+")
    normalized = DensityMatrix(alpha.alpha.matrix / alpha.prob, (2, 2))
    result = modified_entanglement_fidelity(BELL, normalized)
    # the conditional state is already optimally aligned
    assert result.value == pytest.approx(0.4, abs=1e-9)


def test_modified_fidelity_recovers_planted_flip():
    rotated = rotate_b(BELL.density(), X)
    assert entanglement_fidelity(BELL, rotated) == pytest.approx(0, abs=1e-12)
    result = modified_entanglement_fidelity(BELL, rotated)
    assert result.value == pytest.approx(1, abs=1e-9)
    # the optimum undoes the flip up to a global phase
    assert abs(abs(np.trace(result.best_unitary @ X)) - 2) <= 1e-6


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_modified_fidelity_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng)
    spectrum = random_spectrum(2, rng)
    alpha = conditional_alpha(switch_on_half(pair, spectrum, ControlQubit(rng.uniform())), "+")
    normalized = DensityMatrix(alpha.alpha.matrix / alpha.prob, (2, 2))
    u = random_unitary(2, rng)
    a = modified_entanglement_fidelity(pair, normalized).value
    b = modified_entanglement_fidelity(pair, rotate_b(normalized, u)).value
    assert abs(a - b) <= 1e-6
    assert a >= entanglement_fidelity(pair, normalized) - 1e-12


def test_modified_fidelity_contracts():
    with pytest.raises(ContractError):
        modified_entanglement_fidelity(BELL, DensityMatrix(np.eye(4) / 8, (2, 2), normalized=False))
    with pytest.raises(DimensionError):
        modified_entanglement_fidelity(np.ones(6) / np.sqrt(6), DensityMatrix(np.eye(6) / 6, (2, 3)))


@given(seeds, st.sampled_from([2, 3]), st.floats(0, 1))
@settings(max_examples=30, deadline=None)
def test_general_input_closed_form(seed, d_b, p):
    """Arbitrary mixed AB inputs obey the same two-term structure as Schmidt pairs."""
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(2 * d_b, rng, dims=(2, d_b))
    spectrum = random_spectrum(d_b, rng)
    c = ControlQubit(p)
    brute = switch_on_half(rho, HidingSpec.square(spectrum), c).joint.matrix
    sigma = np.diag(spectrum)
    lift = np.kron(np.eye(2), sigma)
    rho_a = partial_trace(rho, 0).matrix
    expected = (np.kron(np.kron(rho_a, sigma), np.diag([p, 1 - p]))
                + c.coherence * np.kron(lift @ rho.matrix @ lift, X))
    assert np.max(np.abs(brute - expected)) <= 1e-10


def test_switch_on_half_accepts_pure_state():
    psi = PureState(BELL.amplitudes, (2, 2))
    a = switch_on_half(psi, [0.5, 0.5], ControlQubit(0.5)).joint.matrix
    b = switch_on_half(BELL, [0.5, 0.5], ControlQubit(0.5)).joint.matrix
    assert np.array_equal(a, b)
    with pytest.raises(DimensionError):
        switch_on_half(BELL, [0.2, 0.3, 0.5], ControlQubit(0.5))
