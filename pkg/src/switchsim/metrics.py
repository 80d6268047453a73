"""Figures of merit for switched hiding maps: fidelity, coherence, work, masking.

Closed-form expressions here are always paired with a numerical route in the
tests (conditioning the brute-force switch output and measuring directly).
Entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .channels import HidingSpec
from .errors import ContractError, DegenerateOutcomeError, DimensionError, ValidationError
from .switch import DEGENERATE_PROB, SwitchOutput, sign_value
from .tensor_core import (
    DensityMatrix,
    PureState,
    hermitian_eig,
    partial_trace,
)


def _spectrum(spectrum) -> np.ndarray:
    if isinstance(spectrum, HidingSpec):
        return spectrum.spectrum
    return HidingSpec.square(spectrum).spectrum


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.amplitudes
    return PureState(state).amplitudes


def _coherence_weight(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"control weight p must lie in [0, 1], got {p!r}")
    return float(np.sqrt(p * (1.0 - p)))


@dataclass(frozen=True)
class WorkReport:
    entropy: float
    work: float
    dim: int


def fidelity_pure(psi: PureState, rho: DensityMatrix) -> float:
    """``<psi| rho |psi>`` for a normalized ``rho``."""
    if not rho.normalized:
        raise ContractError("fidelity needs a normalized density matrix")
    if psi.dim != rho.dim:
        raise DimensionError(f"state dimension {psi.dim} != density matrix dimension {rho.dim}")
    v = psi.amplitudes
    f = float(np.vdot(v, rho.matrix @ v).real)
    return min(max(f, 0.0), 1.0)


def conditional_fidelity_closed_form(spectrum, psi, p: float) -> float:
    """Fidelity of the ``+``-conditioned switch output with the pure input.

    ``F = <s> (1/2 + w <s>) / (1/2 + w <s^2>)`` with ``<s> = <psi|sigma|psi>``,
    ``<s^2> = <psi|sigma^2|psi>`` and ``w = sqrt(p(1-p))``.
    """
    pk = _spectrum(spectrum)
    c = _amplitudes(psi)
    if c.size != pk.size:
        raise DimensionError("spectrum and state dimensions differ")
    w = _coherence_weight(p)
    weights = np.abs(c) ** 2
    s1 = float(weights @ pk)
    s2 = float(weights @ pk**2)
    return (0.5 + w * s1) / (0.5 + w * s2) * s1


def l1_coherence(rho) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    a = np.abs(m)
    return float(a.sum() - np.trace(a))


def conditional_coherence_closed_form(spectrum, amplitudes, p: float, sign) -> float:
    """l1 coherence of the normalized conditional state, straight from the amplitudes."""
    pk = _spectrum(spectrum)
    c = np.abs(_amplitudes(amplitudes))
    if c.size != pk.size:
        raise DimensionError("spectrum and state dimensions differ")
    sgn = sign_value(sign)
    w = _coherence_weight(p)
    x = pk * c
    numerator = w * (x.sum() ** 2 - np.sum(x**2))
    denominator = 0.5 + sgn * w * float(np.sum(c**2 * pk**2))
    if denominator < DEGENERATE_PROB:
        raise DegenerateOutcomeError("conditional outcome has vanishing probability", denominator)
    return float(numerator / denominator)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    lam = np.clip(hermitian_eig(rho.matrix)[0], 0.0, None)
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log(lam)))


def entropy_and_work(rho: DensityMatrix) -> WorkReport:
    """Entropy and extractable work ``ln d - S`` of a normalized state."""
    if not rho.normalized:
        raise ContractError("work is defined for normalized states")
    d = rho.dim
    s = min(max(von_neumann_entropy(rho), 0.0), log(d))
    return WorkReport(entropy=s, work=max(log(d) - s, 0.0), dim=d)


def conditional_eigenvalues_closed_form(spectrum, amplitudes, p: float, sign) -> tuple[float, float]:
    """Eigenvalues ``(1 + x)/2 >= (1 - x)/2`` of a qubit conditional state."""
    pk = _spectrum(spectrum)
    if pk.size != 2:
        raise DimensionError("closed-form conditional eigenvalues exist only for qubits")
    c = _amplitudes(amplitudes)
    if c.size != 2:
        raise DimensionError("closed-form conditional eigenvalues exist only for qubits")
    sgn = sign_value(sign)
    w = _coherence_weight(p)
    weights = np.abs(c) ** 2
    num = 1.0 + sgn * 2.0 * w * float(weights @ pk)
    den = 1.0 + sgn * 2.0 * w * float(weights @ pk**2)
    if den < 2.0 * DEGENERATE_PROB:
        raise DegenerateOutcomeError("conditional outcome has vanishing probability", den / 2.0)
    x2 = 1.0 - 4.0 * pk[0] * pk[1] * num / den**2
    x = float(np.sqrt(max(x2, 0.0)))
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x)


def masking_reduced_states(out: SwitchOutput) -> tuple[DensityMatrix, DensityMatrix]:
    """Marginals of a switch output: (all system factors, control)."""
    n = len(out.joint.dims)
    system = partial_trace(out.joint, tuple(range(n - 1)))
    control = partial_trace(out.joint, n - 1)
    return system, control


@dataclass(frozen=True)
class MaskingVerdict:
    maskable: bool
    residual: float
    trace_psi: float
    trace_phi: float

    def __bool__(self) -> bool:
        return self.maskable


def maskable_pair_check(spectrum, psi, phi, tol: float = 1e-10) -> MaskingVerdict:
    """Whether two pure states differ only by per-component phases.

    That is the condition for the pair to be masked by the switch for a
    generic spectrum. ``trace_psi`` and ``trace_phi`` are the input-dependent
    scalars ``Tr(sigma rho sigma)`` that show up in the control marginal.
    """
    pk = _spectrum(spectrum)
    b = _amplitudes(phi)
    c = _amplitudes(psi)
    if not (b.size == c.size == pk.size):
        raise DimensionError("spectrum and state dimensions differ")
    residual = float(np.max(np.abs(np.abs(b) - np.abs(c))))
    t_psi = float(np.abs(c) ** 2 @ pk**2)
    t_phi = float(np.abs(b) ** 2 @ pk**2)
    return MaskingVerdict(residual <= tol, residual, t_psi, t_phi)


def classical_fidelity_threshold(dim: int = 2) -> float:
    """Best average fidelity of a measure-and-prepare strategy, ``2/(d+1)``."""
    return 2.0 / (dim + 1)
