"""The quantum switch of two channels with a pure control qubit.

The joint output lives on ``system (x) control``. Control basis state ``|0>``
selects the order ``ch2 . ch1`` and ``|1>`` the order ``ch1 . ch2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import HidingSpec, KrausChannel, apply
from .errors import ContractError, DegenerateOutcomeError, DimensionError, ValidationError
from .tensor_core import (
    STRUCT_TOL,
    DensityMatrix,
    PureState,
    check_dim,
    partial_trace_pure,
    tensor_states,
)

DEGENERATE_PROB = 1e-14


def sign_value(sign) -> int:
    """Map ``'+'``/``'-'`` (or ``+1``/``-1``) to ``+1``/``-1``."""
    if isinstance(sign, str):
        s = sign.strip()
        if s in ("+", "+1", "plus"):
            return 1
        if s in ("-", "-1", "minus"):
            return -1
    elif sign in (1, -1):
        return int(sign)
    raise ValidationError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class ControlQubit:
    """Pure control ``sqrt(p)|0> + sqrt(1-p)|1>``."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (0.0 <= p <= 1.0) or not np.isfinite(p):
            raise ValidationError(f"control weight p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([np.sqrt(self.p), np.sqrt(1.0 - self.p)], dtype=np.complex128)

    @property
    def state(self) -> PureState:
        return PureState(self.amplitudes)

    @property
    def density(self) -> DensityMatrix:
        return self.state.density()

    @property
    def coherence(self) -> float:
        """``sqrt(p (1 - p))``, the weight of the order-interference terms."""
        return float(np.sqrt(self.p * (1.0 - self.p)))


@dataclass(frozen=True, eq=False)
class SwitchOutput:
    """Joint state over ``system factors (x) control`` plus what produced it."""

    joint: DensityMatrix
    control: ControlQubit
    channels: tuple[KrausChannel, KrausChannel] | None = None

    @property
    def system_dims(self) -> tuple[int, ...]:
        return self.joint.dims[:-1]


class Conditioned(NamedTuple):
    unnormalized: DensityMatrix
    normalized: DensityMatrix
    prob: float


def _check_switchable(ch1: KrausChannel, ch2: KrausChannel) -> int:
    if not (ch1.is_square and ch2.is_square):
        raise DimensionError("the switch needs channels with equal input and output dimension")
    if ch1.in_dim != ch2.in_dim:
        raise DimensionError(f"channel dimensions differ: {ch1.in_dim} vs {ch2.in_dim}")
    return ch1.in_dim


def switched_kraus(ch1: KrausChannel, ch2: KrausChannel) -> KrausChannel:
    """``W_ij = K2_i K1_j (x) |0><0| + K1_j K2_i (x) |1><1|``, labelled ``(i, j)``."""
    d = _check_switchable(ch1, ch2)
    check_dim(2 * d, "switched channel dimension")
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    ops = []
    labels = []
    for i, k2 in enumerate(ch2.operators):
        for j, k1 in enumerate(ch1.operators):
            ops.append(np.kron(k2 @ k1, p0) + np.kron(k1 @ k2, p1))
            labels.append((i, j))
    return KrausChannel(np.stack(ops), tuple(labels))


def apply_switch(ch1: KrausChannel, ch2: KrausChannel, rho: DensityMatrix, c: ControlQubit) -> SwitchOutput:
    """Brute-force switch output ``sum_ij W_ij (rho (x) rho_c) W_ij^dag``.

    No structure of the channels is exploited, so this is the reference every
    closed form is checked against.
    """
    d = _check_switchable(ch1, ch2)
    if rho.dim != d:
        raise DimensionError(f"channels act on dimension {d}, state has {rho.dim}")
    omega = tensor_states(rho, c.density)
    joint = apply(switched_kraus(ch1, ch2), omega)
    return SwitchOutput(joint, c, (ch1, ch2))


def _diagonal_sigma(sigma) -> np.ndarray:
    if isinstance(sigma, HidingSpec):
        return sigma.spectrum.astype(np.complex128)
    m = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma, dtype=np.complex128)
    off = m - np.diag(np.diagonal(m))
    if np.max(np.abs(off), initial=0.0) > STRUCT_TOL:
        raise ContractError("sigma must be diagonal in the computational basis")
    return np.diagonal(m).copy()


def hiding_switch_closed_form(sigma, rho: DensityMatrix, c: ControlQubit) -> SwitchOutput:
    """Switch of two identical hiding maps with fixed output ``sigma``.

    Evaluates ``sigma (x) diag(p, 1-p) + sigma rho sigma (x) sqrt(p(1-p)) X``
    where ``X`` is the control Pauli-X.
    """
    diag = _diagonal_sigma(sigma)
    if diag.size != rho.dim:
        raise DimensionError(f"sigma has dimension {diag.size}, state has {rho.dim}")
    s = np.diag(diag)
    srs = s @ rho.matrix @ s
    pop = np.diag([c.p, 1.0 - c.p])
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    joint = np.kron(s * rho.trace(), pop) + c.coherence * np.kron(srs, flip)
    return SwitchOutput(DensityMatrix(joint, tuple(rho.dims) + (2,), normalized=rho.normalized), c)


def condition_on_control(out: SwitchOutput, sign) -> Conditioned:
    """Project the control onto ``|+>`` or ``|->`` and return the system block.

    Raises
    ------
    DegenerateOutcomeError
        If the outcome probability is below ``1e-14``.
    """
    sgn = sign_value(sign)
    n = out.joint.dim // 2
    t = out.joint.matrix.reshape(n, 2, n, 2)
    block = 0.5 * (t[:, 0, :, 0] + t[:, 1, :, 1] + sgn * (t[:, 0, :, 1] + t[:, 1, :, 0]))
    block = 0.5 * (block + block.conj().T)
    prob = float(np.trace(block).real)
    if prob < DEGENERATE_PROB:
        raise DegenerateOutcomeError(f"control outcome {'+' if sgn > 0 else '-'} has probability {prob:.3e}", prob)
    dims = out.system_dims
    return Conditioned(
        DensityMatrix(block, dims, normalized=False),
        DensityMatrix(block / prob, dims),
        min(prob, 1.0),
    )


def switch_dilation(ch1: KrausChannel, ch2: KrausChannel, psi: PureState, c: ControlQubit) -> PureState:
    """Isometric version of the switch with an explicit ancilla.

    Sends ``|psi> (x) |phi_c> (x) |A_00>`` to ``sum_ij W_ij(|psi> (x) |phi_c>) (x) |A_ij>``.
    The result has factors ``psi.dims + (2, n_ops)``.
    """
    w = switched_kraus(ch1, ch2)
    if psi.dim != ch1.in_dim:
        raise DimensionError(f"channels act on dimension {ch1.in_dim}, state has {psi.dim}")
    n_ops = len(w)
    check_dim(w.in_dim * n_ops, "dilated switch dimension")
    x = np.kron(psi.amplitudes, c.amplitudes)
    y = w.operators @ x  # (n_ops, 2d)
    return PureState(y.T.ravel(), tuple(psi.dims) + (2, n_ops))


def dilation_marginal(dilated: PureState) -> DensityMatrix:
    """Trace out the ancilla (last factor) of a dilated switch output."""
    return partial_trace_pure(dilated, tuple(range(len(dilated.dims) - 1)))
