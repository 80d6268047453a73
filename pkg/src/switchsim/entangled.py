"""Switched hiding maps acting on one half of an entangled pair.

Factor order is ``A (x) B (x) control``; the channels act on ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import HidingSpec, KrausChannel, hiding_channel, lift_operators
from .errors import ContractError, DimensionError, ValidationError
from .metrics import _coherence_weight, _spectrum
from .switch import ControlQubit, SwitchOutput, apply_switch, condition_on_control, sign_value
from .tensor_core import (
    PSD_TOL,
    STRUCT_TOL,
    DensityMatrix,
    PureState,
    hermitian_eig,
    partial_transpose,
)


@dataclass(frozen=True)
class SchmidtPair:
    """Two-qubit state ``c0|00> + c1|11>``."""

    c0: complex
    c1: complex

    def __post_init__(self):
        c0, c1 = complex(self.c0), complex(self.c1)
        norm2 = abs(c0) ** 2 + abs(c1) ** 2
        if abs(norm2 - 1.0) > STRUCT_TOL:
            raise ValidationError(f"|c0|^2 + |c1|^2 = {norm2!r}, expected 1")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @classmethod
    def from_real(cls, c0: float) -> "SchmidtPair":
        """Real ``c0`` in ``[0, 1]`` with ``c1 = sqrt(1 - c0^2)``."""
        if not 0.0 <= c0 <= 1.0:
            raise ValidationError(f"c0 must lie in [0, 1], got {c0!r}")
        return cls(c0, np.sqrt(max(1.0 - c0 * c0, 0.0)))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.c0, 0.0, 0.0, self.c1], dtype=np.complex128)

    @property
    def state(self) -> PureState:
        return PureState(self.amplitudes, (2, 2))

    def density(self) -> DensityMatrix:
        return self.state.density()


class Alpha(NamedTuple):
    alpha: DensityMatrix
    prob: float


class ClosedFormParams(NamedTuple):
    pair: SchmidtPair
    spectrum: object
    p: float
    sign: object


@dataclass(frozen=True)
class PPTReport:
    eigenvalues: np.ndarray
    min_eigenvalue: float
    separable: bool
    closed_form: np.ndarray | None = None
    residual: float | None = None


def _bipartite(state) -> DensityMatrix:
    if isinstance(state, SchmidtPair):
        return state.density()
    if isinstance(state, PureState):
        state = state.density()
    if len(state.dims) != 2:
        raise DimensionError(f"expected a bipartite state, got dims {state.dims}")
    return state


def _hiding_on(spec, dim_b: int) -> KrausChannel:
    if not isinstance(spec, HidingSpec):
        spec = HidingSpec.square(spec)
    if spec.out_dim != spec.in_dim:
        raise DimensionError("the switch needs a square hiding map")
    if spec.in_dim != dim_b:
        raise DimensionError(f"hiding map acts on dimension {spec.in_dim}, subsystem B has {dim_b}")
    return hiding_channel(spec)


def switch_on_half(state, spectrum, c: ControlQubit) -> SwitchOutput:
    """Switch two copies of the hiding map on subsystem B (brute force).

    ``state`` may be a :class:`SchmidtPair` or any bipartite density matrix.
    """
    rho = _bipartite(state)
    ch = _hiding_on(spectrum, rho.dims[1])
    lifted = KrausChannel(lift_operators(ch, rho.dims, 1), ch.labels)
    return apply_switch(lifted, lifted, rho, c)


def switch_on_half_closed_form(pair: SchmidtPair, spectrum, c: ControlQubit) -> SwitchOutput:
    """Closed form for Schmidt inputs.

    ``sum_i |c_i|^2 |i><i| (x) sigma (x) diag(p, 1-p)
    + (I (x) sigma) rho (I (x) sigma) (x) sqrt(p(1-p)) X``.
    """
    pk = _spectrum(spectrum)
    if pk.size != 2:
        raise DimensionError("Schmidt pairs are two-qubit states")
    rho = pair.density().matrix
    sigma = np.diag(pk).astype(np.complex128)
    decohered = np.kron(np.diag([abs(pair.c0) ** 2, abs(pair.c1) ** 2]), sigma)
    lift = np.kron(np.eye(2), sigma)
    pop = np.diag([c.p, 1.0 - c.p])
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    joint = np.kron(decohered, pop) + c.coherence * np.kron(lift @ rho @ lift, flip)
    return SwitchOutput(DensityMatrix(joint, (2, 2, 2)), c)


def conditional_alpha(out: SwitchOutput, sign) -> Alpha:
    """Unnormalized AB state after finding the control in ``|+>`` or ``|->``."""
    cond = condition_on_control(out, sign)
    return Alpha(cond.unnormalized, cond.prob)


def alpha_closed_form(pair: SchmidtPair, spectrum, p: float, sign) -> np.ndarray:
    """Entry-by-entry conditional unnormalized state for a Schmidt pair (basis 00, 01, 10, 11)."""
    p0, p1 = _spectrum(spectrum)
    w = _coherence_weight(p)
    s = sign_value(sign)
    c0, c1 = pair.c0, pair.c1
    n0, n1 = abs(c0) ** 2, abs(c1) ** 2
    a = np.zeros((4, 4), dtype=np.complex128)
    a[0, 0] = n0 * p0 / 2 * (1 + s * 2 * w * p0)
    a[0, 3] = s * w * p1 * p0 * c0 * np.conj(c1)
    a[1, 1] = n0 * p1 / 2
    a[2, 2] = n1 * p0 / 2
    a[3, 0] = s * w * p1 * p0 * c1 * np.conj(c0)
    a[3, 3] = n1 * p1 / 2 * (1 + s * 2 * w * p1)
    return a


def ppt_eigenvalues_closed_form(pair: SchmidtPair, spectrum, p: float, sign) -> np.ndarray:
    """The four eigenvalues of the A-transposed conditional state, in closed form."""
    p0, p1 = _spectrum(spectrum)
    w = _coherence_weight(p)
    s = sign_value(sign)
    n0, n1 = abs(pair.c0) ** 2, abs(pair.c1) ** 2
    lam1 = n0 * p0 / 2 * (1 + s * 2 * w * p0)
    lam2 = n1 * p1 / 2 * (1 + s * 2 * w * p1)
    x = 0.5 * (n0 * p1 + n1 * p0)
    # x^2 - n0 n1 p0 p1 (1 - 4 w^2 p0 p1), rearranged to avoid cancellation near degeneracy
    disc = 0.25 * (n0 * p1 - n1 * p0) ** 2 + 4 * w * w * n0 * n1 * (p0 * p1) ** 2
    root = np.sqrt(disc)
    return np.array([lam1, lam2, 0.5 * (x + root), 0.5 * (x - root)])


def ppt_report(alpha: DensityMatrix, closed_form_params: ClosedFormParams | None = None) -> PPTReport:
    """PPT test of a two-qubit (possibly unnormalized) state.

    For two qubits a non-negative partial transpose is equivalent to
    separability, so ``separable`` is a full verdict, not just a necessary
    condition. When ``closed_form_params`` is given, the closed-form
    eigenvalues are reported alongside with their max deviation.
    """
    if tuple(alpha.dims) != (2, 2):
        raise DimensionError(f"PPT report needs a two-qubit state, got dims {alpha.dims}")
    pt = partial_transpose(alpha, 0)
    lam = hermitian_eig(pt)[0]
    lam_min = float(lam[0])
    closed = residual = None
    if closed_form_params is not None:
        closed = np.sort(ppt_eigenvalues_closed_form(*closed_form_params))
        residual = float(np.max(np.abs(closed - lam)))
    return PPTReport(lam, lam_min, lam_min >= -PSD_TOL, closed, residual)


def entanglement_fidelity(pair, alpha_normalized: DensityMatrix) -> float:
    """Overlap ``<Psi| rho |Psi>`` of the initial pair with the output state."""
    if not alpha_normalized.normalized:
        raise ContractError("entanglement fidelity needs a normalized state")
    psi = pair.amplitudes
    if psi.size != alpha_normalized.dim:
        raise DimensionError("pair and state dimensions differ")
    f = float(np.vdot(psi, alpha_normalized.matrix @ psi).real)
    return min(max(f, 0.0), 1.0)


def entanglement_fidelity_closed_form(c0, p0: float) -> float:
    """Entanglement fidelity of the ``+`` outcome at ``p = 1/2`` as a rational function of ``|c0|^2`` and ``p0``."""
    c2 = abs(c0) ** 2
    num = 2 - 4 * c2 * (1 - p0) ** 2 - (3 - p0) * p0 + 2 * c2**2 * (1 - 2 * p0 * (1 - p0))
    den = 2 - (2 - p0) * p0 - c2 * (1 - 2 * p0)
    return float(num / den)


def entanglement_fidelity_surface(n_c0: int = 101, n_p0: int = 101, p: float = 0.5, sign="+") -> np.ndarray:
    """Entanglement fidelity on a ``c0 x p0`` grid over ``[0, 1]^2`` (rows: c0).

    Each cell normalizes the closed-form conditional state and takes the
    overlap with the initial pair directly.
    """
    c0s = np.linspace(0.0, 1.0, n_c0)
    p0s = np.linspace(0.0, 1.0, n_p0)
    out = np.empty((n_c0, n_p0))
    for i, c0 in enumerate(c0s):
        pair = SchmidtPair.from_real(float(c0))
        psi = pair.amplitudes
        for j, p0 in enumerate(p0s):
            a = alpha_closed_form(pair, (p0, 1.0 - p0), p, sign)
            tr = np.trace(a).real
            out[i, j] = np.vdot(psi, a @ psi).real / tr
    return out


def su2(theta: float, a: float, b: float) -> np.ndarray:
    """``[[e^{ia} cos t, e^{ib} sin t], [-e^{-ib} sin t, e^{-ia} cos t]]``."""
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [[np.exp(1j * a) * ct, np.exp(1j * b) * st], [-np.exp(-1j * b) * st, np.exp(-1j * a) * ct]]
    )


def _su2_stack(theta, a, b) -> np.ndarray:
    ct, st = np.cos(theta), np.sin(theta)
    u = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = np.exp(1j * a) * ct
    u[..., 0, 1] = np.exp(1j * b) * st
    u[..., 1, 0] = -np.exp(-1j * b) * st
    u[..., 1, 1] = np.exp(-1j * a) * ct
    return u


def _local_overlap(psi_mat: np.ndarray, rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    # <Psi|(I x U) rho (I x U)^dag|Psi> = v^dag rho v with v = (I x U^dag)|Psi>
    v = np.einsum("ab,nbc->nac", psi_mat, u.conj()).reshape(u.shape[0], -1)
    return np.einsum("ni,ij,nj->n", v.conj(), rho, v).real


class ModifiedFidelity(NamedTuple):
    value: float
    best_unitary: np.ndarray
    params: tuple[float, float, float]


def modified_entanglement_fidelity(
    pair, alpha_normalized: DensityMatrix, grid: int = 32, resolution: float = 1e-8
) -> ModifiedFidelity:
    """Entanglement fidelity maximized over local unitaries on B.

    A ``grid**3`` scan over the SU(2) angles ``(theta, a, b)`` picks the start
    point (first maximum wins), then a compass search halves its step per
    coordinate until every step is below ``resolution``. The identity is one
    of the grid points, so the result never drops below the plain fidelity.
    """
    if not alpha_normalized.normalized:
        raise ContractError("modified entanglement fidelity needs a normalized state")
    if tuple(alpha_normalized.dims) != (2, 2):
        raise DimensionError("modified entanglement fidelity is defined for two-qubit states")
    psi = pair.amplitudes if isinstance(pair, (SchmidtPair, PureState)) else np.asarray(pair)
    psi_mat = np.asarray(psi, dtype=np.complex128).reshape(2, 2)
    rho = alpha_normalized.matrix

    thetas = np.linspace(0.0, np.pi / 2, grid)
    phases = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    tt, aa, bb = np.meshgrid(thetas, phases, phases, indexing="ij")
    values = _local_overlap(psi_mat, rho, _su2_stack(tt.ravel(), aa.ravel(), bb.ravel()))
    k = int(np.argmax(values))
    x = np.array([tt.ravel()[k], aa.ravel()[k], bb.ravel()[k]])
    best = float(values[k])

    def f(params):
        return float(_local_overlap(psi_mat, rho, su2(*params)[None])[0])

    steps = np.array([thetas[1] - thetas[0], phases[1] - phases[0], phases[1] - phases[0]])
    while steps.max() >= resolution:
        improved = False
        for i in range(3):
            for direction in (1.0, -1.0):
                trial = x.copy()
                trial[i] += direction * steps[i]
                val = f(trial)
                if val > best:
                    x, best, improved = trial, val, True
                    break
        if not improved:
            steps *= 0.5
    return ModifiedFidelity(min(best, 1.0), su2(*x), tuple(float(t) for t in x))
