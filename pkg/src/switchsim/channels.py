"""Kraus channels, the hiding-map family and its isometric (no-hiding) dilation."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionError, StructureError, ValidationError
from .tensor_core import (
    STRUCT_TOL,
    DensityMatrix,
    PureState,
    check_dim,
    partial_trace_pure,
)


def completeness_residual(operators) -> float:
    """``max |sum_k K_k^dag K_k - I|`` for a stack of Kraus operators."""
    ops = np.asarray(operators, dtype=np.complex128)
    gram = np.einsum("kji,kjl->il", ops.conj(), ops)
    return float(np.max(np.abs(gram - np.eye(ops.shape[2]))))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map stored as a stack of Kraus operators of shape ``(n, out_dim, in_dim)``."""

    operators: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        ops = np.array(self.operators, dtype=np.complex128, copy=True)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise DimensionError(f"Kraus stack must have shape (n, out, in), got {ops.shape}")
        if not np.all(np.isfinite(ops)):
            raise ValidationError("Kraus operators have non-finite entries")
        check_dim(max(ops.shape[1:]), "channel dimension")
        res = completeness_residual(ops)
        if res > STRUCT_TOL:
            raise ValidationError(f"Kraus operators are not trace preserving (residual {res:.3e})")
        if self.labels is not None and len(self.labels) != ops.shape[0]:
            raise ValidationError("one label per Kraus operator required")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def in_dim(self) -> int:
        return self.operators.shape[2]

    @property
    def out_dim(self) -> int:
        return self.operators.shape[1]

    @property
    def is_square(self) -> bool:
        return self.in_dim == self.out_dim

    def __len__(self) -> int:
        return self.operators.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls(np.eye(dim)[None])

    @classmethod
    def unitary(cls, u) -> "KrausChannel":
        u = np.asarray(u, dtype=np.complex128)
        return cls(u[None])


@dataclass(frozen=True, eq=False)
class HidingSpec:
    """Target spectrum ``p_k`` of a bleaching process plus the input dimension.

    The output dimension is ``len(spectrum)``; the fixed output state is
    ``diag(spectrum)`` in the computational basis.
    """

    spectrum: np.ndarray
    in_dim: int

    def __post_init__(self):
        p = np.array(self.spectrum, dtype=float, copy=True).ravel()
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValidationError("spectrum must be a non-empty finite vector")
        if np.any(p < -STRUCT_TOL) or np.any(p > 1 + STRUCT_TOL):
            raise ValidationError(f"spectrum entries must lie in [0, 1], got {p}")
        if abs(p.sum() - 1.0) > STRUCT_TOL:
            raise ValidationError(f"spectrum sums to {p.sum()!r}, not 1")
        if int(self.in_dim) < 1:
            raise ValidationError("in_dim must be positive")
        p = np.clip(p, 0.0, 1.0)
        p.setflags(write=False)
        object.__setattr__(self, "spectrum", p)
        object.__setattr__(self, "in_dim", int(self.in_dim))

    @property
    def out_dim(self) -> int:
        return self.spectrum.size

    @property
    def sigma(self) -> DensityMatrix:
        return DensityMatrix(np.diag(self.spectrum).astype(np.complex128))

    @classmethod
    def square(cls, spectrum) -> "HidingSpec":
        """Spec whose input dimension equals the spectrum length."""
        spectrum = np.asarray(spectrum, dtype=float)
        return cls(spectrum, spectrum.size)


def hiding_channel(spec: HidingSpec) -> KrausChannel:
    """Kraus operators ``sqrt(p_k) |k><n|`` for every output ``k`` and input ``n``.

    Zero-weight operators are kept so that the ``(k, n)`` labels stay aligned
    with the full index set.
    """
    d_out, d_in = spec.out_dim, spec.in_dim
    ops = np.zeros((d_out * d_in, d_out, d_in), dtype=np.complex128)
    labels = []
    for k in range(d_out):
        for n in range(d_in):
            ops[k * d_in + n, k, n] = np.sqrt(spec.spectrum[k])
            labels.append((k, n))
    return KrausChannel(ops, tuple(labels))


def thermal_spec(energies, beta: float, in_dim: int | None = None) -> HidingSpec:
    """Gibbs weights ``exp(-beta E_k) / Z`` as a hiding spectrum."""
    e = np.asarray(energies, dtype=float).ravel()
    if e.size == 0 or not np.all(np.isfinite(e)):
        raise ValidationError("energies must be a non-empty finite vector")
    if not np.isfinite(beta) or beta < 0:
        raise ValidationError(f"beta must be finite and non-negative, got {beta!r}")
    # shift so the largest Boltzmann factor is exactly 1
    w = np.exp(-beta * (e - e.min()))
    return HidingSpec(w / w.sum(), e.size if in_dim is None else in_dim)


def erasure_spec(in_dim: int) -> HidingSpec:
    """Erasure to the extra basis state ``|in_dim>`` of an ``in_dim + 1`` output space.

    Input basis vectors are identified with the first ``in_dim`` output basis
    vectors.
    """
    p = np.zeros(in_dim + 1)
    p[-1] = 1.0
    return HidingSpec(p, in_dim)


def apply(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """``sum_k K_k rho K_k^dag``."""
    if rho.dim != ch.in_dim:
        raise DimensionError(f"channel expects dimension {ch.in_dim}, state has {rho.dim}")
    ops = ch.operators
    out = np.einsum("kab,bc,kdc->ad", ops, rho.matrix, ops.conj())
    out = 0.5 * (out + out.conj().T)
    dims = rho.dims if ch.is_square else (ch.out_dim,)
    return DensityMatrix(out, dims, normalized=rho.normalized)


def lift_operators(ch: KrausChannel, dims: Sequence[int], target: int) -> np.ndarray:
    """Kraus stack of ``I (x) ... (x) K (x) ... (x) I`` acting on factor ``target``."""
    dims = tuple(dims)
    if not 0 <= target < len(dims):
        raise StructureError(f"target factor {target} out of range for dims {dims}")
    if not ch.is_square:
        raise DimensionError("only square channels can act on an embedded subsystem")
    if dims[target] != ch.in_dim:
        raise DimensionError(f"factor {target} has dimension {dims[target]}, channel acts on {ch.in_dim}")
    before = np.eye(prod(dims[:target]))
    after = np.eye(prod(dims[target + 1:]))
    check_dim(prod(dims), "lifted channel dimension")
    return np.stack([np.kron(np.kron(before, k), after) for k in ch.operators])


def apply_on_subsystem(ch: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    if len(rho.dims) < 2 and target != 0:
        raise StructureError("state has no declared factorization")
    ops = lift_operators(ch, rho.dims, target)
    lifted = KrausChannel(ops, ch.labels)
    return apply(lifted, rho)


def nohiding_dilation(spec: HidingSpec) -> np.ndarray:
    """Isometry ``V |psi> = sum_k sqrt(p_k) |k>_S (x) |k>_Q (x) |psi>_R``.

    Output factor order is (system, ancilla register Q, ancilla copy R) with
    dimensions ``(out_dim, out_dim, in_dim)``. Tracing out Q and R leaves
    ``diag(spectrum)``; the input survives untouched in R.
    """
    d_out, d_in = spec.out_dim, spec.in_dim
    check_dim(d_out * d_out * d_in, "dilation dimension")
    chi = np.zeros(d_out * d_out, dtype=np.complex128)
    for k in range(d_out):
        chi[k * d_out + k] = np.sqrt(spec.spectrum[k])
    return np.kron(chi[:, None], np.eye(d_in))


def dilate(spec: HidingSpec, psi: PureState) -> PureState:
    if psi.dim != spec.in_dim:
        raise DimensionError(f"spec expects dimension {spec.in_dim}, state has {psi.dim}")
    v = nohiding_dilation(spec) @ psi.amplitudes
    return PureState(v, (spec.out_dim, spec.out_dim, spec.in_dim))


def system_marginal(dilated: PureState) -> DensityMatrix:
    return partial_trace_pure(dilated, 0)


def recover_input(dilated: PureState) -> DensityMatrix:
    """Reduced state of the last ancilla factor, where the input information sits."""
    return partial_trace_pure(dilated, len(dilated.dims) - 1)
