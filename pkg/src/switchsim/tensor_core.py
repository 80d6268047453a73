"""Dense complex linear algebra for small quantum systems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite systems
follow the ``np.kron`` ordering: for ``a (x) b`` the row index is
``i * rows_b + k`` and the column index ``j * cols_b + l``. Every subsystem
index in the package is derived from that convention; the switch puts the
control qubit last (``system (x) control`` and ``A (x) B (x) control``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import ContractError, DimensionError, StructureError

STRUCT_TOL = 1e-12
ORACLE_TOL = 1e-10
PSD_TOL = 1e-12
DEFAULT_MAX_DIM = 4096

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def max_dim() -> int:
    """Dimension cap for any single matrix axis (``SWITCHSIM_MAX_DIM``)."""
    raw = os.environ.get("SWITCHSIM_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise DimensionError(f"SWITCHSIM_MAX_DIM must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DimensionError("SWITCHSIM_MAX_DIM must be positive")
    return value


def check_dim(n: int, what: str = "dimension") -> None:
    cap = max_dim()
    if n > cap:
        raise DimensionError(f"{what} {n} exceeds the configured maximum {cap}")


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError("matrix has non-finite entries")
    return arr


def is_hermitian(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[-1] == m.shape[-2] and float(np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0)) <= tol


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128)
    return np.outer(v, v.conj())


def _check_dims(dims, n):
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise StructureError(f"subsystem dimensions must be positive, got {dims}")
    if prod(dims) != n:
        raise StructureError(f"subsystem dims {dims} do not multiply to {n}")
    return dims


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite operator with subsystem metadata.

    ``normalized=False`` admits sub-unit trace, which is how conditional
    (post-measurement, not yet renormalized) states are carried around.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None
    normalized: bool = True

    def __post_init__(self):
        m = as_matrix(self.matrix)
        n, cols = m.shape
        if n != cols:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        dims = _check_dims(self.dims if self.dims is not None else (n,), n)
        if not is_hermitian(m):
            raise ContractError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if self.normalized and abs(tr - 1.0) > STRUCT_TOL:
            raise ContractError(f"trace {tr!r} differs from 1")
        if not self.normalized and not (-STRUCT_TOL <= tr <= 1.0 + STRUCT_TOL):
            raise ContractError(f"unnormalized trace {tr!r} outside [0, 1]")
        if not is_psd(m):
            raise ContractError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalize(self) -> "DensityMatrix":
        tr = self.trace()
        if tr <= 0:
            raise ContractError("cannot normalize a zero-trace operator")
        return DensityMatrix(self.matrix / tr, self.dims)

    @classmethod
    def from_pure(cls, psi: "PureState") -> "DensityMatrix":
        return cls(projector(psi.amplitudes), psi.dims)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm state vector."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=np.complex128)
        if v.ndim != 1:
            raise DimensionError(f"amplitudes must be a vector, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ContractError("amplitudes have non-finite entries")
        norm2 = float(np.vdot(v, v).real)
        if abs(norm2 - 1.0) > STRUCT_TOL:
            raise ContractError(f"state norm^2 {norm2!r} differs from 1")
        dims = _check_dims(self.dims if self.dims is not None else (v.size,), v.size)
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)

    @classmethod
    def from_unnormalized(cls, amplitudes, dims=None) -> "PureState":
        v = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ContractError("zero vector cannot be normalized")
        return cls(v / norm, dims)


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``m`` is >= -tol.

    A Cholesky factorization of ``m + tol*I`` exists exactly when all
    eigenvalues exceed ``-tol``, which is far cheaper than an eigensolve.
    """
    n = m.shape[0]
    try:
        np.linalg.cholesky(m + tol * np.eye(n))
    except np.linalg.LinAlgError:
        return False
    return True


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` under the package-wide index convention."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    check_dim(max(rows, cols), "tensor product dimension")
    return np.kron(a, b)


def tensor_states(*states: DensityMatrix) -> DensityMatrix:
    """Product state of several density matrices, dims concatenated."""
    if not states:
        raise StructureError("need at least one state")
    m = states[0].matrix
    dims = tuple(states[0].dims)
    normalized = states[0].normalized
    for s in states[1:]:
        m = tensor_product(m, s.matrix)
        dims += tuple(s.dims)
        normalized = normalized and s.normalized
    return DensityMatrix(m, dims, normalized=normalized)


def _as_keep(keep, n):
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise StructureError(f"invalid subsystem selection {keep} for {n} factors")
    return keep


def _ptrace_array(m: np.ndarray, dims: Sequence[int], keep: tuple[int, ...]) -> np.ndarray:
    n = len(dims)
    t = m.reshape(tuple(dims) + tuple(dims))
    rows = [chr(ord("a") + i) for i in range(n)]
    cols = [rows[i] if i not in keep else chr(ord("A") + i) for i in range(n)]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    sub = "".join(rows) + "".join(cols) + "->" + "".join(out)
    kd = prod(dims[i] for i in keep)
    return np.einsum(sub, t).reshape(kd, kd)


def partial_trace(m: DensityMatrix, keep: int | Sequence[int]) -> DensityMatrix:
    """Reduced state on the factor(s) ``keep``; all other factors are traced out."""
    if len(m.dims) < 1 or prod(m.dims) != m.dim:
        raise StructureError("density matrix has no consistent factorization")
    keep = _as_keep(keep, len(m.dims))
    reduced = _ptrace_array(m.matrix, m.dims, keep)
    return DensityMatrix(reduced, tuple(m.dims[i] for i in keep), normalized=m.normalized)


def partial_trace_pure(psi: PureState, keep: int | Sequence[int]) -> DensityMatrix:
    """Reduced state of a pure vector without forming the full projector."""
    keep = _as_keep(keep, len(psi.dims))
    n = len(psi.dims)
    others = [i for i in range(n) if i not in keep]
    t = psi.amplitudes.reshape(psi.dims)
    t = np.transpose(t, list(keep) + others)
    kd = prod(psi.dims[i] for i in keep)
    mat = t.reshape(kd, -1)
    return DensityMatrix(mat @ mat.conj().T, tuple(psi.dims[i] for i in keep))


def partial_transpose(m, on: int, dims=None) -> np.ndarray:
    """Transpose of the ``on`` factor of a bipartite operator.

    ``m`` is a :class:`DensityMatrix` or, with explicit ``dims``, any square
    array (a partial transpose is generally not a state, so applying it twice
    needs the array form).
    """
    if isinstance(m, DensityMatrix):
        mat, dims = m.matrix, m.dims if dims is None else tuple(dims)
    else:
        if dims is None:
            raise StructureError("partial transpose of a bare array needs dims")
        mat, dims = as_matrix(m), tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise StructureError(f"partial transpose needs exactly two factors, got dims {dims}")
    _check_dims(dims, mat.shape[0])
    if on not in (0, 1):
        raise StructureError(f"factor index must be 0 or 1, got {on}")
    da, db = dims
    t = mat.reshape(da, db, da, db)
    t = t.transpose(2, 1, 0, 3) if on == 0 else t.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(t).reshape(da * db, da * db)


def hermitian_eig(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigendecomposition of Hermitian matrices by cyclic complex Jacobi rotations.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        A single Hermitian matrix or a stack of them. Stacks are rotated in
        lock-step, which keeps grid sweeps vectorized.
    tol : float
        Convergence threshold on the off-diagonal Frobenius norm, scaled by
        ``max(1, ||m||_F)``.
    max_sweeps : int
        Upper bound on full cyclic sweeps.

    Returns
    -------
    eigenvalues : ndarray, shape (..., n)
        Real, ascending.
    eigenvectors : ndarray, shape (..., n, n)
        Unitary; column ``k`` belongs to ``eigenvalues[..., k]``.
    """
    a = np.array(m, dtype=np.complex128, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    if not is_hermitian(a):
        raise ContractError("hermitian_eig requires a Hermitian matrix")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    a = 0.5 * (a + a.conj().transpose(0, 2, 1))
    b = a.shape[0]
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (b, n, n)).copy()

    scale = np.maximum(1.0, np.linalg.norm(a, axis=(1, 2)))
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off < tol * scale):
            break
        for p, q in pairs:
            apq = a[:, p, q]
            r = np.abs(apq)
            active = r > 0.0
            if not np.any(active):
                continue
            phase = np.where(active, apq / np.where(active, r, 1.0), 1.0)
            app = a[:, p, p].real
            aqq = a[:, q, q].real
            safe_r = np.where(active, r, 1.0)
            tau = (aqq - app) / (2.0 * safe_r)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # rotation restricted to the (p, q) plane: diag(1, conj(phase)) @ [[c, s], [-s, c]]
            rot = np.empty((b, 2, 2), dtype=np.complex128)
            rot[:, 0, 0] = c
            rot[:, 0, 1] = s
            rot[:, 1, 0] = -s * phase.conj()
            rot[:, 1, 1] = c * phase.conj()
            idx = [p, q]
            a[:, :, idx] = a[:, :, idx] @ rot
            a[:, idx, :] = rot.conj().transpose(0, 2, 1) @ a[:, idx, :]
            v[:, :, idx] = v[:, :, idx] @ rot
            a[:, p, q] = np.where(active, 0.0, a[:, p, q])
            a[:, q, p] = np.where(active, 0.0, a[:, q, p])

    w = np.real(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n))


def eigvalsh(m) -> np.ndarray:
    return hermitian_eig(m)[0]
