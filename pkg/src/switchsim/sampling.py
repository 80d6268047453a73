"""Seeded random states, unitaries, spectra and channels for tests and the verifier."""

from __future__ import annotations

import numpy as np

from .tensor_core import DensityMatrix, PureState


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_pure_state(dim: int, rng=None, dims=None) -> PureState:
    rng = _rng(rng)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(v / np.linalg.norm(v), dims)


def random_density_matrix(dim: int, rng=None, rank: int | None = None, dims=None) -> DensityMatrix:
    """Hilbert-Schmidt (rank = dim) or induced-measure random mixed state."""
    rng = _rng(rng)
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar unitary via QR with the phase fix of Mezzadri."""
    rng = _rng(rng)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_spectrum(dim: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return rng.dirichlet(np.ones(dim))


def random_kraus(dim: int, n_ops: int, rng=None) -> np.ndarray:
    """Kraus operators cut from a random Stinespring isometry."""
    rng = _rng(rng)
    u = random_unitary(dim * n_ops, rng)
    iso = u[:, :dim]
    return iso.reshape(n_ops, dim, dim)
