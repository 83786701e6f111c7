"""Brute-force 2^n reference implementation.

Everything here favours being obviously correct over being fast: flat arrays
indexed by computational-basis bit patterns, explicit qubit positions, and
permutation operators realized as index relabelings.  Qubit position 1 is the
least significant bit of the index, matching the |b_n ... b_1> ordering used
by the compact modules.

Dense work is capped (kets at 20 qubits, densities at 12 by default); the
DICKE_SIM_DENSE_CAP environment variable overrides the density cap.
"""

from __future__ import annotations

import math
import os
import string
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotSymmetricError, ResourceLimitError
from .measure import SingleQubitKraus, _check_complete
from .states import SymmetricDensity, SymmetricKet

DEFAULT_KET_CAP = 20
DEFAULT_DENSITY_CAP = 12
NORM_TOL = 1e-12


def density_cap() -> int:
    env = os.environ.get("DICKE_SIM_DENSE_CAP")
    return int(env) if env else DEFAULT_DENSITY_CAP


def ket_cap() -> int:
    return max(DEFAULT_KET_CAP, density_cap())


@dataclass(frozen=True)
class DenseKet:
    """Full 2^n amplitude vector."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=complex)
        if self.n < 1 or arr.shape != (2**self.n,):
            raise DomainError(f"expected 2^{self.n} amplitudes, got shape {arr.shape}")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"dense ket not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)


@dataclass(frozen=True)
class DenseDensity:
    """Full 2^n x 2^n density matrix.

    Hermiticity and unit trace are enforced; positivity is checked by tests
    (an eigendecomposition per construction would dominate oracle runtime).
    """

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.matrix, dtype=complex)
        d = 2**self.n
        if self.n < 1 or arr.shape != (d, d):
            raise DomainError(f"expected {d}x{d} matrix, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.conj().T)) > NORM_TOL:
            raise DomainError("dense density is not Hermitian")
        if abs(arr.trace() - 1.0) > NORM_TOL:
            raise DomainError("dense density has trace != 1")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)


@dataclass(frozen=True)
class Permutation:
    """Bijection on qubit positions {1, ..., n}; mapping[i-1] = pi(i)."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise DomainError(f"not a bijection on 1..{n}: {self.mapping}")
        object.__setattr__(self, "mapping", tuple(int(i) for i in self.mapping))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.mapping, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        """self after other: (self . other)(i) = self(other(i))."""
        if self.n != other.n:
            raise DomainError("permutation size mismatch")
        return Permutation(tuple(self.mapping[other.mapping[i - 1] - 1] for i in range(1, self.n + 1)))


def transposition(n: int, p: int, q: int) -> Permutation:
    mapping = list(range(1, n + 1))
    mapping[p - 1], mapping[q - 1] = q, p
    return Permutation(tuple(mapping))


def _index_map(perm: Permutation) -> np.ndarray:
    """J with J[a] = index of P(pi)|a>: bit at position i moves to pi(i)."""
    n = perm.n
    a = np.arange(2**n, dtype=np.int64)
    j = np.zeros_like(a)
    for i, target in enumerate(perm.mapping, start=1):
        j |= ((a >> (i - 1)) & 1) << (target - 1)
    return j


def _weights(n: int) -> np.ndarray:
    """Hamming weight of every n-bit index."""
    return np.bitwise_count(np.arange(2**n, dtype=np.uint64)).astype(np.int64)


def _basis_matrix(n: int) -> np.ndarray:
    """Rows are the dense weight-nu basis states: B[nu, a] = <a|nu>."""
    w = _weights(n)
    b = np.zeros((n + 1, 2**n))
    for nu in range(n + 1):
        idx = np.nonzero(w == nu)[0]
        b[nu, idx] = 1.0 / math.sqrt(len(idx))
    return b


def expand(ket: SymmetricKet) -> DenseKet:
    """Dense amplitudes: psi_{w(a)} / sqrt(C(n, w(a))) at every bit pattern a."""
    n = ket.n
    if n < 1:
        raise DomainError("cannot expand an empty string")
    if n > ket_cap():
        raise ResourceLimitError(f"dense ket of {n} qubits exceeds cap {ket_cap()}")
    return DenseKet(n, _basis_matrix(n).T @ ket.amps)


def expand_density(rho: SymmetricDensity) -> DenseDensity:
    n = rho.n
    if n < 1:
        raise DomainError("cannot expand an empty string")
    if n > density_cap():
        raise ResourceLimitError(f"dense density of {n} qubits exceeds cap {density_cap()}")
    b = _basis_matrix(n)
    return DenseDensity(n, b.T @ rho.alpha @ b)


def compress(state: DenseKet | DenseDensity, tol: float = 1e-10):
    """Project onto the symmetric subspace; error out if weight is lost.

    The reported residual is the probability weight outside the symmetric
    subspace (1 - <psi|P|psi> for kets, tr(rho) - tr(P rho P) for densities).
    """
    n = state.n
    b = _basis_matrix(n)
    if isinstance(state, DenseKet):
        psi = b @ state.amps
        inside = float(np.linalg.norm(psi) ** 2)
        residual = max(0.0, 1.0 - inside)
        if residual > tol:
            raise NotSymmetricError(
                f"ket has weight {residual:.3e} outside the symmetric subspace", residual
            )
        return SymmetricKet(n, psi / math.sqrt(inside))
    alpha = b @ state.matrix @ b.T
    inside = float(alpha.trace().real)
    residual = max(0.0, 1.0 - inside)
    if residual > tol:
        raise NotSymmetricError(
            f"density has weight {residual:.3e} outside the symmetric subspace", residual
        )
    alpha = (alpha + alpha.conj().T) / 2.0 / inside
    return SymmetricDensity(n, alpha)


def apply_permutation(state: DenseKet | DenseDensity, perm: Permutation):
    """P(pi) |state> for kets, P(pi) rho P(pi)^dag for densities."""
    if perm.n != state.n:
        raise DomainError(f"permutation on {perm.n} qubits applied to {state.n}-qubit state")
    j = _index_map(perm)
    if isinstance(state, DenseKet):
        out = np.empty_like(state.amps)
        out[j] = state.amps
        return DenseKet(state.n, out)
    out = np.empty_like(state.matrix)
    out[np.ix_(j, j)] = state.matrix
    return DenseDensity(state.n, out)


def is_symmetric_over(rho: DenseDensity, subset, tol: float) -> bool:
    """Check rho = P(pi) rho and rho = rho P(pi)^dag for subset permutations.

    Adjacent transpositions of the sorted subset generate the full symmetric
    group on the subset, so checking them suffices.
    """
    positions = sorted(subset)
    if any(not 1 <= p <= rho.n for p in positions):
        raise DomainError(f"subset {positions} not within 1..{rho.n}")
    m = rho.matrix
    for p, q in zip(positions, positions[1:]):
        j = _index_map(transposition(rho.n, p, q))
        jinv = np.argsort(j)  # transpositions are involutions, but stay generic
        if np.max(np.abs(m[jinv, :] - m)) > tol:
            return False
        if np.max(np.abs(m[:, jinv] - m)) > tol:
            return False
    return True


def _apply_one_sided(tensor: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(tensor, axis, 0)
    moved = np.tensordot(mat, moved, axes=(1, 0))
    return np.moveaxis(moved, 0, axis)


def _sandwich_at(matrix: np.ndarray, n: int, position: int, k: np.ndarray) -> np.ndarray:
    """(K at position) rho (K at position)^dag, unnormalized."""
    t = matrix.reshape([2] * (2 * n))
    row_axis = n - position
    col_axis = 2 * n - position
    t = _apply_one_sided(t, k, row_axis)
    t = _apply_one_sided(t, k.conj(), col_axis)
    return t.reshape(2**n, 2**n)


def apply_kraus_at(
    rho: DenseDensity, position: int, kraus_set: list[SingleQubitKraus]
) -> DenseDensity:
    """Full channel sum_ell K_ell rho K_ell^dag on the given qubit."""
    if not 1 <= position <= rho.n:
        raise DomainError(f"position {position} not within 1..{rho.n}")
    _check_complete(kraus_set)
    total = sum(_sandwich_at(rho.matrix, rho.n, position, k.matrix) for k in kraus_set)
    total = (total + total.conj().T) / 2.0
    return DenseDensity(rho.n, total)


def apply_kraus_outcomes_at(
    rho: DenseDensity, position: int, kraus_set: list[SingleQubitKraus]
) -> list[tuple[float, DenseDensity | None]]:
    """Per-outcome (probability, conditional state) pairs."""
    if not 1 <= position <= rho.n:
        raise DomainError(f"position {position} not within 1..{rho.n}")
    _check_complete(kraus_set)
    results = []
    for k in kraus_set:
        raw = _sandwich_at(rho.matrix, rho.n, position, k.matrix)
        p = float(raw.trace().real)
        if p >= 1e-14:
            cond = (raw + raw.conj().T) / 2.0 / p
            results.append((p, DenseDensity(rho.n, cond)))
        else:
            results.append((p, None))
    return results


def apply_matrix_at_ket(amps: np.ndarray, n: int, position: int, mat: np.ndarray) -> np.ndarray:
    """(M at position)|psi> on raw amplitudes; no normalization."""
    t = amps.reshape([2] * n)
    return _apply_one_sided(t, mat, n - position).reshape(-1)


def partial_trace_raw(matrix: np.ndarray, n: int, positions) -> np.ndarray:
    """Partial trace on a raw (possibly unnormalized) 2^n x 2^n matrix."""
    traced = sorted(set(positions))
    letters = string.ascii_letters
    row = [letters[i] for i in range(n)]
    col = []
    next_free = n
    for axis in range(n):
        pos = n - axis
        if pos in traced:
            col.append(row[axis])
        else:
            col.append(letters[next_free])
            next_free += 1
    keep_axes = [axis for axis in range(n) if (n - axis) not in traced]
    out_sub = "".join(row[a] for a in keep_axes) + "".join(col[a] for a in keep_axes)
    t = matrix.reshape([2] * (2 * n))
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out_sub, t)
    d = 2 ** (n - len(traced))
    return reduced.reshape(d, d)


def partial_trace(rho: DenseDensity, positions) -> DenseDensity:
    """Trace out the qubits at the given positions."""
    traced = sorted(set(positions))
    n = rho.n
    if not traced:
        raise DomainError("no positions to trace out")
    if any(not 1 <= p <= n for p in traced):
        raise DomainError(f"positions {traced} not within 1..{n}")
    if len(traced) == n:
        raise DomainError("tracing out every qubit leaves no state")
    return DenseDensity(n - len(traced), partial_trace_raw(rho.matrix, n, traced))
