"""
Dense multipartite operators: Kronecker products, realignment across
bipartitions, numeric operator Schmidt rank and the operator/state
isomorphisms.

Layout: entries are row-major over the composite index with party 1
slowest. Parties are 0-based in code and printed 1-based.
"""
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Sequence

import numpy as np

from config import Config
from utils.errors import (
    BipartitionError,
    DegenerateInputError,
    DimensionError,
    NotDiagonalError,
)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class MultipartiteOperator:
    """A square complex matrix acting on the product of `dims` local spaces"""
    dims: tuple
    entries: np.ndarray = field(repr=False)
    tol: float = Config.DEFAULT_TOL

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise DimensionError(f"local dimensions must all be >= 2, got {dims}")
        entries = _frozen(self.entries)
        side = int(np.prod(dims))
        if entries.shape != (side, side):
            raise DimensionError(
                f"expected a {side}x{side} matrix for dims {dims}, got shape {entries.shape}"
            )
        if not 0 < self.tol < 1:
            raise DimensionError(f"tol must lie in (0, 1), got {self.tol}")
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'entries', entries)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def with_entries(self, entries) -> 'MultipartiteOperator':
        return MultipartiteOperator(self.dims, entries, self.tol)

    def dagger(self) -> 'MultipartiteOperator':
        return self.with_entries(self.entries.conj().T)

    def __matmul__(self, other: 'MultipartiteOperator') -> 'MultipartiteOperator':
        if self.dims != other.dims:
            raise DimensionError(f"cannot multiply dims {self.dims} and {other.dims}")
        return self.with_entries(self.entries @ other.entries)

    def unitarity_residual(self) -> float:
        """Frobenius norm of U^dag U - I"""
        return float(np.linalg.norm(self.entries.conj().T @ self.entries - np.eye(self.dim)))

    def is_unitary(self, tol: float = None) -> bool:
        tol = self.tol if tol is None else tol
        return self.unitarity_residual() <= tol * np.sqrt(self.dim)

    def is_diagonal(self) -> bool:
        diagonal = np.abs(np.diag(self.entries))
        off = np.abs(self.entries - np.diag(np.diag(self.entries)))
        return float(off.max()) <= self.tol * float(diagonal.max())


@dataclass(frozen=True, eq=False)
class LocalOperator:
    party: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f"local operator on party {self.party} must be square")
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    def is_singular(self, tol: float = Config.DEFAULT_TOL) -> bool:
        s = self.singular_values()
        return bool(s[-1] <= tol * s[0])


@dataclass(frozen=True)
class Bipartition:
    left: tuple
    right: tuple

    @classmethod
    def of(cls, left: Sequence[int], n: int) -> 'Bipartition':
        """Build the cut `left | complement` over parties 0..n-1"""
        left_set = set(left)
        if len(left_set) != len(tuple(left)) or not left_set <= set(range(n)):
            raise BipartitionError(f"invalid party set {tuple(left)} for {n} parties")
        right = tuple(p for p in range(n) if p not in left_set)
        return cls(tuple(sorted(left_set)), right)

    def __post_init__(self):
        if not self.left or not self.right:
            raise BipartitionError("both sides of a cut must be nonempty")
        if set(self.left) & set(self.right):
            raise BipartitionError(f"cut sides overlap: {self.left} | {self.right}")

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    def validate(self, n: int):
        if sorted(self.left + self.right) != list(range(n)):
            raise BipartitionError(f"cut {self} does not cover parties of a {n}-party operator")

    def __str__(self):
        def fmt(side):
            return '{' + ','.join(str(p + 1) for p in side) + '}'
        return f'{fmt(self.left)}|{fmt(self.right)}'


def all_bipartitions(n: int) -> list:
    """Every unordered cut once, with party 1 kept on the left"""
    cuts = []
    rest = range(1, n)
    for size in range(0, n - 1):
        for extra in combinations(rest, size):
            cuts.append(Bipartition.of((0,) + extra, n))
    return cuts


def kron(ops: Sequence[LocalOperator], tol: float = Config.DEFAULT_TOL) -> MultipartiteOperator:
    if not ops:
        raise DimensionError("kron needs at least one local operator")
    for position, op in enumerate(ops):
        if op.party != position:
            raise DimensionError(f"operator for party {op.party} given at position {position}")
    dims = tuple(op.dim for op in ops)
    return MultipartiteOperator(dims, reduce(np.kron, (op.entries for op in ops)), tol)


def kron_matrices(*matrices) -> np.ndarray:
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in matrices])


def local_operators(matrices) -> list:
    return [LocalOperator(party, m) for party, m in enumerate(matrices)]


def _as_tensor(entries: np.ndarray, dims: tuple) -> np.ndarray:
    return np.asarray(entries).reshape(dims + dims)


def matricize_entries(entries: np.ndarray, dims: tuple, cut: Bipartition) -> np.ndarray:
    n = len(dims)
    cut.validate(n)
    axes = list(cut.left) + [n + p for p in cut.left] + list(cut.right) + [n + p for p in cut.right]
    rows = int(np.prod([dims[p] for p in cut.left])) ** 2
    return _as_tensor(entries, dims).transpose(axes).reshape(rows, -1)


def matricize(U: MultipartiteOperator, cut: Bipartition) -> np.ndarray:
    """
    Realignment of U across `cut`.

    A row enumerates (row, col) pairs of the left factor as (i_S..., j_S...),
    so a left singular vector reshaped to (d_S, d_S) is an operator on the left
    parties; the same holds for columns and the right parties.
    """
    return matricize_entries(U.entries, U.dims, cut)


def numeric_rank(matrix: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        raise DegenerateInputError("rank of a zero matrix is undefined")
    return int(np.sum(s > tol * s[0]))


def operator_schmidt_rank(U: MultipartiteOperator, cut: Bipartition) -> int:
    return numeric_rank(matricize(U, cut), U.tol)


def cut_ranks(U: MultipartiteOperator) -> dict:
    return {cut: operator_schmidt_rank(U, cut) for cut in all_bipartitions(U.n)}


def corresponding_state(U: MultipartiteOperator) -> np.ndarray:
    """
    (U (x) I) sum_j |j>|j>, with each party followed by its ancilla.

    The local dimension of grouped party j is d_j**2.
    """
    n = U.n
    axes = [a for p in range(n) for a in (p, n + p)]
    return _as_tensor(U.entries, U.dims).transpose(axes).reshape(-1).copy()


def state_schmidt_rank(psi: np.ndarray, local_dims: Sequence[int], cut: Bipartition,
                       tol: float = Config.DEFAULT_TOL) -> int:
    local_dims = tuple(local_dims)
    cut.validate(len(local_dims))
    rows = int(np.prod([local_dims[p] for p in cut.left]))
    matrix = np.asarray(psi).reshape(local_dims).transpose(cut.left + cut.right).reshape(rows, -1)
    return numeric_rank(matrix, tol)


def diag3_isomorphic_state(U: MultipartiteOperator) -> np.ndarray:
    if U.dims != (2, 2, 2):
        raise DimensionError(f"expected a three-qubit operator, got dims {U.dims}")
    if not U.is_diagonal():
        raise NotDiagonalError("operator has off-diagonal entries above tolerance")
    return np.diag(U.entries).copy()


def permute_parties(U: MultipartiteOperator, perm: Sequence[int]) -> MultipartiteOperator:
    """New party i is old party perm[i]"""
    perm = tuple(perm)
    if sorted(perm) != list(range(U.n)):
        raise DimensionError(f"{perm} is not a permutation of {U.n} parties")
    dims = tuple(U.dims[p] for p in perm)
    axes = list(perm) + [U.n + p for p in perm]
    side = U.dim
    entries = _as_tensor(U.entries, U.dims).transpose(axes).reshape(side, side)
    return MultipartiteOperator(dims, entries, U.tol)


def line_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Distance between the complex lines through x and y (phase aligned)"""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    overlap = np.vdot(y, x)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(x - phase * y))
