"""
Unique Schmidt decomposition of genuine multipartite Schmidt-rank-two gates,
the singular number invariant and the resulting class label.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from typing import Optional, Sequence

import numpy as np

from config import Config
from utils.errors import (
    DegenerateInputError,
    DegenerateSpanError,
    DimensionError,
    InternalInvariantViolation,
    NonUniqueDecompositionError,
    NotGenuineError,
    NotSchmidtRankTwoError,
    NotUnitaryError,
)
from utils.tensor import (
    Bipartition,
    LocalOperator,
    MultipartiteOperator,
    cut_ranks,
    kron_matrices,
    local_operators,
    matricize,
    matricize_entries,
)

logger = logging.getLogger(__name__)


def gauge(matrix: np.ndarray, tol: float = Config.DEFAULT_TOL) -> tuple:
    """
    Split `matrix` into (coeff, normalized) with unit Frobenius norm and the
    first entry above tol * max|entry| real positive.
    """
    matrix = np.asarray(matrix, dtype=complex)
    norm = np.linalg.norm(matrix)
    if norm == 0:
        raise DegenerateInputError("cannot gauge a zero local factor")
    flat = matrix.ravel()
    magnitudes = np.abs(flat)
    first = int(np.argmax(magnitudes > tol * magnitudes.max()))
    phase = flat[first] / magnitudes[first]
    coeff = norm * phase
    return coeff, matrix / coeff


def factor_product(entries: np.ndarray, dims: Sequence[int]) -> tuple:
    """
    Best full product approximation by peeling one party at a time.

    Returns:
        (scale, factors, residual) with factors gauged and residual the
        relative Frobenius error of scale * kron(factors)
    """
    entries = np.asarray(entries, dtype=complex)
    dims = tuple(dims)
    factors = []
    scale = 1.0 + 0j
    remainder, rest = entries, dims
    while len(rest) > 1:
        M = matricize_entries(remainder, rest, Bipartition.of((0,), len(rest)))
        u, s, vh = np.linalg.svd(M, full_matrices=False)
        coeff, factor = gauge(u[:, 0].reshape(rest[0], rest[0]))
        factors.append(factor)
        scale *= coeff * s[0]
        side = int(np.prod(rest[1:]))
        remainder, rest = vh[0].reshape(side, side), rest[1:]
    coeff, factor = gauge(remainder)
    factors.append(factor)
    scale *= coeff

    approx = scale * kron_matrices(*factors)
    residual = np.linalg.norm(approx - entries) / np.linalg.norm(entries)
    return scale, factors, float(residual)


def _compare_terms(x: tuple, y: tuple) -> int:
    (scale_x, factors_x), (scale_y, factors_y) = x, y
    size = max(abs(scale_x), abs(scale_y))
    if abs(abs(scale_x) - abs(scale_y)) > Config.DEFAULT_TOL * size:
        return -1 if abs(scale_x) > abs(scale_y) else 1

    top_x = np.linalg.svd(factors_x[0], compute_uv=False)[0]
    top_y = np.linalg.svd(factors_y[0], compute_uv=False)[0]
    if abs(top_x - top_y) > Config.DEFAULT_TOL:
        return -1 if top_x > top_y else 1

    key_x = [v for f in factors_x for z in f.ravel() for v in (float(round(z.real, 9)), float(round(z.imag, 9)))]
    key_y = [v for f in factors_y for z in f.ravel() for v in (float(round(z.real, 9)), float(round(z.imag, 9)))]
    return (key_x > key_y) - (key_x < key_y)


@dataclass(frozen=True, eq=False)
class SchmidtDecompositionSR2:
    """U = scaleA * (x)A_j + scaleB * (x)B_j with every factor gauged"""
    termA: tuple
    termB: tuple
    scaleA: complex
    scaleB: complex
    tol: float = Config.DEFAULT_TOL

    @classmethod
    def from_terms(cls, termA, termB, scaleA: complex = 1.0, scaleB: complex = 1.0,
                   tol: float = Config.DEFAULT_TOL) -> 'SchmidtDecompositionSR2':
        """Gauge raw per-party matrices and put the terms in canonical order"""
        if len(termA) != len(termB):
            raise DimensionError("both terms need one factor per party")
        terms = []
        for scale, matrices in ((scaleA, termA), (scaleB, termB)):
            scale = complex(scale)
            gauged = []
            for m in matrices:
                coeff, factor = gauge(m, tol)
                scale *= coeff
                gauged.append(factor)
            terms.append((scale, gauged))
        (sA, fA), (sB, fB) = sorted(terms, key=cmp_to_key(_compare_terms))
        return cls(tuple(local_operators(fA)), tuple(local_operators(fB)), sA, sB, tol)

    @property
    def n(self) -> int:
        return len(self.termA)

    @property
    def dims(self) -> tuple:
        return tuple(op.dim for op in self.termA)

    def factors(self) -> tuple:
        return self.termA + self.termB

    def reconstruct(self) -> np.ndarray:
        return (self.scaleA * kron_matrices(*(op.entries for op in self.termA))
                + self.scaleB * kron_matrices(*(op.entries for op in self.termB)))

    def product_terms(self) -> tuple:
        """The two product operators (x)A_j and (x)B_j without scales"""
        return (kron_matrices(*(op.entries for op in self.termA)),
                kron_matrices(*(op.entries for op in self.termB)))

    def permuted(self, perm: Sequence[int]) -> 'SchmidtDecompositionSR2':
        """New party i carries the factors of old party perm[i]"""
        return SchmidtDecompositionSR2.from_terms(
            [self.termA[p].entries for p in perm],
            [self.termB[p].entries for p in perm],
            self.scaleA, self.scaleB, self.tol,
        )

    def conjugated(self, left: Sequence[np.ndarray], right: Sequence[np.ndarray]) -> 'SchmidtDecompositionSR2':
        """Decomposition of V U W for V = (x)left_j and W = (x)right_j"""
        return SchmidtDecompositionSR2.from_terms(
            [v @ op.entries @ w for v, op, w in zip(left, self.termA, right)],
            [v @ op.entries @ w for v, op, w in zip(left, self.termB, right)],
            self.scaleA, self.scaleB, self.tol,
        )


@dataclass(frozen=True, eq=False)
class SpanProducts:
    """
    Product operators found in span{X, Y}.

    ratios[i] is (alpha, beta) with the first nonzero component equal to 1;
    continuum means every member of the span is a full product; bipartite flags
    two-party inputs, whose two-term decompositions are never unique.
    """
    ratios: list
    scales: list
    factors: list
    continuum: bool
    bipartite: bool


def _normalize_ratio(alpha: complex, beta: complex) -> tuple:
    v = np.array([alpha, beta], dtype=complex)
    v = v / np.linalg.norm(v)
    pivot = v[0] if abs(v[0]) > 1e-12 else v[1]
    v = v / pivot
    if abs(v[0]) <= 1e-12:
        return (0j, 1 + 0j)
    return (complex(v[0]), complex(v[1]))


def _same_ratio(r: tuple, s: tuple) -> bool:
    cross = abs(r[0] * s[1] - r[1] * s[0])
    return cross <= Config.ROOT_MATCH_TOL * np.linalg.norm(r) * np.linalg.norm(s)


def _compress(A: np.ndarray, B: np.ndarray) -> tuple:
    """Restrict A, B to the joint row and column spaces; ranks of aA + bB are kept"""
    _, s, vh = np.linalg.svd(np.vstack([A, B]), full_matrices=False)
    V = vh[s > 1e-13 * s[0]].conj().T
    A, B = A @ V, B @ V
    u, s, _ = np.linalg.svd(np.hstack([A, B]), full_matrices=False)
    W = u[:, s > 1e-13 * s[0]].conj().T
    return W @ A, W @ B


def _minor_coefficients(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """
    Coefficients (p, q, r) of every 2x2 minor of aA + bB written as
    p a^2 + q ab + r b^2.
    """
    I, J = np.triu_indices(A.shape[0], 1)
    K, L = np.triu_indices(A.shape[1], 1)
    Ai, Aj, Bi, Bj = A[I], A[J], B[I], B[J]
    p = Ai[:, K] * Aj[:, L] - Ai[:, L] * Aj[:, K]
    r = Bi[:, K] * Bj[:, L] - Bi[:, L] * Bj[:, K]
    q = (Ai[:, K] * Bj[:, L] + Bi[:, K] * Aj[:, L]
         - Ai[:, L] * Bj[:, K] - Bi[:, L] * Aj[:, K])
    return np.column_stack([p.ravel(), q.ravel(), r.ravel()])


def _binary_quadratic_roots(coeffs: np.ndarray) -> list:
    """Projective roots (a, b) of p a^2 + q ab + r b^2"""
    p, q, r = coeffs
    tiny = 1e-12 * np.linalg.norm(coeffs)
    if max(abs(p), abs(r)) <= tiny:
        return [(1 + 0j, 0j), (0j, 1 + 0j)]
    if abs(r) >= abs(p):
        return [(1 + 0j, complex(t)) for t in np.roots([r, q, p])]
    return [(complex(s), 1 + 0j) for s in np.roots([p, q, r])]


def _is_rank_one(matrix: np.ndarray) -> bool:
    s = np.linalg.svd(matrix, compute_uv=False)
    return s.size < 2 or s[1] <= Config.ROOT_MATCH_TOL * s[0]


def _span_search(x: np.ndarray, y: np.ndarray, dims: tuple) -> tuple:
    """
    Candidate ratios for full products in span{x, y}, by rank one across
    {first}|{rest}. Returns (ratios, continuum).
    """
    if len(dims) == 1:
        return [], True

    cut = Bipartition.of((0,), len(dims))
    A_full = matricize_entries(x, dims, cut)
    B_full = matricize_entries(y, dims, cut)
    A, B = _compress(A_full, B_full)

    coeffs = None if min(A.shape) < 2 else _minor_coefficients(A, B)
    scale = max(np.linalg.norm(A), np.linalg.norm(B)) ** 2
    if coeffs is not None:
        _, s, vh = np.linalg.svd(coeffs, full_matrices=False)
        if s[0] > 1e-10 * scale:
            candidates = _binary_quadratic_roots(vh[0])
            logger.debug("span candidates %s", candidates)
            return [c for c in candidates if _is_rank_one(c[0] * A + c[1] * B)], False

    # every member is rank one across the first cut
    ux, _, vxh = np.linalg.svd(A_full, full_matrices=False)
    uy, _, vyh = np.linalg.svd(B_full, full_matrices=False)
    if abs(np.vdot(ux[:, 0], uy[:, 0])) >= 1 - 1e-9:
        head = ux[:, 0].conj()
        side = int(np.prod(dims[1:]))
        return _span_search((head @ A_full).reshape(side, side),
                            (head @ B_full).reshape(side, side), dims[1:])
    side = int(np.prod(dims[1:]))
    _, _, residual = factor_product(vxh[0].reshape(side, side), dims[1:])
    return [], residual <= Config.FACTOR_RESIDUAL_TOL


def _verified_products(x: np.ndarray, y: np.ndarray, dims: tuple, ratios: list) -> list:
    found = []
    for alpha, beta in ratios:
        ratio = _normalize_ratio(alpha, beta)
        if any(_same_ratio(ratio, r) for r, _, _ in found):
            continue
        scale, factors, residual = factor_product(ratio[0] * x + ratio[1] * y, dims)
        if residual <= Config.FACTOR_RESIDUAL_TOL:
            found.append((ratio, scale, factors))
        else:
            logger.debug("rejected ratio %s with factorization residual %.3e", ratio, residual)
    return found


def product_operators_in_span(X: MultipartiteOperator, Y: MultipartiteOperator) -> SpanProducts:
    if X.dims != Y.dims:
        raise DimensionError(f"span members have dims {X.dims} and {Y.dims}")
    pair = np.column_stack([X.entries.ravel(), Y.entries.ravel()])
    s = np.linalg.svd(pair, compute_uv=False)
    if s[1] <= X.tol * s[0]:
        raise DegenerateSpanError("X and Y are proportional")

    ratios, continuum = _span_search(X.entries, Y.entries, X.dims)
    found = [] if continuum else _verified_products(X.entries, Y.entries, X.dims, ratios)
    return SpanProducts(
        ratios=[r for r, _, _ in found],
        scales=[scale for _, scale, _ in found],
        factors=[local_operators(f) for _, _, f in found],
        continuum=continuum,
        bipartite=X.n == 2,
    )


def schmidt_decomposition_sr2(U: MultipartiteOperator) -> SchmidtDecompositionSR2:
    if U.n < 3:
        raise NonUniqueDecompositionError("two-party Schmidt decompositions are not unique")

    ranks = cut_ranks(U)
    top = max(ranks.values())
    if top != 2:
        raise NotSchmidtRankTwoError(f"largest cut rank is {top}")
    if min(ranks.values()) < 2:
        cut = min(ranks, key=ranks.get)
        raise NotGenuineError(f"gate is a product across {cut}")

    d0, rest = U.dims[0], U.dims[1:]
    side = int(np.prod(rest))
    u, s, vh = np.linalg.svd(matricize(U, Bipartition.of((0,), U.n)), full_matrices=False)
    heads = [s[k] * u[:, k].reshape(d0, d0) for k in range(2)]
    P, Q = (vh[k].reshape(side, side) for k in range(2))

    ratios, continuum = _span_search(P, Q, rest)
    if continuum:
        raise NotGenuineError("every operator in the tail span is a product")
    products = _verified_products(P, Q, rest, ratios)
    if len(products) != 2:
        raise NotSchmidtRankTwoError(
            f"tail span holds {len(products)} product directions; no two-term expansion exists"
        )

    R = np.array([ratio for ratio, _, _ in products])
    Rinv = np.linalg.inv(R)
    terms = []
    for i, (_, scale, factors) in enumerate(products):
        head = Rinv[0, i] * heads[0] + Rinv[1, i] * heads[1]
        terms.append((scale, [head] + list(factors)))

    dec = SchmidtDecompositionSR2.from_terms(terms[0][1], terms[1][1], terms[0][0], terms[1][0], U.tol)
    residual = np.linalg.norm(dec.reconstruct() - U.entries) / np.linalg.norm(U.entries)
    if residual > Config.FACTOR_RESIDUAL_TOL:
        raise InternalInvariantViolation(f"decomposition reconstructs U only to {residual:.3e}")
    return dec


def singular_number(dec: SchmidtDecompositionSR2) -> int:
    return sum(op.is_singular(dec.tol) for op in dec.factors())


def allowed_singular_numbers(n: int) -> set:
    return {0, 1, 2, n - 1, n}


def _require_unitary(U: MultipartiteOperator):
    if not U.is_unitary():
        raise NotUnitaryError(f"||U^dag U - I||_F = {U.unitarity_residual():.3e}")


def is_genuine(U: MultipartiteOperator) -> bool:
    _require_unitary(U)
    if U.n < 2:
        return False
    return min(cut_ranks(U).values()) >= 2


@dataclass(frozen=True, eq=False)
class ClassLabel:
    n: int
    dims: tuple
    genuine: bool
    schmidt_rank_overall: int
    singular_number: Optional[int]
    cut_ranks: dict = field(default_factory=dict)
    decomposition: Optional[SchmidtDecompositionSR2] = field(default=None, repr=False)


def classify(U: MultipartiteOperator) -> ClassLabel:
    _require_unitary(U)
    if U.n == 1:
        return ClassLabel(1, U.dims, False, 1, None)

    ranks = cut_ranks(U)
    genuine = min(ranks.values()) >= 2
    overall = max(ranks.values())
    k, dec = None, None
    if genuine and U.n >= 3 and overall == 2:
        try:
            dec = schmidt_decomposition_sr2(U)
            k = singular_number(dec)
        except NotSchmidtRankTwoError:
            overall = 3
        if k is not None and k not in allowed_singular_numbers(U.n):
            raise InternalInvariantViolation(f"singular number {k} impossible for {U.n} parties")

    return ClassLabel(U.n, U.dims, genuine, overall, k, ranks, dec)


def format_report(label: ClassLabel) -> str:
    cuts = ' '.join(f'{cut}={rank}' for cut, rank in label.cut_ranks.items())
    k = 'n/a' if label.singular_number is None else str(label.singular_number)
    return '\n'.join([
        f'genuine: {str(label.genuine).lower()}',
        f'sr_per_cut: {cuts}',
        f'sr_overall: {label.schmidt_rank_overall}',
        f'singular_number: {k}',
    ])


class SpanDichotomy(Enum):
    ONLY_TRIVIAL = 'only-trivial'
    RICHER = 'richer'


def span_unitary_dichotomy(d: Sequence[complex], tol: float = Config.PHASE_EQ_TOL) -> SpanDichotomy:
    """
    Whether span{I, diag(1, d_1, .., d_{N-1})} holds diagonal unitaries beyond
    the multiples of its two generators.
    """
    d = np.asarray(d, dtype=complex)
    nontrivial = d[np.abs(d - 1) > tol]
    if nontrivial.size == 0:
        raise DegenerateInputError("diag(1, d) is the identity")
    if np.any(np.abs(nontrivial - nontrivial[0]) > tol):
        return SpanDichotomy.ONLY_TRIVIAL
    return SpanDichotomy.RICHER


def unitary_span_member(d: Sequence[complex], psi: float) -> tuple:
    """
    Coefficients (x, y) with x I + y diag(1, d) unitary, both nonzero, and
    eigenvalue e^{i psi} on the nontrivial entries of d.
    """
    if span_unitary_dichotomy(d) is SpanDichotomy.ONLY_TRIVIAL:
        raise DegenerateInputError("span holds only multiples of I and U")
    d = np.asarray(d, dtype=complex)
    w = d[np.abs(d - 1) > Config.PHASE_EQ_TOL][0]
    target = np.exp(1j * psi)
    if abs(target - 1) <= Config.PHASE_EQ_TOL or abs(target - w) <= Config.PHASE_EQ_TOL:
        raise DegenerateInputError("psi gives a trivial member of the span")
    y = (target - 1) / (w - 1)
    return complex(1 - y), complex(y)


def control_slices(U: MultipartiteOperator) -> tuple:
    """
    (G, H) with U = |0><0| (x) G + |1><1| (x) H for a gate controlled on party 1.
    """
    if U.dims[0] != 2 or U.n < 2:
        raise DimensionError("control slices need a qubit first party and at least two parties")
    half = U.dim // 2
    off = max(np.abs(U.entries[:half, half:]).max(), np.abs(U.entries[half:, :half]).max())
    if off > U.tol * np.abs(U.entries).max():
        raise DegenerateInputError("gate is not block diagonal in the first party")
    dims = U.dims[1:]
    return (MultipartiteOperator(dims, U.entries[:half, :half], U.tol),
            MultipartiteOperator(dims, U.entries[half:, half:], U.tol))


def slice_schmidt_ranks(U: MultipartiteOperator) -> tuple:
    return tuple(max(cut_ranks(G).values()) for G in control_slices(U))


def span_projection_residual(H: MultipartiteOperator, dec: SchmidtDecompositionSR2) -> float:
    """Relative distance of H from span of the decomposition's two product terms"""
    basis = np.column_stack([t.ravel() for t in dec.product_terms()])
    target = H.entries.ravel()
    coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
    return float(np.linalg.norm(basis @ coeffs - target) / np.linalg.norm(target))
