"""
Canonical parametric families of genuine Schmidt-rank-two qubit gates,
one per singular number, together with the auxiliary forms used to build
them: the k=1 parametric solutions, the k=0 three-qubit modulus system and
its solver, and the phase product identity.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from config import Config
from utils.constants import I2, PAULIS, PROJ0, PROJ1, SIGMA3
from utils.diag3 import canonicalize
from utils.errors import (
    DegenerateInputError,
    InternalInvariantViolation,
    NotOnVarietyError,
    ParamDomainError,
    SolverDivergedError,
)
from utils.schmidt import SchmidtDecompositionSR2, singular_number
from utils.tensor import MultipartiteOperator, kron_matrices, permute_parties

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi

# Smallest distance to an excluded point accepted by the generators
_EDGE = 1e-9


class FamilyId(Enum):
    T3_K3 = 't3-k3'
    T3_K2_A = 't3-k2a'
    T3_K2_B = 't3-k2b'
    T3_K1_A = 't3-k1a'
    T3_K1_B = 't3-k1b'
    T3_K0 = 't3-k0'
    N_KN = 'n-kn'
    N_KNM1 = 'n-kn1'
    N_K2 = 'n-k2'
    N_K1 = 'n-k1'
    N_K0 = 'n-k0'
    L5_EQ8 = 'l5-eq8'
    L5_EQ9 = 'l5-eq9'

    @classmethod
    def from_cli(cls, name: str) -> 'FamilyId':
        for fid in cls:
            if fid.value == name:
                return fid
        raise ParamDomainError(f"unknown family {name!r}")

    @property
    def three_qubit(self) -> bool:
        return not self.name.startswith('N_')


class K1Case(Enum):
    I = 'I'
    II = 'II'


# Singular number of each family as a function of n; L5_EQ9 depends on its angles
TABLE_K = {
    FamilyId.T3_K3: lambda n: 3,
    FamilyId.T3_K2_A: lambda n: 2,
    FamilyId.T3_K2_B: lambda n: 2,
    FamilyId.T3_K1_A: lambda n: 1,
    FamilyId.T3_K1_B: lambda n: 1,
    FamilyId.T3_K0: lambda n: 0,
    FamilyId.N_KN: lambda n: n,
    FamilyId.N_KNM1: lambda n: n - 1,
    FamilyId.N_K2: lambda n: 2,
    FamilyId.N_K1: lambda n: 1,
    FamilyId.N_K0: lambda n: 0,
    FamilyId.L5_EQ8: lambda n: 2,
}


def param_names(family_id: FamilyId, n: int) -> tuple:
    if family_id is FamilyId.N_K2:
        return tuple(f'beta{j}' for j in range(2, n + 1))
    return {
        FamilyId.T3_K3: ('phi',),
        FamilyId.T3_K2_A: ('theta', 'phi'),
        FamilyId.T3_K2_B: ('gamma', 'delta'),
        FamilyId.T3_K1_A: ('c', 'alpha'),
        FamilyId.T3_K1_B: ('c', 'alpha', 'gamma'),
        FamilyId.T3_K0: ('a', 'b', 'c', 'd'),
        FamilyId.N_KN: ('theta',),
        FamilyId.N_KNM1: ('theta', 'phi'),
        FamilyId.N_K1: ('alpha',),
        FamilyId.N_K0: ('alpha', 'beta'),
        FamilyId.L5_EQ8: ('alpha', 'beta'),
        FamilyId.L5_EQ9: ('alpha', 'beta'),
    }[family_id]


@dataclass(frozen=True, eq=False)
class FamilySpec:
    family_id: FamilyId
    n: int
    params: dict = field(default_factory=dict)
    permute: Optional[tuple] = None

    def __post_init__(self):
        if self.family_id.three_qubit and self.n != 3:
            raise ParamDomainError(f"{self.family_id.value} is a three-qubit family, got n={self.n}")
        if not self.family_id.three_qubit and self.n < 4:
            raise ParamDomainError(f"{self.family_id.value} needs n >= 4, got n={self.n}")
        expected = set(param_names(self.family_id, self.n))
        given = set(self.params)
        if expected != given:
            missing = ', '.join(sorted(expected - given)) or '-'
            unknown = ', '.join(sorted(given - expected)) or '-'
            raise ParamDomainError(
                f"{self.family_id.value} parameters: missing [{missing}], unknown [{unknown}]"
            )
        if self.permute is not None and sorted(self.permute) != list(range(self.n)):
            raise ParamDomainError(f"{self.permute} is not a permutation of {self.n} parties")


@dataclass(frozen=True, eq=False)
class GeneratedGate:
    spec: FamilySpec
    operator: MultipartiteOperator
    declared: Optional[SchmidtDecompositionSR2]
    k: Optional[int]


# -- angle helpers ---------------------------------------------------------

def _wrap(x: float) -> float:
    """Representative of x in [-pi, pi)"""
    return (x + np.pi) % TWO_PI - np.pi


def _circle_gap(x: float, y: float) -> float:
    return abs(_wrap(x - y))


def _mod_pi_gap(x: float, y: float) -> float:
    return abs(_wrap(2 * (x - y))) / 2


def _require(ok: bool, message: str):
    if not ok:
        raise ParamDomainError(message)


def _require_open_angle(name: str, x: float, margin: float, hi: float = TWO_PI):
    _require(margin < x < hi - margin, f"{name}={x} must lie in (0, {hi:.6g}) away from the ends")


def _require_real(params: dict, names) -> dict:
    out = {}
    for name in names:
        value = params[name]
        if isinstance(value, complex):
            _require(value.imag == 0, f"{name} must be real, got {value}")
            value = value.real
        out[name] = float(value)
    return out


# -- k = 1 parametric solutions ------------------------------------------

def k1_theta(c: float, alpha: float, gamma: float) -> float:
    """Case II angle theta in (-pi, pi]"""
    num = c * np.sin((alpha + gamma) / 2) - np.sin((alpha - gamma) / 2)
    den = c * np.cos((alpha + gamma) / 2) - np.cos((alpha - gamma) / 2)
    return float(np.angle(np.exp(2j * np.arctan2(num, den))))


def _check_k1(c: float, case: K1Case, alpha: float, gamma: Optional[float], margin: float):
    _require(c > 0, f"c must be positive, got {c}")
    _require(abs(c - 1) > margin, "c = 1 admits no solution")
    if case is K1Case.I:
        _require_open_angle('alpha', alpha, margin)
        _require(_circle_gap(alpha, np.pi) > margin, "alpha = pi makes f = g")
        _require(abs(c * np.cos(alpha) - 1) > margin, "c cos(alpha) = 1 makes h = 1")
        return
    _require(gamma is not None, "case II needs gamma")
    _require(0 <= alpha < TWO_PI and 0 <= gamma < TWO_PI, "alpha and gamma must lie in [0, 2pi)")
    den = c * np.cos((alpha + gamma) / 2) - np.cos((alpha - gamma) / 2)
    _require(abs(den) > margin, "c cos((alpha+gamma)/2) = cos((alpha-gamma)/2)")
    theta = k1_theta(c, alpha, gamma)
    _require(_circle_gap(alpha, gamma) > margin, "alpha = gamma makes h = 1")
    for excluded in ((np.pi + theta) / 2, (3 * np.pi + theta) / 2):
        _require(_circle_gap(alpha, excluded) > margin, f"alpha = {excluded:.6g} makes f = g")


def k1_parametric_solution(c: float, case, alpha: float, gamma: float = None,
                           margin: float = _EDGE, validate: bool = True) -> tuple:
    """
    Nonzero (f, g, h) with |f+c| = |g+c| = |fh+c| = |gh+c| = 1, f != g, h != 1.

    Args:
        c: Positive real, c != 1
        case: K1Case.I (g = conj(f)) or K1Case.II (free gamma)
        alpha: Angle of f + c
        gamma: Angle of fh + c, case II only
        margin: Minimum distance kept from excluded parameter values

    Returns:
        Tuple (f, g, h) of complex numbers
    """
    case = K1Case(case) if not isinstance(case, K1Case) else case
    if validate:
        _check_k1(c, case, alpha, gamma, margin)

    f = np.exp(1j * alpha) - c
    if case is K1Case.I:
        g = np.conj(f)
        h = (c ** 2 - 1) / (1 + c ** 2 - 2 * c * np.cos(alpha)) + 0j
    else:
        theta = k1_theta(c, alpha, gamma)
        g = -np.exp(1j * (theta - alpha)) - c
        h = (np.exp(1j * gamma) - c) / (np.exp(1j * alpha) - c)

    if validate:
        moduli = np.abs([f + c, g + c, f * h + c, g * h + c])
        if np.max(np.abs(moduli - 1)) > Config.K1_MODULUS_TOL:
            raise InternalInvariantViolation(f"k=1 solution moduli {moduli} are not all 1")
    return complex(f), complex(g), complex(h)


# -- k = 0 three-qubit system ---------------------------------------------

@dataclass(frozen=True)
class K0SystemPoint:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            value = complex(getattr(self, name))
            object.__setattr__(self, name, value)
            _require(abs(value) > 1e-12 and abs(value - 1) > 1e-12, f"{name} must avoid 0 and 1")
        _require(abs(self.a - self.b) > 1e-12, "a must differ from b")

    @classmethod
    def from_real(cls, x) -> 'K0SystemPoint':
        x = np.asarray(x, dtype=float)
        return cls(*(complex(x[2 * i], x[2 * i + 1]) for i in range(4)))

    def to_real(self) -> np.ndarray:
        return np.array([v for z in (self.a, self.b, self.c, self.d) for v in (z.real, z.imag)])

    def as_params(self) -> dict:
        return {'a': self.a, 'b': self.b, 'c': self.c, 'd': self.d}


# Solution of the system that reproduces the diag(-1,1,1,1,1,1,1,-1) gate
K0_REFERENCE = K0SystemPoint((1 - 1j) / 2, (1 + 1j) / 2, -1j, -1j)


def _k0_sides(a, b, c, d) -> tuple:
    """Moduli of both sides of the four equations"""
    lhs = np.array([
        abs((1 - a) * (1 - d) + d * (1 - b)),
        abs((1 - a) * (1 - c) + c * (1 - b)),
        abs((1 - a) * (1 - b * c) * (1 - b * d) + a * c * d * (1 - b) ** 2),
        abs((1 - b * c) * (1 - b * d) + b * c * d * (1 - b)),
    ])
    rhs = np.array([abs(1 - b), abs(1 - b), abs(1 - b) ** 2, abs(1 - b)])
    return lhs, rhs


def k0_residual(p: K0SystemPoint) -> float:
    lhs, rhs = _k0_sides(p.a, p.b, p.c, p.d)
    return float(np.max(np.abs(lhs - rhs)))


def _k0_squared_residuals(x: np.ndarray) -> np.ndarray:
    a, b, c, d = (complex(x[2 * i], x[2 * i + 1]) for i in range(4))
    lhs, rhs = _k0_sides(a, b, c, d)
    return lhs ** 2 - rhs ** 2


def k0_solve(seed: K0SystemPoint, max_iter: int = Config.K0_MAX_ITER) -> K0SystemPoint:
    """
    Damped least squares on the four squared-modulus equations in the eight
    real coordinates of (a, b, c, d), started at `seed`.
    """
    with np.errstate(all='ignore'):
        try:
            result = least_squares(_k0_squared_residuals, seed.to_real(), method='trf',
                                   max_nfev=max_iter, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        except ValueError as e:
            raise SolverDivergedError(f"least squares failed: {e}")
    if not np.all(np.isfinite(result.x)):
        raise SolverDivergedError("iterate left the finite range")

    try:
        point = K0SystemPoint.from_real(result.x)
    except ParamDomainError as e:
        raise SolverDivergedError(f"converged to an excluded point: {e}")
    residual = k0_residual(point)
    logger.debug("k0 solve: %d evaluations, residual %.3e", result.nfev, residual)
    if residual > Config.K0_RESIDUAL_TOL:
        raise SolverDivergedError(f"residual {residual:.3e} after {result.nfev} evaluations")

    try:
        generate(FamilySpec(FamilyId.T3_K0, 3, point.as_params()))
    except (ParamDomainError, InternalInvariantViolation) as e:
        raise SolverDivergedError(f"solution does not yield a valid gate: {e}")
    return point


def k0_seed_points(count: int, spread: float, rng: np.random.Generator,
                   center: K0SystemPoint = K0_REFERENCE) -> list:
    """Random complex perturbations of `center`, skipping excluded seeds"""
    seeds = []
    while len(seeds) < count:
        x = center.to_real() + spread * rng.standard_normal(8)
        try:
            seeds.append(K0SystemPoint.from_real(x))
        except ParamDomainError:
            continue
    return seeds


def k0_point_from_gate(U: MultipartiteOperator) -> K0SystemPoint:
    """
    Parameters (a, b, c, d) whose T3_K0 member is the canonical form
    diag(1, ea, eb, eg, 1, 1, 1, ed) of the three-qubit diagonal gate `U`.

    With x, y, w, z = ea-1, eb-1, eg-1, ed-1 and kappa = (b-a)/(1-b) the
    family matrix satisfies x = kappa(1-d), y = kappa(1-c) and
    z = b(1-c)(1-d)/(1-b), so kappa solves
    r1 kappa^2 + (r1 - r2) kappa - 1 = 0 with r1 = z/xy, r2 = (w-x-y)/xy.
    Both roots are tried; the first admissible point is returned.
    """
    ea, eb, eg, ed = (complex(z) for z in canonicalize(U).phasors())
    x, y, w, z = ea - 1, eb - 1, eg - 1, ed - 1
    if min(abs(x), abs(y), abs(z)) <= Config.PHASE_EQ_TOL:
        raise ParamDomainError("canonical form has a trivial phase; no k=0 parameters exist")

    r1, r2 = z / (x * y), (w - x - y) / (x * y)
    root = np.sqrt(complex((r1 - r2) ** 2 + 4 * r1))
    reason = "both roots are excluded points"
    for kappa in ((r2 - r1 + root) / (2 * r1), (r2 - r1 - root) / (2 * r1)):
        s = r1 * kappa ** 2
        if abs(kappa) <= Config.PHASE_EQ_TOL or abs(1 + s) <= Config.PHASE_EQ_TOL:
            continue
        b = s / (1 + s)
        try:
            point = K0SystemPoint(b - kappa * (1 - b), b, 1 - y / kappa, 1 - x / kappa)
            validate_params(FamilyId.T3_K0, 3, point.as_params())
        except ParamDomainError as e:
            reason = str(e)
            continue
        residual = k0_residual(point)
        logger.debug("k0 point from gate: kappa=%s residual %.3e", kappa, residual)
        if residual <= Config.K0_RESIDUAL_TOL:
            return point
        reason = f"residual {residual:.3e}"
    raise ParamDomainError(f"gate has no admissible k=0 parameters: {reason}")


# -- phase product identity -------------------------------------------------

def phase_product_residual(alpha, beta, gamma, delta):
    """|(e^{ia}-1)(e^{id}-1) - (e^{ib}-1)(e^{ig}-1)|, broadcasting over arrays"""
    e = lambda x: np.exp(1j * np.asarray(x)) - 1
    return np.abs(e(alpha) * e(delta) - e(beta) * e(gamma))


def phase_product_equation_holds(alpha: float, beta: float, gamma: float, delta: float) -> bool:
    for name, x in zip(('alpha', 'beta', 'gamma', 'delta'), (alpha, beta, gamma, delta)):
        _require(0 < x < TWO_PI, f"{name}={x} must lie in (0, 2pi)")
    return bool(phase_product_residual(alpha, beta, gamma, delta) <= Config.PHASE_EQ_TOL)


# -- parameter domains -------------------------------------------------------

def validate_params(family_id: FamilyId, n: int, params: dict, margin: float = 0.0):
    """Raise ParamDomainError unless `params` lie `margin` inside the family's domain"""
    margin = max(margin, _EDGE)
    fid = family_id

    if fid is FamilyId.T3_K0:
        point = K0SystemPoint(**{k: complex(v) for k, v in params.items()})
        for name, z in (('a', point.a), ('b', point.b), ('c', point.c), ('d', point.d)):
            _require(abs(z) > margin and abs(z - 1) > margin, f"{name} too close to 0 or 1")
        _require(abs(point.a - point.b) > margin, "a too close to b")
        _require(abs(1 - point.b * point.c) > margin, "bc = 1 makes a local factor vanish")
        _require(abs(1 - point.b * point.d) > margin, "bd = 1 makes a local factor vanish")
        return

    p = _require_real(params, param_names(fid, n))
    if fid in (FamilyId.T3_K3, FamilyId.N_KN):
        _require_open_angle('theta' if 'theta' in p else 'phi', p.get('theta', p.get('phi')), margin)
    elif fid in (FamilyId.T3_K2_A, FamilyId.N_KNM1):
        _require_open_angle('theta', p['theta'], margin)
        _require_open_angle('phi', p['phi'], margin)
        _require(_circle_gap(p['theta'], p['phi']) > margin, "theta = phi gives a non-genuine gate")
    elif fid is FamilyId.T3_K2_B:
        _require_open_angle('gamma', p['gamma'], margin)
        _require_open_angle('delta', p['delta'], margin)
    elif fid is FamilyId.T3_K1_A:
        _check_k1(p['c'], K1Case.I, p['alpha'], None, margin)
    elif fid is FamilyId.T3_K1_B:
        _check_k1(p['c'], K1Case.II, p['alpha'], p['gamma'], margin)
    elif fid is FamilyId.N_K2:
        for name, value in p.items():
            _require_open_angle(name, value, margin)
    elif fid is FamilyId.N_K1:
        _require_open_angle('alpha', p['alpha'], margin, hi=np.pi)
        _require(abs(p['alpha'] - np.pi / 2) > margin, "alpha = pi/2 removes the first term")
    elif fid is FamilyId.N_K0:
        for name in ('alpha', 'beta'):
            _require(_mod_pi_gap(2 * p[name], 0) > 2 * margin, f"{name} must avoid multiples of pi/2")
        _require(_mod_pi_gap(p['alpha'], p['beta']) > margin, "alpha = beta mod pi gives a non-genuine gate")
    elif fid is FamilyId.L5_EQ8:
        for name in ('alpha', 'beta'):
            _require(_mod_pi_gap(p[name], 0) > margin, f"{name} must avoid multiples of pi")
    elif fid is FamilyId.L5_EQ9:
        _require(_mod_pi_gap(p['alpha'], p['beta']) > margin, "alpha = beta mod pi gives a non-genuine gate")


# -- builders ---------------------------------------------------------------

def _diag(*entries) -> np.ndarray:
    return np.diag(np.array(entries, dtype=complex))


def _rotation(x: float, pauli: np.ndarray = SIGMA3) -> np.ndarray:
    return np.cos(x) * I2 + 1j * np.sin(x) * pauli


def _build_terms(fid: FamilyId, n: int, p: dict, validate: bool) -> tuple:
    """(termA, termB, scaleA, scaleB) as lists of 2x2 matrices"""
    e = lambda x: np.exp(1j * x)
    rest = n - 1
    if fid is FamilyId.T3_K3 or fid is FamilyId.N_KN:
        angle = p.get('phi', p.get('theta'))
        return [I2] * n, [PROJ0] * n, 1, e(angle) - 1
    if fid is FamilyId.T3_K2_A or fid is FamilyId.N_KNM1:
        last = _diag(e(p['theta']) - 1, e(p['phi']) - 1)
        controls = [PROJ1] * rest if fid is FamilyId.T3_K2_A else [PROJ0] * rest
        return [I2] * n, controls + [last], 1, 1
    if fid is FamilyId.T3_K2_B:
        return [PROJ0, I2, I2], [PROJ1, _diag(1, e(p['gamma'])), _diag(1, e(p['delta']))], 1, 1
    if fid in (FamilyId.T3_K1_A, FamilyId.T3_K1_B):
        case = K1Case.I if fid is FamilyId.T3_K1_A else K1Case.II
        f, g, h = k1_parametric_solution(p['c'], case, p['alpha'], p.get('gamma'), validate=validate)
        return [PROJ0, _diag(f, g), _diag(1, h)], [_diag(p['c'], 1), I2, I2], 1, 1
    if fid is FamilyId.T3_K0:
        a, b, c, d = (complex(p[k]) for k in ('a', 'b', 'c', 'd'))
        with np.errstate(all='ignore'):
            g = np.complex128(1 - b * c) / np.complex128(1 - b)
            h = np.complex128(1 - b * d) / np.complex128(1 - b)
        return ([_diag(a, b), _diag(1, c), _diag(1, d)],
                [_diag(1 - a, 1 - b), _diag(1, g), _diag(1, h)], 1, 1)
    if fid is FamilyId.N_K2:
        phases = [_diag(1, e(p[f'beta{j}'])) for j in range(2, n + 1)]
        return [PROJ0] + [I2] * rest, [PROJ1] + phases, 1, 1
    if fid is FamilyId.N_K1:
        alpha = p['alpha']
        return [PROJ0] + [SIGMA3] * rest, [_diag(np.sin(alpha), 1)] + [I2] * rest, 1j * np.cos(alpha), 1
    if fid in (FamilyId.N_K0, FamilyId.L5_EQ9):
        alpha, beta = p['alpha'], p['beta']
        return ([_diag(np.cos(alpha), np.cos(beta))] + [I2] * rest,
                [_diag(np.sin(alpha), np.sin(beta))] + [SIGMA3] * rest, 1, 1j)
    if fid is FamilyId.L5_EQ8:
        return [PROJ0, I2, I2], [PROJ1, _rotation(p['alpha']), _rotation(p['beta'])], 1, 1
    raise ParamDomainError(f"no builder for {fid}")


def declared_k(spec: FamilySpec, declared: SchmidtDecompositionSR2) -> int:
    if spec.family_id in TABLE_K:
        return TABLE_K[spec.family_id](spec.n)
    return singular_number(declared)


def generate(spec: FamilySpec, check_domain: bool = True) -> GeneratedGate:
    """
    Build the family member for `spec` together with its declared Schmidt
    decomposition.

    With check_domain=False the raw matrix is built for any parameters (used by
    sweeps to report excluded points); no declared k is attached then.
    """
    fid, n = spec.family_id, spec.n
    if check_domain:
        validate_params(fid, n, spec.params)
        if fid is FamilyId.T3_K0:
            point = K0SystemPoint(**{k: complex(v) for k, v in spec.params.items()})
            residual = k0_residual(point)
            if residual > Config.K0_RESIDUAL_TOL:
                raise NotOnVarietyError(f"k=0 system residual {residual:.3e}")
    params = dict(spec.params) if fid is FamilyId.T3_K0 else _require_real(spec.params, spec.params)

    termA, termB, scaleA, scaleB = _build_terms(fid, n, params, validate=check_domain)
    entries = scaleA * kron_matrices(*termA) + scaleB * kron_matrices(*termB)
    U = MultipartiteOperator((2,) * n, entries)

    try:
        declared = SchmidtDecompositionSR2.from_terms(termA, termB, scaleA, scaleB)
    except DegenerateInputError:
        declared = None

    k = None
    if check_domain:
        tol = Config.K0_RESIDUAL_TOL if fid is FamilyId.T3_K0 else Config.UNITARY_TOL
        if not U.is_unitary(tol):
            raise InternalInvariantViolation(
                f"{fid.value} member is not unitary: residual {U.unitarity_residual():.3e}"
            )
        k = declared_k(spec, declared)
        if singular_number(declared) != k:
            raise InternalInvariantViolation(
                f"{fid.value} declared decomposition has singular number "
                f"{singular_number(declared)}, expected {k}"
            )

    if spec.permute is not None:
        U = permute_parties(U, spec.permute)
        if declared is not None:
            declared = declared.permuted(spec.permute)
    return GeneratedGate(spec, U, declared, k)


# -- parameter sampling -------------------------------------------------------

def param_ranges(family_id: FamilyId, n: int) -> dict:
    """Box containing the real domain of each parameter"""
    if family_id is FamilyId.T3_K0:
        raise ParamDomainError("t3-k0 points come from the k=0 solver, not from a box")
    ranges = {}
    for name in param_names(family_id, n):
        if name == 'c':
            ranges[name] = (0.2, 3.0)
        elif family_id is FamilyId.N_K1:
            ranges[name] = (0.0, np.pi)
        else:
            ranges[name] = (0.0, TWO_PI)
    return ranges


def expand_grid(axes: dict) -> list:
    """Cartesian product of {name: (lo, hi, steps)} as a list of parameter dicts"""
    names = list(axes)
    values = [np.linspace(lo, hi, int(steps)) for lo, hi, steps in axes.values()]
    return [dict(zip(names, map(float, point))) for point in product(*values)]


def grid_axis(lo: float, hi: float, steps: int, margin: float) -> tuple:
    if steps == 1:
        mid = (lo + hi) / 2
        return mid, mid, 1
    return lo + margin, hi - margin, steps


def default_grid(family_id: FamilyId, n: int, steps: int, margin: float = Config.GRID_MARGIN) -> list:
    """
    Grid with `steps` points per parameter spanning the box inset by `margin`;
    a single step sits at the centre of each range. Points closer than
    margin/2 to an excluded set are dropped.
    """
    axes = {name: grid_axis(lo, hi, steps, margin) for name, (lo, hi) in param_ranges(family_id, n).items()}
    points = []
    for params in expand_grid(axes):
        try:
            validate_params(family_id, n, params, margin / 2)
        except ParamDomainError:
            continue
        points.append(params)
    return points


def random_params(family_id: FamilyId, n: int, rng: np.random.Generator,
                  margin: float = Config.GRID_MARGIN, attempts: int = 1000) -> dict:
    for _ in range(attempts):
        try:
            if family_id is FamilyId.T3_K0:
                seed = k0_seed_points(1, Config.DEFAULT_K0_SPREAD, rng)[0]
                params = k0_solve(seed).as_params()
            else:
                params = {}
                for name, (lo, hi) in param_ranges(family_id, n).items():
                    if name == 'c':
                        params[name] = float(rng.choice([rng.uniform(0.2, 0.9), rng.uniform(1.1, 3.0)]))
                    else:
                        params[name] = float(rng.uniform(lo, hi))
            validate_params(family_id, n, params, margin)
            return params
        except (ParamDomainError, SolverDivergedError):
            continue
    raise ParamDomainError(f"no in-domain draw for {family_id.value} after {attempts} attempts")


# -- auxiliary constructions ---------------------------------------------------

def controlled_pair_gate(n: int, alpha: float, beta: float, pauli: str = 'x') -> MultipartiteOperator:
    """|0><0| (x) (cos a I + i sin a P^(n-1)) + |1><1| (x) (cos b I + i sin b P^(n-1))"""
    if n < 2:
        raise ParamDomainError("controlled pair gates need at least two qubits")
    sigma = kron_matrices(*([PAULIS[pauli]] * (n - 1)))
    eye = np.eye(2 ** (n - 1))
    slice0 = np.cos(alpha) * eye + 1j * np.sin(alpha) * sigma
    slice1 = np.cos(beta) * eye + 1j * np.sin(beta) * sigma
    return MultipartiteOperator((2,) * n, np.kron(PROJ0, slice0) + np.kron(PROJ1, slice1))
