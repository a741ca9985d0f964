"""
Bohr equivalence of exponential sums over a common integral basis.

Two sums with coefficients a_j and b_j on the same exponents are equivalent
when b_j = a_j e^{i <r_j, x0>} for some real x0. The decision is exact on the
integer side: the phases theta_j = arg(b_j / a_j) must satisfy every integer
relation among the r_j modulo 2 pi, and those relations are read off a
Hermite normal form.
"""

import enum
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Config
from .debug import debug_print
from .exponents import (BasisKind, BasisSpec, BohrError, DimensionError,
                        ExponentVector, hermite_form, left_kernel, rank_of,
                        resolve_exponent)
from .sums import ExponentialSum

config = Config()

TWO_PI = 2 * math.pi


class BasisMismatchError(BohrError, ValueError):
    """raised when two sums are not written over the same basis"""


class DimensionTooLargeError(BohrError, ValueError):
    """raised when an exhaustive torus scan would be too expensive"""


class WitnessPrecisionError(BohrError, ArithmeticError):
    """raised when a witness cannot be resolved to the phase tolerance in floating point"""


def wrap_phase(x):
    """reduce angles to (-pi, pi]"""
    return math.pi - np.mod(math.pi - np.asarray(x, dtype=float), TWO_PI)


@dataclass(frozen=True)
class Tolerances:
    """
    modulus is relative; phase is per kernel row and gets multiplied by
    1 + |m|_1 since each theta_j carries its own rounding
    """

    modulus: float = None
    phase: float = None

    def __post_init__(self):
        if self.modulus is None:
            object.__setattr__(self, 'modulus', config.tol_modulus)
        if self.phase is None:
            object.__setattr__(self, 'phase', config.tol_phase)

    def phase_for(self, m: Sequence[int]) -> float:
        return self.phase * (1 + sum(abs(x) for x in m))


class Status(enum.Enum):
    EQUIVALENT = 'Equivalent'
    NOT_EQUIVALENT = 'NotEquivalent'


@dataclass(frozen=True)
class SupportMismatch:
    """an exponent carried by one sum only"""

    exponent: float
    vector: Tuple[int, ...]

    def to_dict(self):
        return {'kind': 'SupportMismatch', 'exponent': self.exponent, 'vector': list(self.vector)}


@dataclass(frozen=True)
class ModulusMismatch:
    """an exponent whose coefficients differ in modulus"""

    exponent: float
    vector: Tuple[int, ...]
    modulus_a: float
    modulus_b: float

    def to_dict(self):
        return {'kind': 'ModulusMismatch', 'exponent': self.exponent, 'vector': list(self.vector),
                'modulus_a': self.modulus_a, 'modulus_b': self.modulus_b}


@dataclass(frozen=True)
class PhaseObstruction:
    """
    an integer relation m (sum_j m_j r_j = 0) whose phase combination
    sum_j m_j theta_j is not a multiple of 2 pi; defect is its distance to one
    """

    kernel: Tuple[int, ...]
    defect: float

    def to_dict(self):
        return {'kind': 'PhaseObstruction', 'kernel': list(self.kernel), 'defect': self.defect}


Obstruction = Union[SupportMismatch, ModulusMismatch, PhaseObstruction]


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: Status
    witness: Optional[Tuple[float, ...]] = None
    residual: Optional[float] = None
    obstruction: Optional[Obstruction] = None

    @classmethod
    def equivalent(cls, witness: Sequence[float], residual: float):
        return cls(Status.EQUIVALENT, tuple(float(x) for x in witness), float(residual))

    @classmethod
    def not_equivalent(cls, obstruction: Optional[Obstruction] = None):
        return cls(Status.NOT_EQUIVALENT, obstruction=obstruction)

    @property
    def is_equivalent(self) -> bool:
        return self.status is Status.EQUIVALENT

    def to_dict(self) -> dict:
        return {
            'status': self.status.value,
            'witness': None if self.witness is None else list(self.witness),
            'residual': self.residual,
            'obstruction': None if self.obstruction is None else self.obstruction.to_dict(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def twist(f: ExponentialSum, x: Sequence[float]) -> ExponentialSum:
    """the sum with coefficients a_j e^{i <r_j, x>}; same exponents and strip"""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != f.dimension:
        raise DimensionError(f'twist vector of length {x.size} for a basis of dimension {f.dimension}')
    phases = f.matrix @ x if len(f) else np.zeros(0)
    return f.with_coefficients(f.coefficients * np.exp(1j * phases))


def co_express(a: ExponentialSum, b: ExponentialSum) -> Tuple[ExponentialSum, ExponentialSum]:
    """
    Rewrite two sums over one common basis. Identical bases pass through;
    prime-log bases are merged into the basis of all their primes. Anything
    else has to be co-expressed by the caller.
    """
    if a.basis == b.basis:
        return a, b
    if a.basis.kind is BasisKind.LOG_PRIMES and b.basis.kind is BasisKind.LOG_PRIMES:
        primes = sorted(set(a.basis.primes) | set(b.basis.primes))
        basis = BasisSpec.log_primes(primes)

        def lift(f):
            index = [primes.index(p) for p in f.basis.primes]
            terms = []
            for t in f.terms:
                coords = [0] * len(primes)
                for k, c in zip(index, t.r.coords):
                    coords[k] = c
                terms.append((t.coeff, coords))
            return ExponentialSum.build(basis, terms, f.strip)

        return lift(a), lift(b)
    raise BasisMismatchError(
        'the sums use different bases; co-express both over one integral basis '
        '(see exponents.integralize) before comparing them')


def _require_same_basis(a: ExponentialSum, b: ExponentialSum):
    if a.basis != b.basis:
        raise BasisMismatchError(
            'the sums use different bases; co-express both over one integral basis '
            '(see exponents.integralize or equivalence.co_express) before comparing them')


def _witness(rows: List[ExponentVector], theta: np.ndarray) -> np.ndarray:
    """
    A particular solution of R x = theta (mod 2 pi). With U R = [H; 0] the
    top block H x = (U theta)_top always has real solutions. Each row of
    this solution can be off by a multiple of the kernel defects, so it is
    only good for choosing the lift in _lift.
    """
    h, u = hermite_form([r.coords for r in rows])
    rank = rank_of(h)
    k = len(rows[0])
    if rank == 0:
        return np.zeros(k)
    top = np.array(h[:rank], dtype=float)
    rhs = np.array(u[:rank], dtype=float) @ theta
    x, *_ = np.linalg.lstsq(top, rhs, rcond=None)
    return x


def _lift(rmat: np.ndarray, theta: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Round R x - theta to the nearest multiples of 2 pi and solve
    R x = theta + 2 pi k in the least-squares sense over every row.
    Returns the solution and its largest wrapped phase error.
    """
    k = np.round((rmat @ x - theta) / TWO_PI)
    x, *_ = np.linalg.lstsq(rmat, theta + TWO_PI * k, rcond=None)
    residual = float(np.abs(wrap_phase(rmat @ x - theta)).max())
    return x, residual


def check_equivalence(a: ExponentialSum, b: ExponentialSum,
                      tol: Optional[Tolerances] = None) -> EquivalenceVerdict:
    """
    Decide whether b is equivalent to a. Returns a witness x0 with
    b_j = a_j e^{i <r_j, x0>} or a checkable obstruction.
    """
    tol = tol or Tolerances()
    _require_same_basis(a, b)

    ca = {t.r: t.coeff for t in a.terms}
    cb = {t.r: t.coeff for t in b.terms}
    if ca.keys() != cb.keys():
        missing = sorted(ca.keys() ^ cb.keys(), key=lambda r: (resolve_exponent(r, a.basis), r.coords))
        r = missing[0]
        debug_print(f'support mismatch at {r.coords}')
        return EquivalenceVerdict.not_equivalent(SupportMismatch(resolve_exponent(r, a.basis), r.coords))

    rows = a.vectors
    if not rows:
        return EquivalenceVerdict.equivalent(np.zeros(a.dimension), 0.0)
    for r in rows:
        ma, mb = abs(ca[r]), abs(cb[r])
        if abs(ma - mb) > tol.modulus * max(ma, mb):
            debug_print(f'modulus mismatch at {r.coords}: {ma} vs {mb}')
            return EquivalenceVerdict.not_equivalent(
                ModulusMismatch(resolve_exponent(r, a.basis), r.coords, ma, mb))

    theta = wrap_phase(np.angle(np.array([cb[r] / ca[r] for r in rows])))
    kernel = left_kernel(rows)
    debug_print(f'{len(rows)} terms, {len(kernel)} kernel relations')
    defects = []
    for m in kernel:
        defect = abs(float(wrap_phase(math.fsum(mj * th for mj, th in zip(m, theta)))))
        if defect > tol.phase_for(m):
            debug_print(f'phase obstruction along {m}: defect {defect}')
            return EquivalenceVerdict.not_equivalent(PhaseObstruction(tuple(m), defect))
        defects.append(defect)

    rmat = np.array([v.coords for v in rows], dtype=float)
    x, residual = _lift(rmat, theta, _witness(rows, theta))
    if residual > tol.phase:
        if not kernel:
            raise WitnessPrecisionError(
                f'the witness misses the phases by {residual:.3g}, above the tolerance {tol.phase:.3g}, '
                'although no integer relation constrains them; the exponent vectors are too large '
                'for double precision')
        # the relations hold one by one but not jointly within tolerance
        worst = int(np.argmax(defects))
        debug_print(f'witness residual {residual} above {tol.phase}')
        return EquivalenceVerdict.not_equivalent(PhaseObstruction(tuple(kernel[worst]), defects[worst]))
    return EquivalenceVerdict.equivalent(x, residual)


def _torus_grid(k: int, n: int, start: int, stop: int) -> np.ndarray:
    """rows start..stop-1 of the grid 2 pi i / n on [0, 2 pi)^k, first axis slowest"""
    idx = np.arange(start, stop)
    coords = np.empty((idx.size, k))
    for axis in range(k - 1, -1, -1):
        coords[:, axis] = idx % n
        idx = idx // n
    return coords * (TWO_PI / n)


def brute_force_equivalence(a: ExponentialSum, b: ExponentialSum, grid_per_dim: int,
                            tol: Optional[Tolerances] = None) -> EquivalenceVerdict:
    """
    Exhaustive oracle: scan the torus grid for x with
    |b_j - a_j e^{i <r_j, x>}| within the grid-scaled allowance
    |a_j| (|r_j|_1 pi / n + tol.modulus + tol.phase) for every exponent.
    Every hit is refined by least squares on all exponents and has to meet
    the exact tolerances: moduli within tol.modulus and a largest phase
    error within tol.phase. The first refined hit in grid order is
    reported; a miss carries no certificate.
    """
    tol = tol or Tolerances()
    _require_same_basis(a, b)
    k = a.dimension
    if k > config.brute_force_max_dim:
        raise DimensionTooLargeError(
            f'brute force over dimension {k} exceeds the limit {config.brute_force_max_dim}')
    if grid_per_dim < 1:
        raise DimensionError(f'grid must have at least one point per dimension, got {grid_per_dim}')

    ca = {t.r: t.coeff for t in a.terms}
    cb = {t.r: t.coeff for t in b.terms}
    support = sorted(ca.keys() | cb.keys(), key=lambda r: r.coords)
    if not support:
        return EquivalenceVerdict.equivalent(np.zeros(k), 0.0)
    va = np.array([ca.get(r, 0j) for r in support])
    vb = np.array([cb.get(r, 0j) for r in support])
    rmat = np.array([r.coords for r in support], dtype=float)
    allowed = np.abs(va) * (np.abs(rmat).sum(axis=1) * math.pi / grid_per_dim + tol.modulus + tol.phase) \
        + 1e-12 * np.abs(vb)

    # refinement needs both coefficients at every exponent with matching moduli
    ma, mb = np.abs(va), np.abs(vb)
    refinable = bool((ma > 0).all() and (mb > 0).all()
                     and (np.abs(ma - mb) <= tol.modulus * np.maximum(ma, mb)).all())
    if not refinable:
        debug_print('brute force: supports or moduli differ, no hit can refine')
        return EquivalenceVerdict.not_equivalent()
    theta = wrap_phase(np.angle(vb / va))

    total = grid_per_dim ** k
    debug_print(f'brute force: {total} grid points, {len(support)} exponents')
    tried = set()
    for start in range(0, total, config.chunk_size):
        x = _torus_grid(k, grid_per_dim, start, min(total, start + config.chunk_size))
        err = np.abs(vb - va * np.exp(1j * (x @ rmat.T)))
        hits = np.flatnonzero((err <= allowed).all(axis=1))
        if not hits.size:
            continue
        lifts = np.round((x[hits] @ rmat.T - theta) / TWO_PI).astype(np.int64)
        _, first = np.unique(lifts, axis=0, return_index=True)
        for j in np.sort(first):
            lift = tuple(lifts[j])
            if lift in tried:
                continue
            tried.add(lift)
            i = hits[j]
            witness, residual = _lift(rmat, theta, x[i])
            if residual <= tol.phase:
                debug_print(f'grid hit {start + i} refines to residual {residual}')
                return EquivalenceVerdict.equivalent(witness, residual)
    debug_print(f'brute force: {len(tried)} distinct lifts tried, none within tolerance')
    return EquivalenceVerdict.not_equivalent()
