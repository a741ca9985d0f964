"""
Frequency bases, integer exponent vectors and the exact lattice algebra behind
them. Everything that touches r_{j,k} runs on Python integers (numpy object
arrays), never on floats.
"""

import enum
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .debug import debug_print


class BohrError(Exception):
    """
    The root of every structured error raised by this package. The command
    line turns any of them into exit code 2.
    """


class InvalidInputError(BohrError, ValueError):
    """raised when an argument is outside its documented domain"""


class DimensionError(BohrError, ValueError):
    """raised when a vector does not fit the basis it is used with"""


class DuplicateExponentError(BohrError, ValueError):
    """raised when the same exponent is listed twice"""


class BasisKind(enum.Enum):
    EXPLICIT = 'explicit'
    LOG_PRIMES = 'log_primes'


@dataclass(frozen=True)
class BasisSpec:
    """
    An ordered list of real frequencies g_1..g_K, assumed linearly independent
    over the rationals. For log-prime bases this holds by unique
    factorization; for explicit bases it is the caller's promise.
    """

    values: Tuple[float, ...]
    labels: Tuple[str, ...]
    kind: BasisKind = BasisKind.EXPLICIT
    primes: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(float(v) for v in self.values))
        object.__setattr__(self, 'labels', tuple(str(l) for l in self.labels))
        object.__setattr__(self, 'primes', tuple(int(p) for p in self.primes))
        if not self.values:
            raise InvalidInputError('a basis needs at least one element')
        if len(self.values) != len(self.labels):
            raise InvalidInputError(
                f'{len(self.values)} basis values but {len(self.labels)} labels')
        if not all(math.isfinite(v) and v != 0 for v in self.values):
            raise InvalidInputError('basis values must be finite and nonzero')
        if len(set(self.values)) != len(self.values):
            raise InvalidInputError('basis values must be pairwise distinct')
        if self.kind is BasisKind.LOG_PRIMES and len(self.primes) != len(self.values):
            raise InvalidInputError('a log-prime basis records one prime per value')

    @classmethod
    def explicit(cls, values: Sequence[float], labels: Optional[Sequence[str]] = None):
        if labels is None:
            labels = [f'g{k + 1}' for k in range(len(values))]
        return cls(tuple(values), tuple(labels))

    @classmethod
    def log_primes(cls, primes: Sequence[int]):
        primes = sorted(int(p) for p in primes)
        return cls(tuple(math.log(p) for p in primes),
                   tuple(f'log{p}' for p in primes),
                   BasisKind.LOG_PRIMES, tuple(primes))

    @property
    def dimension(self) -> int:
        return len(self.values)

    @property
    def vector(self) -> np.ndarray:
        """the basis as the vector g used by the diagonal restriction"""
        return np.array(self.values, dtype=float)

    def suspect_relations(self, max_denominator: int = 12) -> List[Tuple[int, int, Fraction]]:
        """
        Pairs (k, m, q) whose ratio g_k / g_m is within 1e-12 of a rational q
        with a small denominator. A heuristic precondition check only: an
        empty list certifies nothing.
        """
        if self.kind is BasisKind.LOG_PRIMES:
            return []
        found = []
        for k in range(self.dimension):
            for m in range(k + 1, self.dimension):
                ratio = self.values[k] / self.values[m]
                q = Fraction(ratio).limit_denominator(max_denominator)
                if abs(ratio - float(q)) <= 1e-12 * max(1.0, abs(ratio)):
                    found.append((k, m, q))
        return found


@dataclass(frozen=True)
class ExponentVector:
    """integer coordinates r_j of one exponent over a basis"""

    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = []
        for c in self.coords:
            if isinstance(c, bool) or not isinstance(c, numbers.Integral):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                else:
                    raise InvalidInputError(f'exponent coordinate {c!r} is not an integer')
            coords.append(int(c))
        object.__setattr__(self, 'coords', tuple(coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    @property
    def support(self) -> int:
        """number of entries up to the last nonzero one"""
        for k in range(len(self.coords), 0, -1):
            if self.coords[k - 1]:
                return k
        return 0

    @property
    def norm1(self) -> int:
        return sum(abs(c) for c in self.coords)

    def padded(self, width: int) -> 'ExponentVector':
        if len(self.coords) > width:
            if self.support > width:
                raise DimensionError(
                    f'vector {self.coords} does not fit a basis of dimension {width}')
            return ExponentVector(self.coords[:width])
        return ExponentVector(self.coords + (0,) * (width - len(self.coords)))


def as_vector(v) -> ExponentVector:
    return v if isinstance(v, ExponentVector) else ExponentVector(tuple(v))


@dataclass(frozen=True)
class RationalMatrix:
    """rational coordinates of exponents over a basis, one row per exponent"""

    entries: Tuple[Tuple[Fraction, ...], ...] = field()

    def __post_init__(self):
        rows = tuple(tuple(Fraction(e) for e in row) for row in self.entries)
        if not rows:
            raise InvalidInputError('a coordinate matrix needs at least one row')
        if len({len(r) for r in rows}) != 1:
            raise InvalidInputError('coordinate rows must have a common length')
        object.__setattr__(self, 'entries', rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    def column_denominators(self) -> List[int]:
        """least common denominator of each column"""
        return [reduce(math.lcm, (row[k].denominator for row in self.entries), 1)
                for k in range(self.shape[1])]


def resolve_exponent(v: ExponentVector, b: BasisSpec) -> float:
    """the real exponent lambda = <r, g>"""
    v = as_vector(v)
    if len(v) > b.dimension:
        raise DimensionError(
            f'vector of length {len(v)} over a basis of dimension {b.dimension}')
    return math.fsum(c * g for c, g in zip(v.coords, b.values))


def basis_from_log_integers(ns: Sequence[int]) -> Tuple[BasisSpec, List[ExponentVector]]:
    """
    The basis of logs of every prime dividing some n, ascending, and the
    factorization multiplicities of each n over it.
    """
    ns = list(ns)
    if not ns:
        raise InvalidInputError('no integers given')
    for n in ns:
        if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 2:
            raise InvalidInputError(f'{n!r} is not an integer >= 2')
    factorizations = [sympy.factorint(int(n)) for n in ns]
    primes = sorted({p for f in factorizations for p in f})
    basis = BasisSpec.log_primes(primes)
    vectors = [ExponentVector(tuple(f.get(p, 0) for p in primes)) for f in factorizations]
    return basis, vectors


def hermite_form(matrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row-style Hermite normal form over the integers.

    :param matrix: a rectangular integer matrix (any nested sequence)
    :return: (H, U) with U unimodular and U @ matrix == H. The nonzero rows of
        H come first, each pivot is positive, and entries above a pivot lie
        in [0, pivot).
    """
    a = np.array([[int(x) for x in row] for row in matrix], dtype=object)
    if a.ndim != 2:
        a = a.reshape(len(matrix), 0)
    m, n = a.shape
    u = np.eye(m, dtype=int).astype(object)

    row = 0
    for col in range(n):
        if row >= m:
            break
        while True:
            nonzero = [i for i in range(row, m) if a[i, col] != 0]
            if not nonzero:
                break
            # the smallest entry becomes the pivot, the rest get reduced by it
            best = min(nonzero, key=lambda i: abs(a[i, col]))
            if best != row:
                a[[row, best]] = a[[best, row]]
                u[[row, best]] = u[[best, row]]
            done = True
            for i in range(row + 1, m):
                if a[i, col] != 0:
                    q = a[i, col] // a[row, col]
                    a[i] = a[i] - q * a[row]
                    u[i] = u[i] - q * u[row]
                    if a[i, col] != 0:
                        done = False
            if done:
                break
        if a[row, col] == 0:
            continue
        if a[row, col] < 0:
            a[row] = -a[row]
            u[row] = -u[row]
        for i in range(row):
            q = a[i, col] // a[row, col]
            if q:
                a[i] = a[i] - q * a[row]
                u[i] = u[i] - q * u[row]
        row += 1
    return a, u


def rank_of(h: np.ndarray) -> int:
    """number of nonzero rows of a Hermite form"""
    return sum(1 for r in h if any(x != 0 for x in r))


def _pivots(h: np.ndarray) -> List[int]:
    return [next(k for k, x in enumerate(r) if x != 0) for r in h]


def lattice_coordinates(h: np.ndarray, target: Sequence[int]) -> Tuple[int, ...]:
    """integer c with c @ h == target, for h in Hermite form of full row rank"""
    rest = list(target)
    c = []
    for r, p in zip(h, _pivots(h)):
        q, rem = divmod(rest[p], r[p])
        if rem:
            raise ArithmeticError('target is not in the row lattice')
        c.append(int(q))
        rest = [x - q * y for x, y in zip(rest, r)]
    if any(rest):
        raise ArithmeticError('target is not in the row lattice')
    return tuple(c)


def _combined_label(coeffs: Sequence[Fraction], labels: Sequence[str]) -> str:
    parts = []
    for q, label in zip(coeffs, labels):
        if q == 0:
            continue
        sign = '-' if q < 0 else '+'
        q = abs(q)
        text = label if q.numerator == 1 else f'{q.numerator}*{label}'
        if q.denominator != 1:
            text = f'{text}/{q.denominator}'
        parts.append((sign, text))
    if not parts:
        return '0'
    head = ('-' if parts[0][0] == '-' else '') + parts[0][1]
    return head + ''.join(f' {s} {t}' for s, t in parts[1:])


def integralize(m: RationalMatrix, b: BasisSpec) -> Tuple[BasisSpec, List[ExponentVector]]:
    """
    Rewrite rational coordinates over b as integer coordinates over a new
    basis of the Z-module the rows generate. Column denominators are cleared,
    the integer matrix is put in Hermite form, and its nonzero rows rescaled
    back become the new basis.
    """
    rows, cols = m.shape
    if cols != b.dimension:
        raise DimensionError(f'{cols} coordinate columns over a basis of dimension {b.dimension}')
    if len(set(m.entries)) != rows:
        raise DuplicateExponentError('the same exponent appears in two rows')

    denominators = m.column_denominators()
    cleared = [[int(q * d) for q, d in zip(row, denominators)] for row in m.entries]
    h, _ = hermite_form(cleared)
    rank = rank_of(h)
    debug_print(f'integralize: {rows}x{cols} matrix, denominators {denominators}, rank {rank}')

    if rank == 0:
        # only the zero exponent: nothing to span, keep the basis
        return b, [ExponentVector((0,) * cols) for _ in range(rows)]
    h = h[:rank]
    if rank == cols and all(d == 1 for d in denominators) and \
            all(h[i, k] == (1 if i == k else 0) for i in range(rank) for k in range(cols)):
        return b, [ExponentVector(tuple(r)) for r in cleared]

    scaled = [[Fraction(int(h[i, k]), denominators[k]) for k in range(cols)] for i in range(rank)]
    values = [math.fsum(float(q) * g for q, g in zip(r, b.values)) for r in scaled]
    labels = [_combined_label(r, b.labels) for r in scaled]
    vectors = [ExponentVector(lattice_coordinates(h, r)) for r in cleared]
    return BasisSpec.explicit(values, labels), vectors


def left_kernel(rows: Sequence[ExponentVector]) -> List[Tuple[int, ...]]:
    """
    A basis, in Hermite form, of the integer relations
    {m in Z^J : sum_j m_j r_j = 0} among the rows.
    """
    rows = [as_vector(r) for r in rows]
    if not rows:
        raise InvalidInputError('left kernel of an empty list of rows')
    width = max(len(r) for r in rows)
    h, u = hermite_form([r.padded(width).coords for r in rows])
    rank = rank_of(h)
    kernel = u[rank:]
    debug_print(f'left kernel: {len(rows)} rows of width {width}, rank {rank}')
    if len(kernel) == 0:
        return []
    canonical, _ = hermite_form(kernel)
    return [tuple(int(x) for x in r) for r in canonical[:rank_of(canonical)]]
