"""
Finite exponential sums f(s) = sum_j a_j e^{lambda_j s} over an integral basis,
their evaluation in a vertical strip, vertical-line sampling, Bochner-Fejer
polynomials and the JSON document format.
"""

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from jsonschema import Draft202012Validator

from .cloud import ImageCloud
from .config import Config
from .debug import debug_print
from .exponents import (BasisKind, BasisSpec, BohrError, DimensionError,
                        DuplicateExponentError, ExponentVector,
                        InvalidInputError, RationalMatrix, as_vector,
                        basis_from_log_integers, integralize, resolve_exponent)

config = Config()


class OutOfStripError(BohrError, ValueError):
    """raised when a real part falls outside the strip of a sum"""


class SumFormatError(BohrError, ValueError):
    """raised when a sum document does not parse or validate"""


@dataclass(frozen=True)
class Strip:
    """the vertical strip alpha < Re s < beta; either bound may be infinite"""

    alpha: float = -math.inf
    beta: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'beta', float(self.beta))
        if math.isnan(self.alpha) or math.isnan(self.beta) or not self.alpha < self.beta:
            raise InvalidInputError(f'empty strip ({self.alpha}, {self.beta})')

    def contains(self, sigma: float) -> bool:
        return self.alpha < sigma < self.beta

    def check(self, sigmas, override: bool = False):
        """raise OutOfStripError unless every sigma lies in the strip"""
        if override or config.override_strip:
            return
        sigmas = np.atleast_1d(np.asarray(sigmas, dtype=float))
        bad = sigmas[~((sigmas > self.alpha) & (sigmas < self.beta))]
        if bad.size:
            raise OutOfStripError(
                f'Re s = {bad[0]!r} is outside the strip ({self.alpha}, {self.beta}); '
                f'pass override_strip to evaluate there anyway')

    def to_dict(self) -> dict:
        return {'alpha': None if math.isinf(self.alpha) else self.alpha,
                'beta': None if math.isinf(self.beta) else self.beta}


class Term(NamedTuple):
    coeff: complex
    r: ExponentVector


@dataclass(frozen=True)
class ExponentialSum:
    """
    A canonical finite exponential sum: nonzero coefficients, pairwise
    distinct exponent vectors padded to the basis dimension, terms sorted by
    ascending real exponent. Use build() to canonicalize arbitrary input.
    """

    basis: BasisSpec
    terms: Tuple[Term, ...] = ()
    strip: Strip = field(default_factory=Strip)

    def __post_init__(self):
        k = self.basis.dimension
        terms = tuple(Term(complex(c), as_vector(r)) for c, r in self.terms)
        object.__setattr__(self, 'terms', terms)
        for t in terms:
            if len(t.r) != k:
                raise DimensionError(f'term vector {t.r.coords} over a basis of dimension {k}')
            if t.coeff == 0:
                raise InvalidInputError('zero coefficients must be dropped, use build()')
        if len({t.r for t in terms}) != len(terms):
            raise DuplicateExponentError('two terms share an exponent, use build() to merge')
        lams = [resolve_exponent(t.r, self.basis) for t in terms]
        if any(a > b for a, b in zip(lams, lams[1:])):
            raise InvalidInputError('terms are not sorted by exponent, use build()')

    @classmethod
    def build(cls, basis: BasisSpec, terms: Iterable = (), strip: Optional[Strip] = None):
        """
        canonicalize (coefficient, vector) pairs: vectors are padded to the
        basis, coefficients of identical vectors are merged, zero terms are
        dropped and the rest sorted by exponent
        """
        merged = {}
        for coeff, r in terms:
            r = as_vector(r).padded(basis.dimension)
            merged[r] = merged.get(r, 0j) + complex(coeff)
        kept = [Term(c, r) for r, c in merged.items() if c != 0]
        kept.sort(key=lambda t: (resolve_exponent(t.r, basis), t.r.coords))
        return cls(basis, tuple(kept), strip or Strip())

    def __len__(self):
        return len(self.terms)

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=complex)

    @property
    def exponents(self) -> np.ndarray:
        return np.array([resolve_exponent(t.r, self.basis) for t in self.terms], dtype=float)

    @property
    def vectors(self) -> List[ExponentVector]:
        return [t.r for t in self.terms]

    @property
    def matrix(self) -> np.ndarray:
        """the integer matrix R of exponent vectors, as floats for evaluation"""
        return np.array([t.r.coords for t in self.terms], dtype=float).reshape(len(self), self.dimension)

    def weights(self, sigma: float) -> np.ndarray:
        """a_j e^{lambda_j sigma}"""
        return self.coefficients * np.exp(self.exponents * sigma)

    def abs_bound(self, sigma: float) -> float:
        """sum_j |a_j| e^{lambda_j sigma}, the triangle-inequality bound on |f|"""
        return float(np.abs(self.weights(sigma)).sum())

    def with_coefficients(self, coeffs: Sequence[complex]) -> 'ExponentialSum':
        """same exponents and strip, new (nonzero) coefficients"""
        return replace(self, terms=tuple(Term(complex(c), t.r) for c, t in zip(coeffs, self.terms)))


def evaluate(f: ExponentialSum, s, override_strip: bool = False):
    """
    f(s) by ordinary summation. s may be a complex scalar or an array of
    points; the result has the same shape.
    """
    s_arr = np.asarray(s, dtype=complex)
    f.strip.check(s_arr.real, override_strip)
    if not len(f):
        out = np.zeros(s_arr.shape, dtype=complex)
    else:
        out = np.exp(np.multiply.outer(s_arr, f.exponents)) @ f.coefficients
    return complex(out) if np.ndim(s) == 0 else out


def vertical_line_samples(f: ExponentialSum, sigma0: float, t_min: float, t_max: float,
                          count: int, override_strip: bool = False) -> ImageCloud:
    """f(sigma0 + i t) on a uniform grid of count values of t in [t_min, t_max]"""
    if count < 1:
        raise InvalidInputError(f'count must be at least 1, got {count}')
    if t_min > t_max:
        raise InvalidInputError(f't_min {t_min} is larger than t_max {t_max}')
    f.strip.check(sigma0, override_strip)
    ts = np.linspace(t_min, t_max, count)
    points = evaluate(f, sigma0 + 1j * ts, override_strip=True)
    meta = {'sampler': 'vertical-line', 'sigma': sigma0, 't_min': t_min, 't_max': t_max,
            'count': count}
    return ImageCloud(points, np.full(count, float(sigma0)), meta, ts)


def translate(f: ExponentialSum, tau: float) -> ExponentialSum:
    """the vertical translate s -> f(s + i tau)"""
    return f.with_coefficients(f.coefficients * np.exp(1j * f.exponents * tau))


def _check_degrees(f: ExponentialSum, degrees: Sequence[float]) -> List[float]:
    degrees = list(degrees)
    if len(degrees) != f.dimension:
        raise DimensionError(f'{len(degrees)} degrees for a basis of dimension {f.dimension}')
    for d in degrees:
        if not d > 0:
            raise InvalidInputError(f'Bochner-Fejer degrees must be positive, got {d}')
    return degrees


def fejer_factors(f: ExponentialSum, degrees: Sequence[float]) -> np.ndarray:
    """p_j = prod_m max(0, 1 - |r_{j,m}| / degrees[m])"""
    degrees = _check_degrees(f, degrees)
    p = np.ones(len(f))
    for j, t in enumerate(f.terms):
        for r, d in zip(t.r.coords, degrees):
            p[j] *= max(0.0, 1.0 - abs(r) / d)
    return p


def bochner_fejer(f: ExponentialSum, degrees: Sequence[float]) -> ExponentialSum:
    """
    The Bochner-Fejer polynomial with product Fejer factors over the integral
    basis. Degrees may be math.inf, which leaves that coordinate undamped.
    """
    p = fejer_factors(f, degrees)
    debug_print(f'bochner-fejer: degrees {list(degrees)}, {int((p > 0).sum())} of {len(f)} terms kept')
    kept = [Term(pj * t.coeff, t.r) for pj, t in zip(p, f.terms) if pj > 0]
    return replace(f, terms=tuple(kept))


def fejer_error_bound(f: ExponentialSum, degrees: Sequence[float], sigma: float) -> float:
    """sum_j |a_j| e^{lambda_j sigma} (1 - p_j), a sup bound on |P - f| at sigma"""
    p = fejer_factors(f, degrees)
    return float((np.abs(f.weights(sigma)) * (1 - p)).sum())


@dataclass(frozen=True)
class AlmostPeriods:
    """translations tau that move f by at most eps on the sampled segment"""

    taus: np.ndarray
    eps: float
    max_gap: float


def almost_periods(f: ExponentialSum, sigma: float, t_grid: Sequence[float],
                   tau_grid: Sequence[float], eps: float) -> AlmostPeriods:
    """
    Diagnostic for almost periodicity: every tau in tau_grid with
    sup_t |f(sigma + i(t + tau)) - f(sigma + it)| <= eps. The largest gap
    between consecutive accepted taus stands in for the inclusion length.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    tau_grid = np.asarray(tau_grid, dtype=float)
    base = evaluate(f, sigma + 1j * t_grid)
    kept = []
    for tau in tau_grid:
        moved = evaluate(f, sigma + 1j * (t_grid + tau))
        if np.abs(moved - base).max(initial=0.0) <= eps:
            kept.append(tau)
    taus = np.array(kept)
    max_gap = float(np.diff(taus).max()) if taus.size > 1 else math.inf
    debug_print(f'almost periods: {taus.size} of {tau_grid.size} translations within {eps}')
    return AlmostPeriods(taus, eps, max_gap)


# JSON document format

_COORD = {'oneOf': [{'type': 'integer'},
                    {'type': 'string', 'pattern': r'^\s*-?\d+\s*(/\s*\d+\s*)?$'}]}

SUM_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'required': ['basis', 'terms'],
    'properties': {
        'basis': {
            'oneOf': [
                {'type': 'object',
                 'required': ['kind', 'values'],
                 'properties': {'kind': {'const': 'explicit'},
                                'values': {'type': 'array', 'minItems': 1,
                                           'items': {'type': 'number'}},
                                'labels': {'type': 'array', 'items': {'type': 'string'}}},
                 'additionalProperties': False},
                {'type': 'object',
                 'required': ['kind', 'integers'],
                 'properties': {'kind': {'const': 'log_integers'},
                                'integers': {'type': 'array', 'minItems': 1,
                                             'items': {'type': 'integer', 'minimum': 2}}},
                 'additionalProperties': False},
            ]
        },
        'terms': {
            'type': 'array',
            'items': {'type': 'object',
                      'required': ['re', 'im', 'r'],
                      'properties': {'re': {'type': 'number'},
                                     'im': {'type': 'number'},
                                     'r': {'type': 'array', 'items': _COORD}},
                      'additionalProperties': False},
        },
        'strip': {
            'type': 'object',
            'properties': {'alpha': {'type': ['number', 'null']},
                           'beta': {'type': ['number', 'null']}},
            'additionalProperties': False,
        },
    },
    'additionalProperties': False,
}

_validator = Draft202012Validator(SUM_SCHEMA)


def to_dict(f: ExponentialSum) -> dict:
    if f.basis.kind is BasisKind.LOG_PRIMES:
        basis = {'kind': 'log_integers', 'integers': list(f.basis.primes)}
    else:
        basis = {'kind': 'explicit', 'values': list(f.basis.values), 'labels': list(f.basis.labels)}
    return {
        'basis': basis,
        'terms': [{'re': t.coeff.real, 'im': t.coeff.imag, 'r': list(t.r.coords)} for t in f.terms],
        'strip': f.strip.to_dict(),
    }


def from_dict(doc: dict) -> ExponentialSum:
    errors = sorted(_validator.iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = '.'.join(str(p) for p in e.path) or '<root>'
        raise SumFormatError(f'{where}: {e.message}')

    try:
        return _from_valid_dict(doc)
    except OverflowError as e:
        raise SumFormatError(f'a number in the document is out of range: {e}') from None


def _from_valid_dict(doc: dict) -> ExponentialSum:
    spec = doc['basis']
    if spec['kind'] == 'explicit':
        basis = BasisSpec.explicit(spec['values'], spec.get('labels'))
        # coordinates are already over the basis
        expansion = None
    else:
        basis, expansion = basis_from_log_integers(spec['integers'])
    declared = len(spec['values']) if expansion is None else len(expansion)

    rows, coeffs = [], []
    for i, term in enumerate(doc['terms']):
        try:
            coords = [Fraction(str(c).replace(' ', '')) for c in term['r']]
        except (ValueError, ZeroDivisionError) as e:
            raise SumFormatError(f'terms.{i}.r: {e}') from None
        if len(coords) > declared:
            raise DimensionError(f'terms.{i}.r has {len(coords)} entries for {declared} basis elements')
        coords += [Fraction(0)] * (declared - len(coords))
        if expansion is not None:
            # sum_k r_k log n_k re-expressed over the primes
            coords = [sum((c * e.coords[p] for c, e in zip(coords, expansion)), Fraction(0))
                      for p in range(basis.dimension)]
        rows.append(tuple(coords))
        coeff = complex(term['re'], term['im'])
        if not cmath.isfinite(coeff):
            raise SumFormatError(f'terms.{i}: coefficient {coeff} is not finite')
        coeffs.append(coeff)
    if len(set(rows)) != len(rows):
        raise DuplicateExponentError('the document lists the same exponent twice')

    if all(q.denominator == 1 for row in rows for q in row):
        vectors = [ExponentVector(tuple(int(q) for q in row)) for row in rows]
    else:
        basis, vectors = integralize(RationalMatrix(tuple(rows)), basis)

    strip = doc.get('strip') or {}
    alpha, beta = strip.get('alpha'), strip.get('beta')
    strip = Strip(-math.inf if alpha is None else alpha, math.inf if beta is None else beta)
    return ExponentialSum.build(basis, zip(coeffs, vectors), strip)


def dumps(f: ExponentialSum, **kwargs) -> str:
    return json.dumps(to_dict(f), **kwargs)


def loads(text: str) -> ExponentialSum:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SumFormatError(f'not valid JSON: {e}') from None
    return from_dict(doc)


def load(path: str) -> ExponentialSum:
    with open(path, encoding='utf-8') as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise SumFormatError(f'{path} is not UTF-8 text: {e}') from None
    return loads(text)


def dump(f: ExponentialSum, path: str):
    with open(path, 'w', encoding='utf-8') as out:
        out.write(dumps(f, indent=2))
        out.write('\n')
