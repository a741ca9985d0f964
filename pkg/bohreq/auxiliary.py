"""
The auxiliary function F_f(sigma, x) = sum_j a_j e^{lambda_j sigma} e^{i <r_j, x>}
on the torus [0, 2 pi)^K, sampled value sets and their comparison.

Value sets are approximated by finite clouds. Set equalities between
closures become Hausdorff distance bounds whose tolerance comes from the
sampler: a rigorous grid-offset bound for full grids, a multiple of the
empirical nearest-neighbour spacing otherwise.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .cloud import EmptyCloudError, ImageCloud
from .config import Config
from .debug import debug_print
from .exponents import BasisSpec, BohrError, DimensionError, InvalidInputError
from .sums import ExponentialSum, OutOfStripError

__all__ = [
    'BudgetExceededError', 'RepresentationMismatchError', 'EmptyCloudError',
    'ImageCloud', 'Sampler', 'SigmaRange', 'eval_F', 'diagonal_restriction',
    'shifted_restriction', 'sample_image', 'sample_union', 'hausdorff',
    'directed_hausdorff', 'nearest_neighbor_spacing', 'lipschitz_bound',
    'resolution_bound', 'check_basis_independence', 'closure_stability',
    'StabilityReport', 'permute_coordinates',
]

config = Config()

TWO_PI = 2 * math.pi
DEFAULT_GRID = 32


class BudgetExceededError(BohrError, ValueError):
    """raised when a full torus grid would exceed config.grid_cap points"""


class RepresentationMismatchError(BohrError, ValueError):
    """raised when two representations of one sum resolve differently"""


@dataclass(frozen=True)
class Sampler:
    """
    Where to evaluate F on the torus: either the full grid with n points per
    dimension, or `samples` scrambled Halton points drawn with `seed`.
    """

    grid: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.grid is not None and self.samples is not None:
            raise InvalidInputError('choose either a grid or a sample count, not both')
        if self.grid is None and self.samples is None:
            object.__setattr__(self, 'grid', DEFAULT_GRID)
        if self.grid is not None and self.grid < 1:
            raise InvalidInputError(f'grid must be at least 1, got {self.grid}')
        if self.samples is not None and self.samples < 1:
            raise InvalidInputError(f'sample count must be at least 1, got {self.samples}')

    @property
    def is_grid(self) -> bool:
        return self.grid is not None

    def size(self, k: int) -> int:
        return self.grid ** k if self.is_grid else self.samples

    def points(self, k: int) -> np.ndarray:
        """the (N, k) torus points, grid rows in lexicographic order"""
        if self.is_grid:
            total = self.grid ** k
            if total > config.grid_cap:
                raise BudgetExceededError(
                    f'a grid of {self.grid}^{k} = {total} points exceeds the cap of '
                    f'{config.grid_cap}; use quasi-random sampling (--samples N) instead')
            axes = np.arange(self.grid) * (TWO_PI / self.grid)
            mesh = np.meshgrid(*([axes] * k), indexing='ij')
            return np.stack([m.reshape(-1) for m in mesh], axis=1)
        seed = config.seed if self.seed is None else self.seed
        halton = qmc.Halton(d=k, scramble=True, seed=seed)
        return halton.random(self.samples) * TWO_PI

    def refined(self) -> 'Sampler':
        if self.is_grid:
            return Sampler(grid=2 * self.grid)
        return Sampler(samples=2 * self.samples, seed=self.seed)

    def describe(self) -> dict:
        if self.is_grid:
            return {'kind': 'grid', 'grid': self.grid}
        return {'kind': 'halton', 'samples': self.samples,
                'seed': config.seed if self.seed is None else self.seed}


@dataclass(frozen=True)
class SigmaRange:
    """
    A sigma interval E with the number of sigma values to sample in it.
    Open intervals keep clear of their endpoints by config.open_margin
    relative to the interval length.
    """

    lo: float
    hi: float
    count: Optional[int] = None
    closed: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInputError(f'sigma range ({self.lo}, {self.hi}) must have finite ends')
        if not self.lo <= self.hi:
            raise InvalidInputError(f'empty sigma range ({self.lo}, {self.hi})')
        if not self.closed and self.lo == self.hi:
            raise InvalidInputError(f'open sigma range ({self.lo}, {self.hi}) is empty')
        if self.count is not None and self.count < 1:
            raise InvalidInputError(f'sigma count must be at least 1, got {self.count}')

    @classmethod
    def parse(cls, text: str, closed: bool = False) -> 'SigmaRange':
        """LO:HI or LO:HI:COUNT"""
        parts = text.split(':')
        try:
            if len(parts) == 2:
                return cls(float(parts[0]), float(parts[1]), None, closed)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]), closed)
        except ValueError as e:
            raise InvalidInputError(f'bad sigma range {text!r}: {e}') from None
        raise InvalidInputError(f'bad sigma range {text!r}, expected LO:HI[:COUNT]')

    @property
    def n(self) -> int:
        if self.count is not None:
            return self.count
        return max(1, math.ceil(config.sigma_density * (self.hi - self.lo)))

    def values(self) -> np.ndarray:
        n = self.n
        if self.closed:
            return np.linspace(self.lo, self.hi, n) if n > 1 else np.array([self.lo])
        if n == 1:
            return np.array([(self.lo + self.hi) / 2])
        inset = config.open_margin * (self.hi - self.lo)
        return np.linspace(self.lo + inset, self.hi - inset, n)

    def check_inside(self, f: ExponentialSum, override: bool = False):
        if override or config.override_strip:
            return
        alpha, beta = f.strip.alpha, f.strip.beta
        if self.closed:
            inside = alpha < self.lo and self.hi < beta
        else:
            inside = alpha <= self.lo and self.hi <= beta
        if not inside:
            bracket = '[]' if self.closed else '()'
            raise OutOfStripError(
                f'E = {bracket[0]}{self.lo}, {self.hi}{bracket[1]} is not inside the strip '
                f'({alpha}, {beta})')

    def to_dict(self) -> dict:
        return {'lo': self.lo, 'hi': self.hi, 'count': self.n, 'closed': self.closed}


def _torus_values(weights: np.ndarray, r: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_j w_j e^{i <r_j, x>} for every row of x, chunked"""
    out = np.empty(x.shape[0], dtype=complex)
    if not weights.size:
        out[:] = 0
        return out
    step = config.chunk_size
    for start in range(0, x.shape[0], step):
        block = x[start:start + step]
        out[start:start + step] = np.exp(1j * (block @ r.T)) @ weights
    return out


def eval_F(f: ExponentialSum, sigma: float, x, override_strip: bool = False):
    """
    The auxiliary function at one sigma. x is a single torus point of length
    K or an (N, K) array of them; the result is complex or an array of N.
    """
    f.strip.check(sigma, override_strip)
    x_arr = np.asarray(x, dtype=float)
    single = x_arr.ndim == 1
    x2 = np.atleast_2d(x_arr)
    if x2.shape[-1] != f.dimension:
        raise DimensionError(f'torus point of length {x2.shape[-1]} for a basis of dimension {f.dimension}')
    values = _torus_values(f.weights(sigma), f.matrix, x2)
    return complex(values[0]) if single else values


def diagonal_restriction(f: ExponentialSum, sigma: float, t, override_strip: bool = False):
    """F_f(sigma, t g), which is f(sigma + i t)"""
    t_arr = np.asarray(t, dtype=float)
    x = np.multiply.outer(t_arr, f.basis.vector)
    return eval_F(f, sigma, x, override_strip)


def shifted_restriction(f: ExponentialSum, sigma: float, t, x0: Sequence[float],
                        override_strip: bool = False):
    """
    F_f(sigma, x0 + t g). As a function of t this is the twist of f by x0
    evaluated on the vertical line sigma.
    """
    t_arr = np.asarray(t, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (f.dimension,):
        raise DimensionError(f'shift of shape {x0.shape} for a basis of dimension {f.dimension}')
    x = x0 + np.multiply.outer(t_arr, f.basis.vector)
    return eval_F(f, sigma, x, override_strip)


def sample_image(f: ExponentialSum, sigma0: float, sampler: Optional[Sampler] = None,
                 override_strip: bool = False) -> ImageCloud:
    sampler = sampler or Sampler()
    f.strip.check(sigma0, override_strip)
    x = sampler.points(f.dimension)
    debug_print(f'sample_image: sigma {sigma0}, {x.shape[0]} torus points ({sampler.describe()})')
    values = _torus_values(f.weights(sigma0), f.matrix, x)
    meta = {'sampler': sampler.describe(), 'sigma': float(sigma0)}
    return ImageCloud(values, np.full(values.size, float(sigma0)), meta)


def sample_union(f: ExponentialSum, e: SigmaRange, sampler: Optional[Sampler] = None,
                 override_strip: bool = False) -> ImageCloud:
    """the union of torus images over the sigma values of E"""
    sampler = sampler or Sampler()
    e.check_inside(f, override_strip)
    sigmas = e.values()
    debug_print(f'sample_union: {sigmas.size} sigma values in {e.to_dict()}')
    x = sampler.points(f.dimension)
    clouds = []
    for sigma in sigmas:
        values = _torus_values(f.weights(sigma), f.matrix, x)
        clouds.append(ImageCloud(values, np.full(values.size, float(sigma))))
    meta = {'sampler': sampler.describe(), 'sigma_range': e.to_dict(),
            'sigmas': [float(s) for s in sigmas]}
    return ImageCloud.concat(clouds, meta)


def _require_points(*clouds: ImageCloud):
    for c in clouds:
        if not len(c):
            raise EmptyCloudError('cannot measure distances to an empty cloud')


def directed_hausdorff(a: ImageCloud, b: ImageCloud) -> float:
    """max over points of a of the distance to the nearest point of b"""
    _require_points(a, b)
    d, _ = cKDTree(b.xy).query(a.xy, workers=config.workers)
    return float(d.max())


def hausdorff(a: ImageCloud, b: ImageCloud) -> float:
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def nearest_neighbor_spacing(cloud: ImageCloud) -> float:
    """the largest nearest-neighbour distance among the distinct points"""
    _require_points(cloud)
    pts = np.unique(np.round(cloud.xy, 12), axis=0)
    if pts.shape[0] < 2:
        return 0.0
    d, _ = cKDTree(pts).query(pts, k=2, workers=config.workers)
    return float(d[:, 1].max())


def lipschitz_bound(f: ExponentialSum, sigmas, sampler: Sampler) -> Optional[float]:
    """
    For grid samplers, every torus point lies within pi / n of a grid point in
    each coordinate, so any value of F is within
    max_sigma sum_j |a_j| e^{lambda_j sigma} |r_j|_1 pi / n of a sampled one.
    None for quasi-random samplers, which carry no such guarantee.
    """
    if not sampler.is_grid:
        return None
    if not len(f):
        return 0.0
    norms = np.array([t.r.norm1 for t in f.terms], dtype=float)
    best = 0.0
    for sigma in np.atleast_1d(np.asarray(sigmas, dtype=float)):
        best = max(best, float((np.abs(f.weights(sigma)) * norms).sum()))
    return best * math.pi / sampler.grid


def resolution_bound(a: ImageCloud, b: ImageCloud) -> float:
    """config.resolution_factor times the spacing of the coarser cloud"""
    return config.resolution_factor * max(nearest_neighbor_spacing(a), nearest_neighbor_spacing(b))


def _resolved(f: ExponentialSum):
    return sorted(zip(f.exponents.tolist(), f.coefficients.tolist()))


def check_basis_independence(f_g: ExponentialSum, f_h: ExponentialSum, sigma0: float,
                             sampler: Optional[Sampler] = None) -> float:
    """
    Hausdorff distance between the torus images of two representations of
    the same sum over different integral bases. Both representations have to
    resolve to the same exponents and coefficients; a basis with an evident
    rational relation between two of its elements is refused.
    """
    for f in (f_g, f_h):
        relations = f.basis.suspect_relations()
        if relations:
            k, m, q = relations[0]
            raise InvalidInputError(
                f'basis elements {f.basis.labels[k]} and {f.basis.labels[m]} have ratio '
                f'{q}; the basis is not linearly independent over the rationals')
    rg, rh = _resolved(f_g), _resolved(f_h)
    if len(rg) != len(rh):
        raise RepresentationMismatchError(f'{len(rg)} terms against {len(rh)}')
    for (lg, ag), (lh, ah) in zip(rg, rh):
        if abs(lg - lh) > 1e-12 * max(1.0, abs(lg)):
            raise RepresentationMismatchError(f'exponent {lg!r} resolves to {lh!r} in the other basis')
        if abs(ag - ah) > 1e-12 * max(1.0, abs(ag)):
            raise RepresentationMismatchError(f'coefficient {ag!r} against {ah!r} at exponent {lg!r}')
    sampler = sampler or Sampler()
    return hausdorff(sample_image(f_g, sigma0, sampler), sample_image(f_h, sigma0, sampler))


@dataclass(frozen=True)
class StabilityReport:
    distance: float
    bound: float
    coarse_points: int
    fine_points: int

    @property
    def stable(self) -> bool:
        return self.distance <= self.bound


def closure_stability(f: ExponentialSum, e: SigmaRange, sampler: Optional[Sampler] = None) -> StabilityReport:
    """
    Sample the union over a compact E, then again with the grid doubled and
    2c - 1 sigma values, and compare. The coarse samples are a subset of the
    fine ones, so only the fine-to-coarse direction can be large; it is
    bounded by the torus offset plus the sigma offset of half a step.
    """
    if not e.closed:
        raise InvalidInputError('closure stability is measured on a compact sigma range')
    sampler = sampler or Sampler()
    coarse = sample_union(f, e, sampler)
    fine_e = SigmaRange(e.lo, e.hi, 2 * e.n - 1, closed=True)
    fine = sample_union(f, fine_e, sampler.refined())
    distance = hausdorff(coarse, fine)

    lipschitz = lipschitz_bound(f, e.values(), sampler)
    if lipschitz is None or not len(f):
        bound = config.resolution_factor * nearest_neighbor_spacing(coarse)
    else:
        # |d/dsigma| of each term is |a_j lambda_j| e^{lambda_j sigma}, largest at an end of E
        lam = f.exponents
        edge = np.maximum(np.exp(lam * e.lo), np.exp(lam * e.hi))
        half_step = (e.hi - e.lo) / (2 * (e.n - 1)) if e.n > 1 else 0.0
        norms = np.array([t.r.norm1 for t in f.terms], dtype=float)
        per_term = np.abs(f.coefficients) * edge * (norms * math.pi / sampler.grid + np.abs(lam) * half_step)
        bound = float(per_term.sum())
    debug_print(f'closure stability: distance {distance}, bound {bound}')
    return StabilityReport(distance, bound, len(coarse), len(fine))


def permute_coordinates(f: ExponentialSum, perm: Sequence[int]) -> ExponentialSum:
    """
    The same sum with its basis reordered: new coordinate k is old coordinate
    perm[k]. Exponents and coefficients are unchanged, so
    F_{f'}(sigma, x) = F_f(sigma, y) with y[perm[k]] = x[k].
    """
    perm = list(perm)
    if sorted(perm) != list(range(f.dimension)):
        raise InvalidInputError(f'{perm} is not a permutation of {f.dimension} coordinates')
    b = f.basis
    basis = BasisSpec(tuple(b.values[p] for p in perm), tuple(b.labels[p] for p in perm),
                      b.kind, tuple(b.primes[p] for p in perm) if b.primes else ())
    terms = [(t.coeff, tuple(t.r.coords[p] for p in perm)) for t in f.terms]
    return ExponentialSum.build(basis, terms, f.strip)
