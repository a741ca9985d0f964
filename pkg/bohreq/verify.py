"""
The built-in verification suite: numerical checks of the image and
equivalence results on the catalog sums and on seeded random families.

Each check returns a CheckResult; a failing check is a report entry, never an
exception. Checks that measure a quantity against a threshold record both, so
the JSON report can be audited without rerunning anything.
"""

import itertools
import json
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np
import sympy
from jsonschema import Draft202012Validator

from . import auxiliary as aux
from . import catalog
from .__version__ import __version__
from .config import Config
from .debug import debug_print
from .equivalence import (ModulusMismatch, PhaseObstruction,
                          brute_force_equivalence, check_equivalence, twist)
from .exponents import (BasisSpec, ExponentVector, RationalMatrix,
                        integralize, lattice_coordinates, left_kernel,
                        resolve_exponent)
from .report import render_table, status_text
from .sums import ExponentialSum, bochner_fejer, evaluate, fejer_factors

config = Config()

PRIMES = (2, 3, 5)

REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'required': ['version', 'passed', 'checks'],
    'properties': {
        'version': {'type': 'string'},
        'passed': {'type': 'boolean'},
        'checks': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['name', 'passed', 'detail', 'elapsed', 'measured', 'threshold'],
                'properties': {
                    'name': {'type': 'string'},
                    'passed': {'type': 'boolean'},
                    'detail': {'type': 'string'},
                    'elapsed': {'type': 'number', 'minimum': 0},
                    'measured': {'type': ['number', 'null']},
                    'threshold': {'type': ['number', 'null']},
                },
                'additionalProperties': False,
            },
        },
    },
    'additionalProperties': False,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0
    measured: Optional[float] = None
    threshold: Optional[float] = None


@dataclass
class Report:
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {'version': __version__, 'passed': self.passed,
                'checks': [asdict(c) for c in self.checks]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_text(self, color: bool = False) -> str:
        rows = []
        for c in self.checks:
            if c.measured is None:
                value = ''
            else:
                value = f'{c.measured:.3g}' if c.threshold is None else f'{c.measured:.3g} / {c.threshold:.3g}'
            rows.append((c.name, status_text(c.passed, color), value, f'{c.elapsed:.2f}s', c.detail))
        table = render_table(('check', 'status', 'measured / limit', 'time', 'detail'), rows)
        failed = sum(not c.passed for c in self.checks)
        summary = 'all checks passed' if not failed else f'{failed} of {len(self.checks)} checks failed'
        return f'{table}\n{summary}'


def validate_report(doc: dict):
    """raise jsonschema.ValidationError unless doc is a well-formed report"""
    Draft202012Validator(REPORT_SCHEMA).validate(doc)


# random families

def random_sum(rng: np.random.Generator, max_dim: int = 3, max_terms: int = 6,
               max_coord: int = 3) -> ExponentialSum:
    """K <= max_dim over log primes, J <= max_terms distinct vectors, |a_j| in [0.1, 3]"""
    k = int(rng.integers(1, max_dim + 1))
    basis = BasisSpec.log_primes(PRIMES[:k])
    j = int(rng.integers(1, min(max_terms, (2 * max_coord + 1) ** k) + 1))
    vectors = set()
    while len(vectors) < j:
        vectors.add(tuple(int(c) for c in rng.integers(-max_coord, max_coord + 1, size=k)))
    moduli = rng.uniform(0.1, 3.0, size=j)
    phases = rng.uniform(-math.pi, math.pi, size=j)
    coeffs = moduli * np.exp(1j * phases)
    return ExponentialSum.build(basis, zip(coeffs, sorted(vectors)))


def random_torus_point(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.uniform(0, 2 * math.pi, size=k)


# the checks

CHECKS: Dict[str, Callable[[], CheckResult]] = {}


def check(name: str):
    """register a check under name; the wrapper times it"""

    def decorator(func):
        def run() -> CheckResult:
            start = time.perf_counter()
            result = func()
            result.name = name
            result.elapsed = time.perf_counter() - start
            debug_print(f'check {name}: {"passed" if result.passed else "FAILED"} ({result.detail})')
            return result

        CHECKS[name] = run
        return run

    return decorator


@check('swap-pair-not-equivalent')
def check_swap_pair():
    f1, f2 = catalog.swap_pair()
    verdict = check_equivalence(f1, f2)
    obstruction = verdict.obstruction
    certified = (not verdict.is_equivalent and isinstance(obstruction, ModulusMismatch)
                 and obstruction.vector == (0, 1, 0)
                 and obstruction.modulus_a == 1.0 and obstruction.modulus_b == 2.0)
    oracle = brute_force_equivalence(f1, f2, 64)
    passed = certified and not oracle.is_equivalent
    return CheckResult('', passed, f'{verdict.status.value} with {type(obstruction).__name__}; '
                                   f'grid-64 scan says {oracle.status.value}')


@check('witness-round-trip')
def check_witness_round_trip():
    rng = np.random.default_rng(config.seed)
    worst_residual = worst_coeff = 0.0
    failures = 0
    for _ in range(200):
        a = random_sum(rng)
        b = twist(a, random_torus_point(rng, a.dimension))
        verdict = check_equivalence(a, b)
        if not verdict.is_equivalent:
            failures += 1
            continue
        worst_residual = max(worst_residual, verdict.residual)
        gap = np.abs(twist(a, verdict.witness).coefficients - b.coefficients).max()
        worst_coeff = max(worst_coeff, float(gap))
    passed = failures == 0 and worst_residual <= 1e-8 and worst_coeff <= 1e-7
    return CheckResult('', passed, f'200 twisted pairs, {failures} rejected, '
                                   f'coefficient gap {worst_coeff:.2e}',
                       measured=worst_residual, threshold=1e-8)


@check('phase-obstruction')
def check_phase_obstruction():
    a, b = catalog.phase_obstruction_pair()
    verdict = check_equivalence(a, b)
    obstruction = verdict.obstruction
    ok = isinstance(obstruction, PhaseObstruction) and obstruction.kernel == (2, -1)
    defect_gap = abs(obstruction.defect - math.pi / 2) if ok else math.inf
    oracle = brute_force_equivalence(a, b, 512)
    passed = ok and defect_gap <= 1e-9 and not oracle.is_equivalent
    kernel = obstruction.kernel if ok else None
    return CheckResult('', passed, f'kernel {kernel}, grid-512 scan says {oracle.status.value}',
                       measured=defect_gap, threshold=1e-9)


def _disk_union(f: ExponentialSum, grid: int) -> aux.ImageCloud:
    return aux.sample_union(f, aux.SigmaRange(-6.0, 0.0, 25), aux.Sampler(grid=grid))


@check('disk-containment')
def check_disk_containment():
    clouds = [_disk_union(f, 32) for f in catalog.swap_pair()]
    top = max(cloud.max_modulus() for cloud in clouds)
    limit = 4 - 1e-6
    return CheckResult('', top < limit, f'f1 and f2, {len(clouds[0])} points each '
                                        f'over 25 sigma values in (-6, 0)',
                       measured=top, threshold=limit)


def disk_targets() -> np.ndarray:
    radii = [0.5 * k for k in range(8)] + [3.9]
    angles = [k * math.pi / 8 for k in range(16)]
    return np.array([r * np.exp(1j * th) for r in radii for th in angles])


@check('disk-fill')
def check_disk_fill():
    targets = aux.ImageCloud(disk_targets(), 0.0)
    worst = 0.0
    for f in catalog.swap_pair():
        cloud = _disk_union(f, 64)
        worst = max(worst, aux.directed_hausdorff(targets, cloud))
    return CheckResult('', worst <= config.fill_tolerance,
                       f'{len(targets)} targets against f1 and f2, {len(cloud)} points each',
                       measured=worst, threshold=config.fill_tolerance)


@check('swap-pair-same-union')
def check_swap_pair_union():
    f1, f2 = catalog.swap_pair()
    c1, c2 = _disk_union(f1, 32), _disk_union(f2, 32)
    distance = aux.hausdorff(c1, c2)
    bound = aux.resolution_bound(c1, c2)
    not_equivalent = not check_equivalence(f1, f2).is_equivalent
    return CheckResult('', distance <= bound and not_equivalent,
                       f'unions over (-6, 0), not equivalent: {not_equivalent}',
                       measured=distance, threshold=bound)


@check('twisted-unions')
def check_twisted_unions():
    rng = np.random.default_rng(config.seed + 1)
    e = aux.SigmaRange(-0.5, 0.5, 3)
    sampler = aux.Sampler(samples=4096, seed=config.seed + 1)
    worst_ratio = 0.0
    failures = separated = 0
    for _ in range(50):
        a = random_sum(rng, max_coord=2)
        b = twist(a, random_torus_point(rng, a.dimension))
        ca, cb = aux.sample_union(a, e, sampler), aux.sample_union(b, e, sampler)
        bound = aux.resolution_bound(ca, cb)
        distance = aux.hausdorff(ca, cb)
        worst_ratio = max(worst_ratio, distance / bound if bound else 0.0)
        failures += distance > bound
        # tripled coefficients give a different union, which must not pass
        tripled = aux.sample_union(b.with_coefficients(3 * b.coefficients), e, sampler)
        separated += aux.hausdorff(ca, tripled) > aux.resolution_bound(ca, tripled)
    passed = failures == 0 and separated == 50
    return CheckResult('', passed, f'50 twisted pairs over the open range (-0.5, 0.5), '
                                   f'{failures} above the bound, {separated} tripled sums told apart',
                       measured=worst_ratio, threshold=1.0)


@check('swap-pair-same-image')
def check_swap_pair_image():
    f1, f2 = catalog.swap_pair()
    sampler = aux.Sampler(grid=32)
    c1, c2 = aux.sample_image(f1, 0.0, sampler), aux.sample_image(f2, 0.0, sampler)
    distance = aux.hausdorff(c1, c2)
    bound = aux.resolution_bound(c1, c2)

    # F_{f1}(0, x1, x2, x3) = F_{f2}(0, x1, x3, x2) pointwise
    rng = np.random.default_rng(config.seed + 2)
    x = rng.uniform(0, 2 * math.pi, size=(64, 3))
    swapped = aux.permute_coordinates(f2, (0, 2, 1))
    pointwise = float(np.abs(aux.eval_F(f1, 0.0, x) - aux.eval_F(swapped, 0.0, x)).max())

    not_equivalent = not check_equivalence(f1, f2).is_equivalent
    passed = distance <= bound and pointwise <= 1e-12 and not_equivalent
    return CheckResult('', passed, f'not equivalent: {not_equivalent}, coordinate swap gap {pointwise:.1e}',
                       measured=distance, threshold=bound)


@check('diagonal-identity')
def check_diagonal_identity():
    rng = np.random.default_rng(config.seed + 3)
    worst = 0.0
    for _ in range(1000):
        f = random_sum(rng)
        sigma = float(rng.uniform(-1, 1))
        t = float(rng.uniform(-50, 50))
        scale = 1 + f.abs_bound(sigma)
        gap = abs(aux.diagonal_restriction(f, sigma, t) - evaluate(f, complex(sigma, t)))
        worst = max(worst, gap / scale)
    return CheckResult('', worst <= 1e-12, '1000 random (f, sigma, t)', measured=worst, threshold=1e-12)


@check('basis-independence')
def check_refined_basis():
    g = math.log(2)
    coarse = BasisSpec.explicit([g], ['g'])
    fine = BasisSpec.explicit([g / 6], ['g/6'])
    f_g = ExponentialSum.build(coarse, [(1, (2,)), (0.5j, (3,))])
    f_h = ExponentialSum.build(fine, [(1, (12,)), (0.5j, (18,))])
    sampler = aux.Sampler(grid=128)
    distance = aux.check_basis_independence(f_g, f_h, 0.0, sampler)
    spacing = max(aux.nearest_neighbor_spacing(aux.sample_image(f, 0.0, sampler)) for f in (f_g, f_h))
    return CheckResult('', distance <= 2 * spacing, 'exponents 2g, 3g over (g) and over (g/6)',
                       measured=distance, threshold=2 * spacing)


@check('bochner-fejer-limit')
def check_bochner_fejer():
    f1, _ = catalog.swap_pair()
    sigma = 0.0
    ts = np.linspace(0, 50, 100)
    base = evaluate(f1, sigma + 1j * ts)
    errors, bounds = [], []
    for n in (2, 4, 8, 16):
        degrees = (n, n, n)
        p = bochner_fejer(f1, degrees)
        errors.append(float(np.abs(evaluate(p, sigma + 1j * ts) - base).max()))
        bounds.append(f1.abs_bound(sigma) * float((1 - fejer_factors(f1, degrees)).max()))
    decreasing = all(x > y for x, y in zip(errors, errors[1:]))
    within = all(e <= b + 1e-12 for e, b in zip(errors, bounds))
    detail = ', '.join(f'n={n}: {e:.3f}' for n, e in zip((2, 4, 8, 16), errors))
    return CheckResult('', decreasing and within, detail, measured=errors[-1], threshold=bounds[-1])


def _small_kernel_vectors(r: np.ndarray, bound: int = 2) -> np.ndarray:
    j = r.shape[0]
    candidates = np.array(list(itertools.product(range(-bound, bound + 1), repeat=j)), dtype=np.int64)
    hits = candidates[~(candidates @ r).any(axis=1)]
    return hits[hits.any(axis=1)]


@check('exact-integer-layer')
def check_integer_layer():
    rng = np.random.default_rng(config.seed + 4)
    problems = []
    worst = 0.0
    for trial in range(500):
        j, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        r = rng.integers(-2, 3, size=(j, k))
        rows = [ExponentVector(tuple(int(c) for c in row)) for row in r]

        kernel = left_kernel(rows)
        rank = sympy.Matrix(r.tolist()).rank()
        if any(any(sum(m[i] * rows[i].coords[c] for i in range(j)) for c in range(k)) for m in kernel):
            problems.append(f'trial {trial}: kernel vector with m.R != 0')
        if len(kernel) != j - rank:
            problems.append(f'trial {trial}: kernel of size {len(kernel)}, expected {j - rank}')
        if kernel:
            lattice = np.array(kernel, dtype=object)
            for m in _small_kernel_vectors(r):
                try:
                    lattice_coordinates(lattice, [int(x) for x in m])
                except ArithmeticError:
                    problems.append(f'trial {trial}: relation {tuple(m)} missed')
        elif _small_kernel_vectors(r).size:
            problems.append(f'trial {trial}: relations exist but none returned')

        # integralize on distinct rational rows over log primes
        dens = rng.integers(1, 5, size=(j, k))
        rational = sorted({tuple(Fraction(int(a), int(d)) for a, d in zip(row, drow))
                           for row, drow in zip(r, dens)})
        basis = BasisSpec.log_primes(PRIMES[:k])
        new_basis, vectors = integralize(RationalMatrix(tuple(rational)), basis)
        for row, v in zip(rational, vectors):
            want = math.fsum(float(q) * g for q, g in zip(row, basis.values))
            got = resolve_exponent(v, new_basis)
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    passed = not problems and worst <= 1e-12
    detail = problems[0] if problems else '500 random matrices'
    return CheckResult('', passed, detail, measured=worst, threshold=1e-12)


@check('closure-stability')
def check_closure_stability():
    f1, _ = catalog.swap_pair()
    report = aux.closure_stability(f1, aux.SigmaRange(-1.0, 0.0, 5, closed=True), aux.Sampler(grid=16))
    return CheckResult('', report.stable, f'{report.coarse_points} against {report.fine_points} points',
                       measured=report.distance, threshold=report.bound)


def run_checks(names: Optional[List[str]] = None) -> Report:
    names = list(CHECKS) if names is None else names
    return Report([CHECKS[name]() for name in names])
