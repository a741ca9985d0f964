"""
Built-in sums used by the verification suite and the tests. Coefficients are
written out here once so every check works from the same numbers.
"""

from typing import Dict, Tuple

from .exponents import InvalidInputError, basis_from_log_integers
from .sums import ExponentialSum, Strip


def swap_pair() -> Tuple[ExponentialSum, ExponentialSum]:
    """
    f1(s) = 2^s + 3^s + 2 * 5^s and f2(s) = 2^s + 2 * 3^s + 5^s over the basis
    (log 2, log 3, log 5), no strip restriction. They are not equivalent but
    share the torus image at sigma = 0.
    """
    basis, (e2, e3, e5) = basis_from_log_integers([2, 3, 5])
    f1 = ExponentialSum.build(basis, [(1, e2), (1, e3), (2, e5)], Strip())
    f2 = ExponentialSum.build(basis, [(1, e2), (2, e3), (1, e5)], Strip())
    return f1, f2


def phase_obstruction_pair() -> Tuple[ExponentialSum, ExponentialSum]:
    """
    A = 2^s + 4^s and B = 2^s + i 4^s over (log 2): x = 0 and 2x = pi / 2
    (mod 2 pi) have no common solution.
    """
    basis, (e2, e4) = basis_from_log_integers([2, 4])
    a = ExponentialSum.build(basis, [(1, e2), (1, e4)])
    b = ExponentialSum.build(basis, [(1, e2), (1j, e4)])
    return a, b


def dirichlet_polynomial(coefficients: Dict[int, complex], strip: Strip = None) -> ExponentialSum:
    """
    sum_n a_n n^{-s} over the basis of logs of the primes dividing some n.
    n = 1 contributes the constant term.
    """
    if not coefficients:
        raise InvalidInputError('a Dirichlet polynomial needs at least one coefficient')
    for n in coefficients:
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidInputError(f'Dirichlet index {n!r} is not a positive integer')
    composite = sorted(n for n in coefficients if n > 1)
    basis, vectors = basis_from_log_integers(composite or [2])
    width = basis.dimension
    terms = [(coefficients[n], tuple(-c for c in v.coords)) for n, v in zip(composite, vectors)]
    if 1 in coefficients:
        terms.append((coefficients[1], (0,) * width))
    return ExponentialSum.build(basis, terms, strip or Strip())


def zeta_partial_sum(n: int) -> ExponentialSum:
    """1 + 2^{-s} + ... + n^{-s}"""
    if n < 1:
        raise InvalidInputError(f'partial sum length must be positive, got {n}')
    return dirichlet_polynomial({k: 1 for k in range(1, n + 1)})
