import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from bohreq.exponents import (BasisKind, BasisSpec, DimensionError,
                              DuplicateExponentError, ExponentVector,
                              InvalidInputError, RationalMatrix,
                              basis_from_log_integers, hermite_form,
                              integralize, lattice_coordinates, left_kernel,
                              rank_of, resolve_exponent)


class TestBasisSpec:

    def test_explicit_default_labels(self):
        b = BasisSpec.explicit([1.0, math.sqrt(2)])
        assert b.labels == ('g1', 'g2')
        assert b.dimension == 2
        assert b.kind is BasisKind.EXPLICIT

    def test_log_primes_sorted(self):
        b = BasisSpec.log_primes([5, 2, 3])
        assert b.primes == (2, 3, 5)
        assert b.labels == ('log2', 'log3', 'log5')
        assert b.values[0] == math.log(2)

    @pytest.mark.parametrize('values', [[], [1.0, 1.0], [0.0], [math.inf]])
    def test_rejects_bad_values(self, values):
        with pytest.raises(InvalidInputError):
            BasisSpec.explicit(values)

    def test_label_count_must_match(self):
        with pytest.raises(InvalidInputError):
            BasisSpec.explicit([1.0, 2.5], ['a'])

    def test_suspect_relations(self):
        g = math.log(2)
        assert BasisSpec.explicit([2 * g, 3 * g]).suspect_relations()[0][:2] == (0, 1)
        assert BasisSpec.explicit([1.0, math.sqrt(2)]).suspect_relations() == []
        assert BasisSpec.log_primes([2, 3]).suspect_relations() == []


class TestExponentVector:

    def test_integers_only(self):
        assert ExponentVector((1, Fraction(4, 2))).coords == (1, 2)
        with pytest.raises(InvalidInputError):
            ExponentVector((0.5,))
        with pytest.raises(InvalidInputError):
            ExponentVector((True,))

    def test_support_and_norm(self):
        v = ExponentVector((1, -2, 0, 0))
        assert v.support == 2
        assert v.norm1 == 3
        assert ExponentVector((0, 0)).support == 0

    def test_padded(self):
        assert ExponentVector((1,)).padded(3).coords == (1, 0, 0)
        assert ExponentVector((1, 0, 0)).padded(1).coords == (1,)
        with pytest.raises(DimensionError):
            ExponentVector((0, 1)).padded(1)


class TestResolveExponent:

    def test_examples(self):
        b = BasisSpec.log_primes([2, 3, 5])
        assert resolve_exponent(ExponentVector((1, 0, 0)), b) == pytest.approx(math.log(2))
        assert resolve_exponent(ExponentVector((0, 0, 0)), b) == 0
        b2 = BasisSpec.log_primes([2, 3])
        assert resolve_exponent(ExponentVector((1, 1)), b2) == pytest.approx(math.log(6), rel=1e-15)

    def test_short_vector_allowed(self):
        b = BasisSpec.log_primes([2, 3])
        assert resolve_exponent(ExponentVector((2,)), b) == pytest.approx(math.log(4))

    def test_overflow(self):
        with pytest.raises(DimensionError):
            resolve_exponent(ExponentVector((1, 0, 0)), BasisSpec.log_primes([2, 3]))


class TestBasisFromLogIntegers:

    def test_swap_pair(self):
        b, vs = basis_from_log_integers([2, 3, 5])
        assert b.primes == (2, 3, 5)
        assert [v.coords for v in vs] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def test_composites(self):
        b, vs = basis_from_log_integers([6])
        assert b.primes == (2, 3) and vs[0].coords == (1, 1)
        b, vs = basis_from_log_integers([4, 8])
        assert b.primes == (2,) and [v.coords for v in vs] == [(2,), (3,)]

    @pytest.mark.parametrize('n', [2, 12, 360, 1001, 9973, 2 ** 20])
    def test_exp_round_trip(self, n):
        b, (v,) = basis_from_log_integers([n])
        assert math.exp(resolve_exponent(v, b)) == pytest.approx(n, rel=1e-12)

    @pytest.mark.parametrize('bad', [[1], [0], [-4], [2.5], [True], []])
    def test_rejects(self, bad):
        with pytest.raises(InvalidInputError):
            basis_from_log_integers(bad)


class TestHermiteForm:

    @pytest.mark.parametrize('m', [
        [[1, 0], [0, 1], [1, 1]],
        [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
        [[3], [5], [7]],
        [[0, 0], [0, 0]],
        [[4, 6]],
    ])
    def test_transform(self, m):
        h, u = hermite_form(m)
        assert (u.dot(np.array(m, dtype=object)) == h).all()
        assert abs(sympy.Matrix(u.tolist()).det()) == 1
        r = rank_of(h)
        assert r == sympy.Matrix(m).rank()
        assert not h[r:].any()
        for i, row in enumerate(h[:r]):
            pivot = next(k for k, x in enumerate(row) if x != 0)
            assert row[pivot] > 0
            for above in h[:i]:
                assert 0 <= above[pivot] < row[pivot]

    def test_lattice_coordinates(self):
        h, _ = hermite_form([[2, 0], [0, 3]])
        assert lattice_coordinates(h, [4, -3]) == (2, -1)
        with pytest.raises(ArithmeticError):
            lattice_coordinates(h, [1, 0])


class TestIntegralize:

    def test_thirds_and_halves(self):
        b = BasisSpec.explicit([1.7], ['g'])
        nb, vs = integralize(RationalMatrix(((Fraction(1, 2),), (Fraction(1, 3),))), b)
        assert nb.values[0] == pytest.approx(1.7 / 6)
        assert nb.labels == ('g/6',)
        assert [v.coords for v in vs] == [(3,), (2,)]

    def test_half_and_one(self):
        b = BasisSpec.explicit([1.7], ['g'])
        nb, vs = integralize(RationalMatrix(((Fraction(1, 2),), (Fraction(1),))), b)
        assert nb.values[0] == pytest.approx(1.7 / 2)
        assert [v.coords for v in vs] == [(1,), (2,)]

    def test_already_integral(self):
        b = BasisSpec.log_primes([2, 3])
        nb, vs = integralize(RationalMatrix(((1, 0), (0, 1))), b)
        assert nb == b
        assert [v.coords for v in vs] == [(1, 0), (0, 1)]

    def test_duplicate_rows(self):
        b = BasisSpec.explicit([1.0])
        with pytest.raises(DuplicateExponentError):
            integralize(RationalMatrix(((0,), (0,))), b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            integralize(RationalMatrix(((1, 2),)), BasisSpec.explicit([1.0]))

    def test_round_trip_and_idempotence(self):
        rng = np.random.default_rng(7)
        b = BasisSpec.log_primes([2, 3, 5])
        for _ in range(100):
            rows = {tuple(Fraction(int(a), int(d)) for a, d in zip(rng.integers(-3, 4, 3), rng.integers(1, 5, 3)))
                    for _ in range(int(rng.integers(1, 5)))}
            rows = sorted(rows)
            nb, vs = integralize(RationalMatrix(tuple(rows)), b)
            for row, v in zip(rows, vs):
                want = math.fsum(float(q) * g for q, g in zip(row, b.values))
                assert resolve_exponent(v, nb) == pytest.approx(want, rel=1e-12, abs=1e-12)
            nb2, vs2 = integralize(RationalMatrix(tuple(v.coords for v in vs)), nb)
            for v, w in zip(vs, vs2):
                assert resolve_exponent(w, nb2) == pytest.approx(resolve_exponent(v, nb), rel=1e-12, abs=1e-12)


def _brute_kernel(rows, bound=2):
    j = len(rows)
    r = np.array([v.coords for v in rows])
    return [m for m in itertools.product(range(-bound, bound + 1), repeat=j)
            if any(m) and not (np.array(m) @ r).any()]


class TestLeftKernel:

    def test_examples(self):
        assert left_kernel([ExponentVector((1, 0)), ExponentVector((0, 1)), ExponentVector((1, 1))]) == [(1, 1, -1)]
        assert left_kernel([ExponentVector(c) for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]) == []
        assert left_kernel([ExponentVector((1,)), ExponentVector((2,))]) == [(2, -1)]

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            left_kernel([])

    def test_pads_short_rows(self):
        assert left_kernel([ExponentVector((1,)), ExponentVector((1, 0))]) == [(1, -1)]

    def test_against_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            j, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            rows = [ExponentVector(tuple(int(c) for c in rng.integers(-2, 3, k))) for _ in range(j)]
            kernel = left_kernel(rows)
            r = np.array([v.coords for v in rows], dtype=object)
            for m in kernel:
                assert not np.array(m, dtype=object).dot(r).any()
            assert len(kernel) == j - sympy.Matrix(r.tolist()).rank()
            if kernel:
                lattice = np.array(kernel, dtype=object)
                for m in _brute_kernel(rows):
                    lattice_coordinates(lattice, m)
