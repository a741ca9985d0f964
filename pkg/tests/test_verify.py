import json
import math

import jsonschema
import numpy as np
import pytest

from bohreq import catalog, verify
from bohreq.equivalence import check_equivalence
from bohreq.exponents import InvalidInputError
from bohreq.report import box, render_table, status_text, strip_color
from bohreq.sums import evaluate
from bohreq.verify import CHECKS, CheckResult, Report, run_checks


class TestRenderTable:

    def test_layout(self):
        lines = render_table(('a', 'bb'), [('xyz', '1')]).splitlines()
        assert lines[0] == '┌─────┬────┐'
        assert lines[1] == '│  a  │ bb │'
        assert lines[2] == '├─────┼────┤'
        assert lines[3] == '│ xyz │ 1  │'
        assert lines[4] == '└─────┴────┘'

    def test_color_does_not_count(self):
        plain = render_table(('s',), [(status_text(True),)])
        colored = render_table(('s',), [(status_text(True, color=True),)])
        assert strip_color(colored) == plain
        assert '\033[92m' in colored

    def test_ragged_rows(self):
        with pytest.raises(ValueError):
            render_table(('a', 'b'), [('x',)])

    def test_box(self):
        assert box(up=1, down=1, left=1, right=1) == '┼'
        with pytest.raises(KeyError):
            box(up=1)


class TestReport:

    def test_json_and_text(self):
        report = Report([CheckResult('one', True, 'fine', 0.5, 1e-13, 1e-12),
                         CheckResult('two', False, 'broken', 0.1)])
        assert not report.passed
        doc = json.loads(report.to_json())
        verify.validate_report(doc)
        assert doc['checks'][1]['measured'] is None
        text = report.to_text()
        assert '1e-13 / 1e-12' in text
        assert text.endswith('1 of 2 checks failed')

    def test_schema_rejects(self):
        doc = Report([CheckResult('one', True, 'fine')]).to_dict()
        doc['checks'][0]['extra'] = 1
        with pytest.raises(jsonschema.ValidationError):
            verify.validate_report(doc)

    def test_all_passed(self):
        assert Report([CheckResult('a', True, '')]).to_text().endswith('all checks passed')


class TestRandomFamilies:

    def test_random_sum_is_seeded(self):
        a = verify.random_sum(np.random.default_rng(4))
        b = verify.random_sum(np.random.default_rng(4))
        assert a == b

    def test_random_sum_shape(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            f = verify.random_sum(rng, max_dim=2, max_terms=4, max_coord=1)
            assert 1 <= f.dimension <= 2
            assert 1 <= len(f) <= 4
            assert all(0.1 - 1e-12 <= abs(c) <= 3 + 1e-12 for c in f.coefficients)
            assert all(max(map(abs, t.r.coords)) <= 1 for t in f.terms)


class TestCatalog:

    def test_swap_pair_at_zero(self):
        f1, f2 = catalog.swap_pair()
        assert evaluate(f1, 0) == pytest.approx(4)
        assert evaluate(f2, 0) == pytest.approx(4)
        assert evaluate(f1, 1) == pytest.approx(15)
        assert evaluate(f2, 1) == pytest.approx(13)

    def test_dirichlet_polynomial(self):
        f = catalog.dirichlet_polynomial({1: 1, 6: 2j, 4: -1})
        assert f.basis.primes == (2, 3)
        s = 0.3 + 2j
        assert evaluate(f, s) == pytest.approx(1 + 2j * 6 ** -s - 4 ** -s)

    def test_constant_only(self):
        f = catalog.dirichlet_polynomial({1: 3})
        assert f.dimension == 1
        assert evaluate(f, 5 - 1j) == pytest.approx(3)

    def test_zeta_partial_sum(self):
        f = catalog.zeta_partial_sum(10)
        assert f.basis.primes == (2, 3, 5, 7)
        s = 2 + 0.5j
        assert evaluate(f, s) == pytest.approx(sum(k ** -s for k in range(1, 11)))

    def test_zeta_twists_are_equivalent(self):
        f = catalog.zeta_partial_sum(6)
        g = catalog.dirichlet_polynomial({1: 1, 2: -1, 3: 1j, 4: 1, 5: 1, 6: -1j})
        # x = (pi, -pi/2, 0): 2 -> -1, 3 -> i, 4 -> 1, 6 -> -i
        verdict = check_equivalence(f, g)
        assert verdict.is_equivalent

    @pytest.mark.parametrize('bad', [{}, {0: 1}, {2.0: 1}, {True: 1}])
    def test_dirichlet_rejects(self, bad):
        with pytest.raises(InvalidInputError):
            catalog.dirichlet_polynomial(bad)


class TestChecks:

    def test_registry(self):
        assert list(CHECKS) == [
            'swap-pair-not-equivalent', 'witness-round-trip', 'phase-obstruction',
            'disk-containment', 'disk-fill', 'swap-pair-same-union', 'twisted-unions',
            'swap-pair-same-image', 'diagonal-identity', 'basis-independence',
            'bochner-fejer-limit', 'exact-integer-layer', 'closure-stability',
        ]

    @pytest.mark.parametrize('name', ['swap-pair-not-equivalent', 'phase-obstruction',
                                      'disk-containment', 'basis-independence',
                                      'bochner-fejer-limit', 'closure-stability'])
    def test_quick_checks_pass(self, name):
        result = CHECKS[name]()
        assert result.name == name
        assert result.passed, result.detail
        assert result.elapsed >= 0

    def test_disk_targets(self):
        targets = verify.disk_targets()
        assert targets.size == 9 * 16
        assert np.abs(targets).max() == pytest.approx(3.9)

    def test_unknown_check(self):
        with pytest.raises(KeyError):
            run_checks(['no-such-check'])


def test_seed_changes_random_checks(fresh_config):
    fresh_config.seed = 12
    result = CHECKS['witness-round-trip']()
    assert result.passed
    assert math.isfinite(result.measured)
