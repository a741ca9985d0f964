"""The whole verification suite, as `bohreq verify-examples` runs it."""

import json

import pytest

from bohreq.config import Config
from bohreq.verify import CHECKS, run_checks, validate_report


@pytest.fixture(scope='module')
def report():
    Config().reset()
    return run_checks()


def test_every_check_runs(report):
    assert [c.name for c in report.checks] == list(CHECKS)


@pytest.mark.parametrize('name', list(CHECKS))
def test_check_passes(report, name):
    result = next(c for c in report.checks if c.name == name)
    assert result.passed, f'{name}: {result.detail} (measured {result.measured}, limit {result.threshold})'


def test_report_is_valid_json(report):
    doc = json.loads(report.to_json())
    validate_report(doc)
    assert doc['passed'] is True


def test_text_report(report):
    text = report.to_text()
    assert text.count('PASSED') == len(CHECKS)
    assert text.endswith('all checks passed')
