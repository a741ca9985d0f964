import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from bohreq.cloud import (CSV_HEADER, EmptyCloudError, ImageCloud, csv_text,
                          infer_format, read_csv)


def test_scalar_sigma_is_broadcast():
    cloud = ImageCloud([1, 2j, 3], 0.5)
    assert list(cloud.sigmas) == [0.5, 0.5, 0.5]
    assert cloud.xy.shape == (3, 2)


def test_length_mismatch():
    with pytest.raises(ValueError):
        ImageCloud([1, 2], [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        ImageCloud([1, 2], 0.0, ts=[1.0])


def test_max_modulus():
    assert ImageCloud([3 + 4j, 1], 0).max_modulus() == 5
    with pytest.raises(EmptyCloudError):
        ImageCloud(np.zeros(0, complex), np.zeros(0)).max_modulus()


def test_concat():
    a = ImageCloud([1], 0.0, ts=[0.0])
    b = ImageCloud([2, 3], 1.0, ts=[1.0, 2.0])
    c = ImageCloud.concat([a, b], {'k': 1})
    assert list(c.points) == [1, 2, 3]
    assert list(c.sigma_values()) == [0.0, 1.0]
    assert list(c.ts) == [0.0, 1.0, 2.0]
    assert ImageCloud.concat([a, ImageCloud([5], 0.0)]).ts is None


def test_csv_round_trip_exact():
    points = np.array([0.1 + 0.2j, -1 / 3 + 1e-17j, 2.5e300 - 7j])
    cloud = ImageCloud(points, [0.0, -0.25, 1 / 7], ts=[0.0, 1 / 3, -2.0])
    text = csv_text(cloud)
    assert text.splitlines()[0] == ','.join(CSV_HEADER)
    back = read_csv(io.StringIO(text))
    assert np.array_equal(back.points, cloud.points)
    assert np.array_equal(back.sigmas, cloud.sigmas)
    assert np.array_equal(back.ts, cloud.ts)


def test_csv_torus_rows_have_empty_t():
    text = csv_text(ImageCloud([1 + 1j], 0.0))
    assert text.splitlines()[1] == '0.0,,1.0,1.0'
    assert read_csv(io.StringIO(text)).ts is None


def test_csv_bad_header():
    with pytest.raises(ValueError):
        read_csv(io.StringIO('a,b\n1,2\n'))


def test_infer_format():
    assert infer_format('out.SVG') == 'svg'
    assert infer_format('out.json') == 'json'
    assert infer_format('out.dat') == 'csv'
    assert infer_format(None) == 'csv'


def test_write_json(tmp_path):
    path = tmp_path / 'c.json'
    ImageCloud([1j], 0.5, {'sampler': 'x'}).write(str(path))
    doc = json.loads(path.read_text())
    assert doc == {'meta': {'sampler': 'x'}, 'sigma': [0.5], 't': None, 're': [0.0], 'im': [1.0]}


def test_svg_is_well_formed(tmp_path):
    path = tmp_path / 'c.svg'
    angles = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    ImageCloud(np.exp(1j * angles), 0.0).write(str(path))
    root = ET.parse(str(path)).getroot()
    assert root.tag.endswith('svg')


def test_svg_thinning(fresh_config):
    fresh_config.svg_max_points = 10
    out = io.StringIO()
    ImageCloud(np.arange(100) * 1j, 0.0).to_svg(out)
    assert out.getvalue().lstrip().startswith('<?xml')
