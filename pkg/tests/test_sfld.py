import json

import numpy as np
import pytest

from se2fft import sfld
from se2fft.ffs import FourierCoefficientSet
from se2fft.grid import SampledField


def test_round_trip(tmp_path):
    rng = np.random.default_rng(30)
    F = SampledField((3, 4, 5), rng.normal(size=60) + 1j * rng.normal(size=60))
    p = tmp_path / "f.sfld"
    sfld.write_field(p, F)
    G = sfld.read_field(p)
    assert G.dims == (3, 4, 5)
    assert np.array_equal(G.values, F.values)


def test_byte_layout(tmp_path):
    F = SampledField((1, 1, 2), [1 + 2j, -3.5 + 0j])
    p = tmp_path / "f.sfld"
    sfld.write_field(p, F)
    raw = p.read_bytes()
    head, body = raw.split(b"\n", 1)
    assert json.loads(head) == {
        "magic": "sfld1", "dims": [1, 1, 2], "layout": "i-major-l-fastest", "dtype": "c128-le",
    }
    assert body == np.array([1.0, 2.0, -3.5, 0.0], dtype="<f8").tobytes()


def test_rejects_bad_files(tmp_path):
    good = sfld.encode(np.zeros(8), (2, 2, 2))
    with pytest.raises(sfld.SfldFormatError):
        sfld.decode(good.replace(b"sfld1", b"sfld2"))
    with pytest.raises(sfld.SfldFormatError):
        sfld.decode(good[:-1])
    with pytest.raises(sfld.SfldFormatError):
        sfld.decode(good + b"\0" * 16)
    with pytest.raises(sfld.SfldFormatError):
        sfld.decode(b"no header")


def test_coefficient_files(tmp_path):
    rng = np.random.default_rng(31)
    C = FourierCoefficientSet((1, 2, 1), rng.normal(size=45) + 0j)
    p = tmp_path / "c.sfld"
    sfld.write_coeffs(p, C)
    head = json.loads(p.read_bytes().split(b"\n", 1)[0])
    assert head["kind"] == "coeffs" and head["K"] == [1, 2, 1] and head["dims"] == [3, 5, 3]
    D = sfld.read_coeffs(p)
    assert np.array_equal(D.cube, C.cube)
    sfld.write_field(p, SampledField((3, 5, 3), np.zeros(45)))
    with pytest.raises(sfld.SfldFormatError):
        sfld.read_coeffs(p)


def test_atomic_write_leaves_no_temp(tmp_path):
    p = tmp_path / "x.bin"
    sfld.atomic_write_bytes(p, b"abc")
    sfld.atomic_write_bytes(p, b"def")
    assert p.read_bytes() == b"def"
    assert [q.name for q in tmp_path.iterdir()] == ["x.bin"]
