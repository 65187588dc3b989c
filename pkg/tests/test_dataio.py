import io

import numpy as np
import pytest

from trajsimp import Trajectory, emit_csv, gen_wiener, parse_csv
from trajsimp.errors import MalformedRow, NonMonotonicTime
from trajsimp.dataio import plt_to_rows


def test_parse_simple():
    res = parse_csv("0,1\n1,2\n", 1)
    assert len(res.trajectories) == 1
    tr = res.trajectories[0]
    assert tr.t.tolist() == [0.0, 1.0] and tr.xs.tolist() == [[1.0], [2.0]]


def test_blank_line_separates():
    res = parse_csv("0,1,1\n1,2,2\n\n0,5,5\n3,6,6\n")
    assert [t.n for t in res.trajectories] == [2, 2]


def test_sanitize_drops_duplicate_time():
    res = parse_csv("0,1\n1,2\n1,3\n2,4\n", 1, sanitize=True)
    assert res.dropped == 1
    assert res.trajectories[0].t.tolist() == [0.0, 1.0, 2.0]


def test_non_monotonic_error_reports_line():
    with pytest.raises(NonMonotonicTime) as e:
        parse_csv("0,1\n1,2\n0.5,3\n", 1)
    assert e.value.line == 3


@pytest.mark.parametrize("text, line", [("0,1\n1\n", 2), ("0,a\n", 1), ("0,1,2\n", 1), ("0,inf\n", 1)])
def test_malformed_rows(text, line):
    with pytest.raises(MalformedRow) as e:
        parse_csv(text, 1)
    assert e.value.line == line


def test_emit_parse_round_trip():
    trs = [gen_wiener(3, 1000, 0.5, 1), gen_wiener(3, 10, 1.0, 2)]
    text = emit_csv(trs)
    back = parse_csv(io.StringIO(text), 3).trajectories
    assert all(a.bit_identical(b) for a, b in zip(trs, back))
    assert emit_csv(back) == text


def test_wiener_deterministic():
    assert gen_wiener(2, 500, 1.0, 42).bit_identical(gen_wiener(2, 500, 1.0, 42))
    assert not gen_wiener(2, 500, 1.0, 42).bit_identical(gen_wiener(2, 500, 1.0, 43))


def test_wiener_time_axis():
    tr = gen_wiener(1, 5, 0.25, 0)
    assert tr.t.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert tr.xs[0].tolist() == [0.0]


def test_wiener_increment_statistics():
    n, dt = 100_000, 0.5
    inc = np.diff(gen_wiener(1, n, dt, 7).xs[:, 0])
    sigma = np.sqrt(dt)
    assert abs(inc.mean()) < 4 * sigma / np.sqrt(n)
    assert abs(inc.var() / dt - 1) < 0.05


def test_wiener_dimensions_uncorrelated():
    inc = np.diff(gen_wiener(3, 100_000, 1.0, 8).xs, axis=0)
    rho = np.corrcoef(inc.T)
    assert np.all(np.abs(rho[np.triu_indices(3, 1)]) < 0.02)


def test_plt_conversion():
    lines = [
        "Geolife trajectory", "WGS 84", "Altitude is in Feet", "Reserved 3",
        "0,2,255,My Track,0,0,2,8421376", "0",
        "39.9,116.3,0,100,39744.0,2008-10-23,00:00:00",
        "39.9009,116.3,0,200,39744.0001,2008-10-23,00:00:08",
    ]
    rows = plt_to_rows(lines)
    assert len(rows) == 2
    assert rows[0][1:] == [0.0, 0.0, 100 * 0.3048]
    assert rows[1][2] == pytest.approx(100.0, rel=0.01)  # 0.0009 deg latitude ~ 100 m
    assert rows[1][0] - rows[0][0] == pytest.approx(8.64)
    Trajectory([r[0] for r in rows], [r[1:] for r in rows])
