import math

import pytest

from ratcheb.errors import IntegrityError
from ratcheb.extension import (
    GapBehavior,
    band_measure_check,
    bernstein_walsh_check,
    n_extension,
    representation_check,
    sup_norm,
)
from ratcheb.geometry import INF, CompactSet, PoleDivisor
from ratcheb.rational import RationalFn
from ratcheb.solver import Problem, solve


def _quadratic(c0, c2):
    return RationalFn.from_parts(PoleDivisor({INF: 2}), c0, {INF: [0.0, c2]})


def test_gap_behavior_tags():
    assert GapBehavior.ONE_SIDED.tag == "one-sided"
    assert [b.tag for b in GapBehavior] == ["unchanged", "one-sided", "internal", "closed"]


def test_chebyshev_polynomial_bands(t3, interval):
    bands = n_extension(t3, interval)
    assert bands.open_band_count == 3
    assert bands.degree == 3
    assert bands.plus_minus_points == 6
    assert bands.behaviors() == ["unchanged"]
    assert bands.covers_base()
    assert all(bands.monotone_on_bands())
    assert bands.extension.intervals[0] == pytest.approx((-1.0, 1.0), abs=1e-10)


def test_closed_gap():
    E = CompactSet.from_literal("[-1,-0.5];[0.5,1]")
    bands = n_extension(_quadratic(-1.0, 2.0), E)
    assert bands.behaviors() == ["closed", "unchanged"]
    assert bands.open_band_count == 2
    assert len(bands.extension.intervals) == 1


def test_one_sided_extensions():
    E = CompactSet.from_literal("[-1.2,-0.7];[0.5,1]")
    bands = n_extension(_quadratic(-1.5, 2.0), E)
    first, second = bands.classifications
    assert first.behavior is GapBehavior.ONE_SIDED and first.side == "left"
    assert second.behavior is GapBehavior.ONE_SIDED and second.side == "left"
    edge = math.sqrt(1.25)
    assert bands.extension.intervals[0] == pytest.approx((-edge, -0.5), abs=1e-9)
    assert bands.extension.intervals[1] == pytest.approx((0.5, edge), abs=1e-9)
    assert first.segments[0] == pytest.approx((-0.7, -0.5), abs=1e-9)


def test_extension_to_dict(t3, interval):
    data = n_extension(t3, interval).to_dict()
    assert data["open_bands"] == 3
    assert data["gaps"][0]["behavior"] == "unchanged"
    assert data["gaps"][0]["side"] is None


def test_function_above_one_everywhere(interval):
    with pytest.raises(IntegrityError):
        n_extension(_quadratic(2.0, 1.0), interval)


def test_constant_function(interval):
    with pytest.raises(IntegrityError):
        n_extension(RationalFn.constant(0.5, PoleDivisor({INF: 1})), interval)


def test_band_measures_of_single_pole(single_pole, interval, cache):
    bands = n_extension(single_pole, interval)
    assert bands.behaviors() == ["unchanged"]
    assert band_measure_check(single_pole, bands, cache) == pytest.approx([1.0], abs=1e-8)


def test_representation_of_single_pole(single_pole, interval, cache):
    bands = n_extension(single_pole, interval)
    report = representation_check(single_pole, bands, [3.0, -4.0, 1.5j, 0.2], cache)
    assert report.rows[0][1] == pytest.approx(5.0)
    assert report.rows[0][2] == pytest.approx(5.0, rel=1e-8)
    assert len(report.rows) == 2
    assert report.max_deviation < 1e-8
    assert report.worst_margin >= 0.0
    assert report.passed


def test_sup_norm(t3, interval, single_pole):
    assert sup_norm(t3, interval) == pytest.approx(1.0, abs=1e-12)
    assert sup_norm(single_pole, CompactSet([(-1.0, 0.0)])) == pytest.approx(1.0, abs=1e-12)


def test_bernstein_walsh_for_chebyshev_polynomial(t3, interval, cache):
    report = bernstein_walsh_check(t3, interval, [2.0, 1.5j, -3.0 + 0.5j], cache)
    assert report.rows[0][3] == pytest.approx(0.0, abs=1e-8)
    assert report.worst_exp_margin > 0.0
    assert report.passed


def test_bernstein_walsh_skips_poles(single_pole, interval, cache):
    report = bernstein_walsh_check(single_pole, interval, [2.0, 3.0], cache)
    assert len(report.rows) == 1


def test_extension_of_extremal_function(two_intervals, cache):
    sol = solve(Problem(two_intervals, {0.0: 1, INF: 2}, INF))
    bands = n_extension(sol.F, two_intervals)
    assert bands.open_band_count == bands.degree
    assert bands.covers_base()
    assert band_measure_check(sol.F, bands, cache) == pytest.approx([1.0] * bands.open_band_count, abs=1e-6)
    assert bands.classifications[-1].behavior is GapBehavior.UNCHANGED
