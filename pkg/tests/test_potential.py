import math

import pytest

from ratcheb.errors import ArgumentError, DomainError
from ratcheb.geometry import INF, CompactSet, PoleDivisor
from ratcheb.potential import (
    HarmonicMeasure,
    build_green,
    critical_points,
    green_eval,
    green_sum,
    harmonic_measure,
    koosis_check,
    monotonicity_check,
)


def test_green_of_interval_with_pole_at_infinity(interval):
    model = build_green(interval, INF)
    assert green_eval(model, 2.0) == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-10)
    assert model.eval(2.0j) == pytest.approx(math.log(2 + math.sqrt(5)), abs=1e-10)
    assert model.eval(0.3) == pytest.approx(0.0, abs=1e-12)
    assert math.isinf(model.eval(INF))


def test_green_of_interval_with_finite_pole(interval):
    model = build_green(interval, 2.0)
    assert model.eval(3.0) == pytest.approx(math.log(5 + 2 * math.sqrt(6)), abs=1e-9)
    assert math.isinf(model.eval(2.0))


def test_green_symmetry(two_intervals):
    g32 = build_green(two_intervals, 2.5).eval(3.0)
    g23 = build_green(two_intervals, 3.0).eval(2.5)
    assert g32 == pytest.approx(g23, rel=1e-8)


def test_green_rejects_pole_on_set(interval):
    with pytest.raises(DomainError):
        build_green(interval, 0.5)
    with pytest.raises(DomainError):
        build_green(interval, 1.0)


def test_green_of_unbounded_set():
    E = CompactSet.from_literal("[-inf,-1];[1,inf]")
    model = build_green(E, 0.0)
    assert model.eval(0.5) == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-9)
    assert model.eval(5.0) == pytest.approx(0.0, abs=1e-12)


def test_harmonic_measure_of_interval(interval):
    hm = HarmonicMeasure(build_green(interval, INF))
    assert hm.measure([(0.5, 1.0)]) == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert hm.total() == pytest.approx(1.0, abs=1e-10)
    assert hm.cdf(0.0) == pytest.approx(0.5, abs=1e-10)
    assert hm.density(0.0)[0] == pytest.approx(1.0 / math.pi)


def test_harmonic_measure_of_symmetric_pair():
    model = build_green(CompactSet([(-2, -1), (1, 2)]), INF)
    assert harmonic_measure(model, (1.0, 2.0)) == pytest.approx(0.5, abs=1e-9)
    assert harmonic_measure(model, [(-2.0, -1.0), (1.0, 2.0)]) == pytest.approx(1.0, abs=1e-9)
    assert critical_points(model) == pytest.approx([0.0], abs=1e-10)


def test_harmonic_measure_rejects_piece_outside_set(interval):
    model = build_green(interval, INF)
    with pytest.raises(ArgumentError):
        harmonic_measure(model, (0.5, 1.5))


def test_interval_has_no_critical_points(interval):
    assert critical_points(build_green(interval, INF)) == []


def test_cache_reuses_models(interval, cache):
    first = cache.get(interval, INF)
    second = cache.get(interval, "inf")
    assert first is second
    assert (cache.hits, cache.misses, len(cache)) == (1, 1, 1)
    cache.clear()
    assert len(cache) == 0


def test_green_sum_mixes_weights(interval, cache):
    expected = 0.5 * math.log(3 + math.sqrt(8)) + 0.5 * math.log(5 + 2 * math.sqrt(6))
    value = green_sum(interval, {INF: 0.5, 2.0: 0.5}, 3.0, cache)
    assert value == pytest.approx(expected, abs=1e-9)
    assert green_sum(interval, [(INF, 0.5), (2.0, 0.5)], 3.0, cache) == pytest.approx(value)
    assert green_sum(interval, PoleDivisor({INF: 1}), 3.0, cache) == pytest.approx(math.log(3 + math.sqrt(8)))


def test_green_sum_rejects_atom_on_set(interval, cache):
    with pytest.raises(DomainError):
        green_sum(interval, {0.0: 1.0}, 3.0, cache)


def test_koosis_identity(interval):
    E2 = CompactSet([(-1, 1), (2, 3)])
    assert koosis_check(interval, E2, INF, 5.0) <= 1e-6
    assert koosis_check(interval, interval, INF, 5.0) == 0.0


@pytest.mark.parametrize(
    "E1, E2, c, z",
    [
        ("[-1,1]", "[-1,1];[2,3]", INF, 5.0),
        ("[-1,-0.5];[0.5,1]", "[-1,1]", INF, 2.0),
        ("[-1,1]", "[-1,2]", 4.0, -3.0),
        ("[-1,1]", "[-1,1];[2,3]", INF, 1.5j),
    ],
)
def test_koosis_identity_on_fixed_cases(E1, E2, c, z):
    assert koosis_check(CompactSet.from_literal(E1), CompactSet.from_literal(E2), c, z) <= 1e-6


def test_koosis_requires_containment(interval):
    with pytest.raises(ArgumentError):
        koosis_check(CompactSet([(0, 2)]), interval, INF, 5.0)


def test_green_decreases_as_set_grows(interval):
    E2 = CompactSet([(-1, 1), (2, 3)])
    assert monotonicity_check(interval, E2, INF, [5.0, 1.5j, -4.0]) >= 0.0
