import math

import pytest

from ratcheb.asymptotics import (
    THREADS_ENV,
    AsymptoticsOptions,
    AsymptoticsRow,
    PoleSequenceSpec,
    band_shrinkage,
    default_workers,
    format_complex,
    generate_divisors,
    run_root_asymptotics,
    szego_widom_modulus,
    zero_measure_compare,
)
from ratcheb.errors import ArgumentError, DomainError
from ratcheb.geometry import INF, CompactSet
from ratcheb.solver import Problem, solve


# ---------------------------------------------------------------------------
# pole sequences
# ---------------------------------------------------------------------------

def test_weighted_rotation():
    spec = PoleSequenceSpec([(2.0, 0.5), (-2.0, 0.5)])
    divisors = generate_divisors(spec, 4)
    assert divisors[0].items() == [(2.0, 1)]
    assert divisors[-1].items() == [(-2.0, 2), (2.0, 2)]
    assert [D.degree for D in divisors] == [1, 2, 3, 4]


def test_weighted_rotation_is_nested():
    spec = PoleSequenceSpec([(INF, 0.75), (3.0, 0.25)])
    divisors = generate_divisors(spec, 8)
    for smaller, larger in zip(divisors, divisors[1:]):
        assert smaller <= larger
    assert divisors[-1].items() == [(3.0, 2), (INF, 6)]


def test_periodic_mode_repeats_atoms():
    spec = PoleSequenceSpec([(2.0, 1 / 3), (2.0, 1 / 3), (-2.0, 1 / 3)], mode="periodic")
    assert spec.period == 3
    assert spec.limit == pytest.approx({2.0: 2 / 3, -2.0: 1 / 3})
    assert generate_divisors(spec, 3)[-1].items() == [(-2.0, 1), (2.0, 2)]


def test_independent_mode():
    spec = PoleSequenceSpec([(2.0, 0.75), (-2.0, 0.25)], mode="independent")
    assert generate_divisors(spec, 4)[-1].items() == [(-2.0, 1), (2.0, 3)]


def test_from_literal_with_fractions():
    spec = PoleSequenceSpec.from_literal("2:2/3, -inf:1/3")
    assert spec.atoms == [(2.0, pytest.approx(2 / 3)), (INF, pytest.approx(1 / 3))]
    assert spec.to_dict()["atoms"][1][0] == "inf"


@pytest.mark.parametrize("literal", ["2", "2:abc", "2:1/0"])
def test_from_literal_rejects_malformed_atoms(literal):
    with pytest.raises(ArgumentError):
        PoleSequenceSpec.from_literal(literal)


@pytest.mark.parametrize(
    "atoms, mode",
    [
        ([(2.0, 0.5), (3.0, 0.4)], "weighted-rotation"),
        ([(2.0, 1.5), (3.0, -0.5)], "weighted-rotation"),
        ([(2.0, 0.5), (2.0, 0.5)], "independent"),
        ([(2.0, 0.25), (3.0, 0.75)], "periodic"),
        ([(2.0, 1.0)], "random"),
        ([], "periodic"),
    ],
)
def test_invalid_pole_sequences(atoms, mode):
    with pytest.raises(ArgumentError):
        PoleSequenceSpec(atoms, mode=mode)


def test_atoms_must_lie_off_the_set(interval):
    with pytest.raises(DomainError):
        PoleSequenceSpec([(0.5, 1.0)]).validate_against(interval)


def test_x_star_sequence():
    spec = PoleSequenceSpec([(INF, 1.0)], x_star=[2.0, 3.0])
    assert spec.x_star_for(2) == 3.0
    with pytest.raises(ArgumentError):
        spec.x_star_for(3)


def test_generate_divisors_needs_positive_n():
    with pytest.raises(ArgumentError):
        generate_divisors(PoleSequenceSpec([(INF, 1.0)]), 0)


# ---------------------------------------------------------------------------
# worker configuration
# ---------------------------------------------------------------------------

def test_default_workers_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_workers() == 3
    options = AsymptoticsOptions()
    assert options.workers() == 3
    options.max_workers = 1
    assert options.workers() == 1


def test_default_workers_without_environment(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert default_workers() >= 1


@pytest.mark.parametrize("raw", ["0", "x", "-2"])
def test_default_workers_rejects_bad_values(monkeypatch, raw):
    monkeypatch.setenv(THREADS_ENV, raw)
    with pytest.raises(ArgumentError):
        default_workers()


def test_format_complex():
    assert format_complex(2.0) == "2.0"
    assert format_complex(2j) == "2.0i"
    assert format_complex(1 - 0.5j) == "1.0-0.5i"


def test_row_columns():
    row = AsymptoticsRow(4, 2.0, 1.0, 1.1, 0.1)
    assert list(row.to_dict())[:8] == list(AsymptoticsRow.COLUMNS)
    assert math.isnan(row.to_dict()["bound"])


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_root_asymptotics_for_chebyshev_polynomials(interval, cache):
    spec = PoleSequenceSpec([(INF, 1.0)])
    report = run_root_asymptotics(interval, spec, [2, 4, 8], [2.0, 2j], cache=cache)
    assert report.complete
    assert len(report.rows) == 6
    errors = [e for _, e in report.errors(2.0)]
    assert errors == sorted(errors, reverse=True)
    assert report.n_error_constant() <= 0.7
    assert not report.bound_violations()
    assert report.rows[0].target == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-9)
    assert report.to_dict()["columns"] == list(AsymptoticsRow.COLUMNS)


def test_root_asymptotics_rejects_points_on_set(interval):
    with pytest.raises(ArgumentError):
        run_root_asymptotics(interval, PoleSequenceSpec([(INF, 1.0)]), [2], [0.5])


@pytest.mark.slow
def test_szego_widom_limit_for_chebyshev_polynomials(interval, cache):
    spec = PoleSequenceSpec([(INF, 1.0)], mode="periodic")
    report = szego_widom_modulus(interval, spec, [2.0], 6, cache=cache)
    assert [r.n for r in report.rows] == [1, 2, 3, 4, 5, 6]
    assert report.rows[-1].target == pytest.approx(-math.log(2.0), abs=1e-12)
    assert report.rows[-1].error < 1e-5
    assert math.isnan(report.rows[0].cauchy_increment)


def test_szego_widom_needs_periodic_sequence(interval):
    with pytest.raises(ArgumentError):
        szego_widom_modulus(interval, PoleSequenceSpec([(INF, 1.0)]), [2.0], 6)


def test_szego_widom_needs_three_terms(interval):
    spec = PoleSequenceSpec([(INF, 0.5), (3.0, 0.5)], mode="periodic")
    with pytest.raises(ArgumentError):
        szego_widom_modulus(interval, spec, [2.0], 4, residue=1)


def test_zero_measure_for_chebyshev_polynomial(interval, cache):
    sol = solve(Problem(interval, {INF: 8}, INF))
    (row,) = zero_measure_compare(interval, {8: sol}, {INF: 1.0}, cache)
    assert row.distance <= 1 / 8 + 1e-6
    assert row.max_gap_mass == 0.0
    assert row.x_star_gap_mass == 0.0


def test_zero_measure_needs_bounded_set():
    E = CompactSet.from_literal("[-inf,-1];[1,inf]")
    with pytest.raises(ArgumentError):
        zero_measure_compare(E, {}, {0.0: 1.0})


def test_band_shrinkage_vanishes_for_chebyshev_polynomial(interval):
    sol = solve(Problem(interval, {INF: 3}, INF))
    ((n, excess),) = band_shrinkage({3: sol}, interval)
    assert n == 3
    assert excess == pytest.approx(0.0, abs=1e-9)


def test_band_shrinkage_of_constant_case():
    E = CompactSet.from_literal("[-2,-1];[0,1]")
    sol = solve(Problem(E, {-0.5: 1}, INF))
    ((_, excess),) = band_shrinkage({1: sol}, E)
    assert math.isnan(excess)


@pytest.mark.slow
def test_root_asymptotics_for_periodic_two_pole_sequence(two_intervals, cache):
    spec = PoleSequenceSpec([(0.2, 0.5), (INF, 0.5)], mode="periodic")
    report = run_root_asymptotics(two_intervals, spec, [10, 20, 40], [2j, 3.0], cache=cache)
    assert report.complete
    assert len(report.rows) == 6
    assert not report.bound_violations()
    for z in (2j, 3.0):
        errors = dict(report.errors(z))
        assert errors[40] < errors[10]
    assert math.isfinite(report.n_error_constant())


@pytest.mark.slow
def test_szego_widom_modulus_for_periodic_two_pole_sequence(two_intervals, cache):
    spec = PoleSequenceSpec([(0.2, 0.5), (INF, 0.5)], mode="periodic")
    report = szego_widom_modulus(two_intervals, spec, [2j], 40, cache=cache)
    assert report.complete
    assert [r.n for r in report.rows] == list(range(2, 41, 2))
    increments = [r.cauchy_increment for r in report.rows[1:]]
    assert increments[-1] < increments[0]
    assert report.rows[-1].error <= 1e-3


@pytest.mark.slow
def test_szego_widom_limit_at_degree_twenty(interval, cache):
    spec = PoleSequenceSpec([(INF, 1.0)], mode="periodic")
    report = szego_widom_modulus(interval, spec, [2.0], 24, n_min=20, cache=cache)
    assert all(abs(r.v_n + math.log(2.0)) <= 1e-6 for r in report.rows)
