import numpy as np
import pytest

from ratcheb.errors import ArgumentError, DomainError
from ratcheb.geometry import INF, CompactSet, Mobius, PoleDivisor
from ratcheb.rational import RationalFn
from ratcheb.selftest import ORACLE_PROBLEMS
from ratcheb.solver import (
    Problem,
    SolveOptions,
    apportion,
    compare_gap_change,
    conformal_deviation,
    gap_structure_report,
    is_constant_case,
    solve,
    solve_lp_oracle,
    verify_alternation,
)


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------

def test_problem_from_literals():
    p = Problem("[-1,1]", "inf:3,2:1", INF)
    assert p.n == 4
    assert p.d == 3
    assert p.is_chebyshev
    assert p.to_dict() == {"set": "[-1.0,1.0]", "poles": "2.0:1,inf:3", "x_star": "inf", "d": 3, "n": 4}


def test_residual_problem():
    p = Problem("[-1,1]", {2.0: 1}, INF)
    assert p.d == 0
    assert not p.is_chebyshev


def test_problem_rejects_extremal_point_on_set():
    with pytest.raises(DomainError):
        Problem("[-1,1]", "inf:2", 0.0)


def test_problem_rejects_pole_on_set():
    with pytest.raises(DomainError):
        Problem("[-1,1]", "0.5:1", INF)


def test_problem_rejects_wrong_d():
    with pytest.raises(ArgumentError):
        Problem("[-1,1]", "inf:2", INF, d=1)


def test_constant_case_detection():
    assert is_constant_case(Problem("[-2,-1];[0,1]", {-0.5: 1}, INF))
    assert not is_constant_case(Problem("[-1,1]", "2:1", 2))
    assert not is_constant_case(Problem("[-2,-1];[0,1]", {-0.5: 2}, INF))


def test_apportion():
    assert apportion([1.0, 1.0, 1.0], 4) == [2, 1, 1]
    assert apportion([2.0, 1.0], 3) == [2, 1]
    assert sum(apportion([0.3, 0.3, 0.4], 7)) == 7


# ---------------------------------------------------------------------------
# exchange iteration
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 13))
def test_chebyshev_polynomials(n):
    sol = solve(Problem("[-1,1]", {INF: n}, INF))
    assert sol.m == pytest.approx(2.0 ** (n - 1), rel=1e-9)
    x = np.linspace(-1.0, 1.0, 400)
    assert np.max(np.abs(np.real(sol.F.evaluate(x)) - np.cos(n * np.arccos(x)))) <= 1e-9
    assert len(sol.alternation) == n + 1


def test_chebyshev_value_off_the_set():
    sol = solve(Problem("[-1,1]", "inf:3", 2.0))
    assert sol.m == pytest.approx(26.0, rel=1e-9)


def test_single_finite_pole(single_pole):
    sol = solve(Problem("[-1,1]", "2:1", 2))
    assert sol.m == pytest.approx(3.0, rel=1e-9)
    assert sol.F(3.0) == pytest.approx(single_pole(3.0), rel=1e-8)
    assert list(sol.zeros.atoms) == pytest.approx([0.5], abs=1e-8)


def test_residual_value_at_infinity():
    sol = solve(Problem("[-1,1]", "2:1", INF))
    assert sol.m == pytest.approx(2.0, rel=1e-9)


def test_symmetric_two_interval_polynomial(two_intervals):
    # (2x^2 - 4.25) / 3.75 equioscillates at all four edges
    sol = solve(Problem(two_intervals, {INF: 2}, INF))
    assert sol.m == pytest.approx(2.0 / 3.75, rel=1e-8)
    assert abs(sol.F(0.0).real) == pytest.approx(4.25 / 3.75, rel=1e-8)


def test_constant_case_solution():
    sol = solve(Problem("[-2,-1];[0,1]", {-0.5: 1}, INF))
    assert sol.constant_case
    assert sol.m == 1.0
    assert sol.F(0.3) == pytest.approx(1.0)
    assert sol.to_dict()["constant_case"] is True


def test_solution_to_dict():
    data = solve(Problem("[-1,1]", "inf:2", INF)).to_dict()
    assert data["problem"]["n"] == 2
    assert data["m"] == pytest.approx(2.0)
    assert len(data["alternation"]) == 3
    assert data["diagnostics"]["iterations"] >= 1


def test_options_are_honoured():
    options = SolveOptions()
    options.init = "equal"
    options.tol = 1e-12
    sol = solve(Problem("[-1,1]", "inf:4", INF), options)
    assert sol.m == pytest.approx(8.0, rel=1e-10)


def test_unknown_init_rule():
    options = SolveOptions()
    options.init = "random"
    with pytest.raises(ArgumentError):
        solve(Problem("[-1,1]", "inf:4", INF), options)


def test_initial_reference_must_lie_on_set():
    with pytest.raises(ArgumentError):
        solve(Problem("[-1,1]", "inf:2", INF), initial_reference=[-1.0, 0.0, 3.0])


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_verify_alternation(t3):
    report = verify_alternation(t3, Problem("[-1,1]", "inf:3", INF))
    assert report.size == 4
    assert report.passed
    assert report.bound_respected
    assert report.norm == pytest.approx(1.0)
    assert [s for _, s in report.points] == [-1, 1, -1, 1]


def test_verify_alternation_rejects_scaled_function():
    half_t3 = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-1.5, 0.0, 2.0]})
    report = verify_alternation(half_t3, Problem("[-1,1]", "inf:3", INF))
    assert not report.passed


def test_lp_oracle_agrees_with_exchange():
    p = Problem("[-2,-0.5];[0.5,2]", "inf:2,3:1", INF)
    exact = solve(p).m
    oracle = solve_lp_oracle(p, grid_size=2001)
    assert oracle.m == pytest.approx(exact, rel=5e-4)


@pytest.mark.parametrize("size", [1, 10001])
def test_lp_oracle_grid_bounds(size):
    with pytest.raises(ArgumentError):
        solve_lp_oracle(Problem("[-1,1]", "inf:2", INF), grid_size=size)


def test_gap_structure_report():
    report = gap_structure_report(solve(Problem("[-1,1]", "2:1", 2)))
    assert report.edge_expected == (1, -1)
    assert report.edge_ok
    assert report.real and report.simple
    assert report.passed


def test_gap_structure_of_two_interval_polynomial(two_intervals):
    report = gap_structure_report(solve(Problem(two_intervals, {INF: 2}, INF)))
    # both zeros lie on the set
    assert [k for _, k in report.zero_counts] == [0, 0]
    assert report.x_star_gap_empty


def test_compare_gap_change():
    report = compare_gap_change(CompactSet([(-1, 1)]), PoleDivisor({2.0: 1}), 2.0, INF)
    assert report.sign == -1
    assert report.passed


def test_compare_gap_change_needs_one_gap():
    with pytest.raises(ArgumentError):
        compare_gap_change(CompactSet.from_literal("[-2,-1];[0,1]"), PoleDivisor({INF: 2}), -0.5, 2.0)


def test_extremizer_does_not_depend_on_initial_reference(interval):
    p = Problem(interval, {INF: 4}, INF)
    default = solve(p)
    other = solve(p, initial_reference=[-1.0, -0.6, 0.1, 0.5, 1.0])
    x = np.linspace(-1.0, 1.0, 41)
    assert other.m == pytest.approx(default.m, rel=1e-8)
    assert np.allclose(np.real(other.F.evaluate(x)), np.real(default.F.evaluate(x)), atol=1e-7)


# ---------------------------------------------------------------------------
# poles on interpolation nodes
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "E, poles, x_star",
    [
        ("[-2,-1];[0,1]", {-0.5: 2}, INF),
        ("[-2,-0.5];[0.5,2]", {0.0: 1, INF: 2}, INF),
        ("[-2,-0.5];[0.5,2]", {0.0: 2, INF: 2}, INF),
        ("[-2,-1];[1,2]", {INF: 3}, 0.0),
    ],
)
def test_pole_on_a_node_of_the_working_frame(E, poles, x_star):
    p = Problem(E, poles, x_star)
    sol = solve(p)
    assert verify_alternation(sol.F, p).passed
    assert gap_structure_report(sol).passed
    assert np.all(np.isfinite(sol.to_dict()["F"]["numerator"]))


# ---------------------------------------------------------------------------
# large degrees
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "E, poles",
    [
        ("[-2,-0.5];[0.5,2]", {INF: 40}),
        ("[-2,-0.5];[0.5,2]", {0.2: 15, INF: 15}),
        ("[-2,-0.5];[0.5,2]", {0.2: 20, INF: 20}),
        ("[-1,1]", {2.0: 20, INF: 20}),
    ],
)
def test_large_degree_problems_converge(E, poles):
    p = Problem(E, poles, INF)
    sol = solve(p)
    assert sol.defect <= 1e-10
    assert len(sol.alternation) == p.n + 1
    assert verify_alternation(sol.F, p).passed


def test_large_degree_polynomial_on_symmetric_pair(two_intervals):
    # T_20(x) on [-1,1] composed with (2x^2 - 4.25) / 3.75 is the extremizer of degree 40
    sol = solve(Problem(two_intervals, {INF: 40}, INF))
    assert sol.m == pytest.approx(2.0 ** 19 * (2.0 / 3.75) ** 20, rel=1e-8)


@pytest.mark.parametrize("rule", ["harmonic", "length", "equal"])
def test_initial_rules_agree(rule):
    options = SolveOptions()
    options.init = rule
    sol = solve(Problem("[-2,-0.5];[0.5,2]", "0.2:3,inf:3", INF), options)
    reference = solve(Problem("[-2,-0.5];[0.5,2]", "0.2:3,inf:3", INF))
    assert sol.m == pytest.approx(reference.m, rel=1e-9)


# ---------------------------------------------------------------------------
# batteries
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("E, poles, x_star", ORACLE_PROBLEMS)
def test_oracle_battery(E, poles, x_star):
    p = Problem(E, poles, x_star)
    assert abs(solve(p).m - solve_lp_oracle(p, grid_size=2001).m) <= 5e-4


@pytest.mark.parametrize(
    "g",
    [Mobius.affine(2.0, 0.5), Mobius(1.0, 0.0, -0.25, 1.0), Mobius.send_to_infinity(-3.0)],
)
@pytest.mark.parametrize(
    "E, poles, x_star",
    [("[-2,-0.5];[0.5,2]", "inf:2,3:1", INF), ("[-1,1]", "2:1", 2.0), ("[-1,1]", "inf:3", 2.0)],
)
def test_conformal_invariance(g, E, poles, x_star):
    sol = solve(Problem(E, poles, x_star))
    assert conformal_deviation(sol, g) <= 1e-7


def test_transformed_problem():
    p = Problem("[-1,1]", "2:1", 2.0)
    image = p.transformed(Mobius.affine(2.0, 1.0))
    assert image.set == CompactSet([(-1.0, 3.0)])
    assert image.poles.items() == [(5.0, 1)]
    assert image.x_star == 5.0
    assert image.d == 1
