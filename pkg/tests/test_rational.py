import math

import numpy as np
import pytest

from ratcheb.errors import DomainError, NumericError
from ratcheb.geometry import INF, CompactSet, Mobius, PoleDivisor
from ratcheb.rational import (
    Basis,
    OrthoBasis,
    RationalFn,
    basis,
    cleared_values,
    evaluate,
    generalized_zeros,
    leading_coeff,
)


def test_chebyshev_polynomial_values(t3):
    x = np.linspace(-1.0, 1.0, 101)
    assert np.allclose(t3.evaluate(x), np.cos(3 * np.arccos(x)), atol=1e-13)
    assert t3(2.0) == pytest.approx(26.0)


def test_single_pole_values(single_pole):
    assert evaluate(single_pole, 3.0) == pytest.approx(-5.0)
    assert single_pole(0.5) == pytest.approx(0.0, abs=1e-14)
    assert single_pole(INF) == pytest.approx(-2.0)
    assert math.isinf(single_pole(2.0).real)


def test_complex_evaluation(single_pole):
    z = 1.0 + 1.0j
    assert single_pole(z) == pytest.approx((2 * z - 1) / (2 - z))


def test_vectorized_evaluation_marks_poles(single_pole):
    values = single_pole.evaluate(np.array([0.0, 2.0, 3.0]))
    assert values[0] == pytest.approx(-0.5)
    assert np.isinf(values[1])
    assert values[2] == pytest.approx(-5.0)


def test_derivative(single_pole):
    # F'(z) = 3 / (2 - z)^2
    assert single_pole.derivative(np.array([0.0, 1.0])) == pytest.approx([0.75, 3.0])


def test_wrong_coefficient_count():
    with pytest.raises(DomainError):
        RationalFn(Basis(PoleDivisor({INF: 2})), [1.0, 2.0])


def test_from_parts_rejects_excess_order():
    with pytest.raises(DomainError):
        RationalFn.from_parts(PoleDivisor({2.0: 1}), parts={2.0: [1.0, 1.0]})


def test_basis_functions():
    fns = basis(PoleDivisor({2.0: 1, INF: 1}))
    assert len(fns) == 3
    assert fns[0](5.0) == pytest.approx(1.0)


def test_basis_for_set_windows(interval):
    b = Basis.for_set(PoleDivisor({2.0: 1, INF: 2}), interval)
    assert b.windows[INF] == (-1.0, 1.0)
    lo, hi = b.windows[2.0]
    assert lo == pytest.approx(1.0 / 3.0)
    assert hi == pytest.approx(1.0)


def test_conditioned_windows_do_not_change_the_function(interval):
    windows = Basis.for_set(PoleDivisor({2.0: 1}), interval).windows
    F = RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]}, windows)
    assert F(3.0) == pytest.approx(-5.0)
    assert F(-1.0) == pytest.approx(-1.0)


def test_actual_orders():
    F = RationalFn.from_parts(PoleDivisor({INF: 3, 2.0: 1}), 1.0, {INF: [1.0]})
    assert F.actual_orders() == {2.0: 0, INF: 1}
    assert F.actual_pole_divisor() == PoleDivisor({INF: 1})
    assert not F.is_constant()
    assert RationalFn.constant(2.0, PoleDivisor({INF: 2})).is_constant()


def test_leading_coefficients(t3, single_pole):
    assert leading_coeff(t3, INF, 3) == pytest.approx(4.0)
    assert leading_coeff(single_pole, 2.0, 1) == pytest.approx(3.0)
    assert leading_coeff(single_pole, INF, 0) == pytest.approx(-2.0)
    assert leading_coeff(t3, 5.0, 0) == pytest.approx(485.0)


def test_leading_coefficient_of_lower_order_is_zero():
    F = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [1.0]})
    assert leading_coeff(F, INF, 3) == 0.0


def test_leading_coefficient_rejects_higher_pole(t3):
    with pytest.raises(DomainError):
        leading_coeff(t3, INF, 2)
    with pytest.raises(DomainError):
        leading_coeff(t3, INF, -1)


def test_leading_coefficient_through_chart(single_pole):
    # G(w) = F(w / 2): the pole moves to 4 and the coefficient of 1/(4 - w) doubles
    G = single_pole.with_chart(Mobius.affine(0.5, 0.0))
    assert G(6.0) == pytest.approx(-5.0)
    assert leading_coeff(G, 4.0, 1) == pytest.approx(6.0)


def test_with_chart_composes(single_pole):
    G = single_pole.with_chart(Mobius.affine(2.0, 0.0))
    assert G(1.5) == pytest.approx(-5.0)
    assert G.pole_divisor == PoleDivisor({1.0: 1})


def test_numerator(single_pole):
    P = single_pole.numerator()
    assert P.coef[:2] == pytest.approx([1.0, -2.0], abs=1e-12)
    assert single_pole.denominator_roots() == [2.0]


def test_generalized_zeros_of_chebyshev_polynomial(t3):
    zeros = generalized_zeros(t3)
    assert zeros.is_simple()
    assert sorted(zeros.atoms) == pytest.approx([-math.sqrt(3) / 2, 0.0, math.sqrt(3) / 2], abs=1e-12)
    assert zeros.degree == 3


def test_generalized_zeros_single_pole(single_pole):
    zeros = generalized_zeros(single_pole)
    assert list(zeros.atoms) == pytest.approx([0.5])


def test_generalized_zeros_count_order_reductions():
    # F(z) = z with D = 2 * inf: one actual zero and one reduction at infinity
    F = RationalFn.from_parts(PoleDivisor({INF: 2}), parts={INF: [1.0]})
    zeros = generalized_zeros(F)
    assert zeros.get(INF) == 1
    finite = [x for x in zeros.atoms if x != INF]
    assert finite == pytest.approx([0.0], abs=1e-12)
    assert zeros.degree == 2


def test_generalized_zeros_through_chart(single_pole):
    G = single_pole.with_chart(Mobius.affine(0.5, 0.0))
    assert list(generalized_zeros(G).atoms) == pytest.approx([1.0])


def test_generalized_zeros_of_constant():
    F = RationalFn.constant(1.0, PoleDivisor({2.0: 1}))
    with pytest.raises(DomainError):
        generalized_zeros(F)
    assert generalized_zeros(F, allow_constant=True).atoms == {2.0: 1}


def test_to_dict(single_pole):
    data = single_pole.to_dict()
    assert data["poles"] == [["2.0", 1]]
    assert data["denominator_roots"] == [2.0]
    assert len(data["coeffs"]) == 2


# ---------------------------------------------------------------------------
# poles on interpolation nodes
# ---------------------------------------------------------------------------

def _double_pole_at_zero():
    """F = 1 + 3/x + 2/x^2 = (x + 1)(x + 2) / x^2."""
    return RationalFn.from_parts(PoleDivisor({0.0: 2}), 1.0, {0.0: [-3.0, 2.0]})


def test_cleared_values_are_finite_at_the_pole():
    F = _double_pole_at_zero()
    x = np.array([0.0, 1.0, -0.5])
    assert cleared_values(F, x, {0.0: 2}) == pytest.approx((x + 1) * (x + 2), abs=1e-12)
    assert cleared_values(F, x, {0.0: 2}, half=2.0) == pytest.approx((x + 1) * (x + 2) / 4, abs=1e-12)


def test_numerator_with_pole_at_a_node():
    P = _double_pole_at_zero().numerator()
    assert P.coef == pytest.approx([2.0, 3.0, 1.0], abs=1e-12)


def test_generalized_zeros_with_pole_at_a_node():
    zeros = generalized_zeros(_double_pole_at_zero())
    assert zeros.is_simple()
    assert sorted(zeros.atoms) == pytest.approx([-2.0, -1.0], abs=1e-9)


# ---------------------------------------------------------------------------
# orthonormal basis
# ---------------------------------------------------------------------------

def _fit(B, f):
    V = B.matrix(B.samples)
    coeffs, *_ = np.linalg.lstsq(V, f(B.samples), rcond=None)
    return coeffs


def test_orthonormal_on_samples(interval):
    B = OrthoBasis(PoleDivisor({INF: 3, 2.0: 2, -1.5: 1}), interval)
    V = B.matrix(B.samples)
    assert V.T @ V / B.samples.size == pytest.approx(np.eye(B.size), abs=1e-10)
    assert B.size == 7


def test_orthonormal_leading_coefficients(interval):
    # 4x^3 - 3x + 5/(2 - x)^2
    B = OrthoBasis(PoleDivisor({INF: 3, 2.0: 2}), interval)
    a = _fit(B, lambda x: 4 * x ** 3 - 3 * x + 5 / (2 - x) ** 2)
    assert B.leading_row(INF, 3) @ a == pytest.approx(4.0, rel=1e-9)
    assert B.principal_part(a, 2.0) == pytest.approx([0.0, 5.0], abs=1e-8)
    assert B.principal_part(a, INF) == pytest.approx([-3.0, 0.0, 4.0], abs=1e-8)


def test_orthonormal_value_at_infinity(interval):
    B = OrthoBasis(PoleDivisor({2.0: 1, -3.0: 2}), interval)
    a = _fit(B, lambda x: 1 + 3 / (2 - x) + 1 / (3 + x) ** 2)
    assert B.infinity_row() @ a == pytest.approx(1.0, abs=1e-9)
    assert RationalFn(B, a).value_at_inner_infinity() == pytest.approx(1.0, abs=1e-9)
    assert RationalFn(B, a)(4.0).real == pytest.approx(1 - 1.5 + 1 / 49, abs=1e-9)


def test_orthonormal_derivative(interval):
    B = OrthoBasis(PoleDivisor({INF: 3, 2.0: 2}), interval)
    a = _fit(B, lambda x: 4 * x ** 3 - 3 * x + 5 / (2 - x) ** 2)
    x = np.linspace(-0.9, 0.9, 7)
    assert B.derivative_matrix(x) @ a == pytest.approx(12 * x ** 2 - 3 + 10 / (2 - x) ** 3, abs=1e-8)


def test_orthonormal_blocks_match_chebyshev_blocks(interval):
    D = PoleDivisor({INF: 2, 2.0: 2})
    B = OrthoBasis(D, interval)
    parts = {INF: [0.5, -1.0], 2.0: [3.0, 0.25]}
    F = RationalFn.from_parts(D, 0.75, parts, windows=B.windows)
    a = _fit(B, lambda x: np.real(F.evaluate(x)))
    for c in (INF, 2.0):
        assert B.block(a, c) == pytest.approx(F.block(c), abs=1e-8)
        assert B.principal_part(a, c) == pytest.approx(parts[c], abs=1e-8)


def test_orthonormal_zeros_avoid_pole_nodes():
    B = OrthoBasis(PoleDivisor({INF: 1, 0.0: 1}), CompactSet.from_literal("[-2,-1];[1,2]"))
    # x - 1/x vanishes at +-1
    F = RationalFn(B, _fit(B, lambda x: x - 1.0 / x))
    assert sorted(generalized_zeros(F).atoms) == pytest.approx([-1.0, 1.0], abs=1e-9)
    assert np.all(np.isfinite(F.to_dict()["numerator"]))


def test_orthonormal_basis_to_dict(interval):
    data = OrthoBasis(PoleDivisor({INF: 2}), interval, per_interval=40).to_dict()
    assert data["kind"] == "orthonormal"
    assert data["samples"] == 40


def test_orthonormal_basis_rejects_repeated_samples():
    with pytest.raises(NumericError):
        OrthoBasis(PoleDivisor({INF: 6}), CompactSet([(-1.0, 1.0)]), per_interval=3)
