import numpy as np
import pytest

from ratcheb.errors import IntegrityError
from ratcheb.simplex import InfeasibleError, UnboundedError, linprog_max


def test_textbook_program_with_slacks():
    # max 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6
    c = [3.0, 2.0, 0.0, 0.0]
    A = [[1.0, 1.0, 1.0, 0.0], [1.0, 3.0, 0.0, 1.0]]
    b = [4.0, 6.0]
    res = linprog_max(c, A, b)
    assert res.objective == pytest.approx(12.0)
    assert res.x[:2] == pytest.approx([4.0, 0.0], abs=1e-12)
    assert float(np.dot(b, res.duals)) == pytest.approx(res.objective)
    assert res.iterations >= 1


def test_negative_right_hand_side():
    # x1 - x2 = -1 with max -x1 - x2 gives x = (0, 1)
    res = linprog_max([-1.0, -1.0], [[1.0, -1.0]], [-1.0])
    assert res.objective == pytest.approx(-1.0)
    assert res.x == pytest.approx([0.0, 1.0], abs=1e-12)
    assert float(np.dot([-1.0], res.duals)) == pytest.approx(res.objective)


def test_infeasible_program():
    with pytest.raises(InfeasibleError):
        linprog_max([1.0, 1.0], [[1.0, 1.0]], [-1.0])


def test_unbounded_program():
    with pytest.raises(UnboundedError):
        linprog_max([1.0, 0.0], [[1.0, -1.0]], [1.0])


def test_failures_are_integrity_errors():
    assert issubclass(InfeasibleError, IntegrityError)
    assert issubclass(UnboundedError, IntegrityError)
