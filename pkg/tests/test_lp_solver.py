from fractions import Fraction

import pytest

from qnet_model.data.enums import FeasibilityStatus
from qnet_model.errors import DomainError
from qnet_model.models import lp_solver
from qnet_model.models.lp_solver import FeasibilityProblem
from qnet_model.models.surds import Surd


def _problem(rows, rhs):
  problem = FeasibilityProblem(title='test')
  for j in range(len(rows[0])):
    problem.add_variable(f'x{j}')
  for i, (row, b) in enumerate(zip(rows, rhs)):
    problem.add_equality({j: a for j, a in enumerate(row)}, b, f'r{i}')
  return problem


def test_feasible_problem_has_exact_witness():
  problem = _problem([[1, 1, 0], [0, 1, 1]], [Fraction(1, 2), Fraction(3, 4)])
  result = lp_solver.lp_feasible(problem)
  assert result.feasible
  assert result.exact
  x = result.witness
  assert all(v >= 0 for v in x)
  assert x[0] + x[1] == Fraction(1, 2)
  assert x[1] + x[2] == Fraction(3, 4)
  assert set(result.named_witness(problem)) == {'x0', 'x1', 'x2'}
  assert result.named_farkas(problem) == {}


def test_infeasible_problem_has_farkas_vector():
  problem = _problem([[1, 1], [1, 1]], [1, 2])
  result = lp_solver.lp_feasible(problem)
  assert result.status is FeasibilityStatus.INFEASIBLE
  assert result.witness is None
  y = result.farkas
  assert y == (-1, 1)
  assert result.named_farkas(problem) == {'r0': -1, 'r1': 1}


def test_negative_right_hand_side():
  problem = _problem([[-1, 1]], [-2])
  result = lp_solver.lp_feasible(problem)
  assert result.feasible
  assert -result.witness[0] + result.witness[1] == -2


def test_nonnegativity_makes_problem_infeasible():
  problem = _problem([[1, 1]], [-1])
  result = lp_solver.lp_feasible(problem)
  assert not result.feasible
  y = result.farkas
  assert y[0] < 0


def test_surd_data_is_solved_exactly():
  root = Surd.sqrt(2)
  problem = _problem([[1, 1], [1, 0]], [root, root - 1])
  result = lp_solver.lp_feasible(problem)
  assert result.feasible and result.exact
  assert result.witness[0] == root - 1
  assert result.witness[1] == 1


def test_surd_data_infeasible():
  problem = _problem([[1, 0]], [1 - Surd.sqrt(2)])
  result = lp_solver.lp_feasible(problem)
  assert not result.feasible
  assert result.exact


def test_float_mode_uses_tolerance():
  problem = _problem([[1.0, 1.0], [1.0, -1.0]], [1.0, 0.2])
  result = lp_solver.lp_feasible(problem)
  assert result.feasible
  assert not result.exact
  assert result.witness[0] == pytest.approx(0.6)
  assert result.witness[1] == pytest.approx(0.4)


def test_empty_problem_is_feasible():
  problem = FeasibilityProblem()
  problem.add_variable('x')
  result = lp_solver.lp_feasible(problem)
  assert result.feasible
  assert result.witness == (0,)


def test_unknown_variable_is_rejected():
  problem = FeasibilityProblem()
  problem.add_variable('x')
  with pytest.raises(DomainError):
    problem.add_equality({3: 1}, 1, 'bad')


def test_problem_lookup_helpers():
  problem = _problem([[1, 2]], [Fraction(1, 3)])
  assert problem.index('x1') == 1
  assert problem.rhs_of('r0') == Fraction(1, 3)
  matrix, rhs = problem.dense()
  assert matrix == [[1, 2]]
  assert rhs == [Fraction(1, 3)]
  with pytest.raises(KeyError):
    problem.row('missing')


def test_redundant_rows():
  problem = _problem([[1, 1, 1], [2, 2, 2], [1, 0, 0]], [1, 2, Fraction(1, 5)])
  result = lp_solver.lp_feasible(problem)
  assert result.feasible
  assert result.witness[0] == Fraction(1, 5)
  assert sum(result.witness) == 1
