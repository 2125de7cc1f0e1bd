"""Exact feasibility of {A x = b, x >= 0} by phase-one simplex.

The tableau holds whatever scalar type the problem data has: Fractions,
Surds or floats. Bland's rule picks entering and leaving variables, so the
method terminates without perturbation. Infeasible problems come back with a
Farkas vector y, yA <= 0 and yb > 0, read off the final basis inverse.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from qnet_model.data.enums import FeasibilityStatus
from qnet_model.errors import CertificateError, DomainError
from qnet_model.models import sim_parameters as sp
from qnet_model.models import surds
from qnet_model.models.surds import Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearEquality:
  """One row sum_j coefficients[j] x_j = rhs.

  Attributes:
    coefficients Mapping[int, Scalar]:
      Nonzero coefficients keyed by variable index.
    rhs Scalar:
      Right-hand side.
    name str:
      Row name used in reports.
  """
  coefficients: Mapping[int, Scalar]
  rhs: Scalar
  name: str


@dataclass
class FeasibilityProblem:
  """Linear system with nonnegative variables.

  Attributes:
    variable_names list[str]:
      Name of each variable, its position being the flat index.
    equalities list[LinearEquality]:
      The rows.
    title str:
      Free text describing the problem.

  Methods:
    add_variable:
      Appends a variable and returns its index.
    add_equality:
      Appends a row.
    row:
      Looks a row up by name.
  """
  variable_names: list[str] = field(default_factory=list)
  equalities: list[LinearEquality] = field(default_factory=list)
  title: str = ''

  @property
  def n_vars(self) -> int:
    return len(self.variable_names)

  @property
  def n_rows(self) -> int:
    return len(self.equalities)

  @property
  def exact(self) -> bool:
    return all(
        surds.is_exact(row.rhs) and all(surds.is_exact(c) for c in row.coefficients.values())
        for row in self.equalities)

  def add_variable(self, name: str) -> int:
    self.variable_names.append(name)
    return len(self.variable_names) - 1

  def index(self, name: str) -> int:
    return self.variable_names.index(name)

  def add_equality(self, terms: Mapping[int, Scalar], rhs: Scalar, name: str) -> None:
    for j in terms:
      if not 0 <= j < self.n_vars:
        raise DomainError(f'row {name} refers to unknown variable {j}')
    coefficients = {j: surds.simplify(c) for j, c in terms.items() if c != 0}
    self.equalities.append(LinearEquality(coefficients, surds.simplify(rhs), name))

  def row(self, name: str) -> LinearEquality:
    for row in self.equalities:
      if row.name == name:
        return row
    raise KeyError(name)

  def rhs_of(self, name: str) -> Scalar:
    return self.row(name).rhs

  def dense(self) -> tuple[list[list[Scalar]], list[Scalar]]:
    zero = Fraction(0) if self.exact else 0.0
    matrix = [[row.coefficients.get(j, zero) for j in range(self.n_vars)]
              for row in self.equalities]
    return matrix, [row.rhs for row in self.equalities]


@dataclass(frozen=True)
class FeasibilityResult:
  """Outcome of lp_feasible.

  Attributes:
    status FeasibilityStatus:
      FEASIBLE or INFEASIBLE.
    witness tuple[Scalar, ...] | None:
      Nonnegative solution when feasible.
    farkas tuple[Scalar, ...] | None:
      One multiplier per row when infeasible.
    exact bool:
      False when the float fallback decided the status.
    pivots int:
      Number of simplex pivots.
  """
  status: FeasibilityStatus
  witness: tuple[Scalar, ...] | None = None
  farkas: tuple[Scalar, ...] | None = None
  exact: bool = True
  pivots: int = 0

  @property
  def feasible(self) -> bool:
    return self.status is FeasibilityStatus.FEASIBLE

  def named_witness(self, problem: FeasibilityProblem) -> dict[str, Scalar]:
    if self.witness is None:
      return {}
    return dict(zip(problem.variable_names, self.witness))

  def named_farkas(self, problem: FeasibilityProblem) -> dict[str, Scalar]:
    if self.farkas is None:
      return {}
    return {row.name: y for row, y in zip(problem.equalities, self.farkas)}


class _Tableau:
  'Phase-one tableau [B^-1 A | B^-1] with artificial columns n..n+m-1'

  def __init__(self, matrix, rhs, tol, exact):
    self.tol = tol
    self.m, self.n = len(matrix), len(matrix[0]) if matrix else 0
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    self.signs = [-1 if surds.sign(b, tol) < 0 else 1 for b in rhs]
    self.rows = []
    for i, (row, s) in enumerate(zip(matrix, self.signs)):
      artificial = [one if k == i else zero for k in range(self.m)]
      self.rows.append([x if s > 0 else -x for x in row] + artificial)
    self.rhs = [b if s > 0 else -b for b, s in zip(rhs, self.signs)]
    self.basis = [self.n + i for i in range(self.m)]
    self.pivots = 0

  def cost(self, column: int) -> int:
    return 1 if column >= self.n else 0

  def reduced_cost(self, j: int) -> Scalar:
    total = sum((self.rows[i][j] for i in range(self.m) if self.basis[i] >= self.n),
                Fraction(0) if self.tol == 0 else 0.0)
    return self.cost(j) - total

  def objective(self) -> Scalar:
    return sum((self.rhs[i] for i in range(self.m) if self.basis[i] >= self.n),
               Fraction(0) if self.tol == 0 else 0.0)

  def entering(self) -> int | None:
    for j in range(self.n):
      if j not in self.basis and surds.sign(self.reduced_cost(j), self.tol) < 0:
        return j
    return None

  def leaving(self, column: int) -> int | None:
    best = None
    for i in range(self.m):
      if surds.sign(self.rows[i][column], self.tol) <= 0:
        continue
      ratio = self.rhs[i] / self.rows[i][column]
      if best is None:
        best = (ratio, i)
        continue
      diff = surds.sign(ratio - best[0], self.tol)
      if diff < 0 or (diff == 0 and self.basis[i] < self.basis[best[1]]):
        best = (ratio, i)
    return None if best is None else best[1]

  def pivot(self, r: int, column: int) -> None:
    pivot = self.rows[r][column]
    self.rows[r] = [x / pivot for x in self.rows[r]]
    self.rhs[r] = self.rhs[r] / pivot
    for i in range(self.m):
      factor = self.rows[i][column]
      if i == r or factor == 0:
        continue
      self.rows[i] = [x - factor * y for x, y in zip(self.rows[i], self.rows[r])]
      self.rhs[i] = self.rhs[i] - factor * self.rhs[r]
    self.basis[r] = column
    self.pivots += 1

  def dual(self) -> list[Scalar]:
    'c_B B^-1 mapped back to the unflipped rows'
    zero = Fraction(0) if self.tol == 0 else 0.0
    y = []
    for k in range(self.m):
      value = sum((self.rows[i][self.n + k] for i in range(self.m)
                   if self.basis[i] >= self.n), zero)
      y.append(surds.simplify(value if self.signs[k] > 0 else -value))
    return y

  def drive_out_artificials(self) -> None:
    for i in range(self.m):
      if self.basis[i] < self.n:
        continue
      for j in range(self.n):
        if j not in self.basis and surds.sign(self.rows[i][j], self.tol) != 0:
          self.pivot(i, j)
          break

  def solution(self) -> list[Scalar]:
    zero = Fraction(0) if self.tol == 0 else 0.0
    x = [zero] * self.n
    for i, j in enumerate(self.basis):
      if j < self.n:
        value = surds.simplify(self.rhs[i])
        x[j] = value if self.tol == 0 else max(float(value), 0.0)
    return x


def _verify_witness(matrix, rhs, x, exact: bool) -> None:
  for i, (row, b) in enumerate(zip(matrix, rhs)):
    lhs = sum((a * v for a, v in zip(row, x) if a != 0), Fraction(0) if exact else 0.0)
    residual = surds.simplify(lhs - b)
    if exact and residual != 0:
      raise CertificateError(f'witness violates row {i} by {residual}')
    if not exact and abs(float(residual)) > sp.FLOAT_VERIFY_TOLERANCE:
      raise CertificateError(f'witness violates row {i} by {float(residual):.3e}')
  if any(surds.sign(v) < 0 for v in x):
    raise CertificateError('witness has a negative entry')


def _verify_farkas(matrix, rhs, y, exact: bool) -> None:
  zero = Fraction(0) if exact else 0.0
  tol = 0 if exact else sp.FLOAT_VERIFY_TOLERANCE
  n = len(matrix[0]) if matrix else 0
  for j in range(n):
    column = sum((yi * row[j] for yi, row in zip(y, matrix) if row[j] != 0), zero)
    if surds.sign(surds.simplify(column), tol) > 0:
      raise CertificateError(f'Farkas vector has y.A[{j}] = {column} > 0')
  if surds.sign(surds.simplify(sum((yi * b for yi, b in zip(y, rhs)), zero))) <= 0:
    raise CertificateError('Farkas vector does not separate b')


def lp_feasible(problem: FeasibilityProblem,
                tolerance: float | None = None) -> FeasibilityResult:
  """Decide whether A x = b has a solution with x >= 0.

  Exact problem data (Fractions, Surds) is solved without rounding. Float
  data uses the tolerance for every sign decision and is flagged inexact.

  Arguments:
    problem FeasibilityProblem:
      The system.
    tolerance float | None:
      Sign tolerance for float data, default FLOAT_LP_TOLERANCE.

  Returns:
    FeasibilityResult: status plus a re-verified witness or Farkas vector.
  """
  exact = problem.exact
  tol = 0 if exact else (sp.FLOAT_LP_TOLERANCE if tolerance is None else tolerance)
  matrix, rhs = problem.dense()
  if not exact:
    matrix = [[float(a) for a in row] for row in matrix]
    rhs = [float(b) for b in rhs]
  if problem.n_rows == 0:
    zero = Fraction(0) if exact else 0.0
    return FeasibilityResult(FeasibilityStatus.FEASIBLE, tuple([zero] * problem.n_vars),
                             exact=exact)
  tableau = _Tableau(matrix, rhs, tol, exact)
  while (column := tableau.entering()) is not None:
    r = tableau.leaving(column)
    if r is None:
      # phase-one objective is bounded below by zero
      raise CertificateError('phase-one objective reported unbounded')
    tableau.pivot(r, column)
  objective = tableau.objective()
  logger.debug('%s: phase one ended after %d pivots with objective %s', problem.title,
               tableau.pivots, objective)
  if surds.sign(objective, tol) > 0:
    y = tableau.dual()
    _verify_farkas(matrix, rhs, y, exact)
    return FeasibilityResult(FeasibilityStatus.INFEASIBLE, farkas=tuple(y), exact=exact,
                             pivots=tableau.pivots)
  tableau.drive_out_artificials()
  x = tableau.solution()
  _verify_witness(matrix, rhs, x, exact)
  return FeasibilityResult(FeasibilityStatus.FEASIBLE, witness=tuple(x), exact=exact,
                           pivots=tableau.pivots)
