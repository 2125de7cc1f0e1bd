"""Certificates that a network distribution has no classical explanation.

Support and parity checks, the Finner inequality, the marginal feasibility
problems for the triangle (qubit and qutrit) and for odd cycles, and the
threshold curve of the qubit triangle.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np
import numpy.typing as npt
from scipy import optimize

from qnet_model.data import enums
from qnet_model.data.enums import NO_THRESHOLD, NOT_FORCED, Label, Sentinel, SupportKind
from qnet_model.errors import DomainError
from qnet_model.models import bricks
from qnet_model.models import sim_parameters as sp
from qnet_model.models import surds
from qnet_model.models.distribution import Outcome, OutcomeDistribution
from qnet_model.models.lp_solver import FeasibilityProblem
from qnet_model.models.surds import Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintCheck:
  name: str
  expected: Scalar
  observed: Scalar
  deviation: Scalar


@dataclass
class ConstraintReport:
  """Expected against observed values of a list of constraints.

  Attributes:
    checks list[ConstraintCheck]:
      One entry per constraint, deviation = |observed - expected|.

  Methods:
    add:
      Records one constraint.
    holds:
      True when every deviation is within a tolerance.
    violations:
      Checks whose deviation exceeds a tolerance.
  """
  checks: list[ConstraintCheck] = field(default_factory=list)

  def add(self, name: str, expected: Scalar, observed: Scalar) -> None:
    deviation = surds.simplify(abs(observed - expected))
    self.checks.append(ConstraintCheck(name, expected, observed, deviation))

  @property
  def max_deviation(self) -> Scalar:
    return max((c.deviation for c in self.checks), default=0)

  def violations(self, tol: float = sp.NEGATIVE_TOLERANCE) -> list[ConstraintCheck]:
    return [c for c in self.checks if float(c.deviation) > tol]

  def holds(self, tol: float = sp.NEGATIVE_TOLERANCE) -> bool:
    return not self.violations(tol)

  def check(self, name: str) -> ConstraintCheck:
    return next(c for c in self.checks if c.name == name)


def _event_mass(dist: OutcomeDistribution, event: Callable[[Outcome], bool]) -> Scalar:
  zero = Fraction(0) if dist.exact else 0.0
  return sum((p for o, p in dist.probabilities.items() if event(o)), zero)


def _pair_mass(dist: OutcomeDistribution, k: int, l: int, first: Label, second: Label) -> Scalar:
  'Mass of party k giving `first` and party l giving `second`, compared on coarse labels'
  return _event_mass(dist, lambda o: o[k].coarse is first and o[l].coarse is second)


def _qubit_cycle_checks(dist: OutcomeDistribution, report: ConstraintReport) -> None:
  n = dist.arity
  for k in range(n):
    nxt = (k + 1) % n
    for label in (Label.UP, Label.DOWN):
      report.add(f'P(a{k}={label.token},a{nxt}={label.token})', 0,
                 _pair_mass(dist, k, nxt, label, label))
  even = _event_mass(dist, lambda o: sum(l.coarse is Label.CHI for l in o) % 2 == 0)
  report.add('P(even number of chi)', 0, even)


def _qutrit_triangle_checks(dist: OutcomeDistribution, report: ConstraintReport) -> None:
  tilde = enums.TILDE_LABELS
  for k, l in itertools.combinations(range(3), 2):
    for i, j in itertools.permutations(range(3), 2):
      report.add(f'P(a{k}=t{i},a{l}=t{j})', 0, _pair_mass(dist, k, l, tilde[i], tilde[j]))
  families = (
      (Label.T0, Label.CHID),
      (Label.CHID, Label.T2),
      (Label.CHIU, Label.T0),
      (Label.T2, Label.CHIU),
  )
  for k in range(3):
    nxt = (k + 1) % 3
    for first, second in families:
      report.add(f'P(a{k}={first.token},a{nxt}={second.token})', 0,
                 _pair_mass(dist, k, nxt, first, second))


def check_support_constraints(dist: OutcomeDistribution, kind: SupportKind) -> ConstraintReport:
  """Zero-probability events every classical model built on partitions obeys.

  Qubit cycles: no two neighbours both output up (or both down) and the
  number of chi outputs is odd. Qutrit triangle: distinct tilde outputs never
  meet, and the four neighbour patterns that the partition structure rules
  out have zero mass. Works on fine or coarse labels.
  """
  report = ConstraintReport()
  if kind is SupportKind.QUBIT_CYCLE:
    if dist.arity < 3:
      raise DomainError(f'qubit cycle checks need arity >= 3, got {dist.arity}')
    _qubit_cycle_checks(dist, report)
  else:
    if dist.arity != 3:
      raise DomainError(f'qutrit triangle checks need arity 3, got {dist.arity}')
    _qutrit_triangle_checks(dist, report)
  return report


def finner_slack(dist: OutcomeDistribution) -> dict[Outcome, Scalar]:
  """sqrt(P_A(a) P_B(b) P_C(c)) - P(a, b, c) for every outcome.

  Negative slack violates the Finner inequality. Exact inputs give exact
  slacks (Fractions, or Surds when the square root is irrational).
  """
  if dist.arity != 3:
    raise DomainError(f'Finner slack is defined on the triangle, got arity {dist.arity}')
  zero = Fraction(0) if dist.exact else 0.0
  singles: list[dict[Label, Scalar]] = [{l: zero for l in labels} for labels in dist.label_sets]
  for outcome, p in dist.probabilities.items():
    for k, label in enumerate(outcome):
      singles[k][label] += p
  slack = {}
  for outcome, p in dist.items():
    product = math.prod((singles[k][l] for k, l in enumerate(outcome)), start=Fraction(1))
    root = surds.sqrt_scalar(product if dist.exact else float(product))
    slack[outcome] = surds.simplify(root - p)
  return slack


def _qubit_parameters(lambda0_sq: Any, u_sq: Any):
  exact = surds.is_exact(lambda0_sq) and surds.is_exact(u_sq)
  big_l = surds.as_scalar(lambda0_sq, exact)
  big_u = surds.as_scalar(u_sq, exact)
  if not 0 < big_l < 1:
    raise DomainError(f'lambda0^2 must lie in (0, 1), got {lambda0_sq}')
  if not 0 < big_u < 1:
    raise DomainError(f'u^2 must lie in (0, 1), got {u_sq}')
  root = surds.sqrt_scalar
  return exact, big_l, big_u, root(big_l), root(1 - big_l), root(big_u), root(1 - big_u)


def triangle_targets(lambda0_sq: Any, u_sq: Any) -> tuple[dict, dict]:
  """Right-hand sides of the qubit triangle marginal problem.

  Returns:
    tuple[dict, dict]: q(i, j, k) keyed by (i, j, k), and q(i, t) keyed by
    (i, t), the latter shared by the three party positions.
  """
  _, big_l, _, l0, l1, u, v = _qubit_parameters(lambda0_sq, u_sq)
  us, vs = (u, v), (v, -u)
  z = big_l**3 + (1 - big_l)**3
  triple = {}
  for i, j, k in itertools.product(range(2), repeat=3):
    amp = l0**3 * us[i] * us[j] * us[k] + l1**3 * vs[i] * vs[j] * vs[k]
    triple[i, j, k] = surds.simplify(amp * amp / z)
  single = {}
  for i in range(2):
    single[i, 0] = surds.simplify(big_l**3 / z * us[i] * us[i])
    single[i, 1] = surds.simplify((1 - big_l)**3 / z * vs[i] * vs[i])
  return triple, single


def triangle_marginal_problem(lambda0_sq: Any, u_sq: Any,
                              symmetric: bool = False) -> FeasibilityProblem:
  """Marginal problem over q(i, j, k, t) for the qubit triangle.

  q(i, j, k, t) is the weight of (chi_i, chi_j, chi_k) when all three sources
  fall in their t-th partition block. Its three-party marginals and its
  single-party marginals with t are fixed by the quantum distribution.

  Arguments:
    lambda0_sq Any:
      Squared larger Schmidt coefficient in (0, 1).
    u_sq Any:
      Squared measurement parameter in (0, 1).
    symmetric bool:
      Build the reduction over Q(d, t), d the number of chi_1 outputs.

  Returns:
    FeasibilityProblem: exact when both parameters are rational.
  """
  triple, single = triangle_targets(lambda0_sq, u_sq)
  problem = FeasibilityProblem(title=f'triangle lambda0^2={lambda0_sq} u^2={u_sq}'
                               f'{" symmetric" if symmetric else ""}')
  if symmetric:
    var = {(d, t): problem.add_variable(f'Q(d={d},t={t})') for d in range(4) for t in range(2)}
    problem.add_equality({var[d, t]: math.comb(3, d) for d in range(4) for t in range(2)}, 1,
                         'normalization')
    for d in range(4):
      representative = tuple([1] * d + [0] * (3 - d))
      problem.add_equality({var[d, 0]: 1, var[d, 1]: 1}, triple[representative], f'q(d={d})')
    for x in range(2):
      for t in range(2):
        terms = {var[x + e, t]: math.comb(2, e) for e in range(3)}
        problem.add_equality(terms, single[x, t], f'q(i={x},t={t})')
    return problem
  var = {
      key: problem.add_variable('q({},{},{},{})'.format(*key))
      for key in itertools.product(range(2), repeat=4)
  }
  problem.add_equality({j: 1 for j in var.values()}, 1, 'normalization')
  for i, j, k in itertools.product(range(2), repeat=3):
    problem.add_equality({var[i, j, k, t]: 1 for t in range(2)}, triple[i, j, k],
                         f'q(i={i},j={j},k={k})')
  for position, name in enumerate('ijk'):
    for x, t in itertools.product(range(2), repeat=2):
      terms = {index: 1 for key, index in var.items() if key[position] == x and key[3] == t}
      problem.add_equality(terms, single[x, t], f'q({name}={x},t={t})')
  return problem


def _eta(matrix: Sequence[Sequence[Any]], exact: bool) -> list[list[Scalar]]:
  return [[surds.as_scalar(x, exact) for x in row] for row in matrix]


@dataclass(frozen=True)
class QutritTargets:
  """Marginal values fixed by the qutrit basis.

  Attributes:
    pair dict[tuple[int, int], Scalar]:
      q(i, j) = (eta_i^01 eta_j^10 + eta_i^02 eta_j^20)^2 / 2.
    up_t dict[tuple[int, int], Scalar]:
      q(i, t) for t in {1, 2}.
    down_t dict[tuple[int, int], Scalar]:
      q(j, t) for t in {1, 2}.
  """
  pair: dict[tuple[int, int], Scalar]
  up_t: dict[tuple[int, int], Scalar]
  down_t: dict[tuple[int, int], Scalar]


def qutrit_targets(eta_up, eta_down) -> QutritTargets:
  bricks.check_orthogonal(eta_up, 'eta_up')
  bricks.check_orthogonal(eta_down, 'eta_down')
  exact = all(surds.is_exact(x) for row in (*eta_up, *eta_down) for x in row)
  up, down = _eta(eta_up, exact), _eta(eta_down, exact)
  half = Fraction(1, 2) if exact else 0.5
  pair = {}
  for i, j in itertools.product(range(3), repeat=2):
    amp = up[i][0] * down[j][0] + up[i][1] * down[j][1]
    pair[i, j] = surds.simplify(half * amp * amp)
  up_t = {(i, t): surds.simplify(half * up[i][t - 1]**2) for i in range(3) for t in (1, 2)}
  down_t = {(j, t): surds.simplify(half * down[j][t - 1]**2) for j in range(3) for t in (1, 2)}
  return QutritTargets(pair, up_t, down_t)


def qutrit_marginal_problem(eta_up, eta_down) -> FeasibilityProblem:
  """Marginal problem over q(i, j, t), t in {1, 2}, for the qutrit triangle.

  q(i, j, t) is the weight of (chi_i-up, chi_j-down, t0) with Charlie's right
  source in block t, conditioned on the event where these three coarse
  outputs occur.
  """
  targets = qutrit_targets(eta_up, eta_down)
  problem = FeasibilityProblem(title='qutrit triangle')
  var = {(i, j, t): problem.add_variable(f'q({i},{j},{t})')
         for i in range(3) for j in range(3) for t in (1, 2)}
  problem.add_equality({j: 1 for j in var.values()}, 1, 'normalization')
  for (i, j), value in targets.pair.items():
    problem.add_equality({var[i, j, 1]: 1, var[i, j, 2]: 1}, value, f'q(i={i},j={j})')
  for (i, t), value in targets.up_t.items():
    problem.add_equality({var[i, j, t]: 1 for j in range(3)}, value, f'q(i={i},t={t})')
  for (j, t), value in targets.down_t.items():
    problem.add_equality({var[i, j, t]: 1 for i in range(3)}, value, f'q(j={j},t={t})')
  return problem


@dataclass(frozen=True)
class QutritMarginalValues:
  """Distribution values the qutrit marginal problem is built from.

  Attributes:
    chi_up_then_one dict[int, Scalar]:
      P(a = chi_i-up, b = t1) = (eta_i^01)^2 / 27.
    one_then_chi_up dict[int, Scalar]:
      P(c = t1, a = chi_i-up) = (eta_i^12)^2 / 27.
    chi_up_chi_down_zero dict[tuple[int, int], Scalar]:
      P(chi_i-up, chi_j-down, t0) = (eta_i^01 eta_j^10 + eta_i^02 eta_j^20)^2 / 27.
  """
  chi_up_then_one: dict[int, Scalar]
  one_then_chi_up: dict[int, Scalar]
  chi_up_chi_down_zero: dict[tuple[int, int], Scalar]


def qutrit_marginal_targets(eta_up, eta_down) -> QutritMarginalValues:
  'Closed forms for the maximally entangled qutrit triangle'
  exact = all(surds.is_exact(x) for row in (*eta_up, *eta_down) for x in row)
  up, down = _eta(eta_up, exact), _eta(eta_down, exact)
  scale = Fraction(1, 27) if exact else 1 / 27
  return QutritMarginalValues(
      chi_up_then_one={i: surds.simplify(scale * up[i][0]**2) for i in range(3)},
      one_then_chi_up={i: surds.simplify(scale * up[i][2]**2) for i in range(3)},
      chi_up_chi_down_zero={
          (i, j): surds.simplify(scale * (up[i][0] * down[j][0] + up[i][1] * down[j][1])**2)
          for i in range(3) for j in range(3)
      },
  )


@dataclass(frozen=True)
class ForcedSolution:
  """Matrices M_t[i][j] = q(i, j, t) pinned down by the marginals.

  Attributes:
    m1 tuple[tuple[Scalar, ...], ...]:
      Entries for t = 1.
    m2 tuple[tuple[Scalar, ...], ...]:
      Entries for t = 2.
    consistent bool:
      Every marginal equation holds for the forced values.
  """
  m1: tuple[tuple[Scalar, ...], ...]
  m2: tuple[tuple[Scalar, ...], ...]
  consistent: bool

  @property
  def nonnegative(self) -> bool:
    return all(surds.sign(x) >= 0 for m in (self.m1, self.m2) for row in m for x in row)

  def negative_entries(self) -> list[tuple[int, int, int, Scalar]]:
    'Entries (t, i, j, value) below zero'
    return [(t, i, j, x)
            for t, m in ((1, self.m1), (2, self.m2))
            for i, row in enumerate(m)
            for j, x in enumerate(row)
            if surds.sign(x) < 0]


def qutrit_forced_solution(eta_up, eta_down) -> ForcedSolution | Sentinel:
  """Solve the qutrit marginal problem by zero propagation.

  Every equation with zero right-hand side sets all its unknowns to zero,
  since they are nonnegative. Equations left with a single unknown are then
  solved one at a time. Returns NOT_FORCED when some entry stays free.
  """
  targets = qutrit_targets(eta_up, eta_down)
  cells = [(t, i, j) for t in (1, 2) for i in range(3) for j in range(3)]
  equations: list[tuple[list[tuple[int, int, int]], Scalar]] = []
  for (i, j), value in targets.pair.items():
    equations.append(([(1, i, j), (2, i, j)], value))
  for (i, t), value in targets.up_t.items():
    equations.append(([(t, i, j) for j in range(3)], value))
  for (j, t), value in targets.down_t.items():
    equations.append(([(t, i, j) for i in range(3)], value))
  exact = all(surds.is_exact(v) for _, v in equations)
  zero = Fraction(0) if exact else 0.0
  tol = 0 if exact else sp.FLOAT_LP_TOLERANCE
  known: dict[tuple[int, int, int], Scalar] = {}
  for unknowns, value in equations:
    if surds.sign(value, tol) == 0:
      known.update({cell: zero for cell in unknowns})
  progress = True
  while progress and len(known) < len(cells):
    progress = False
    for unknowns, value in equations:
      free = [cell for cell in unknowns if cell not in known]
      if len(free) == 1:
        known[free[0]] = surds.simplify(value - sum((known[c] for c in unknowns if c in known),
                                                    zero))
        progress = True
  if len(known) < len(cells):
    logger.info('zero propagation fixed %d of %d entries', len(known), len(cells))
    return NOT_FORCED
  consistent = all(
      surds.sign(surds.simplify(sum((known[c] for c in unknowns), zero) - value), tol) == 0
      for unknowns, value in equations)
  total = surds.simplify(sum(known.values(), zero))
  consistent = consistent and surds.sign(surds.simplify(total - 1), tol) == 0

  def matrix(t: int) -> tuple[tuple[Scalar, ...], ...]:
    return tuple(tuple(known[t, i, j] for j in range(3)) for i in range(3))

  return ForcedSolution(matrix(1), matrix(2), consistent)


def cycle_xi_problem(n: int, u_sq: Any) -> FeasibilityProblem:
  """Feasibility of the symmetrised xi chain of an odd cycle at lambda0^2 = 1/2.

  With Q_d(0) = (U^(N-d) V^d + (-1)^d (uv)^N + xi_d) / 2 and
  Q_d(1) = (V^(N-d) U^d + (-1)^d (uv)^N - xi_d) / 2 (U = u^2, V = 1 - U), the
  problem asks for free xi_0..xi_N keeping every Q_d(t) >= 0 with
  sum_d C(2M, d) xi_d = 0 and sum_d C(2M, d) xi_{d+1} = 0, N = 2M + 1.
  xi_d is written p_d - n_d and each inequality gets a slack variable.
  """
  if n < 3 or n % 2 == 0:
    raise DomainError(f'cycle length must be odd and at least 3, got {n}')
  exact = surds.is_exact(u_sq)
  big_u = surds.as_scalar(u_sq, exact)
  if not 0 < big_u < 1:
    raise DomainError(f'u^2 must lie in (0, 1), got {u_sq}')
  big_v = 1 - big_u
  cross = surds.sqrt_scalar(big_u * big_v)**n
  m = (n - 1) // 2
  problem = FeasibilityProblem(title=f'cycle N={n} u^2={u_sq}')
  plus = [problem.add_variable(f'xi+({d})') for d in range(n + 1)]
  minus = [problem.add_variable(f'xi-({d})') for d in range(n + 1)]
  slack0 = [problem.add_variable(f's0({d})') for d in range(n + 1)]
  slack1 = [problem.add_variable(f's1({d})') for d in range(n + 1)]
  for d in range(n + 1):
    sign = 1 if d % 2 == 0 else -1
    base0 = big_u**(n - d) * big_v**d + sign * cross
    base1 = big_v**(n - d) * big_u**d + sign * cross
    problem.add_equality({plus[d]: 1, minus[d]: -1, slack0[d]: -1}, -base0, f'Q_{d}(0)>=0')
    problem.add_equality({plus[d]: -1, minus[d]: 1, slack1[d]: -1}, -base1, f'Q_{d}(1)>=0')
  for shift, name in ((0, 'Gamma0'), (1, 'Gamma1')):
    terms: dict[int, int] = {}
    for d in range(2 * m + 1):
      terms[plus[d + shift]] = math.comb(2 * m, d)
      terms[minus[d + shift]] = -math.comb(2 * m, d)
    problem.add_equality(terms, 0, name)
  return problem


def cycle_marginal_targets(n: int, u_sq: Any) -> dict[Outcome, Scalar]:
  """Closed-form probabilities of the maximally entangled qubit N-cycle.

  All-chi outcomes: (prod u_i + prod v_i)^2 / 2^N. Outcomes
  (chi_i, up, down, up, down, ...): u_i^2 / 2^N.
  """
  if n < 3:
    raise DomainError(f'cycle length must be at least 3, got {n}')
  exact = surds.is_exact(u_sq)
  big_u = surds.as_scalar(u_sq, exact)
  if not 0 < big_u < 1:
    raise DomainError(f'u^2 must lie in (0, 1), got {u_sq}')
  u, v = surds.sqrt_scalar(big_u), surds.sqrt_scalar(1 - big_u)
  us, vs = (u, v), (v, -u)
  scale = Fraction(1, 2**n) if exact else 1 / 2**n
  chis = (Label.CHI0, Label.CHI1)
  targets: dict[Outcome, Scalar] = {}
  for indices in itertools.product(range(2), repeat=n):
    amp = math.prod((us[i] for i in indices), start=1) + math.prod((vs[i] for i in indices),
                                                                   start=1)
    targets[tuple(chis[i] for i in indices)] = surds.simplify(scale * amp * amp)
  tail = tuple(Label.UP if k % 2 == 0 else Label.DOWN for k in range(n - 1))
  for i in range(2):
    targets[(chis[i], *tail)] = surds.simplify(scale * us[i] * us[i])
  return targets


def marginal_inequality_lhs(lambda0: float | npt.NDArray[np.float64],
                            u: float | npt.NDArray[np.float64]) -> Any:
  """Left side of the marginal inequality of the generalised qubit triangle.

  3(l0^3 u^2 v - l1^3 u v^2)^2 - 3u^2(l0^6 + l1^6) + 2(l1^6 + (l0^3 u^3 + l1^3 v^3)^2)
  + l0^6 + (l0^3 v^3 - l1^3 u^3)^2. A classical model requires lhs >= 0.
  Accepts numpy arrays.
  """
  l0 = np.asarray(lambda0, dtype=np.float64)
  uu = np.asarray(u, dtype=np.float64)
  if np.any((l0 <= 0) | (l0 >= 1)):
    raise DomainError(f'lambda0 must lie in (0, 1), got {lambda0}')
  if np.any((uu <= 0) | (uu >= 1)):
    raise DomainError(f'u must lie in (0, 1), got {u}')
  l1 = np.sqrt(1 - l0**2)
  v = np.sqrt(1 - uu**2)
  a, b = l0**3, l1**3
  value = (3 * (a * uu**2 * v - b * uu * v**2)**2 - 3 * uu**2 * (a**2 + b**2) + 2 *
           (b**2 + (a * uu**3 + b * v**3)**2) + a**2 + (a * v**3 - b * uu**3)**2)
  return float(value) if np.ndim(value) == 0 else value


def u_threshold(lambda0: float,
                xtol: float = sp.BISECTION_XTOL,
                lower: float | None = None,
                points: int = sp.THRESHOLD_SCAN_POINTS) -> float | Sentinel:
  """Smallest u above which the marginal inequality fails.

  The inequality is scanned on a grid over (lower, 1); the last grid point
  where it still holds brackets the crossing, which is then refined by
  bisection. NO_THRESHOLD is returned when it never fails on the grid, or
  fails everywhere.

  Arguments:
    lambda0 float:
      Larger Schmidt coefficient in (0, 1).
    xtol float:
      Absolute bisection tolerance on u.
    lower float | None:
      Lower end of the bracket, default 1/sqrt(2) (the u > v region).
    points int:
      Number of scan points.

  Returns:
    float | Sentinel: u_max, or NO_THRESHOLD.
  """
  if not 0 < lambda0 < 1:
    raise DomainError(f'lambda0 must lie in (0, 1), got {lambda0}')
  lo = 1 / math.sqrt(2) if lower is None else lower
  if not 0 < lo < 1:
    raise DomainError(f'lower bracket must lie in (0, 1), got {lower}')
  grid = np.linspace(lo, 1.0, points, endpoint=False)
  values = marginal_inequality_lhs(lambda0, grid)
  failing = values < 0
  if not failing.any() or failing.all():
    logger.debug('no sign change for lambda0=%s on [%s, 1)', lambda0, lo)
    return NO_THRESHOLD
  last_ok = int(np.flatnonzero(~failing)[-1])
  if last_ok == len(grid) - 1:
    return NO_THRESHOLD
  a, b = float(grid[last_ok]), float(grid[last_ok + 1])
  if values[last_ok] == 0:
    return a
  root = optimize.bisect(lambda x: marginal_inequality_lhs(lambda0, x), a, b, xtol=xtol)
  logger.debug('lambda0=%s: u_max=%.15f in [%s, %s]', lambda0, root, a, b)
  return float(root)


def threshold_polynomial(u_sq: float) -> float:
  'The cubic 4U^3 + 9U - 9 whose root is u_max^2 at lambda0^2 = 1/2'
  return 4 * u_sq**3 + 9 * u_sq - 9


@dataclass(frozen=True)
class AsymptoticSign:
  """Leading coefficient of the xi chain of an odd cycle as u -> 1.

  Attributes:
    a int:
      (-1)^(M+1) C(2M, M), N = 2M + 1.
    beta_gt_gamma bool:
      True when the contradiction needs beta > gamma (N = 1 mod 4).
  """
  a: int
  beta_gt_gamma: bool


def cycle_asymptotic_sign(n: int) -> AsymptoticSign:
  if n < 3 or n % 2 == 0:
    raise DomainError(f'cycle length must be odd and at least 3, got {n}')
  m = (n - 1) // 2
  return AsymptoticSign(a=(-1)**(m + 1) * math.comb(2 * m, m), beta_gt_gamma=n % 4 == 1)
