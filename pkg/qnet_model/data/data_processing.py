"""Tabular and JSON forms of distributions, scenarios, models and certificates."""
from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

import pandas as pd

from qnet_model.data import schema
from qnet_model.data.enums import Label
from qnet_model.errors import DomainError, LabelError
from qnet_model.models import bricks, sim_functions, surds
from qnet_model.models.certificates import ConstraintReport
from qnet_model.models.distribution import Outcome, OutcomeDistribution
from qnet_model.models.lp_solver import FeasibilityProblem, FeasibilityResult
from qnet_model.models.bricks import JointBasis
from qnet_model.models.network import CycleNetwork
from qnet_model.models.surds import Scalar
from qnet_model.models.trilocal import TrilocalModel

logger = logging.getLogger(__name__)


def format_scalar(value: Scalar) -> str:
  """Text form used in CSV cells.

  Fractions print as 'p/q', floats with 17 significant digits, surds as
  sums of c*sqrt(r).
  """
  if isinstance(value, float):
    return f'{value:.17g}'
  return str(surds.simplify(value))


def scalar_to_json(value: Scalar) -> int | float | str:
  value = surds.simplify(value)
  if isinstance(value, Fraction):
    return value.numerator if value.denominator == 1 else str(value)
  if isinstance(value, surds.Surd):
    return str(value)
  return float(value)


_ROOT_TERM = re.compile(r'([+-]?)(?:([0-9./]+)\*)?sqrt\(([0-9./]+)\)')


def _parse_root_sum(text: str, exact: bool) -> Scalar:
  'Sum of terms c, sqrt(q) and c*sqrt(q), the form str(Surd) prints'
  terms = re.findall(r'[+-]?[^+-]+', text)
  if ''.join(terms) != text:
    raise ValueError(text)
  total: Scalar = Fraction(0) if exact else 0.0
  for term in terms:
    match = _ROOT_TERM.fullmatch(term)
    if match is None:
      value = Fraction(term)
      total += value if exact else float(value)
      continue
    sign_text, coefficient, inner = match.groups()
    c = Fraction(coefficient or 1) * (-1 if sign_text == '-' else 1)
    q = Fraction(inner)
    total += c * surds.exact_sqrt(q) if exact else float(c) * float(q)**0.5
  return surds.simplify(total) if exact else total


def parse_scalar(value: Any, exact: bool = True) -> Scalar:
  """Read a number from a scenario file.

  Numbers and strings such as '2/5' or '0.8' are taken as written. Square
  roots of nonnegative rationals may appear in sums such as 'sqrt(1/2)',
  '-sqrt(3/5)' or '2/5*sqrt(5) - 1', exact in exact mode.
  """
  if not isinstance(value, str):
    return surds.as_scalar(value, exact)
  text = value.replace(' ', '')
  try:
    if 'sqrt' in text:
      return _parse_root_sum(text, exact)
    return surds.as_scalar(text, exact) if exact else float(Fraction(text))
  except (ValueError, ZeroDivisionError) as exc:
    raise DomainError(f'cannot read a number from {value!r}') from exc


def distribution_to_frame(dist: OutcomeDistribution) -> pd.DataFrame:
  """One row per outcome tuple, zeros included, in lexicographic order.

  Arguments:
    dist OutcomeDistribution:
      The distribution.

  Returns:
      A dataframe with one label column per party and a probability column
      of formatted values.
  """
  columns = [schema.DistributionSchema.PARTY.format(k) for k in range(dist.arity)]
  rows = [[label.token for label in outcome] + [format_scalar(p)] for outcome, p in dist.items()]
  return pd.DataFrame(rows, columns=columns + [schema.DistributionSchema.PROBABILITY])


def write_distribution_csv(dist: OutcomeDistribution, path: Path) -> None:
  distribution_to_frame(dist).to_csv(path, index=False, lineterminator='\n')


def read_distribution_csv(path: Path) -> OutcomeDistribution:
  """Load a distribution written by write_distribution_csv.

  The probability column is exact when no entry carries a decimal point or
  exponent. Label order per party is the order of first appearance.
  """
  dataf = pd.read_csv(path, dtype=str, keep_default_na=False)
  probability = schema.DistributionSchema.PROBABILITY
  if probability not in dataf.columns:
    raise DomainError(f'{path} has no {probability} column')
  parties = [c for c in dataf.columns if c != probability]
  label_sets = tuple(
      tuple(Label.from_token(t) for t in dict.fromkeys(dataf[c])) for c in parties)
  exact = not dataf[probability].str.contains(r'[.eE]').any()
  values = {}
  for record in dataf.to_dict('records'):
    outcome = tuple(Label.from_token(record[c]) for c in parties)
    text = record[probability]
    values[outcome] = Fraction(text) if exact else float(text)
  return OutcomeDistribution(label_sets, values)


def _matrix(rows: Sequence[Sequence[Any]], exact: bool) -> list[list[Scalar]]:
  return [[parse_scalar(x, exact) for x in row] for row in rows]


def _coarse_from_json(coarse: Mapping[str, str] | None) -> dict[Label, Label] | None:
  if coarse is None:
    return None
  return {Label.from_token(k): Label.from_token(v) for k, v in coarse.items()}


def _custom_basis_from_json(data: Mapping[str, Any], exact: bool) -> JointBasis:
  keys = schema.ScenarioSchema
  labels = [Label.from_token(t) for t in data[keys.LABELS]]
  eigenstates = [_matrix(c, exact) for c in data[keys.EIGENSTATES]]
  return bricks.custom_basis(eigenstates, labels, _coarse_from_json(data.get(keys.COARSE)))


def basis_from_json(data: Mapping[str, Any], exact: bool = True) -> JointBasis:
  """Build a party measurement from its scenario object.

  Kinds: 'qubit' (u2, or the unsquared u), 'qutrit' (optional eta_up and
  eta_down, the counterexample basis otherwise) and 'custom' (eigenstates,
  labels, optional coarse map).
  """
  keys = schema.ScenarioSchema
  kind = str(data.get(keys.KIND, keys.QUBIT)).lower()
  if kind == keys.QUBIT:
    if keys.U_SQ in data:
      return bricks.qubit_basis_from_square(parse_scalar(data[keys.U_SQ], exact), exact=exact)
    return bricks.qubit_basis(parse_scalar(data[keys.U], exact))
  if kind == keys.QUTRIT:
    eta_up, eta_down = data.get(keys.ETA_UP), data.get(keys.ETA_DOWN)
    if (eta_up is None) != (eta_down is None):
      raise DomainError('give both eta matrices or neither')
    if eta_up is None:
      return bricks.qutrit_example_basis()
    return bricks.qutrit_basis(_matrix(eta_up, exact), _matrix(eta_down, exact))
  if kind == keys.CUSTOM:
    return _custom_basis_from_json(data, exact)
  raise DomainError(f'unknown measurement kind {kind!r}')


def _broadcast(items: Sequence[Any], n: int, name: str) -> list[Any]:
  if len(items) == 1:
    return list(items) * n
  if len(items) != n:
    raise DomainError(f'{n} parties need 1 or {n} {name}, got {len(items)}')
  return list(items)


def _network_from_sources(data: Mapping[str, Any], exact: bool) -> CycleNetwork:
  keys = schema.ScenarioSchema
  n = int(data[keys.N])
  if n < 3:
    raise DomainError(f'a cycle needs at least 3 parties, got {n}')
  sources = [
      bricks.SchmidtState(tuple(parse_scalar(x, exact) for x in lambdas))
      for lambdas in _broadcast(data[keys.SOURCES], n, keys.SOURCES)
  ]
  if keys.MEASUREMENTS in data:
    measurements = _broadcast(data[keys.MEASUREMENTS], n, keys.MEASUREMENTS)
  else:
    measurements = [data[keys.MEASUREMENT]] * n
  built: dict[int, JointBasis] = {}
  for m in measurements:
    if id(m) not in built:
      built[id(m)] = basis_from_json(m, exact)
  bases = [built[id(m)] for m in measurements]
  return CycleNetwork(n, tuple(sources), tuple(bases))


def network_from_json(data: Mapping[str, Any], exact: bool = True) -> CycleNetwork:
  """Build a network from a scenario description.

  The full form is {"n": N, "sources": [[lambda...], ...], "measurement":
  {"kind": ..., params}}, with one Schmidt coefficient vector per source
  (or a single vector shared by all) and one measurement object for every
  party. A "measurements" list gives each party its own basis instead.

  Objects without "sources" use the short form: 'qubit' (n_parties, u2,
  lambda02), 'qutrit' (optional eta_up and eta_down, 3 parties) and
  'custom' (n_parties, schmidt_squares, eigenstates, labels, optional
  coarse map), all sources and parties identical.

  Arguments:
    data Mapping[str, Any]:
      Parsed JSON object.
    exact bool:
      Exact arithmetic for exact inputs.

  Returns:
      The cycle network.
  """
  keys = schema.ScenarioSchema
  if keys.SOURCES in data:
    return _network_from_sources(data, exact)
  kind = str(data.get(keys.KIND, keys.QUBIT)).lower()
  if kind == keys.QUBIT:
    return sim_functions.create_cycle_network(
        int(data.get(keys.N_PARTIES, 3)),
        parse_scalar(data[keys.U_SQ], exact),
        parse_scalar(data.get(keys.LAMBDA0_SQ, '1/2'), exact),
        exact=exact,
    )
  if kind == keys.QUTRIT:
    if int(data.get(keys.N_PARTIES, 3)) != 3:
      raise DomainError('the qutrit scenario is a triangle')
    basis = basis_from_json(data, exact)
    source = bricks.maximally_entangled(3, exact=exact and basis.exact)
    return sim_functions.create_network(3, source, basis)
  if kind == keys.CUSTOM:
    basis = _custom_basis_from_json(data, exact)
    source = bricks.SchmidtState.from_squares(
        [parse_scalar(s, exact) for s in data[keys.SCHMIDT_SQUARES]], exact=exact)
    return sim_functions.create_network(int(data.get(keys.N_PARTIES, 3)), source, basis)
  raise DomainError(f'unknown scenario kind {kind!r}')


def load_network(path: Path, exact: bool = True) -> CycleNetwork:
  try:
    data = json.loads(Path(path).read_text(encoding='utf-8'))
  except json.JSONDecodeError as exc:
    raise DomainError(f'{path} is not valid JSON: {exc}') from exc
  try:
    return network_from_json(data, exact=exact)
  except LabelError:
    raise
  except KeyError as exc:
    raise DomainError(f'scenario {path} misses key {exc}') from exc


def basis_to_json(basis: JointBasis) -> dict[str, Any]:
  'Measurement object that basis_from_json reads back to the same basis'
  keys = schema.ScenarioSchema
  return {
      keys.KIND: keys.CUSTOM,
      keys.BASIS: basis.kind.name.lower(),
      keys.LABELS: [l.token for l in basis.labels],
      keys.EIGENSTATES: [[[scalar_to_json(x) for x in row] for row in c]
                         for c in basis.eigenstates],
      keys.COARSE: {l.token: basis.coarse_map[l].token for l in basis.labels},
  }


def network_to_json(network: CycleNetwork) -> dict[str, Any]:
  """Scenario object of a network, readable by network_from_json.

  One "measurement" object when every party shares a basis, a
  "measurements" list otherwise.
  """
  keys = schema.ScenarioSchema
  data: dict[str, Any] = {
      keys.N: network.n_parties,
      keys.SOURCES: [[scalar_to_json(x) for x in source.lambdas] for source in network.sources],
  }
  first = network.measurements[0]
  if all(m is first for m in network.measurements):
    data[keys.MEASUREMENT] = basis_to_json(first)
  else:
    data[keys.MEASUREMENTS] = [basis_to_json(m) for m in network.measurements]
  return data


def model_to_json(model: TrilocalModel, kind: str,
                  parameters: Mapping[str, Any] | None = None) -> dict[str, Any]:
  """JSON object describing a hidden-variable model.

  Each source lists its hidden values and weights; each party lists its
  response to every (left, right) pair of hidden values.
  """
  keys = schema.ModelSchema
  n = model.n_parties
  sources = []
  for s, weights in enumerate(model.source_weights):
    names = (model.hidden_names[s] if model.hidden_names is not None else
             tuple(str(h) for h in range(len(weights))))
    sources.append({
        keys.HIDDEN: list(names),
        keys.WEIGHTS: [scalar_to_json(w) for w in weights],
    })
  responses = []
  for k in range(n):
    rows = []
    for (left, right), response in sorted(model.responses[k].items()):
      rows.append({
          keys.LEFT: left,
          keys.RIGHT: right,
          keys.OUTPUT: {l.token: scalar_to_json(p) for l, p in response.items() if p != 0},
      })
    responses.append(rows)
  result = {
      keys.KIND: kind,
      keys.N_PARTIES: n,
      keys.LABELS: [[l.token for l in labels] for labels in model.label_sets],
      keys.SOURCES: sources,
      keys.RESPONSES: responses,
  }
  if parameters:
    result[keys.PARAMETERS] = dict(parameters)
  return result


def _term(coefficient: Scalar, name: str, first: bool) -> str:
  value = surds.simplify(coefficient)
  negative = surds.sign(value) < 0
  magnitude = format_scalar(-value if negative else value)
  text = name if magnitude == '1' else f'{magnitude} {name}'
  if first:
    return f'- {text}' if negative else text
  return f'- {text}' if negative else f'+ {text}'


def problem_to_lp_text(problem: FeasibilityProblem) -> str:
  """The problem in a CPLEX-like LP layout with a zero objective.

  Exact coefficients are written as fractions or surds, so the text is only
  machine readable by LP tools when the data is rational.
  """
  lines = [f'\\ {problem.title}' if problem.title else '\\ feasibility problem',
           'Minimize', ' obj: 0', 'Subject To']
  for row in problem.equalities:
    terms = [
        _term(c, problem.variable_names[j], i == 0)
        for i, (j, c) in enumerate(sorted(row.coefficients.items()))
    ]
    lhs = ' '.join(terms) if terms else '0'
    lines.append(f' {row.name}: {lhs} = {format_scalar(row.rhs)}')
  lines.append('Bounds')
  lines.extend(f' {name} >= 0' for name in problem.variable_names)
  lines.append('End')
  return '\n'.join(lines) + '\n'


def feasibility_to_json(problem: FeasibilityProblem, result: FeasibilityResult) -> dict[str, Any]:
  keys = schema.ReportSchema
  report = {
      keys.TITLE: problem.title,
      keys.STATUS: result.status.name.lower(),
      keys.EXACT: result.exact,
      keys.PIVOTS: result.pivots,
  }
  if result.feasible:
    report[keys.WITNESS] = {
        name: scalar_to_json(x) for name, x in result.named_witness(problem).items() if x != 0
    }
  else:
    report[keys.FARKAS] = {
        name: scalar_to_json(y) for name, y in result.named_farkas(problem).items() if y != 0
    }
  return report


def constraint_report_to_json(report: ConstraintReport, tol: float) -> dict[str, Any]:
  keys = schema.ReportSchema
  return {
      keys.SUPPORT_HOLDS: report.holds(tol),
      keys.MAX_DEVIATION: scalar_to_json(report.max_deviation),
      keys.VIOLATIONS: [{
          keys.NAME: c.name,
          keys.EXPECTED: scalar_to_json(c.expected),
          keys.OBSERVED: scalar_to_json(c.observed),
          keys.DEVIATION: scalar_to_json(c.deviation),
      } for c in report.violations(tol)],
  }


def outcome_token(outcome: Outcome) -> str:
  return ','.join(label.token for label in outcome)


def samples_to_frame(samples: Sequence[Outcome]) -> pd.DataFrame:
  if not samples:
    raise DomainError('no samples')
  columns = [schema.SampleSchema.PARTY.format(k) for k in range(len(samples[0]))]
  dataf = pd.DataFrame([[l.token for l in outcome] for outcome in samples], columns=columns)
  dataf.index.name = schema.SampleSchema.INDEX
  return dataf


def write_samples_csv(samples: Sequence[Outcome], path: Path) -> None:
  samples_to_frame(samples).to_csv(path, lineterminator='\n')


def threshold_frame(rows: Sequence[tuple[float, float | None]]) -> pd.DataFrame:
  """Threshold sweep table.

  Arguments:
    rows Sequence[tuple[float, float | None]]:
      (lambda0^2, u_max) pairs in sweep order, u_max None where the
      inequality has no threshold.

  Returns:
      Dataframe with lambda0^2, u_max^2, u_max and a status column.
  """
  keys = schema.ThresholdSchema
  records = []
  for lambda0_sq, u_max in rows:
    found = u_max is not None
    records.append({
        keys.LAMBDA0_SQ: format_scalar(float(lambda0_sq)),
        keys.U_MAX_SQ: format_scalar(u_max * u_max) if found else '',
        keys.U_MAX: format_scalar(u_max) if found else '',
        keys.STATUS: keys.FOUND if found else keys.NO_THRESHOLD,
    })
  return pd.DataFrame(records, columns=[keys.LAMBDA0_SQ, keys.U_MAX_SQ, keys.U_MAX, keys.STATUS])


def write_json(obj: Mapping[str, Any], path: Path) -> None:
  Path(path).write_text(json.dumps(obj, indent=2, ensure_ascii=False) + '\n', encoding='utf-8')

