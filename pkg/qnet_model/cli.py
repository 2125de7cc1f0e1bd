"""Command-line front end: `qnet distribution | certify | threshold | model`.

Exit codes: 0 success (or no certificate found), 2 invalid configuration,
3 outcome cap exceeded, 10 nonlocality certified, 11 no model solution.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from qnet_model.data import data_processing, schema
from qnet_model.data.enums import (NO_THRESHOLD, NOT_FORCED, QUBIT_LABELS, QUTRIT_LABELS, Command,
                                   ExitCode, ModelKind, OutputFormat, ScenarioKind, SupportKind)
from qnet_model.errors import DomainError, LabelError, NoSolutionError, ResourceLimitError
from qnet_model.models import bricks, certificates, engine, lp_solver
from qnet_model.models import sim_functions, sim_parameters, surds, trilocal
from qnet_model.models.network import CycleNetwork
from qnet_model.models.surds import Scalar

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
  """Validated settings of one CLI run.

  Attributes:
    command Command:
      Subcommand to run.
    scenario ScenarioKind | None:
      Network source for distribution and certify.
    n_parties int:
      Cycle length (3 for the triangle and the qutrit example).
    u_sq str | None:
      Squared measurement parameter as typed.
    lambda0_sq str:
      Squared Schmidt coefficient as typed.
    scenario_path Path | None:
      JSON scenario file.
    output Path | None:
      Main output file, stdout when None.
    output_format OutputFormat:
      CSV or JSON for distributions.
    exact bool:
      Exact arithmetic, off with --float.
    seed int:
      Seed of every random draw.
    samples int:
      Number of model samples, 0 for none.
    samples_output Path | None:
      CSV file for samples.
    lp_output Path | None:
      LP text of the marginal problem.
    model ModelKind | None:
      Model built by the model command.
    tolerance float:
      Tolerance for float comparisons in reports.
    max_outcomes int:
      Cap on the number of outcome tuples.
    sweep tuple[float, ...]:
      lambda0^2 values of a threshold sweep.
    lower float | None:
      Lower end of the threshold bracket on u.
    xtol float:
      Bisection tolerance of the threshold search.
  """
  command: Command
  scenario: ScenarioKind | None = None
  n_parties: int = 3
  u_sq: str | None = None
  lambda0_sq: str = '1/2'
  scenario_path: Path | None = None
  output: Path | None = None
  output_format: OutputFormat = OutputFormat.CSV
  exact: bool = True
  seed: int = sim_parameters.RANDOM_SEED
  samples: int = 0
  samples_output: Path | None = None
  lp_output: Path | None = None
  model: ModelKind | None = None
  tolerance: float = sim_parameters.NEGATIVE_TOLERANCE
  max_outcomes: int = sim_parameters.MAX_OUTCOMES
  sweep: tuple[float, ...] = field(default_factory=tuple)
  lower: float | None = None
  xtol: float = sim_parameters.BISECTION_XTOL


@dataclass(frozen=True)
class Scenario:
  """A network together with the parameters the certificates need.

  Attributes:
    network CycleNetwork:
      The network.
    qubit bool:
      Qubit cycle with identical sources and measurements.
    u_sq Scalar | None:
      Squared measurement parameter of a qubit cycle.
    lambda0_sq Scalar | None:
      Squared Schmidt coefficient of a qubit cycle.
    eta tuple | None:
      (eta_up, eta_down) of a qutrit triangle.
  """
  network: CycleNetwork
  qubit: bool
  u_sq: Scalar | None = None
  lambda0_sq: Scalar | None = None
  eta: tuple[Any, Any] | None = None


def _open_unit(value: Scalar, name: str) -> None:
  if not 0 < float(value) < 1:
    raise DomainError(f'{name} must lie in (0, 1), got {value}')


def config_from_args(args: argparse.Namespace) -> RunConfig:
  'Turn parsed arguments into a RunConfig, validating every range'
  command = Command[args.command.upper()]
  config = RunConfig(command=command)
  config.output = Path(args.output) if args.output else None
  config.tolerance = args.tolerance
  if config.tolerance <= 0:
    raise DomainError(f'tolerance must be positive, got {config.tolerance}')
  if command in (Command.DISTRIBUTION, Command.CERTIFY):
    config.exact = not args.float
    config.max_outcomes = args.max_outcomes
    if config.max_outcomes < 1:
      raise DomainError(f'--max-outcomes must be positive, got {config.max_outcomes}')
    config.u_sq, config.lambda0_sq = args.u2, args.lambda02
    if args.triangle:
      config.scenario = ScenarioKind.TRIANGLE
    elif args.cycle is not None:
      config.scenario, config.n_parties = ScenarioKind.CYCLE, args.cycle
    elif args.qutrit_example:
      config.scenario = ScenarioKind.QUTRIT_EXAMPLE
    else:
      config.scenario, config.scenario_path = ScenarioKind.FILE, Path(args.scenario)
    if config.scenario in (ScenarioKind.TRIANGLE, ScenarioKind.CYCLE):
      if config.n_parties < 3:
        raise DomainError(f'a cycle needs at least 3 parties, got {config.n_parties}')
      if config.u_sq is None:
        raise DomainError('--u2 is required for qubit cycles')
      _open_unit(data_processing.parse_scalar(config.u_sq, False), '--u2')
      _open_unit(data_processing.parse_scalar(config.lambda0_sq, False), '--lambda02')
  if command is Command.DISTRIBUTION:
    config.output_format = OutputFormat[args.format.upper()]
  if command is Command.CERTIFY:
    config.lp_output = Path(args.lp_output) if args.lp_output else None
  if command is Command.THRESHOLD:
    if args.lambda02:
      sweep = [float(data_processing.parse_scalar(x, False)) for x in args.lambda02]
    else:
      if args.points < 2:
        raise DomainError(f'a sweep needs at least 2 points, got {args.points}')
      sweep = np.linspace(args.start, args.stop, args.points).tolist()
    for value in sweep:
      _open_unit(value, 'lambda0^2')
    config.sweep = tuple(sweep)
    config.lower, config.xtol = args.lower, args.xtol
    if config.lower is not None:
      _open_unit(config.lower, '--lower')
    if config.xtol <= 0:
      raise DomainError(f'--xtol must be positive, got {config.xtol}')
  if command is Command.MODEL:
    config.model = ModelKind.UNIFORM_CHI if args.uniform_chi else ModelKind.THRESHOLD
    config.n_parties = args.cycle if args.cycle is not None else 3
    if config.n_parties < 3:
      raise DomainError(f'a cycle needs at least 3 parties, got {config.n_parties}')
    if config.model is ModelKind.THRESHOLD and config.n_parties != 3:
      raise DomainError('the threshold model lives on the triangle')
    config.u_sq = args.u2
    if config.u_sq is not None:
      _open_unit(data_processing.parse_scalar(config.u_sq, False), '--u2')
    config.seed, config.samples = args.seed, args.samples
    if config.samples < 0:
      raise DomainError(f'--samples must be nonnegative, got {config.samples}')
    if args.samples_output:
      config.samples_output = Path(args.samples_output)
    elif config.samples and config.output is not None:
      config.samples_output = config.output.with_name(config.output.stem + '_samples.csv')
    if config.samples and config.samples_output is None:
      raise DomainError('--samples needs --samples-output or --output')
  return config


def _u_sq_from_json(data: Any, exact: bool) -> Scalar:
  keys = schema.ScenarioSchema
  if keys.U_SQ in data:
    return data_processing.parse_scalar(data[keys.U_SQ], exact)
  u = data_processing.parse_scalar(data[keys.U], exact)
  return surds.simplify(u * u)


def _eta_from_json(data: Any, exact: bool) -> tuple[Any, Any]:
  up = data.get(schema.ScenarioSchema.ETA_UP)
  down = data.get(schema.ScenarioSchema.ETA_DOWN)
  if up is None:
    return bricks.example_eta_matrices()
  return ([[data_processing.parse_scalar(x, exact) for x in row] for row in up],
          [[data_processing.parse_scalar(x, exact) for x in row] for row in down])


def _file_scenario(network: CycleNetwork, data: Any, exact: bool) -> Scenario:
  """Certificate parameters of a scenario file.

  Short-form files carry them at the top level. Files with a "sources"
  list get the qubit parameters only when every source is the same state,
  and the qutrit ones only when every source is maximally entangled.
  """
  keys = schema.ScenarioSchema
  if keys.SOURCES not in data:
    kind = str(data.get(keys.KIND, keys.QUBIT)).lower()
    if kind == keys.QUBIT:
      return Scenario(network, qubit=True, u_sq=_u_sq_from_json(data, exact),
                      lambda0_sq=data_processing.parse_scalar(
                          data.get(keys.LAMBDA0_SQ, '1/2'), exact))
    if kind == keys.QUTRIT:
      return Scenario(network, qubit=False, eta=_eta_from_json(data, exact))
    return Scenario(network, qubit=False)
  measurement = data.get(keys.MEASUREMENT)
  if measurement is None:
    return Scenario(network, qubit=False)
  kind = str(measurement.get(keys.KIND, keys.QUBIT)).lower()
  squares = {s.squares for s in network.sources}
  if kind == keys.QUBIT and len(squares) == 1:
    (lambda0_sq, _), = squares
    return Scenario(network, qubit=True, u_sq=_u_sq_from_json(measurement, exact),
                    lambda0_sq=lambda0_sq)
  if kind == keys.QUTRIT and all(
      len(s) == 3 and all(math.isclose(float(x), 1 / 3) for x in s) for s in squares):
    return Scenario(network, qubit=False, eta=_eta_from_json(measurement, exact))
  return Scenario(network, qubit=False)


def build_scenario(config: RunConfig) -> Scenario:
  'Network and certificate parameters of a distribution or certify run'
  exact = config.exact
  if config.scenario is ScenarioKind.QUTRIT_EXAMPLE:
    return Scenario(sim_functions.create_qutrit_triangle(exact=exact), qubit=False,
                    eta=bricks.example_eta_matrices())
  if config.scenario is ScenarioKind.FILE:
    try:
      data = json.loads(config.scenario_path.read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as exc:
      raise DomainError(f'cannot read scenario {config.scenario_path}: {exc}') from exc
    network = data_processing.load_network(config.scenario_path, exact=exact)
    return _file_scenario(network, data, exact)
  u_sq = data_processing.parse_scalar(config.u_sq, exact)
  lambda0_sq = data_processing.parse_scalar(config.lambda0_sq, exact)
  network = sim_functions.create_cycle_network(config.n_parties, u_sq, lambda0_sq, exact=exact)
  return Scenario(network, qubit=True, u_sq=u_sq, lambda0_sq=lambda0_sq)


def _summary(config: RunConfig, line: str) -> None:
  'Print a summary line, to stderr when stdout carries the data'
  print(line, file=sys.stderr if config.output is None else sys.stdout)


def _distribution_json(scenario: Scenario, dist) -> dict[str, Any]:
  return {
      schema.ReportSchema.SCENARIO: data_processing.network_to_json(scenario.network),
      schema.DistributionSchema.OUTCOMES: [{
          schema.DistributionSchema.OUTCOME: [l.token for l in outcome],
          schema.DistributionSchema.PROBABILITY: data_processing.scalar_to_json(p),
      } for outcome, p in dist.items()],
  }


def cmd_distribution(config: RunConfig) -> int:
  """Write the full outcome distribution of a scenario.

  Prints the normalization check and the size of the support.
  """
  scenario = build_scenario(config)
  dist = engine.cycle_distribution(scenario.network, config.max_outcomes)
  if config.output_format is OutputFormat.JSON:
    text = json.dumps(_distribution_json(scenario, dist), indent=2) + '\n'
  else:
    text = data_processing.distribution_to_frame(dist).to_csv(index=False, lineterminator='\n')
  if config.output is None:
    sys.stdout.write(text)
  else:
    config.output.write_text(text, encoding='utf-8')
  total = sum(dist.probabilities.values(), Fraction(0) if dist.exact else 0.0)
  _summary(config, f'{schema.PrintSchema.OUTCOMES}: {dist.n_outcomes}')
  _summary(config, f'{schema.PrintSchema.NORMALIZATION}: {data_processing.format_scalar(total)}')
  _summary(config, f'{schema.PrintSchema.SUPPORT}: {len(dist.support())}')
  return ExitCode.OK


def _marginal_problem(scenario: Scenario) -> lp_solver.FeasibilityProblem | None:
  network = scenario.network
  if scenario.qubit:
    if network.n_parties == 3:
      return certificates.triangle_marginal_problem(scenario.lambda0_sq, scenario.u_sq)
    if network.n_parties % 2 == 1 and scenario.lambda0_sq == Fraction(1, 2):
      return certificates.cycle_xi_problem(network.n_parties, scenario.u_sq)
    logger.warning('no marginal problem for a qubit cycle of length %d with lambda0^2=%s',
                   network.n_parties, scenario.lambda0_sq)
    return None
  if scenario.eta is not None:
    return certificates.qutrit_marginal_problem(*scenario.eta)
  logger.warning('custom scenario: only support and Finner checks are run')
  return None


def _forced_json(eta) -> dict[str, Any] | None:
  forced = certificates.qutrit_forced_solution(*eta)
  if forced is NOT_FORCED:
    return None
  keys = schema.ReportSchema
  as_json = data_processing.scalar_to_json
  return {
      keys.M1: [[as_json(x) for x in row] for row in forced.m1],
      keys.M2: [[as_json(x) for x in row] for row in forced.m2],
      keys.CONSISTENT: forced.consistent,
      keys.NEGATIVE: [[t, i, j, as_json(x)] for t, i, j, x in forced.negative_entries()],
  }


def cmd_certify(config: RunConfig) -> int:
  """Run every applicable certificate on a scenario.

  Support constraints and the Finner inequality are checked on the computed
  distribution, then the marginal problem of the scenario is solved and, for
  the qubit triangle, the marginal inequality evaluated. Returns 10 when
  any of them rules out a classical model.
  """
  scenario = build_scenario(config)
  network = scenario.network
  dist = engine.cycle_distribution(network, config.max_outcomes)
  keys = schema.ReportSchema
  report: dict[str, Any] = {keys.SCENARIO: data_processing.network_to_json(network)}
  certified = False

  label_sets = set(network.label_sets)
  kind = None
  if label_sets == {QUBIT_LABELS}:
    kind = SupportKind.QUBIT_CYCLE
  elif label_sets == {QUTRIT_LABELS} and network.n_parties == 3:
    kind = SupportKind.QUTRIT_TRIANGLE
  if kind is not None:
    support = certificates.check_support_constraints(dist, kind)
    report[keys.SUPPORT] = data_processing.constraint_report_to_json(support, config.tolerance)
    certified |= not support.holds(config.tolerance)

  if network.n_parties == 3:
    slack = certificates.finner_slack(dist)
    argmin = min(slack, key=lambda o: float(slack[o]))
    report[keys.FINNER] = {
        keys.MIN_SLACK: data_processing.scalar_to_json(slack[argmin]),
        keys.ARGMIN: [l.token for l in argmin],
    }
    certified |= float(slack[argmin]) < -config.tolerance

  problem = _marginal_problem(scenario)
  if problem is not None:
    result = lp_solver.lp_feasible(problem)
    report[keys.LP] = data_processing.feasibility_to_json(problem, result)
    certified |= not result.feasible
    if config.lp_output is not None:
      config.lp_output.write_text(data_processing.problem_to_lp_text(problem), encoding='utf-8')
  if scenario.qubit and network.n_parties == 3:
    lhs = certificates.marginal_inequality_lhs(math.sqrt(float(scenario.lambda0_sq)),
                                               math.sqrt(float(scenario.u_sq)))
    report[keys.INEQUALITY] = lhs
    certified |= lhs < 0
  if scenario.eta is not None:
    report[keys.FORCED] = _forced_json(scenario.eta)

  report[keys.VERDICT] = keys.CERTIFIED if certified else keys.CONSISTENT
  if config.output is None:
    sys.stdout.write(json.dumps(report, indent=2) + '\n')
  else:
    data_processing.write_json(report, config.output)
  message = schema.PrintSchema.CERTIFIED if certified else schema.PrintSchema.CONSISTENT
  _summary(config, message)
  return ExitCode.INFEASIBLE if certified else ExitCode.OK


def _threshold_point(lambda0_sq: float, lower: float | None, xtol: float) -> float | None:
  u_max = certificates.u_threshold(math.sqrt(lambda0_sq), xtol=xtol, lower=lower)
  return None if u_max is NO_THRESHOLD else u_max


def cmd_threshold(config: RunConfig) -> int:
  """Sweep lambda0^2 and write the threshold u_max^2 of every point.

  Points run on a thread pool of QNET_THREADS workers; rows keep the sweep
  order.
  """
  def point(value: float) -> float | None:
    return _threshold_point(value, config.lower, config.xtol)

  with ThreadPoolExecutor(max_workers=sim_parameters.thread_count()) as pool:
    thresholds = list(pool.map(point, config.sweep))
  dataf = data_processing.threshold_frame(list(zip(config.sweep, thresholds)))
  text = dataf.to_csv(index=False, lineterminator='\n')
  if config.output is None:
    sys.stdout.write(text)
  else:
    config.output.write_text(text, encoding='utf-8')
  found = sum(t is not None for t in thresholds)
  _summary(config, f'{schema.PrintSchema.THRESHOLD_ROWS}: {found} of {len(thresholds)}')
  return ExitCode.OK


def _build_model(config: RunConfig):
  'Model, its quantum target, its parameters and its largest residual'
  if config.model is ModelKind.UNIFORM_CHI:
    if config.u_sq is not None and data_processing.parse_scalar(config.u_sq) != Fraction(1, 2):
      raise NoSolutionError(f'the uniform chi model needs u^2 = 1/2, got {config.u_sq}')
    model = trilocal.uniform_chi_model(config.n_parties)
    quantum = engine.cycle_distribution(
        sim_functions.create_cycle_network(config.n_parties, Fraction(1, 2)))
    return model, quantum, {'u2': '1/2'}, 0.0
  u_sq = None if config.u_sq is None else float(data_processing.parse_scalar(config.u_sq, False))
  params = trilocal.solve_threshold_model_params(u_sq)
  model = trilocal.build_threshold_model(params)
  quantum = engine.cycle_distribution(
      sim_functions.create_triangle_network(params.u_sq, exact=False))
  residual = max(abs(r) for r in trilocal.threshold_model_residuals(params).values())
  parameters = {
      'u2': params.u_sq,
      'kappa': list(params.kappa),
      'tau': list(params.tau),
  }
  return model, quantum, parameters, residual


def cmd_model(config: RunConfig) -> int:
  """Build a classical model, compare it with the quantum distribution.

  Writes the model JSON with its total variation distance and, when asked,
  seeded samples as CSV.
  """
  model, quantum, parameters, residual = _build_model(config)
  distance = engine.total_variation(trilocal.evaluate(model), quantum)
  keys = schema.ModelSchema
  kind = 'uniform-chi' if config.model is ModelKind.UNIFORM_CHI else 'threshold'
  document = data_processing.model_to_json(model, kind, parameters)
  document[keys.TOTAL_VARIATION] = data_processing.scalar_to_json(distance)
  document[keys.RESIDUALS] = residual
  if config.samples:
    samples = trilocal.sample(model, config.samples, seed=config.seed)
    data_processing.write_samples_csv(samples, config.samples_output)
    empirical = trilocal.empirical_distribution(samples, model.label_sets)
    document[keys.SAMPLES] = config.samples
    document[keys.SEED] = config.seed
    empirical_distance = float(engine.total_variation(empirical, quantum))
    _summary(config, f'{schema.PrintSchema.EMPIRICAL}: {empirical_distance:.6f}')
  if config.output is None:
    sys.stdout.write(json.dumps(document, indent=2) + '\n')
  else:
    data_processing.write_json(document, config.output)
  _summary(config, f'{schema.PrintSchema.TOTAL_VARIATION}: {float(distance):.3e}')
  return ExitCode.OK


COMMANDS: dict[Command, Callable[[RunConfig], int]] = {
    Command.DISTRIBUTION: cmd_distribution,
    Command.CERTIFY: cmd_certify,
    Command.THRESHOLD: cmd_threshold,
    Command.MODEL: cmd_model,
}


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
  group = parser.add_mutually_exclusive_group(required=True)
  group.add_argument('--triangle', action='store_true', help='Qubit triangle.')
  group.add_argument('--cycle', type=int, metavar='N', help='Qubit cycle of N parties.')
  group.add_argument('--qutrit-example', action='store_true',
                     help='Qutrit triangle with the counterexample basis.')
  group.add_argument('--scenario', metavar='PATH', help='JSON scenario file.')
  parser.add_argument('--u2', help='Squared measurement parameter, e.g. 0.8 or 4/5.')
  parser.add_argument('--lambda02', default='1/2', help='Squared Schmidt coefficient.')
  parser.add_argument('--float', action='store_true', help='Use floating point arithmetic.')
  parser.add_argument('--max-outcomes', type=int, default=sim_parameters.MAX_OUTCOMES)


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(prog='qnet', description=__doc__.splitlines()[0])
  parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging.')
  commands = parser.add_subparsers(dest='command', required=True)

  common = argparse.ArgumentParser(add_help=False)
  common.add_argument('--output', '-o', metavar='PATH', help='Output file, stdout if omitted.')
  common.add_argument('--tolerance', type=float, default=sim_parameters.NEGATIVE_TOLERANCE)

  distribution = commands.add_parser('distribution', parents=[common],
                                     help='Full outcome distribution.')
  _add_scenario_arguments(distribution)
  distribution.add_argument('--format', choices=['csv', 'json'], default='csv')

  certify = commands.add_parser('certify', parents=[common], help='Nonlocality certificates.')
  _add_scenario_arguments(certify)
  certify.add_argument('--lp-output', metavar='PATH', help='Write the marginal problem.')

  threshold = commands.add_parser('threshold', parents=[common],
                                  help='Threshold u_max^2 over lambda0^2.')
  threshold.add_argument('--lambda02', nargs='*', help='Explicit lambda0^2 values.')
  threshold.add_argument('--start', type=float, default=0.01)
  threshold.add_argument('--stop', type=float, default=0.99)
  threshold.add_argument('--points', type=int, default=99)
  threshold.add_argument('--lower', type=float, help='Lower end of the bracket on u.')
  threshold.add_argument('--xtol', type=float, default=sim_parameters.BISECTION_XTOL)

  model = commands.add_parser('model', parents=[common], help='Classical models.')
  kind = model.add_mutually_exclusive_group(required=True)
  kind.add_argument('--uniform-chi', action='store_true', help='Model at u^2 = 1/2.')
  kind.add_argument('--appendix-d', '--threshold-model', dest='threshold_model',
                    action='store_true', help='Triangle model at the threshold.')
  model.add_argument('--cycle', type=int, metavar='N', help='Cycle length (uniform chi only).')
  model.add_argument('--u2', help='Squared measurement parameter.')
  model.add_argument('--samples', type=int, default=0)
  model.add_argument('--samples-output', metavar='PATH')
  model.add_argument('--seed', type=int, default=sim_parameters.RANDOM_SEED)
  return parser


def main(argv: Sequence[str] | None = None) -> int:
  args = build_parser().parse_args(argv)
  logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                      format='%(asctime)s %(levelname)s %(name)s: %(message)s')
  try:
    config = config_from_args(args)
    return int(COMMANDS[config.command](config))
  except ResourceLimitError as exc:
    logger.error('%s', exc)
    return int(ExitCode.RESOURCE)
  except NoSolutionError as exc:
    logger.error('%s: %s', schema.PrintSchema.NO_SOLUTION, exc)
    return int(ExitCode.NO_SOLUTION)
  except (DomainError, LabelError) as exc:
    logger.error('%s', exc)
    return int(ExitCode.CONFIG)
