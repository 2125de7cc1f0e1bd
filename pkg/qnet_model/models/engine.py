"""Outcome distributions of cycle networks by transfer-matrix contraction.

For party k and label a the transfer matrix is
T_a[i, j] = lambda^{(k-1)}_i C_a[i, j], the left leg carrying the Schmidt
weight of the source on its left. The amplitude of an outcome is the trace
of T_{a_0} T_{a_1} ... T_{a_{N-1}}; the weights of every source are picked up
exactly once around the ring.
"""
from __future__ import annotations

import itertools
import logging
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, Iterator, Mapping

import numpy as np
import numpy.typing as npt

from qnet_model.data.enums import Label
from qnet_model.errors import (DomainError, LabelError, OutcomeSetMismatchError,
                               ResourceLimitError)
from qnet_model.models import sim_parameters as sp
from qnet_model.models import surds
from qnet_model.models.distribution import Outcome, OutcomeDistribution
from qnet_model.models.network import CycleNetwork
from qnet_model.models.surds import Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
  """Transfer matrix of one outcome label of one party.

  Attributes:
    party int:
      Party index.
    label Label:
      Outcome label.
    matrix npt.NDArray:
      d x d matrix, object dtype in exact mode.
  """
  party: int
  label: Label
  matrix: npt.NDArray[Any]


def transfer_matrices(network: CycleNetwork, party: int,
                      exact: bool | None = None) -> dict[Label, TransferMatrix]:
  'Transfer matrices of every label of one party, in basis order'
  exact = network.exact if exact is None else exact
  basis = network.measurements[party]
  weights = network.sources[network.left_source(party)].lambdas
  result = {}
  for label, coefficients in zip(basis.labels, basis.eigenstates):
    d = basis.dim
    if exact:
      matrix = np.empty((d, d), dtype=object)
      for i in range(d):
        for j in range(d):
          matrix[i, j] = weights[i] * coefficients[i, j]
    else:
      lam = np.array([float(w) for w in weights])
      matrix = lam[:, None] * np.vectorize(float, otypes=[np.float64])(coefficients)
    result[label] = TransferMatrix(party, label, matrix)
  return result


def completeness_defect(network: CycleNetwork, party: int) -> float:
  """Max deviation of sum_a T_a^T T_a from (sum_i lambda_i^2) I.

  The right leg weights do not enter, so the target is the identity times
  the left source norm.
  """
  matrices = transfer_matrices(network, party, exact=False)
  total = sum(t.matrix.T @ t.matrix for t in matrices.values())
  d = network.measurements[party].dim
  norm = sum(float(x)**2 for x in network.sources[network.left_source(party)].lambdas)
  return float(np.max(np.abs(total - norm * np.eye(d))))


def _check_outcome(network: CycleNetwork, outcome: Outcome) -> None:
  if len(outcome) != network.n_parties:
    raise LabelError(f'outcome {outcome} has {len(outcome)} labels for '
                     f'{network.n_parties} parties')
  for k, label in enumerate(outcome):
    network.measurements[k].label_index(label)


def _exact_trace_product(matrices: Iterable[npt.NDArray[Any]]) -> Scalar:
  product = reduce(np.matmul, matrices)
  return surds.simplify(sum((product[i, i] for i in range(product.shape[0])),
                            Fraction(0)))


def amplitude(network: CycleNetwork, outcome: Outcome) -> Scalar:
  """Amplitude <phi_{a_0}| ... <phi_{a_{N-1}}| psi_0 ... psi_{N-1}>.

  Arguments:
    network CycleNetwork:
      The network.
    outcome Outcome:
      One label per party.

  Returns:
    Scalar: exact (Fraction or Surd) for exact networks, float otherwise.
  """
  _check_outcome(network, outcome)
  tables = [transfer_matrices(network, k) for k in range(network.n_parties)]
  matrices = [tables[k][label].matrix for k, label in enumerate(outcome)]
  if network.exact:
    return _exact_trace_product(matrices)
  return float(np.trace(reduce(np.matmul, matrices)))


def check_resources(network: CycleNetwork, max_outcomes: int | None) -> None:
  cap = sp.MAX_OUTCOMES if max_outcomes is None else max_outcomes
  if network.n_outcomes > cap:
    raise ResourceLimitError(f'{network.n_outcomes} outcomes exceed the cap of {cap}')


def iter_probabilities(network: CycleNetwork) -> Iterator[tuple[Outcome, Scalar]]:
  """Stream (outcome, squared amplitude) in lexicographic order.

  Exact networks yield Fractions when the square is rational and Surds
  otherwise.
  """
  tables = [transfer_matrices(network, k) for k in range(network.n_parties)]
  if not network.exact:
    labels, squared = _float_products(tables)
    for index, value in squared:
      yield tuple(label_set[i] for label_set, i in zip(labels, index)), value
    return
  for outcome in itertools.product(*network.label_sets):
    value = _exact_trace_product(tables[k][l].matrix for k, l in enumerate(outcome))
    yield outcome, surds.simplify(value * value)


def _float_products(tables: list[dict[Label, TransferMatrix]]):
  'All traces at once: products are built party by party as a batched matmul'
  labels = [list(t) for t in tables]
  batches = [np.stack([t.matrix for t in table.values()]) for table in tables]
  product = batches[0]
  for batch in batches[1:]:
    product = np.einsum('aij,bjk->abik', product, batch)
    product = product.reshape(-1, *product.shape[-2:])
  traces = np.einsum('nii->n', product)
  shape = tuple(len(l) for l in labels)
  squared = (traces * traces).reshape(shape)
  return labels, np.ndenumerate(squared)


def cycle_distribution(network: CycleNetwork,
                       max_outcomes: int | None = None) -> OutcomeDistribution:
  """Full outcome distribution of a cycle network.

  Arguments:
    network CycleNetwork:
      The network.
    max_outcomes int | None:
      Cap on the number of outcome tuples, default MAX_OUTCOMES.

  Returns:
    OutcomeDistribution: exact when every squared amplitude is rational.
  """
  check_resources(network, max_outcomes)
  values = dict(iter_probabilities(network))
  if network.exact and any(isinstance(p, surds.Surd) for p in values.values()):
    logger.warning('irrational probabilities found; distribution stored as floats')
    values = {o: float(p) for o, p in values.items()}
  elif not network.exact:
    values = {o: float(p) for o, p in values.items()}
  logger.debug('computed %d outcome probabilities (exact=%s)', len(values),
               network.exact)
  return OutcomeDistribution(network.label_sets, values)


def dense_distribution(network: CycleNetwork) -> OutcomeDistribution:
  """Reference distribution by contracting the full state with every basis.

  Every source is the dense d x d tensor diag(lambda); nothing about the
  Schmidt form is exploited. Float arithmetic only.
  """
  n = network.n_parties
  letters = iter(string.ascii_letters)
  outputs = [next(letters) for _ in range(n)]
  first = [next(letters) for _ in range(n)]
  second = [next(letters) for _ in range(n)]
  operands, terms = [], []
  for k in range(n):
    lam = np.array([float(x) for x in network.sources[k].lambdas])
    operands.append(np.diag(lam))
    terms.append(first[k] + second[k])
  for k in range(n):
    basis = network.measurements[k]
    stacked = np.stack([np.vectorize(float, otypes=[np.float64])(c)
                        for c in basis.eigenstates])
    operands.append(stacked)
    terms.append(outputs[k] + second[network.left_source(k)] + first[k])
  expression = ','.join(terms) + '->' + ''.join(outputs)
  amplitudes = np.einsum(expression, *operands)
  values = {}
  for index, value in np.ndenumerate(amplitudes * amplitudes):
    outcome = tuple(network.measurements[k].labels[i] for k, i in enumerate(index))
    values[outcome] = float(value)
  return OutcomeDistribution(network.label_sets, values)


def marginal(dist: OutcomeDistribution, parties: Iterable[int]) -> OutcomeDistribution:
  'Distribution of the listed parties, in ascending party order'
  kept = sorted(set(parties))
  if not kept:
    raise DomainError('marginal needs at least one party')
  if kept[0] < 0 or kept[-1] >= dist.arity:
    raise DomainError(f'parties {kept} out of range for arity {dist.arity}')
  zero = Fraction(0) if dist.exact else 0.0
  values: dict[Outcome, Any] = {}
  for outcome, p in dist.probabilities.items():
    key = tuple(outcome[k] for k in kept)
    values[key] = values.get(key, zero) + p
  return OutcomeDistribution(tuple(dist.label_sets[k] for k in kept), values)


def coarse_grain(dist: OutcomeDistribution,
                 network: CycleNetwork | None = None) -> OutcomeDistribution:
  """Merge labels within coarse classes.

  Uses each party's basis coarse_map when a network is given, and the
  default label families otherwise.
  """
  if network is not None:
    maps: list[Mapping[Label, Label]] = [m.coarse_map for m in network.measurements]
  else:
    maps = [{l: l.coarse for l in labels} for labels in dist.label_sets]
  label_sets = tuple(tuple(dict.fromkeys(m[l] for l in labels))
                     for m, labels in zip(maps, dist.label_sets))
  zero = Fraction(0) if dist.exact else 0.0
  values: dict[Outcome, Any] = {}
  for outcome, p in dist.probabilities.items():
    key = tuple(m[l] for m, l in zip(maps, outcome))
    values[key] = values.get(key, zero) + p
  return OutcomeDistribution(label_sets, values)


def white_noise_mix(dist: OutcomeDistribution, p: float | Fraction) -> OutcomeDistribution:
  '(1 - p) dist + p uniform over the same outcome set'
  if not 0 <= p <= 1:
    raise DomainError(f'noise weight must lie in [0, 1], got {p}')
  exact = dist.exact and isinstance(p, (Fraction, int))
  p = Fraction(p) if exact else float(p)
  uniform = Fraction(1, dist.n_outcomes) if exact else 1.0 / dist.n_outcomes
  values = {o: (1 - p) * (q if exact else float(q)) + p * uniform
            for o, q in dist.items()}
  return OutcomeDistribution(dist.label_sets, values)


def total_variation(d1: OutcomeDistribution, d2: OutcomeDistribution) -> Fraction | float:
  'Half the L1 distance; exact when both inputs are'
  if not d1.same_outcome_sets(d2):
    raise OutcomeSetMismatchError(f'outcome sets differ: {d1.label_sets} vs '
                                  f'{d2.label_sets}')
  keys = set(d1.probabilities) | set(d2.probabilities)
  if d1.exact and d2.exact:
    return sum((abs(d1.prob(o) - d2.prob(o)) for o in keys), Fraction(0)) / 2
  return 0.5 * sum(abs(float(d1.prob(o)) - float(d2.prob(o))) for o in keys)
