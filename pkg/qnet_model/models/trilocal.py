"""Classical hidden-variable models on cycle networks.

Source k sends one hidden value to party k and party k+1, so party k reads
(hidden value of source k-1, hidden value of source k) exactly as in the
quantum network.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
from scipy import optimize

from qnet_model.data import enums
from qnet_model.data.enums import Label
from qnet_model.errors import DomainError, LabelError, NoSolutionError
from qnet_model.models import certificates
from qnet_model.models import sim_parameters as sp
from qnet_model.models.distribution import Outcome, OutcomeDistribution, Probability

logger = logging.getLogger(__name__)

HiddenPair = tuple[int, int]
Response = Mapping[Label, Probability]


def _is_exact(values) -> bool:
  return all(isinstance(p, (Fraction, int)) for p in values)


def _sums_to_one(values: Sequence[Probability]) -> bool:
  total = sum(values)
  if _is_exact(values):
    return total == 1
  return abs(float(total) - 1) <= sp.NORMALIZATION_TOLERANCE


@dataclass(frozen=True, eq=False)
class TrilocalModel:
  """Finite hidden-variable model on an N-cycle.

  Attributes:
    source_weights tuple[tuple[Probability, ...], ...]:
      Distribution of the hidden value of each source.
    responses tuple[Mapping[HiddenPair, Response], ...]:
      For party k, (left value, right value) -> distribution over labels.
      Deterministic responses are point masses.
    label_sets tuple[tuple[Label, ...], ...]:
      Output labels of each party.
    hidden_names tuple[tuple[str, ...], ...] | None:
      Optional names of the hidden values, used in JSON output.

  Methods:
    response:
      Response of one party to a pair of hidden values.
  """
  source_weights: tuple[tuple[Probability, ...], ...]
  responses: tuple[Mapping[HiddenPair, Response], ...]
  label_sets: tuple[tuple[Label, ...], ...]
  hidden_names: tuple[tuple[str, ...], ...] | None = None

  def __post_init__(self):
    n = len(self.source_weights)
    if n < 3:
      raise DomainError(f'a cycle model needs at least 3 sources, got {n}')
    if len(self.responses) != n or len(self.label_sets) != n:
      raise DomainError(f'{n} sources need {n} response tables and label sets')
    for s, weights in enumerate(self.source_weights):
      if not weights or any(w < 0 for w in weights) or not _sums_to_one(weights):
        raise DomainError(f'weights of source {s} are not a distribution: {weights}')
    frozen = []
    for k, table in enumerate(self.responses):
      n_left = len(self.source_weights[(k - 1) % n])
      n_right = len(self.source_weights[k])
      allowed = set(self.label_sets[k])
      for pair in itertools.product(range(n_left), range(n_right)):
        if pair not in table:
          raise DomainError(f'party {k} has no response to hidden values {pair}')
        response = table[pair]
        if not set(response) <= allowed:
          raise LabelError(f'party {k} answers {set(response) - allowed}')
        if any(p < 0 for p in response.values()) or not _sums_to_one(list(response.values())):
          raise DomainError(f'response of party {k} to {pair} is not a distribution')
      frozen.append(MappingProxyType({pair: MappingProxyType(dict(r)) for pair, r in table.items()}))
    object.__setattr__(self, 'responses', tuple(frozen))

  @property
  def n_parties(self) -> int:
    return len(self.source_weights)

  @property
  def exact(self) -> bool:
    return (all(_is_exact(w) for w in self.source_weights) and
            all(_is_exact(r.values()) for table in self.responses for r in table.values()))

  @property
  def deterministic(self) -> bool:
    return all(len([p for p in r.values() if p != 0]) == 1
               for table in self.responses for r in table.values())

  def response(self, party: int, left: int, right: int) -> Response:
    return self.responses[party][left, right]


def evaluate(model: TrilocalModel) -> OutcomeDistribution:
  """Exact outcome distribution: sum over every hidden-value combination.

  Rational model data gives a rational distribution.
  """
  n = model.n_parties
  zero = Fraction(0) if model.exact else 0.0
  values: dict[Outcome, Probability] = {o: zero for o in itertools.product(*model.label_sets)}
  for hidden in itertools.product(*(range(len(w)) for w in model.source_weights)):
    weight = math.prod((model.source_weights[s][h] for s, h in enumerate(hidden)), start=1)
    if weight == 0:
      continue
    answers = [model.response(k, hidden[(k - 1) % n], hidden[k]).items() for k in range(n)]
    for combo in itertools.product(*answers):
      p = weight * math.prod((q for _, q in combo), start=1)
      if p != 0:
        outcome = tuple(label for label, _ in combo)
        values[outcome] += p
  return OutcomeDistribution(model.label_sets, values)


def sample(model: TrilocalModel, n: int, seed: int = sp.RANDOM_SEED) -> list[Outcome]:
  """Draw n outcomes: hidden values first, then each party's response.

  Arguments:
    model TrilocalModel:
      The model.
    n int:
      Number of samples, at least 1.
    seed int:
      Seed of the numpy Generator; equal seeds give equal samples.

  Returns:
    list[Outcome]
  """
  if n < 1:
    raise DomainError(f'sample size must be at least 1, got {n}')
  rng = np.random.default_rng(seed)
  parties = model.n_parties
  hidden = []
  for weights in model.source_weights:
    p = np.array([float(w) for w in weights])
    hidden.append(rng.choice(len(weights), size=n, p=p / p.sum()))
  columns = []
  for k in range(parties):
    left, right = hidden[(k - 1) % parties], hidden[k]
    labels = model.label_sets[k]
    n_left, n_right = len(model.source_weights[(k - 1) % parties]), len(model.source_weights[k])
    cumulative = np.zeros((n_left, n_right, len(labels)))
    for (l, r), response in model.responses[k].items():
      cumulative[l, r] = np.cumsum([float(response.get(label, 0)) for label in labels])
    cumulative[..., -1] = 1.0
    draws = rng.random(n)
    rows = cumulative[left, right]
    index = np.minimum((draws[:, None] >= rows).sum(axis=1), len(labels) - 1)
    columns.append(np.asarray(labels, dtype=object)[index])
  return [tuple(row) for row in zip(*columns)]


def empirical_distribution(samples: Sequence[Outcome],
                           label_sets: Sequence[Sequence[Label]]) -> OutcomeDistribution:
  'Relative frequencies of the samples, as exact fractions'
  if not samples:
    raise DomainError('no samples')
  counts = Counter(samples)
  return OutcomeDistribution(tuple(tuple(l) for l in label_sets),
                             {o: Fraction(c, len(samples)) for o, c in counts.items()})


def purify(model: TrilocalModel) -> TrilocalModel:
  """Equivalent model whose responses are all deterministic.

  The randomness of party k moves into source k: that source also draws an
  index into the common refinement of party k's cumulative response
  distributions, and party k reads its label off that index. Party k+1
  ignores the extra index.
  """
  n = model.n_parties
  cuts: list[list[Probability]] = []
  for k in range(n):
    zero = Fraction(0) if model.exact else 0.0
    points = {zero, Fraction(1) if model.exact else 1.0}
    for response in model.responses[k].values():
      running = zero
      for label in model.label_sets[k]:
        running += response.get(label, zero)
        points.add(running if model.exact else min(float(running), 1.0))
    ordered = sorted(points)
    cuts.append([c for i, c in enumerate(ordered) if i == 0 or c - ordered[i - 1] > 0])
  widths = [[b - a for a, b in zip(c, c[1:])] for c in cuts]
  weights = tuple(
      tuple(w * width for w in model.source_weights[s] for width in widths[s]) for s in range(n))

  def label_at(k: int, response: Response, m: int) -> Label:
    start, running = cuts[k][m], 0
    for label in model.label_sets[k]:
      running += response.get(label, 0)
      if running > start:
        return label
    return model.label_sets[k][-1]

  responses = []
  for k in range(n):
    size_left = len(widths[(k - 1) % n])
    size_right = len(widths[k])
    table = {}
    for (l, r), response in model.responses[k].items():
      for m in range(size_right):
        label = label_at(k, response, m)
        for extra in range(size_left):
          table[l * size_left + extra, r * size_right + m] = {label: 1}
    responses.append(table)
  return TrilocalModel(weights, tuple(responses), model.label_sets)


@dataclass(frozen=True)
class PartitionSkeleton:
  """Coarse structure every model of the qubit cycle must have.

  Each source's hidden values split into block 0 (weight lambda0^2) and
  block 1. Party k answers up iff its left source is in block 0 and its
  right source in block 1, down for the reverse, and chi when both blocks
  agree.

  Attributes:
    block_weights tuple[tuple[Probability, Probability], ...]:
      (P(block 0), P(block 1)) for every source.
  """
  block_weights: tuple[tuple[Probability, Probability], ...]

  @staticmethod
  def output(left_block: int, right_block: int) -> Label:
    if (left_block, right_block) == (0, 1):
      return Label.UP
    if (left_block, right_block) == (1, 0):
      return Label.DOWN
    return Label.CHI

  def outputs(self, blocks: Sequence[int]) -> tuple[Label, ...]:
    'Coarse outputs of every party given the block of every source'
    n = len(self.block_weights)
    if len(blocks) != n:
      raise DomainError(f'need {n} blocks, got {len(blocks)}')
    return tuple(self.output(blocks[(k - 1) % n], blocks[k]) for k in range(n))

  def to_model(self) -> TrilocalModel:
    n = len(self.block_weights)
    table = {(l, r): {self.output(l, r): 1} for l in range(2) for r in range(2)}
    coarse = (Label.UP, Label.DOWN, Label.CHI)
    return TrilocalModel(self.block_weights, tuple(table for _ in range(n)),
                         tuple(coarse for _ in range(n)))


def partition_skeleton(lambda0_sq: Probability, n_parties: int = 3) -> PartitionSkeleton:
  if not 0 < lambda0_sq < 1:
    raise DomainError(f'lambda0^2 must lie in (0, 1), got {lambda0_sq}')
  if n_parties < 3:
    raise DomainError(f'a cycle needs at least 3 parties, got {n_parties}')
  p0 = Fraction(lambda0_sq) if isinstance(lambda0_sq, (Fraction, int)) else float(lambda0_sq)
  return PartitionSkeleton(tuple((p0, 1 - p0) for _ in range(n_parties)))


def uniform_chi_model(n_parties: int = 3) -> TrilocalModel:
  """Classical model of the maximally entangled cycle at u^2 = 1/2.

  Every source sends a uniform block bit and an independent uniform coin.
  Parties follow the partition skeleton; a chi answer becomes chi_0 or chi_1
  by the XOR of the two coins it receives, so each chi is a fair coin while
  the number of chi_1 among all-chi outcomes stays even.
  """
  if n_parties < 3:
    raise DomainError(f'a cycle needs at least 3 parties, got {n_parties}')
  quarter = Fraction(1, 4)
  table = {}
  for left, right in itertools.product(range(4), repeat=2):
    label = PartitionSkeleton.output(left // 2, right // 2)
    if label is Label.CHI:
      label = Label.CHI1 if (left % 2) ^ (right % 2) else Label.CHI0
    table[left, right] = {label: Fraction(1)}
  names = tuple(f'b{b}r{r}' for b in range(2) for r in range(2))
  return TrilocalModel(
      source_weights=tuple((quarter,) * 4 for _ in range(n_parties)),
      responses=tuple(table for _ in range(n_parties)),
      label_sets=tuple(enums.QUBIT_LABELS for _ in range(n_parties)),
      hidden_names=tuple(names for _ in range(n_parties)),
  )


@dataclass(frozen=True)
class ThresholdModelParams:
  """Parameters of the triangle model at the threshold.

  Block 0 of every source carries a trit with weights kappa, block 1 a bit
  with weights tau.
  """
  u_sq: float
  kappa0: float
  kappa1: float
  kappa2: float
  tau0: float
  tau1: float

  @property
  def kappa(self) -> tuple[float, float, float]:
    return self.kappa0, self.kappa1, self.kappa2

  @property
  def tau(self) -> tuple[float, float]:
    return self.tau0, self.tau1


def _trit_answer(left: int, right: int) -> int:
  'chi index given two trits: chi_1 iff they are 0 and 1 in some order'
  return 1 if {left, right} == {0, 1} else 0


def _bit_answer(left: int, right: int) -> int:
  'chi index given two bits: chi_0 iff they read (0, 1)'
  return 0 if (left, right) == (0, 1) else 1


def _branch_distribution(weights: Sequence[float], answer) -> dict[tuple[int, int, int], float]:
  p: dict[tuple[int, int, int], float] = {}
  for values in itertools.product(range(len(weights)), repeat=3):
    key = tuple(answer(values[(k - 1) % 3], values[k]) for k in range(3))
    p[key] = p.get(key, 0.0) + math.prod(weights[x] for x in values)
  return p


def threshold_model_residuals(params: ThresholdModelParams) -> dict[str, float]:
  """Residuals of the marginal equations the threshold model must satisfy.

  Enumerates both branches: q(i, j, k) = (p_0 + p_1)(i, j, k) / 2 against
  (u_i u_j u_k + v_i v_j v_k)^2 / 2, and the single-party block marginals
  q(i, t=0) = u_i^2 / 2, q(i, t=1) = v_i^2 / 2.
  """
  u = math.sqrt(params.u_sq)
  v = math.sqrt(1 - params.u_sq)
  us, vs = (u, v), (v, -u)
  p0 = _branch_distribution(params.kappa, _trit_answer)
  p1 = _branch_distribution(params.tau, _bit_answer)
  residuals = {}
  for key in itertools.product(range(2), repeat=3):
    i, j, k = key
    target = 0.5 * (us[i] * us[j] * us[k] + vs[i] * vs[j] * vs[k])**2
    residuals['q(i={},j={},k={})'.format(*key)] = 0.5 * (p0.get(key, 0.0) + p1.get(key, 0.0)) - target
  for i in range(2):
    for t, (branch, target) in enumerate(((p0, 0.5 * us[i]**2), (p1, 0.5 * vs[i]**2))):
      single = sum(p for key, p in branch.items() if key[0] == i)
      residuals[f'q(i={i},t={t})'] = 0.5 * single - target
  residuals['kappa normalization'] = sum(params.kappa) - 1
  residuals['tau normalization'] = sum(params.tau) - 1
  return residuals


def solve_threshold_model_params(
    u_sq: float | None = None,
    tolerance: float = sp.MODEL_RESIDUAL_TOLERANCE) -> ThresholdModelParams:
  """Solve for the trit and bit weights of the threshold model.

  The bit branch needs tau0 tau1 = 1 - u^2, solved for tau0 >= 1/2. The trit
  branch needs kappa0 kappa1 = (1 - u^2) / 2 and
  2 kappa0 kappa1 kappa2 = u^2 v^2 (u - v)^2, solved for kappa0 >= kappa1.
  The remaining equations then hold only at the threshold; every residual
  is checked and NoSolutionError raised above the tolerance.

  Arguments:
    u_sq float | None:
      Squared measurement parameter, default the threshold at lambda0^2 = 1/2.
    tolerance float:
      Largest accepted residual.

  Returns:
    ThresholdModelParams
  """
  if u_sq is None:
    u_max = certificates.u_threshold(1 / math.sqrt(2), xtol=1e-15)
    if u_max is enums.NO_THRESHOLD:
      raise NoSolutionError('no threshold found at lambda0^2 = 1/2')
    u_sq = u_max**2
  u_sq = float(u_sq)
  if not 0 < u_sq < 1:
    raise DomainError(f'u^2 must lie in (0, 1), got {u_sq}')
  u, v = math.sqrt(u_sq), math.sqrt(1 - u_sq)
  big_v = 1 - u_sq
  if 1 - 4 * big_v < 0:
    raise NoSolutionError(f'tau0 tau1 = {big_v} has no real solution')
  tau0 = optimize.brentq(lambda t: t * (1 - t) - big_v, 0.5, 1.0, xtol=1e-15)
  target = u_sq * (u - v)**2

  def trit_residual(k0: float) -> float:
    k1 = big_v / (2 * k0)
    return 1 - k0 - k1 - target

  low, high = math.sqrt(big_v / 2), 1.0 - 1e-12
  if trit_residual(low) * trit_residual(high) > 0:
    raise NoSolutionError(f'trit branch has no root for u^2 = {u_sq}')
  kappa0 = optimize.brentq(trit_residual, low, high, xtol=1e-15)
  kappa1 = big_v / (2 * kappa0)
  params = ThresholdModelParams(u_sq, kappa0, kappa1, 1 - kappa0 - kappa1, tau0, 1 - tau0)
  worst_name, worst = max(threshold_model_residuals(params).items(), key=lambda x: abs(x[1]))
  if abs(worst) > tolerance or params.kappa2 < 0:
    logger.warning('threshold model fails at u^2=%s: %s off by %.3e', u_sq, worst_name, worst)
    raise NoSolutionError(f'no threshold model at u^2 = {u_sq}: {worst_name} off by {worst:.3e}',
                          residual=abs(worst))
  logger.info('threshold model at u^2=%.15f: kappa=%s tau=%s', u_sq, params.kappa, params.tau)
  return params


def build_threshold_model(params: ThresholdModelParams) -> TrilocalModel:
  """Full triangle model from solved threshold parameters.

  Hidden values 0..2 are block 0 with trit 0..2, values 3..4 are block 1
  with bit 0..1. Parties follow the partition skeleton; when both blocks
  are 0 the trit rule picks the chi label, when both are 1 the bit rule.
  """
  weights = (*params.kappa, *params.tau)
  if any(not 0 <= w <= 1 for w in weights):
    raise DomainError(f'threshold model weights out of range: {weights}')
  if abs(sum(params.kappa) - 1) > sp.NORMALIZATION_TOLERANCE or abs(sum(params.tau) - 1) > \
      sp.NORMALIZATION_TOLERANCE:
    raise DomainError('kappa and tau must each sum to 1')
  source = tuple(w / 2 for w in weights)
  chis = (Label.CHI0, Label.CHI1)
  table = {}
  for left, right in itertools.product(range(5), repeat=2):
    label = PartitionSkeleton.output(int(left >= 3), int(right >= 3))
    if label is Label.CHI and left < 3:
      label = chis[_trit_answer(left, right)]
    elif label is Label.CHI:
      label = chis[_bit_answer(left - 3, right - 3)]
    table[left, right] = {label: 1.0}
  names = ('trit0', 'trit1', 'trit2', 'bit0', 'bit1')
  return TrilocalModel(
      source_weights=(source,) * 3,
      responses=(table,) * 3,
      label_sets=(enums.QUBIT_LABELS,) * 3,
      hidden_names=(names,) * 3,
  )
