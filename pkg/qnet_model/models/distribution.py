from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping

from qnet_model.data.enums import Label
from qnet_model.errors import DomainError, LabelError
from qnet_model.models import sim_parameters as sp

logger = logging.getLogger(__name__)

Outcome = tuple[Label, ...]
Probability = Fraction | float


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
  """Joint distribution of the outputs of N parties.

  Probabilities are exact Fractions when every entry is rational, floats
  otherwise. In float mode values in [-1e-12, 0) are clamped to zero; the
  unclamped values stay available through `raw`.

  Attributes:
    label_sets tuple[tuple[Label, ...], ...]:
      Ordered output labels of each party.
    probabilities Mapping[Outcome, Probability]:
      Probability of each outcome tuple. Missing outcomes have probability 0.
    raw Mapping[Outcome, Probability]:
      Values as given, before clamping.
    exact bool:
      True when all probabilities are Fractions.

  Methods:
    outcomes:
      Every outcome tuple, in lexicographic (party, label index) order.
    prob:
      Probability of one outcome.
    support:
      Outcomes with probability above the clamp threshold.
  """
  label_sets: tuple[tuple[Label, ...], ...]
  probabilities: Mapping[Outcome, Probability]
  raw: Mapping[Outcome, Probability] = field(init=False, repr=False)
  exact: bool = field(init=False)

  def __post_init__(self):
    label_sets = tuple(tuple(labels) for labels in self.label_sets)
    object.__setattr__(self, 'label_sets', label_sets)
    positions = [{l: i for i, l in enumerate(labels)} for labels in label_sets]
    exact = all(isinstance(p, (Fraction, int)) for p in self.probabilities.values())
    clean: dict[Outcome, Probability] = {}
    for outcome, p in self.probabilities.items():
      if len(outcome) != self.arity:
        raise LabelError(f'outcome {outcome} does not have {self.arity} entries')
      for k, label in enumerate(outcome):
        if label not in positions[k]:
          raise LabelError(f'{label} is not an outcome of party {k}')
      if exact:
        p = Fraction(p)
        if p < 0:
          raise DomainError(f'negative probability {p} for {outcome}')
      else:
        p = float(p)
        if p < -sp.NEGATIVE_TOLERANCE:
          raise DomainError(f'negative probability {p} for {outcome}')
        p = max(p, 0.0)
      clean[outcome] = p

    def order(outcome: Outcome) -> tuple[int, ...]:
      return tuple(positions[k][l] for k, l in enumerate(outcome))

    ordered = {o: clean[o] for o in sorted(clean, key=order)}
    total = sum(ordered.values())
    if exact and total != 1:
      raise DomainError(f'probabilities sum to {total}, not 1')
    if not exact and abs(total - 1) > sp.NORMALIZATION_TOLERANCE:
      raise DomainError(f'probabilities sum to {total}, not 1')
    object.__setattr__(self, 'raw', MappingProxyType(dict(self.probabilities)))
    object.__setattr__(self, 'probabilities', MappingProxyType(ordered))
    object.__setattr__(self, 'exact', exact)

  @property
  def arity(self) -> int:
    return len(self.label_sets)

  @property
  def n_outcomes(self) -> int:
    count = 1
    for labels in self.label_sets:
      count *= len(labels)
    return count

  def outcomes(self) -> Iterator[Outcome]:
    return itertools.product(*self.label_sets)

  def prob(self, outcome: Outcome) -> Probability:
    zero = Fraction(0) if self.exact else 0.0
    return self.probabilities.get(tuple(outcome), zero)

  def __getitem__(self, outcome: Outcome) -> Probability:
    return self.prob(outcome)

  def items(self) -> Iterator[tuple[Outcome, Probability]]:
    'Every outcome with its probability, zeros included'
    for outcome in self.outcomes():
      yield outcome, self.prob(outcome)

  def support(self, clamp: float = sp.SUPPORT_CLAMP) -> list[Outcome]:
    return [o for o, p in self.probabilities.items() if p > clamp]

  def to_float(self) -> OutcomeDistribution:
    return OutcomeDistribution(
        self.label_sets, {o: float(p) for o, p in self.probabilities.items()})

  def same_outcome_sets(self, other: OutcomeDistribution) -> bool:
    return self.label_sets == other.label_sets
