from __future__ import annotations

import math
from dataclasses import dataclass

from qnet_model.data.enums import Label
from qnet_model.errors import DomainError
from qnet_model.models.bricks import JointBasis, SchmidtState


@dataclass(frozen=True, eq=False)
class CycleNetwork:
  """N parties on a ring, neighbouring parties sharing one source.

  Source k sits between party k and party k+1 (mod N). Party k measures its
  left leg, the second subsystem of source k-1, together with its right leg,
  the first subsystem of source k. For the triangle, party 0 (Alice) gets
  sources 2 and 0, party 1 (Bob) gets 0 and 1, party 2 (Charlie) 1 and 2.

  Attributes:
    n_parties int:
      Number of parties N >= 3.
    sources tuple[SchmidtState, ...]:
      Source k between party k and party k+1.
    measurements tuple[JointBasis, ...]:
      Basis measured by party k.

  Methods:
    left_source:
      Index of the source on a party's left leg.
    right_source:
      Index of the source on a party's right leg.
    rotated:
      The same network with party indices shifted.
  """
  n_parties: int
  sources: tuple[SchmidtState, ...]
  measurements: tuple[JointBasis, ...]

  def __post_init__(self):
    n = self.n_parties
    if n < 3:
      raise DomainError(f'a cycle needs at least 3 parties, got {n}')
    if len(self.sources) != n or len(self.measurements) != n:
      raise DomainError(f'{n} parties need {n} sources and {n} measurements, got '
                        f'{len(self.sources)} and {len(self.measurements)}')
    for k in range(n):
      d = self.measurements[k].dim
      left = self.sources[self.left_source(k)].dim
      right = self.sources[self.right_source(k)].dim
      if not d == left == right:
        raise DomainError(f'party {k} measures dimension {d} but receives legs of '
                          f'dimension {left} and {right}')

  def left_source(self, party: int) -> int:
    return (party - 1) % self.n_parties

  def right_source(self, party: int) -> int:
    return party % self.n_parties

  @property
  def exact(self) -> bool:
    return (all(s.exact for s in self.sources) and
            all(m.exact for m in self.measurements))

  @property
  def label_sets(self) -> tuple[tuple[Label, ...], ...]:
    return tuple(m.labels for m in self.measurements)

  @property
  def n_outcomes(self) -> int:
    return math.prod(len(m.labels) for m in self.measurements)

  def rotated(self, shift: int = 1) -> CycleNetwork:
    'New party k is old party k + shift; sources move with their parties'
    n = self.n_parties
    order = [(k + shift) % n for k in range(n)]
    return CycleNetwork(
        n_parties=n,
        sources=tuple(self.sources[k] for k in order),
        measurements=tuple(self.measurements[k] for k in order),
    )
