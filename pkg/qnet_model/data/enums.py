from enum import Enum, IntEnum, auto

from qnet_model.errors import LabelError


class Label(Enum):
  """Outcome labels of the joint measurements.

  The qubit basis uses UP, DOWN, CHI0, CHI1. The qutrit basis uses T0..T2
  (the tilde states) and the CHIiU / CHIiD families. CHI, CHIU and CHID
  are the coarse-grained labels.
  """

  @staticmethod
  def _generate_next_value_(name, start, count, last_values):
    return count

  UP = auto()
  DOWN = auto()
  CHI0 = auto()
  CHI1 = auto()
  T0 = auto()
  T1 = auto()
  T2 = auto()
  CHI0U = auto()
  CHI1U = auto()
  CHI2U = auto()
  CHI0D = auto()
  CHI1D = auto()
  CHI2D = auto()
  CHI = auto()
  CHIU = auto()
  CHID = auto()

  @property
  def token(self) -> str:
    return self.name.lower()

  @classmethod
  def from_token(cls, token: str) -> 'Label':
    try:
      return cls[token.strip().upper()]
    except KeyError as exc:
      raise LabelError(f'unknown label {token!r}') from exc

  @property
  def coarse(self) -> 'Label':
    'Default coarse-graining: chi families collapse to one label'
    if self in (Label.CHI0, Label.CHI1):
      return Label.CHI
    if self in (Label.CHI0U, Label.CHI1U, Label.CHI2U):
      return Label.CHIU
    if self in (Label.CHI0D, Label.CHI1D, Label.CHI2D):
      return Label.CHID
    return self

  @property
  def chi_index(self) -> int | None:
    'Index i of a chi_i label, None for every other label'
    return _CHI_INDEX.get(self)


_CHI_INDEX = {
    Label.CHI0: 0,
    Label.CHI1: 1,
    Label.CHI0U: 0,
    Label.CHI1U: 1,
    Label.CHI2U: 2,
    Label.CHI0D: 0,
    Label.CHI1D: 1,
    Label.CHI2D: 2,
}

QUBIT_LABELS = (Label.UP, Label.DOWN, Label.CHI0, Label.CHI1)
QUTRIT_LABELS = (Label.T0, Label.T1, Label.T2, Label.CHI0U, Label.CHI1U,
                 Label.CHI2U, Label.CHI0D, Label.CHI1D, Label.CHI2D)
TILDE_LABELS = (Label.T0, Label.T1, Label.T2)
CHI_UP_LABELS = (Label.CHI0U, Label.CHI1U, Label.CHI2U)
CHI_DOWN_LABELS = (Label.CHI0D, Label.CHI1D, Label.CHI2D)


class MeasurementKind(Enum):
  'Qubit elegant-type basis, qutrit basis or a user supplied basis'
  QUBIT = auto()
  QUTRIT = auto()
  CUSTOM = auto()


class SupportKind(Enum):
  'Which family of zero-probability events to check'
  QUBIT_CYCLE = auto()
  QUTRIT_TRIANGLE = auto()


class FeasibilityStatus(Enum):
  FEASIBLE = auto()
  INFEASIBLE = auto()


class Sentinel(Enum):
  'Explicit results for searches that may come back empty'
  NO_THRESHOLD = auto()
  NOT_FORCED = auto()


NO_THRESHOLD = Sentinel.NO_THRESHOLD
NOT_FORCED = Sentinel.NOT_FORCED


class OutputFormat(Enum):
  CSV = auto()
  JSON = auto()


class Command(Enum):
  DISTRIBUTION = auto()
  CERTIFY = auto()
  THRESHOLD = auto()
  MODEL = auto()


class ScenarioKind(Enum):
  'Where the network of a run comes from'
  TRIANGLE = auto()
  CYCLE = auto()
  QUTRIT_EXAMPLE = auto()
  FILE = auto()


class ModelKind(Enum):
  UNIFORM_CHI = auto()
  THRESHOLD = auto()


class ExitCode(IntEnum):
  OK = 0
  CONFIG = 2
  RESOURCE = 3
  INFEASIBLE = 10
  NO_SOLUTION = 11
