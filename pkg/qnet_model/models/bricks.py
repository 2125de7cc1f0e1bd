from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Mapping, Sequence

import numpy as np
import numpy.typing as npt

from qnet_model.data import enums
from qnet_model.data.enums import Label
from qnet_model.errors import DomainError, LabelError, OrthogonalityError
from qnet_model.models import sim_parameters as sp
from qnet_model.models import surds
from qnet_model.models.surds import Scalar

logger = logging.getLogger(__name__)


def _as_matrix(values: Any, exact: bool) -> npt.NDArray[Any]:
  'Square coefficient matrix, object dtype in exact mode'
  if exact:
    rows = [[surds.simplify(surds.as_scalar(x, True)) for x in row]
            for row in values]
    matrix = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
      for j, x in enumerate(row):
        matrix[i, j] = x
  else:
    matrix = np.array([[float(x) for x in row] for row in values],
                      dtype=np.float64)
  matrix.setflags(write=False)
  return matrix


def _float_gram(vectors: npt.NDArray[Any]) -> npt.NDArray[np.float64]:
  as_float = np.vectorize(float, otypes=[np.float64])(vectors)
  return as_float @ as_float.T


@dataclass(frozen=True)
class SchmidtState:
  """Real bipartite pure state sum_i lambda_i |ii>.

  Attributes:
    lambdas tuple[Scalar, ...]:
      Schmidt coefficients, all strictly positive. Exact (Fraction or Surd)
      or float.

  Methods:
    from_squares:
      Builds the state from the squared coefficients.
  """
  lambdas: tuple[Scalar, ...]

  def __post_init__(self):
    if len(self.lambdas) < 2:
      raise DomainError(f'Schmidt rank must be at least 2, got {len(self.lambdas)}')
    if any(surds.sign(x) <= 0 for x in self.lambdas):
      raise DomainError(f'Schmidt coefficients must be positive: {self.lambdas}')
    total = sum(x * x for x in self.lambdas)
    if self.exact:
      if surds.simplify(total) != 1:
        raise DomainError(f'Schmidt coefficients square-sum to {total}, not 1')
    elif abs(float(total) - 1) > sp.GRAM_TOLERANCE:
      raise DomainError(f'Schmidt coefficients square-sum to {total}, not 1')

  @classmethod
  def from_squares(cls, squares: Sequence[Any], exact: bool = True) -> SchmidtState:
    values = [surds.as_scalar(s, exact) for s in squares]
    if any(surds.sign(s) <= 0 for s in values):
      raise DomainError(f'squared Schmidt coefficients must be positive: {squares}')
    if exact:
      return cls(tuple(surds.exact_sqrt(s) for s in values))
    return cls(tuple(float(np.sqrt(s)) for s in values))

  @property
  def dim(self) -> int:
    return len(self.lambdas)

  @property
  def exact(self) -> bool:
    return all(surds.is_exact(x) for x in self.lambdas)

  @property
  def squares(self) -> tuple[Scalar, ...]:
    return tuple(surds.simplify(x * x) for x in self.lambdas)


@dataclass(frozen=True, eq=False)
class JointBasis:
  """Projective measurement on the two legs a party receives.

  Attributes:
    dim int:
      Local dimension d of each leg.
    eigenstates tuple[npt.NDArray, ...]:
      d*d coefficient matrices C with state = sum_ij C[i, j] |ij>. The first
      index is the left leg.
    labels tuple[Label, ...]:
      Output label of each eigenstate, in the same order.
    coarse_map Mapping[Label, Label]:
      Coarse label of every output label.
    kind enums.MeasurementKind:
      Which constructor produced the basis.

  Methods:
    coefficient:
      Coefficient matrix of one label.
    gram_matrix:
      Float Gram matrix of the vectorised eigenstates.
  """
  dim: int
  eigenstates: tuple[npt.NDArray[Any], ...]
  labels: tuple[Label, ...]
  coarse_map: Mapping[Label, Label]
  kind: enums.MeasurementKind = enums.MeasurementKind.CUSTOM
  _index: Mapping[Label, int] = field(init=False, repr=False, compare=False)

  def __post_init__(self):
    d = self.dim
    if d < 2:
      raise DomainError(f'local dimension must be at least 2, got {d}')
    if len(self.eigenstates) != d * d or len(self.labels) != d * d:
      raise DomainError(f'a basis on {d}x{d} needs {d * d} eigenstates, got '
                        f'{len(self.eigenstates)} states and {len(self.labels)} labels')
    if len(set(self.labels)) != len(self.labels):
      raise LabelError(f'duplicate labels in {self.labels}')
    if any(c.shape != (d, d) for c in self.eigenstates):
      raise DomainError('every coefficient matrix must be d x d')
    missing = [l for l in self.labels if l not in self.coarse_map]
    if missing:
      raise LabelError(f'coarse_map misses {missing}')
    object.__setattr__(self, 'coarse_map', MappingProxyType(dict(self.coarse_map)))
    object.__setattr__(self, '_index',
                       MappingProxyType({l: i for i, l in enumerate(self.labels)}))
    deviation = float(np.max(np.abs(self.gram_matrix() - np.eye(d * d))))
    if deviation > sp.GRAM_TOLERANCE:
      raise OrthogonalityError('measurement eigenstates are not orthonormal',
                               deviation)

  @property
  def exact(self) -> bool:
    return all(c.dtype == object for c in self.eigenstates)

  @property
  def coarse_labels(self) -> tuple[Label, ...]:
    'Distinct coarse labels in first-appearance order'
    return tuple(dict.fromkeys(self.coarse_map[l] for l in self.labels))

  def label_index(self, label: Label) -> int:
    try:
      return self._index[label]
    except KeyError as exc:
      raise LabelError(f'{label} is not an outcome of this basis') from exc

  def coefficient(self, label: Label) -> npt.NDArray[Any]:
    return self.eigenstates[self.label_index(label)]

  def gram_matrix(self) -> npt.NDArray[np.float64]:
    stacked = np.array([c.reshape(-1) for c in self.eigenstates])
    return _float_gram(stacked)

  def exact_gram_matrix(self) -> list[list[Scalar]]:
    'Gram matrix in exact arithmetic; only meaningful for exact bases'
    flat = [list(c.reshape(-1)) for c in self.eigenstates]
    return [[surds.simplify(sum((x * y for x, y in zip(a, b)), Fraction(0)))
             for b in flat] for a in flat]


def _unit(d: int, i: int, j: int, exact: bool) -> list[list[Scalar]]:
  zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
  rows = [[zero] * d for _ in range(d)]
  rows[i][j] = one
  return rows


def qubit_basis(u: Scalar) -> JointBasis:
  """Four-outcome qubit basis {up, down, chi0, chi1}.

  up = |01>, down = |10>, chi0 = u|00> + v|11>, chi1 = v|00> - u|11> with
  v = +sqrt(1 - u^2).

  Arguments:
    u Scalar:
      Entanglement parameter in (0, 1). Exact when u^2 is rational.

  Returns:
    JointBasis: the basis with chi0, chi1 coarse-grained to CHI.
  """
  if not 0 < float(u) < 1:
    raise DomainError(f'u must lie in (0, 1), got {u}')
  u = surds.simplify(u) if surds.is_exact(u) else float(u)
  exact = surds.is_exact(u)
  if exact:
    v_sq = surds.simplify(1 - u * u)
    if surds.is_exact(v_sq) and not isinstance(v_sq, surds.Surd):
      v = surds.exact_sqrt(v_sq)
    else:
      logger.warning('u^2 = %s is irrational; qubit basis built in floats', v_sq)
      exact, u = False, float(u)
  if not exact:
    v = float(np.sqrt(1 - u * u))
  zero = Fraction(0) if exact else 0.0
  eigenstates = (
      _unit(2, 0, 1, exact),
      _unit(2, 1, 0, exact),
      [[u, zero], [zero, v]],
      [[v, zero], [zero, -u]],
  )
  return JointBasis(
      dim=2,
      eigenstates=tuple(_as_matrix(c, exact) for c in eigenstates),
      labels=enums.QUBIT_LABELS,
      coarse_map={l: l.coarse for l in enums.QUBIT_LABELS},
      kind=enums.MeasurementKind.QUBIT,
  )


def qubit_basis_from_square(u_sq: Any, exact: bool = True) -> JointBasis:
  'qubit_basis with the squared parameter, the form the CLI takes'
  value = surds.as_scalar(u_sq, exact)
  if not 0 < float(value) < 1:
    raise DomainError(f'u^2 must lie in (0, 1), got {u_sq}')
  return qubit_basis(surds.sqrt_scalar(value))


def check_orthogonal(matrix: Sequence[Sequence[Scalar]], name: str) -> None:
  'Raise OrthogonalityError unless M M^T = I within 1e-10'
  m = np.vectorize(float, otypes=[np.float64])(np.array(matrix, dtype=object))
  if m.shape != (3, 3):
    raise DomainError(f'{name} must be 3x3, got shape {m.shape}')
  deviation = float(np.max(np.abs(m @ m.T - np.eye(3))))
  if deviation > sp.NORMALIZATION_TOLERANCE:
    raise OrthogonalityError(f'{name} is not orthogonal', deviation)


def qutrit_basis(eta_up: Sequence[Sequence[Scalar]],
                 eta_down: Sequence[Sequence[Scalar]]) -> JointBasis:
  """Nine-outcome qutrit basis built from two orthogonal eta matrices.

  Row i of eta_up holds (eta_i^01, eta_i^02, eta_i^12) and row i of eta_down
  holds (eta_i^10, eta_i^20, eta_i^21).

  Arguments:
    eta_up Sequence[Sequence[Scalar]]:
      Coefficients of the chi_i-up states.
    eta_down Sequence[Sequence[Scalar]]:
      Coefficients of the chi_i-down states.

  Returns:
    JointBasis: t0, t1, t2, chi0u..chi2u, chi0d..chi2d with chi families
    coarse-grained to CHIU and CHID.
  """
  check_orthogonal(eta_up, 'eta_up')
  check_orthogonal(eta_down, 'eta_down')
  exact = all(surds.is_exact(x) for row in (*eta_up, *eta_down) for x in row)
  zero = Fraction(0) if exact else 0.0
  up_slots = ((0, 1), (0, 2), (1, 2))
  down_slots = ((1, 0), (2, 0), (2, 1))
  eigenstates = [_unit(3, i, i, exact) for i in range(3)]
  for eta, slots in ((eta_up, up_slots), (eta_down, down_slots)):
    for row in eta:
      c = [[zero] * 3 for _ in range(3)]
      for (i, j), value in zip(slots, row):
        c[i][j] = surds.as_scalar(value, exact)
      eigenstates.append(c)
  return JointBasis(
      dim=3,
      eigenstates=tuple(_as_matrix(c, exact) for c in eigenstates),
      labels=enums.QUTRIT_LABELS,
      coarse_map={l: l.coarse for l in enums.QUTRIT_LABELS},
      kind=enums.MeasurementKind.QUTRIT,
  )


def example_eta_matrices() -> tuple[list[list[Scalar]], list[list[Scalar]]]:
  'The eta matrices of the qutrit counterexample, exact'
  s = surds.signed_sqrt
  third, half, sixth = Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)
  eta_up = [
      [s(third), s(half), s(sixth)],
      [s(third), s(-half), s(sixth)],
      [s(third), Fraction(0), s(Fraction(-2, 3))],
  ]
  eta_down = [
      [s(Fraction(2, 5)), s(Fraction(3, 5)), Fraction(0)],
      [s(Fraction(3, 5)), s(Fraction(-2, 5)), Fraction(0)],
      [Fraction(0), Fraction(0), Fraction(1)],
  ]
  return eta_up, eta_down


def qutrit_example_basis() -> JointBasis:
  return qutrit_basis(*example_eta_matrices())


def maximally_entangled(d: int, exact: bool = True) -> SchmidtState:
  """Maximally entangled state with lambda_i = 1/sqrt(d).

  Arguments:
    d int:
      Schmidt rank, at least 2.
    exact bool:
      Build Surd coefficients instead of floats.

  Returns:
    SchmidtState
  """
  if d < 2:
    raise DomainError(f'maximally entangled state needs d >= 2, got {d}')
  return SchmidtState.from_squares([Fraction(1, d)] * d, exact=exact)


def custom_basis(eigenstates: Sequence[Sequence[Sequence[Any]]],
                 labels: Sequence[Label],
                 coarse_map: Mapping[Label, Label] | None = None) -> JointBasis:
  """Basis from explicit coefficient matrices.

  Exact when every coefficient is exact. Labels coarse-grain to themselves
  unless a coarse_map is given.
  """
  if not eigenstates:
    raise DomainError('a custom basis needs eigenstates')
  exact = all(surds.is_exact(x) for c in eigenstates for row in c for x in row)
  labels = tuple(labels)
  return JointBasis(
      dim=len(eigenstates[0]),
      eigenstates=tuple(_as_matrix(c, exact) for c in eigenstates),
      labels=labels,
      coarse_map=dict(coarse_map) if coarse_map is not None else {l: l for l in labels},
      kind=enums.MeasurementKind.CUSTOM,
  )
