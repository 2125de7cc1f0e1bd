from fractions import Fraction

import numpy as np
import pytest

from qnet_model.data import enums
from qnet_model.data.enums import Label
from qnet_model.errors import DomainError, LabelError, OrthogonalityError
from qnet_model.models import bricks
from qnet_model.models.surds import Surd


def test_qubit_basis_entries():
  basis = bricks.qubit_basis(Fraction(3, 5))
  assert basis.exact
  assert basis.labels == enums.QUBIT_LABELS
  chi0 = basis.coefficient(Label.CHI0)
  chi1 = basis.coefficient(Label.CHI1)
  assert chi0[0, 0] == Fraction(3, 5) and chi0[1, 1] == Fraction(4, 5)
  assert chi1[0, 0] == Fraction(4, 5) and chi1[1, 1] == Fraction(-3, 5)
  assert basis.coefficient(Label.UP)[0, 1] == 1
  assert basis.coefficient(Label.DOWN)[1, 0] == 1
  assert basis.coarse_map[Label.CHI0] is Label.CHI
  assert basis.coarse_labels == (Label.UP, Label.DOWN, Label.CHI)


def test_qubit_basis_from_irrational_parameter():
  basis = bricks.qubit_basis_from_square(Fraction(4, 5))
  u = basis.coefficient(Label.CHI0)[0, 0]
  assert isinstance(u, Surd)
  assert (u * u).simplify() == Fraction(4, 5)
  assert basis.coefficient(Label.CHI0)[1, 1] * 2 == u


def test_qubit_basis_float_mode():
  basis = bricks.qubit_basis_from_square(0.7, exact=False)
  assert not basis.exact
  np.testing.assert_allclose(basis.gram_matrix(), np.eye(4), atol=1e-12)


@pytest.mark.parametrize('u_sq', [0, 1, Fraction(3, 2), -0.1])
def test_qubit_basis_rejects_out_of_range(u_sq):
  with pytest.raises(DomainError):
    bricks.qubit_basis_from_square(u_sq)


def test_qutrit_example_basis_is_exactly_orthonormal():
  basis = bricks.qutrit_example_basis()
  assert basis.exact
  assert basis.dim == 3
  gram = basis.exact_gram_matrix()
  for i, row in enumerate(gram):
    for j, value in enumerate(row):
      assert value == (1 if i == j else 0)
  assert basis.coarse_labels == (Label.T0, Label.T1, Label.T2, Label.CHIU, Label.CHID)


def test_qutrit_basis_slots():
  basis = bricks.qutrit_example_basis()
  chi2d = basis.coefficient(Label.CHI2D)
  assert chi2d[2, 1] == 1
  chi0u = basis.coefficient(Label.CHI0U)
  assert chi0u[0, 1] * chi0u[0, 1] == Fraction(1, 3)
  assert chi0u[1, 2] * chi0u[1, 2] == Fraction(1, 6)
  assert chi0u[1, 0] == 0


def test_qutrit_basis_rejects_non_orthogonal_eta():
  eta_up, eta_down = bricks.example_eta_matrices()
  broken = [list(row) for row in eta_up]
  broken[0][0] = Fraction(1, 2)
  with pytest.raises(OrthogonalityError) as info:
    bricks.qutrit_basis(broken, eta_down)
  assert info.value.max_deviation > 1e-3


def test_custom_basis_identity_coarse_map():
  states = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]
  labels = [Label.T0, Label.T1, Label.CHI0, Label.CHI1]
  basis = bricks.custom_basis(states, labels)
  assert basis.exact
  assert basis.kind is enums.MeasurementKind.CUSTOM
  assert basis.coarse_map[Label.CHI0] is Label.CHI0


def test_custom_basis_duplicate_labels():
  states = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]
  with pytest.raises(LabelError):
    bricks.custom_basis(states, [Label.UP, Label.UP, Label.CHI0, Label.CHI1])


def test_custom_basis_not_orthonormal():
  states = [[[1, 0], [0, 0]], [[1, 0], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]
  with pytest.raises(OrthogonalityError):
    bricks.custom_basis(states, enums.QUBIT_LABELS)


def test_unknown_label_lookup():
  with pytest.raises(LabelError):
    bricks.qubit_basis(Fraction(3, 5)).coefficient(Label.T0)


def test_schmidt_state_normalization():
  state = bricks.SchmidtState.from_squares([Fraction(1, 2), Fraction(1, 2)])
  assert state.exact
  assert state.squares == (Fraction(1, 2), Fraction(1, 2))
  with pytest.raises(DomainError):
    bricks.SchmidtState((Fraction(1, 2), Fraction(1, 2)))
  with pytest.raises(DomainError):
    bricks.SchmidtState.from_squares([1, 0])
  with pytest.raises(DomainError):
    bricks.SchmidtState((1.0,))


def test_maximally_entangled():
  state = bricks.maximally_entangled(3)
  assert state.dim == 3
  assert all(s == Fraction(1, 3) for s in state.squares)
  floats = bricks.maximally_entangled(3, exact=False)
  assert not floats.exact
  with pytest.raises(DomainError):
    bricks.maximally_entangled(1)
