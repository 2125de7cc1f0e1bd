from fractions import Fraction
from typing import Any

from qnet_model.errors import DomainError
from qnet_model.models import bricks, surds
from qnet_model.models.bricks import JointBasis, SchmidtState
from qnet_model.models.network import CycleNetwork


def create_network(n_parties: int, source: SchmidtState, basis: JointBasis) -> CycleNetwork:
  """Create a cycle where every source and every party is identical.

  Arguments:
    n_parties int:
      Number of parties.
    source SchmidtState:
      State of every source.
    basis JointBasis:
      Measurement of every party.

  Returns:
      The cycle network.
  """
  return CycleNetwork(n_parties, (source,) * n_parties, (basis,) * n_parties)


def create_qubit_source(lambda0_sq: Any = Fraction(1, 2), exact: bool = True) -> SchmidtState:
  """Create the two-qubit source lambda0 |00> + lambda1 |11>.

  Arguments:
    lambda0_sq Any:
      Squared first Schmidt coefficient in (0, 1).
    exact bool:
      Keep exact arithmetic when the square is rational.

  Returns:
      The source state.
  """
  value = surds.as_scalar(lambda0_sq, exact)
  if not 0 < value < 1:
    raise DomainError(f'lambda0^2 must lie in (0, 1), got {lambda0_sq}')
  return SchmidtState.from_squares([value, 1 - value], exact=exact)


def create_cycle_network(n_parties: int,
                         u_sq: Any,
                         lambda0_sq: Any = Fraction(1, 2),
                         exact: bool = True) -> CycleNetwork:
  """Create the qubit N-cycle with identical sources and measurements.

  Arguments:
    n_parties int:
      Number of parties N >= 3.
    u_sq Any:
      Squared measurement parameter.
    lambda0_sq Any:
      Squared Schmidt coefficient of every source.
    exact bool:
      Exact arithmetic for rational inputs; floats otherwise.

  Returns:
      The cycle network.
  """
  basis = bricks.qubit_basis_from_square(u_sq, exact=exact)
  return create_network(n_parties, create_qubit_source(lambda0_sq, exact=exact), basis)


def create_triangle_network(u_sq: Any,
                            lambda0_sq: Any = Fraction(1, 2),
                            exact: bool = True) -> CycleNetwork:
  return create_cycle_network(3, u_sq, lambda0_sq, exact=exact)


def create_qutrit_triangle(eta_up=None, eta_down=None, exact: bool = True) -> CycleNetwork:
  """Create the qutrit triangle with maximally entangled sources.

  Without eta matrices the counterexample basis is used.
  """
  if (eta_up is None) != (eta_down is None):
    raise DomainError('give both eta matrices or neither')
  if eta_up is None:
    basis = bricks.qutrit_example_basis()
  else:
    basis = bricks.qutrit_basis(eta_up, eta_down)
  return create_network(3, bricks.maximally_entangled(3, exact=exact and basis.exact), basis)
