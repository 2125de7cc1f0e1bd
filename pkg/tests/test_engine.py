import itertools
from fractions import Fraction

import numpy as np
import pytest

from qnet_model.data.enums import Label
from qnet_model.errors import (DomainError, LabelError, OutcomeSetMismatchError,
                               ResourceLimitError)
from qnet_model.models import bricks, engine, sim_functions
from qnet_model.models.distribution import OutcomeDistribution
from qnet_model.models.network import CycleNetwork

UP, DOWN, CHI0, CHI1 = Label.UP, Label.DOWN, Label.CHI0, Label.CHI1


def test_triangle_probabilities_at_four_fifths(triangle_four_fifths_dist):
  dist = triangle_four_fifths_dist
  assert dist.exact
  assert sum(dist.probabilities.values()) == 1
  assert dist[(CHI0, UP, DOWN)] == Fraction(1, 10)
  assert dist[(CHI1, UP, DOWN)] == Fraction(1, 40)
  assert dist[(CHI0, CHI0, CHI0)] == Fraction(81, 1000)
  assert dist[(CHI1, CHI1, CHI1)] == Fraction(49, 1000)


def test_triangle_neighbours_never_agree_on_up_or_down(triangle_four_fifths_dist):
  dist = triangle_four_fifths_dist
  for outcome, p in dist.items():
    for k in range(3):
      pair = (outcome[k], outcome[(k + 1) % 3])
      if pair in ((UP, UP), (DOWN, DOWN)):
        assert p == 0


def test_triangle_single_party_marginals(triangle_four_fifths_dist):
  for k in range(3):
    single = engine.marginal(triangle_four_fifths_dist, [k])
    for label in (UP, DOWN):
      assert single[(label,)] == Fraction(1, 4)


def test_rotation_symmetry(triangle_four_fifths_dist):
  dist = triangle_four_fifths_dist
  for outcome, p in dist.items():
    assert dist[outcome[1:] + outcome[:1]] == p


@pytest.mark.parametrize('network', [
    sim_functions.create_triangle_network(Fraction(4, 5)),
    sim_functions.create_triangle_network(Fraction(9, 10), Fraction(2, 3)),
    sim_functions.create_qutrit_triangle(),
    sim_functions.create_cycle_network(5, 0.7, 0.6, exact=False),
])
def test_transfer_matrices_match_dense_contraction(network):
  fast = engine.cycle_distribution(network)
  dense = engine.dense_distribution(network)
  values = np.array([float(p) for _, p in fast.items()])
  reference = np.array([p for _, p in dense.items()])
  np.testing.assert_allclose(values, reference, atol=1e-12)


def _unequal_triangle():
  basis = bricks.qubit_basis(Fraction(3, 5))
  sources = tuple(
      bricks.SchmidtState((a, b))
      for a, b in ((Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
                   (Fraction(8, 17), Fraction(15, 17))))
  return CycleNetwork(3, sources, (basis,) * 3)


@pytest.mark.parametrize('shift', [1, 2])
def test_rotation_covariance_with_unequal_sources(shift):
  network = _unequal_triangle()
  dist = engine.cycle_distribution(network)
  rotated = engine.cycle_distribution(network.rotated(shift))
  assert dist.exact and rotated.exact
  for outcome, p in dist.items():
    assert rotated[tuple(outcome[(k + shift) % 3] for k in range(3))] == p
  assert any(dist[o] != dist[o[1:] + o[:1]] for o, _ in dist.items())


def test_unequal_sources_match_dense_contraction():
  network = _unequal_triangle()
  fast = engine.cycle_distribution(network)
  dense = engine.dense_distribution(network)
  values = np.array([float(p) for _, p in fast.items()])
  reference = np.array([p for _, p in dense.items()])
  np.testing.assert_allclose(values, reference, atol=1e-12)
  assert sum(fast.probabilities.values()) == 1


def test_qutrit_amplitude_of_tilde_outcome(qutrit_network):
  amp = engine.amplitude(qutrit_network, (Label.T0, Label.T0, Label.T0))
  assert amp * amp == Fraction(1, 27)


def test_qutrit_distribution_is_exact(qutrit_dist):
  assert qutrit_dist.exact
  assert qutrit_dist.n_outcomes == 729
  assert sum(qutrit_dist.probabilities.values()) == 1


def test_amplitude_rejects_bad_outcome(triangle_four_fifths):
  with pytest.raises(LabelError):
    engine.amplitude(triangle_four_fifths, (UP, UP))
  with pytest.raises(LabelError):
    engine.amplitude(triangle_four_fifths, (UP, Label.T0, DOWN))


def test_outcome_cap():
  network = sim_functions.create_cycle_network(5, Fraction(4, 5))
  with pytest.raises(ResourceLimitError):
    engine.cycle_distribution(network, max_outcomes=100)


def test_float_and_exact_modes_agree():
  exact = engine.cycle_distribution(sim_functions.create_triangle_network(Fraction(4, 5)))
  floats = engine.cycle_distribution(sim_functions.create_triangle_network(0.8, 0.5, exact=False))
  assert not floats.exact
  assert engine.total_variation(exact, floats) < 1e-12


def test_irrational_probabilities_fall_back_to_floats(caplog):
  network = sim_functions.create_triangle_network(Fraction(2, 3))
  dist = engine.cycle_distribution(network)
  assert not dist.exact
  assert 'irrational' in caplog.text
  assert sum(dist.probabilities.values()) == pytest.approx(1)


@pytest.mark.parametrize('party', range(3))
def test_completeness(triangle_four_fifths, qutrit_network, party):
  assert engine.completeness_defect(triangle_four_fifths, party) < 1e-12
  assert engine.completeness_defect(qutrit_network, party) < 1e-12


def test_coarse_grain(triangle_four_fifths, triangle_four_fifths_dist):
  coarse = engine.coarse_grain(triangle_four_fifths_dist, triangle_four_fifths)
  assert coarse.label_sets == ((UP, DOWN, Label.CHI),) * 3
  assert coarse[(Label.CHI, UP, DOWN)] == Fraction(1, 10) + Fraction(1, 40)
  default = engine.coarse_grain(triangle_four_fifths_dist)
  assert dict(default.probabilities) == dict(coarse.probabilities)


def test_white_noise_mix(triangle_four_fifths_dist):
  noisy = engine.white_noise_mix(triangle_four_fifths_dist, Fraction(1, 10))
  assert noisy.exact
  assert noisy[(UP, UP, UP)] == Fraction(1, 640)
  assert sum(noisy.probabilities.values()) == 1
  assert engine.white_noise_mix(triangle_four_fifths_dist, 0) is not None
  with pytest.raises(DomainError):
    engine.white_noise_mix(triangle_four_fifths_dist, Fraction(3, 2))


def test_total_variation(triangle_four_fifths_dist):
  uniform = engine.white_noise_mix(triangle_four_fifths_dist, 1)
  assert engine.total_variation(triangle_four_fifths_dist, triangle_four_fifths_dist) == 0
  distance = engine.total_variation(triangle_four_fifths_dist, uniform)
  assert 0 < distance < 1
  other = OutcomeDistribution(((UP, DOWN),) * 3,
                              {o: Fraction(1, 8) for o in itertools.product((UP, DOWN), repeat=3)})
  with pytest.raises(OutcomeSetMismatchError):
    engine.total_variation(triangle_four_fifths_dist, other)


def test_marginal_rejects_bad_parties(triangle_four_fifths_dist):
  with pytest.raises(DomainError):
    engine.marginal(triangle_four_fifths_dist, [])
  with pytest.raises(DomainError):
    engine.marginal(triangle_four_fifths_dist, [3])


def test_distribution_validation():
  with pytest.raises(DomainError):
    OutcomeDistribution(((UP, DOWN),), {(UP,): Fraction(1, 2)})
  with pytest.raises(LabelError):
    OutcomeDistribution(((UP, DOWN),), {(CHI0,): 1})
  clamped = OutcomeDistribution(((UP, DOWN),), {(UP,): 1.0, (DOWN,): -1e-13})
  assert clamped[(DOWN,)] == 0.0
  assert clamped.raw[(DOWN,)] == -1e-13


def test_network_dimension_mismatch():
  qubit = bricks.qubit_basis(Fraction(3, 5))
  with pytest.raises(DomainError):
    sim_functions.create_network(3, bricks.maximally_entangled(3), qubit)
  with pytest.raises(DomainError):
    sim_functions.create_network(2, bricks.maximally_entangled(2), qubit)
