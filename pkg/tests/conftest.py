from fractions import Fraction

import pytest

from qnet_model.models import engine, sim_functions


@pytest.fixture
def triangle_four_fifths():
  return sim_functions.create_triangle_network(Fraction(4, 5))


@pytest.fixture
def triangle_four_fifths_dist(triangle_four_fifths):
  return engine.cycle_distribution(triangle_four_fifths)


@pytest.fixture(scope='session')
def qutrit_network():
  return sim_functions.create_qutrit_triangle()


@pytest.fixture(scope='session')
def qutrit_dist(qutrit_network):
  return engine.cycle_distribution(qutrit_network)
