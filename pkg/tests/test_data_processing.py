import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from qnet_model.data import data_processing, schema
from qnet_model.data.enums import Label, MeasurementKind
from qnet_model.errors import DomainError, LabelError
from qnet_model.models import bricks, certificates, engine, lp_solver, sim_functions, trilocal
from qnet_model.models.network import CycleNetwork
from qnet_model.models.surds import Surd


@pytest.mark.parametrize('value, expected', [
    (Fraction(1, 10), '1/10'),
    (Fraction(3), '3'),
    (0.1, '0.10000000000000001'),
    (Surd.sqrt(2) / 2, '1/2*sqrt(2)'),
])
def test_format_scalar(value, expected):
  assert data_processing.format_scalar(value) == expected


def test_scalar_to_json():
  assert data_processing.scalar_to_json(Fraction(4, 2)) == 2
  assert data_processing.scalar_to_json(Fraction(1, 3)) == '1/3'
  assert data_processing.scalar_to_json(0.25) == 0.25
  assert data_processing.scalar_to_json(Surd.sqrt(3)) == '1*sqrt(3)'


@pytest.mark.parametrize('text, exact, expected', [
    ('2/5', True, Fraction(2, 5)),
    ('0.8', True, Fraction(4, 5)),
    ('0.8', False, 0.8),
    (0.5, True, Fraction(1, 2)),
    ('sqrt(1/4)', True, Fraction(1, 2)),
    ('-sqrt(1/4)', True, Fraction(-1, 2)),
    ('-sqrt(2)', False, -(2**0.5)),
])
def test_parse_scalar(text, exact, expected):
  assert data_processing.parse_scalar(text, exact) == expected


def test_parse_scalar_exact_root():
  assert data_processing.parse_scalar('sqrt(1/2)') == Surd.sqrt(Fraction(1, 2))
  assert data_processing.parse_scalar('2/5*sqrt(5) - 1') == Fraction(2, 5) * Surd.sqrt(5) - 1
  assert data_processing.parse_scalar(str(Surd.sqrt(2) - 1)) == Surd.sqrt(2) - 1
  total = data_processing.parse_scalar('1/2*sqrt(2) + 1/2*sqrt(2)', exact=False)
  assert total == pytest.approx(2**0.5)


@pytest.mark.parametrize('text', ['abc', '1/0', '-sqrt(-1)'])
def test_parse_scalar_rejects_garbage(text):
  with pytest.raises(DomainError):
    data_processing.parse_scalar(text)


def test_distribution_csv_round_trip(tmp_path, triangle_four_fifths_dist):
  path = tmp_path / 'dist.csv'
  data_processing.write_distribution_csv(triangle_four_fifths_dist, path)
  dataf = pd.read_csv(path, dtype=str)
  assert list(dataf.columns) == ['a0', 'a1', 'a2', 'probability']
  assert len(dataf) == 64
  assert dataf.iloc[0].tolist() == ['up', 'up', 'up', '0']
  loaded = data_processing.read_distribution_csv(path)
  assert loaded.exact
  assert dict(loaded.probabilities) == dict(triangle_four_fifths_dist.probabilities)


def test_float_distribution_csv(tmp_path):
  dist = engine.cycle_distribution(sim_functions.create_triangle_network(0.7, 0.6, exact=False))
  path = tmp_path / 'dist.csv'
  data_processing.write_distribution_csv(dist, path)
  loaded = data_processing.read_distribution_csv(path)
  assert not loaded.exact
  assert engine.total_variation(loaded, dist) < 1e-15


def test_read_distribution_csv_needs_probability_column(tmp_path):
  path = tmp_path / 'bad.csv'
  path.write_text('a0,a1,a2\nup,up,up\n', encoding='utf-8')
  with pytest.raises(DomainError):
    data_processing.read_distribution_csv(path)


def test_network_from_json_qubit():
  network = data_processing.network_from_json({'kind': 'qubit', 'n_parties': 5, 'u2': '4/5'})
  assert network.n_parties == 5
  assert network.exact
  assert network.sources[0].squares == (Fraction(1, 2), Fraction(1, 2))


def test_network_from_json_qutrit():
  network = data_processing.network_from_json({'kind': 'qutrit'})
  assert network.measurements[0].kind is MeasurementKind.QUTRIT
  with pytest.raises(DomainError):
    data_processing.network_from_json({'kind': 'qutrit', 'n_parties': 4})


def test_network_from_json_custom():
  data = {
      'kind': 'custom',
      'n_parties': 3,
      'schmidt_squares': ['1/2', '1/2'],
      'eigenstates': [
          [[0, 1], [0, 0]],
          [[0, 0], [1, 0]],
          [['sqrt(1/2)', 0], [0, 'sqrt(1/2)']],
          [['sqrt(1/2)', 0], [0, '-sqrt(1/2)']],
      ],
      'labels': ['up', 'down', 'chi0', 'chi1'],
      'coarse': {'up': 'up', 'down': 'down', 'chi0': 'chi', 'chi1': 'chi'},
  }
  network = data_processing.network_from_json(data)
  assert network.exact
  assert network.measurements[0].coarse_map[Label.CHI1] is Label.CHI
  reference = sim_functions.create_triangle_network(Fraction(1, 2))
  assert dict(engine.cycle_distribution(network).probabilities) == dict(
      engine.cycle_distribution(reference).probabilities)


def test_network_from_json_errors(tmp_path):
  with pytest.raises(DomainError):
    data_processing.network_from_json({'kind': 'ring'})
  with pytest.raises(LabelError):
    data_processing.network_from_json({
        'kind': 'custom',
        'schmidt_squares': ['1/2', '1/2'],
        'eigenstates': [],
        'labels': ['spin'],
    })
  path = tmp_path / 'scenario.json'
  path.write_text('{"kind": "qubit"}', encoding='utf-8')
  with pytest.raises(DomainError):
    data_processing.load_network(path)
  path.write_text('{not json', encoding='utf-8')
  with pytest.raises(DomainError):
    data_processing.load_network(path)


def test_network_to_json(qutrit_network, qutrit_dist):
  summary = json.loads(json.dumps(data_processing.network_to_json(qutrit_network)))
  assert summary['n'] == 3
  assert summary['sources'][0] == ['1/3*sqrt(3)'] * 3
  assert summary['measurement']['basis'] == 'qutrit'
  assert summary['measurement']['labels'][0] == 't0'
  assert summary['measurement']['coarse']['chi1u'] == 'chiu'
  loaded = data_processing.network_from_json(summary)
  assert loaded.exact
  assert dict(engine.cycle_distribution(loaded).probabilities) == dict(qutrit_dist.probabilities)


def _unequal_network():
  sources = tuple(
      bricks.SchmidtState.from_squares(squares)
      for squares in ((Fraction(1, 5), Fraction(4, 5)), (Fraction(1, 2), Fraction(1, 2)),
                      (Fraction(7, 10), Fraction(3, 10))))
  return CycleNetwork(3, sources, (bricks.qubit_basis(Fraction(3, 5)),) * 3)


def test_network_json_round_trip_with_unequal_sources():
  network = _unequal_network()
  data = json.loads(json.dumps(data_processing.network_to_json(network)))
  assert data['sources'][1] == ['1/2*sqrt(2)', '1/2*sqrt(2)']
  loaded = data_processing.network_from_json(data)
  assert [s.squares for s in loaded.sources] == [s.squares for s in network.sources]
  original = engine.cycle_distribution(network)
  reloaded = engine.cycle_distribution(loaded)
  values = np.array([float(p) for _, p in reloaded.items()])
  np.testing.assert_allclose(values, [float(p) for _, p in original.items()], atol=1e-15)
  dense = np.array([p for _, p in engine.dense_distribution(network).items()])
  np.testing.assert_allclose(values, dense, atol=1e-12)


def test_network_from_json_sources_form():
  network = data_processing.network_from_json({
      'n': 3,
      'sources': [['sqrt(1/5)', 'sqrt(4/5)'], ['sqrt(1/2)', 'sqrt(1/2)'],
                  ['sqrt(7/10)', 'sqrt(3/10)']],
      'measurement': {'kind': 'qubit', 'u': '3/5'},
  })
  reference = _unequal_network()
  assert [s.lambdas for s in network.sources] == [s.lambdas for s in reference.sources]
  assert network.measurements[0] is network.measurements[2]
  assert network.measurements[0].kind is MeasurementKind.QUBIT


def test_network_from_json_shared_source():
  network = data_processing.network_from_json({
      'n': 5,
      'sources': [['sqrt(1/2)', 'sqrt(1/2)']],
      'measurement': {'kind': 'qubit', 'u': 'sqrt(4/5)'},
  })
  reference = sim_functions.create_cycle_network(5, Fraction(4, 5))
  assert dict(engine.cycle_distribution(network).probabilities) == dict(
      engine.cycle_distribution(reference).probabilities)


def test_network_from_json_per_party_measurements():
  qubit = {'kind': 'qubit', 'u2': '4/5'}
  network = data_processing.network_from_json({
      'n': 3,
      'sources': [['sqrt(1/2)', 'sqrt(1/2)']],
      'measurements': [qubit, qubit, {'kind': 'qubit', 'u2': '1/2'}],
  })
  assert network.measurements[0] is network.measurements[1]
  assert network.measurements[2] is not network.measurements[0]
  summary = data_processing.network_to_json(network)
  assert 'measurement' not in summary
  assert len(summary['measurements']) == 3


BELL = [['sqrt(1/2)', 'sqrt(1/2)']]
QUBIT_HALF = {'kind': 'qubit', 'u2': '1/2'}


@pytest.mark.parametrize('data', [
    {'n': 3, 'sources': BELL * 2, 'measurement': QUBIT_HALF},
    {'n': 2, 'sources': BELL, 'measurement': QUBIT_HALF},
    {'n': 3, 'sources': BELL, 'measurement': {'kind': 'ring'}},
    {'n': 3, 'sources': [['sqrt(1/3)'] * 3], 'measurement': {'kind': 'qutrit', 'eta_up': []}},
])
def test_network_from_json_sources_form_errors(data):
  with pytest.raises(DomainError):
    data_processing.network_from_json(data)


def test_problem_to_lp_text():
  problem = lp_solver.FeasibilityProblem(title='demo')
  x = problem.add_variable('x')
  y = problem.add_variable('y')
  problem.add_equality({x: 1, y: Fraction(-1, 2)}, Fraction(1, 3), 'r0')
  text = data_processing.problem_to_lp_text(problem)
  assert text.splitlines() == [
      '\\ demo',
      'Minimize',
      ' obj: 0',
      'Subject To',
      ' r0: x - 1/2 y = 1/3',
      'Bounds',
      ' x >= 0',
      ' y >= 0',
      'End',
  ]


def test_feasibility_to_json():
  problem = certificates.triangle_marginal_problem(Fraction(1, 2), Fraction(9, 10))
  report = data_processing.feasibility_to_json(problem, lp_solver.lp_feasible(problem))
  assert report['status'] == 'infeasible'
  assert report['exact'] is True
  assert report['farkas']
  assert 'witness' not in report
  json.dumps(report)


def test_constraint_report_to_json(triangle_four_fifths_dist):
  noisy = engine.white_noise_mix(triangle_four_fifths_dist, Fraction(1, 10))
  report = certificates.check_support_constraints(noisy, certificates.SupportKind.QUBIT_CYCLE)
  as_json = data_processing.constraint_report_to_json(report, 1e-12)
  assert as_json['holds'] is False
  assert as_json['violations'][0]['observed'] == '1/160'


def test_model_to_json():
  model = trilocal.uniform_chi_model(3)
  document = data_processing.model_to_json(model, 'uniform-chi', {'u2': '1/2'})
  keys = schema.ModelSchema
  assert document[keys.KIND] == 'uniform-chi'
  assert document[keys.N_PARTIES] == 3
  assert document[keys.SOURCES][0][keys.WEIGHTS] == ['1/4'] * 4
  assert document[keys.SOURCES][0][keys.HIDDEN] == ['b0r0', 'b0r1', 'b1r0', 'b1r1']
  assert len(document[keys.RESPONSES][0]) == 16
  assert document[keys.RESPONSES][0][0][keys.OUTPUT] == {'chi0': 1}
  assert document[keys.PARAMETERS] == {'u2': '1/2'}
  json.dumps(document)


def test_samples_csv(tmp_path):
  samples = trilocal.sample(trilocal.uniform_chi_model(3), 10, seed=3)
  path = tmp_path / 'samples.csv'
  data_processing.write_samples_csv(samples, path)
  dataf = pd.read_csv(path, dtype=str)
  assert list(dataf.columns) == ['sample', 'a0', 'a1', 'a2']
  assert len(dataf) == 10
  assert data_processing.outcome_token(samples[0]) == ','.join(dataf.iloc[0, 1:])


def test_threshold_frame():
  dataf = data_processing.threshold_frame([(0.5, 0.886), (0.01, None)])
  assert dataf['status'].tolist() == ['threshold', 'no_threshold']
  assert dataf['u_max_sq'].tolist()[1] == ''
  assert float(dataf['u_max'].tolist()[0]) == 0.886
