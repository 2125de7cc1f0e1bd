import json

import pandas as pd
import pytest

from qnet_model import cli
from qnet_model.data import data_processing
from qnet_model.data.enums import ExitCode


def test_triangle_distribution_csv(tmp_path, capsys):
  out = tmp_path / 'triangle.csv'
  assert cli.main(['distribution', '--triangle', '--u2', '4/5', '-o', str(out)]) == ExitCode.OK
  dist = data_processing.read_distribution_csv(out)
  assert dist.exact
  assert dist.n_outcomes == 64
  printed = capsys.readouterr().out
  assert 'Sum of probabilities: 1' in printed


@pytest.mark.parametrize('args, rows', [
    (['--qutrit-example'], 729),
    (['--cycle', '5', '--u2', '4/5'], 1024),
    (['--triangle', '--u2', '0.7', '--lambda02', '0.6', '--float'], 64),
])
def test_distribution_row_counts(tmp_path, args, rows):
  out = tmp_path / 'dist.csv'
  assert cli.main(['distribution', *args, '-o', str(out)]) == ExitCode.OK
  assert len(pd.read_csv(out)) == rows


def test_distribution_json_to_stdout(capsys):
  assert cli.main(['distribution', '--triangle', '--u2', '1/2', '--format', 'json']) == 0
  captured = capsys.readouterr()
  document = json.loads(captured.out)
  assert document['scenario']['n'] == 3
  assert len(document['outcomes']) == 64
  assert 'Outcomes: 64' in captured.err


def test_certify_above_threshold(tmp_path):
  out = tmp_path / 'report.json'
  lp = tmp_path / 'problem.lp'
  code = cli.main(['certify', '--triangle', '--u2', '0.9', '--lambda02', '0.5', '-o', str(out),
                   '--lp-output', str(lp)])
  assert code == ExitCode.INFEASIBLE
  report = json.loads(out.read_text())
  assert report['verdict'] == 'nonlocality_certified'
  assert report['marginal_problem']['status'] == 'infeasible'
  assert report['support_constraints']['holds'] is True
  assert report['marginal_inequality_lhs'] < 0
  assert lp.read_text().startswith('\\ triangle')


def test_certify_at_half_finds_no_certificate(tmp_path):
  out = tmp_path / 'report.json'
  assert cli.main(['certify', '--triangle', '--u2', '1/2', '-o', str(out)]) == ExitCode.OK
  report = json.loads(out.read_text())
  assert report['verdict'] == 'consistent_with_local'
  assert report['marginal_problem']['status'] == 'feasible'


def test_certify_qutrit_example(tmp_path):
  out = tmp_path / 'report.json'
  assert cli.main(['certify', '--qutrit-example', '-o', str(out)]) == ExitCode.INFEASIBLE
  report = json.loads(out.read_text())
  assert report['marginal_problem']['status'] == 'infeasible'
  assert report['forced_solution']['negative_entries'] == [[1, 1, 0, '-1/30']]
  assert report['forced_solution']['m1'][1][0] == '-1/30'


def test_certify_odd_cycle(tmp_path):
  out = tmp_path / 'report.json'
  code = cli.main(['certify', '--cycle', '5', '--u2', '99/100', '-o', str(out)])
  assert code == ExitCode.INFEASIBLE
  report = json.loads(out.read_text())
  assert report['marginal_problem']['title'].startswith('cycle N=5')


def test_certify_scenario_file(tmp_path):
  scenario = tmp_path / 'scenario.json'
  scenario.write_text(json.dumps({'kind': 'qubit', 'u2': '9/10'}), encoding='utf-8')
  out = tmp_path / 'report.json'
  assert cli.main(['certify', '--scenario', str(scenario), '-o', str(out)]) == 10


def test_certify_scenario_file_with_sources(tmp_path):
  scenario = tmp_path / 'scenario.json'
  scenario.write_text(json.dumps({
      'n': 3,
      'sources': [['sqrt(1/2)', 'sqrt(1/2)']] * 3,
      'measurement': {'kind': 'qubit', 'u2': '9/10'},
  }), encoding='utf-8')
  out = tmp_path / 'report.json'
  assert cli.main(['certify', '--scenario', str(scenario), '-o', str(out)]) == ExitCode.INFEASIBLE
  report = json.loads(out.read_text())
  assert report['marginal_problem']['status'] == 'infeasible'
  assert report['scenario']['sources'][0] == ['1/2*sqrt(2)', '1/2*sqrt(2)']


def test_certify_scenario_file_with_unequal_sources(tmp_path):
  scenario = tmp_path / 'scenario.json'
  scenario.write_text(json.dumps({
      'n': 3,
      'sources': [['3/5', '4/5'], ['5/13', '12/13'], ['8/17', '15/17']],
      'measurement': {'kind': 'qubit', 'u': '3/5'},
  }), encoding='utf-8')
  out = tmp_path / 'report.json'
  code = cli.main(['certify', '--scenario', str(scenario), '-o', str(out)])
  report = json.loads(out.read_text())
  assert report['support_constraints']['holds'] is True
  assert 'marginal_problem' not in report
  min_slack = data_processing.parse_scalar(report['finner']['min_slack'], exact=False)
  assert (code == ExitCode.INFEASIBLE) == (min_slack < -1e-12)


def test_threshold_rows(tmp_path):
  out = tmp_path / 'threshold.csv'
  code = cli.main(['threshold', '--lambda02', '0.5', '2/3', '0.01', '-o', str(out)])
  assert code == ExitCode.OK
  dataf = pd.read_csv(out)
  assert dataf['status'].tolist() == ['threshold', 'threshold', 'no_threshold']
  assert dataf['u_max_sq'][0] == pytest.approx(0.7855, abs=1e-3)
  assert dataf['u_max_sq'][1] == pytest.approx(2 / 3, abs=1e-4)


def test_model_uniform_chi(tmp_path):
  out = tmp_path / 'model.json'
  code = cli.main(['model', '--uniform-chi', '--cycle', '5', '--samples', '1000', '--seed', '5',
                   '-o', str(out)])
  assert code == ExitCode.OK
  document = json.loads(out.read_text())
  assert document['total_variation'] == 0
  assert document['n_parties'] == 5
  samples = tmp_path / 'model_samples.csv'
  assert len(pd.read_csv(samples)) == 1000


def test_model_samples_are_deterministic(tmp_path):
  first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
  for path in (first, second):
    assert cli.main(['model', '--uniform-chi', '--samples', '500', '--seed', '11',
                     '--samples-output', str(path), '-o', str(tmp_path / 'm.json')]) == 0
  assert first.read_text() == second.read_text()


def test_threshold_model(tmp_path):
  out = tmp_path / 'model.json'
  assert cli.main(['model', '--threshold-model', '-o', str(out)]) == ExitCode.OK
  document = json.loads(out.read_text())
  assert document['total_variation'] < 1e-6
  assert document['max_residual'] < 1e-10
  assert set(document['parameters']) == {'u2', 'kappa', 'tau'}


def test_appendix_d_flag_selects_threshold_model(tmp_path):
  out = tmp_path / 'model.json'
  assert cli.main(['model', '--appendix-d', '-o', str(out)]) == ExitCode.OK
  assert json.loads(out.read_text())['total_variation'] < 1e-6
  assert cli.main(['model', '--appendix-d', '--u2', '0.95']) == ExitCode.NO_SOLUTION


@pytest.mark.parametrize('args', [
    ['model', '--threshold-model', '--u2', '0.95'],
    ['model', '--uniform-chi', '--u2', '0.6'],
])
def test_model_without_solution(args):
  assert cli.main(args) == ExitCode.NO_SOLUTION


@pytest.mark.parametrize('args', [
    ['distribution', '--triangle', '--u2', '1.5'],
    ['distribution', '--triangle'],
    ['distribution', '--cycle', '2', '--u2', '0.5'],
    ['certify', '--triangle', '--u2', 'abc'],
    ['threshold', '--lambda02', '1.0'],
    ['model', '--uniform-chi', '--samples', '10'],
])
def test_configuration_errors(args):
  assert cli.main(args) == ExitCode.CONFIG


def test_unknown_option_exits_with_usage_error():
  with pytest.raises(SystemExit) as info:
    cli.main(['distribution', '--triangle', '--bogus'])
  assert info.value.code == 2


def test_outcome_cap(tmp_path):
  code = cli.main(['distribution', '--cycle', '5', '--u2', '4/5', '--max-outcomes', '100',
                   '-o', str(tmp_path / 'x.csv')])
  assert code == ExitCode.RESOURCE
