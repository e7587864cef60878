import csv
import json

import pytest

from invlip import __version__
from invlip.cli import EXIT_BAD_INPUT, main
from invlip.cli.parser import create_parser

RAMP = {'group': {'generators': ['a']}, 'function': {'kind': 'example', 'delta': 1}}
RANDOM_F2 = {
    'group': {'backend': 'free', 'generators': ['a', 'b']},
    'function': {'kind': 'random', 'delta': '1', 'support_radius': 2, 'seed': 1},
}
RANDOM_Z2 = {
    'group': {'backend': 'free_abelian', 'generators': ['a', 'b']},
    'function': {'kind': 'random', 'delta': '1', 'support_radius': 2, 'seed': 3},
}


def run(*argv):
    return main(create_parser().parse_args([str(arg) for arg in argv]))


def test_version(capsys):
    """
    Minimal test that we can parse input and do something
    """
    assert run('--version') == 0
    captured = capsys.readouterr()
    assert str(__version__) in captured.out


def test_no_command(capsys):
    assert run() == EXIT_BAD_INPUT
    assert 'usage' in capsys.readouterr().out


def test_approx_free_then_check(write_json, tmp_path):
    instance = write_json('ramp.json', RAMP)
    out = tmp_path / 'report.json'
    assert run('approx-free', '-i', instance, '-r', 16, '-o', out) == 0
    report = json.loads(out.read_text())
    assert report['achieved'] == '1/2'
    assert report['bound'] == '1/2'
    assert report['pass'] is True
    assert run('check', '--report', out, '--instance', instance) == 0


def test_approx_kind_argument(write_json, tmp_path):
    instance = write_json('ramp.json', RAMP)
    out = tmp_path / 'report.json'
    assert run('approx', 'free', '-i', instance, '-r', 16, '-o', out) == 0
    assert json.loads(out.read_text())['kind'] == 'free'


def test_seed_sweep(write_json, tmp_path):
    instance = write_json('f2.json', RANDOM_F2)
    out = tmp_path / 'reports.json'
    curve = tmp_path / 'curve.csv'
    assert run('approx-free', '-i', instance, '-r', 2, '--seeds', '1..3', '-o', out, '--csv', curve) == 0
    reports = json.loads(out.read_text())['reports']
    assert [report['seed'] for report in reports] == [1, 2, 3]
    with open(curve, newline='') as fd:
        rows = list(csv.DictReader(fd))
    assert [row['seed'] for row in rows] == ['1', '2', '3']
    assert all(row['pass'] == 'true' for row in rows)


def test_sweep_needs_random_function(write_json):
    instance = write_json('ramp.json', RAMP)
    assert run('approx-free', '-i', instance, '--seeds', '1..2') == EXIT_BAD_INPUT


def test_presented_then_check(write_json, tmp_path):
    instance = write_json('z2.json', RANDOM_Z2)
    out = tmp_path / 'report.json'
    assert run('approx-presented', '-i', instance, '-r', 2, '-o', out) == 0
    report = json.loads(out.read_text())
    assert report['extras']['C_R'] == '2'
    assert run('check', '--report', out, '--instance', instance) == 0


def test_orbit(write_json, tmp_path):
    instance = write_json('ladder.json', {
        'action': {'preset': 'flip_ladder'},
        'function': {'kind': 'random', 'seed': 4},
    })
    out = tmp_path / 'report.json'
    assert run('approx-orbit', '-i', instance, '-o', out) == 0
    assert json.loads(out.read_text())['extras']['invariant'] is True
    assert run('check', '--report', out, '--instance', instance) == 0


def test_mean_growth_then_check(write_json, tmp_path):
    instance = write_json('ramp.json', RAMP)
    out = tmp_path / 'growth.json'
    assert run('mean-growth', '-i', instance, '-s', 'a', '-o', out, '--table') == 0
    report = json.loads(out.read_text())
    assert (report['c_plus'], report['c_minus'], report['c']) == ('1', '0', '1/2')
    assert run('check', '--report', out, '--instance', instance) == 0


def test_tampered_report_fails_check(write_json, tmp_path):
    instance = write_json('ramp.json', RAMP)
    out = tmp_path / 'growth.json'
    assert run('mean-growth', '-i', instance, '-s', 'a', '-o', out) == 0
    report = json.loads(out.read_text())
    report['c_plus'] = '2'
    out.write_text(json.dumps(report))
    assert run('check', '--report', out, '--instance', instance) == 1


def test_qm(write_json, tmp_path):
    instance = write_json('z2.json', RANDOM_Z2)
    out = tmp_path / 'qm.json'
    assert run('qm', '-i', instance, '-r', 2, '-o', out) == 0
    report = json.loads(out.read_text())
    assert report['implications']['consistent'] is True
    assert run('check', '--report', out, '--instance', instance) == 0


def test_qm_on_free_group_needs_lenient(write_json, tmp_path):
    instance = write_json('f2.json', RANDOM_F2)
    assert run('qm', '-i', instance, '-r', 1) == 1
    assert run('qm', '-i', instance, '-r', 1, '--lenient', '-o', tmp_path / 'qm.json') == 0


def test_kernel_project(write_json, tmp_path):
    matrix = write_json('A.json', [[0, 0]])
    vector = write_json('x.json', ['1/3', -2])
    out = tmp_path / 'u.json'
    assert run('kernel-project', '-A', matrix, '-x', vector, '--oracle', '-o', out) == 0
    data = json.loads(out.read_text())
    assert data['u'] == ['1/3', '-2']
    assert data['t'] == '0'
    assert data['oracle_agrees'] is True


@pytest.mark.parametrize(
    'argv',
    [
        ('approx-free', '-i', '{missing}'),
        ('approx-free', '-i', '{instance}', '-r', 0),
        ('kernel-project', '-A', '{instance}', '-x', '{instance}'),
        ('qm', '-i', '{instance}', '--delta', 'half'),
    ]
)
def test_bad_input(write_json, tmp_path, argv, capsys):
    instance = write_json('bad.json', {'group': {'backend': 'free'}})
    missing = tmp_path / 'missing.json'
    argv = [str(arg).format(instance=instance, missing=missing) for arg in argv]
    assert run(*argv) == EXIT_BAD_INPUT
    assert capsys.readouterr().out


def test_bad_action_point(write_json):
    instance = write_json('ladder.json', {
        'action': {'preset': 'flip_ladder'},
        'function': {'kind': 'tabulated', 'values': [['top', '1']]},
    })
    assert run('approx-orbit', '-i', instance) == EXIT_BAD_INPUT


def test_suite_command(tmp_path):
    out = tmp_path / 'suite.json'
    assert run('suite', '--only', 'example', '--only', 'orbit', '--seeds', '1..3', '--out', out) == 0
    data = json.loads(out.read_text())
    assert [result['name'] for result in data['results']] == ['example', 'orbit']
    assert all(result['pass'] for result in data['results'])


def test_suite_unknown_check():
    assert run('suite', '--only', 'nonsense') == EXIT_BAD_INPUT


def test_certification_failure(write_json, tmp_path):
    """
    The declared relator is not killed by the homomorphism, which has no defect.
    """
    instance = write_json('z2.json', {
        'group': {'backend': 'free_abelian', 'generators': ['a', 'b'], 'relators': ['a^2 b^-2']},
        'function': {'kind': 'structured', 'hom': [1, 0]},
    })
    assert run('approx-presented', '-i', instance, '-r', 1) == 1
