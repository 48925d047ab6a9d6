#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Testes da linha de comando: relatórios JSON, códigos de saída, catálogo,
validação de arquivos de instância e varredura em CSV.
"""

import json
import logging
import os
import subprocess
import sys
from unittest.mock import patch

import pytest
from click.testing import CliRunner

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import cli

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

PLANE = {
    'name': 'p2',
    'rays': [['1', '0'], ['0', '1'], ['-1', '-1']],
    'max_cones': [[0, 1], [1, 2], [0, 2]]
}


@pytest.fixture
def runner():
    with patch.dict(os.environ, {'TORFOL_ENV': 'testing'}):
        yield CliRunner()


def invoke(runner, *args):
    result = runner.invoke(cli, ['--log-level', 'ERROR', *args])
    logger.info(f'torfol {" ".join(args)} -> {result.exit_code}')
    return result


def report(result):
    return json.loads(result.output)


def write_instance(tmp_path, document, name='instance.json'):
    path = tmp_path / name
    path.write_text(document if isinstance(document, str) else json.dumps(document), encoding='utf-8')
    return str(path)


def test_examples_lists_catalog(runner):
    result = invoke(runner, 'examples')
    assert result.exit_code == 0
    names = [entry['name'] for entry in json.loads(result.output)]
    assert {'p3-wa', 'nonfano-s', 'p4-pi', 'p3-w2021', 'acc-n', 'density'} <= set(names)


def test_examples_emits_instance(runner, tmp_path):
    result = invoke(runner, 'examples', 'acc-n', '--n', '7')
    assert result.exit_code == 0
    document = json.loads(result.output)
    assert document['family'] == 'acc-n'
    assert document['family_params'] == {'n': '7'}

    out = tmp_path / 'acc7.json'
    result = invoke(runner, 'examples', 'acc-n', '--n', '7', '--out', str(out))
    assert result.exit_code == 0
    assert json.loads(out.read_text(encoding='utf-8')) == document


def test_examples_unknown_name(runner):
    result = invoke(runner, 'examples', 'p7-nothing')
    assert result.exit_code == 2
    data = report(result)
    assert data['errors'][0]['error'] == 'UnknownExample'
    assert data['hint']


def test_examples_density_rejects_non_primitive_generator(runner):
    result = invoke(runner, 'examples', 'density', '--s', '3', '--k', '2')
    assert result.exit_code == 2
    data = report(result)
    assert data['errors'][0]['error'] == 'PreconditionViolated'

    result = invoke(runner, 'examples', 'density', '--s', '5', '--k', '2')
    assert result.exit_code == 0
    assert json.loads(result.output)['description'].endswith('[0, 1/6]')


def test_dotenv_in_working_directory_is_applied(tmp_path):
    """Um .env no diretório atual vale antes de config ler o ambiente"""
    (tmp_path / '.env').write_text(
        'TORFOL_ENV=development\nTORFOL_REPORT_TIMING=false\nTORFOL_REPORT_INDENT=0\n', encoding='utf-8')
    env = {key: value for key, value in os.environ.items() if not key.startswith(('TORFOL_', 'LOG_'))}
    script = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'cli.py')
    completed = subprocess.run([sys.executable, script, '--log-level', 'ERROR', 'validate', 'p3-w2021'],
                               cwd=str(tmp_path), env=env, capture_output=True, text=True, encoding='utf-8')
    assert completed.returncode == 0, completed.stderr
    lines = completed.stdout.strip().splitlines()
    assert len(lines) == 1
    data = json.loads(lines[0])
    assert 'timing' not in data
    assert data['success']


def test_validate_builtin(runner):
    result = invoke(runner, 'validate', 'p3-w2021')
    assert result.exit_code == 0
    data = report(result)
    assert data['success']
    assert data['result']['complete']
    assert data['result']['simplicial']
    assert data['result']['foliation'] == {'rank': 2, 'algebraic': True, 'tangent': False}
    assert 'timing' not in data


def test_validate_names_broken_axiom(runner, tmp_path):
    """Diagonal do quadrado listada como cone: face-closure"""
    path = write_instance(tmp_path, {
        'rays': [['1', '0', '1'], ['0', '1', '1'], ['-1', '0', '1'], ['0', '-1', '1']],
        'max_cones': [[0, 1, 2, 3], [0, 2]]
    })
    result = invoke(runner, 'validate', path)
    assert result.exit_code == 1
    data = report(result)
    assert not data['success']
    assert data['errors'][0]['axiom'] == 'face-closure'


def test_decimal_flag_is_rejected(runner):
    result = invoke(runner, 'dlc', 'p3-w2021', '--t', '0.5', '--delta', '1/10')
    assert result.exit_code == 2


def test_decimal_in_file_is_rejected(runner, tmp_path):
    document = dict(PLANE, rays=[['1', '0'], ['0', '1'], ['-1', '-1.0']])
    result = invoke(runner, 'validate', write_instance(tmp_path, document))
    assert result.exit_code == 2
    data = report(result)
    assert data['errors'][0]['error'] == 'InvalidInstance'
    assert any('rays' in line for line in data['errors'][0]['diagnostics'])


def test_invalid_json_reports_position(runner, tmp_path):
    result = invoke(runner, 'validate', write_instance(tmp_path, '{"rays": [["1", "0"],'))
    assert result.exit_code == 2
    diagnostics = report(result)['errors'][0]['diagnostics']
    assert diagnostics[0].startswith('line 1, column')


def test_unknown_instance_reference(runner):
    result = invoke(runner, 'validate', 'no-such-file.json')
    assert result.exit_code == 2
    assert report(result)['errors'][0]['error'] == 'InvalidInstance'


def test_lct_on_acc_family(runner):
    result = invoke(runner, 'lct', 'acc-n', '--delta', '1/2', '--n', '6')
    assert result.exit_code == 0
    data = report(result)
    assert data['result']['interval'] == ['1/2', '1']
    assert data['result']['closed_form_lower']['value'] == '1/2'
    assert data['result']['closed_form_lower']['maximizer'] == ['1/6', '1/6']


def test_reports_are_deterministic(runner):
    first = invoke(runner, 'lct', 'acc-n', '--delta', '1/2', '--n', '8')
    second = invoke(runner, 'lct', 'acc-n', '--delta', '1/2', '--n', '8')
    assert first.output == second.output
    assert report(first)['instance_hash'] == report(second)['instance_hash']


def test_loci_of_p3_w2021(runner):
    result = invoke(runner, 'loci', 'p3-w2021')
    assert result.exit_code == 0
    data = report(result)['result']
    assert data['dicritical']['minimal_cones'] == [[0, 2], [1, 2]]
    assert data['dicritical']['is_connected']
    assert data['singular']['minimal_cones'] == [[0, 1], [0, 2], [1, 2]]
    assert data['dicritical_equals_singular'] is False


def test_loci_flags_model_dependence(runner):
    result = invoke(runner, 'loci', 'p4-pi')
    assert result.exit_code == 0
    data = report(result)
    assert data['model_dependent']
    assert not data['result']['dicritical']['is_closed']


def test_dlc_refuted_with_witness(runner):
    result = invoke(runner, 'dlc', 'p4-pi', '--t', '1', '--delta', '1/10')
    assert result.exit_code == 1
    data = report(result)
    assert data['result']['delta_lc'] is False
    assert data['witnesses'][0]['threshold'] == '1/10'


def test_dlc_needs_parameters(runner, tmp_path):
    result = invoke(runner, 'dlc', write_instance(tmp_path, PLANE))
    assert result.exit_code == 2
    assert report(result)['errors'][0]['hypothesis'] == 't'


def test_fano_on_nonfano_threefold(runner):
    result = invoke(runner, 'fano', 'nonfano-s', '--s', '2')
    assert result.exit_code == 0
    data = report(result)['result']
    assert data['foliation_fano'] is True
    assert data['variety_fano'] is False
    assert data['zero_cone'] == [2, 3]


def test_fano_refuted(runner, tmp_path):
    document = dict(PLANE, foliation={'lattice_generators': [['1', '2']]})
    result = invoke(runner, 'fano', write_instance(tmp_path, document))
    assert result.exit_code == 1
    data = report(result)
    assert data['result']['foliation_fano'] is False
    assert data['witnesses'][0]['collection'] == [0, 1, 2]


def test_certificate_on_plane(runner, tmp_path):
    path = write_instance(tmp_path, PLANE)
    result = invoke(runner, 'certificate', path, '--t1', '0', '--t2', '0', '--delta', '1')
    assert result.exit_code == 1
    data = report(result)
    assert data['result']['lambda'] == '2'
    assert data['result']['scale'] == '2'
    assert data['witnesses'] == [['-2', '-2']]


def test_certificate_hypothesis_failure(runner, tmp_path):
    path = write_instance(tmp_path, PLANE)
    result = invoke(runner, 'certificate', path, '--t1', '0', '--t2', '0', '--delta', '2')
    assert result.exit_code == 2
    data = report(result)
    assert data['errors'][0]['hypothesis'] == 'delta-lc'
    assert data['witnesses'][0]['point'] == ['-1', '-1']


def test_lctset_certifies_acc_endpoint(runner):
    result = invoke(runner, 'lctset', 'acc-n', '--n', '6', '--delta', '1/2')
    assert result.exit_code == 0
    data = report(result)['result']
    assert data['certified'] is True
    assert data['x'] == ['1/6', '1/6']
    assert data['ell'] == 1


def test_sweep_csv(runner):
    result = invoke(runner, 'sweep', '--delta', '1/2', '--q', '3/4', '--s-min', '3', '--s-max', '7')
    assert result.exit_code == 0
    lines = result.output.strip().split('\n')
    assert lines[0] == 's,k,b_s,b_s_decimal,limit,abs_error,bound'
    assert lines[1] == '3,1,1/4,0.2500000000,1/3,1/12,2/3'
    assert len(lines) == 4


def test_sweep_verify_to_file(runner, tmp_path):
    out = tmp_path / 'sweep.csv'
    result = invoke(runner, 'sweep', '--q', '3/4', '--s-min', '3', '--s-max', '5', '--verify', '--out', str(out))
    assert result.exit_code == 0
    lines = out.read_text(encoding='utf-8').strip().split('\n')
    assert lines[0].endswith(',verified')
    assert all(line.endswith(',true') for line in lines[1:])


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
