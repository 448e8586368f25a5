import json
import pytest
from qdeform.errors import UsageError
from qdeform.qcli.config import parse_config, parse_config_text, parse_sweep
from qdeform.qcli.data_io import format_csv, jsonable, make_eval_table
from qdeform.qcli.runner import (DEFAULT_EXTENT, EXIT_ERROR, EXIT_OK,
                                 lattice_extent, main)
from qdeform.qcore.exp import q_exp

def read_csv_lines(path):
    with open(path, encoding = 'utf-8') as f:
        return f.read().splitlines()

def test_defaults_and_formats():
    config = parse_config(['eval'])
    assert config.q == 1.2
    assert config.count == 48
    assert config.lambda0 is None
    assert config.format == 'csv'
    assert parse_config(['verify']).format == 'json'
    assert parse_config(['schrod-eigen']).format == 'json'
    assert parse_config(['schrod-eigen', '--format', 'csv']).format == 'csv'

def test_default_extent_keeps_profiles_positive():
    q = 1.2
    extent = lattice_extent(parse_config(['eval']), q)
    assert extent == DEFAULT_EXTENT
    stationary = lattice_extent(parse_config(['fp-stationary']), q)
    evolve = lattice_extent(parse_config(['fp-evolve']), q)
    assert evolve < stationary <= 2.
    assert 2. * evolve ** 2 * (q - 1.) < 1.
    explicit = parse_config(['fp-evolve', '--lambda0', '3'])
    assert lattice_extent(explicit, q) == 3.

def test_flags_override_config_file():
    text = 'q = 0.5\ncount = 10  # points\n\n# comment\nscheme = implicit\n'
    config = parse_config(['fp-evolve', '--q', '0.7'], config_text = text)
    assert config.q == 0.7
    assert config.count == 10
    assert config.scheme == 'implicit'

def test_config_file_from_disk(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text('lambda0 = 3\nbranch = symmetric\n', encoding = 'utf-8')
    config = parse_config(['eval', '--config', str(path)])
    assert config.lambda0 == 3.
    assert config.branch == 'symmetric'
    with pytest.raises(UsageError):
        parse_config(['eval', '--config', str(tmp_path / 'missing.cfg')])

def test_invalid_flag_names_key():
    with pytest.raises(UsageError) as info:
        parse_config(['eval', '--q', '-1'])
    assert info.value.key == 'q'

def test_invalid_config_value_names_line():
    with pytest.raises(UsageError) as info:
        parse_config(['eval'], config_text = 'count = 10\nq = abc\n')
    assert info.value.key == 'q'
    assert info.value.line == 2

def test_config_text_errors():
    with pytest.raises(UsageError) as info:
        parse_config_text('q = 1.5\nwidth = 3\n')
    assert info.value.key == 'width'
    assert info.value.line == 2
    with pytest.raises(UsageError):
        parse_config_text('q 1.5\n')

def test_unknown_command():
    with pytest.raises(UsageError):
        parse_config(['integrate'])

def test_parse_sweep():
    assert parse_sweep('q=0.5:1.5:3') == (0.5, 1.5, 3)
    for text in ('k=0.5:1.5:3', 'q=0.5:1.5', 'q=0:1:3', 'q=0.5:1.5:0'):
        with pytest.raises(UsageError):
            parse_sweep(text)
    config = parse_config(['eval', '--sweep', 'q=0.5:0.9:2'])
    assert config.sweep == (0.5, 0.9, 2)
    single = config.with_q(0.5, 'out_q0.5.csv')
    assert single.sweep is None and single.q == 0.5

def test_csv_format_carries_schema_version():
    z = [0.1, 0.2]
    table = make_eval_table([1., 2.], z, [q_exp(zi, 0.5) for zi in z])
    lines = format_csv(table).splitlines()
    assert lines[0].startswith('x,z,E_q_re,E_q_im,terms_used')
    assert lines[1] == '# schema-version 1'
    assert len(lines) == 4

def test_jsonable():
    assert jsonable({'a': 1 + 2j}) == {'a': {'re': 1., 'im': 2.}}
    assert jsonable(float('inf')) == 'inf'
    assert jsonable((True, 3)) == [True, 3]

def test_main_eval_writes_csv(tmp_path):
    path = tmp_path / 'eval.csv'
    status = main(['eval', '--q', '0.5', '--lambda0', '1', '--count', '8',
                   '--output', str(path)])
    assert status == EXIT_OK
    lines = read_csv_lines(path)
    assert lines[1] == '# schema-version 1'
    assert len(lines) == 10

def test_main_json_output(tmp_path):
    path = tmp_path / 'eval.json'
    status = main(['eval', '--q', '0.5', '--lambda0', '1', '--count', '4',
                   '--format', 'json', '--output', str(path)])
    assert status == EXIT_OK
    summary = json.loads(path.read_text(encoding = 'utf-8'))
    assert summary['schema_version'] == 1
    assert len(summary['rows']) == 4
    assert isinstance(summary['warnings'], list)

def test_main_reports_usage_errors(tmp_path):
    assert main(['eval', '--q', '-1']) == EXIT_ERROR
    assert main(['eval', '--count', '1']) == EXIT_ERROR
    assert main(['eval', '--sweep', 'q=0.5:0.9:2']) == EXIT_ERROR

def test_main_reports_library_errors(tmp_path):
    # an explicit step far above the stability bound
    status = main(['fp-evolve', '--q', '0.8', '--lambda0', '2', '--count',
                   '12', '--scheme', 'explicit', '--dt', '1', '--steps', '1',
                   '--output', str(tmp_path / 'fp.csv')])
    assert status == EXIT_ERROR

def test_main_fp_commands(tmp_path):
    path = tmp_path / 'fp.csv'
    assert main(['fp-stationary', '--q', '0.8', '--lambda0', '2', '--count',
                 '12', '--output', str(path)]) == EXIT_OK
    assert len(read_csv_lines(path)) == 14
    path = tmp_path / 'evolve.csv'
    assert main(['fp-evolve', '--q', '0.8', '--lambda0', '2', '--count', '12',
                 '--dt', '1e-2', '--steps', '3', '--output',
                 str(path)]) == EXIT_OK
    assert len(read_csv_lines(path)) == 2 + 4 * 12

def test_main_schrodinger_commands(tmp_path):
    path = tmp_path / 'eigen.json'
    assert main(['schrod-eigen', '--q', '0.8', '--lambda0', '2', '--count',
                 '12', '--levels', '2', '--output', str(path)]) == EXIT_OK
    summary = json.loads(path.read_text(encoding = 'utf-8'))
    assert summary['levels'] == 2
    assert summary['q'] == 0.8
    path = tmp_path / 'free.csv'
    assert main(['schrod-free', '--q', '0.9', '--count', '10', '--output',
                 str(path)]) == EXIT_OK
    assert len(read_csv_lines(path)) == 12
    path = tmp_path / 'evolve.csv'
    assert main(['schrod-evolve', '--q', '0.8', '--lambda0', '2', '--count',
                 '12', '--levels', '2', '--dt', '0.1', '--steps', '5',
                 '--output', str(path)]) == EXIT_OK
    assert len(read_csv_lines(path)) == 8

def test_main_sweep_writes_one_file_per_q(tmp_path):
    path = tmp_path / 'sweep.csv'
    status = main(['eval', '--lambda0', '1', '--count', '4', '--sweep',
                   'q=0.5:0.9:2', '--output', str(path)])
    assert status == EXIT_OK
    assert (tmp_path / 'sweep_q0.5.csv').exists()
    assert (tmp_path / 'sweep_q0.9.csv').exists()

@pytest.mark.parametrize('q', ['0.8', '1.2', '2'])
def test_main_verify_report(tmp_path, q):
    path = tmp_path / 'verify.json'
    status = main(['verify', '--q', q, '--levels', '2', '--output',
                   str(path)])
    report = json.loads(path.read_text(encoding = 'utf-8'))
    failed = [name for name, suite in report['suites'].items()
              if not suite['passed']]
    assert failed == []
    assert report['passed']
    assert status == EXIT_OK
    for name in ('q_pascal', 'exp_inverse', 'fundamental_theorem',
                 'free_particle_residual', 'inner_product_linearity',
                 'biorthonormality'):
        assert report['suites'][name]['passed'], name
    assert report['flags']['partner'] == 'adjoint'
    assert report['environment']['q'] == float(q)
    assert 'q_norm_survey' in report['observations']

@pytest.mark.parametrize('command', ['eval', 'fp-stationary', 'fp-evolve',
                                     'schrod-eigen', 'schrod-free',
                                     'schrod-evolve'])
def test_main_runs_with_defaults(tmp_path, command):
    path = tmp_path / 'out'
    assert main([command, '--output', str(path)]) == EXIT_OK
    assert path.stat().st_size > 0

@pytest.mark.parametrize('argv', [
    ['eval', '--q', '0.5', '--lambda0', '1', '--count', '8'],
    ['fp-evolve', '--q', '0.8', '--count', '12', '--dt', '1e-2', '--steps',
     '3'],
    ['schrod-eigen', '--q', '0.8', '--lambda0', '2', '--count', '12',
     '--levels', '2']])
def test_main_output_is_reproducible(tmp_path, argv):
    first, second = tmp_path / 'first', tmp_path / 'second'
    assert main(argv + ['--output', str(first)]) == EXIT_OK
    assert main(argv + ['--output', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
