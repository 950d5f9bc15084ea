import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from scripts.qgate import cli
from utils.constants import HADAMARD, I2
from utils.families import FamilyId, random_params
from utils.qgate import read_qgate
from utils.schmidt import classify
from utils.tensor import kron_matrices


@pytest.fixture
def runner():
    yield CliRunner()


@pytest.fixture
def invoke(runner):
    """Run the CLI: result = invoke('analyze', path)"""
    def _invoke(*args):
        return runner.invoke(cli, [str(a) for a in args])
    return _invoke


def _write(path, text):
    path.write_text(text)
    return path


def test_analyze_ccz(invoke, catalog_file):
    result = invoke('analyze', catalog_file('ccz'))
    assert result.exit_code == 0, result.output
    assert 'genuine: true' in result.output
    assert 'sr_overall: 2' in result.output
    assert 'singular_number: 3' in result.output
    assert 'class: ghz' in result.output


def test_analyze_example1_d(invoke, catalog_file):
    result = invoke('analyze', catalog_file('example1-d'))
    assert result.exit_code == 0, result.output
    assert 'singular_number: 0' in result.output


def test_analyze_non_genuine(invoke, catalog_file):
    result = invoke('analyze', catalog_file('cnot-tensor-i'))
    assert result.exit_code == 0, result.output
    assert 'genuine: false' in result.output
    assert 'singular_number: n/a' in result.output


def test_analyze_wstate_gate(invoke, catalog_file):
    result = invoke('analyze', catalog_file('wstate-gate'))
    assert result.exit_code == 0, result.output
    assert 'sr_overall: 3' in result.output
    assert 'class: w' in result.output


def test_analyze_parse_error(invoke, tmp_path):
    path = _write(tmp_path / 'bad.qgate', 'qgate 9\ndims: 2 2\nkind: dense\n1,0 0,0\n0,0 1,0\n')
    result = invoke('analyze', path)
    assert result.exit_code == 2


def test_analyze_missing_file(invoke, tmp_path):
    assert invoke('analyze', tmp_path / 'missing.qgate').exit_code == 2


def test_analyze_non_unitary(invoke, tmp_path):
    path = _write(tmp_path / 'scaled.qgate', 'qgate 1\ndims: 2 2 2\nkind: diagonal\n' + ' '.join(['2,0'] * 8) + '\n')
    result = invoke('analyze', path)
    assert result.exit_code == 3


def test_generate_n_k0(invoke, tmp_path):
    out = tmp_path / 'nk0.qgate'
    result = invoke('generate', 'n-k0', '--n', 4, '--param', 'alpha=1.0', '--param', 'beta=0.5', '--out', out)
    assert result.exit_code == 0, result.output
    assert '(k=0)' in result.output

    result = invoke('analyze', out)
    assert result.exit_code == 0, result.output
    assert 'singular_number: 0' in result.output


def test_generate_t3_k3_near_pi(invoke, tmp_path):
    out = tmp_path / 'k3.qgate'
    result = invoke('generate', 't3-k3', '--param', 'phi=3.14159265', '--out', out)
    assert result.exit_code == 0, result.output
    U = read_qgate(str(out))
    assert np.allclose(U.entries, np.diag([-1] + [1] * 7), atol=1e-8)
    assert classify(U).singular_number == 3


def test_generate_permuted(invoke, tmp_path):
    out = tmp_path / 'k2b.qgate'
    result = invoke('generate', 't3-k2b', '--param', 'gamma=1.0', '--param', 'delta=2.0',
                    '--permute', '2,1,3', '--out', out)
    assert result.exit_code == 0, result.output
    assert classify(read_qgate(str(out))).singular_number == 2


def test_generate_domain_error(invoke, tmp_path):
    result = invoke('generate', 't3-k1a', '--param', 'c=1.0', '--param', 'alpha=1.0',
                    '--out', tmp_path / 'k1.qgate')
    assert result.exit_code == 4
    assert not (tmp_path / 'k1.qgate').exists()


def test_generate_bad_arguments(invoke, tmp_path):
    out = tmp_path / 'x.qgate'
    assert invoke('generate', 'n-k9', '--out', out).exit_code == 2
    assert invoke('generate', 't3-k3', '--param', 'phi', '--out', out).exit_code == 2
    assert invoke('generate', 't3-k2b', '--param', 'gamma=1', '--param', 'delta=2',
                  '--permute', '1,1,3', '--out', out).exit_code == 2


def test_classify_diag3(invoke, catalog_file):
    result = invoke('classify-diag3', catalog_file('wstate-gate'))
    assert result.exit_code == 0, result.output
    assert 'class: w' in result.output
    assert 'schmidt_rank: 3' in result.output

    result = invoke('classify-diag3', catalog_file('ccz'))
    assert 'class: ghz' in result.output


def test_classify_diag3_rejects_dense(invoke, catalog_file):
    assert invoke('classify-diag3', catalog_file('toffoli')).exit_code == 2


def test_sweep_t3_k2a(invoke, tmp_path):
    result = invoke('sweep', 't3-k2a', '--grid', 'theta=0.5:6.0:4', '--grid', 'phi=0.3:5.9:4',
                    '--out-dir', tmp_path)
    assert result.exit_code == 0, result.output
    df = pd.read_csv(tmp_path / 'sweep_t3-k2a.csv')
    assert len(df) == 16
    assert (df['sn'] == 2).all()
    assert not df['flagged'].any()


def test_sweep_flags_excluded_line(invoke, tmp_path):
    result = invoke('sweep', 'n-kn1', '--n', 4, '--grid', 'theta=0.5:2.5:3', '--grid', 'phi=0.5:2.5:3',
                    '--out-dir', tmp_path)
    assert result.exit_code == 0, result.output
    df = pd.read_csv(tmp_path / 'sweep_n-kn1.csv')
    assert df['flagged'].sum() == 3
    assert 'Flagged:' in result.output


def test_sweep_fixed_parameter_fills_grid(invoke, tmp_path):
    result = invoke('sweep', 't3-k2b', '--param', 'gamma=1.0', '--steps', 5, '--out-dir', tmp_path)
    assert result.exit_code == 0, result.output
    df = pd.read_csv(tmp_path / 'sweep_t3-k2b.csv')
    assert len(df) == 5 and (df['gamma'] == 1.0).all()


def test_sweep_rejects_empty_grid(invoke, tmp_path):
    result = invoke('sweep', 't3-k2a', '--steps', 1, '--out-dir', tmp_path)
    assert result.exit_code == 2
    assert 'no in-domain points' in result.output
    assert not (tmp_path / 'sweep_t3-k2a.csv').exists()


def test_sweep_k0_seeds(invoke, tmp_path):
    result = invoke('sweep', 't3-k0', '--seeds', 5, '--rng-seed', 7, '--out-dir', tmp_path)
    assert result.exit_code == 0, result.output
    df = pd.read_csv(tmp_path / 'sweep_t3-k0.csv')
    assert len(df) == 5
    converged = df[~df['flagged']]
    assert len(converged) >= 1
    assert (converged['unitarity_residual'] <= 1e-8).all()


def test_examples(invoke, tmp_path, toffoli):
    out = tmp_path / 'toffoli.qgate'
    result = invoke('examples', 'toffoli', '--out', out)
    assert result.exit_code == 0, result.output
    np.testing.assert_array_equal(read_qgate(str(out)).entries, toffoli.entries)


def test_examples_unknown(invoke, tmp_path):
    assert invoke('examples', 'fredkin', '--out', tmp_path / 'f.qgate').exit_code == 2


def test_toffoli_is_local_equivalent_to_ccz(invoke, tmp_path):
    invoke('examples', 'toffoli', '--out', tmp_path / 't.qgate')
    invoke('examples', 'ccz', '--out', tmp_path / 'c.qgate')
    toffoli = read_qgate(str(tmp_path / 't.qgate')).entries
    ccz = read_qgate(str(tmp_path / 'c.qgate')).entries
    H = kron_matrices(I2, I2, HADAMARD)
    assert np.max(np.abs(H @ toffoli @ H - ccz)) < 1e-12


def test_tolerance_override(invoke, catalog_file):
    assert invoke('--tol', 2, 'analyze', catalog_file('ccz')).exit_code == 2
    assert invoke('--tol', 0, 'analyze', catalog_file('ccz')).exit_code == 2
    assert invoke('--tol', 1e-8, 'analyze', catalog_file('ccz')).exit_code == 0


@pytest.mark.parametrize('family_id', list(FamilyId))
def test_generate_analyze_round_trip(family_id, invoke, tmp_path, rng):
    n = 3 if family_id.three_qubit else 5
    params = random_params(family_id, n, rng, margin=0.05)
    out = tmp_path / f'{family_id.value}.qgate'
    args = ['generate', family_id.value, '--n', n, '--out', out]
    for name, value in params.items():
        args += ['--param', f'{name}={value!r}']
    result = invoke(*args)
    assert result.exit_code == 0, result.output
    k = result.output.split('(k=')[1].split(')')[0]

    result = invoke('analyze', out)
    assert result.exit_code == 0, result.output
    assert f'singular_number: {k}' in result.output
