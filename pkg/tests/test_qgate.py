import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils import catalog
from utils.constants import CATALOG_NAMES
from utils.errors import DimensionError, QgateParseError
from utils.qgate import format_qgate, parse_qgate, read_qgate, write_qgate
from utils.tensor import MultipartiteOperator

CNOT_TEXT = """
# controlled not
qgate 1
dims:   2  2
kind: dense
1,0 0,0 0,0 0,0
0,0 1,0 0,0 0,0   # second row
0,0 0,0 0,0 1 , 0
0,0 0,0 1,0 0,0
"""


def test_parse_dense():
    U = parse_qgate(CNOT_TEXT)
    assert U.dims == (2, 2)
    assert_allclose(U.entries, catalog.cnot().entries)


def test_parse_diagonal():
    U = parse_qgate("qgate 1\ndims: 2 2\nkind: diagonal\n1,0 0,1 -1,0 0,-1\n")
    assert_allclose(np.diag(U.entries), [1, 1j, -1, -1j])
    assert U.is_diagonal()


@pytest.mark.parametrize('text', [
    "qgate 2\ndims: 2\nkind: dense\n1,0 0,0\n0,0 1,0",
    "qgate 1\ndims: two\nkind: dense\n1,0 0,0\n0,0 1,0",
    "qgate 1\ndims: 1\nkind: dense\n1,0",
    "qgate 1\ndims: 2\nkind: sparse\n1,0 0,0\n0,0 1,0",
    "qgate 1\ndims: 2\nkind: dense\n1,0 0,0\n0,0",
    "qgate 1\ndims: 2\nkind: diagonal\n1,0 1,0 1,0",
    "qgate 1\ndims: 2\nkind: diagonal\n1 1",
    "qgate 1\ndims: 2\nkind: diagonal\n1,x 1,0",
    "qgate 1\nkind: diagonal\ndims: 2\n1,0 1,0",
    "qgate 1\ndims: 2",
])
def test_parse_errors(text):
    with pytest.raises(QgateParseError):
        parse_qgate(text)


def test_read_missing_file(tmp_path):
    with pytest.raises(QgateParseError):
        read_qgate(str(tmp_path / 'missing.qgate'))


def test_format_picks_kind():
    assert 'kind: diagonal' in format_qgate(catalog.ccz())
    assert 'kind: dense' in format_qgate(catalog.toffoli())
    assert format_qgate(catalog.ccz(), 'ccz\nexample').startswith('# ccz\n# example\nqgate 1\n')


def test_write_then_read_keeps_every_bit(tmp_path, rng):
    entries = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 8)))
    U = MultipartiteOperator((2, 2, 2), entries)
    path = write_qgate(U, str(tmp_path / 'nested' / 'gate.qgate'), 'random phases')
    assert np.array_equal(read_qgate(path).entries, U.entries)


def test_tiny_off_diagonal_entries_keep_the_dense_kind(tmp_path):
    rotation = np.array([[np.cos(5e-10), -np.sin(5e-10)], [np.sin(5e-10), np.cos(5e-10)]])
    U = MultipartiteOperator((2, 2), np.kron(np.diag([1, 0]), np.eye(2)) + np.kron(np.diag([0, 1]), rotation))
    assert 'kind: dense' in format_qgate(U)
    path = write_qgate(U, str(tmp_path / 'crot.qgate'))
    assert np.array_equal(read_qgate(path).entries, U.entries)


@pytest.mark.parametrize('name', ['ccz', 'example1-d', 'toffoli', 'wstate-gate'])
def test_shipped_catalog_files_match_builders(name, catalog_gate):
    assert_allclose(catalog_gate(name).entries, catalog.get_example(name).entries, atol=1e-15)


def test_shipped_cnot_tensor_i(catalog_gate):
    assert_allclose(catalog_gate('cnot-tensor-i').entries, catalog.cnot_tensor_i().entries)


def test_catalog_names():
    assert tuple(catalog.CATALOG) == CATALOG_NAMES
    for name in CATALOG_NAMES:
        assert catalog.get_example(name).is_unitary()
    with pytest.raises(QgateParseError):
        catalog.get_example('fredkin')


def test_operator_tolerance_from_reader():
    with pytest.raises(DimensionError):
        parse_qgate("qgate 1\ndims: 2\nkind: diagonal\n1,0 1,0", tol=1.5)
