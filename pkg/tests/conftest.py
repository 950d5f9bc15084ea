import numpy as np
import pytest
from scipy.stats import unitary_group

from config import Config
from utils import catalog
from utils.families import FamilyId, FamilySpec, generate
from utils.qgate import read_qgate
from utils.tensor import MultipartiteOperator, kron_matrices


@pytest.fixture
def rng():
    yield np.random.default_rng(20240607)


@pytest.fixture
def ccz():
    yield catalog.ccz()


@pytest.fixture
def toffoli():
    yield catalog.toffoli()


@pytest.fixture
def example1_d():
    yield catalog.example1_d()


@pytest.fixture
def wstate_gate():
    yield catalog.wstate_gate()


@pytest.fixture
def catalog_file():
    """Path of a shipped example: catalog_file('ccz')"""
    def _catalog_file(name):
        return Config.get_catalog_file(name)
    return _catalog_file


@pytest.fixture
def catalog_gate(catalog_file):
    def _catalog_gate(name):
        return read_qgate(catalog_file(name))
    return _catalog_gate


@pytest.fixture
def random_local_unitaries(rng):
    """
    Factory returning a list of Haar random local unitaries.

    Usage: us = random_local_unitaries(3)           # three qubits
           us = random_local_unitaries(dims=(2, 3))  # mixed dims
    """
    def _random_local_unitaries(n=None, dims=None):
        dims = dims or (2,) * n
        return [unitary_group.rvs(d, random_state=rng) for d in dims]
    return _random_local_unitaries


@pytest.fixture
def conjugate(random_local_unitaries):
    """Factory returning (V U W, left factors, right factors) for random product V, W"""
    def _conjugate(U):
        left = random_local_unitaries(dims=U.dims)
        right = random_local_unitaries(dims=U.dims)
        entries = kron_matrices(*left) @ U.entries @ kron_matrices(*right)
        return MultipartiteOperator(U.dims, entries, U.tol), left, right
    return _conjugate


@pytest.fixture
def family_gate():
    """
    Factory building a family member with its declared decomposition.

    Usage: gate = family_gate('t3-k2a', theta=1.0, phi=2.0)
           gate = family_gate('n-k0', n=5, alpha=1.0, beta=0.5)
    """
    def _family_gate(family, n=None, permute=None, **params):
        family_id = FamilyId.from_cli(family)
        n = n or (3 if family_id.three_qubit else 4)
        return generate(FamilySpec(family_id, n, params, permute))
    return _family_gate
