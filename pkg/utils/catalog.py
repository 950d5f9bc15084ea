"""Built-in example gates"""
import numpy as np

from utils.constants import CATALOG_NAMES, I2, PROJ0, PROJ1, SIGMA1, SIGMA3
from utils.errors import QgateParseError
from utils.tensor import MultipartiteOperator, kron_matrices


def cnot() -> MultipartiteOperator:
    return MultipartiteOperator((2, 2), np.kron(PROJ0, I2) + np.kron(PROJ1, SIGMA1))


def swap() -> MultipartiteOperator:
    entries = np.eye(4)[[0, 2, 1, 3]]
    return MultipartiteOperator((2, 2), entries)


def toffoli() -> MultipartiteOperator:
    entries = np.eye(8)
    entries[[6, 7]] = entries[[7, 6]]
    return MultipartiteOperator((2, 2, 2), entries)


def ccz() -> MultipartiteOperator:
    return MultipartiteOperator((2, 2, 2), np.diag([1, 1, 1, 1, 1, 1, 1, -1]))


def example1_d() -> MultipartiteOperator:
    return MultipartiteOperator((2, 2, 2), np.diag([-1, 1, 1, 1, 1, 1, 1, -1]))


def example1_d_terms() -> tuple:
    """The two product terms whose sum is example1_d, as per-party matrices"""
    phase = np.diag([1, -1j])
    termA = [phase, phase, (1j * I2 - SIGMA3) / 2]
    termB = [phase.conj(), phase.conj(), (-1j * I2 - SIGMA3) / 2]
    return termA, termB


def wstate_gate(theta: float = np.pi / 4) -> MultipartiteOperator:
    """|0><0| (x) (cos t I(x)I + i sin t Z(x)Z) + |1><1| (x) I(x)Z"""
    zz = np.kron(SIGMA3, SIGMA3)
    slice0 = np.cos(theta) * np.eye(4) + 1j * np.sin(theta) * zz
    slice1 = np.kron(I2, SIGMA3)
    return MultipartiteOperator((2, 2, 2), np.kron(PROJ0, slice0) + np.kron(PROJ1, slice1))


def cnot_tensor_i() -> MultipartiteOperator:
    return MultipartiteOperator((2, 2, 2), kron_matrices(cnot().entries, I2))


CATALOG = {
    'cnot': cnot,
    'swap': swap,
    'toffoli': toffoli,
    'ccz': ccz,
    'example1-d': example1_d,
    'wstate-gate': wstate_gate,
}

assert tuple(CATALOG) == CATALOG_NAMES


def get_example(name: str) -> MultipartiteOperator:
    if name not in CATALOG:
        raise QgateParseError(f"unknown example {name!r}; choose from {', '.join(CATALOG)}")
    return CATALOG[name]()
