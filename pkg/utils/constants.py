import numpy as np

I2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ1 = np.array([[0, 0], [0, 1]], dtype=complex)

PAULIS = {'x': SIGMA1, 'y': SIGMA2, 'z': SIGMA3}

# CLI exit codes
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_UNITARY = 3
EXIT_DOMAIN = 4
EXIT_INVARIANT = 5

CATALOG_NAMES = ('cnot', 'swap', 'toffoli', 'ccz', 'example1-d', 'wstate-gate')
