import json
import os


class Config:
    # Directory structure
    DATA_DIR = 'data'
    CATALOG_DIR = f'{DATA_DIR}/catalog'
    GATES_DIR = f'{DATA_DIR}/gates'
    SWEEP_DIR = f'{DATA_DIR}/sweeps'

    # Runtime overrides
    CONFIG_FILE = 'config.json'
    TOL_ENV_VAR = 'QGATE_TOL'

    # Numeric rank / diagonality threshold (relative to the largest singular value)
    DEFAULT_TOL = 1e-9

    # Family generators: ||U^dag U - I||_F <= UNITARY_TOL * sqrt(dim)
    UNITARY_TOL = 1e-10

    # Span search and factorization
    ROOT_MATCH_TOL = 1e-6
    FACTOR_RESIDUAL_TOL = 1e-8

    # Families
    PHASE_EQ_TOL = 1e-10
    K1_MODULUS_TOL = 1e-10
    K0_RESIDUAL_TOL = 1e-8
    K0_MAX_ITER = 200
    GRID_MARGIN = 1e-3

    # Three-qubit diagonal classifier
    W_CONDITION_TOL = 1e-10
    HYPERDET_TOL = 1e-8

    # Sweeps
    SWEEP_FLAG_RESIDUAL = 1e-8
    DEFAULT_SWEEP_STEPS = 10
    DEFAULT_K0_SEEDS = 100
    DEFAULT_K0_SPREAD = 0.05
    CSV_FLOAT_FORMAT = '%.17g'

    @classmethod
    def get_gate_file(cls, name: str) -> str:
        """Returns the default output path for a generated gate"""
        return f'{cls.GATES_DIR}/{name}.qgate'

    @classmethod
    def get_catalog_file(cls, name: str) -> str:
        """Returns the path of a shipped example gate"""
        return f"{cls.CATALOG_DIR}/{name.replace('-', '_')}.qgate"

    @classmethod
    def get_sweep_file(cls, family: str, out_dir: str = None) -> str:
        """Returns the CSV path a sweep over `family` writes to"""
        return f'{out_dir or cls.SWEEP_DIR}/sweep_{family}.csv'

    @classmethod
    def load_config(cls, config_file: str = None) -> dict:
        """
        Load runtime defaults, merging config.json and the QGATE_TOL environment
        variable over the class constants.

        Args:
            config_file: Optional path overriding CONFIG_FILE

        Returns:
            Dict with keys tol, sweep_steps, k0_seeds, k0_spread, workers, grids
        """
        config_file = config_file or cls.CONFIG_FILE
        config = {
            'tol': cls.DEFAULT_TOL,
            'sweep_steps': cls.DEFAULT_SWEEP_STEPS,
            'k0_seeds': cls.DEFAULT_K0_SEEDS,
            'k0_spread': cls.DEFAULT_K0_SPREAD,
            'workers': 1,
            'grids': {},
        }

        if os.path.exists(config_file):
            try:
                with open(config_file, 'r') as f:
                    config.update(json.load(f))
            except Exception as e:
                print(f"Warning: Could not load {config_file}: {e}")

        env_tol = os.getenv(cls.TOL_ENV_VAR)
        if env_tol:
            try:
                config['tol'] = float(env_tol)
            except ValueError:
                print(f"Warning: ignoring {cls.TOL_ENV_VAR}={env_tol!r}")

        return config
