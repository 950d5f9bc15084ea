"""
Parameter sweeps over a family: every grid point (or k=0 solver seed) is
generated, checked for unitarity and classified, independently of the
others, and the rows are merged into one table.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

from config import Config
from utils.errors import ParamDomainError, QgateError, SolverDivergedError
from utils.families import FamilyId, FamilySpec, K0SystemPoint, generate, k0_solve
from utils.schmidt import classify
from utils.utils import func_timer

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['unitarity_residual', 'sn', 'genuine']
EXTRA_COLUMNS = ['declared_k', 'in_domain', 'flagged', 'reason']


def _param_columns(params: dict) -> dict:
    columns = {}
    for name, value in params.items():
        if isinstance(value, complex):
            columns[f'{name}_re'] = value.real
            columns[f'{name}_im'] = value.imag
        else:
            columns[name] = float(value)
    return columns


def evaluate_point(family_id: FamilyId, n: int, params: dict) -> dict:
    row = _param_columns(params)
    row.update(unitarity_residual=np.nan, sn=np.nan, genuine=False,
               declared_k=np.nan, in_domain=True, flagged=False, reason='')
    reasons = []

    try:
        try:
            gate = generate(FamilySpec(family_id, n, params))
        except ParamDomainError as e:
            row['in_domain'] = False
            reasons.append(f'out of domain ({e})')
            gate = generate(FamilySpec(family_id, n, params), check_domain=False)
        U = gate.operator
        row['unitarity_residual'] = U.unitarity_residual()
        if gate.k is not None:
            row['declared_k'] = gate.k
        if not np.isfinite(row['unitarity_residual']):
            reasons.append('non-finite entries')
        elif not U.is_unitary(Config.UNITARY_TOL):
            reasons.append('not unitary')
        else:
            label = classify(U)
            row['genuine'] = label.genuine
            if label.singular_number is not None:
                row['sn'] = label.singular_number
            if not label.genuine:
                reasons.append('not genuine')
            elif gate.k is not None and label.singular_number != gate.k:
                reasons.append(f'sn {label.singular_number} != declared {gate.k}')
    except (QgateError, np.linalg.LinAlgError, ValueError) as e:
        reasons.append(f'{type(e).__name__}: {e}')

    row['flagged'] = bool(reasons)
    row['reason'] = '; '.join(reasons)
    return row


def evaluate_k0_seed(seed: K0SystemPoint) -> dict:
    try:
        point = k0_solve(seed)
    except SolverDivergedError as e:
        row = _param_columns(seed.as_params())
        row.update(unitarity_residual=np.nan, sn=np.nan, genuine=False, declared_k=0,
                   in_domain=False, flagged=True, reason=f'diverged ({e})')
        return row
    return evaluate_point(FamilyId.T3_K0, 3, point.as_params())


def _evaluate_task(task: tuple) -> dict:
    kind, payload = task
    if kind == 'seed':
        return evaluate_k0_seed(payload)
    family_id, n, params = payload
    return evaluate_point(family_id, n, params)


@func_timer
def run_sweep(tasks: list, workers: int = 1) -> pd.DataFrame:
    """
    Evaluate ('point', (family_id, n, params)) and ('seed', K0SystemPoint)
    tasks, in a process pool when workers > 1.
    """
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = []
        for i, task in enumerate(tasks, 1):
            rows.append(_evaluate_task(task))
            if i % 100 == 0:
                logger.info("[%5.1f%%] %d/%d points", 100 * i / len(tasks), i, len(tasks))

    if not rows:
        return pd.DataFrame(columns=RESULT_COLUMNS + EXTRA_COLUMNS)
    df = pd.DataFrame(rows)
    params = [c for c in df.columns if c not in RESULT_COLUMNS + EXTRA_COLUMNS]
    return df[params + RESULT_COLUMNS + EXTRA_COLUMNS]


def point_tasks(family_id: FamilyId, n: int, points: list) -> list:
    return [('point', (family_id, n, params)) for params in points]


def seed_tasks(seeds: list) -> list:
    return [('seed', seed) for seed in seeds]


def breaches(df: pd.DataFrame) -> pd.DataFrame:
    """Flagged rows whose unitarity residual exceeds the sweep limit"""
    return df[df['flagged'] & (df['unitarity_residual'] > Config.SWEEP_FLAG_RESIDUAL)]


def write_sweep(df: pd.DataFrame, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    df.to_csv(path, index=False, float_format=Config.CSV_FLOAT_FORMAT)
    return path
