import numpy as np
import pandas as pd
import pytest

from config import Config
from utils.families import FamilyId, K0SystemPoint, default_grid, expand_grid, k0_seed_points
from utils.sweep import (
    EXTRA_COLUMNS,
    RESULT_COLUMNS,
    breaches,
    evaluate_k0_seed,
    evaluate_point,
    point_tasks,
    run_sweep,
    seed_tasks,
    write_sweep,
)


def test_evaluate_in_domain_point():
    row = evaluate_point(FamilyId.T3_K2_A, 3, {'theta': 1.0, 'phi': 2.5})
    assert not row['flagged'] and row['in_domain'] and row['genuine']
    assert row['sn'] == 2 and row['declared_k'] == 2
    assert row['unitarity_residual'] < 1e-12
    assert row['reason'] == ''


def test_evaluate_excluded_point_is_flagged():
    row = evaluate_point(FamilyId.N_KNM1, 4, {'theta': 2.0, 'phi': 2.0})
    assert row['flagged'] and not row['in_domain'] and not row['genuine']
    assert 'out of domain' in row['reason'] and 'not genuine' in row['reason']
    assert row['unitarity_residual'] < 1e-12


def test_evaluate_complex_parameters():
    row = evaluate_point(FamilyId.T3_K0, 3, {'a': (1 - 1j) / 2, 'b': (1 + 1j) / 2, 'c': -1j, 'd': -1j})
    assert row['a_re'] == 0.5 and row['a_im'] == -0.5
    assert not row['flagged'] and row['sn'] == 0


def test_evaluate_diverged_seed():
    seed = K0SystemPoint(5 + 5j, -4 + 0.5j, 3 - 2j, 0.1 + 6j)
    row = evaluate_k0_seed(seed)
    assert set(RESULT_COLUMNS + EXTRA_COLUMNS) <= set(row)
    if row['flagged']:
        assert row['reason']


def test_run_sweep_columns():
    points = expand_grid({'theta': (0.5, 2.5, 3), 'phi': (0.5, 2.5, 3)})
    df = run_sweep(point_tasks(FamilyId.N_KNM1, 4, points))
    assert list(df.columns) == ['theta', 'phi'] + RESULT_COLUMNS + EXTRA_COLUMNS
    assert len(df) == 9

    on_line = df['theta'] == df['phi']
    assert df.loc[on_line, 'flagged'].all()
    assert not df.loc[on_line, 'genuine'].any()
    assert (df.loc[~on_line, 'sn'] == 3).all()
    assert breaches(df).empty


def test_run_sweep_in_process_pool():
    points = default_grid(FamilyId.T3_K3, 3, 6)
    serial = run_sweep(point_tasks(FamilyId.T3_K3, 3, points))
    parallel = run_sweep(point_tasks(FamilyId.T3_K3, 3, points), workers=2)
    pd.testing.assert_frame_equal(serial, parallel)
    assert (parallel['sn'] == 3).all()


def test_k0_seed_sweep(rng):
    df = run_sweep(seed_tasks(k0_seed_points(10, Config.DEFAULT_K0_SPREAD, rng)))
    assert {'a_re', 'a_im', 'd_re', 'd_im'} <= set(df.columns)
    converged = df[~df['flagged']]
    assert len(converged) >= 1
    assert (converged['unitarity_residual'] <= Config.SWEEP_FLAG_RESIDUAL).all()
    assert (converged['sn'] == 0).all()


def test_breaches():
    df = pd.DataFrame({
        'unitarity_residual': [1e-14, 1e-6, 1e-6, np.nan],
        'flagged': [True, True, False, True],
    })
    assert list(breaches(df).index) == [1]


def test_write_sweep(tmp_path):
    points = default_grid(FamilyId.T3_K2_B, 3, 3)
    df = run_sweep(point_tasks(FamilyId.T3_K2_B, 3, points))
    path = write_sweep(df, str(tmp_path / 'out' / 'sweep.csv'))
    loaded = pd.read_csv(path)
    assert list(loaded.columns) == list(df.columns)
    np.testing.assert_array_equal(loaded['gamma'].to_numpy(), df['gamma'].to_numpy())


@pytest.mark.parametrize('family_id', [FamilyId.T3_K2_A, FamilyId.N_K1, FamilyId.L5_EQ8])
def test_default_grids_are_clean(family_id):
    n = 3 if family_id.three_qubit else 4
    df = run_sweep(point_tasks(family_id, n, default_grid(family_id, n, 5)))
    assert not df['flagged'].any()


def test_run_sweep_without_tasks():
    df = run_sweep([])
    assert df.empty
    assert list(df.columns) == RESULT_COLUMNS + EXTRA_COLUMNS
    assert breaches(df).empty


def test_single_step_grid_sits_at_the_centre():
    assert default_grid(FamilyId.T3_K3, 3, 1) == [{'phi': np.pi}]
    # theta = phi = pi lies on the excluded diagonal
    assert default_grid(FamilyId.T3_K2_A, 3, 1) == []
