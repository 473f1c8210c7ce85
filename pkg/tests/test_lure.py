import io

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from h2net.coupling import CouplingKind
from h2net.errors import Divergence, GridMismatch, NotHurwitz
from h2net.lure import (
    F1_SLOPE_AT_ORIGIN,
    LureConfig,
    Trajectory,
    error_signal,
    f1,
    format_decimal,
    jacobian_at_origin,
    linearized_output_energy,
    linearized_state_matrix,
    network_matrices,
    output_energy,
    output_error,
    simulate,
    simulate_linearized,
    trajectory_csv,
    write_csv,
)
from h2net.network import NodeSystem, example_node

EX2 = example_node(2)


def test_f1_examples():
    assert f1(0.0) == 0.0
    assert f1(0.5) == 1.0
    assert f1(3.0) == 2.0
    assert f1(-3.0) == -2.0
    np.testing.assert_array_equal(f1(np.array([-1.0, 1.0])), [-2.0, 2.0])


def test_f1_sector_condition():
    rng = np.random.default_rng(13)
    y = rng.uniform(-1e3, 1e3, size=100_000)
    y = y[y != 0]
    ratio = f1(y) / y
    assert ratio.min() >= 0.0 and ratio.max() <= 2.0


@given(st.floats(-1e3, 1e3).filter(lambda v: v != 0))
def test_f1_sector_condition_property(y):
    assert 0.0 <= f1(y) / y <= 2.0
    assert f1(y) == pytest.approx(abs(y + 1) - abs(y - 1), abs=1e-12)


def test_f1_slope_at_origin():
    h = 1e-6
    assert (f1(h) - f1(-h)) / (2 * h) == pytest.approx(F1_SLOPE_AT_ORIGIN, rel=1e-9)


def test_config_defaults_and_validation():
    cfg = LureConfig()
    assert cfg.n_nodes == 16 and cfg.dt == 1e-3 and cfg.t_end == 10.0
    np.testing.assert_array_equal(cfg.b01 @ cfg.c01, cfg.node.a12)
    np.testing.assert_array_equal(cfg.initial_state()[:4], [0, 1, 0, 1])
    with pytest.raises(ValueError):
        LureConfig(dt=2.0, t_end=1.0)
    with pytest.raises(ValueError):
        LureConfig(dt=1e-9, t_end=100.0)
    with pytest.raises(ValueError):
        LureConfig(node=NodeSystem(np.eye(2) * -1, np.eye(2), np.eye(2)))


def test_single_node_initial_output():
    cfg = LureConfig(coupling=[[0.0]], n_nodes=1, t_end=1.0)
    traj = simulate(cfg)
    assert traj.z_values[0] == 2.0
    assert len(traj.times) == 1001


def test_single_node_matches_independent_integrator():
    cfg = LureConfig(coupling=[[0.0]], n_nodes=1, t_end=5.0)
    traj = simulate(cfg)
    a1, b01, c01 = EX2.a1, EX2.b1.ravel(), EX2.c1.ravel()
    a12 = np.outer(b01, c01)

    def rhs(_, x):
        return (a1 - 2 * a12) @ x + b01 * (abs(c01 @ x + 1) - abs(c01 @ x - 1))

    sol = scipy.integrate.solve_ivp(
        rhs, (0, 5), b01, method="DOP853", rtol=1e-11, atol=1e-13, t_eval=traj.times[::250]
    )
    np.testing.assert_allclose(traj.z_values[::250], c01 @ sol.y, rtol=0, atol=1e-7)


def test_zero_initial_condition_stays_at_origin():
    traj = simulate(LureConfig(ic_scale=0.0, t_end=10.0))
    assert np.max(np.abs(traj.z_values)) <= 1e-12


def test_step_halving_n16_diffusive():
    coarse = simulate(LureConfig(dt=1e-3, t_end=10.0))
    fine = simulate(LureConfig(dt=5e-4, t_end=10.0))
    m1, m2 = np.max(np.abs(coarse.z_values)), np.max(np.abs(fine.z_values))
    assert abs(m1 - m2) <= 1e-6 * m2
    # same time points agree as well
    np.testing.assert_allclose(coarse.z_values, fine.z_values[::2], rtol=0, atol=1e-6 * m2)


def test_x_snapshots_stride():
    traj = simulate(LureConfig(n_nodes=2, t_end=0.01, x_stride=5))
    assert traj.x_snapshots.shape == (3, 4)
    np.testing.assert_array_equal(traj.x_snapshots[0], [0, 1, 0, 1])


def _traj(z, dt=0.1):
    z = np.asarray(z, dtype=float)
    return Trajectory(np.arange(len(z)) * dt, z)


def test_output_error_basics():
    a = _traj([1.0, 2.0, 3.0])
    assert output_error(a, a) == 0.0
    b = _traj([1.0, 1.0, 1.0])
    assert output_error(a, b) == pytest.approx(np.sqrt((0 + 1 + 4) * 0.1))
    np.testing.assert_array_equal(error_signal(a, b), [0, 1, 2])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30), st.floats(0.1, 10))
def test_output_error_homogeneity(values, scale):
    z = np.asarray(values)
    a, b = _traj(z), _traj(z[::-1])
    scaled = output_error(_traj(scale * z), _traj(scale * z[::-1]))
    assert scaled == pytest.approx(scale * output_error(a, b), rel=1e-9, abs=1e-12)


def test_output_error_grid_mismatch():
    with pytest.raises(GridMismatch):
        output_error(_traj([1, 2, 3]), _traj([1, 2]))
    with pytest.raises(GridMismatch):
        output_error(_traj([1, 2, 3], 0.1), _traj([1, 2, 3], 0.2))


def test_constructed_coupling_diverges_more_than_diffusive():
    errs = {}
    for kind in (CouplingKind.CONSTRUCTED, CouplingKind.DIFFUSIVE):
        a = simulate(LureConfig(coupling=kind, n_nodes=16, ic_scale=1.0))
        b = simulate(LureConfig(coupling=kind, n_nodes=16, ic_scale=0.95))
        errs[kind] = output_error(a, b)
    assert errs[CouplingKind.CONSTRUCTED] > errs[CouplingKind.DIFFUSIVE]


def test_jacobian_equals_linearized_matrix():
    for kind in CouplingKind:
        if kind is CouplingKind.CUSTOM:
            continue
        cfg = LureConfig(coupling=kind, n_nodes=5)
        np.testing.assert_allclose(jacobian_at_origin(cfg), linearized_state_matrix(cfg), atol=1e-14)


def test_jacobian_by_finite_differences():
    cfg = LureConfig(coupling=CouplingKind.CONSTRUCTED, n_nodes=3, dt=1e-3, t_end=1e-3)
    # central differences of the nonlinear vector field at the origin
    drift, b, c_meas, _ = network_matrices(cfg)
    h = 1e-7
    dim = drift.shape[0]
    jac = np.empty((dim, dim))
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = h
        fp = drift @ e + b @ f1(c_meas @ e)
        fm = -drift @ e + b @ f1(-c_meas @ e)
        jac[:, k] = (fp - fm) / (2 * h)
    np.testing.assert_allclose(jac, linearized_state_matrix(cfg), atol=1e-6)


def test_linearized_energy_examples():
    single = LureConfig(coupling=[[0.0]], n_nodes=1)
    assert linearized_output_energy(single) == pytest.approx(1.0, rel=1e-12)
    assert linearized_output_energy(LureConfig(ic_scale=0.0)) == 0.0
    con = linearized_output_energy(LureConfig(coupling=CouplingKind.CONSTRUCTED))
    dif = linearized_output_energy(LureConfig(coupling=CouplingKind.DIFFUSIVE))
    assert con > 1e5 * dif
    assert dif == pytest.approx(16.0, rel=1e-9)
    assert con == pytest.approx(39120825.6601270, rel=1e-6)


def test_linearized_energy_unstable():
    node = NodeSystem([[0.5]], [[1.0]], [[1.0]])
    with pytest.raises(NotHurwitz):
        linearized_output_energy(LureConfig(node=node, coupling=[[0.0]], n_nodes=1))


@pytest.mark.parametrize("n", [2, 4, 8])
def test_time_domain_energy_matches_h2(n):
    cfg = LureConfig(coupling=CouplingKind.DIFFUSIVE, n_nodes=n, dt=1e-2, t_end=40.0)
    energy = output_energy(simulate_linearized(cfg))
    target = linearized_output_energy(cfg) ** 2
    assert energy == pytest.approx(target, rel=1e-2)


def _linear_rk4_error(dt, t_end=5.0):
    cfg = LureConfig(coupling=CouplingKind.DIFFUSIVE, n_nodes=2, dt=dt, t_end=t_end)
    traj = simulate_linearized(cfg)
    a = linearized_state_matrix(cfg)
    c = np.kron(np.ones(2), cfg.c01.ravel())
    x0 = cfg.initial_state()
    grid = np.linspace(0.0, t_end, 11)
    exact = np.array([c @ scipy.linalg.expm(a * t) @ x0 for t in grid])
    idx = np.rint(grid / dt).astype(int)
    return np.max(np.abs(traj.z_values[idx] - exact))


def test_rk4_fourth_order():
    e1, e2, e3 = (_linear_rk4_error(dt) for dt in (0.1, 0.05, 0.025))
    assert 12 <= e1 / e2 <= 20
    assert 12 <= e2 / e3 <= 20


def test_divergence_detected():
    node = NodeSystem([[5.0]], [[1.0]], [[0.1]])
    with pytest.raises(Divergence):
        simulate(LureConfig(node=node, coupling=[[0.0]], n_nodes=1, dt=0.01, t_end=10.0))


def test_format_decimal():
    assert format_decimal(1.0) == "1"
    assert format_decimal(0.1, 12) == "0.1"
    assert format_decimal(1 / 3, 12) == "0.333333333333"
    assert format_decimal(4201690072.61073, 6) == "4201690000"
    assert "e" not in format_decimal(1e-9, 12)


def test_csv_layout():
    traj = _traj([2.0, 1.5, 1.25], dt=0.5)
    assert trajectory_csv(traj) == "t,z\n0,2\n0.5,1.5\n1,1.25\n"
    assert trajectory_csv(traj, stride=2) == "t,z\n0,2\n1,1.25\n"
    buf = io.StringIO()
    write_csv(buf, [[0.0, 1.0], [1.0, 2.0], [0.5, 0.25]], ["t", "a", "b"])
    assert buf.getvalue().splitlines() == ["t,a,b", "0,1,0.5", "1,2,0.25"]
