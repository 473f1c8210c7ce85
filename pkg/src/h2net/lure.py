"""Lur'e networks: identical nodes with the Chua-type saturation in feedback.

Each node runs ``x' = (A1 - 2 A12) x + B01 f1(C01 x)`` with
``f1(y) = |y + 1| - |y - 1|`` and ``A12 = B01 C01``; nodes are coupled
through ``kron(G, A12)``. The regulated output is the summed node output
``z = (1^T kron C01) x``. Around the origin ``f1`` has slope 2, which cancels
the ``-2 A12`` drift, so the linearization is the plain coupled network
``kron(I, A1) + kron(G, A12)``.
"""
import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .coupling import CouplingKind, coupling_matrix
from .errors import Divergence, GridMismatch
from .h2 import h2_norm
from .network import example_node

__all__ = [
    "LureConfig",
    "Trajectory",
    "f1",
    "F1_SLOPE_AT_ORIGIN",
    "network_matrices",
    "jacobian_at_origin",
    "linearized_state_matrix",
    "simulate",
    "simulate_linearized",
    "output_error",
    "error_signal",
    "output_energy",
    "linearized_output_energy",
    "format_decimal",
    "write_csv",
    "trajectory_csv",
]

F1_SLOPE_AT_ORIGIN = 2.0
DIVERGENCE_BOUND = 1e12


def f1(y):
    """Piecewise-linear saturation ``|y + 1| - |y - 1|`` (works elementwise).

    Evaluated as ``clip(2 y, -2, 2)``, which is the same function without the
    cancellation the two absolute values suffer near zero.
    """
    return np.clip(2.0 * np.asarray(y, dtype=float), -2.0, 2.0)


@dataclass(frozen=True, eq=False)
class LureConfig:
    """Simulation setup.

    The node's ``b1``/``c1`` play the roles of ``B01``/``C01``; the node initial
    state is ``B01`` and the network starts from ``ic_scale * kron(1, B01)``.
    `coupling` is a :class:`CouplingKind` or an explicit square matrix.
    """

    node: object = field(default_factory=lambda: example_node(2))
    coupling: object = CouplingKind.DIFFUSIVE
    n_nodes: int = 16
    ic_scale: float = 1.0
    dt: float = 1e-3
    t_end: float = 10.0
    x_stride: int = 0  # keep every x_stride-th full state; 0 keeps none

    def __post_init__(self):
        if self.node.n_inputs != 1 or self.node.n_outputs != 1:
            raise ValueError("Lur'e nodes must be single-input single-output")
        if not (self.dt > 0 and self.t_end > 0 and self.dt <= self.t_end):
            raise ValueError("need 0 < dt <= t_end")
        if self.t_end / self.dt > 1e7:
            raise ValueError("more than 1e7 integration steps requested")
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be positive")

    @property
    def b01(self):
        return self.node.b1

    @property
    def c01(self):
        return self.node.c1

    @property
    def gamma(self):
        if isinstance(self.coupling, (CouplingKind, str)):
            return coupling_matrix(self.coupling, self.n_nodes)
        return coupling_matrix(CouplingKind.CUSTOM, self.n_nodes, custom=self.coupling)

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))

    def initial_state(self):
        return self.ic_scale * np.kron(np.ones(self.n_nodes), self.b01.ravel())


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    z_values: np.ndarray
    x_snapshots: np.ndarray = None
    x_stride: int = 0

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def network_matrices(cfg):
    """Nonlinear-network drift, input, measured-output and regulated-output matrices."""
    node, gamma = cfg.node, cfg.gamma
    n = gamma.shape[0]
    eye = np.eye(n)
    drift = np.kron(eye, node.a1 - F1_SLOPE_AT_ORIGIN * node.a12) + np.kron(gamma, node.a12)
    b = np.kron(eye, cfg.b01)
    c_meas = np.kron(eye, cfg.c01)
    c_reg = np.kron(np.ones((1, n)), cfg.c01)
    return drift, b, c_meas, c_reg


def jacobian_at_origin(cfg):
    drift, b, c_meas, _ = network_matrices(cfg)
    return drift + b @ (F1_SLOPE_AT_ORIGIN * np.eye(c_meas.shape[0])) @ c_meas


def linearized_state_matrix(cfg):
    """``kron(I, A1) + kron(G, A12)``."""
    node, gamma = cfg.node, cfg.gamma
    return np.kron(np.eye(gamma.shape[0]), node.a1) + np.kron(gamma, node.a12)


def _rk4(rhs, x0, dt, n_steps, c_reg, x_stride):
    x = np.array(x0, dtype=float)
    z = np.empty(n_steps + 1)
    z[0] = c_reg @ x
    snaps = [x.copy()] if x_stride else None
    half = 0.5 * dt
    for k in range(1, n_steps + 1):
        k1 = rhs(x)
        k2 = rhs(x + half * k1)
        k3 = rhs(x + half * k2)
        k4 = rhs(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.abs(x) <= DIVERGENCE_BOUND):
            raise Divergence(f"|x| exceeded {DIVERGENCE_BOUND:g} at t = {k * dt:g}")
        z[k] = c_reg @ x
        if x_stride and k % x_stride == 0:
            snaps.append(x.copy())
    times = np.arange(n_steps + 1) * dt
    return Trajectory(times, z, None if snaps is None else np.array(snaps), x_stride)


def simulate(cfg):
    """Fixed-step RK4 integration of the Lur'e network; z is sampled every step."""
    drift, b, c_meas, c_reg = network_matrices(cfg)
    c_reg = c_reg.ravel()

    def rhs(x):
        return drift @ x + b @ f1(c_meas @ x)

    return _rk4(rhs, cfg.initial_state(), cfg.dt, cfg.n_steps, c_reg, cfg.x_stride)


def simulate_linearized(cfg):
    """RK4 integration of ``x' = (kron(I, A1) + kron(G, A12)) x`` from the same initial state."""
    a = linearized_state_matrix(cfg)
    c_reg = np.kron(np.ones(cfg.n_nodes), cfg.c01.ravel())
    return _rk4(lambda x: a @ x, cfg.initial_state(), cfg.dt, cfg.n_steps, c_reg, cfg.x_stride)


def _check_grid(a, b):
    if a.times.shape != b.times.shape or not np.allclose(a.times, b.times, rtol=0, atol=1e-12):
        raise GridMismatch("trajectories are sampled on different time grids")


def error_signal(a, b):
    """Pointwise ``z_a - z_b``."""
    _check_grid(a, b)
    return a.z_values - b.z_values


def output_error(a, b):
    """Discrete L2 norm ``sqrt(sum((z_a - z_b)^2) * dt)``."""
    e = error_signal(a, b)
    return float(np.sqrt(np.sum(e * e) * a.dt))


def output_energy(traj):
    """Trapezoidal ``integral of z^2 dt`` over the trajectory horizon."""
    return float(trapezoid(traj.z_values ** 2, dx=traj.dt))


def linearized_output_energy(cfg):
    """H2 norm of the linearized network driven by its initial state as an impulse.

    Equals the output energy (square root of the integrated ``z^2``) of the
    free response of the linearized network.
    """
    a = linearized_state_matrix(cfg)
    b = cfg.initial_state().reshape(-1, 1)
    c = np.kron(np.ones((1, cfg.n_nodes)), cfg.c01)
    return h2_norm((a, b, c)).norm


def format_decimal(value, digits=12):
    """Positional notation with `digits` significant digits."""
    return np.format_float_positional(
        float(value), precision=digits, unique=False, fractional=False, trim="-"
    )


def write_csv(stream, columns, header, stride=1, digits=12):
    """Write equally long columns as CSV rows (every `stride`-th row)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    n = len(columns[0])
    for i in range(0, n, stride):
        writer.writerow([format_decimal(col[i], digits) for col in columns])


def trajectory_csv(traj, stride=1):
    buf = io.StringIO()
    write_csv(buf, [traj.times, traj.z_values], ["t", "z"], stride=stride)
    return buf.getvalue()
