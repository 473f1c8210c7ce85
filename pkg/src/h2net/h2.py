"""Lyapunov solves and H2 norms.

The H2 norm of a stable ``(A, B, C)`` is ``sqrt(trace(B^T Q B))`` where the
observability gramian ``Q`` solves ``Q A + A^T Q + C^T C = 0``.

Two Lyapunov back ends are available. ``"schur"`` (the default) reduces ``A``
to real Schur form and back-substitutes (Bartels-Stewart, via
``scipy.linalg.solve_continuous_lyapunov``). ``"kron"`` vectorizes the
equation into an ``n^2 x n^2`` system and hands it to
:func:`h2net.linalg.solve_linear`. Both leave residuals at round-off level,
but only the Schur route stays accurate when ``A`` carries long Jordan chains:
the constructed-coupling networks make the vectorized operator so
ill-conditioned (condition ~1e17 at 40 states) that LU meets a negligible
pivot, and the kron path raises :class:`SingularOperator` instead of
returning a wrong answer.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .coupling import CouplingKind
from .errors import NotFirstOrder, NotHurwitz, SingularMatrix, SingularOperator
from .linalg import as_matrix, is_hurwitz, solve_linear
from .network import NetworkRealization, stable_by_eigenvalue_list

__all__ = [
    "H2Result",
    "lyapunov_solve",
    "lyapunov_residual",
    "h2_norm",
    "node_h2_norm",
    "diffusive_norm_prediction",
    "antisym_first_order_prediction",
    "RESIDUAL_RTOL",
]

log = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-8
SYMMETRY_RTOL = 1e-10


@dataclass(frozen=True)
class H2Result:
    norm: float
    gramian_trace_term: float
    residual: float = 0.0  # relative Lyapunov residual of the gramian used


def lyapunov_residual(q, a, w):
    """``||Q a + a^T Q + w||_F / (||Q||_F ||a||_F + ||w||_F)``."""
    r = q @ a + a.T @ q + w
    denom = np.linalg.norm(q) * np.linalg.norm(a) + np.linalg.norm(w)
    return float(np.linalg.norm(r) / denom) if denom else float(np.linalg.norm(r))


def _solve_kron(a, w):
    n = a.shape[0]
    eye = np.eye(n)
    # column-major vec: vec(Q a) = (a^T kron I) vec Q, vec(a^T Q) = (I kron a^T) vec Q
    op = np.kron(a.T, eye) + np.kron(eye, a.T)
    try:
        q = solve_linear(op, -w.reshape(-1, order="F"))
    except SingularMatrix as exc:
        raise SingularOperator(str(exc)) from exc
    return q.reshape(n, n, order="F")


def lyapunov_solve(a, w, method="schur"):
    """Solve ``Q a + a^T Q + w = 0`` for symmetric ``Q``.

    Parameters
    ----------
    a : (n, n) array_like
        Hurwitz matrix.
    w : (n, n) array_like
        Symmetric positive semidefinite right-hand side.
    method : {"schur", "kron"}
        Back end; see the module docstring.

    Raises
    ------
    NotHurwitz
        If `a` is not Hurwitz (the equation has no meaningful solution for H2 purposes).
    SingularOperator
        If the solve breaks down numerically although `a` passed the Hurwitz test.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    if a.shape[0] != a.shape[1] or w.shape != a.shape:
        raise ValueError(f"shapes {a.shape} and {w.shape} are not a square pair")
    if not is_hurwitz(a):
        raise NotHurwitz("state matrix is not Hurwitz; the H2 norm is not finite")
    if method == "schur":
        q = scipy.linalg.solve_continuous_lyapunov(a.T, -w)
    elif method == "kron":
        q = _solve_kron(a, w)
    else:
        raise ValueError(f"unknown Lyapunov method {method!r}")
    if not np.all(np.isfinite(q)):
        raise SingularOperator("Lyapunov solve produced non-finite entries")
    qnorm = np.linalg.norm(q)
    asym = np.linalg.norm(q - q.T)
    if qnorm and asym > SYMMETRY_RTOL * qnorm:
        log.debug("gramian asymmetry %.3e relative before symmetrization", asym / qnorm)
    return 0.5 * (q + q.T)


def h2_norm(system, method="schur"):
    """H2 norm of a :class:`NetworkRealization` or a bare ``(A, B, C)`` triple."""
    if isinstance(system, NetworkRealization):
        a, b, c = system.abc
    else:
        a, b, c = system
        a, b = as_matrix(a, "A"), as_matrix(b, "B")
        c = as_matrix(np.atleast_2d(np.asarray(c, dtype=float)), "C")
    w = c.T @ c
    q = lyapunov_solve(a, w, method=method)
    trace_term = float(np.trace(b.T @ q @ b))
    # round-off can push an exactly-zero energy slightly negative
    trace_term = max(trace_term, 0.0)
    return H2Result(float(np.sqrt(trace_term)), trace_term, lyapunov_residual(q, a, w))


def node_h2_norm(node, method="schur"):
    """H2 norm of a single node system on its own."""
    return h2_norm((node.a1, node.b1, node.c1), method=method).norm


def diffusive_norm_prediction(node, n):
    """Closed-form H2 norm ``n * gamma2`` of the column/row network with diffusive coupling.

    Raises :class:`NotHurwitz` if any of the diffusive stability modes fails.
    """
    if not stable_by_eigenvalue_list(node, CouplingKind.DIFFUSIVE, n):
        raise NotHurwitz(f"diffusive network with {n} nodes is unstable")
    return node_h2_norm(node) * n


def antisym_first_order_prediction(node, n_nodes):
    """Closed-form ``gamma2 * sqrt(n_nodes)`` for first-order nodes, antisymmetric
    coupling and block-diagonal I/O.
    """
    if node.order != 1:
        raise NotFirstOrder(f"node has order {node.order}, the closed form needs order 1")
    return node_h2_norm(node) * np.sqrt(n_nodes)

