"""Coupled-network realizations built from a single node system.

A network of N identical nodes ``(A1, B1, C1)`` with inner coupling
``A12 = B1 @ C1`` and outer coupling ``G`` has state matrix
``kron(I_N, A1) + kron(G, A12)``. Two I/O shapes are supported: a common
input with summed output (``COLUMN_ROW``) and per-node channels
(``BLOCK_DIAGONAL``).
"""
import enum
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingKind, build_constructed, coupling_spectrum
from .errors import DimensionMismatch
from .linalg import as_matrix, is_hurwitz, realify

__all__ = [
    "NodeSystem",
    "IoShape",
    "NetworkRealization",
    "example_node",
    "assemble",
    "stable_by_coupling_spectrum",
    "stability_eigenvalue_list",
    "stable_by_eigenvalue_list",
    "jordan_like_block",
    "reduction_b_coefficients",
    "reduction_c_coefficients",
    "reduce_even",
    "reduce_odd",
    "reduce_constructed",
]


@dataclass(frozen=True, eq=False)
class NodeSystem:
    """Single node ``x' = A1 x + B1 w, y = C1 x``; ``a12`` is derived, never stored."""

    a1: np.ndarray
    b1: np.ndarray
    c1: np.ndarray

    def __post_init__(self):
        a1 = as_matrix(self.a1, "A1")
        b1 = as_matrix(self.b1, "B1")
        c1 = as_matrix(np.atleast_2d(self.c1), "C1")
        n = a1.shape[0]
        if a1.shape != (n, n):
            raise DimensionMismatch(f"A1 must be square, got {a1.shape}")
        if b1.shape[0] != n:
            raise DimensionMismatch(f"B1 has {b1.shape[0]} rows, A1 is {n}x{n}")
        if c1.shape[1] != n:
            raise DimensionMismatch(f"C1 has {c1.shape[1]} columns, A1 is {n}x{n}")
        if b1.shape[1] != c1.shape[0]:
            # inner coupling B1 C1 needs as many outputs as inputs
            raise DimensionMismatch(f"B1 has {b1.shape[1]} inputs but C1 has {c1.shape[0]} outputs")
        for name, val in (("a1", a1), ("b1", b1), ("c1", c1)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def a12(self):
        return self.b1 @ self.c1

    @property
    def order(self):
        return self.a1.shape[0]

    @property
    def n_inputs(self):
        return self.b1.shape[1]

    @property
    def n_outputs(self):
        return self.c1.shape[0]

    def __eq__(self, other):
        if not isinstance(other, NodeSystem):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, k), getattr(other, k)) for k in ("a1", "b1", "c1")
        )

    __hash__ = None


def example_node(which):
    """The two worked node examples: 1 (first order) and 2 (second order)."""
    if which in (1, "1", "ex1"):
        return NodeSystem([[-4.5]], [[1.0]], [[3.0]])
    if which in (2, "2", "ex2"):
        return NodeSystem([[0.0, 1.0], [-4.0, -2.5]], [[0.0], [1.0]], [[2.0, 2.0]])
    raise ValueError(f"unknown example node {which!r}")


class IoShape(enum.Enum):
    COLUMN_ROW = "columnrow"
    BLOCK_DIAGONAL = "blockdiag"


@dataclass(frozen=True, eq=False)
class NetworkRealization:
    """State-space triple of an assembled (or reduced) network.

    ``node_count`` is the number of node-sized state blocks; for the reduced
    systems it is the number of blocks kept, not the size of the original network.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    node_count: int
    shape: IoShape = IoShape.COLUMN_ROW

    def __post_init__(self):
        dim = self.a.shape[0]
        if self.a.shape != (dim, dim):
            raise DimensionMismatch("state matrix must be square")
        if dim % self.node_count:
            raise DimensionMismatch(f"state dimension {dim} not a multiple of {self.node_count}")
        if self.b.shape[0] != dim or self.c.shape[1] != dim:
            raise DimensionMismatch("B rows / C columns must match the state dimension")

    @property
    def abc(self):
        return self.a, self.b, self.c

    def transformed(self, t):
        """Realization in coordinates ``x_new = t x``: ``(T A T^-1, T B, C T^-1)``."""
        t = np.asarray(t, dtype=float)
        t_inv = np.linalg.inv(t)
        return NetworkRealization(
            t @ self.a @ t_inv, t @ self.b, self.c @ t_inv, self.node_count, self.shape
        )


def assemble(node, gamma, shape=IoShape.COLUMN_ROW):
    """Network ``(kron(I, A1) + kron(G, A12), B, C)`` for coupling `gamma`."""
    gamma = as_matrix(gamma, "gamma")
    n_nodes = gamma.shape[0]
    if gamma.shape != (n_nodes, n_nodes):
        raise DimensionMismatch(f"coupling matrix must be square, got {gamma.shape}")
    shape = IoShape(shape)
    a = np.kron(np.eye(n_nodes), node.a1) + np.kron(gamma, node.a12)
    if shape is IoShape.COLUMN_ROW:
        ones = np.ones((n_nodes, 1))
        b = np.kron(ones, node.b1)
        c = np.kron(ones.T, node.c1)
    else:
        b = np.kron(np.eye(n_nodes), node.b1)
        c = np.kron(np.eye(n_nodes), node.c1)
    return NetworkRealization(a, b, c, n_nodes, shape)


def _mode_is_stable(node, lam):
    m = node.a1 + lam * node.a12
    if abs(np.imag(lam)) == 0.0:
        return is_hurwitz(np.real(m))
    return is_hurwitz(realify(m))


def stable_by_coupling_spectrum(node, gamma, dedup_tol=1e-8):
    """Stability of the assembled network decided mode by mode.

    The network matrix is Hurwitz iff ``A1 + lam * A12`` is Hurwitz for every
    distinct eigenvalue ``lam`` of the coupling matrix.
    """
    lams = coupling_spectrum(gamma).distinct(dedup_tol)
    return all(_mode_is_stable(node, lam) for lam in lams)


def stability_eigenvalue_list(kind, n):
    """Coupling eigenvalues whose modes decide stability for the generated families.

    Constructed coupling: ``-1, +1`` (plus ``0`` when n is odd). Diffusive:
    ``0, -1, -3, ..., -n`` for odd n and ``0, -2, ..., -n`` for even n.
    """
    kind = CouplingKind(kind)
    if n == 1:
        return [0.0]
    if kind is CouplingKind.CONSTRUCTED:
        return [-1.0, 1.0] + ([0.0] if n % 2 else [])
    if kind is CouplingKind.DIFFUSIVE:
        return [0.0] + [-float(k) for k in range(1 if n % 2 else 2, n + 1, 2)]
    raise ValueError(f"no closed-form stability list for {kind.value} coupling")


def stable_by_eigenvalue_list(node, kind, n):
    return all(_mode_is_stable(node, lam) for lam in stability_eigenvalue_list(kind, n))


def jordan_like_block(k):
    """k x k upper bidiagonal matrix with 1 on the diagonal and 2 above it."""
    return np.eye(k) + 2.0 * np.eye(k, k=1)


def _pairwise_step(coeffs, first, last):
    return [first] + [coeffs[i] + coeffs[i + 1] for i in range(len(coeffs) - 1)] + [last]


def reduction_b_coefficients(k, odd=False):
    """Node-block weights of the reduced input matrix for a chain of length k.

    Even networks start from (2, 1) at k = 2 and each step keeps the end
    points (2, 1) while summing adjacent entries. Odd networks run the same
    recursion on a chain starting at (2, 2), then append 1 for the extra
    zero-eigenvalue block.
    """
    if k < 2:
        raise ValueError("chain length must be at least 2")
    first, last = (2, 2) if odd else (2, 1)
    coeffs = [first, last]
    for _ in range(k - 2):
        coeffs = _pairwise_step(coeffs, first, last)
    return coeffs + [1] if odd else coeffs


def reduction_c_coefficients(k, odd=False):
    """Node-block weights of the reduced output matrix: (2, 0, 2, -4, 8, ...).

    Entry j (1-based, j >= 3) is ``(-1)**(j-1) * 2**(j-2)``; odd networks append
    ``(-1)**k`` for the zero-eigenvalue block.
    """
    if k < 2:
        raise ValueError("chain length must be at least 2")
    coeffs = [2, 0] + [(-1) ** (j - 1) * 2 ** (j - 2) for j in range(3, k + 1)]
    return coeffs + [(-1) ** k] if odd else coeffs


def _reduced(node, coupling_block, b_coeffs, c_coeffs):
    blocks = coupling_block.shape[0]
    a = np.kron(np.eye(blocks), node.a1) + np.kron(coupling_block, node.a12)
    b = np.kron(np.array(b_coeffs, dtype=float).reshape(-1, 1), node.b1)
    c = np.kron(np.array(c_coeffs, dtype=float).reshape(1, -1), node.c1)
    return NetworkRealization(a, b, c, blocks, IoShape.COLUMN_ROW)


def reduce_even(node, n):
    """Reduced system with the same H2 norm as the column/row network of even size n.

    Only the Jordan chain at +1 survives: state matrix
    ``kron(I, A1) + kron(J, A12)`` with ``J = jordan_like_block(n // 2)``.
    """
    if n % 2 or n < 4:
        raise ValueError(f"reduce_even needs even n >= 4, got {n}")
    k = n // 2
    return _reduced(
        node, jordan_like_block(k), reduction_b_coefficients(k), reduction_c_coefficients(k)
    )


def reduce_odd(node, n):
    """Odd-size counterpart of :func:`reduce_even` (n >= 5).

    The chain of length (n - 1) / 2 at +1 is kept together with one extra
    block for the zero coupling eigenvalue, whose dynamics are ``A1`` itself.
    """
    if n % 2 == 0 or n < 5:
        raise ValueError(f"reduce_odd needs odd n >= 5, got {n}")
    k = (n - 1) // 2
    block = np.zeros((k + 1, k + 1))
    block[:k, :k] = jordan_like_block(k)
    return _reduced(
        node,
        block,
        reduction_b_coefficients(k, odd=True),
        reduction_c_coefficients(k, odd=True),
    )


def reduce_constructed(node, n):
    """Reduced realization for any n; sizes without a reduction (n <= 3) return the full network."""
    if n >= 4 and n % 2 == 0:
        return reduce_even(node, n)
    if n >= 5:
        return reduce_odd(node, n)
    return assemble(node, build_constructed(n), IoShape.COLUMN_ROW)
