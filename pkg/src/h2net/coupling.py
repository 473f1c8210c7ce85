"""Outer-coupling matrices and their spectral structure.

Three families are generated: the constructed coupling whose spectrum is
{-1, +1} (plus 0 for odd size) with a single long Jordan chain at +1, the
diffusive variant with zero row sums, and the antisymmetric coupling.
"""
import enum

import numpy as np

from .errors import UnsupportedKind
from .linalg import Spectrum, as_matrix, eigenvalues, integer_spectrum, numeric_rank

__all__ = [
    "CouplingKind",
    "build_constructed",
    "build_diffusive",
    "build_antisymmetric",
    "coupling_matrix",
    "coupling_spectrum",
    "predicted_spectrum",
    "verify_jordan_structure",
    "match_spectra",
]


class CouplingKind(enum.Enum):
    CONSTRUCTED = "constructed"
    DIFFUSIVE = "diffusive"
    ANTISYMMETRIC = "antisym"
    CUSTOM = "custom"


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"node count must be a positive integer, got {n!r}")
    return int(n)


def build_constructed(n):
    """Constructed coupling: zero diagonal, +1 everywhere except below-diagonal
    entries (i, j) with j <= i - 2 and j odd (1-based), which are -1.
    """
    n = _check_n(n)
    g = np.ones((n, n)) - np.eye(n)
    for i in range(3, n + 1):
        g[i - 1, 0:i - 2:2] = -1.0  # 0-based columns 0, 2, ... are the odd 1-based j
    return g


def build_diffusive(n):
    """Constructed off-diagonal pattern with each diagonal entry set to minus its row sum."""
    g = build_constructed(n)
    np.fill_diagonal(g, -g.sum(axis=1))
    return g


def build_antisymmetric(n):
    n = _check_n(n)
    return np.triu(np.ones((n, n)), 1) - np.tril(np.ones((n, n)), -1)


_BUILDERS = {
    CouplingKind.CONSTRUCTED: build_constructed,
    CouplingKind.DIFFUSIVE: build_diffusive,
    CouplingKind.ANTISYMMETRIC: build_antisymmetric,
}


def coupling_matrix(kind, n=None, custom=None):
    """Coupling matrix for `kind`; ``CUSTOM`` returns the square matrix `custom`."""
    kind = CouplingKind(kind)
    if kind is CouplingKind.CUSTOM:
        if custom is None:
            raise ValueError("custom coupling needs a matrix")
        g = as_matrix(custom, "custom coupling")
        if g.shape[0] != g.shape[1]:
            raise ValueError(f"custom coupling must be square, got {g.shape}")
        if n is not None and g.shape[0] != n:
            raise ValueError(f"custom coupling is {g.shape[0]}x{g.shape[0]}, expected n={n}")
        return g
    if n is None:
        raise ValueError(f"{kind.value} coupling needs n")
    return _BUILDERS[kind](n)


def coupling_spectrum(gamma):
    """Eigenvalues of a coupling matrix.

    Integer-valued couplings (every generated family) go through the exact
    characteristic polynomial so repeated and defective eigenvalues come out
    exact; anything else uses the floating-point eigensolver.
    """
    g = as_matrix(gamma, "gamma")
    if np.array_equal(g, np.round(g)):
        return integer_spectrum(g)
    return eigenvalues(g)


def predicted_spectrum(kind, n):
    """Closed-form spectrum (with multiplicities) of the constructed or diffusive coupling."""
    kind = CouplingKind(kind)
    n = _check_n(n)
    if n < 2:
        raise ValueError("predicted spectra are stated for n >= 2")
    if kind is CouplingKind.CONSTRUCTED:
        half = n // 2
        vals = [-1.0] * half + [1.0] * half + ([0.0] if n % 2 else [])
    elif kind is CouplingKind.DIFFUSIVE:
        vals = [-float(n), 0.0]
        stop = 1 if n % 2 else 0
        # -(n-2), -(n-2), ..., down to -3, -3, -1 (odd) or -2, -2 (even)
        for k in range(n - 2, stop, -2):
            vals += [-float(k)] * 2
        if n % 2:
            vals.append(-1.0)
    else:
        raise UnsupportedKind(f"no closed-form spectrum for {kind.value} coupling")
    return Spectrum(tuple(complex(v) for v in sorted(vals)), 0.0)


def verify_jordan_structure(n, tol=1e-8):
    """Check the rank signature of the constructed coupling for even `n`.

    The claimed normal form is -I of size n/2 plus one Jordan block of size
    n/2 at eigenvalue +1, which holds exactly when ``dim ker(G + I) = n/2``,
    ``dim ker(G - I) = 1`` and ``dim ker((G - I)^(n/2)) = n/2``.
    """
    n = _check_n(n)
    if n % 2:
        raise ValueError("verify_jordan_structure needs even n")
    g = build_constructed(n)
    eye = np.eye(n)
    half = n // 2
    nullity = lambda m: n - numeric_rank(m, tol)  # noqa: E731
    return (
        nullity(g + eye) == half
        and nullity(g - eye) == 1
        and nullity(np.linalg.matrix_power(g - eye, half)) == half
    )


def match_spectra(computed, predicted, tol=1e-6):
    """Greedy nearest-match of two eigenvalue multisets.

    Returns the largest matched distance, or ``inf`` when the sizes differ or
    some value finds no partner within `tol`.
    """
    left = list(computed)
    right = list(predicted)
    if len(left) != len(right):
        return float("inf")
    worst = 0.0
    for z in left:
        dists = [abs(z - w) for w in right]
        j = int(np.argmin(dists))
        if dists[j] > tol:
            return float("inf")
        worst = max(worst, dists[j])
        right.pop(j)
    return worst
