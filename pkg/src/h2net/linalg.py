"""Dense matrix primitives used by the network, H2 and simulation modules.

Matrices are plain 2-D ``numpy`` float arrays; :func:`as_matrix` is the single
validation gate (2-D, real, finite).
"""
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionMismatch, SingularMatrix

__all__ = [
    "Spectrum",
    "as_matrix",
    "kron",
    "solve_linear",
    "eigenvalues",
    "backward_error",
    "is_hurwitz",
    "numeric_rank",
    "integer_charpoly",
    "integer_spectrum",
    "realify",
    "HURWITZ_MARGIN",
]

HURWITZ_MARGIN = 1e-9
SINGULAR_PIVOT_RTOL = 1e-12


def as_matrix(a, name="matrix"):
    """Return `a` as a finite 2-D float array; scalars become 1x1 and vectors columns."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if m.size == 0:
        raise DimensionMismatch(f"{name} is empty")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _square(a, name):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a, b):
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def solve_linear(m, rhs):
    """Solve ``m @ X = rhs`` by LU with partial pivoting.

    Raises
    ------
    SingularMatrix
        If a pivot of the LU factor falls below ``1e-12 * ||m||_inf``.
    """
    m = _square(m, "m")
    rhs_arr = np.asarray(rhs, dtype=float)
    vector = rhs_arr.ndim == 1
    rhs_m = as_matrix(rhs_arr, "rhs")
    if rhs_m.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"rhs has {rhs_m.shape[0]} rows, m has {m.shape[0]}")
    scale = np.linalg.norm(m, np.inf)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() < SINGULAR_PIVOT_RTOL * scale:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below {SINGULAR_PIVOT_RTOL:g} * ||m||_inf = {scale:.3e}"
        )
    x = scipy.linalg.lu_solve((lu, piv), rhs_m, check_finite=False)
    return x.ravel() if vector else x


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a square matrix (algebraic multiplicity = repetition).

    ``residual_tol`` is the backward-error bound the values are guaranteed to
    meet: ``sigma_min(m - lam*I) <= residual_tol`` for every value.
    """

    values: tuple
    residual_tol: float

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self):
        return np.array(self.values, dtype=complex)

    def sorted(self):
        """Values ordered by real part, then imaginary part."""
        return sorted(self.values, key=_sort_key)

    def distinct(self, tol=1e-8):
        """Representatives of the distinct values (absolute complex distance `tol`)."""
        reps = []
        for z in self.sorted():
            if all(abs(z - r) > tol for r in reps):
                reps.append(z)
        return reps

    def max_real(self):
        return max(z.real for z in self.values)


def _sort_key(z):
    return (round(z.real, 9), z.imag)


def eigenvalues(m):
    """Eigenvalues of a real square matrix (LAPACK Hessenberg + shifted QR).

    Backward stable, so each value is an exact eigenvalue of a matrix within a
    few ulps of `m`. For defective matrices the forward error can be large
    (a size-k Jordan block perturbs by roughly ``eps**(1/k)``); use
    :func:`integer_spectrum` when `m` is integer valued and exact values matter.
    """
    m = _square(m, "m")
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    tol = 1e-6 * max(1.0, np.linalg.norm(m, "fro"))
    vals = sorted((complex(v) for v in vals), key=_sort_key)
    return Spectrum(tuple(vals), tol)


def backward_error(m, lam):
    """Smallest singular value of ``m - lam*I``."""
    m = _square(m, "m")
    shifted = m.astype(complex) - lam * np.eye(m.shape[0])
    return float(np.linalg.svd(shifted, compute_uv=False)[-1])


def is_hurwitz(m, margin=HURWITZ_MARGIN):
    """True iff every eigenvalue of `m` has real part below ``-margin``."""
    return eigenvalues(m).max_real() < -margin


def numeric_rank(m, tol=1e-8):
    """Number of singular values above ``tol * ||m||_inf * max(rows, cols)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_matrix(m, "m")
    scale = np.linalg.norm(m, np.inf)
    if scale == 0.0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > tol * scale * max(m.shape)))


def _as_int_matrix(m):
    m = _square(m, "m")
    if not np.array_equal(m, np.round(m)):
        raise ValueError("matrix is not integer valued")
    return np.array([[int(v) for v in row] for row in np.round(m)], dtype=object)


def integer_charpoly(m):
    """Characteristic polynomial of an integer matrix, in exact integers.

    Faddeev-LeVerrier recursion; returns monic coefficients, highest degree first.
    """
    a = _as_int_matrix(m)
    n = a.shape[0]
    eye = np.eye(n, dtype=int).astype(object)
    coeffs = [1]
    mk = np.zeros((n, n), dtype=object)
    c = 1
    for k in range(1, n + 1):
        mk = a.dot(mk) + c * eye
        trace = int(np.trace(a.dot(mk)))
        # exact for integer matrices (c_k are integers)
        assert trace % k == 0
        c = -trace // k
        coeffs.append(c)
    return coeffs


def _deflate(coeffs, root):
    """Synthetic division by (x - root); returns quotient or None if not a root."""
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + root * out[-1])
    if out[-1] != 0:
        return None
    return out[:-1]


def integer_spectrum(m):
    """Eigenvalues of an integer matrix with exact integer roots.

    Integer eigenvalues (with algebraic multiplicity) are extracted from the
    exact characteristic polynomial; only the residual factor is solved in
    floating point.
    """
    coeffs = integer_charpoly(m)
    approx = eigenvalues(m)
    candidates = sorted({int(round(z.real)) for z in approx if abs(z.imag) < 0.5})
    exact = []
    for r in candidates:
        while len(coeffs) > 1:
            q = _deflate(coeffs, r)
            if q is None:
                break
            coeffs = q
            exact.append(complex(r))
    rest = [complex(v) for v in np.roots(np.array(coeffs, dtype=float))] if len(coeffs) > 1 else []
    vals = sorted(exact + rest, key=_sort_key)
    return Spectrum(tuple(vals), approx.residual_tol)


def realify(m):
    """Real 2n x 2n representation ``[[Re, -Im], [Im, Re]]`` of a complex matrix."""
    m = np.asarray(m, dtype=complex)
    re, im = m.real, m.imag
    return np.block([[re, -im], [im, re]])
