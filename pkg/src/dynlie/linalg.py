"""Dense complex matrix helpers and the real Hilbert-Schmidt geometry on them.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The real inner
product used throughout is ``<a, b> = Re Tr(a^dagger b)``, which turns the real
span of a set of skew-Hermitian matrices into a Euclidean space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9
# brackets below this absolute norm are treated as analytically zero
ZERO_FLOOR = 1e-12


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a, b) -> np.ndarray:
    """Return the Lie bracket ``ab - ba``."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return a @ b - b @ a


def hs_inner(a, b) -> float:
    """Real Hilbert-Schmidt inner product ``Re Tr(a^dagger b)``."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return float(np.real(np.vdot(a, b)))


def hs_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def is_skew_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    scale = max(np.linalg.norm(a), 1.0)
    return bool(np.linalg.norm(a + a.conj().T) <= tol * scale)


def is_traceless(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return bool(abs(np.trace(a)) <= tol * max(np.linalg.norm(a), 1.0))


def matrix_unit(n: int, row: int, col: int) -> np.ndarray:
    """The elementary matrix ``e_{row,col}`` with 1-based indices."""
    e = np.zeros((n, n), dtype=complex)
    e[row - 1, col - 1] = 1.0
    return e


@dataclass(frozen=True)
class OrthoBasis:
    """Hilbert-Schmidt orthonormal family of ``n x n`` matrices.

    ``elements`` is a read-only array of shape ``(k, n, n)``.  Instances are
    never mutated; :func:`extend_orthonormal` returns a new basis.
    """

    n: int
    elements: np.ndarray = field(repr=False)
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        arr = np.array(self.elements, dtype=complex).reshape(-1, self.n, self.n)
        arr.setflags(write=False)
        object.__setattr__(self, "elements", arr)

    @classmethod
    def empty(cls, n: int, tolerance: float = DEFAULT_TOL) -> "OrthoBasis":
        return cls(n, np.zeros((0, n, n), dtype=complex), tolerance)

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def coefficients(self, a) -> np.ndarray:
        """Real coordinates of the orthogonal projection of ``a``."""
        a = as_matrix(a)
        if len(self) == 0:
            return np.zeros(0)
        flat = self.elements.reshape(len(self), -1)
        return np.real(flat.conj() @ a.ravel())

    def project_out(self, a) -> np.ndarray:
        """Residual of ``a`` after two passes of modified Gram-Schmidt."""
        r = as_matrix(a).copy()
        for _ in range(2):
            for b in self.elements:
                r -= np.real(np.vdot(b, r)) * b
        return r


def extend_orthonormal(
    basis: OrthoBasis, candidate, scale: float = 0.0
) -> tuple[bool, OrthoBasis, float]:
    """Try to add ``candidate`` to ``basis``.

    The candidate is accepted when its residual after projection exceeds
    ``basis.tolerance`` times ``max(|candidate|, scale)`` (and the absolute
    floor).  ``scale`` lets callers supply the magnitude of the terms a
    candidate was computed from, e.g. ``|a| |b|`` for ``ab - ba``, since that
    is what rounding error is proportional to.  Returns
    ``(accepted, new_basis, residual_norm)``; the input basis is returned
    unchanged on rejection.
    """
    c = as_matrix(candidate)
    if c.shape != (basis.n, basis.n):
        raise ValueError(f"dimension mismatch: {c.shape} vs {(basis.n, basis.n)}")
    if not np.all(np.isfinite(c)):
        raise ValueError("candidate has non-finite entries")
    norm = np.linalg.norm(c)
    if norm <= ZERO_FLOOR:
        return False, basis, float(norm)
    r = basis.project_out(c)
    rnorm = float(np.linalg.norm(r))
    if rnorm <= basis.tolerance * max(norm, scale) or rnorm <= ZERO_FLOOR:
        return False, basis, rnorm
    grown = np.concatenate([basis.elements, (r / rnorm)[None]], axis=0)
    return True, OrthoBasis(basis.n, grown, basis.tolerance), rnorm


def vec(a) -> np.ndarray:
    """Column-major vectorisation, the convention used by :func:`nullspace`."""
    return as_matrix(a).ravel(order="F")


def unvec(v, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((n, n), order="F")


def nullspace(rows, n: int | None = None, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Common kernel of a family of linear functionals on ``n x n`` matrices.

    ``rows`` is either a 2-D array with ``n**2`` columns or a sequence of such
    row blocks / single rows; each row ``r`` acts as ``S -> r . vec(S)`` with
    column-major ``vec``.  Singular values below ``tol`` times the largest one
    count as zero.  The returned matrices are Frobenius-orthonormal, with the
    phase fixed so that the first largest entry (column-major) is real and
    positive.
    """
    if isinstance(rows, np.ndarray):
        blocks = [rows]
    else:
        blocks = list(rows)
    if not blocks:
        raise ValueError("nullspace needs at least one row")
    mat = np.vstack([np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks])
    if n is None:
        n = int(round(np.sqrt(mat.shape[1])))
    if mat.shape[1] != n * n:
        raise ValueError(f"rows must have {n * n} columns, got {mat.shape[1]}")
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    kernel = []
    for v in vh[rank:].conj():
        k = int(np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9)))
        v = v * (abs(v[k]) / v[k])
        kernel.append(unvec(v, n))
    return kernel


def invariant_form_rows(x) -> np.ndarray:
    """Matrix of ``S -> X^T S + S X`` acting on column-major ``vec(S)``."""
    x = as_matrix(x)
    eye = np.eye(x.shape[0])
    return np.kron(eye, x.T) + np.kron(x.T, eye)
