"""Identify a closed algebra from its dimension and invariant bilinear forms.

An algebra of ``N x N`` matrices preserves the bilinear form ``S`` when
``X^T S + S X = 0`` for every element ``X``.  so(N)-type algebras keep a
symmetric form, sp-type algebras an antisymmetric one, and su(N) none at all.
Together with the dimension and the parity of ``N`` this separates the cases
that occur for ladder systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .closure import ClosureResult
from .hamiltonian import SystemSpec, decomposability_flags
from .linalg import OrthoBasis, invariant_form_rows, nullspace

# fraction of Frobenius mass a part must carry to name the form's symmetry
DOMINANCE = 0.999


class Symmetry(str, Enum):
    SYMMETRIC = "SYMMETRIC"
    ANTISYMMETRIC = "ANTISYMMETRIC"
    MIXED = "MIXED"


class AlgebraFamily(str, Enum):
    SU_N = "SU_N"
    SO_ODD = "SO_ODD"
    SP = "SP"
    PROPER_SUBALGEBRA = "PROPER_SUBALGEBRA"
    DECOMPOSABLE = "DECOMPOSABLE"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class FormEvidence:
    matrix: np.ndarray = field(repr=False)
    symmetry: Symmetry
    kernel_dim: int
    symmetric_dim: int = 0
    antisymmetric_dim: int = 0


def _span_dim(mats: list[np.ndarray], tol: float) -> int:
    if not mats:
        return 0
    s = np.linalg.svd(np.array([m.ravel() for m in mats]), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0]))) if s[0] > 0 else 0


def _symmetry_of(s: np.ndarray) -> Symmetry:
    total = np.linalg.norm(s) ** 2
    sym = np.linalg.norm(0.5 * (s + s.T)) ** 2
    if sym > DOMINANCE * total:
        return Symmetry.SYMMETRIC
    if total - sym > DOMINANCE * total:
        return Symmetry.ANTISYMMETRIC
    return Symmetry.MIXED


def invariant_form(basis: OrthoBasis, tol: float | None = None) -> FormEvidence | None:
    """Bilinear forms preserved by every element of ``basis``.

    The kernel of ``S -> X^T S + S X`` is closed under transposition, so it
    splits into symmetric and antisymmetric subspaces whose dimensions are
    reported.  The representative ``matrix`` is the first kernel vector
    when the kernel is one-dimensional; otherwise it is taken from the
    larger of the two pure subspaces.  Returns ``None`` when no form exists.
    """
    if len(basis) == 0:
        raise ValueError("basis is empty")
    tol = basis.tolerance if tol is None else tol
    kernel = nullspace([invariant_form_rows(x) for x in basis], basis.n, tol)
    if not kernel:
        return None
    sym = [0.5 * (k + k.T) for k in kernel]
    anti = [0.5 * (k - k.T) for k in kernel]
    sdim, adim = _span_dim(sym, 1e-6), _span_dim(anti, 1e-6)
    if len(kernel) == 1:
        rep = kernel[0]
        symmetry = _symmetry_of(rep)
    else:
        parts = sym if sdim >= adim else anti
        rep = max(parts, key=np.linalg.norm)
        rep = rep / np.linalg.norm(rep)
        if adim == 0:
            symmetry = Symmetry.SYMMETRIC
        elif sdim == 0:
            symmetry = Symmetry.ANTISYMMETRIC
        else:
            symmetry = Symmetry.MIXED
    return FormEvidence(rep, symmetry, len(kernel), sdim, adim)


@dataclass(frozen=True)
class Classification:
    family: AlgebraFamily
    dim: int
    ambient: int
    form: FormEvidence | None = None
    decomposable_at: tuple[int, ...] = ()

    @property
    def name(self) -> str:
        n = self.ambient
        if self.family is AlgebraFamily.SU_N:
            return f"su({n})"
        if self.family is AlgebraFamily.SO_ODD:
            return f"so({n})"
        if self.family is AlgebraFamily.SP:
            return f"sp({n // 2})"
        return self.family.value

    @property
    def container(self) -> str:
        """Smallest classical algebra the result is known to sit inside."""
        n = self.ambient
        if self.form is not None and self.form.kernel_dim == 1:
            if self.form.symmetry is Symmetry.SYMMETRIC:
                return f"so({n})"
            if self.form.symmetry is Symmetry.ANTISYMMETRIC:
                return f"sp({n // 2})"
        return f"su({n})"


def classify(result: ClosureResult, spec: SystemSpec | None = None) -> Classification:
    """Decide the family of a closed algebra.

    In order: a vanishing dipole in ``spec`` gives DECOMPOSABLE; full
    dimension gives SU_N; dimension ``l(2l+1)`` with a symmetric form (odd N)
    or antisymmetric form (even N) gives SO_ODD / SP; several independent
    forms give INDETERMINATE; anything else is a PROPER_SUBALGEBRA.
    """
    if not result.converged:
        raise ValueError("cannot classify an unconverged closure")
    n, dim = result.n, result.dim
    split = tuple(decomposability_flags(spec)) if spec is not None else ()
    form = invariant_form(result.basis) if dim else None

    def make(family):
        return Classification(family, dim, n, form, split)

    if split:
        return make(AlgebraFamily.DECOMPOSABLE)
    if dim == n * n - 1:
        return make(AlgebraFamily.SU_N)
    l = n // 2
    if form is not None and form.kernel_dim == 1 and dim == l * (2 * l + 1):
        if n % 2 and form.symmetry is Symmetry.SYMMETRIC:
            return make(AlgebraFamily.SO_ODD)
        if n % 2 == 0 and form.symmetry is Symmetry.ANTISYMMETRIC:
            return make(AlgebraFamily.SP)
    if form is not None and (form.kernel_dim > 1 or form.symmetry is Symmetry.MIXED):
        return make(AlgebraFamily.INDETERMINATE)
    return make(AlgebraFamily.PROPER_SUBALGEBRA)
