"""Numerical Lie closure of a set of skew-Hermitian generators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ZERO_FLOOR,
    OrthoBasis,
    as_matrix,
    extend_orthonormal,
    is_skew_hermitian,
    is_traceless,
)


@dataclass(frozen=True)
class ClosureResult:
    basis: OrthoBasis
    converged: bool
    brackets_evaluated: int
    generators: tuple[np.ndarray, ...] = field(repr=False)
    # True when the early exit at max_dim fired
    reached_max_dim: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def tolerance(self) -> float:
        return self.basis.tolerance


def lie_closure(
    generators,
    tolerance: float = DEFAULT_TOL,
    max_dim: int | None = None,
) -> ClosureResult:
    """Span of all nested commutators of ``generators``.

    Elements are processed from a FIFO queue: generators first in the given
    order, then accepted brackets in acceptance order.  Each dequeued element
    is bracketed against the basis elements present at that moment, in index
    order, so the result is fully determined by the input order.

    A bracket is accepted when its residual exceeds ``tolerance`` relative
    to ``max(|[a, b]|, |a| |b|)``; cancellation inside ``ab - ba`` would
    otherwise let rounding noise through as new directions.

    ``max_dim`` defaults to ``N**2 - 1`` (``N**2`` when some generator carries
    a trace); reaching it stops the loop early, since nothing larger exists.

    Raises:
        ValueError: empty input, mismatched shapes, a generator that is not
            skew-Hermitian, or a non-finite bracket.
    """
    gens = tuple(as_matrix(g).copy() for g in generators)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise ValueError("generators must share one dimension")
        if not np.all(np.isfinite(g)):
            raise ValueError("generator has non-finite entries")
        if not is_skew_hermitian(g, tolerance):
            raise ValueError("generators must be skew-Hermitian")
    if max_dim is None:
        traceless = all(is_traceless(g, tolerance) for g in gens)
        max_dim = n * n - 1 if traceless else n * n

    basis = OrthoBasis.empty(n, tolerance)
    queue: deque[int] = deque()
    for g in gens:
        accepted, basis, _ = extend_orthonormal(basis, g)
        if accepted:
            queue.append(len(basis) - 1)
        if len(basis) >= max_dim:
            return ClosureResult(basis, True, 0, gens, reached_max_dim=True)

    count = 0
    while queue:
        k = queue.popleft()
        a = basis[k]
        for j in range(len(basis)):
            if j == k:
                continue
            b = basis[j]
            c = a @ b - b @ a
            count += 1
            if not np.all(np.isfinite(c)):
                raise ValueError("non-finite bracket encountered")
            if np.linalg.norm(c) <= ZERO_FLOOR:
                continue
            # basis elements have unit norm, so |a| |b| = 1
            accepted, basis, _ = extend_orthonormal(basis, c, scale=1.0)
            if accepted:
                queue.append(len(basis) - 1)
                if len(basis) >= max_dim:
                    return ClosureResult(basis, True, count, gens, reached_max_dim=True)
    return ClosureResult(basis, True, count, gens)


def membership(element, result: ClosureResult) -> tuple[bool, float]:
    """Whether ``element`` lies in the span of a closure, with its residual.

    The zero matrix is reported as a member with residual 0.  Residuals at
    or below the absolute floor used by :func:`lie_closure` also count as
    membership, so analytically vanishing brackets are not misjudged.
    """
    e = as_matrix(element)
    if e.shape != (result.n, result.n):
        raise ValueError("dimension mismatch")
    norm = np.linalg.norm(e)
    if norm == 0:
        return True, 0.0
    residual = float(np.linalg.norm(result.basis.project_out(e)))
    return residual <= max(result.tolerance * norm, ZERO_FLOOR), residual
