"""Sufficient criteria for su(N), so(2l+1) and sp(l), with constructive witnesses.

The symmetric ladder systems are handled in two steps.  A signed permutation
of the level basis (:func:`sigma_transform`) rewrites ``iH0'`` and ``iH1`` as

    iH0' = sum_m eps_m h_m,      iH1 = sum_m delta_m y_m

over the Cartan elements and designated ladder generators of so(2l+1) (odd
``N``) or sp(l) (even ``N``).  The criteria are then evaluated on that
:class:`GenericCartanSystem`.  Whenever a criterion fires, the matching
descent builds a single ladder generator (or the whole ladder set) out of
nested brackets of the two generators, and records each intermediate matrix
in a :class:`DescentTrace` so the argument can be replayed numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .closure import ClosureResult, lie_closure, membership
from .hamiltonian import (
    SystemSpec,
    build_h0_prime,
    build_h1,
    decomposability_flags,
    detect_symmetric_coupling,
    transition_gaps,
)
from .linalg import commutator, hs_inner
from .tables import Family, GeneratorTable, so_odd_basis, sp_basis

INCONCLUSIVE = "INCONCLUSIVE"
# relative tolerance for comparing omega**2 values and v values
MATCH_TOL = 1e-9
# nonzero tests for eps/delta, relative to the largest magnitude
NONZERO_TOL = 1e-12


class HypothesisError(ValueError):
    """A descent was asked to run outside the hypotheses that justify it."""


def _close(a: float, b: float, tol: float = MATCH_TOL) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


def _all_nonzero(values) -> bool:
    scale = max((abs(v) for v in values), default=0.0)
    return all(abs(v) > NONZERO_TOL * scale for v in values)


def _bracket2(h0, a):
    """``[[h0, a], h0]``; multiplies each ladder y_m by omega_m**2."""
    return commutator(commutator(h0, a), h0)


def _coefficient(target: np.ndarray, a: np.ndarray) -> tuple[float, float]:
    c = hs_inner(target, a) / hs_inner(target, target)
    return c, float(np.linalg.norm(a - c * target))


# -- generic systems ----------------------------------------------------------

@dataclass(frozen=True)
class GenericCartanSystem:
    family: Family
    eps: tuple[float, ...]
    delta: tuple[float, ...]

    def __post_init__(self):
        fam = Family(self.family)
        if fam not in (Family.SO_ODD, Family.SP):
            raise ValueError("generic systems are SO_ODD or SP")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))
        if len(self.eps) != len(self.delta) or not self.eps:
            raise ValueError("eps and delta must be nonempty and of equal length")

    @property
    def rank(self) -> int:
        return len(self.eps)

    @property
    def table(self) -> GeneratorTable:
        return _table(self.family, self.rank)

    @property
    def anchor(self) -> int:
        """Index of the ladder generator the descents isolate."""
        return 1 if self.family is Family.SO_ODD else self.rank

    def generators(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.table
        h0 = sum(e * t.h(m) for m, e in enumerate(self.eps, 1))
        h1 = sum(d * t.y(m) for m, d in enumerate(self.delta, 1))
        return h0, h1


_TABLE_CACHE: dict = {}


def _table(family: Family, rank: int) -> GeneratorTable:
    key = (family, rank)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = (so_odd_basis if family is Family.SO_ODD else sp_basis)(rank)
    return _TABLE_CACHE[key]


# -- basis maps ---------------------------------------------------------------

@dataclass(frozen=True)
class BasisMap:
    """Signed permutation ``U`` with ``U A U^T`` in table coordinates."""

    unitary: np.ndarray = field(repr=False)
    direction: str  # "ODD" or "EVEN"
    tilde_e: tuple[float, ...]
    tilde_d: tuple[float, ...]
    residual_h0: float = 0.0
    residual_h1: float = 0.0

    @property
    def family(self) -> Family:
        return Family.SO_ODD if self.direction == "ODD" else Family.SP

    def apply(self, a) -> np.ndarray:
        u = self.unitary
        return u @ np.asarray(a, dtype=complex) @ u.conj().T

    def generic(self) -> GenericCartanSystem:
        return GenericCartanSystem(self.family, self.tilde_e, self.tilde_d)


def sigma_unitary(n: int) -> np.ndarray:
    """Signed permutation relabelling the levels of a symmetric ladder.

    Odd ``n = 2l+1``: ``|k> -> |l+2-k>`` for ``k <= l+1`` and
    ``|k> -> (-1)^(k-l-1) |k>`` above.  Even ``n = 2l``: ``|k>`` fixed for
    ``k <= l`` and ``|k> -> (-1)^(k-l-1) |3l+1-k>`` above.  Column ``k`` of
    the returned matrix holds the image of ``|k>``.
    """
    u = np.zeros((n, n))
    if n % 2:
        l = (n - 1) // 2
        for k in range(1, n + 1):
            if k <= l + 1:
                u[l + 2 - k - 1, k - 1] = 1
            else:
                u[k - 1, k - 1] = (-1) ** (k - l - 1)
    else:
        l = n // 2
        for k in range(1, n + 1):
            if k <= l:
                u[k - 1, k - 1] = 1
            else:
                u[3 * l + 1 - k - 1, k - 1] = (-1) ** (k - l - 1)
    return u.astype(complex)


def sigma_transform(spec: SystemSpec) -> BasisMap:
    """Rewrite a symmetric ladder system in so(2l+1) / sp(l) coordinates.

    Raises:
        ValueError: the gaps or dipoles are not palindromic.
    """
    if not detect_symmetric_coupling(spec):
        raise ValueError("system does not have symmetrically coupled transitions")
    n = spec.n
    mu = transition_gaps(spec)
    d = spec.dipoles
    if n % 2:
        l = (n - 1) // 2
        # mu and d are 1-based in the formulas below
        te = tuple(-sum(mu[s - 1] for s in range(l + 1 - m, l + 1)) for m in range(1, l + 1))
        td = tuple(d[l + 1 - m - 1] for m in range(1, l + 1))
        direction = "ODD"
    else:
        l = n // 2
        te = tuple(
            -0.5 * mu[l - 1] - sum(mu[s - 1] for s in range(m, l)) for m in range(1, l + 1)
        )
        td = tuple(d[m - 1] for m in range(1, l + 1))
        direction = "EVEN"
    u = sigma_unitary(n)
    bm = BasisMap(u, direction, te, td)
    h0, h1 = bm.generic().generators()
    r0 = float(np.linalg.norm(bm.apply(build_h0_prime(spec)) - h0))
    r1 = float(np.linalg.norm(bm.apply(build_h1(spec)) - h1))
    scale = max(1.0, np.linalg.norm(h0), np.linalg.norm(h1))
    if max(r0, r1) > 1e-12 * scale:
        raise ArithmeticError(f"basis map residuals too large: {r0:.3g}, {r1:.3g}")
    return BasisMap(u, direction, te, td, r0, r1)


# -- omega / v ----------------------------------------------------------------

class OmegaV(NamedTuple):
    omega: list[float]
    v: list[float]
    set_m: list[int]


def omega_v_sequences(g: GenericCartanSystem) -> OmegaV:
    """Frequency differences, dipole curvature ``v`` and the coincidence set M.

    so(2l+1): ``omega = (omega_0, .., omega_{l-1})`` with ``omega_0 = eps_1``;
    ``m`` is in M when ``omega_{m-1}**2 == omega_0**2``; the masked dipoles
    are padded with ``dt_0 = dt_1`` and ``dt_{l+1} = 0``.

    sp(l): ``omega = (omega_1, .., omega_l)`` with ``omega_l = 2 eps_l``;
    ``m`` is in M when ``omega_m**2 == omega_l**2``; padding ``dt_0 = 0`` and
    ``dt_{l+1} = dt_{l-1}``.

    In both cases ``v_m = 2 dt_m**2 - dt_{m+1}**2 - dt_{m-1}**2``.
    """
    eps, delta, l = g.eps, g.delta, g.rank
    diffs = [eps[m] - eps[m - 1] for m in range(1, l)]
    if g.family is Family.SO_ODD:
        omega = [eps[0]] + diffs
        anchor = omega[0] ** 2
        set_m = [m for m in range(1, l + 1) if _close(omega[m - 1] ** 2, anchor)]
    else:
        omega = diffs + [2 * eps[-1]]
        anchor = omega[-1] ** 2
        set_m = [m for m in range(1, l + 1) if _close(omega[m - 1] ** 2, anchor)]
    dt = [delta[m - 1] if m in set_m else 0.0 for m in range(1, l + 1)]
    if g.family is Family.SO_ODD:
        padded = [dt[0]] + dt + [0.0]
    else:
        padded = [0.0] + dt + [dt[l - 2] if l >= 2 else 0.0]
    v = [2 * padded[m] ** 2 - padded[m + 1] ** 2 - padded[m - 1] ** 2 for m in range(1, l + 1)]
    return OmegaV(omega, v, set_m)


# -- traces -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    label: str
    matrix: np.ndarray = field(repr=False)
    # closed-form prediction attached to this step, when there is one
    coefficient: float | None = None


@dataclass(frozen=True)
class DescentTrace:
    kind: str
    steps: tuple[TraceStep, ...]
    target: str = ""
    predicted: float | None = None
    measured: float | None = None
    parallel_residual: float | None = None
    checks: dict = field(default_factory=dict)

    @property
    def relative_error(self) -> float:
        if self.predicted is None or self.measured is None:
            return math.nan
        return abs(self.measured - self.predicted) / max(abs(self.predicted), 1e-300)

    def matrices(self) -> list[np.ndarray]:
        return [s.matrix for s in self.steps]

    def summary(self) -> dict:
        """Matrix-free view used in reports."""
        out = {
            "kind": self.kind,
            "target": self.target,
            "steps": [
                {"label": s.label, "coefficient": s.coefficient} for s in self.steps
            ],
        }
        if self.predicted is not None:
            out.update(
                predicted=self.predicted,
                measured=self.measured,
                relative_error=self.relative_error,
                parallel_residual=self.parallel_residual,
            )
        if self.checks:
            out["checks"] = dict(self.checks)
        return out


def _finish(kind, steps, target_name, target, predicted, checks=None, final=None) -> DescentTrace:
    measured, resid = _coefficient(target, steps[-1].matrix if final is None else final)
    return DescentTrace(kind, tuple(steps), target_name, predicted, measured, resid, checks or {})


# -- hypothesis checks --------------------------------------------------------

def _thm_spectral(g: GenericCartanSystem, ov: OmegaV) -> bool:
    """omega**2 of every non-anchor slot differs from the anchor's."""
    if g.family is Family.SO_ODD:
        others, anchor = ov.omega[1:], ov.omega[0]
    else:
        others, anchor = ov.omega[:-1], ov.omega[-1]
    return all(not _close(w * w, anchor * anchor) for w in others)


def _monotone_ok(g: GenericCartanSystem) -> bool:
    e = g.eps
    if g.family is Family.SO_ODD:
        inc = all(0 <= a <= b for a, b in zip(e, e[1:])) and e[0] >= 0
        dec = all(0 >= a >= b for a, b in zip(e, e[1:])) and e[0] <= 0
        return inc or dec
    return all(a <= b <= 0 for a, b in zip(e, e[1:])) and e[-1] <= 0


def _thm_dipole(g: GenericCartanSystem, ov: OmegaV) -> tuple[bool, dict]:
    l = g.rank
    if g.family is Family.SO_ODD:
        anchor = 1
        signs = all(_close(ov.omega[m - 1], ov.omega[0]) for m in ov.set_m)
    else:
        anchor = l
        signs = all(_close(ov.omega[m - 1], -ov.omega[-1]) for m in ov.set_m if m != l)
    others = [m for m in ov.set_m if m != anchor]
    va = ov.v[anchor - 1]
    scale = max(max(abs(x) for x in ov.v), max(d * d for d in g.delta))
    distinct = all(abs(ov.v[m - 1] - va) > MATCH_TOL * scale for m in others)
    mono = _monotone_ok(g)
    details = {"monotone": mono, "sign_condition": signs, "v_distinct": distinct}
    return mono and signs and distinct, details


def _thm_uniform(g: GenericCartanSystem) -> bool:
    e, d = g.eps, g.delta
    if not _all_nonzero(e) or not _all_nonzero(d):
        return False
    if not all(_close(x, d[0]) for x in d):
        return False
    if g.family is Family.SO_ODD:
        return all(_close(e[m - 1], m * e[0]) for m in range(1, g.rank + 1))
    c = -2 * e[-1]
    return all(_close(b - a, c) for a, b in zip(e, e[1:]))


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise HypothesisError(msg)


# -- descents -----------------------------------------------------------------

def descent_b1(g: GenericCartanSystem) -> DescentTrace:
    """Isolate ``y_1`` of so(2l+1) when no omega_m**2 matches omega_0**2.

    ``V0 = [[iH0', iH1], iH0']`` and ``V_k = [[iH0', V_{k-1}], iH0'] -
    omega_{l-k}**2 V_{k-1}``; each step kills one ladder component, leaving
    ``delta_1 omega_0**2 prod_{m>=1} (omega_0**2 - omega_m**2) y_1``.
    """
    _require(g.family is Family.SO_ODD, "descent_b1 needs an SO_ODD system")
    ov = omega_v_sequences(g)
    _require(_all_nonzero(g.eps) and _all_nonzero(g.delta), "eps and delta must be nonzero")
    _require(_thm_spectral(g, ov), "some omega_m**2 equals omega_0**2")
    h0, h1 = g.generators()
    w = ov.omega
    pred = g.delta[0] * w[0] ** 2
    v = _bracket2(h0, h1)
    steps = [TraceStep("V0", v, pred)]
    for k in range(1, g.rank):
        s = w[g.rank - k] ** 2
        v = _bracket2(h0, v) - s * v
        pred *= w[0] ** 2 - s
        steps.append(TraceStep(f"V{k}", v, pred))
    return _finish("B1", steps, "y1", g.table.y(1), pred)


def descent_c1(g: GenericCartanSystem) -> DescentTrace:
    """Isolate ``y_l`` of sp(l) when no omega_m**2 (m < l) matches omega_l**2.

    Starts from ``V0 = iH1`` and applies ``V_k = [[iH0', V_{k-1}], iH0'] -
    omega_k**2 V_{k-1}`` for k = 1..l-1, leaving ``delta_l prod (omega_l**2 -
    omega_m**2) y_l``.
    """
    _require(g.family is Family.SP, "descent_c1 needs an SP system")
    ov = omega_v_sequences(g)
    _require(_all_nonzero(g.eps) and _all_nonzero(g.delta), "eps and delta must be nonzero")
    _require(_thm_spectral(g, ov), "some omega_m**2 equals omega_l**2")
    h0, h1 = g.generators()
    w = ov.omega
    l = g.rank
    pred = g.delta[-1]
    v = h1
    steps = [TraceStep("V0", v, pred)]
    for k in range(1, l):
        s = w[k - 1] ** 2
        v = _bracket2(h0, v) - s * v
        pred *= w[-1] ** 2 - s
        steps.append(TraceStep(f"V{k}", v, pred))
    return _finish("C1", steps, f"y{l}", g.table.y(l), pred)


def _residual_term(g: GenericCartanSystem, ov: OmegaV, h0, h1):
    """Project ``iH1`` onto the ladder slots in M by polynomial filtering in
    ``ad(iH0')**2``; returns Y0 and the filtering steps."""
    idx = 0 if g.family is Family.SO_ODD else -1
    anchor = ov.omega[idx] ** 2
    squares = []
    for m in range(1, g.rank + 1):
        s = ov.omega[m - 1] ** 2
        if m not in ov.set_m and not any(_close(s, t) for t in squares):
            squares.append(s)
    v, scale, steps = h1, 1.0, []
    for k, s in enumerate(squares, 1):
        v = _bracket2(h0, v) - s * v
        scale *= anchor - s
        steps.append(TraceStep(f"F{k}", v, scale))
    return v / scale, steps


def _ladder_descent(g, ov, kind, anchor, x0_scale, others):
    h0, h1 = g.generators()
    t = g.table
    y0, steps = _residual_term(g, ov, h0, h1)
    dt = [g.delta[m - 1] if m in ov.set_m else 0.0 for m in range(1, g.rank + 1)]
    steps.append(TraceStep("Y0", y0, dt[anchor - 1]))
    x0 = commutator(h0, y0) / x0_scale
    steps.append(TraceStep("X0", x0, dt[anchor - 1]))
    z = 0.5 * commutator(x0, y0)
    steps.append(TraceStep("Z", z))
    # Z is diagonal: sum (dt_{m+1}^2 - dt_m^2) h_m (odd) or (dt_{m-1}^2 - dt_m^2) h_m (even)
    if g.family is Family.SO_ODD:
        zc = [(dt[m] ** 2 if m < g.rank else 0.0) - dt[m - 1] ** 2 for m in range(1, g.rank + 1)]
    else:
        zc = [(dt[m - 2] ** 2 if m > 1 else 0.0) - dt[m - 1] ** 2 for m in range(1, g.rank + 1)]
    z_expected = sum(c * t.h(m) for m, c in enumerate(zc, 1))
    checks = {"Z_residual": float(np.linalg.norm(z - z_expected))}
    pred = dt[anchor - 1]
    va = ov.v[anchor - 1]
    yk, xk = y0, x0
    for k, m in enumerate(others, 1):
        vm = ov.v[m - 1]
        yk, xk = commutator(z, xk) - vm * yk, commutator(yk, z) - vm * xk
        pred *= va - vm
        steps.append(TraceStep(f"X{k}", xk, pred))
        steps.append(TraceStep(f"Y{k}", yk, pred))
    return _finish(kind, steps, f"y{anchor}", t.y(anchor), pred, checks, final=yk)


def descent_b2(g: GenericCartanSystem) -> DescentTrace:
    """Isolate ``y_1`` using dipole curvature when omega's coincide.

    ``Y0`` keeps only the ladder terms in M, ``X0 = omega_0^-1 [iH0', Y0]``,
    ``Z = [X0, Y0] / 2`` and then, for the members ``m_1 < .. < m_k`` of
    ``M - {1}`` taken from the top, ``Y_j = [Z, X_{j-1}] - v_m Y_{j-1}`` and
    ``X_j = [Y_{j-1}, Z] - v_m X_{j-1}``.  The final ``Y`` equals
    ``dt_1 prod (v_1 - v_m) y_1``.
    """
    _require(g.family is Family.SO_ODD, "descent_b2 needs an SO_ODD system")
    _require(_all_nonzero(g.eps) and _all_nonzero(g.delta), "eps and delta must be nonzero")
    ov = omega_v_sequences(g)
    ok, details = _thm_dipole(g, ov)
    _require(ok, f"dipole criterion does not hold: {details}")
    others = sorted((m for m in ov.set_m if m != 1), reverse=True)
    return _ladder_descent(g, ov, "B2", 1, ov.omega[0], others)


def descent_c2(g: GenericCartanSystem) -> DescentTrace:
    """sp(l) analogue of :func:`descent_b2`, isolating ``y_l``.

    Here ``X0 = omega_l^-1 [iH0', Y0]`` and the members of ``M - {l}`` are
    consumed from the bottom; the final ``Y`` equals
    ``dt_l prod (v_l - v_m) y_l``.
    """
    _require(g.family is Family.SP, "descent_c2 needs an SP system")
    _require(_all_nonzero(g.eps) and _all_nonzero(g.delta), "eps and delta must be nonzero")
    ov = omega_v_sequences(g)
    ok, details = _thm_dipole(g, ov)
    _require(ok, f"dipole criterion does not hold: {details}")
    others = sorted(m for m in ov.set_m if m != g.rank)
    return _ladder_descent(g, ov, "C2", g.rank, ov.omega[-1], others)


# -- full reconstructions -----------------------------------------------------

def _record(steps, checks, t: GeneratorTable, label: str, mat: np.ndarray, ref: np.ndarray):
    steps.append(TraceStep(label, mat, 1.0))
    checks[f"{label}_table"] = float(np.linalg.norm(mat - ref))


def uniform_reconstruct(g: GenericCartanSystem) -> DescentTrace:
    """Recover every h_m, x_m, y_m from equally spaced levels and uniform dipoles.

    so(2l+1) (``eps_m = m eps_1``): with ``Y = iH1 / delta`` and
    ``X = [iH0', Y] / eps_1``, peel off the top index each round:
    ``h_j = -[X, Y]/2``, ``y_j = [X, h_j]``, ``x_j = [h_j, y_j] / a_j`` where
    ``a_1 = 1`` and ``a_j = -1`` otherwise.

    sp(l) (``eps_{m+1} - eps_m = -2 eps_l``): ``X = [iH0', Y] / (2 eps_l)`` and
    the bottom index is peeled off each round, dividing by ``a_j = 1`` for
    ``j < l`` and ``a_l = 2``.
    """
    _require(_thm_uniform(g), "levels are not equally spaced with uniform dipoles")
    h0, h1 = g.generators()
    t = g.table
    l = g.rank
    steps: list[TraceStep] = []
    checks: dict = {}
    y = h1 / g.delta[0]
    if g.family is Family.SO_ODD:
        x = commutator(h0, y) / g.eps[0]
        sign = {j: 1.0 if j == 1 else -1.0 for j in range(1, l + 1)}
        order = range(l, 0, -1)
        alpha = sign
    else:
        x = commutator(h0, y) / (2 * g.eps[-1])
        sign = {j: 1.0 for j in range(1, l + 1)}
        order = range(1, l + 1)
        alpha = {j: 2.0 if j == l else 1.0 for j in range(1, l + 1)}
    steps.append(TraceStep("Y1", y))
    steps.append(TraceStep("X1", x))
    if g.family is Family.SP:
        # the first X already isolates the combination sum_k x_k
        checks["X1_table"] = float(np.linalg.norm(x - sum(t.x(k) for k in range(1, l + 1))))
    for j in order:
        h = -0.5 * commutator(x, y)
        _record(steps, checks, t, f"h{j}", h, t.h(j))
        yj = commutator(x, h) / (alpha[j] if g.family is Family.SP else 1.0)
        _record(steps, checks, t, f"y{j}", yj, t.y(j))
        xj = commutator(h, yj) / alpha[j]
        _record(steps, checks, t, f"x{j}", xj, t.x(j))
        y = y - yj
        x = x - sign[j] * xj
    return DescentTrace("B3" if g.family is Family.SO_ODD else "C3", tuple(steps), checks=checks)


def lemma_reconstruct(
    g: GenericCartanSystem,
    seed: int | None = None,
    closure: ClosureResult | None = None,
) -> DescentTrace:
    """Generate the whole ladder/Cartan set from the anchor ``y`` generator.

    Starting from ``y_1`` (so(2l+1)) or ``y_l`` (sp(l)) and the two system
    generators, the bracket recursion produces every x_m, y_m and h_m.  Each
    produced element is checked for membership in ``closure`` (computed from
    ``iH0'`` and ``iH1`` when not given) and compared with the table.

    Raises:
        ValueError: ``seed`` is not the anchor index.
        HypothesisError: zero eps/delta, or the seed is not in the closure.
    """
    anchor = g.anchor
    if seed is not None and seed != anchor:
        raise ValueError(f"only the anchor generator y{anchor} is supported as a seed")
    _require(_all_nonzero(g.eps) and _all_nonzero(g.delta), "eps and delta must be nonzero")
    h0, h1 = g.generators()
    if closure is None:
        closure = lie_closure([h0, h1])
    t = g.table
    eps, dl, l = g.eps, g.delta, g.rank
    seed_ok, seed_res = membership(t.y(anchor), closure)
    if not seed_ok:
        raise HypothesisError(f"seed y{anchor} is not in the closure (residual {seed_res:.3g})")
    steps: list[TraceStep] = []
    checks: dict = {}

    def emit(label, mat, ref):
        _record(steps, checks, t, label, mat, ref)
        checks[f"{label}_member"] = membership(mat, closure)[1]

    ya = t.y(anchor)
    emit(f"y{anchor}", ya, ya)
    c01 = commutator(h0, h1)
    if g.family is Family.SO_ODD:
        xa = commutator(h0, ya) / eps[0]
        ha = -0.5 * commutator(xa, ya)
        emit("x1", xa, t.x(1))
        emit("h1", ha, t.h(1))
        z = h0 - eps[0] * ha
        y = h1 - dl[0] * ya
        x = -c01 + eps[0] * dl[0] * xa
        h_prev = ha
        for k in range(1, l):
            w = x + commutator(z, y)
            steps.append(TraceStep(f"W{k}", w, -eps[k - 1] * dl[k]))
            checks[f"W{k}_identity"] = float(np.linalg.norm(w + eps[k - 1] * dl[k] * t.x(k + 1)))
            xn = w / (-eps[k - 1] * dl[k])
            yn = commutator(z, xn) / eps[k]
            hn = h_prev + 0.5 * commutator(xn, yn)
            emit(f"x{k + 1}", xn, t.x(k + 1))
            emit(f"y{k + 1}", yn, t.y(k + 1))
            emit(f"h{k + 1}", hn, t.h(k + 1))
            z = z - eps[k] * hn
            y = y - dl[k] * yn
            x = x - (eps[k] - eps[k - 1]) * dl[k] * xn
            h_prev = hn
        kind = "LEMMA_B"
    else:
        xa = commutator(h0, ya) / (2 * eps[-1])
        ha = -0.5 * commutator(xa, ya)
        emit(f"x{l}", xa, t.x(l))
        emit(f"h{l}", ha, t.h(l))
        z = h0 - eps[-1] * ha
        y = h1 - dl[-1] * ya
        x = -c01 + 2 * eps[-1] * dl[-1] * xa
        h_prev = ha
        for k in range(1, l):
            j = l - k
            # eps[j] is eps_{j+1} in 1-based terms
            w = x + commutator(z, y)
            steps.append(TraceStep(f"W{k}", w, eps[j] * dl[j - 1]))
            checks[f"W{k}_identity"] = float(np.linalg.norm(w - eps[j] * dl[j - 1] * t.x(j)))
            xn = w / (eps[j] * dl[j - 1])
            yn = commutator(z, xn) / (-eps[j - 1])
            hn = h_prev - 0.5 * commutator(xn, yn)
            emit(f"x{j}", xn, t.x(j))
            emit(f"y{j}", yn, t.y(j))
            emit(f"h{j}", hn, t.h(j))
            z = z - eps[j - 1] * hn
            y = y - dl[j - 1] * yn
            x = x - (eps[j] - eps[j - 1]) * dl[j - 1] * xn
            h_prev = hn
        kind = "LEMMA_C"
    return DescentTrace(kind, tuple(steps), checks=checks)


# -- verdicts -----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    name: str
    applies: bool
    conclusion: str
    details: dict = field(default_factory=dict)
    witness: DescentTrace | None = None


@dataclass(frozen=True)
class SuiteVerdict:
    conclusion: str
    decided_by: str | None
    verdicts: tuple[Verdict, ...]

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


def algebra_name(family: Family, rank: int) -> str:
    """Conventional name; for SU the ``rank`` argument is N, as in the tables."""
    if family is Family.SO_ODD:
        return f"so({2 * rank + 1})"
    if family is Family.SP:
        return f"sp({rank})"
    if family is Family.SO_EVEN:
        return f"so({2 * rank})"
    return f"su({rank})"


def _suite(g: GenericCartanSystem, prefix: str, spectral, dipole) -> SuiteVerdict:
    name = algebra_name(g.family, g.rank)
    ov = omega_v_sequences(g)
    nonzero = _all_nonzero(g.eps) and _all_nonzero(g.delta)
    verdicts = []

    ok = nonzero and _thm_spectral(g, ov)
    verdicts.append(
        Verdict(f"{prefix}1", ok, name if ok else INCONCLUSIVE,
                {"nonzero": nonzero, "distinct_squares": _thm_spectral(g, ov)},
                spectral(g) if ok else None)
    )

    dip_ok, details = _thm_dipole(g, ov)
    ok = nonzero and dip_ok
    verdicts.append(
        Verdict(f"{prefix}2", ok, name if ok else INCONCLUSIVE,
                {"nonzero": nonzero, **details}, dipole(g) if ok else None)
    )

    ok = _thm_uniform(g)
    verdicts.append(
        Verdict(f"{prefix}3", ok, name if ok else INCONCLUSIVE,
                {"nonzero": nonzero, "uniform": ok}, uniform_reconstruct(g) if ok else None)
    )
    for v in verdicts:
        if v.applies:
            return SuiteVerdict(v.conclusion, v.name, tuple(verdicts))
    return SuiteVerdict(INCONCLUSIVE, None, tuple(verdicts))


def theorem_b_suite(g: GenericCartanSystem) -> SuiteVerdict:
    """so(2l+1) criteria in order: distinct frequencies, dipole curvature,
    uniform ladder.  The first one that applies decides."""
    if g.family is not Family.SO_ODD:
        raise ValueError("theorem_b_suite needs an SO_ODD system")
    return _suite(g, "B", descent_b1, descent_b2)


def theorem_c_suite(g: GenericCartanSystem) -> SuiteVerdict:
    """sp(l) counterpart of :func:`theorem_b_suite`."""
    if g.family is not Family.SP:
        raise ValueError("theorem_c_suite needs an SP system")
    return _suite(g, "C", descent_c1, descent_c2)


# -- su(N) --------------------------------------------------------------------

def _unique_nonzero(values, tol_scale: float) -> list[int]:
    """1-based indices p with values[p] nonzero and differing from all others."""
    out = []
    for p, a in enumerate(values, 1):
        if abs(a) <= tol_scale:
            continue
        if all(abs(a - b) > tol_scale for q, b in enumerate(values, 1) if q != p):
            out.append(p)
    return out


def theorem1_check(spec: SystemSpec) -> Verdict:
    """Sufficient conditions for the full su(N).

    Requires all dipoles nonzero and either (i) a gap ``mu_p`` that is nonzero
    and differs from every other gap, or (ii) uniform nonzero gaps with a
    curvature ``v_p = 2d_p^2 - d_{p+1}^2 - d_{p-1}^2`` (``d_0 = d_N = 0``)
    distinct from every other.  When ``p = N/2`` the dipoles must also break
    the mirror symmetry: ``d_{p-k} != +-d_{p+k}`` for some ``k``.

    The nonzero-level hypothesis is reported under both readings (energies
    and gaps); the conclusion uses the gap reading.
    """
    n = spec.n
    mu = transition_gaps(spec)
    d = spec.dipoles
    tol = spec.tolerance
    mu_scale = tol * max((abs(x) for x in mu), default=0.0)
    d_scale = max(abs(x) for x in d)
    dipoles_nonzero = _all_nonzero(d) and d_scale > 0
    energies_nonzero = all(e != 0 for e in spec.energies[: n - 1])
    gaps_nonzero = all(abs(x) > mu_scale for x in mu) and max(map(abs, mu)) > 0

    padded = (0.0,) + d + (0.0,)
    v = [2 * padded[m] ** 2 - padded[m + 1] ** 2 - padded[m - 1] ** 2 for m in range(1, n)]
    v_scale = tol * max(max(abs(x) for x in v), d_scale ** 2, 1e-300)

    def mirror_broken(p: int) -> bool:
        if 2 * p != n:
            return True
        for k in range(1, p):
            a, b = d[p - k - 1], d[p + k - 1]
            if abs(abs(a) - abs(b)) > tol * d_scale:
                return True
        return False

    crit_i = [p for p in _unique_nonzero(mu, mu_scale) if mirror_broken(p)]
    uniform = gaps_nonzero and all(abs(x - mu[0]) <= mu_scale for x in mu)
    crit_ii = []
    if uniform:
        crit_ii = [p for p in _unique_nonzero(v, v_scale) if mirror_broken(p)]
    applies = dipoles_nonzero and gaps_nonzero and bool(crit_i or crit_ii)
    details = {
        "dipoles_nonzero": dipoles_nonzero,
        "energies_nonzero": energies_nonzero,
        "gaps_nonzero": gaps_nonzero,
        "criterion_i": crit_i,
        "uniform_gaps": uniform,
        "v": v,
        "criterion_ii": crit_ii,
    }
    return Verdict("A", applies, f"su({n})" if applies else INCONCLUSIVE, details)


# -- physical systems ---------------------------------------------------------

NOTES = (
    "nonzero-level hypothesis of the su(N) criterion is evaluated on both energies "
    "and gaps; the conclusion uses gaps",
    "the sp dipole criterion requires omega_m = -omega_l on M, with omega_l = 2 eps_l",
    "the so(2l+1) dipole criterion is only applied to monotone sign-definite eps",
)


@dataclass(frozen=True)
class CriteriaReport:
    omega: list
    v: list
    set_m: list
    verdicts: dict
    conclusion: str
    symmetric: bool
    basis_map: BasisMap | None = None
    notes: tuple[str, ...] = NOTES

    @property
    def setM(self) -> list:
        return self.set_m


def criteria_report(spec: SystemSpec) -> CriteriaReport:
    """Run every applicable criterion on a physical system.

    The su(N) check always runs.  Systems with palindromic gaps and dipoles
    and no vanishing dipole are also mapped to so(2l+1)/sp(l) coordinates
    and passed through the matching suite.
    """
    first = theorem1_check(spec)
    verdicts = {first.name: first}
    symmetric = detect_symmetric_coupling(spec)
    omega, v, set_m, bm = [], [], [], None
    conclusion = first.conclusion
    if symmetric and spec.n >= 3 and not decomposability_flags(spec):
        bm = sigma_transform(spec)
        g = bm.generic()
        omega, v, set_m = omega_v_sequences(g)
        suite = (theorem_b_suite if g.family is Family.SO_ODD else theorem_c_suite)(g)
        for ver in suite.verdicts:
            verdicts[ver.name] = ver
        if conclusion == INCONCLUSIVE:
            conclusion = suite.conclusion
    return CriteriaReport(omega, v, set_m, verdicts, conclusion, symmetric, bm)
