"""Integer-entried generator bases of su(N), so(2l+1), sp(l) and so(2l).

Every element is a skew-Hermitian matrix built from the units ``e_{mn}``
through

    x_{a,b} = e_{ab} - e_{ba},    y_{a,b} = i (e_{ab} + e_{ba}),

so real and imaginary parts only ever take the values -1, 0, 1.  Labels use
1-based indices throughout.  Root vectors ``eps_m - eps_n`` and
``eps_m + eps_n`` are stored for ``m < n``; :func:`table_element` evaluates
the defining formula for any ``m != n`` as well, which is what the
commutation-rule catalogue needs.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np


class Family(str, enum.Enum):
    SU = "SU"
    SO_ODD = "SO_ODD"
    SP = "SP"
    SO_EVEN = "SO_EVEN"


class Root(str, enum.Enum):
    CARTAN = "CARTAN"  # h_m
    PAIR = "PAIR"  # su(N): x_{m,n}, y_{m,n}
    SINGLE = "SINGLE"  # eps_m
    DOUBLE = "DOUBLE"  # 2 eps_m
    PLUS = "PLUS"  # eps_m + eps_n
    MINUS = "MINUS"  # eps_m - eps_n


@dataclass(frozen=True, order=True)
class Label:
    part: str  # "h", "x" or "y"
    root: Root
    m: int
    n: int | None = None

    def __str__(self) -> str:
        if self.root is Root.CARTAN:
            return f"h{self.m}"
        if self.root is Root.PAIR:
            return f"{self.part}{self.m},{self.n}"
        if self.root is Root.SINGLE:
            return f"{self.part}[e{self.m}]"
        if self.root is Root.DOUBLE:
            return f"{self.part}[2e{self.m}]"
        sign = "+" if self.root is Root.PLUS else "-"
        return f"{self.part}[e{self.m}{sign}e{self.n}]"


def H(m: int) -> Label:
    return Label("h", Root.CARTAN, m)


def X(root: Root, m: int, n: int | None = None) -> Label:
    return Label("x", root, m, n)


def Y(root: Root, m: int, n: int | None = None) -> Label:
    return Label("y", root, m, n)


# -- integer primitives -------------------------------------------------------
# An exact element is a pair (re, im) of int64 arrays.

def _unit(size: int, a: int, b: int) -> np.ndarray:
    e = np.zeros((size, size), dtype=np.int64)
    e[a - 1, b - 1] = 1
    return e


def _x(size, a, b):
    z = np.zeros((size, size), dtype=np.int64)
    return _unit(size, a, b) - _unit(size, b, a), z


def _y(size, a, b):
    z = np.zeros((size, size), dtype=np.int64)
    return z, _unit(size, a, b) + _unit(size, b, a)


def _h(size, a, b):
    z = np.zeros((size, size), dtype=np.int64)
    return z, _unit(size, a, a) - _unit(size, b, b)


def _add(p, q, sign=1):
    return p[0] + sign * q[0], p[1] + sign * q[1]


def _part(part, size, a, b):
    return _x(size, a, b) if part == "x" else _y(size, a, b)


def exact_commutator(p, q):
    """Commutator of two Gaussian-integer matrices given as ``(re, im)``."""
    (ar, ai), (br, bi) = p, q
    re = ar @ br - ai @ bi - (br @ ar - bi @ ai)
    im = ar @ bi + ai @ br - (br @ ai + bi @ ar)
    return re, im


def to_complex(p) -> np.ndarray:
    return p[0].astype(complex) + 1j * p[1].astype(complex)


# -- defining formulas --------------------------------------------------------

def _size(family: Family, rank: int) -> int:
    if family is Family.SU:
        return rank
    return 2 * rank + 1 if family is Family.SO_ODD else 2 * rank


def _exact(family: Family, rank: int, label: Label):
    l = rank
    N = _size(family, rank)
    m, n, part = label.m, label.n, label.part

    if family is Family.SU:
        if label.root is Root.CARTAN:
            return _h(N, m, m + 1)
        return _part(part, N, m, n)

    if family is Family.SO_ODD:
        if label.root is Root.CARTAN:
            return _h(N, m + 1, m + l + 1)
        if label.root is Root.SINGLE:
            return _add(_part(part, N, 1, m + 1), _part(part, N, m + l + 1, 1), -1)
        if label.root is Root.PLUS:
            return _add(_part(part, N, m + l + 1, n + 1), _part(part, N, n + l + 1, m + 1), -1)
        if label.root is Root.MINUS:
            return _add(_part(part, N, n + 1, m + 1), _part(part, N, m + l + 1, n + l + 1), -1)

    if family is Family.SP:
        if label.root is Root.CARTAN:
            return _h(N, m, m + l)
        if label.root is Root.DOUBLE:
            return _part(part, N, m + l, m)
        if label.root is Root.PLUS:
            return _add(_part(part, N, m + l, n), _part(part, N, n + l, m))
        if label.root is Root.MINUS:
            return _add(_part(part, N, n, m), _part(part, N, m + l, n + l), -1)

    if family is Family.SO_EVEN:
        if label.root is Root.CARTAN:
            return _h(N, m, m + l)
        if label.root is Root.PLUS:
            return _add(_part(part, N, m + l, n), _part(part, N, n + l, m), -1)
        if label.root is Root.MINUS:
            return _add(_part(part, N, n, m), _part(part, N, m + l, n + l), -1)

    raise ValueError(f"label {label} does not belong to {family.value}")


def table_element(family: Family, rank: int, label: Label) -> np.ndarray:
    """Evaluate the defining formula for ``label`` (any ``m != n``)."""
    return to_complex(_exact(Family(family), rank, label))


# -- tables -------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorTable:
    family: Family
    rank: int
    elements: dict[Label, np.ndarray] = field(repr=False)
    cartan: tuple[Label, ...]
    ladder_x: tuple[Label, ...] = ()
    ladder_y: tuple[Label, ...] = ()

    @property
    def n(self) -> int:
        return _size(self.family, self.rank)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, label: Label) -> np.ndarray:
        return self.elements[label]

    def h(self, m: int) -> np.ndarray:
        return self.elements[self.cartan[m - 1]]

    def x(self, m: int) -> np.ndarray:
        return self.elements[self.ladder_x[m - 1]]

    def y(self, m: int) -> np.ndarray:
        return self.elements[self.ladder_y[m - 1]]

    def matrices(self) -> list[np.ndarray]:
        return list(self.elements.values())

    def exact(self, label: Label):
        return _exact(self.family, self.rank, label)


def _build(family: Family, rank: int, labels, cartan, lx=(), ly=()) -> GeneratorTable:
    elements = {}
    for lab in labels:
        mat = table_element(family, rank, lab)
        mat.setflags(write=False)
        elements[lab] = mat
    return GeneratorTable(family, rank, elements, tuple(cartan), tuple(lx), tuple(ly))


def _pairs(l):
    return [(m, n) for m in range(1, l + 1) for n in range(m + 1, l + 1)]


def su_basis(n: int) -> GeneratorTable:
    """x_{m,n}, y_{m,n} (m < n) and h_m; ``n**2 - 1`` elements."""
    if n < 2:
        raise ValueError("su(N) needs N >= 2")
    labels = []
    for a, b in _pairs(n):
        labels += [X(Root.PAIR, a, b), Y(Root.PAIR, a, b)]
    cartan = [H(m) for m in range(1, n)]
    return _build(Family.SU, n, labels + cartan, cartan)


def so_odd_basis(l: int) -> GeneratorTable:
    """so(2l+1) with ladder x_1 = x[e1], x_{m+1} = x[e_m - e_{m+1}]."""
    if l < 1:
        raise ValueError("so(2l+1) needs l >= 1")
    cartan = [H(m) for m in range(1, l + 1)]
    labels = list(cartan)
    for m in range(1, l + 1):
        labels += [X(Root.SINGLE, m), Y(Root.SINGLE, m)]
    for root in (Root.PLUS, Root.MINUS):
        for m, n in _pairs(l):
            labels += [X(root, m, n), Y(root, m, n)]
    lx = [X(Root.SINGLE, 1)] + [X(Root.MINUS, m, m + 1) for m in range(1, l)]
    ly = [Y(Root.SINGLE, 1)] + [Y(Root.MINUS, m, m + 1) for m in range(1, l)]
    return _build(Family.SO_ODD, l, labels, cartan, lx, ly)


def sp_basis(l: int) -> GeneratorTable:
    """sp(l) with ladder x_m = x[e_m - e_{m+1}] (m < l), x_l = x[2e_l]."""
    if l < 1:
        raise ValueError("sp(l) needs l >= 1")
    cartan = [H(m) for m in range(1, l + 1)]
    labels = list(cartan)
    for m in range(1, l + 1):
        labels += [X(Root.DOUBLE, m), Y(Root.DOUBLE, m)]
    for root in (Root.PLUS, Root.MINUS):
        for m, n in _pairs(l):
            labels += [X(root, m, n), Y(root, m, n)]
    lx = [X(Root.MINUS, m, m + 1) for m in range(1, l)] + [X(Root.DOUBLE, l)]
    ly = [Y(Root.MINUS, m, m + 1) for m in range(1, l)] + [Y(Root.DOUBLE, l)]
    return _build(Family.SP, l, labels, cartan, lx, ly)


def so_even_basis(l: int) -> GeneratorTable:
    """so(2l) with ladder x_m = x[e_m - e_{m+1}] (m < l), x_l = x[e_{l-1} + e_l]."""
    if l < 2:
        raise ValueError("so(2l) ladder needs l >= 2")
    cartan = [H(m) for m in range(1, l + 1)]
    labels = list(cartan)
    for root in (Root.PLUS, Root.MINUS):
        for m, n in _pairs(l):
            labels += [X(root, m, n), Y(root, m, n)]
    lx = [X(Root.MINUS, m, m + 1) for m in range(1, l)] + [X(Root.PLUS, l - 1, l)]
    ly = [Y(Root.MINUS, m, m + 1) for m in range(1, l)] + [Y(Root.PLUS, l - 1, l)]
    return _build(Family.SO_EVEN, l, labels, cartan, lx, ly)


_BUILDERS = {
    Family.SU: su_basis,
    Family.SO_ODD: so_odd_basis,
    Family.SP: sp_basis,
    Family.SO_EVEN: so_even_basis,
}


def build_table(family, rank: int) -> GeneratorTable:
    return _BUILDERS[Family(family)](rank)


def expected_dimension(family, rank: int) -> int:
    family = Family(family)
    if family is Family.SU:
        return rank * rank - 1
    if family is Family.SO_EVEN:
        return rank * (2 * rank - 1)
    return rank * (2 * rank + 1)


# -- commutation rules --------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    """``[lhs[0], lhs[1]] = sum(c * label)``, instantiated per ``(m, n)``.

    ``lhs`` and ``rhs`` are callables of ``(m, n)`` so one object covers every
    index pair.  ``conventional`` is False for the sign-corrected variants.
    """

    name: str
    lhs: object
    rhs: object
    pairwise: bool = True
    conventional: bool = True


def _rules_b(corrected: bool) -> list[Rule]:
    S, P, M_ = Root.SINGLE, Root.PLUS, Root.MINUS
    s = -1 if corrected else 1
    rules = [
        Rule("[x_em, x_(em-en)] = x_en",
             lambda m, n: (X(S, m), X(M_, m, n)), lambda m, n: {X(S, n): s},
             conventional=not corrected),
        Rule("[x_em, y_(em-en)] = y_en",
             lambda m, n: (X(S, m), Y(M_, m, n)), lambda m, n: {Y(S, n): 1}),
        Rule("[x_em, x_en] = x_(em-en) - x_(em+en)",
             lambda m, n: (X(S, m), X(S, n)), lambda m, n: {X(M_, m, n): 1, X(P, m, n): -1}),
        Rule("[x_em, y_en] = y_(em-en) + y_(em+en)",
             lambda m, n: (X(S, m), Y(S, n)), lambda m, n: {Y(M_, m, n): s, Y(P, m, n): s},
             conventional=not corrected),
        Rule("[x_em, y_em] = -2 h_m",
             lambda m, n: (X(S, m), Y(S, m)), lambda m, n: {H(m): -2}, pairwise=False),
    ]
    return rules + _rules_pm(P, M_)


def _rules_c(corrected: bool) -> list[Rule]:
    D, P, M_ = Root.DOUBLE, Root.PLUS, Root.MINUS
    rules = [
        Rule("[x_2en, x_(em-en)] = x_(em+en)",
             lambda m, n: (X(D, n), X(M_, m, n)), lambda m, n: {X(P, m, n): 1}),
        Rule("[x_2en, y_(em-en)] = y_(em+en)",
             lambda m, n: (X(D, n), Y(M_, m, n)), lambda m, n: {Y(P, m, n): 1}),
        Rule("[x_(em+en), x_(em-en)] = 2(x_2em - x_2en)",
             lambda m, n: (X(P, m, n), X(M_, m, n)), lambda m, n: {X(D, m): 2, X(D, n): -2}),
        Rule("[x_(em+en), y_(em-en)] = 2(y_2em + y_2en)",
             lambda m, n: (X(P, m, n), Y(M_, m, n)), lambda m, n: {Y(D, m): 2, Y(D, n): 2}),
        Rule("[x_2em, y_2em] = -2 h_m",
             lambda m, n: (X(D, m), Y(D, m)), lambda m, n: {H(m): -2}, pairwise=False),
    ]
    return rules + _rules_pm(P, M_)


def _rules_pm(P, M_) -> list[Rule]:
    out = []
    for root, sgn, tag in ((P, 1, "+"), (M_, -1, "-")):
        out += [
            Rule(f"[x_(em{tag}en), y_(em{tag}en)] = -2(h_m {tag} h_n)",
                 lambda m, n, r=root: (X(r, m, n), Y(r, m, n)),
                 lambda m, n, s=sgn: {H(m): -2, H(n): -2 * s}),
            Rule(f"[h_m, x_(em{tag}en)] = -y_(em{tag}en)",
                 lambda m, n, r=root: (H(m), X(r, m, n)),
                 lambda m, n, r=root: {Y(r, m, n): -1}),
            Rule(f"[h_m, y_(em{tag}en)] = x_(em{tag}en)",
                 lambda m, n, r=root: (H(m), Y(r, m, n)),
                 lambda m, n, r=root: {X(r, m, n): 1}),
        ]
    return out


def commutation_rules(family, corrected: bool = False) -> list[Rule]:
    """Rule catalogue for SO_ODD or SP.

    With ``corrected=False`` the identities take their conventional tabulated
    form.  For the so(2l+1) basis built here, ``[x_em, x_(em-en)]`` and
    ``[x_em, y_en]`` come out with the opposite overall sign;
    ``corrected=True`` uses the signs that actually hold.
    """
    family = Family(family)
    if family is Family.SO_ODD:
        return _rules_b(corrected)
    if family is Family.SP:
        return _rules_c(corrected)
    raise ValueError(f"no commutation rules catalogued for {family.value}")


@dataclass(frozen=True)
class RuleCheck:
    rule: str
    m: int
    n: int | None
    passed: bool


@dataclass(frozen=True)
class RuleReport:
    family: Family
    rank: int
    checks: tuple[RuleCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[RuleCheck]:
        return [c for c in self.checks if not c.passed]


def verify_commutation_rules(table: GeneratorTable, corrected: bool = False) -> RuleReport:
    """Check every instance of the rule catalogue with exact integer arithmetic.

    Pairwise rules run over all ordered pairs ``m != n``; the other rules over
    every ``m``.
    """
    rules = commutation_rules(table.family, corrected)
    l = table.rank
    checks = []
    for rule in rules:
        if rule.pairwise:
            instances = list(permutations(range(1, l + 1), 2))
        else:
            instances = [(m, None) for m in range(1, l + 1)]
        for m, n in instances:
            a, b = rule.lhs(m, n)
            lhs = exact_commutator(table.exact(a), table.exact(b))
            zero = np.zeros_like(lhs[0])
            rhs = (zero, zero)
            for lab, c in rule.rhs(m, n).items():
                t = table.exact(lab)
                rhs = (rhs[0] + c * t[0], rhs[1] + c * t[1])
            ok = np.array_equal(lhs[0], rhs[0]) and np.array_equal(lhs[1], rhs[1])
            checks.append(RuleCheck(rule.name, m, n, bool(ok)))
    return RuleReport(table.family, l, tuple(checks))


# -- so(2l) obstruction -------------------------------------------------------

def nn_entry_obstruction(l: int) -> tuple[int, int, bool]:
    """Why no nearest-neighbour 2l-level system can generate so(2l).

    ``required`` counts the nonzero entries of the l minimal generators y_m of
    so(2l); ``available`` is the number of off-diagonal slots a tridiagonal
    ``iH1`` can fill.  The last item says whether ``required <= available``.
    """
    if l < 2:
        raise ValueError("obstruction is stated for l >= 2")
    table = so_even_basis(l)
    required = sum(int(np.count_nonzero(table.y(m))) for m in range(1, l + 1))
    available = 2 * (2 * l - 1)
    return required, available, required <= available


# -- export -------------------------------------------------------------------

def table_to_json(table: GeneratorTable) -> list[dict]:
    out = []
    for lab, mat in table.elements.items():
        out.append(
            {
                "label": str(lab),
                "real_part": np.real(mat).astype(int).tolist(),
                "imag_part": np.imag(mat).astype(int).tolist(),
            }
        )
    return out


def dump_table(table: GeneratorTable, fp) -> None:
    json.dump(
        {"family": table.family.value, "rank": table.rank, "elements": table_to_json(table)},
        fp,
        indent=1,
    )
