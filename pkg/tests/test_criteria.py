import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import S2, S3, S5, S6, spectral_systems
from dynlie.closure import lie_closure, membership
from dynlie.criteria import (
    INCONCLUSIVE,
    GenericCartanSystem,
    HypothesisError,
    criteria_report,
    descent_b1,
    descent_b2,
    descent_c1,
    descent_c2,
    lemma_reconstruct,
    omega_v_sequences,
    sigma_transform,
    theorem1_check,
    theorem_b_suite,
    theorem_c_suite,
    uniform_reconstruct,
)
from dynlie.hamiltonian import SystemSpec, build_h0_prime, build_h1
from dynlie.tables import Family
from oracles import palindrome, relabel, spectral_product_even, spectral_product_odd

ODD, EVEN = Family.SO_ODD, Family.SP


def closure_dim(g):
    return lie_closure(list(g.generators())).dim


# -- basis maps ----------------------------------------------------------------

@pytest.mark.parametrize("fixture, eps, delta", [
    ("seven_level", (-1, -2, -3), (S6, S5, S3)),
    ("six_level", (-2.5, -1.5, -0.5), (S5, 2 * S2, 3)),
])
def test_sigma_transform_examples(request, fixture, eps, delta):
    spec = request.getfixturevalue(fixture)
    bm = sigma_transform(spec)
    np.testing.assert_allclose(bm.tilde_e, eps, atol=1e-12)
    np.testing.assert_allclose(bm.tilde_d, delta, atol=1e-12)
    assert bm.residual_h0 <= 1e-12 and bm.residual_h1 <= 1e-12
    h0, h1 = bm.generic().generators()
    np.testing.assert_allclose(bm.apply(build_h0_prime(spec)), h0, atol=1e-10)
    np.testing.assert_allclose(bm.apply(build_h1(spec)), h1, atol=1e-10)


def test_sigma_transform_three_levels():
    bm = sigma_transform(SystemSpec([0, 1, 2], [1, 1]))
    assert bm.tilde_e == (-1,) and bm.tilde_d == (1,)


def test_sigma_rejects_asymmetric_systems():
    with pytest.raises(ValueError):
        sigma_transform(SystemSpec([1, 2, 4, 7], [1, 1, 1]))


@pytest.mark.parametrize("n", range(3, 11))
def test_sigma_unitary_is_signed_permutation(n):
    half = [1 + 0.25 * k for k in range(n // 2)]
    gaps = [1 + 0.1 * min(k, n - k) for k in range(1, n)]
    spec = SystemSpec(np.concatenate([[0], np.cumsum(gaps)]), palindrome(half, n % 2 == 1))
    bm = sigma_transform(spec)
    u = bm.unitary
    assert np.all((np.abs(u) == 1).sum(0) == 1) and np.all((np.abs(u) == 1).sum(1) == 1)
    np.testing.assert_array_equal(u.conj().T @ u, np.eye(n))
    for a in (build_h0_prime(spec), build_h1(spec)):
        np.testing.assert_array_equal(bm.apply(a), relabel(a))


# -- omega / v -----------------------------------------------------------------

def test_omega_v_examples():
    ov = omega_v_sequences(GenericCartanSystem(ODD, (-1, -2, -3), (S6, S5, S3)))
    np.testing.assert_allclose(ov.omega, [-1, -1, -1])
    np.testing.assert_allclose(ov.v, [1, 1, 1], atol=1e-12)
    assert ov.set_m == [1, 2, 3]

    ov = omega_v_sequences(GenericCartanSystem(ODD, (-1, -3, -6), (0.3, 1.2, -2)))
    assert ov.omega == [-1, -2, -3] and ov.set_m == [1]

    ov = omega_v_sequences(GenericCartanSystem(EVEN, (-2.5, -1.5, -0.5), (S5, 2 * S2, 3)))
    np.testing.assert_allclose(ov.omega, [1, 1, -1])
    np.testing.assert_allclose(ov.v, [2, 2, 2], atol=1e-12)
    assert ov.set_m == [1, 2, 3]


@given(st.sampled_from([ODD, EVEN]), st.integers(1, 5), st.data())
def test_set_m_contains_anchor(family, l, data):
    eps = data.draw(st.lists(st.floats(-3, 3).filter(lambda x: abs(x) > 0.1), min_size=l, max_size=l))
    g = GenericCartanSystem(family, eps, [1.0] * l)
    ov = omega_v_sequences(g)
    assert g.anchor in ov.set_m


# -- su(N) ---------------------------------------------------------------------

def test_su_criterion_examples(seven_level):
    v = theorem1_check(SystemSpec([1, 2, 4, 7], [1, 1, 1]))
    # p = 2 = N/2 is excluded: the dipoles are mirror symmetric about the centre
    assert v.conclusion == "su(4)" and v.details["criterion_i"] == [1, 3]
    assert theorem1_check(SystemSpec([1, 2, 4, 7], [1, 1, 2])).details["criterion_i"] == [1, 2, 3]

    v = theorem1_check(seven_level)
    assert v.conclusion == INCONCLUSIVE and v.details["uniform_gaps"]
    np.testing.assert_allclose(v.details["v"], [1] * 6, atol=1e-12)

    v = theorem1_check(SystemSpec([0, 1, 2, 3], [1, 2, 1]))
    assert v.details["v"] == [-2, 6, -2]
    assert v.conclusion == INCONCLUSIVE and v.details["criterion_ii"] == []

    v = theorem1_check(SystemSpec([0, 1, 2, 3], [1, 2, 3]))
    assert v.details["criterion_ii"] == [3] and v.conclusion == "su(4)"


def test_su_criterion_records_both_readings():
    v = theorem1_check(SystemSpec([0, 1, 3, 6], [1, 1, 1]))
    assert v.details["energies_nonzero"] is False
    assert v.details["gaps_nonzero"] is True
    assert v.conclusion == "su(4)"
    v = theorem1_check(SystemSpec([0, 0, 1, 3], [1, 1, 1]))
    assert v.details["gaps_nonzero"] is False and v.conclusion == INCONCLUSIVE
    v = theorem1_check(SystemSpec([0, 1, 3, 6], [1, 0, 1]))
    assert v.conclusion == INCONCLUSIVE


@settings(max_examples=30)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_su_conclusion_implies_full_closure(n, seed):
    rng = np.random.default_rng(seed)
    spec = SystemSpec(np.cumsum(rng.uniform(0.3, 2, n)), rng.uniform(0.5, 2, n - 1))
    if theorem1_check(spec).conclusion != INCONCLUSIVE:
        assert lie_closure([build_h0_prime(spec), build_h1(spec)]).dim == n * n - 1


# -- suites --------------------------------------------------------------------

def test_suite_spectral_case():
    g = GenericCartanSystem(ODD, (-1, -3, -6), (1, 1, 1))
    res = theorem_b_suite(g)
    assert res.conclusion == "so(7)" and res.decided_by == "B1"
    assert res["B1"].witness is not None
    assert closure_dim(g) == 21


@pytest.mark.parametrize("l", [2, 3])
def test_suite_dipole_pattern_odd(l):
    n = 2 * l + 1
    spec = SystemSpec(range(n), palindrome([math.sqrt(m) for m in range(1, l + 1)], True))
    g = sigma_transform(spec).generic()
    res = theorem_b_suite(g)
    assert res.decided_by == "B2" and res.conclusion == f"so({n})"
    ov = omega_v_sequences(g)
    np.testing.assert_allclose(ov.v, [1] + [0] * (l - 1), atol=1e-12)


@pytest.mark.parametrize("l", [2, 3])
def test_suite_dipole_pattern_even(l):
    spec = SystemSpec(range(2 * l), palindrome([math.sqrt(m) for m in range(1, l + 1)], False))
    g = sigma_transform(spec).generic()
    res = theorem_c_suite(g)
    assert res.decided_by == "C2" and res.conclusion == f"sp({l})"
    np.testing.assert_allclose(omega_v_sequences(g).v, [0] * (l - 1) + [2], atol=1e-12)


def test_suites_inconclusive_on_symmetric_examples(seven_level, six_level):
    for spec in (seven_level, six_level):
        rep = criteria_report(spec)
        assert rep.conclusion == INCONCLUSIVE
        assert not any(v.applies for v in rep.verdicts.values())
        assert lie_closure([build_h0_prime(spec), build_h1(spec)]).dim == 3


def test_suite_family_mismatch():
    with pytest.raises(ValueError):
        theorem_b_suite(GenericCartanSystem(EVEN, (1,), (1,)))
    with pytest.raises(ValueError):
        theorem_c_suite(GenericCartanSystem(ODD, (1,), (1,)))


def test_dipole_criterion_needs_monotone_levels():
    # uniform omega but eps changes sign: the dipole criterion is not applied
    g = GenericCartanSystem(ODD, (1, 0.0, -1), (1, S2, S3))
    assert not theorem_b_suite(g)["B2"].applies


# -- descents ------------------------------------------------------------------

def test_descent_b1_example():
    g = GenericCartanSystem(ODD, (-1, -3, -6), (1, 1, 1))
    t = descent_b1(g)
    assert t.predicted == spectral_product_odd(g.eps, g.delta) == 24
    assert t.measured == pytest.approx(24, rel=1e-12)
    assert t.parallel_residual < 1e-10
    assert [s.label for s in t.steps] == ["V0", "V1", "V2"]


def test_descent_b1_rank_one():
    g = GenericCartanSystem(ODD, (-2,), (0.5,))
    t = descent_b1(g)
    assert len(t.steps) == 1 and t.predicted == 0.5 * 4 == pytest.approx(t.measured)


def test_descent_c1_rejects_equal_squares():
    with pytest.raises(HypothesisError):
        descent_c1(GenericCartanSystem(EVEN, (-3, -1), (1, 1)))
    with pytest.raises(HypothesisError):
        descent_b1(GenericCartanSystem(EVEN, (-3, -1), (1, 1)))


def test_descent_b2_sqrt_pattern():
    for l in (2, 3, 4):
        spec = SystemSpec(range(2 * l + 1), palindrome([math.sqrt(m) for m in range(1, l + 1)], True))
        g = sigma_transform(spec).generic()
        t = descent_b2(g)
        # v_1 = 1 and v_m = 0 otherwise, so each ladder step multiplies by 1
        assert t.predicted == pytest.approx(g.delta[0])
        assert t.relative_error < 1e-6 and t.parallel_residual < 1e-9
        assert t.checks["Z_residual"] < 1e-10


def test_descent_c2_sqrt_pattern():
    for l in (2, 3, 4):
        spec = SystemSpec(range(2 * l), palindrome([math.sqrt(m) for m in range(1, l + 1)], False))
        g = sigma_transform(spec).generic()
        t = descent_c2(g)
        assert t.predicted == pytest.approx(g.delta[-1] * 2 ** (l - 1))
        assert t.relative_error < 1e-6 and t.parallel_residual < 1e-9


def test_descent_b2_with_anchor_only():
    g = GenericCartanSystem(ODD, (1, 3, 6), (0.7, 1.1, 1.3))
    t = descent_b2(g)
    assert not any(s.label.startswith(("X1", "Y1")) for s in t.steps)
    assert t.relative_error < 1e-12 and t.parallel_residual < 1e-12


def test_descent_b2_rejects_equal_curvature(seven_level):
    with pytest.raises(HypothesisError):
        descent_b2(sigma_transform(seven_level).generic())


# -- reconstructions -----------------------------------------------------------

def test_uniform_reconstruct_odd():
    g = GenericCartanSystem(ODD, (-1, -2), (1, 1))
    t = uniform_reconstruct(g)
    produced = [s.label for s in t.steps if s.label[0] in "hxy" and s.label[1:].isdigit()]
    assert sorted(produced) == ["h1", "h2", "x1", "x2", "y1", "y2"]
    assert max(t.checks.values()) <= 1e-10


def test_uniform_reconstruct_even():
    g = GenericCartanSystem(EVEN, (-1.5, -0.5), (0.8, 0.8))
    t = uniform_reconstruct(g)
    assert max(t.checks.values()) <= 1e-10
    # the first X is the sum of the designated x_m, not x_l alone
    assert t.checks["X1_table"] <= 1e-12


def test_uniform_reconstruct_rank_one_and_errors():
    t = uniform_reconstruct(GenericCartanSystem(ODD, (2.0,), (0.3,)))
    assert {s.label for s in t.steps} >= {"h1", "x1", "y1"}
    assert max(t.checks.values()) <= 1e-10
    with pytest.raises(HypothesisError):
        uniform_reconstruct(GenericCartanSystem(ODD, (-1, -3), (1, 1)))
    with pytest.raises(HypothesisError):
        uniform_reconstruct(GenericCartanSystem(EVEN, (-1.5, -0.5), (1, 2)))


@pytest.mark.parametrize("family, l", [(ODD, l) for l in (1, 2, 3, 4)] + [(EVEN, l) for l in (1, 2, 3, 4)])
def test_uniform_reconstruct_physical(family, l):
    n = 2 * l + 1 if family is ODD else 2 * l
    g = sigma_transform(SystemSpec(range(n), [1.0] * (n - 1))).generic()
    t = uniform_reconstruct(g)
    assert max(t.checks.values()) <= 1e-10


def test_lemma_odd_generic():
    g = GenericCartanSystem(ODD, (-1, -3, -6), (0.9, -1.3, 0.6))
    t = lemma_reconstruct(g)
    members = [k for k in t.checks if k.endswith("_member")]
    assert len(members) == 9
    assert max(t.checks[k] for k in members) <= 1e-8
    assert max(v for k, v in t.checks.items() if k.endswith("_table")) <= 1e-10
    # step identity X1 + [Z1, Y1] = -eps_1 delta_2 x_2
    assert t.checks["W1_identity"] <= 1e-10


def test_lemma_even_step_identity():
    g = GenericCartanSystem(EVEN, (-2, -0.5, 1.5), (1.1, 0.7, -0.9))
    t = lemma_reconstruct(g)
    assert t.checks["W1_identity"] <= 1e-10
    w1 = next(s for s in t.steps if s.label == "W1")
    assert w1.coefficient == g.eps[2] * g.delta[1]
    assert max(v for k, v in t.checks.items() if k.endswith("_member")) <= 1e-8


def test_lemma_seed_errors(seven_level):
    with pytest.raises(ValueError):
        lemma_reconstruct(GenericCartanSystem(ODD, (-1, -3), (1, 1)), seed=2)
    with pytest.raises(HypothesisError):
        lemma_reconstruct(sigma_transform(seven_level).generic())


# -- properties ----------------------------------------------------------------

def _check_witness_membership(g, trace):
    closure = lie_closure(list(g.generators()))
    for step in trace.steps:
        e = step.matrix
        _, residual = membership(e, closure)
        assert residual <= 1e-8 * max(1.0, np.linalg.norm(e))


@settings(max_examples=25)
@given(spectral_systems(ODD))
def test_spectral_descent_odd(g):
    t = descent_b1(g)
    pred = spectral_product_odd(g.eps, g.delta)
    assert t.predicted == pytest.approx(pred, rel=1e-12)
    assert t.relative_error <= 1e-6
    assert t.parallel_residual <= 1e-8 * max(1.0, abs(pred))
    _check_witness_membership(g, t)
    assert theorem_b_suite(g).conclusion == f"so({2 * g.rank + 1})"
    assert closure_dim(g) == g.rank * (2 * g.rank + 1)


@settings(max_examples=25)
@given(spectral_systems(EVEN))
def test_spectral_descent_even(g):
    t = descent_c1(g)
    pred = spectral_product_even(g.eps, g.delta)
    assert t.predicted == pytest.approx(pred, rel=1e-12)
    assert t.relative_error <= 1e-6
    _check_witness_membership(g, t)
    assert theorem_c_suite(g).conclusion == f"sp({g.rank})"
    assert closure_dim(g) == g.rank * (2 * g.rank + 1)


@settings(max_examples=15)
@given(st.sampled_from([ODD, EVEN]).flatmap(spectral_systems))
def test_lemma_members(g):
    t = lemma_reconstruct(g)
    assert max(v for k, v in t.checks.items() if k.endswith("_member")) <= 1e-8
    assert max(v for k, v in t.checks.items() if k.endswith("_table")) <= 1e-8


def test_seven_level_bracket_in_table_basis(seven_level):
    from dynlie.linalg import commutator
    from dynlie.tables import build_table

    bm = sigma_transform(seven_level)
    t = build_table(ODD, 3)
    got = bm.apply(commutator(build_h0_prime(seven_level), build_h1(seven_level)))
    want = -S6 * t.x(1) + S5 * t.x(2) + S3 * t.x(3)
    np.testing.assert_allclose(got, want, atol=1e-10)
