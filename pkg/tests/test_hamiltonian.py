import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynlie.hamiltonian import (
    EnergyOrderError,
    LengthMismatchError,
    SystemSpec,
    SystemSpecError,
    build_h0,
    build_h0_prime,
    build_h1,
    decomposability_flags,
    detect_symmetric_coupling,
    parse_coupling,
    transition_gaps,
)
from dynlie.linalg import is_skew_hermitian


@pytest.mark.parametrize(
    "token, value",
    [
        (2, 2.0),
        (0.5, 0.5),
        ("1.25", 1.25),
        ("sqrt(3)", math.sqrt(3)),
        ("2*sqrt(2)", 2 * math.sqrt(2)),
        ("-sqrt(5)", -math.sqrt(5)),
        (" 0.5 * sqrt( 8 ) ", 0.5 * math.sqrt(8)),
    ],
)
def test_parse_coupling(token, value):
    assert parse_coupling(token) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("token", ["sqrt(-1)", "two", True, None, "sqrt(2)*3"])
def test_parse_coupling_rejects(token):
    with pytest.raises(SystemSpecError):
        parse_coupling(token)


def test_spec_validation():
    with pytest.raises(SystemSpecError):
        SystemSpec([1], [])
    with pytest.raises(LengthMismatchError):
        SystemSpec([1, 2, 3], [1])
    with pytest.raises(EnergyOrderError):
        SystemSpec([2, 1], [1])
    with pytest.raises(SystemSpecError):
        SystemSpec([1, 2], [math.inf])
    with pytest.raises(SystemSpecError):
        SystemSpec([1, 2], [1], tolerance=0)


def test_h0_examples():
    np.testing.assert_array_equal(build_h0(SystemSpec([0, 1], [1])), 1j * np.diag([0, 1]))
    np.testing.assert_array_equal(build_h0(SystemSpec(range(1, 8), [1] * 6)), 1j * np.diag(range(1, 8)))


@pytest.mark.parametrize(
    "energies, diag",
    [
        ([0, 1], [-0.5, 0.5]),
        (range(1, 8), range(-3, 4)),
        (range(1, 7), [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]),
    ],
)
def test_h0_prime_examples(energies, diag):
    e = list(energies)
    h = build_h0_prime(SystemSpec(e, [1] * (len(e) - 1)))
    np.testing.assert_allclose(h, 1j * np.diag(list(diag)), atol=1e-15)
    assert abs(np.trace(h)) <= 1e-12 * np.linalg.norm(h)


def test_h1_examples(seven_level):
    np.testing.assert_array_equal(build_h1(SystemSpec([0, 1], [1])), 1j * np.array([[0, 1], [1, 0]]))
    h = build_h1(seven_level)
    d = seven_level.dipoles
    np.testing.assert_array_equal(np.diag(h, 1), 1j * np.array(d))
    np.testing.assert_array_equal(np.diag(h, -1), 1j * np.array(d))
    split = build_h1(SystemSpec([0, 1, 2, 3], [1, 0, 1]))
    assert split[1, 2] == 0 and split[2, 1] == 0


def test_gaps():
    assert transition_gaps(SystemSpec([1, 2, 4, 7], [1, 1, 1])) == (1, 2, 3)
    assert transition_gaps(SystemSpec(range(1, 8), [1] * 6)) == (1,) * 6
    assert transition_gaps(SystemSpec([0, 0, 1], [1, 1])) == (0, 1)


def test_symmetry_detection(seven_level, six_level):
    assert detect_symmetric_coupling(seven_level)
    assert detect_symmetric_coupling(six_level)
    assert not detect_symmetric_coupling(SystemSpec([1, 2, 4, 7], [1, 1, 1]))
    assert not detect_symmetric_coupling(SystemSpec([0, 1, 2, 3], [1, 2, 3]))


def test_decomposability(seven_level):
    assert decomposability_flags(SystemSpec([0, 1, 2, 3], [1, 0, 1])) == [2]
    assert decomposability_flags(seven_level) == []
    assert decomposability_flags(SystemSpec([0, 1, 2], [0, 0])) == [1, 2]


levels = st.lists(st.floats(-50, 50), min_size=2, max_size=9).map(sorted)


@st.composite
def specs(draw):
    e = draw(levels)
    d = draw(st.lists(st.floats(-5, 5), min_size=len(e) - 1, max_size=len(e) - 1))
    return SystemSpec(e, d)


@given(specs())
def test_builders_are_skew_hermitian(spec):
    for h in (build_h0(spec), build_h0_prime(spec), build_h1(spec)):
        np.testing.assert_array_equal(h, -h.conj().T)
        assert is_skew_hermitian(h)


@given(specs())
def test_h0_prime_differs_by_identity(spec):
    diff = build_h0_prime(spec) - build_h0(spec)
    c = diff[0, 0]
    assert np.linalg.norm(diff - c * np.eye(spec.n)) <= 1e-12 * max(1.0, np.linalg.norm(diff))
    assert c.real == 0


@given(specs())
def test_h1_sparsity(spec):
    h = build_h1(spec)
    assert not np.any(np.diag(h))
    mask = np.abs(np.subtract.outer(np.arange(spec.n), np.arange(spec.n))) == 1
    assert not np.any(h[~mask])
    assert mask.sum() == 2 * (spec.n - 1)


@given(st.integers(2, 5), st.floats(0.1, 3), st.floats(-100, 100), st.lists(st.floats(0.1, 2), min_size=5, max_size=5))
def test_symmetry_invariant_under_energy_shift(l, mu, shift, half):
    n = 2 * l
    gaps = [mu * (1 + 0.1 * min(k, n - k)) for k in range(1, n)]
    e = np.concatenate([[0], np.cumsum(gaps)])
    d = [half[min(k, n - k) - 1] for k in range(1, n)]
    base = SystemSpec(e, d)
    shifted = SystemSpec(e + shift, d)
    assert detect_symmetric_coupling(base)
    assert detect_symmetric_coupling(shifted) == detect_symmetric_coupling(base)
