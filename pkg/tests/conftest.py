import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from dynlie import Family, GenericCartanSystem, SystemSpec  # noqa: E402

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

S2, S3, S5, S6 = (math.sqrt(k) for k in (2, 3, 5, 6))


@pytest.fixture
def seven_level():
    return SystemSpec(range(1, 8), [S3, S5, S6, S6, S5, S3])


@pytest.fixture
def six_level():
    return SystemSpec(range(1, 7), [S5, 2 * S2, 3, 2 * S2, S5])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_skew(rng, n, traceless=True):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = a - a.conj().T
    if traceless:
        a -= np.trace(a) / n * np.eye(n)
    return a


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / abs(np.diag(r)))


# magnitudes kept away from zero so that bracket chains stay well conditioned
magnitude = st.floats(0.5, 2.0)
signed = st.builds(lambda m, s: m if s else -m, magnitude, st.booleans())


def _separated(squares, gap=0.05):
    s = sorted(squares)
    return all(b - a > gap * max(b, 1.0) for a, b in zip(s, s[1:]))


@st.composite
def spectral_systems(draw, family, max_rank=4):
    """Generic systems whose omega**2 values are pairwise separated."""
    l = draw(st.integers(1, max_rank))
    eps = draw(st.lists(signed, min_size=l, max_size=l))
    delta = tuple(draw(st.lists(signed, min_size=l, max_size=l)))
    g = GenericCartanSystem(family, eps, delta)
    if family is Family.SO_ODD:
        w = [eps[0]] + [eps[m] - eps[m - 1] for m in range(1, l)]
    else:
        w = [eps[m] - eps[m - 1] for m in range(1, l)] + [2 * eps[-1]]
    squares = [x * x for x in w]
    assume(min(squares) > 0.05 and _separated(squares))
    return g


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
