"""Control Hamiltonians of an N-level ladder system.

A system is fixed by its energy levels ``E_1 <= ... <= E_N`` and the real
nearest-neighbour transition dipoles ``d_1 .. d_{N-1}``.  The builders return
the skew-Hermitian generators ``iH0``, ``iH0'`` (trace removed) and ``iH1``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL


class SystemSpecError(ValueError):
    """Invalid system description."""


class LengthMismatchError(SystemSpecError):
    pass


class EnergyOrderError(SystemSpecError):
    pass


_SQRT = re.compile(
    r"^\s*(?:(?P<coef>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*\s*)?"
    r"(?P<sign>[-+])?\s*sqrt\(\s*(?P<arg>\d+\.?\d*|\.\d+)\s*\)\s*$"
)


def parse_coupling(token) -> float:
    """Parse a dipole given as a number, ``"sqrt(k)"`` or ``"a*sqrt(k)"``.

    >>> parse_coupling("2*sqrt(2)") == 2 * math.sqrt(2)
    True
    """
    if isinstance(token, bool):
        raise SystemSpecError(f"invalid coupling {token!r}")
    if isinstance(token, (int, float)):
        return float(token)
    if not isinstance(token, str):
        raise SystemSpecError(f"invalid coupling {token!r}")
    m = _SQRT.match(token)
    if m:
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        return coef * math.sqrt(float(m.group("arg")))
    try:
        return float(token)
    except ValueError:
        raise SystemSpecError(f"cannot parse coupling {token!r}") from None


@dataclass(frozen=True)
class SystemSpec:
    energies: tuple[float, ...]
    dipoles: tuple[float, ...]
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        dipoles = tuple(parse_coupling(d) for d in self.dipoles)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipoles", dipoles)
        if len(energies) < 2:
            raise SystemSpecError("need at least two energy levels")
        if len(dipoles) != len(energies) - 1:
            raise LengthMismatchError(
                f"expected {len(energies) - 1} dipoles for {len(energies)} levels, "
                f"got {len(dipoles)}"
            )
        if not all(math.isfinite(v) for v in energies + dipoles):
            raise SystemSpecError("energies and dipoles must be finite")
        if any(b < a for a, b in zip(energies, energies[1:])):
            raise EnergyOrderError("energies must be non-decreasing")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise SystemSpecError("tolerance must be a positive number")

    @property
    def n(self) -> int:
        return len(self.energies)


def build_h0(spec: SystemSpec) -> np.ndarray:
    return np.diag(1j * np.asarray(spec.energies, dtype=complex))


def build_h0_prime(spec: SystemSpec) -> np.ndarray:
    e = np.asarray(spec.energies, dtype=float)
    return np.diag(1j * (e - e.mean()).astype(complex))


def build_h1(spec: SystemSpec) -> np.ndarray:
    n = spec.n
    h1 = np.zeros((n, n), dtype=complex)
    for k, d in enumerate(spec.dipoles):
        h1[k, k + 1] = h1[k + 1, k] = 1j * d
    return h1


def transition_gaps(spec: SystemSpec) -> tuple[float, ...]:
    """Transition frequencies ``mu_n = E_{n+1} - E_n``."""
    e = spec.energies
    return tuple(b - a for a, b in zip(e, e[1:]))


def _palindromic(values, tol: float) -> bool:
    scale = max((abs(v) for v in values), default=0.0)
    return all(
        abs(a - b) <= tol * scale for a, b in zip(values, reversed(values))
    )


def detect_symmetric_coupling(spec: SystemSpec) -> bool:
    """True when gaps and dipoles read the same backwards (``mu_n = mu_{N-n}``,
    ``d_n = d_{N-n}``), compared relative to the largest magnitude of each."""
    return _palindromic(transition_gaps(spec), spec.tolerance) and _palindromic(
        spec.dipoles, spec.tolerance
    )


def decomposability_flags(spec: SystemSpec) -> list[int]:
    """1-based indices of vanishing dipoles; the system splits at each one."""
    return [k for k, d in enumerate(spec.dipoles, start=1) if abs(d) <= spec.tolerance]
