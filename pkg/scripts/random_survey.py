"""Tally closure dimensions and criterion verdicts over random ladder systems.

Draws symmetric and generic systems for each N, closes them, classifies the
result and counts how often the sufficient criteria reach a conclusion and
whether that conclusion agrees with the closure.

    python3 scripts/random_survey.py --samples 40 --max-n 7 --seed 1
"""

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from dynlie.classifier import classify
from dynlie.closure import lie_closure
from dynlie.criteria import INCONCLUSIVE, criteria_report
from dynlie.hamiltonian import SystemSpec, build_h0_prime, build_h1


@dataclass
class SurveyConfig:
    samples: int = 40
    min_n: int = 3
    max_n: int = 7
    seed: int = 1
    symmetric_share: float = 0.5


def palindrome(half, odd):
    half = list(half)
    return half + half[::-1] if odd else half + half[-2::-1]


def draw_system(rng, n, symmetric):
    if symmetric:
        gaps = palindrome(rng.uniform(0.5, 2, n // 2), n % 2 == 1)
        dip = palindrome(rng.uniform(0.5, 2, n // 2), n % 2 == 1)
    else:
        gaps = rng.uniform(0.5, 2, n - 1)
        dip = rng.uniform(0.5, 2, n - 1)
    return SystemSpec(np.concatenate([[0.0], np.cumsum(gaps)]), dip)


def survey(cfg: SurveyConfig):
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in range(cfg.min_n, cfg.max_n + 1):
        families, concluded, disagreements = Counter(), 0, 0
        for _ in range(cfg.samples):
            spec = draw_system(rng, n, rng.random() < cfg.symmetric_share)
            c = classify(lie_closure([build_h0_prime(spec), build_h1(spec)]), spec)
            families[c.family.value] += 1
            verdict = criteria_report(spec).conclusion
            if verdict != INCONCLUSIVE:
                concluded += 1
                disagreements += verdict != c.name
        rows.append((n, dict(families), concluded, disagreements))
    return rows


def main():
    parser = argparse.ArgumentParser(description="random ladder-system survey")
    for name, value in vars(SurveyConfig()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    cfg = SurveyConfig(**vars(parser.parse_args()))
    for n, families, concluded, bad in survey(cfg):
        print(f"N={n}: {families}  criteria concluded {concluded}/{cfg.samples}, "
              f"disagreements {bad}")


if __name__ == "__main__":
    main()
