"""Build, close, test and classify one system, and serialise the outcome.

Reports are plain nested dicts with a fixed key order, so ``json.dumps`` of
the same input always yields the same bytes:

    input, spec, n, symmetric, gaps, decomposable_at,
    closure   {dim, converged, brackets_evaluated, reached_max_dim[, basis]},
    classification {family, name, container, dim, ambient, form},
    criteria  {conclusion, omega, v, set_m, basis_map, verdicts, notes},
    tables    {family, rank, labels}          (only when requested)

Matrices appear only with ``full=True``, as ``{"real": .., "imag": ..}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classifier import Classification, classify
from .closure import ClosureResult, lie_closure
from .criteria import CriteriaReport, DescentTrace, criteria_report
from .hamiltonian import (
    SystemSpec,
    SystemSpecError,
    build_h0_prime,
    build_h1,
    decomposability_flags,
    detect_symmetric_coupling,
    transition_gaps,
)
from .tables import Family, build_table, dump_table

SECTIONS = frozenset({"closure", "criteria", "descents", "tables"})
DEFAULT_SECTIONS = frozenset({"closure", "criteria", "descents"})


class InputFormatError(SystemSpecError):
    """The input file is not valid JSON or does not follow the schema."""


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...] = ()
    tolerance: float | None = None
    max_dim: int | None = None
    format: str = "json"
    full: bool = False
    sections: frozenset = field(default=DEFAULT_SECTIONS)

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format {self.format!r}")
        unknown = set(self.sections) - SECTIONS
        if unknown:
            raise ValueError(f"unknown sections {sorted(unknown)}")


# -- input / output of systems -----------------------------------------------

def spec_from_dict(data, tolerance: float | None = None) -> SystemSpec:
    if not isinstance(data, dict):
        raise InputFormatError("system description must be a JSON object")
    missing = {"energies", "dipoles"} - data.keys()
    if missing:
        raise InputFormatError(f"missing keys: {sorted(missing)}")
    energies, dipoles = data["energies"], data["dipoles"]
    if not isinstance(energies, list) or not isinstance(dipoles, list):
        raise InputFormatError("energies and dipoles must be arrays")
    if any(isinstance(e, bool) or not isinstance(e, (int, float)) for e in energies):
        raise InputFormatError("energies must be numbers")
    tol = data.get("tolerance", 1e-9) if tolerance is None else tolerance
    if isinstance(tol, bool) or not isinstance(tol, (int, float)):
        raise InputFormatError("tolerance must be a number")
    return SystemSpec(tuple(energies), tuple(dipoles), float(tol))


def parse_system_file(path, tolerance: float | None = None) -> SystemSpec:
    """Read a ``{"energies": [...], "dipoles": [...], "tolerance": t}`` file.

    Dipoles may be numbers or strings such as ``"sqrt(3)"`` / ``"2*sqrt(2)"``.

    Raises:
        InputFormatError: unreadable file, invalid JSON or wrong schema.
        LengthMismatchError, EnergyOrderError, SystemSpecError: invalid values.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc})") from exc
    return spec_from_dict(data, tolerance)


def system_to_dict(spec: SystemSpec) -> dict:
    return {
        "energies": list(spec.energies),
        "dipoles": list(spec.dipoles),
        "tolerance": spec.tolerance,
    }


def emit_system(spec: SystemSpec, path) -> None:
    Path(path).write_text(json.dumps(system_to_dict(spec)) + "\n", encoding="utf-8")


def emit_tables(family, rank: int, path) -> None:
    """Write the labelled integer generator table of ``family`` to ``path``."""
    table = build_table(Family(family), rank)
    with open(path, "w", encoding="utf-8") as fp:
        dump_table(table, fp)
        fp.write("\n")


# -- serialisation helpers ----------------------------------------------------

def _matrix(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"real": np.real(a).tolist(), "imag": np.imag(a).tolist()}


def _plain(obj):
    """Turn numpy scalars and tuples into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def closure_section(result: ClosureResult, full: bool = False) -> dict:
    out = {
        "dim": result.dim,
        "converged": result.converged,
        "brackets_evaluated": result.brackets_evaluated,
        "reached_max_dim": result.reached_max_dim,
    }
    if full:
        out["basis"] = [_matrix(b) for b in result.basis]
    return out


def classification_section(c: Classification, full: bool = False) -> dict:
    form = None
    if c.form is not None:
        form = {
            "symmetry": c.form.symmetry.value,
            "kernel_dim": c.form.kernel_dim,
            "symmetric_dim": c.form.symmetric_dim,
            "antisymmetric_dim": c.form.antisymmetric_dim,
        }
        if full:
            form["matrix"] = _matrix(c.form.matrix)
    return {
        "family": c.family.value,
        "name": c.name,
        "container": c.container,
        "dim": c.dim,
        "ambient": c.ambient,
        "form": form,
    }


def trace_section(trace: DescentTrace, full: bool = False) -> dict:
    out = _plain(trace.summary())
    if full:
        for step, mat in zip(out["steps"], trace.matrices()):
            step["matrix"] = _matrix(mat)
    return out


def criteria_section(rep: CriteriaReport, descents: bool = True, full: bool = False) -> dict:
    bm = None
    if rep.basis_map is not None:
        bm = {
            "direction": rep.basis_map.direction,
            "tilde_e": list(rep.basis_map.tilde_e),
            "tilde_d": list(rep.basis_map.tilde_d),
        }
        if full:
            bm["unitary"] = _matrix(rep.basis_map.unitary)
    verdicts = []
    for v in rep.verdicts.values():
        entry = {
            "name": v.name,
            "applies": v.applies,
            "conclusion": v.conclusion,
            "details": _plain(v.details),
        }
        if descents:
            entry["witness"] = trace_section(v.witness, full) if v.witness else None
        verdicts.append(entry)
    return {
        "conclusion": rep.conclusion,
        "omega": _plain(rep.omega),
        "v": _plain(rep.v),
        "set_m": list(rep.set_m),
        "basis_map": bm,
        "verdicts": verdicts,
        "notes": list(rep.notes),
    }


# -- pipeline -----------------------------------------------------------------

def run_pipeline(spec: SystemSpec, config: RunConfig | None = None, source: str | None = None) -> dict:
    """Full analysis of one system as a JSON-ready report dict."""
    config = config or RunConfig()
    sections = config.sections
    report = {
        "input": source,
        "spec": system_to_dict(spec),
        "n": spec.n,
        "symmetric": detect_symmetric_coupling(spec),
        "gaps": list(transition_gaps(spec)),
        "decomposable_at": decomposability_flags(spec),
    }
    if "closure" in sections:
        result = lie_closure(
            [build_h0_prime(spec), build_h1(spec)], spec.tolerance, config.max_dim
        )
        report["closure"] = closure_section(result, config.full)
        report["classification"] = classification_section(classify(result, spec), config.full)
    if "criteria" in sections:
        report["criteria"] = criteria_section(
            criteria_report(spec), "descents" in sections, config.full
        )
    if "tables" in sections and spec.n >= 3:
        family = Family.SO_ODD if spec.n % 2 else Family.SP
        table = build_table(family, spec.n // 2)
        report["tables"] = {
            "family": family.value,
            "rank": table.rank,
            "labels": [str(k) for k in table.elements],
        }
    return report


def to_json(report) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False)


def render_text(report: dict) -> str:
    """Human-readable summary of a report produced by :func:`run_pipeline`."""
    spec = report["spec"]
    lines = [f"system: {report['input'] or '<memory>'}  (N = {report['n']})"]
    lines.append(f"  energies: {spec['energies']}")
    lines.append(f"  dipoles:  {[round(d, 6) for d in spec['dipoles']]}")
    lines.append(f"  symmetric coupling: {report['symmetric']}")
    if report["decomposable_at"]:
        lines.append(f"  vanishing dipoles at: {report['decomposable_at']}")
    if "closure" in report:
        c, k = report["closure"], report["classification"]
        lines.append(f"  closure: dim {c['dim']} after {c['brackets_evaluated']} brackets")
        form = k["form"]
        ftxt = f"{form['symmetry'].lower()} form (kernel {form['kernel_dim']})" if form else "no invariant form"
        label = k["family"] if k["name"] == k["family"] else f"{k['family']} {k['name']}"
        lines.append(f"  classification: {label} (dim {k['dim']}) in {k['container']}, {ftxt}")
    if "criteria" in report:
        cr = report["criteria"]
        lines.append(f"  criteria: {cr['conclusion']}")
        if cr["basis_map"]:
            bm = cr["basis_map"]
            lines.append(f"    eps   = {[round(x, 6) for x in bm['tilde_e']]}")
            lines.append(f"    delta = {[round(x, 6) for x in bm['tilde_d']]}")
            lines.append(f"    omega = {[round(x, 6) for x in cr['omega']]}, M = {cr['set_m']}")
        for v in cr["verdicts"]:
            mark = "fires" if v["applies"] else "-"
            lines.append(f"    {v['name']:<3} {mark:<6} {v['conclusion']}")
            w = v.get("witness")
            if w and w.get("predicted") is not None:
                lines.append(
                    f"        {w['target']}: predicted {w['predicted']:.6g}, "
                    f"measured {w['measured']:.6g}"
                )
    if "tables" in report:
        t = report["tables"]
        lines.append(f"  table {t['family']} rank {t['rank']}: {len(t['labels'])} elements")
    return "\n".join(lines)
