"""End-to-end analysis of a case: inventory, Gamma*, counts, paving verdicts,
golden comparison, and deterministic JSON / CSV / DOT emission."""

from __future__ import annotations

import csv
import difflib
import io
import json
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .cases import SCHEMA_VERSION, CaseId, get_case, good_reduction
from .cells import BLOWUP_U, check_affine_paving, verify_blowup_case
from .counting import DEFAULT_HOLDOUTS, DEFAULT_PRIMES, count_all, poincare_from_counts, required_samples, split_primes
from .exact import is_prime
from .goldens import COMPONENT_SIZES, DELTA_TABLE, GOLDEN_FILES, all_entries, component_table, delta_table
from .graph import GammaGraph, build_graph
from .subspaces import SubspaceParams, _raw_params, params_valid, support

CASE_IDS = tuple(c.value for c in CaseId)
CELL_PRIMES = (2, 3, 5, 7, 11)
BLOWUP_PRIMES = (2, 3, 5, 7)


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


@dataclass
class RunConfig:
    cases: tuple = CASE_IDS
    primes: tuple = DEFAULT_PRIMES
    holdouts: tuple = DEFAULT_HOLDOUTS
    seed: int = 0
    trials: int = 32
    out: Path | None = None
    golden: Path | None = None
    jobs: int = 1
    backend: str | None = None
    cell_primes: tuple = CELL_PRIMES

    def __post_init__(self):
        self.cases = tuple(self.cases)
        self.primes = tuple(sorted(self.primes))
        self.holdouts = tuple(sorted(self.holdouts))
        self.cell_primes = tuple(sorted(self.cell_primes))
        self.validate()

    def validate(self):
        for c in self.cases:
            if c not in CASE_IDS:
                raise ConfigError(f"unknown case {c!r}; expected one of {', '.join(CASE_IDS)}")
        for name, qs in (("primes", self.primes), ("holdout", self.holdouts), ("cell primes", self.cell_primes)):
            bad = [q for q in qs if not is_prime(q)]
            if bad:
                raise ConfigError(f"{name}: not prime: {bad}")
            if len(set(qs)) != len(qs):
                raise ConfigError(f"{name}: repeated values in {list(qs)}")
        if not self.primes:
            raise ConfigError("at least one prime is required")
        if set(self.primes) & set(self.holdouts):
            raise ConfigError(f"primes and holdouts overlap: {sorted(set(self.primes) & set(self.holdouts))}")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        if self.backend not in (None, "compiled", "numpy"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.out is not None:
            self.out = Path(self.out)
            try:
                self.out.mkdir(parents=True, exist_ok=True)
                with tempfile.TemporaryFile(dir=self.out):
                    pass
            except OSError as exc:
                raise ConfigError(f"output directory {self.out} is not writable: {exc.strerror}") from None
        if self.golden is not None:
            self.golden = Path(self.golden)
            if not self.golden.is_dir():
                raise ConfigError(f"golden directory {self.golden} does not exist")

    def to_dict(self) -> dict:
        return {
            "cases": list(self.cases),
            "primes": list(self.primes),
            "holdouts": list(self.holdouts),
            "cell_primes": list(self.cell_primes),
            "seed": self.seed,
            "trials": self.trials,
        }


# -- parameter lookup ------------------------------------------------------------

def resolve_params(case, text: str) -> SubspaceParams:
    """Parse a parameter tuple, or raise ConfigError naming the nearest valid ones."""
    case = get_case(case)
    try:
        return SubspaceParams.parse(case, text)
    except ValueError as exc:
        labels = sorted({p.label() for p in _raw_params(case) if params_valid(case, p)})
        key = text.replace(",", "").replace(" ", "")
        near = difflib.get_close_matches(key, labels, n=5, cutoff=0.5)
        hint = f"; nearest valid tuples: {', '.join(near)}" if near else ""
        raise ConfigError(f"{exc}{hint}") from None


# -- analysis --------------------------------------------------------------------

@dataclass
class UResult:
    params: SubspaceParams
    dim_u: int
    empty: bool
    dim_x: int | None
    delta: int | None
    component: int | None
    poincare: object
    classification: str
    cells: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "U": self.params.label(),
            "dim_U": self.dim_u,
            "empty": self.empty,
            "dim_X": self.dim_x,
            "delta": self.delta,
            "component": self.component,
            "classification": self.classification,
            "poincare": self.poincare.to_dict(),
            "cells": [r.to_dict() for r in self.cells],
        }


@dataclass
class CaseAnalysis:
    case: str
    config: RunConfig
    graph: GammaGraph
    results: list
    samples: dict  # {q: {label: count}}
    discrepancies: list
    notes: list
    blowup: object = None

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def result(self, label: str) -> UResult:
        for r in self.results:
            if r.params.label() == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "case": self.case,
            "config": self.config.to_dict(),
            "good_primes": [q for q in sorted(self.samples) if good_reduction(self.case, q)],
            "subspaces": [r.to_dict() for r in self.results],
            "components": [list(c) for c in self.graph.components],
            "edges": len(self.graph.edges),
            "star_edges": len(self.graph.star_edges()),
            "blowup": self.blowup.to_dict() if self.blowup else None,
            "discrepancies": list(self.discrepancies),
            "notes": list(self.notes),
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _paving_ok(reports) -> bool:
    """Every cell Empty or Affine by counts, and symbolically resolved in agreement."""
    for r in reports:
        if r.classification not in ("Empty", "Affine"):
            return False
        if r.symbolic is not None and r.symbolic != r.label:
            return False
    return True


def analyze_case(case, config: RunConfig) -> CaseAnalysis:
    case = get_case(case)
    cid = case.id.value
    graph = build_graph(case, trials=config.trials, seed=config.seed)
    params = [v.params for v in graph.vertices]
    qs = sorted(set(config.primes) | set(config.holdouts))
    counts = {q: count_all(case, q, params, config.backend, config.jobs) for q in qs}
    discrepancies, notes = [], []

    results = []
    for v in graph.vertices:
        p = v.params
        samples = {q: counts[q][p] for q in config.primes}
        if len(split_primes(case, samples)[0]) < required_samples(case, p):
            samples.update({q: counts[q][p] for q in config.holdouts})
        pp = poincare_from_counts(case, p, samples)
        if v.empty:
            cls = "empty"
        elif v.dim_y <= 2:
            cls = "paved-dimY<=2"
        else:
            cls = "unverified"
        results.append(UResult(p, v.dim, v.empty, v.dim_x, v.dim_y, graph.component_of(v.label), pp, cls))
        if not pp.consistent:
            discrepancies.append(f"{p.label()}: counts not interpolated consistently (residuals {pp.residuals})")
        elif not v.empty and not pp.ok:
            discrepancies.append(f"{p.label()}: Poincaré polynomial {pp.poly} fails degree/coefficient checks")
        if pp.bad_reduction:
            notes.append(f"{p.label()}: counts at bad primes differ from the polynomial by {pp.bad_reduction}")

    by_label = {r.params.label(): r for r in results}

    # paving of the delta >= 3 subspaces
    blowup = None
    for r in results:
        if r.classification != "unverified":
            continue
        r.cells = check_affine_paving(case, r.params, config.cell_primes, backend=config.backend)
        if _paving_ok(r.cells):
            r.classification = "cell-paved"
        elif cid == "E7a5" and r.params.label() == BLOWUP_U:
            blowup = blowup or verify_blowup_case(BLOWUP_PRIMES, config.backend)
            if blowup.ok:
                r.classification = "blow-up-paved"
        if r.classification == "unverified":
            notes.append(f"{r.params.label()}: no affine paving certified")
    if cid == "E7a5" and BLOWUP_U in by_label:
        blowup = blowup or verify_blowup_case(BLOWUP_PRIMES, config.backend)
        if not blowup.ok:
            discrepancies.append(f"{BLOWUP_U}: blow-up identity or cell counts fail")
        if not blowup.exceptional_not_affine:
            notes.append(f"{BLOWUP_U}: cell a=21,S=231,T=123 counts {blowup.exceptional_counts}, "
                         f"symbolic {blowup.exceptional_symbolic}; no non-affine witness")

    discrepancies += _golden_discrepancies(case, graph, by_label, counts, config)
    return CaseAnalysis(cid, config, graph, results, {q: {p.label(): c for p, c in counts[q].items()} for q in qs},
                        discrepancies, notes, blowup)


def _lookup(case, by_support, params):
    return by_support[support(case, params)]


def _golden_discrepancies(case, graph, by_label, counts, config) -> list:
    cid = case.id.value
    out = []
    by_support = {support(case, r.params): r for r in by_label.values()}

    # vertex tables
    for e in all_entries(cid, config.golden):
        r = _lookup(case, by_support, e.params)
        where = f"component {e.component} {e.params.label()}"
        if e.status == "empty":
            if not r.empty:
                out.append(f"{where}: expected empty, got dim {r.dim_x}, delta {r.delta}")
        elif e.status == "elsewhere":
            if r.empty or r.component == e.component:
                out.append(f"{where}: expected a nonempty X_U outside this component")
        else:
            if r.empty:
                out.append(f"{where}: expected {e.dim},{e.delta}, got empty")
            elif (r.dim_x, r.delta) != (e.dim, e.delta):
                out.append(f"{where}: expected {e.dim},{e.delta}, got {r.dim_x},{r.delta}")
            elif r.component != e.component:
                out.append(f"{where}: lies in component {r.component}")

    # components and their constant terms
    want = len(GOLDEN_FILES[cid])
    if len(graph.components) != want:
        out.append(f"Gamma* has {len(graph.components)} components, expected {want}")
    for i, comp in enumerate(graph.components, start=1):
        expected = COMPONENT_SIZES[cid].get(i)
        consts = {by_label[lab].poincare.constant_term for lab in comp}
        if consts != {expected}:
            out.append(f"component {i}: constant terms {sorted(consts)}, expected {expected}")

    # edge invariants
    for e in graph.crossing_edges():
        out.append(f"edge {e.lower} -- {e.upper} joins an empty and a nonempty vertex")
    for e in graph.star_edges():
        lo, hi = by_label[e.lower], by_label[e.upper]
        if hi.poincare.degree != lo.poincare.degree + 1:
            out.append(f"edge {e.lower} -- {e.upper}: degrees {lo.poincare.degree}, {hi.poincare.degree}")
        if hi.poincare.constant_term != lo.poincare.constant_term:
            out.append(f"edge {e.lower} -- {e.upper}: constant terms differ")

    # delta extremes
    deep = sorted((r.params.label(), r.delta) for r in by_label.values() if not r.empty and r.delta >= 3)
    if cid == "E7a5":
        expected = sorted((p.label(), d) for p, d in delta_table(config.golden).items())
        if deep != expected:
            out.append(f"delta >= 3 list {deep} differs from {expected}")
    else:
        expected = [("00|10|2|2", 3), ("00|10|2|3", 3)]
        if deep != expected:
            out.append(f"delta >= 3 list {deep} differs from {expected}")

    # genericity bounds: zero counts at every tested good prime
    if cid == "E7a5":
        for r in by_label.values():
            k, h = r.params.k, r.params.h
            if h[1] <= 2 and h[2] <= 1 and k[0] <= 2 and k[1] <= 1 and k[2] == 0:
                continue
            hits = {q: c[r.params] for q, c in counts.items() if c[r.params] and good_reduction(case, q)}
            if hits:
                out.append(f"{r.params.label()} violates the genericity bounds but has points {hits}")
    return out


# -- emission --------------------------------------------------------------------

def _cell_text(r: UResult, component: int) -> str:
    if r.empty:
        return "E"
    if r.component != component:
        return "X"
    return f"{r.dim_x},{r.delta}"


def render_component_table(analysis: CaseAnalysis, component: int, directory=None) -> str:
    """CSV in the golden syntax over the golden rows and columns."""
    case = get_case(analysis.case)
    by_support = {support(case, r.params): r for r in analysis.results}
    entries = component_table(analysis.case, component, directory)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if case.id is CaseId.E7a4:
        w.writerow(["k|h", "ell", "m=3", "m=2", "m=1"])
        rows: dict = {}
        for e in entries:
            key = ("".join(map(str, e.params.k)) + "|" + "".join(map(str, e.params.h)), e.params.ell)
            rows.setdefault(key, {})[e.params.m] = _cell_text(_lookup(case, by_support, e.params), component)
        for (kh, ell), cells in rows.items():
            w.writerow([kh, ell] + [cells[m] for m in (3, 2, 1)])
    else:
        w.writerow(["k|h", "l=3", "l=2", "l=1"])
        rows = {}
        for e in entries:
            kh = "".join(map(str, e.params.k)) + "|" + "".join(map(str, e.params.h))
            rows.setdefault(kh, {})[e.params.ell] = _cell_text(_lookup(case, by_support, e.params), component)
        for kh, cells in rows.items():
            w.writerow([kh] + [cells[ell] for ell in (3, 2, 1)])
    return buf.getvalue()


def render_delta_table(analysis: CaseAnalysis, directory=None) -> str:
    """The delta >= 3 list, in golden row order with any extra rows appended."""
    order = {p.label(): i for i, p in enumerate(delta_table(directory))}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k|h|l", "delta"])
    deep = [r for r in analysis.results if not r.empty and r.delta >= 3]
    for r in sorted(deep, key=lambda r: (order.get(r.params.label(), len(order)), r.params)):
        w.writerow([r.params.label(), r.delta])
    return buf.getvalue()


def render_inventory(analysis: CaseAnalysis) -> str:
    qs = sorted(analysis.samples)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["U", "dim_U", "empty", "dim_X", "delta", "component", "classification", "poincare"]
               + [f"q={q}" for q in qs])
    for r in analysis.results:
        lab = r.params.label()
        w.writerow([lab, r.dim_u, int(r.empty), "" if r.dim_x is None else r.dim_x,
                    "" if r.delta is None else r.delta, r.component or "", r.classification, str(r.poincare.poly)]
                   + [analysis.samples[q][lab] for q in qs])
    return buf.getvalue()


def analysis_files(analysis: CaseAnalysis, formats=("json", "csv", "dot")) -> dict:
    """{relative path: text} for one case."""
    cid = analysis.case
    files = {}
    if "json" in formats:
        files[f"{cid}/report.json"] = analysis.to_json()
        files[f"{cid}/graph.json"] = analysis.graph.to_json()
    if "csv" in formats:
        for comp, name in GOLDEN_FILES[cid].items():
            files[f"{cid}/{name}"] = render_component_table(analysis, comp, analysis.config.golden)
        if cid == "E7a5":
            files[f"{cid}/{DELTA_TABLE}"] = render_delta_table(analysis, analysis.config.golden)
        files[f"{cid}/inventory.csv"] = render_inventory(analysis)
    if "dot" in formats:
        files[f"{cid}/graph.dot"] = analysis.graph.to_dot()
    return files


class OutputWriter:
    """Single writer for a run.

    Files are staged in a ``.partial-*`` directory inside ``out`` as soon as
    they are produced and moved into place by ``commit``.  An interrupted run
    leaves the staged files behind.
    """

    def __init__(self, out: Path):
        self.out = Path(out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.staging = Path(tempfile.mkdtemp(prefix=".partial-", dir=self.out))
        self.staged: list = []

    def add(self, files: dict):
        for rel, text in sorted(files.items()):
            path = self.staging / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            self.staged.append(rel)

    def commit(self) -> list:
        written = []
        for rel in sorted(set(self.staged)):
            dest = self.out / rel
            dest.parent.mkdir(parents=True, exist_ok=True)
            os.replace(self.staging / rel, dest)
            written.append(dest)
        shutil.rmtree(self.staging)
        return written


def write_outputs(files: dict, out: Path) -> list:
    w = OutputWriter(out)
    w.add(files)
    return w.commit()


def bless(analysis: CaseAnalysis, directory: Path) -> list:
    """Overwrite the golden tables for this case with the computed ones."""
    directory = Path(directory)
    files = {}
    for comp, name in GOLDEN_FILES[analysis.case].items():
        files[name] = render_component_table(analysis, comp, analysis.config.golden)
    if analysis.case == "E7a5":
        files[DELTA_TABLE] = render_delta_table(analysis, analysis.config.golden)
    for name, text in files.items():
        (directory / name).write_text(text, encoding="utf-8")
    return [directory / n for n in sorted(files)]


def summary_report(analyses) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "cases": {a.case: {"passed": a.passed, "discrepancies": a.discrepancies, "notes": a.notes} for a in analyses},
        "passed": all(a.passed for a in analyses),
    }
