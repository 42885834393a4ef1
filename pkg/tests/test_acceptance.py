"""Acceptance criteria 1-10, one recorded PASS/FAIL line each.

Criteria 2 and 8 contain a sub-claim that the computation refutes; those tests
are strict xfails (the line reads FAIL) and the attainable part of each is
asserted separately.
"""

import random
import time

import pytest
from conftest import ACCEPTANCE_LINES

from e7paving.cases import base_point, get_case, stabilizer_rank
from e7paving.cells import BLOWUP_U, get_cell, verify_blowup_case
from e7paving.counting import count_all, enumerate_flags, naive_member
from e7paving.goldens import all_entries, component_table, delta_table
from e7paving.subspaces import enumerate_params, enumerate_subspaces, is_borel_stable, support


def record(n: int, ok: bool, detail: str):
    ACCEPTANCE_LINES[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(ACCEPTANCE_LINES[n])


def by_support(analysis):
    case = get_case(analysis.case)
    return {support(case, r.params): r for r in analysis.results}


def test_criterion_1_stabilizer_certificates():
    t0 = time.perf_counter()
    ranks = {c: stabilizer_rank(c, base_point(c)) for c in ("E7a4", "E7a5")}
    ok = ranks == {"E7a4": 17, "E7a5": 21}
    record(1, ok, f"stabilizer ranks {ranks} in {time.perf_counter() - t0:.2f}s")
    assert ok


def _table1_check(analysis, primes):
    case = get_case("E7a4")
    rs = by_support(analysis)
    mismatched, nonzero = [], []
    for e in component_table("E7a4", 1):
        r = rs[support(case, e.params)]
        if e.status == "nonempty" and (r.empty or (r.dim_x, r.delta) != (e.dim, e.delta)):
            mismatched.append(e.params.label())
        if e.status == "empty":
            if not r.empty:
                mismatched.append(e.params.label())
            nonzero += [(e.params.label(), q, analysis.samples[q][r.params.label()])
                        for q in primes if analysis.samples[q][r.params.label()]]
    return mismatched, nonzero


@pytest.mark.xfail(strict=True, reason="10|21|1|2 has one F_2-point: the base point degenerates mod 2")
def test_criterion_2_table1(analysis):
    a = analysis("E7a4")
    mismatched, nonzero = _table1_check(a, [q for q in a.samples if q <= 13])
    ok = not mismatched and not nonzero and a.elapsed < 60
    record(2, ok, f"(dim, delta) mismatches {mismatched}; nonzero counts on empty entries "
                  f"(U, q, count) {nonzero}; analysis {a.elapsed:.1f}s")
    assert ok


def test_criterion_2_at_good_primes(analysis):
    a = analysis("E7a4")
    mismatched, nonzero = _table1_check(a, [5, 7, 11, 13])
    assert not mismatched and not nonzero
    _, everywhere = _table1_check(a, [2, 3, 5, 7, 11, 13])
    assert everywhere == [("10|21|1|2", 2, 1)]


def test_criterion_3_component_two(analysis):
    a = analysis("E7a4")
    comps = a.graph.components
    poly = a.result("10|21|2|2").poincare
    ok = len(comps) == 2 and comps[1] == ["10|21|2|2"] and [str(c) for c in poly.poly.coeffs] == ["2"] and poly.ok
    record(3, ok, f"components {[len(c) for c in comps]}, component 2 = {comps[1]}, polynomial {poly.poly}")
    assert ok


def test_criterion_4_delta_extremes(analysis):
    a = analysis("E7a4")
    deep = sorted(r.params.label() for r in a.results if not r.empty and r.delta >= 3)
    top = max(r.delta for r in a.results if not r.empty)
    ok = top == 3 and deep == ["00|10|2|2", "00|10|2|3"]
    record(4, ok, f"max delta {top}; delta = 3 for {deep}")
    assert ok


def test_criterion_5_tables_3_to_5(analysis):
    a = analysis("E7a5")
    case = get_case("E7a5")
    rs = by_support(a)
    bad = []
    for e in all_entries("E7a5"):
        r = rs[support(case, e.params)]
        if e.status == "empty" and not r.empty:
            bad.append(e.params.label())
        elif e.status == "elsewhere" and (r.empty or r.component == e.component):
            bad.append(e.params.label())
        elif e.status == "nonempty" and (r.empty or (r.dim_x, r.delta, r.component) != (e.dim, e.delta, e.component)):
            bad.append(e.params.label())
    consts = [sorted({a.result(lab).poincare.constant_term for lab in comp}) for comp in a.graph.components]
    ok = not bad and len(a.graph.components) == 3 and consts == [[1], [3], [6]] and a.elapsed < 600
    record(5, ok, f"mismatches {bad}; constant terms by component {consts}; "
                  f"primes {sorted(a.samples)}; analysis {a.elapsed:.1f}s single-threaded")
    assert ok


def test_criterion_6_table6(analysis):
    a = analysis("E7a5")
    got = {r.params.label(): r.delta for r in a.results if not r.empty and r.delta >= 3}
    want = {p.label(): d for p, d in delta_table().items()}
    ok = got == want and len(got) == 11
    record(6, ok, f"{len(got)} subspaces with delta >= 3, equal to the table: {got == want}")
    assert ok


def test_criterion_7_cell_affineness(analysis):
    targets = [("E7a4", "00|10|2|3"), ("E7a4", "00|10|2|2")]
    targets += [("E7a5", p.label()) for p in delta_table() if p.label() != BLOWUP_U]
    problems, ncells = [], 0
    for case, label in targets:
        r = analysis(case).result(label)
        if not r.cells:
            problems.append(f"{label}: no cell report")
        for c in r.cells:
            ncells += 1
            if c.classification not in ("Empty", "Affine") or c.symbolic != c.label:
                problems.append(f"{label} {c.cell.label(case)}: {c.label} / {c.symbolic}")
        for q in r.cells[0].counts if r.cells else ():
            if sum(c.counts[q] for c in r.cells) != analysis(case).samples[q][label]:
                problems.append(f"{label}: cells do not add up at q={q}")
    ok = not problems and len(targets) == 12
    record(7, ok, f"{len(targets)} subspaces, {ncells} cell intersections, all Empty/Affine and symbolically "
                  f"resolved; problems {problems}")
    assert ok


def _blowup_parts(rep):
    identity = all(r.identity_ok for r in rep.rows)
    cells = all(r.cells["a=12,S(1)=3,T=132"][0] == r.cells["a=12,S(1)=3,T=132"][1]
                and r.cells["a=21,S(1)=3,T=123"][0] == r.cells["a=21,S(1)=3,T=123"][1] for r in rep.rows)
    return identity, cells


@pytest.mark.xfail(strict=True, reason="cell a=21,S=231,T=123 of X_U meets X_U in an affine plane")
def test_criterion_8_blowup():
    rep = verify_blowup_case((2, 3, 5, 7))
    identity, cells = _blowup_parts(rep)
    ok = identity and cells and rep.exceptional_not_affine
    record(8, ok, f"identity {identity}; blow-up cell counts {cells}; exceptional cell counts "
                  f"{rep.exceptional_counts}, symbolic {rep.exceptional_symbolic}, "
                  f"non-affine witness {rep.not_affine_witness}")
    assert ok


def test_criterion_8_attainable_parts():
    rep = verify_blowup_case((2, 3, 5, 7))
    assert _blowup_parts(rep) == (True, True) and rep.ok
    assert rep.exceptional_counts == {q: q ** 2 for q in (2, 3, 5, 7)}
    assert get_cell("E7a5", "21", "231", "123").dim == 6


def test_criterion_9_properties(analysis):
    parts = {}
    parts["borel"] = all(is_borel_stable(c, U) for c in ("E7a4", "E7a5") for U in enumerate_subspaces(c))
    additivity, holdout, degree, edges = True, True, True, True
    for c in ("E7a4", "E7a5"):
        a = analysis(c)
        case = get_case(c)
        for r in a.results:
            pp = r.poincare
            if r.cells:
                additivity &= all(sum(x.counts[q] for x in r.cells) == a.samples[q][r.params.label()]
                                  for q in r.cells[0].counts)
            if not r.empty:
                holdout &= pp.consistent and bool(pp.check_primes) and not pp.residuals
                degree &= pp.degree == r.dim_u - case.dim_b0
            else:
                holdout &= pp.consistent
        edges &= not a.graph.crossing_edges()
        for e in a.graph.star_edges():
            lo, hi = a.result(e.lower).poincare, a.result(e.upper).poincare
            edges &= hi.degree == lo.degree + 1 and hi.constant_term == lo.constant_term
    parts.update(additivity=additivity, holdout=holdout, degree=degree, edges=edges)
    naive = True
    for c in ("E7a4", "E7a5"):
        rng = random.Random(0)
        params = list(enumerate_params(c))
        sample = rng.sample(params, len(params) // 10)
        flags = list(enumerate_flags(c, 2))
        counts = count_all(c, 2, sample)
        naive &= all(counts[p] == sum(naive_member(c, p, f, 2) for f in flags) for p in sample)
    parts["histogram_vs_naive"] = naive
    ok = all(parts.values())
    record(9, ok, ", ".join(f"{k} {v}" for k, v in parts.items()))
    assert ok


def test_criterion_10_genericity(analysis):
    a = analysis("E7a5")
    violators = [r for r in a.results
                 if not (r.params.h[1] <= 2 and r.params.h[2] <= 1 and r.params.k[0] <= 2
                         and r.params.k[1] <= 1 and r.params.k[2] == 0)]
    hits = [(r.params.label(), q) for r in violators for q in a.samples if a.samples[q][r.params.label()]]
    ok = bool(violators) and not hits
    record(10, ok, f"{len(violators)} subspaces violate the bounds; nonzero counts at primes "
                   f"{sorted(a.samples)}: {hits}")
    assert ok
