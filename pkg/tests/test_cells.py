import random
from itertools import product

import numpy as np
import pytest

from e7paving.cases import get_case
from e7paving.cells import (
    blowup_count,
    cell_histogram,
    check_affine_paving,
    classify_counts,
    count_cell_intersection,
    count_cell_naive,
    enumerate_cells,
    get_cell,
    pairing_table,
    reports_table,
    symbolic_eliminate,
)
from e7paving.counting import compute_histogram, enumerate_flags
from e7paving.counting.flags import complete_basis
from e7paving.exact import GF, row_space
from e7paving.subspaces import SubspaceParams

P = SubspaceParams.parse


def _flag_key(a, B, C, q):
    """Canonical form of a flag: reduced bases of every member subspace."""
    F = GF(q)
    key = [row_space([a], len(a), F)]
    for basis in (B, C):
        key += [row_space(list(basis[:i]), len(basis[0]), F) for i in range(1, len(basis))]
    return tuple(key)


@pytest.mark.parametrize("case,ncells", [("E7a4", 24), ("E7a5", 72)])
def test_cells_count_flag_variety(case, ncells):
    cells = enumerate_cells(case)
    assert len(cells) == ncells
    for q in (2, 3):
        assert sum(q ** c.dim for c in cells) == get_case(case).flag_total(q)
    assert max(c.dim for c in cells) == get_case(case).flag_dim


@pytest.mark.parametrize("case,q", [("E7a4", 3), ("E7a5", 2)])
def test_charts_are_a_bijection_onto_flags(case, q):
    c = get_case(case)
    seen = set()
    for cell in enumerate_cells(case):
        for vals in product(range(q), repeat=cell.dim):
            a, S, T = cell.instantiate(dict(zip(cell.variables, vals)), q)
            key = _flag_key(a, complete_basis(S, c.dB, q), complete_basis(T, c.dC, q), q)
            assert key not in seen
            seen.add(key)
    flags = {_flag_key(f.a, f.B, f.C, q) for f in enumerate_flags(case, q)}
    assert seen == flags


@pytest.mark.parametrize("case,q", [("E7a4", 2), ("E7a4", 3), ("E7a5", 2)])
def test_cell_histograms_sum_to_total(case, q):
    total = sum(cell_histogram(case, cell, q).astype(np.int64) for cell in enumerate_cells(case))
    assert np.array_equal(total, compute_histogram(case, q))


@pytest.mark.parametrize("label", ["00|10|2|3", "00|10|2|2"])
def test_cell_counts_match_naive_e7a4(label):
    p = P("E7a4", label)
    for cell in enumerate_cells("E7a4"):
        assert count_cell_intersection("E7a4", p, cell, 3) == count_cell_naive("E7a4", p, cell, 3)


def test_cell_counts_match_naive_e7a5_sample():
    rng = random.Random(3)
    p = P("E7a5", "000|100|3")
    for cell in rng.sample(enumerate_cells("E7a5"), 12):
        assert count_cell_intersection("E7a5", p, cell, 2) == count_cell_naive("E7a5", p, cell, 2)


def test_pairings_by_hand():
    # v = (x, 1); w1 = (1, y2, y3), w2 = (0, 1, y3'); M0 v = (x, 1, 0), M1 v = (0, x, 1)
    t = pairing_table("E7a4", get_cell("E7a4", "12", "21", "123"))
    assert t[("Q_1,0", "v1", "w1")] == "x + y2"
    assert t[("Q_1,0", "v1", "w2")] == "1"
    assert t[("Q_0,1", "v1", "w1")] == "x*y2 + y3"
    assert t[("Q_0,1", "v1", "w2")] == "x + y3'"
    t = pairing_table("E7a4", get_cell("E7a4", "21", "21", "123"))
    assert t[("Q_λ,1", "v1", "w2")] == "λ + x + y3'"


def test_delta_three_cases_e7a4():
    for label in ("00|10|2|3", "00|10|2|2"):
        reports = check_affine_paving("E7a4", P("E7a4", label))
        assert all(r.classification in ("Empty", "Affine") for r in reports)
        assert all(r.symbolic == r.label for r in reports)
        if label == "00|10|2|2":
            assert all(r.classification == "Empty" for r in reports if r.cell.T in ("132", "312"))
        assert "Affine" in reports_table("E7a4", reports)


def test_symbolic_elimination_records_trace():
    e = symbolic_eliminate("E7a4", P("E7a4", "00|10|2|3"), get_cell("E7a4", "21", "21", "123"))
    assert str(e) == "Affine(4)"
    assert any("y3 = " in step for step in e.trace)


def test_classify_counts():
    assert classify_counts({2: 0, 3: 0}) == ("Empty", None, None)
    assert classify_counts({2: 4, 3: 9}) == ("Affine", 2, None)
    assert classify_counts({2: 3, 3: 4})[0] == "NotAffine"
    assert classify_counts({2: 4, 3: 27})[0] == "NotAffine"


def test_blowup_count():
    for q in (2, 3, 5):
        assert blowup_count(2, 0, q) == q ** 2 + q
        assert blowup_count(3, 1, q) == q ** 3 + q ** 2
    with pytest.raises(ValueError):
        blowup_count(2, 2, 3)


def test_unknown_cell():
    with pytest.raises(KeyError):
        get_cell("E7a4", "12", "321", "123")
