import json

import numpy as np
import pytest

from e7paving.cases import (
    CaseId,
    act,
    action_tensor,
    base_point,
    borel_generators,
    flag_count,
    g0_basis,
    get_case,
    good_reduction,
    negative_simple_generators,
    orbit_map_matrix,
    positive_simple_generators,
    preserves_flag,
    rank_mod_p,
    stabilizer_rank,
    to_json,
)

CASES = ["E7a4", "E7a5"]


@pytest.mark.parametrize("case,rank", [("E7a4", 17), ("E7a5", 21)])
def test_stabilizer_rank(case, rank):
    c = get_case(case)
    assert c.g0_dim == c.g2_dim == rank
    assert stabilizer_rank(c, base_point(c)) == rank


@pytest.mark.parametrize("case", CASES)
def test_numpy_action_tensor_matches_exact_action(case):
    c = get_case(case)
    h = base_point(c)
    exact = orbit_map_matrix(c, h)
    A = action_tensor(c)
    M = np.einsum("kji,j->ki", A, np.array(h, dtype=np.int64))
    assert [[int(x) for x in row] for row in exact.rows] == M.tolist()


@pytest.mark.parametrize("case,bad", [("E7a4", {2, 3}), ("E7a5", {2, 3})])
def test_bad_reduction_primes(case, bad):
    assert {p for p in (2, 3, 5, 7, 11, 13, 17, 19) if not good_reduction(case, p)} == bad


@pytest.mark.parametrize("case,ranks", [("E7a4", {2: 14, 3: 16, 5: 17}), ("E7a5", {2: 20, 3: 19, 5: 21})])
def test_orbit_map_rank_mod_p(case, ranks):
    c = get_case(case)
    M = np.einsum("kji,j->ki", action_tensor(c), np.array(base_point(c), dtype=np.int64))
    assert {p: rank_mod_p(M, p) for p in ranks} == ranks


@pytest.mark.parametrize("case", CASES)
def test_borel_preserves_flags(case):
    c = get_case(case)
    for _, (gA, gB, gC) in borel_generators(c):
        assert preserves_flag(c, "A", gA) and preserves_flag(c, "B", gB) and preserves_flag(c, "C", gC)
    for (_, pos), (_, neg) in zip(positive_simple_generators(c), negative_simple_generators(c)):
        assert all(preserves_flag(c, f, m) for f, m in zip("ABC", pos))
        assert not all(preserves_flag(c, f, m) for f, m in zip("ABC", neg))


@pytest.mark.parametrize("case", CASES)
def test_g0_basis_spans(case):
    c = get_case(case)
    basis = g0_basis(c)
    assert len(basis) == c.g0_dim
    h = base_point(c)
    assert all(len(act(c, Z, h)) == c.g2_dim for _, Z in basis)


def test_flag_totals():
    assert flag_count(3, 2) == 21
    assert get_case("E7a4").flag_total(2) == 189
    assert get_case("E7a5").flag_total(2) == 1323
    assert get_case("E7a5").flag_total(3) == 10816


def test_json_schema():
    doc = json.loads(to_json("E7a5"))
    assert doc["schema_version"] == 1 and doc["case"] == "E7a5" and doc["g2_dim"] == 21


def test_unknown_case():
    with pytest.raises(ValueError):
        get_case("E8")
    assert get_case(CaseId.E7a4).id is CaseId.E7a4
