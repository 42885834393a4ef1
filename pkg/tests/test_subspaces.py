import pytest

from e7paving.cases import act_gl, borel_generators, get_case
from e7paving.subspaces import (
    NotApplicable,
    SubspaceParams,
    enumerate_params,
    enumerate_subspaces,
    expected_dims,
    is_borel_stable,
    meets_open_orbit,
    parabolic_type,
    subspace_basis,
)

CASES = ["E7a4", "E7a5"]


def _closed_sets(case) -> set:
    """All coordinate subsets closed under the Borel action (brute-force oracle)."""
    c = get_case(case)
    n = c.g2_dim
    reach = {j: set() for j in range(n)}
    for _, g in borel_generators(c):
        for j in range(n):
            img = act_gl(c, *g, tuple(int(i == j) for i in range(n)))
            reach[j] |= {i for i, x in enumerate(img) if x and i != j}
    changed = True
    while changed:
        changed = False
        for j in range(n):
            new = reach[j].union(*(reach[i] for i in reach[j]))
            if new != reach[j]:
                reach[j], changed = new, True
    out = set()

    def rec(i, inside, outside):
        if i == n:
            out.add(frozenset(inside))
            return
        if i in inside or i in outside:
            rec(i + 1, inside, outside)
            return
        rec(i + 1, inside | {i} | reach[i], outside)
        above = {j for j in range(n) if i in reach[j]}
        if not above & inside:
            rec(i + 1, inside, outside | {i} | above)

    rec(0, set(), set())
    return out


@pytest.mark.parametrize("case,count", [("E7a4", 600), ("E7a5", 700)])
def test_enumeration_is_complete(case, count):
    enumerated = {U.support for U in enumerate_subspaces(case)}
    assert len(enumerated) == count
    assert enumerated == _closed_sets(case)


@pytest.mark.parametrize("case", CASES)
def test_every_subspace_is_borel_stable(case):
    assert all(is_borel_stable(case, U) for U in enumerate_subspaces(case))


@pytest.mark.parametrize("case", CASES)
def test_label_roundtrip(case):
    for p in enumerate_params(case):
        assert SubspaceParams.parse(case, p.label()) == p


def test_parse_accepts_commas_and_rejects_garbage():
    assert SubspaceParams.parse("E7a4", "0,0|1,0|2|3").label() == "00|10|2|3"
    for bad in ["00|10|2", "01|10|2|3", "00|10|5|3", "x|y|z|w"]:
        with pytest.raises(ValueError):
            SubspaceParams.parse("E7a4", bad)
    with pytest.raises(ValueError):
        SubspaceParams.parse("E7a5", "000|100|2|1")


@pytest.mark.parametrize("case", CASES)
def test_whole_space_is_full_flag_variety(case):
    c = get_case(case)
    U = max(enumerate_subspaces(case), key=lambda U: U.dim)
    assert U.dim == c.g2_dim
    labels, extra = parabolic_type(c, U)
    assert labels == {r.label for r in c.roots}
    assert expected_dims(c, U, True) == (c.flag_dim, 0)


def test_examples():
    U = subspace_basis("E7a4", SubspaceParams.parse("E7a4", "00|10|2|3"))
    assert meets_open_orbit("E7a4", U)
    assert expected_dims("E7a4", U) == (4, 3)
    empty = subspace_basis("E7a4", SubspaceParams.parse("E7a4", "00|10|2|1"))
    assert expected_dims("E7a4", empty) == (2, 1)
    small = min(enumerate_subspaces("E7a5"), key=lambda U: U.dim)
    with pytest.raises(NotApplicable):
        expected_dims("E7a5", small)


@pytest.mark.parametrize("case", CASES)
def test_open_orbit_test_is_seed_stable(case):
    subs = enumerate_subspaces(case)[::25]
    assert [meets_open_orbit(case, U, seed=0) for U in subs] == [meets_open_orbit(case, U, seed=7) for U in subs]
