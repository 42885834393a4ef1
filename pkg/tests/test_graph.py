import json
import random

import pytest

from e7paving.graph import build_graph, is_edge, u_double_prime, u_double_prime_basis
from e7paving.subspaces import SubspaceParams, enumerate_subspaces, subspace_basis


@pytest.fixture(scope="module")
def graphs():
    return {c: build_graph(c) for c in ("E7a4", "E7a5")}


@pytest.mark.parametrize("case", ["E7a4", "E7a5"])
def test_u_double_prime_shortcut_matches_general(case):
    from e7paving.cases import get_case

    rng = random.Random(1)
    c = get_case(case)
    for U in rng.sample(enumerate_subspaces(case), 8):
        for r in c.roots:
            assert set(u_double_prime(case, U, r.label)) == set(u_double_prime_basis(case, U.basis, r.label))


def test_graph_sizes(graphs):
    g4, g5 = graphs["E7a4"], graphs["E7a5"]
    assert (len(g4.vertices), len(g4.edges)) == (600, 586)
    assert (len(g5.vertices), len(g5.edges)) == (700, 758)
    assert [len(c) for c in g4.components] == [40, 1]
    assert [len(c) for c in g5.components] == [27, 49, 11]
    assert g4.components[1] == ["10|21|2|2"]


@pytest.mark.parametrize("case", ["E7a4", "E7a5"])
def test_edges_satisfy_definition(graphs, case):
    g = graphs[case]
    assert g.star_is_union_of_components
    for e in g.edges:
        lo = subspace_basis(case, SubspaceParams.parse(case, e.lower))
        hi = subspace_basis(case, SubspaceParams.parse(case, e.upper))
        assert hi.dim == lo.dim + 1 and hi.contains_subspace(lo)
        assert is_edge(case, lo, hi) == e.alpha
        assert len(u_double_prime(case, lo, e.alpha)) == lo.dim - 1


def test_non_hyperplane_is_not_edge():
    U = subspace_basis("E7a4", SubspaceParams.parse("E7a4", "00|10|2|3"))
    assert is_edge("E7a4", U, U) is None


def test_dot_and_json(graphs):
    g = graphs["E7a5"]
    dot = g.to_dot()
    assert dot.startswith('graph "Gamma_E7a5" {') and dot.count("subgraph cluster_") == 3
    doc = json.loads(g.to_json())
    assert doc["schema_version"] == 1 and len(doc["components"]) == 3
    assert g.to_dot() == build_graph("E7a5").to_dot()
