"""The graph Gamma on Borel-stable subspaces and its nonempty part Gamma*.

(U, U') is an edge, witnessed by a simple root alpha, when
  1. U is a hyperplane in U',
  2. the minimal parabolic P_alpha lies in P_U' but not in P_U,
  3. U'' (the largest P_alpha-stable subspace of U) is a hyperplane in U.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .cases import SCHEMA_VERSION, act_gl, borel_generators, get_case, negative_simple_generators
from .exact import QQ, Matrix, annihilator, kernel_basis, row_space
from .subspaces import (
    NotApplicable,
    Subspace,
    enumerate_subspaces,
    expected_dims,
    meets_open_orbit,
    parabolic_type,
)


@lru_cache(maxsize=None)
def _columns(case, triple) -> tuple:
    """Images of the standard basis of g2 under a gl triple."""
    n = case.g2_dim
    return tuple(act_gl(case, *triple, tuple(int(i == j) for i in range(n))) for j in range(n))


def _monomial_targets(cols):
    """For a matrix mapping basis vectors to multiples of distinct basis vectors,
    the target index of each column (None for zero columns); else None."""
    targets, seen = [], set()
    for col in cols:
        nz = [i for i, x in enumerate(col) if x]
        if len(nz) > 1 or (nz and nz[0] in seen):
            return None
        targets.append(nz[0] if nz else None)
        seen.update(nz)
    return targets


def _generators(case, alpha: str) -> list:
    f = dict(negative_simple_generators(case))
    if alpha not in f:
        raise ValueError(f"{alpha!r} is not a simple root of {case.id.value}")
    return [g for _, g in borel_generators(case)] + [f[alpha]]


def _preimage_within(basis, cols, n):
    """{w in W : G w in W} for W = span(basis) and G given by its columns."""
    if not basis:
        return basis
    ann = annihilator(basis, n)
    if not ann:
        return basis
    sparse_cols = [[(i, x) for i, x in enumerate(col) if x] for col in cols]
    images = []
    for w in basis:
        img = [0] * n
        for j, wj in enumerate(w):
            if wj:
                for i, x in sparse_cols[j]:
                    img[i] += x * wj
        images.append([(i, x) for i, x in enumerate(img) if x])
    K = Matrix([[sum(a[i] * x for i, x in img if a[i]) for img in images] for a in ann], len(basis))
    combos = kernel_basis(K)
    vecs = [tuple(sum(c[t] * basis[t][i] for t in range(len(basis))) for i in range(n)) for c in combos]
    return row_space(vecs, n) if vecs else ()


def u_double_prime_basis(case, basis, alpha: str) -> tuple:
    """Largest subspace of span(basis) stable under b0 and f_alpha (exact, general)."""
    case = get_case(case)
    n = case.g2_dim
    gens = [_columns(case, g) for g in _generators(case, alpha)]
    W = row_space(basis, n) if basis else ()
    for _ in range(n + 1):
        start = len(W)
        for cols in gens:
            W = _preimage_within(W, cols, n)
        if len(W) == start:
            return W
    raise RuntimeError("fixed-point iteration for U'' did not terminate")


@lru_cache(maxsize=None)
def _u_double_prime_support(case, support: frozenset, alpha: str) -> frozenset | None:
    """Coordinate shortcut: valid when every generator permutes basis lines."""
    targets = [_monomial_targets(_columns(case, g)) for g in _generators(case, alpha)]
    if any(t is None for t in targets):
        return None
    S = set(support)
    for _ in range(case.g2_dim + 1):
        shrunk = {j for j in S if all(t[j] is None or t[j] in S for t in targets)}
        if shrunk == S:
            return frozenset(S)
        S = shrunk
    raise RuntimeError("fixed-point iteration for U'' did not terminate")


def u_double_prime(case, U: Subspace, alpha: str) -> tuple:
    """Basis of U'' for the minimal parabolic of alpha."""
    case = get_case(case)
    S = _u_double_prime_support(case, U.support, alpha)
    if S is None:
        return u_double_prime_basis(case, U.basis, alpha)
    n = case.g2_dim
    return tuple(tuple(QQ(int(i == j)) for i in range(n)) for j in sorted(S))


def is_edge(case, U: Subspace, U2: Subspace) -> str | None:
    """First simple root (case order) witnessing the edge U -- U2, if any."""
    case = get_case(case)
    if U2.dim != U.dim + 1 or not U2.contains_subspace(U):
        return None
    in_u, _ = parabolic_type(case, U)
    in_u2, _ = parabolic_type(case, U2)
    for r in case.roots:
        a = r.label
        if a in in_u2 and a not in in_u and len(u_double_prime(case, U, a)) == U.dim - 1:
            return a
    return None


@dataclass(frozen=True)
class Vertex:
    params: object
    dim: int
    empty: bool
    dim_x: int | None
    dim_y: int | None

    @property
    def label(self) -> str:
        return self.params.label()

    @property
    def delta(self) -> int | None:
        return self.dim_y


@dataclass(frozen=True)
class Edge:
    lower: str
    upper: str
    alpha: str


@dataclass
class GammaGraph:
    case: str
    vertices: list
    edges: list
    components: list = field(default_factory=list)  # lists of labels, component 1 first

    def vertex(self, label: str) -> Vertex:
        return self._index[label]

    def __post_init__(self):
        self._index = {v.label: v for v in self.vertices}

    def crossing_edges(self) -> list:
        """Edges joining an empty and a nonempty vertex (should be none)."""
        return [e for e in self.edges if self._index[e.lower].empty != self._index[e.upper].empty]

    @property
    def star_is_union_of_components(self) -> bool:
        return not self.crossing_edges()

    def component_of(self, label: str) -> int | None:
        for i, comp in enumerate(self.components, start=1):
            if label in comp:
                return i
        return None

    def star_edges(self) -> list:
        return [e for e in self.edges if not self._index[e.lower].empty and not self._index[e.upper].empty]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "case": self.case,
            "vertices": [
                {"U": v.label, "dim_U": v.dim, "empty": v.empty, "dim_X": v.dim_x, "delta": v.dim_y,
                 "component": self.component_of(v.label)}
                for v in self.vertices
            ],
            "edges": [{"lower": e.lower, "upper": e.upper, "alpha": e.alpha} for e in self.edges],
            "components": [list(c) for c in self.components],
            "star_is_union_of_components": self.star_is_union_of_components,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def to_dot(self) -> str:
        palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

        def node(v: Vertex, color: str | None) -> str:
            stats = "[empty]" if v.empty else f"[{v.dim_x},{v.dim_y}]"
            attrs = [f'label="{v.label} {stats}"']
            if v.empty:
                attrs.append("style=dashed")
            if color:
                attrs.append(f'color="{color}"')
            return f'    "{v.label}" [{", ".join(attrs)}];'

        lines = [f'graph "Gamma_{self.case}" {{', "  node [shape=box];"]
        for i, comp in enumerate(self.components, start=1):
            color = palette[(i - 1) % len(palette)]
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="component {i}"; color="{color}";')
            lines += [node(self._index[lab], color) for lab in comp]
            lines.append("  }")
        for v in self.vertices:
            if v.empty:
                lines.append(node(v, None).replace("    ", "  ", 1))
        for e in self.edges:
            lines.append(f'  "{e.lower}" -- "{e.upper}" [label="{e.alpha}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _components(vertices, edges) -> list:
    parent = {v.label: v.label for v in vertices if not v.empty}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if e.lower in parent and e.upper in parent:
            a, b = find(e.lower), find(e.upper)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict = {}
    dims = {v.label: v.dim for v in vertices}
    for v in vertices:
        if not v.empty:
            groups.setdefault(find(v.label), []).append(v.label)
    comps = [sorted(g, key=lambda lab: (-dims[lab], lab)) for g in groups.values()]
    # the component of the largest subspace first, then by top dimension
    comps.sort(key=lambda c: (-dims[c[0]], c[0]))
    return comps


def build_graph(case, trials: int = 32, seed: int = 0) -> GammaGraph:
    case = get_case(case)
    subspaces = enumerate_subspaces(case)
    by_support = {U.support: U for U in subspaces}
    vertices = []
    for U in subspaces:
        nonempty = meets_open_orbit(case, U, trials=trials, seed=seed)
        try:
            dx, dy = expected_dims(case, U, nonempty)
        except NotApplicable:
            dx = dy = None
        vertices.append(Vertex(U.params, U.dim, not nonempty, dx, dy))
    edges = []
    for U2 in subspaces:
        for j in sorted(U2.support):
            U = by_support.get(U2.support - {j})
            if U is None:
                continue
            alpha = is_edge(case, U, U2)
            if alpha is not None:
                edges.append(Edge(U.params.label(), U2.params.label(), alpha))
    edges.sort(key=lambda e: (e.lower, e.upper))
    return GammaGraph(case.id.value, vertices, edges, _components(vertices, edges))
