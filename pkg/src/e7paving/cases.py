"""The two prehomogeneous modules attached to E7(a4) and E7(a5).

Coordinates on g2
-----------------
E7a4: ``u`` in V_B (2), ``v`` in V_C (3), then the tensor part (12).
E7a5: ``v`` in V_B (3), then the tensor part (18).

The tensor part is a trilinear form ``Q(a, u, w) = sum a[i] u[j] w[k] T[i, j, k]``
on V_A x V_B x V_C, stored in the order ``(i_A, i_B, i_C)``.  Equivalently
``Q(a, u, w) = w . M_a . u`` with ``M_a = a0*M0 + a1*M1`` a (dim V_C) x (dim V_B)
matrix; the pencil ``lambda*M0 + mu*M1`` is how the base points are written.

Action conventions
------------------
Lie algebra elements are handled through their image ``(gA, gB, gC)`` in
gl(V_A) + gl(V_B) + gl(V_C).  Vectors of V_B are columns (``u -> gB u``),
vectors of V_C are rows (``w -> w gC``), and the pencil transforms as
``M -> gC M + M gB`` plus ``(M0, M1) -> (gA00 M0 + gA10 M1, gA01 M0 + gA11 M1)``.
With these conventions the Borel subalgebra fixing the standard flags of
V_A, V_B and the reverse flag <e3> < <e2, e3> of V_C (rows) is upper
triangular in all three blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .exact import GF, QQ, Fq, Matrix

SCHEMA_VERSION = 1


class CaseId(str, Enum):
    E7a4 = "E7a4"
    E7a5 = "E7a5"


@dataclass(frozen=True)
class SimpleRoot:
    label: str
    factor: str  # "A", "B" or "C"
    index: int  # e_alpha = E[index, index+1] in that factor (0-based)


@dataclass(frozen=True)
class CaseModel:
    id: CaseId
    dims: tuple[int, int, int]
    has_vc_summand: bool
    g0_dim: int
    dim_b0: int
    flag_dim: int
    pencil: tuple  # (M0, M1), each dim V_C x dim V_B
    u0: tuple  # V_B component of the base point
    w0: tuple | None  # V_C component (E7a4 only)
    roots: tuple[SimpleRoot, ...]
    torus: tuple[str, ...] = field(default=())

    @property
    def dA(self) -> int:
        return self.dims[0]

    @property
    def dB(self) -> int:
        return self.dims[1]

    @property
    def dC(self) -> int:
        return self.dims[2]

    @property
    def g2_dim(self) -> int:
        return self.dB + (self.dC if self.has_vc_summand else 0) + self.dA * self.dB * self.dC

    @property
    def vb_offset(self) -> int:
        return 0

    @property
    def vc_offset(self) -> int | None:
        return self.dB if self.has_vc_summand else None

    @property
    def tensor_offset(self) -> int:
        return self.dB + (self.dC if self.has_vc_summand else 0)

    def tensor_index(self, iA: int, iB: int, iC: int) -> int:
        return self.tensor_offset + (iA * self.dB + iB) * self.dC + iC

    def root(self, label: str) -> SimpleRoot:
        for r in self.roots:
            if r.label == label:
                return r
        raise KeyError(label)

    def factor_rank(self, factor: str) -> int:
        return sum(1 for r in self.roots if r.factor == factor)

    def flag_total(self, q: int) -> int:
        """Number of F_q-points of the flag variety G0/B0."""
        total = 1
        for d in self.dims:
            total *= flag_count(d, q)
        return total


def flag_count(n: int, q: int) -> int:
    """Complete flags in F_q^n: prod_{i<=n} (q^i - 1)/(q - 1)."""
    out = 1
    for i in range(1, n + 1):
        out *= sum(q ** j for j in range(i))
    return out


E7A4 = CaseModel(
    id=CaseId.E7a4,
    dims=(2, 2, 3),
    has_vc_summand=True,
    g0_dim=17,
    dim_b0=12,
    flag_dim=5,
    # lambda*[[1,0],[0,1],[0,0]] + mu*[[0,0],[1,0],[0,1]]
    pencil=(((1, 0), (0, 1), (0, 0)), ((0, 0), (1, 0), (0, 1))),
    u0=(1, 1),
    w0=(0, 1, 0),
    roots=(
        SimpleRoot("A", "A", 0),
        SimpleRoot("B", "B", 0),
        SimpleRoot("C1", "C", 0),
        SimpleRoot("C2", "C", 1),
    ),
    torus=("x", "y", "z"),
)

E7A5 = CaseModel(
    id=CaseId.E7a5,
    dims=(2, 3, 3),
    has_vc_summand=False,
    g0_dim=21,
    dim_b0=14,
    flag_dim=7,
    # lambda*x1*y1 + (lambda+mu)*x2*y2 + mu*x3*y3
    pencil=(((1, 0, 0), (0, 1, 0), (0, 0, 0)), ((0, 0, 0), (0, 1, 0), (0, 0, 1))),
    u0=(1, 1, 1),
    w0=None,
    roots=(
        SimpleRoot("A", "A", 0),
        SimpleRoot("B1", "B", 0),
        SimpleRoot("B2", "B", 1),
        SimpleRoot("C1", "C", 0),
        SimpleRoot("C2", "C", 1),
    ),
    torus=("x", "y"),
)

CASES = {CaseId.E7a4: E7A4, CaseId.E7a5: E7A5}


def get_case(case) -> CaseModel:
    if isinstance(case, CaseModel):
        return case
    try:
        return CASES[CaseId(case)]
    except ValueError:
        raise ValueError(f"unknown case {case!r}; expected one of {[c.value for c in CaseId]}")


# -- g0 elements ---------------------------------------------------------------

def _mat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def _zeros(n: int) -> tuple:
    return _mat([[0] * n for _ in range(n)])


def _elementary(n: int, i: int, j: int, c=1) -> tuple:
    return _mat([[c if (r, s) == (i, j) else 0 for s in range(n)] for r in range(n)])


def _trace(m) -> object:
    return sum(m[i][i] for i in range(len(m)))


@dataclass(frozen=True)
class G0Element:
    """An element (a, b, c, torus scalars) of g0, with a, b, c traceless."""

    a: tuple
    b: tuple
    c: tuple
    x: object = 0
    y: object = 0
    z: object = 0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if _trace(getattr(self, name)) != 0:
                raise ValueError(f"block {name} is not traceless")

    def to_gl(self, case: CaseModel) -> tuple:
        """Image (gA, gB, gC) in gl(V_A) + gl(V_B) + gl(V_C).

        E7a4: ((z-x-y)I + a, xI + b, yI + c).
        E7a5: ((y-x)I + a, xI + b, c).
        """
        case = get_case(case)
        if case.id is CaseId.E7a4:
            sA, sB, sC = self.z - self.x - self.y, self.x, self.y
        else:
            if self.z != 0:
                raise ValueError("E7a5 has a rank-2 torus; z must be 0")
            sA, sB, sC = self.y - self.x, self.x, 0
        return (_add_scalar(self.a, sA), _add_scalar(self.b, sB), _add_scalar(self.c, sC))


def _add_scalar(m, s):
    n = len(m)
    return _mat([[m[i][j] + (s if i == j else 0) for j in range(n)] for i in range(n)])


def g0_basis(case) -> list[tuple[str, G0Element]]:
    """A labelled basis of g0 (Cartan of each sl, root vectors, torus)."""
    case = get_case(case)
    blocks = {"a": case.dA, "b": case.dB, "c": case.dC}
    out = []
    for name, n in blocks.items():
        mats = []
        for i in range(n - 1):
            h = [[0] * n for _ in range(n)]
            h[i][i], h[i + 1][i + 1] = 1, -1
            mats.append((f"{name}:H{i+1}", _mat(h)))
        for i in range(n):
            for j in range(n):
                if i != j:
                    mats.append((f"{name}:E{i+1}{j+1}", _elementary(n, i, j)))
        for label, m in mats:
            kw = {k: _zeros(blocks[k]) for k in blocks}
            kw[name] = m
            out.append((label, G0Element(**kw)))
    for t in case.torus:
        kw = {k: _zeros(blocks[k]) for k in blocks}
        kw[t] = 1
        out.append((f"torus:{t}", G0Element(**kw)))
    assert len(out) == case.g0_dim
    return out


# -- the action ---------------------------------------------------------------

def base_point(case) -> tuple:
    """Integer coordinates of the chosen point h of the open orbit."""
    case = get_case(case)
    out = [0] * case.g2_dim
    out[: case.dB] = case.u0
    if case.has_vc_summand:
        out[case.vc_offset: case.vc_offset + case.dC] = case.w0
    for p in range(case.dA):
        M = case.pencil[p]
        for r in range(case.dC):
            for c in range(case.dB):
                out[case.tensor_index(p, c, r)] = M[r][c]
    return tuple(out)


def pencil_of(case, vec) -> list:
    """Read the tensor part of a g2 vector back as matrices M_p (C x B)."""
    case = get_case(case)
    return [
        [[vec[case.tensor_index(p, c, r)] for c in range(case.dB)] for r in range(case.dC)]
        for p in range(case.dA)
    ]


def act_gl(case, gA, gB, gC, vec) -> tuple:
    """Action of (gA, gB, gC) in gl+gl+gl on a g2 vector (entries in any ring)."""
    case = get_case(case)
    if len(vec) != case.g2_dim:
        raise ValueError(f"vector of length {len(vec)} for case {case.id.value} (dim g2 = {case.g2_dim})")
    dA, dB, dC = case.dims
    zero = vec[0] * 0
    out = [zero] * case.g2_dim
    u = vec[:dB]
    for i in range(dB):
        out[i] = sum((gB[i][j] * u[j] for j in range(dB)), zero)
    if case.has_vc_summand:
        o = case.vc_offset
        w = vec[o: o + dC]
        for j in range(dC):
            out[o + j] = sum((w[i] * gC[i][j] for i in range(dC)), zero)
    M = pencil_of(case, vec)
    for p in range(dA):
        for r in range(dC):
            for c in range(dB):
                acc = zero
                for s in range(dC):
                    acc = acc + gC[r][s] * M[p][s][c]
                for s in range(dB):
                    acc = acc + M[p][r][s] * gB[s][c]
                for s in range(dA):
                    acc = acc + gA[s][p] * M[s][r][c]
                out[case.tensor_index(p, c, r)] = acc
    return tuple(out)


def act(case, Z: G0Element, vec) -> tuple:
    case = get_case(case)
    gA, gB, gC = Z.to_gl(case)
    return act_gl(case, gA, gB, gC, vec)


@lru_cache(maxsize=None)
def action_tensor(case) -> np.ndarray:
    """Integer array A[k, j, i] = i-th coordinate of (basis_k of g0) . e_j."""
    case = get_case(case)
    n = case.g2_dim
    basis = g0_basis(case)
    A = np.zeros((len(basis), n, n), dtype=np.int64)
    for k, (_, Z) in enumerate(basis):
        for j in range(n):
            e = [0] * n
            e[j] = 1
            A[k, j, :] = act(case, Z, tuple(e))
    return A


def _field_of(vec):
    for x in vec:
        if isinstance(x, Fq):
            return GF(x.q)
    return QQ


def orbit_map_matrix(case, vec) -> Matrix:
    """Matrix whose rows are Z_k . vec for the g0 basis Z_k."""
    case = get_case(case)
    field = _field_of(vec)
    vec = tuple(field(x) for x in vec)
    rows = [act(case, Z, vec) for _, Z in g0_basis(case)]
    return Matrix(rows, case.g2_dim, field)


def stabilizer_rank(case, vec) -> int:
    """Rank of g0 -> g2, Z -> Z.vec  (= dim of the orbit through vec)."""
    return orbit_map_matrix(case, vec).rank()


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix modulo a prime p (p < 2**31)."""
    A = np.array(M, dtype=np.int64) % p
    nr, nc = A.shape
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - (col[rows, None] * A[r]) % p) % p
        r += 1
    return r


@lru_cache(maxsize=None)
def good_reduction(case, p: int) -> bool:
    """True when the base point still has a finite stabilizer modulo p.

    At other primes h mod p lies outside the open orbit over F_p and point
    counts of the X_U need not follow the characteristic-zero polynomials.
    """
    case = get_case(case)
    M = np.einsum("kji,j->ki", action_tensor(case), np.array(base_point(case), dtype=np.int64))
    return rank_mod_p(M, p) == case.g2_dim


# -- Borel and parabolic generators --------------------------------------------

def _gl_triple(case, factor: str, mat) -> tuple:
    z = {"A": _zeros(case.dA), "B": _zeros(case.dB), "C": _zeros(case.dC)}
    z[factor] = mat
    return (z["A"], z["B"], z["C"])


def borel_generators(case) -> list[tuple[str, tuple]]:
    """Cartan elements plus positive root vectors of b0, as gl triples."""
    case = get_case(case)
    out = []
    for factor, n in zip("ABC", case.dims):
        for i in range(n):
            out.append((f"{factor}:E{i+1}{i+1}", _gl_triple(case, factor, _elementary(n, i, i))))
        for i in range(n):
            for j in range(i + 1, n):
                out.append((f"{factor}:E{i+1}{j+1}", _gl_triple(case, factor, _elementary(n, i, j))))
    return out


def positive_simple_generators(case) -> list[tuple[str, tuple]]:
    case = get_case(case)
    out = []
    for r in case.roots:
        n = case.dims["ABC".index(r.factor)]
        out.append((r.label, _gl_triple(case, r.factor, _elementary(n, r.index, r.index + 1))))
    return out


def negative_simple_generators(case) -> list[tuple[str, tuple]]:
    """One f_alpha per simple root, in the fixed order A, B..., C..."""
    case = get_case(case)
    out = []
    for r in case.roots:
        n = case.dims["ABC".index(r.factor)]
        out.append((r.label, _gl_triple(case, r.factor, _elementary(n, r.index + 1, r.index))))
    return out


def flag_subspaces(case, factor: str) -> list[list[tuple]]:
    """The fixed flag of V_factor as lists of basis vectors, F^1 .. F^{n-1}."""
    case = get_case(case)
    n = case.dims["ABC".index(factor)]
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if factor == "C":
        basis = basis[::-1]  # reverse flag <e3> < <e2,e3>
    return [basis[:k] for k in range(1, n)]


def preserves_flag(case, factor: str, mat) -> bool:
    """Does mat (in gl(V_factor)) map each flag member into itself?

    V_A and V_B act on columns, V_C on rows.
    """
    from .exact import contains

    case = get_case(case)
    n = len(mat)
    for F in flag_subspaces(case, factor):
        for v in F:
            if factor == "C":
                img = tuple(sum(v[i] * mat[i][j] for i in range(n)) for j in range(n))
            else:
                img = tuple(sum(mat[i][j] * v[j] for j in range(n)) for i in range(n))
            if not contains(F, img, n):
                return False
    return True


# -- serialization --------------------------------------------------------------

def to_json_dict(case) -> dict:
    case = get_case(case)
    return {
        "schema_version": SCHEMA_VERSION,
        "case": case.id.value,
        "dims": {"V_A": case.dA, "V_B": case.dB, "V_C": case.dC},
        "g0_dim": case.g0_dim,
        "g2_dim": case.g2_dim,
        "dim_b0": case.dim_b0,
        "flag_dim": case.flag_dim,
        "g2_layout": (["V_B", "V_C", "V_A*xV_B*xV_C*"] if case.has_vc_summand else ["V_B", "V_A*xV_B*xV_C*"]),
        "base_point": list(base_point(case)),
        "roots": [r.label for r in case.roots],
        "borel_generators": {
            label: [list(map(list, m)) for m in triple] for label, triple in borel_generators(case)
        },
        "negative_simple_generators": {
            label: [list(map(list, m)) for m in triple] for label, triple in negative_simple_generators(case)
        },
    }


def to_json(case) -> str:
    return json.dumps(to_json_dict(case), indent=2, sort_keys=True)
