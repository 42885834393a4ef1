"""Borel-stable subspaces U of g2 and their numerical invariants.

Every b0-stable subspace is a coordinate subspace in the weight basis of g2,
cut out by vanishing conditions

    q(F_A^1 x F_B^i x F_C^{h_i}) = 0,   q(V_A x F_B^i x F_C^{k_i}) = 0,

together with the vector summands F_B^l (and F_C^m for E7a4).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .cases import (
    CaseId,
    CaseModel,
    action_tensor,
    act_gl,
    borel_generators,
    get_case,
    negative_simple_generators,
    rank_mod_p,
    stabilizer_rank,
)
from .exact import QQ

# prime used for the fast rank certificate; full rank mod P implies full rank over Q
CERT_PRIME = 2_147_483_647


class NotApplicable(ValueError):
    """Raised when a quantity is requested for an empty X_U."""


@dataclass(frozen=True, order=True)
class SubspaceParams:
    case: str
    k: tuple
    h: tuple
    ell: int
    m: int | None = None

    def label(self) -> str:
        s = "".join(map(str, self.k)) + "|" + "".join(map(str, self.h)) + f"|{self.ell}"
        if self.m is not None:
            s += f"|{self.m}"
        return s

    def __str__(self):
        return f"{self.case}:U({self.label()})"

    @classmethod
    def parse(cls, case, text: str) -> "SubspaceParams":
        """Parse "00|10|2|3" (E7a4) or "000|100|3" (E7a5); commas are allowed."""
        case = get_case(case)
        parts = [p.replace(",", "").strip() for p in text.split("|")]
        want = 4 if case.id is CaseId.E7a4 else 3
        if len(parts) != want or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise ValueError(f"cannot parse {text!r} as parameters for {case.id.value}")
        k = tuple(int(ch) for ch in parts[0])
        h = tuple(int(ch) for ch in parts[1])
        ell = int(parts[2])
        m = int(parts[3]) if case.id is CaseId.E7a4 else None
        p = cls(case.id.value, k, h, ell, m)
        if not params_valid(case, p):
            raise ValueError(f"{text!r} violates the parameter constraints for {case.id.value}")
        return p


def params_valid(case, p: SubspaceParams) -> bool:
    case = get_case(case)
    n = case.dB if case.id is CaseId.E7a5 else 2
    if len(p.k) != n or len(p.h) != n:
        return False
    rng = range(0, 4)
    if not all(x in rng for x in p.k + p.h):
        return False
    if any(p.k[i] < p.k[i + 1] or p.h[i] < p.h[i + 1] for i in range(n - 1)):
        return False
    if any(p.k[i] > p.h[i] for i in range(n)):
        return False
    if not 0 <= p.ell <= case.dB:
        return False
    if case.has_vc_summand:
        return p.m is not None and 0 <= p.m <= case.dC
    return p.m is None


def _decreasing(n):
    return [t for t in product(range(4), repeat=n) if all(t[i] >= t[i + 1] for i in range(n - 1))]


def _raw_params(case: CaseModel):
    n = case.dB if case.id is CaseId.E7a5 else 2
    ms = range(case.dC + 1) if case.has_vc_summand else [None]
    for k in _decreasing(n):
        for h in _decreasing(n):
            if any(k[i] > h[i] for i in range(n)):
                continue
            for ell in range(case.dB + 1):
                for m in ms:
                    yield SubspaceParams(case.id.value, k, h, ell, m)


def support(case, p: SubspaceParams) -> frozenset:
    """Coordinates (weight vectors) spanning U(p)."""
    case = get_case(case)
    keep = set(range(p.ell))
    if case.has_vc_summand:
        # F_C^m of the reverse flag: the last m coordinates of V_C
        keep.update(case.vc_offset + j for j in range(case.dC - p.m, case.dC))
    n = len(p.k)
    for iA in range(case.dA):
        for iB in range(case.dB):
            for iC in range(case.dC):
                killed = False
                for i in range(1, n + 1):
                    # F_B^i = span(e_1..e_i); the top level i = n is all of V_B
                    if iB >= i:
                        continue
                    depth = case.dC - iC  # iC lies in F_C^t for t >= depth
                    if p.k[i - 1] >= depth or (iA == 0 and p.h[i - 1] >= depth):
                        killed = True
                        break
                if not killed:
                    keep.add(case.tensor_index(iA, iB, iC))
    return frozenset(keep)


@dataclass(frozen=True)
class Subspace:
    params: SubspaceParams
    support: frozenset
    ambient: int

    @property
    def dim(self) -> int:
        return len(self.support)

    @property
    def basis(self) -> tuple:
        """Exact basis over QQ (standard basis vectors of the support)."""
        return tuple(
            tuple(QQ(int(i == j)) for i in range(self.ambient)) for j in sorted(self.support)
        )

    def contains(self, vec) -> bool:
        return all(x == 0 for i, x in enumerate(vec) if i not in self.support)

    def contains_subspace(self, other: "Subspace") -> bool:
        return other.support <= self.support


def subspace_basis(case, params: SubspaceParams) -> Subspace:
    case = get_case(case)
    return Subspace(params, support(case, params), case.g2_dim)


@lru_cache(maxsize=None)
def enumerate_params(case) -> tuple[SubspaceParams, ...]:
    """All parameter tuples, one per distinct realized subspace (first wins)."""
    case = get_case(case)
    seen = {}
    for p in _raw_params(case):
        s = support(case, p)
        if s not in seen:
            seen[s] = p
    return tuple(seen.values())


@lru_cache(maxsize=None)
def enumerate_subspaces(case) -> tuple[Subspace, ...]:
    case = get_case(case)
    return tuple(subspace_basis(case, p) for p in enumerate_params(case))


def _image_in(case, U: Subspace, triple) -> bool:
    gA, gB, gC = triple
    for j in U.support:
        e = [0] * U.ambient
        e[j] = 1
        if not U.contains(act_gl(case, gA, gB, gC, tuple(e))):
            return False
    return True


def is_borel_stable(case, U: Subspace) -> bool:
    case = get_case(case)
    return all(_image_in(case, U, g) for _, g in borel_generators(case))


def parabolic_type(case, U: Subspace) -> tuple[frozenset, int]:
    """Simple roots alpha with f_alpha U in U, and dim P_U - dim B0."""
    case = get_case(case)
    labels = frozenset(lab for lab, g in negative_simple_generators(case) if _image_in(case, U, g))
    return labels, levi_positive_roots(case, labels)


def levi_positive_roots(case, labels) -> int:
    """Number of positive roots of the Levi subsystem spanned by `labels`."""
    case = get_case(case)
    total = 0
    for factor in "ABC":
        idx = sorted(r.index for r in case.roots if r.factor == factor and r.label in labels)
        # type A chains: a run of j consecutive simple roots has j(j+1)/2 positive roots
        run = 0
        prev = None
        for i in idx + [None]:
            if i is not None and prev is not None and i == prev + 1:
                run += 1
            else:
                total += run * (run + 1) // 2
                run = 1 if i is not None else 0
            prev = i
    return total


def in_open_orbit(case, vec) -> bool:
    case = get_case(case)
    return stabilizer_rank(case, vec) == case.g2_dim


def meets_open_orbit(case, U: Subspace, trials: int = 32, seed: int = 0, height: int = 100) -> bool:
    """Randomized search for a point of U in the open orbit.

    A point whose orbit map has full rank modulo a large prime has full rank
    over Q, so a True answer is certified.  False means no witness was found.
    """
    case = get_case(case)
    A = action_tensor(case)
    sup = sorted(U.support)
    if len(sup) < case.dim_b0:
        # a nonempty A_U is b0-stable of dimension dim U
        return False
    rng = random.Random(f"{seed}:{case.id.value}:{U.params.label()}")
    for _ in range(trials):
        vec = np.zeros(case.g2_dim, dtype=np.int64)
        for j in sup:
            vec[j] = rng.randint(-height, height)
        M = np.einsum("kji,j->ki", A, vec)
        if rank_mod_p(M, CERT_PRIME) == case.g2_dim:
            return True
    return False


def expected_dims(case, U: Subspace, nonempty: bool | None = None) -> tuple[int, int]:
    """(dim X_U, dim Y_U) from dim X = dim U - dim B0, dim Y = dim X - dim P_U/B0."""
    case = get_case(case)
    if nonempty is None:
        nonempty = meets_open_orbit(case, U)
    if not nonempty:
        raise NotApplicable(f"{U.params} does not meet the open orbit (X_U is empty)")
    _, dpu = parabolic_type(case, U)
    dim_x = U.dim - case.dim_b0
    return dim_x, dim_x - dpu
