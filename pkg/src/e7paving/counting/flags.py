"""Flags of G0/B0 over F_q and their incidence profiles against the base point.

A flag point is stored as three adapted bases: ``a`` spans L_A, the rows of
``B`` give L_B^i = span(B[0..i-1]) and the rows of ``C`` give
L_C^j = span(C[0..j-1]).  Every flag has exactly one such canonical basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..cases import CaseId, get_case
from ..exact import is_prime


def _check_q(q: int):
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")


@lru_cache(maxsize=None)
def projective_points(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Points of P^{n-1}(F_q), normalized so the first nonzero entry is 1."""
    _check_q(q)
    out = []
    for j in range(n):
        for tail in product(range(q), repeat=n - j - 1):
            out.append((0,) * j + (1,) + tail)
    return tuple(out)


def _pivot(v) -> int:
    return next(i for i, x in enumerate(v) if x)


@lru_cache(maxsize=None)
def adapted_flags(n: int, q: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Complete flags of F_q^n as adapted bases (n = 2 or 3)."""
    _check_q(q)
    if n == 2:
        out = []
        for v in projective_points(2, q):
            other = 1 - _pivot(v)
            out.append((v, tuple(int(i == other) for i in range(2))))
        return tuple(out)
    if n != 3:
        raise ValueError("only dimensions 2 and 3 occur")
    out = []
    for v in projective_points(3, q):
        j = _pivot(v)
        rest = [i for i in range(3) if i != j]
        for w2 in projective_points(2, q):
            w = [0, 0, 0]
            w[rest[0]], w[rest[1]] = w2
            j2 = _pivot(w)
            k = next(i for i in range(3) if i not in (j, j2))
            out.append((v, tuple(w), tuple(int(i == k) for i in range(3))))
    return tuple(out)


@dataclass(frozen=True)
class FlagPoint:
    a: tuple
    B: tuple
    C: tuple


def enumerate_flags(case, q: int):
    """Every F_q-point of G0/B0 exactly once.

    For E7a4 the V_B factor is P(V_B): only L_B^1 = span(B[0]) matters and
    B[1] merely completes the basis.
    """
    case = get_case(case)
    _check_q(q)
    for a in projective_points(case.dA, q):
        for B in adapted_flags(case.dB, q):
            for C in adapted_flags(case.dC, q):
                yield FlagPoint(a, B, C)


def levels(case) -> int:
    """Number of V_B levels i carrying conditions (2 for E7a4, 3 for E7a5)."""
    case = get_case(case)
    return 2 if case.id is CaseId.E7a4 else 3


def _rank_mod(vectors, q) -> int:
    rows = [list(v) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % q:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def in_span(v, basis, q) -> bool:
    if not any(x % q for x in v):
        return True
    if not basis:
        return False
    return _rank_mod(list(basis) + [v], q) == _rank_mod(basis, q)


@dataclass(frozen=True)
class FlagProfile:
    """Maximal thresholds of a flag; membership in X_U is a comparison."""

    H: tuple
    K: tuple
    ell_min: int
    m_min: int | None

    def admits(self, params) -> bool:
        if any(h > H for h, H in zip(params.h, self.H)):
            return False
        if any(k > K for k, K in zip(params.k, self.K)):
            return False
        if params.ell < self.ell_min:
            return False
        if self.m_min is not None and params.m < self.m_min:
            return False
        return True


def pairing(case, a, u, w, q: int) -> int:
    """Q_h(a, u, w) = w . (a0 M0 + a1 M1) . u  (mod q)."""
    case = get_case(case)
    total = 0
    for p in range(case.dA):
        M = case.pencil[p]
        for r in range(case.dC):
            for c in range(case.dB):
                total += a[p] * w[r] * M[r][c] * u[c]
    return total % q


def flag_profile(case, flag: FlagPoint, q: int) -> FlagProfile:
    case = get_case(case)
    n = levels(case)
    dC = case.dC
    basisA = [tuple(int(i == j) for j in range(case.dA)) for i in range(case.dA)]

    def max_depth(avecs, i):
        depth = 0
        for r in range(dC):
            if all(pairing(case, a, flag.B[c], flag.C[r], q) == 0 for a in avecs for c in range(i)):
                depth += 1
            else:
                break
        return depth

    H = tuple(max_depth([flag.a], i) for i in range(1, n + 1))
    K = tuple(max_depth(basisA, i) for i in range(1, n + 1))
    ell_min = next(l for l in range(case.dB + 1) if in_span(case.u0, flag.B[:l], q))
    m_min = None
    if case.has_vc_summand:
        m_min = next(m for m in range(dC + 1) if in_span(case.w0, flag.C[:m], q))
    return FlagProfile(H, K, ell_min, m_min)


def naive_member(case, params, flag: FlagPoint, q: int) -> bool:
    """Direct test of the incidence conditions defining X_U (no thresholds)."""
    case = get_case(case)
    n = levels(case)
    LB = lambda i: flag.B[:i]
    LC = lambda j: flag.C[:j]
    if not in_span(case.u0, LB(params.ell), q):
        return False
    if case.has_vc_summand and not in_span(case.w0, LC(params.m), q):
        return False
    VA = [tuple(int(i == j) for j in range(case.dA)) for i in range(case.dA)]
    for i in range(1, n + 1):
        for u in LB(i):
            for w in LC(params.h[i - 1]):
                if pairing(case, flag.a, u, w, q):
                    return False
            for w in LC(params.k[i - 1]):
                if any(pairing(case, a, u, w, q) for a in VA):
                    return False
    return True


# -- profile encoding shared with the histogram kernels --------------------------

def profile_shape(case) -> tuple[int, int, int]:
    """(number of H/K codes, ell_min values, m_min values)."""
    case = get_case(case)
    n = levels(case)
    return 4 ** (2 * n), case.dB + 1, case.dC + 1


def encode(case, prof: FlagProfile) -> int:
    case = get_case(case)
    code = 0
    for i, x in enumerate(prof.H + prof.K):
        code += x * 4 ** i
    nhk, nl, nm = profile_shape(case)
    m = prof.m_min if prof.m_min is not None else 0
    return (code * nl + prof.ell_min) * nm + m


@lru_cache(maxsize=None)
def decode_table(case) -> dict[str, np.ndarray]:
    """Arrays indexed by histogram bin: H (bins x n), K, ell_min, m_min."""
    case = get_case(case)
    n = levels(case)
    nhk, nl, nm = profile_shape(case)
    idx = np.arange(nhk * nl * nm)
    m = idx % nm
    ell = (idx // nm) % nl
    code = idx // (nm * nl)
    digits = np.stack([(code // 4 ** i) % 4 for i in range(2 * n)], axis=1)
    return {"H": digits[:, :n], "K": digits[:, n:], "ell_min": ell, "m_min": m}


def complete_basis(vectors, n: int, q: int) -> tuple:
    """Extend independent vectors to a basis of F_q^n with standard vectors."""
    out = [tuple(int(x) % q for x in v) for v in vectors]
    for i in range(n):
        if len(out) == n:
            break
        e = tuple(int(i == j) for j in range(n))
        if not in_span(e, out, q):
            out.append(e)
    return tuple(out)


def inputs_from(case, q: int, A, B, C) -> dict[str, np.ndarray]:
    """Kernel arrays for the product of explicit lists of lines and adapted bases.

    B and C entries may list fewer vectors than the dimension; they are
    completed by standard vectors (only the leading spans matter).
    """
    case = get_case(case)
    B = [complete_basis(b, case.dB, q) for b in B]
    C = [complete_basis(c, case.dC, q) for c in C]
    lmin = [next(l for l in range(case.dB + 1) if in_span(case.u0, b[:l], q)) for b in B]
    if case.has_vc_summand:
        mmin = [next(m for m in range(case.dC + 1) if in_span(case.w0, c[:m], q)) for c in C]
    else:
        mmin = [0] * len(C)
    M = np.array(case.pencil, dtype=np.int64)  # (dA, dC, dB)
    Carr = np.array(C, dtype=np.int64).reshape(len(C), case.dC, case.dC)
    return {
        "A": np.array(A, dtype=np.int64).reshape(len(A), case.dA) % q,
        "B": np.array(B, dtype=np.int64).reshape(len(B), case.dB, case.dB),
        "C": Carr,
        "M": M,
        "CM": np.ascontiguousarray(np.einsum("nrs,psc->nprc", Carr, M) % q, dtype=np.int64),
        "lmin": np.array(lmin, dtype=np.int64),
        "mmin": np.array(mmin, dtype=np.int64),
    }


@lru_cache(maxsize=None)
def kernel_inputs(case, q: int) -> dict[str, np.ndarray]:
    """Kernel arrays for the whole flag variety at q."""
    case = get_case(case)
    _check_q(q)
    return inputs_from(
        case, q, projective_points(case.dA, q), adapted_flags(case.dB, q), adapted_flags(case.dC, q)
    )
