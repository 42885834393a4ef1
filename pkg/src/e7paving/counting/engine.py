"""Point counts of every X_U at once through a per-q profile histogram."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..cases import get_case, good_reduction
from ..exact import UniPoly, is_prime, lagrange_interpolate
from ..subspaces import (
    NotApplicable,
    SubspaceParams,
    enumerate_subspaces,
    expected_dims,
    meets_open_orbit,
    parabolic_type,
    subspace_basis,
)
from . import _fallback
from .flags import decode_table, kernel_inputs, levels, profile_shape

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13, 17)
DEFAULT_HOLDOUTS = (19,)

BACKENDS = ("compiled", "numpy")


def default_backend() -> str:
    if os.environ.get("E7PAVING_BACKEND") in BACKENDS:
        want = os.environ["E7PAVING_BACKEND"]
        if want == "compiled" and _kernel is None:
            raise RuntimeError("compiled kernel requested but the extension is not built")
        return want
    return "compiled" if _kernel is not None else "numpy"


def _module(backend: str):
    if backend == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled kernel is not available")
        return _kernel
    if backend == "numpy":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def histogram_of(case, q: int, inp: dict, backend: str | None = None, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Profile histogram of the product described by ``flags.inputs_from``."""
    case = get_case(case)
    hist = np.zeros(int(np.prod(profile_shape(case))), dtype=np.int64)
    stop = len(inp["B"]) if stop is None else stop
    _module(backend or default_backend()).histogram_range(
        q, inp["A"], inp["B"], inp["CM"], inp["lmin"], inp["mmin"], levels(case), start, stop, hist
    )
    return hist


def _run_chunk(args):
    case_id, q, backend, start, stop = args
    return histogram_of(case_id, q, kernel_inputs(case_id, q), backend, start, stop)


def compute_histogram(case, q: int, backend: str | None = None, jobs: int = 1, chunks: int | None = None) -> np.ndarray:
    """Histogram of flag profiles at q; bins are laid out as in ``flags.encode``.

    The B-flag range is split into chunks, each filled into a private
    histogram and summed in chunk order, so the result does not depend on
    ``jobs`` or ``chunks``.
    """
    case = get_case(case)
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    backend = backend or default_backend()
    nB = len(kernel_inputs(case, q)["B"])
    chunks = max(1, min(nB, chunks or jobs))
    bounds = [(i * nB) // chunks for i in range(chunks + 1)]
    tasks = [(case.id.value, q, backend, bounds[i], bounds[i + 1]) for i in range(chunks)]
    if jobs > 1 and chunks > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, tasks))
    else:
        parts = [_run_chunk(t) for t in tasks]
    total = np.zeros_like(parts[0])
    for h in parts:
        total += h
    return total


_HISTOGRAMS: dict = {}


def profile_histogram(case, q: int, backend: str | None = None, jobs: int = 1) -> np.ndarray:
    """Memoized ``compute_histogram`` (read-only array)."""
    case = get_case(case)
    key = (case.id.value, q, backend or default_backend())
    if key not in _HISTOGRAMS:
        h = compute_histogram(case, q, key[2], jobs=jobs)
        h.setflags(write=False)
        _HISTOGRAMS[key] = h
    return _HISTOGRAMS[key]


def clear_cache():
    _HISTOGRAMS.clear()


def admitted_mask(case, params: SubspaceParams) -> np.ndarray:
    """Boolean mask over histogram bins whose profile admits ``params``."""
    case = get_case(case)
    t = decode_table(case)
    mask = np.ones(len(t["ell_min"]), dtype=bool)
    for i, (k, h) in enumerate(zip(params.k, params.h)):
        mask &= t["H"][:, i] >= h
        mask &= t["K"][:, i] >= k
    mask &= t["ell_min"] <= params.ell
    if params.m is not None:
        mask &= t["m_min"] <= params.m
    return mask


@dataclass(frozen=True)
class CountRecord:
    params: SubspaceParams
    q: int
    count: int

    def to_dict(self) -> dict:
        return {"case": self.params.case, "U": self.params.label(), "q": self.q, "count": self.count}


def count_points(case, params: SubspaceParams, q: int, backend: str | None = None, jobs: int = 1) -> CountRecord:
    case = get_case(case)
    hist = profile_histogram(case, q, backend, jobs)
    return CountRecord(params, q, int(hist[admitted_mask(case, params)].sum()))


def count_all(case, q: int, params_list=None, backend: str | None = None, jobs: int = 1) -> dict:
    """{params: count} for every enumerated subspace (or the given ones)."""
    case = get_case(case)
    hist = profile_histogram(case, q, backend, jobs)
    nz = np.nonzero(hist)[0]
    weights = hist[nz]
    if params_list is None:
        params_list = [U.params for U in enumerate_subspaces(case)]
    return {p: int(weights[admitted_mask(case, p)[nz]].sum()) for p in params_list}


# -- polynomials -----------------------------------------------------------------

def _qint(j: int) -> UniPoly:
    """1 + q + ... + q^j."""
    return UniPoly([1] * (j + 1))


def levi_flag_poly(case, labels) -> UniPoly:
    """|P/B0(F_q)| for the parabolic P generated by B0 and the given simple roots."""
    case = get_case(case)
    poly = UniPoly([1])
    for factor in "ABC":
        idx = sorted(r.index for r in case.roots if r.factor == factor and r.label in labels)
        run = 0
        for pos, i in enumerate(idx):
            run += 1
            if pos + 1 == len(idx) or idx[pos + 1] != i + 1:
                # a chain of `run` simple roots: GL_{run+1}/B counts prod_{j<=run} [j+1]_q
                for j in range(1, run + 1):
                    poly = poly * _qint(j)
                run = 0
    return poly


def flag_total_poly(case) -> UniPoly:
    case = get_case(case)
    return levi_flag_poly(case, frozenset(r.label for r in case.roots))


@dataclass
class PoincarePolynomial:
    params: SubspaceParams
    poly: UniPoly
    samples: dict
    interp_primes: tuple
    check_primes: tuple
    expected_degree: int
    method: str
    consistent: bool
    nonneg_integer_coeffs: bool
    residuals: dict = field(default_factory=dict)
    bad_reduction: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def degree_ok(self) -> bool:
        return self.poly.degree == self.expected_degree

    @property
    def constant_term(self) -> int:
        return int(self.poly.constant_term)

    @property
    def ok(self) -> bool:
        return self.consistent and self.nonneg_integer_coeffs and self.degree_ok

    def to_dict(self) -> dict:
        return {
            "U": self.params.label(),
            "coefficients": [str(c) for c in self.poly.coeffs],
            "polynomial": str(self.poly),
            "degree": self.degree,
            "expected_degree": self.expected_degree,
            "constant_term": str(self.poly.constant_term),
            "interp_primes": list(self.interp_primes),
            "check_primes": list(self.check_primes),
            "method": self.method,
            "samples": {str(q): c for q, c in sorted(self.samples.items())},
            "consistent": self.consistent,
            "nonneg_integer_coeffs": self.nonneg_integer_coeffs,
            "residuals": {str(q): r for q, r in sorted(self.residuals.items())},
            "bad_reduction_residuals": {str(q): r for q, r in sorted(self.bad_reduction.items())},
        }


def _fiber(case, params) -> tuple[UniPoly, int, int]:
    """(|P_U/B0| polynomial, dim X, dim Y); raises NotApplicable if X_U is empty."""
    U = subspace_basis(case, params)
    dim_x, dim_y = expected_dims(case, U, _nonempty(case, params))
    labels, _ = parabolic_type(case, U)
    return levi_flag_poly(case, labels), dim_x, dim_y


@lru_cache(maxsize=None)
def _nonempty(case, params) -> bool:
    return meets_open_orbit(case, subspace_basis(case, params))


def split_primes(case, qs) -> tuple[list, list]:
    """(good, bad) primes, sorted; see ``cases.good_reduction``."""
    case = get_case(case)
    qs = sorted(set(qs))
    return [q for q in qs if good_reduction(case, q)], [q for q in qs if not good_reduction(case, q)]


def poincare_from_counts(case, params: SubspaceParams, samples: dict, method: str = "auto") -> PoincarePolynomial:
    """Interpolate |X_U(F_q)| from exact samples {q: count}.

    Only primes of good reduction are used.  ``direct`` interpolates X on the
    smallest dim X + 1 of them.  ``fiber`` divides by |P_U/B0(F_q)| first,
    interpolates the Y counts on the smallest dim Y + 1 samples and multiplies
    back.  Every other good sample is a check; ``auto`` picks direct when a
    check remains.  Samples at bad primes are compared but only reported.
    """
    case = get_case(case)
    good, bad = split_primes(case, samples)
    try:
        fiber, dim_x, dim_y = _fiber(case, params)
    except NotApplicable:
        poly = UniPoly([])
        residuals = {q: samples[q] for q in good if samples[q]}
        return PoincarePolynomial(
            params, poly, dict(samples), (), tuple(good), -1, "empty",
            consistent=not residuals, nonneg_integer_coeffs=True, residuals=residuals,
            bad_reduction={q: samples[q] for q in bad if samples[q]},
        )
    if method == "auto":
        method = "direct" if len(good) >= dim_x + 2 else "fiber"
    if method == "direct":
        need = dim_x + 1
        if len(good) < need:
            raise ValueError(f"{params}: need {need} good primes for degree {dim_x}, have {len(good)}")
        used = good[:need]
        poly = lagrange_interpolate([(q, samples[q]) for q in used])
    elif method == "fiber":
        need = dim_y + 1
        if len(good) < need:
            raise ValueError(f"{params}: need {need} good primes for dim Y = {dim_y}, have {len(good)}")
        used = good[:need]
        ys = []
        for q in used:
            f = int(fiber(q))
            if samples[q] % f:
                raise ArithmeticError(f"{params}: count {samples[q]} at q={q} not divisible by |P_U/B0| = {f}")
            ys.append((q, samples[q] // f))
        poly = lagrange_interpolate(ys) * fiber
    else:
        raise ValueError(f"unknown method {method!r}")
    checks = tuple(q for q in good if q not in used)
    residuals = {q: samples[q] - int(poly(q)) for q in checks if poly(q) != samples[q]}
    consistent = bool(checks) and not residuals
    if subspace_basis(case, params).dim == case.g2_dim:
        # X_U is the whole flag variety
        consistent = consistent and poly == flag_total_poly(case)
    return PoincarePolynomial(
        params, poly, dict(samples), tuple(used), checks, dim_x, method,
        consistent=consistent,
        nonneg_integer_coeffs=poly.has_nonneg_integer_coeffs(),
        residuals=residuals,
        bad_reduction={q: samples[q] - int(poly(q)) for q in bad if poly(q) != samples[q]},
    )


def required_samples(case, params: SubspaceParams) -> int:
    """Fewest good primes giving at least one check sample."""
    try:
        _, _, dim_y = _fiber(case, params)
    except NotApplicable:
        return 1
    return dim_y + 2


def poincare(case, params: SubspaceParams, primes=DEFAULT_PRIMES, holdouts=DEFAULT_HOLDOUTS,
             method: str = "auto", backend: str | None = None, jobs: int = 1) -> PoincarePolynomial:
    """Count X_U at primes and holdouts, then interpolate.

    Holdouts are only counted when the good primes alone leave no check sample.
    """
    case = get_case(case)
    qs = sorted(set(primes))
    if len(split_primes(case, qs)[0]) < required_samples(case, params):
        qs = sorted(set(qs) | set(holdouts))
    samples = {q: count_points(case, params, q, backend, jobs).count for q in qs}
    return poincare_from_counts(case, params, samples, method)


def yu_stats(case, params: SubspaceParams, primes=(5, 7, 11), backend: str | None = None) -> tuple[int, dict]:
    """(dim Y_U, {q: |Y_U(F_q)|}) with exact divisibility enforced at good primes."""
    case = get_case(case)
    fiber, _, dim_y = _fiber(case, params)
    out = {}
    for q in split_primes(case, primes)[0]:
        c = count_points(case, params, q, backend).count
        f = int(fiber(q))
        if c % f:
            raise ArithmeticError(f"{params}: count {c} at q={q} not divisible by |P_U/B0| = {f}")
        out[q] = c // f
    return dim_y, out
