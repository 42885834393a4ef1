"""Pure numpy profile-histogram kernel, vectorized over C-flags and A-lines."""

from __future__ import annotations

import numpy as np


def _depths(Z: np.ndarray, nlev: int) -> list[np.ndarray]:
    """Z[..., r, c] is True where the pairing vanishes; depth_i counts leading good rows."""
    out = []
    for i in range(1, nlev + 1):
        rows = Z[..., :i].all(axis=-1)
        out.append(np.cumprod(rows, axis=-1).sum(axis=-1))
    return out


def histogram_range(q, A, B, CM, lmin, mmin, nlev, b_start, b_stop, hist):
    nC, dA, dC, dB = CM.shape
    nl, nm = dB + 1, dC + 1
    pow4 = 4 ** np.arange(2 * nlev, dtype=np.int64)
    size = hist.shape[0]
    for b in range(b_start, b_stop):
        N = np.einsum("nprk,ck->nprc", CM, B[b]) % q  # (nC, dA, dC, dB)
        kcode = np.zeros(nC, dtype=np.int64)
        for i, d in enumerate(_depths((N == 0).all(axis=1), nlev)):
            kcode += d * pow4[nlev + i]
        Na = np.einsum("ap,nprc->anrc", A, N) % q  # (nA, nC, dC, dB)
        hcode = np.zeros(Na.shape[:2], dtype=np.int64)
        for i, d in enumerate(_depths(Na == 0, nlev)):
            hcode += d * pow4[i]
        code = hcode + kcode[None, :]
        idx = (code * nl + lmin[b]) * nm + mmin[None, :]
        hist += np.bincount(idx.ravel(), minlength=size)
