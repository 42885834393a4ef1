# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled profile-histogram kernel.

Loops over (B-flag, C-flag, A-line) triples and bins each flag by its
thresholds.  Mirrors ``_fallback.histogram_range`` exactly.
"""


def histogram_range(
    long long q,
    const long long[:, ::1] A,
    const long long[:, :, ::1] B,
    const long long[:, :, :, ::1] CM,
    const long long[::1] lmin,
    const long long[::1] mmin,
    int nlev,
    Py_ssize_t b_start,
    Py_ssize_t b_stop,
    long long[::1] hist,
):
    """Accumulate bins for B-flags b_start <= b < b_stop into ``hist``.

    CM[n, p, r, :] is the row vector c_r . M_p for C-flag n.
    """
    cdef Py_ssize_t nA = A.shape[0], nC = CM.shape[0]
    cdef int dA = CM.shape[1], dC = CM.shape[2], dB = CM.shape[3]
    cdef int nl = dB + 1, nm = dC + 1
    cdef Py_ssize_t b, n, a
    cdef int p, r, c, k, i, depth
    cdef long long s, kcode, hcode, code
    cdef long long N[2][3][3]
    cdef long long pow4[8]
    cdef bint ok

    pow4[0] = 1
    for i in range(1, 8):
        pow4[i] = pow4[i - 1] * 4

    with nogil:
        for b in range(b_start, b_stop):
            for n in range(nC):
                for p in range(dA):
                    for r in range(dC):
                        for c in range(dB):
                            s = 0
                            for k in range(dB):
                                s = s + CM[n, p, r, k] * B[b, c, k]
                            N[p][r][c] = s % q
                kcode = 0
                for i in range(1, nlev + 1):
                    depth = 0
                    for r in range(dC):
                        ok = True
                        for c in range(i):
                            for p in range(dA):
                                if N[p][r][c] != 0:
                                    ok = False
                        if not ok:
                            break
                        depth += 1
                    kcode = kcode + depth * pow4[nlev + i - 1]
                for a in range(nA):
                    hcode = 0
                    for i in range(1, nlev + 1):
                        depth = 0
                        for r in range(dC):
                            ok = True
                            for c in range(i):
                                if (A[a, 0] * N[0][r][c] + A[a, 1] * N[1][r][c]) % q != 0:
                                    ok = False
                                    break
                            if not ok:
                                break
                            depth += 1
                        hcode = hcode + depth * pow4[i - 1]
                    code = hcode + kcode
                    hist[(code * nl + lmin[b]) * nm + mmin[n]] += 1
