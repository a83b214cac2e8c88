# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: quadratic symbols, prime sieves, squarefree family
enumeration, and L-coefficient sweeps.  Mirrors _pykernel's interface."""

import numpy as np

from libc.stdint cimport int64_t, int32_t, int8_t, uint8_t
from libc.stdlib cimport malloc, free

KERNEL_NAME = "cython"

DEF MAXC = 72

ctypedef int64_t i64
ctypedef int32_t i32
ctypedef int8_t i8
ctypedef uint8_t u8

cdef struct Fq:
    int q
    int p
    int k
    int tab  # 1 when the q*q lookup tables are present (q <= 128)
    const i32 *exp
    const i32 *log
    const i8 *qr
    const short *addt
    const short *subt
    const short *mult
    const short *invt


cdef class _FqHandle:
    """Holds the table buffers alive while C code uses raw pointers."""
    cdef Fq F
    cdef const i32[::1] expv
    cdef const i32[::1] logv
    cdef const i8[::1] qrv
    cdef const short[::1] addv
    cdef const short[::1] subv
    cdef const short[::1] mulv
    cdef const short[::1] invv

    def __cinit__(self, fs):
        self.qrv = fs.qr_sign
        self.F.q = fs.q
        self.F.p = fs.p
        self.F.k = fs.k
        self.F.qr = &self.qrv[0]
        if fs.k > 1:
            self.expv = fs.exp
            self.logv = fs.log
            self.F.exp = &self.expv[0]
            self.F.log = &self.logv[0]
        else:
            self.F.exp = NULL
            self.F.log = NULL
        if fs.addt is not None:
            self.addv = fs.addt
            self.subv = fs.subt
            self.mulv = fs.mult
            self.invv = fs.invt
            self.F.addt = &self.addv[0]
            self.F.subt = &self.subv[0]
            self.F.mult = &self.mulv[0]
            self.F.invt = &self.invv[0]
            self.F.tab = 1
        else:
            self.F.addt = NULL
            self.F.subt = NULL
            self.F.mult = NULL
            self.F.invt = NULL
            self.F.tab = 0


_handles: dict = {}


def _get_handle(fs):
    h = _handles.get(fs.q)
    if h is None:
        h = _FqHandle(fs)
        _handles[fs.q] = h
    return h


cdef inline int f_add(const Fq *F, int a, int b) noexcept nogil:
    cdef int s, m, out, p
    if F.tab:
        return F.addt[a * F.q + b]
    if F.k == 1:
        s = a + b
        if s >= F.q:
            s -= F.q
        return s
    p = F.p
    out = 0
    m = 1
    while a or b:
        out += (((a % p) + (b % p)) % p) * m
        a //= p
        b //= p
        m *= p
    return out


cdef inline int f_sub(const Fq *F, int a, int b) noexcept nogil:
    cdef int s, m, out, p, d
    if F.tab:
        return F.subt[a * F.q + b]
    if F.k == 1:
        s = a - b
        if s < 0:
            s += F.q
        return s
    p = F.p
    out = 0
    m = 1
    while a or b:
        d = (a % p) - (b % p)
        if d < 0:
            d += p
        out += d * m
        a //= p
        b //= p
        m *= p
    return out


cdef inline int f_mul(const Fq *F, int a, int b) noexcept nogil:
    if F.tab:
        return F.mult[a * F.q + b]
    if a == 0 or b == 0:
        return 0
    if F.k == 1:
        return (a * b) % F.q
    return F.exp[(F.log[a] + F.log[b]) % (F.q - 1)]


cdef inline int f_inv(const Fq *F, int a) noexcept nogil:
    cdef int e, r, b
    if F.tab:
        return F.invt[a]
    if F.k > 1:
        e = F.log[a]
        if e == 0:
            return 1
        return F.exp[F.q - 1 - e]
    r = 1
    b = a
    e = F.q - 2
    while e:
        if e & 1:
            r = (r * b) % F.q
        b = (b * b) % F.q
        e >>= 1
    return r


cdef inline int c_decode(const Fq *F, i64 enc, int *out) noexcept nogil:
    """Base-q digits of enc into out; returns the coefficient count."""
    cdef int n = 0
    while enc:
        out[n] = <int>(enc % F.q)
        enc //= F.q
        n += 1
    return n


cdef int c_mod(const Fq *F, int *a, int na, const int *b, int nb) noexcept nogil:
    """In-place a mod b on coefficient buffers; returns the new count of a."""
    cdef int i, j, c, f, invl, cnt
    if na < nb:
        return na
    invl = f_inv(F, b[nb - 1])
    for i in range(na - 1, nb - 2, -1):
        c = a[i]
        if c == 0:
            continue
        f = f_mul(F, c, invl)
        for j in range(nb):
            a[i - nb + 1 + j] = f_sub(F, a[i - nb + 1 + j], f_mul(F, f, b[j]))
    cnt = nb - 1
    while cnt > 0 and a[cnt - 1] == 0:
        cnt -= 1
    return cnt


cdef int c_jacobi(const Fq *F, const int *cin, int nc, const int *din, int nd) noexcept nogil:
    """(c/d) for monic nonzero d: leading-unit rule + reciprocity, no factoring."""
    cdef int cbuf[MAXC]
    cdef int dbuf[MAXC]
    cdef int *cp = cbuf
    cdef int *dp = dbuf
    cdef int *tp
    cdef int i, s, lead, invl, degc, degd, flip
    for i in range(nc):
        cp[i] = cin[i]
    for i in range(nd):
        dp[i] = din[i]
    flip = ((F.q - 1) // 2) & 1
    s = 1
    nc = c_mod(F, cp, nc, dp, nd)
    while True:
        if nc == 0:
            return s if nd == 1 else 0
        degc = nc - 1
        degd = nd - 1
        lead = cp[degc]
        if lead != 1:
            if (degd & 1) and F.qr[lead] < 0:
                s = -s
            invl = f_inv(F, lead)
            for i in range(nc):
                cp[i] = f_mul(F, cp[i], invl)
        if degc == 0:
            return s
        if flip and (degc & 1) and (degd & 1):
            s = -s
        nd = c_mod(F, dp, nd, cp, nc)
        tp = cp
        cp = dp
        dp = tp
        i = nc
        nc = nd
        nd = i


def jacobi(c, d, fs):
    """Quadratic residue symbol (c/d) on coefficient sequences."""
    cdef _FqHandle h = _get_handle(fs)
    cdef int cbuf[MAXC]
    cdef int dbuf[MAXC]
    cdef int i, nc, nd
    nc = len(c)
    nd = len(d)
    if nc > MAXC or nd > MAXC:
        raise ValueError("polynomial degree exceeds kernel buffer")
    for i in range(nc):
        cbuf[i] = c[i]
    for i in range(nd):
        dbuf[i] = d[i]
    return c_jacobi(&h.F, cbuf, nc, dbuf, nd)


cdef int _mark_multiples(const Fq *F, const int *u, int nu, int b, u8 *mask) noexcept nogil:
    """Strike enc(u * m) - q^(deg u + b) for every monic m of degree b.

    The constant digit of m is peeled into a precomputed c0*u table, so the
    inner loop costs O(nu) per product.  Returns 0, or -1 if malloc failed.
    """
    cdef i64 pows[MAXC]
    cdef int mdig[MAXC]
    cdef int base[MAXC]
    cdef int i, j, c0, pos, d, q
    cdef i64 idx, hi
    cdef int *lowtab
    q = F.q
    d = (nu - 1) + b
    pows[0] = 1
    for i in range(1, d + 1):
        pows[i] = pows[i - 1] * q
    if b == 0:
        idx = 0
        for i in range(nu - 1):
            idx += u[i] * pows[i]
        mask[idx] = 1
        return 0
    lowtab = <int *> malloc(q * nu * sizeof(int))
    if lowtab == NULL:
        return -1
    for c0 in range(q):
        for i in range(nu):
            lowtab[c0 * nu + i] = f_mul(F, c0, u[i])
    for j in range(1, b):
        mdig[j] = 0
    mdig[b] = 1
    while True:
        # base = u * (m - c0): digits >= nu of the product never see c0*u
        for i in range(d + 1):
            base[i] = 0
        for j in range(1, b + 1):
            if mdig[j]:
                for i in range(nu):
                    base[i + j] = f_add(F, base[i + j], f_mul(F, u[i], mdig[j]))
        hi = 0
        for i in range(nu, d):  # position d is the leading 1, carried by the q^d offset
            hi += base[i] * pows[i]
        for c0 in range(q):
            idx = hi
            for i in range(nu):
                idx += f_add(F, base[i], lowtab[c0 * nu + i]) * pows[i]
            mask[idx] = 1
        pos = 1
        while pos < b and mdig[pos] == q - 1:
            mdig[pos] = 0
            pos += 1
        if pos == b:
            break
        mdig[pos] += 1
    free(lowtab)
    return 0


def sieve_primes(fs, int max_deg):
    """Encodings of monic irreducibles grouped by degree 1..max_deg."""
    cdef _FqHandle h = _get_handle(fs)
    cdef int q = fs.q
    cdef int d, a, b, np_a, t, nu, status
    cdef i64 total
    cdef int udig[MAXC]
    cdef u8[::1] mask
    cdef const i64[::1] pa
    if max_deg + 1 > MAXC:
        raise ValueError("degree exceeds kernel buffer")
    primes = []
    status = 0
    for d in range(1, max_deg + 1):
        total = q**d
        mask_arr = np.zeros(total, dtype=np.uint8)
        mask = mask_arr
        for a in range(1, d):
            b = d - a
            pa = primes[a - 1]
            np_a = pa.shape[0]
            with nogil:
                for t in range(np_a):
                    nu = c_decode(&h.F, pa[t], udig)
                    status |= _mark_multiples(&h.F, udig, nu, b, &mask[0])
            if status:
                raise MemoryError("sieve work buffer allocation failed")
        primes.append(np.flatnonzero(mask_arr == 0).astype(np.int64) + total)
    return primes


def squarefree_encodings(fs, int deg, i64 start, i64 stop):
    """Monic squarefree degree-deg encodings with enumeration index in [start, stop)."""
    cdef _FqHandle h = _get_handle(fs)
    cdef int q = fs.q
    cdef i64 total = q**deg
    cdef int a, b, t, nu, i, j, nsq, status
    cdef int udig[MAXC]
    cdef int sq[MAXC]
    cdef u8[::1] mask
    cdef const i64[::1] pa
    if deg + 1 > MAXC:
        raise ValueError("degree exceeds kernel buffer")
    mask_arr = np.zeros(total, dtype=np.uint8)
    mask = mask_arr
    status = 0
    if deg >= 2:
        prime_lists = sieve_primes(fs, deg // 2)
        for a in range(1, deg // 2 + 1):
            b = deg - 2 * a
            pa = prime_lists[a - 1]
            with nogil:
                for t in range(pa.shape[0]):
                    nu = c_decode(&h.F, pa[t], udig)
                    nsq = 2 * nu - 1
                    for i in range(nsq):
                        sq[i] = 0
                    for i in range(nu):
                        if udig[i] == 0:
                            continue
                        for j in range(nu):
                            if udig[j]:
                                sq[i + j] = f_add(&h.F, sq[i + j], f_mul(&h.F, udig[i], udig[j]))
                    status |= _mark_multiples(&h.F, sq, nsq, b, &mask[0])
            if status:
                raise MemoryError("sieve work buffer allocation failed")
    return np.flatnonzero(mask_arr[start:stop] == 0).astype(np.int64) + total + start


def lcoeffs_for_encodings(fs, int g, encs, primes):
    """Exact coefficients c_0..c_2g per discriminant encoding, by the
    truncated product over primes of degree <= 2g."""
    cdef _FqHandle h = _get_handle(fs)
    cdef int two_g = 2 * g
    cdef i64[::1] encv = np.ascontiguousarray(encs, dtype=np.int64)
    cdef Py_ssize_t n = encv.shape[0]
    flat = []
    degs = []
    for d, pa in enumerate(primes[:two_g], start=1):
        flat.append(np.asarray(pa, dtype=np.int64))
        degs.append(np.full(len(pa), d, dtype=np.int32))
    if flat:
        pflat_arr = np.concatenate(flat)
        pdeg_arr = np.concatenate(degs)
    else:
        pflat_arr = np.empty(0, dtype=np.int64)
        pdeg_arr = np.empty(0, dtype=np.int32)
    cdef const i64[::1] pflat = pflat_arr
    cdef const i32[::1] pdeg = pdeg_arr
    cdef Py_ssize_t nprimes = pflat.shape[0]
    out_arr = np.zeros((n, two_g + 1), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    # pre-decode the primes once
    pdig_arr = np.zeros((nprimes, MAXC), dtype=np.intc)
    cdef int[:, ::1] pdig = pdig_arr
    cdef Py_ssize_t t, row
    cdef int ddig[MAXC]
    cdef i64 acc[MAXC]
    cdef int ndd, s, pd, m
    for t in range(nprimes):
        c_decode(&h.F, pflat[t], &pdig[t, 0])
    with nogil:
        for row in range(n):
            ndd = c_decode(&h.F, encv[row], ddig)
            acc[0] = 1
            for m in range(1, two_g + 1):
                acc[m] = 0
            for t in range(nprimes):
                pd = pdeg[t]
                s = c_jacobi(&h.F, ddig, ndd, &pdig[t, 0], pd + 1)
                if s == 0:
                    continue
                # multiply the series by (1 - s u^pd)^(-1), truncated at u^(2g)
                for m in range(pd, two_g + 1):
                    acc[m] += s * acc[m - pd]
            for m in range(two_g + 1):
                out[row, m] = acc[m]
    return out_arr


def chi_prime_values(fs, d_coeffs, primes):
    """chi_D(P) = (D/P) for every prime in the table, grouped by degree."""
    cdef _FqHandle h = _get_handle(fs)
    cdef int ddig[MAXC]
    cdef int pdig[MAXC]
    cdef int ndd, npd
    cdef Py_ssize_t i
    cdef const i64[::1] pa
    cdef i8[::1] vals
    ndd = len(d_coeffs)
    if ndd > MAXC:
        raise ValueError("polynomial degree exceeds kernel buffer")
    for i in range(ndd):
        ddig[i] = d_coeffs[i]
    out = []
    for pa_arr in primes:
        pa = np.ascontiguousarray(pa_arr, dtype=np.int64)
        vals_arr = np.empty(pa.shape[0], dtype=np.int8)
        vals = vals_arr
        with nogil:
            for i in range(pa.shape[0]):
                npd = c_decode(&h.F, pa[i], pdig)
                vals[i] = c_jacobi(&h.F, ddig, ndd, pdig, npd)
        out.append(vals_arr)
    return out
