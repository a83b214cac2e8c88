"""Pure-Python/numpy kernels: quadratic symbols, prime sieve, squarefree
family enumeration, and L-coefficient sweeps.

This is the fallback lane; the compiled module _ckernel implements the same
interface and is preferred at import time when available.  Polynomials cross
the kernel boundary either as coefficient sequences (constant term first) or
as canonical integer encodings sum(c_i q^i).
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"

_CHUNK = 1 << 15


def _mod_coeffs(a: list[int], b: list[int], fs) -> list[int]:
    """a mod b on coefficient lists; b nonzero."""
    nb = len(b) - 1
    if len(a) - 1 < nb:
        return list(a)
    inv_lead = fs.inv(b[-1])
    rem = list(a)
    for i in range(len(rem) - 1, nb - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = fs.mul(c, inv_lead)
        for j in range(nb + 1):
            rem[i - nb + j] = fs.sub(rem[i - nb + j], fs.mul(f, b[j]))
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def jacobi(c, d, fs) -> int:
    """Quadratic residue symbol (c/d) for monic nonzero d, by reciprocity.

    No factorization happens here: the loop alternates leading-unit
    extraction, the constant rule, the reciprocity flip, and reduction.
    """
    q = fs.q
    qr = fs.qr_sign
    flip = ((q - 1) // 2) % 2  # reciprocity sign is active iff q = 3 mod 4
    c = _mod_coeffs(list(c), list(d), fs)
    d = list(d)
    s = 1
    while True:
        if not c:
            return s if len(d) == 1 else 0
        deg_c, deg_d = len(c) - 1, len(d) - 1
        lead = c[-1]
        if lead != 1:
            if deg_d % 2 == 1 and qr[lead] < 0:
                s = -s
            inv = fs.inv(lead)
            c = [fs.mul(x, inv) for x in c]
        if deg_c == 0:
            return s
        if flip and deg_c % 2 == 1 and deg_d % 2 == 1:
            s = -s
        c, d = _mod_coeffs(d, c, fs), c


def _digits(encs: np.ndarray, q: int, width: int) -> np.ndarray:
    out = np.empty((len(encs), width), dtype=np.int64)
    e = np.asarray(encs, dtype=np.int64).copy()
    for i in range(width):
        out[:, i] = e % q
        e //= q
    return out


def _digits_one(enc: int, q: int, width: int) -> np.ndarray:
    out = np.empty(width, dtype=np.int64)
    for i in range(width):
        enc, out[i] = divmod(enc, q)[0], enc % q
    return out


def _monic_digits(indices: np.ndarray, q: int, deg: int) -> np.ndarray:
    """Digit matrix of monic degree-deg polynomials given enumeration indices."""
    out = np.empty((len(indices), deg + 1), dtype=np.int64)
    out[:, :deg] = _digits(indices, q, deg) if deg else 0
    out[:, deg] = 1
    return out


def _conv_one_many(u: np.ndarray, v: np.ndarray, fs) -> np.ndarray:
    """Products of one polynomial (digit vector u) with many (digit matrix v)."""
    n, nv = v.shape
    out = np.zeros((n, len(u) + nv - 1), dtype=np.int64)
    for i in range(len(u)):
        ui = int(u[i])
        if ui == 0:
            continue
        out[:, i : i + nv] = fs.add_vec(out[:, i : i + nv], fs.mul_vec(ui, v))
    return out


def _mark_products(fs, u_digits, v_encs_or_idx, v_deg, mask, base, *, monic_idx):
    """Mark encodings of u * v in mask (indexed by enc - base)."""
    q = fs.q
    d_total = (len(u_digits) - 1) + v_deg
    pows = q ** np.arange(d_total + 1, dtype=np.int64)
    n = len(v_encs_or_idx)
    for start in range(0, n, _CHUNK):
        block = v_encs_or_idx[start : start + _CHUNK]
        if monic_idx:
            v = _monic_digits(block, q, v_deg)
        else:
            v = _digits(block, q, v_deg + 1)
        prod = _conv_one_many(u_digits, v, fs)
        mask[prod @ pows - base] = True


def sieve_primes(fs, max_deg: int) -> list[np.ndarray]:
    """Encodings of monic irreducibles grouped by degree 1..max_deg.

    Composite marking: every product prime * monic-cofactor is struck from
    the degree-d enumeration; survivors are the primes of degree d.
    """
    q = fs.q
    primes: list[np.ndarray] = []
    for d in range(1, max_deg + 1):
        total = q**d
        base = total  # enc of monic degree-d poly = q^d + index
        mask = np.zeros(total, dtype=bool)
        for a in range(1, d):
            b = d - a
            pa = primes[a - 1]
            if len(pa) == 0:
                continue
            if q**b <= len(pa):
                # few cofactors: iterate them, vectorize over the primes
                for mi in range(q**b):
                    u = np.concatenate([_digits_one(mi, q, b), [1]])
                    _mark_products(fs, u, pa, a, mask, base, monic_idx=False)
            else:
                cof = np.arange(q**b, dtype=np.int64)
                for enc in pa:
                    u = _digits_one(int(enc), q, a + 1)
                    _mark_products(fs, u, cof, b, mask, base, monic_idx=True)
        primes.append(np.flatnonzero(~mask).astype(np.int64) + base)
    return primes


def squarefree_encodings(fs, deg: int, start: int, stop: int) -> np.ndarray:
    """Encodings of monic squarefree degree-deg polynomials with enumeration
    index in [start, stop), by striking multiples of prime squares."""
    q = fs.q
    total = q**deg
    base = total
    mask = np.zeros(total, dtype=bool)
    if deg >= 2:
        for a, pa in enumerate(sieve_primes(fs, deg // 2), start=1):
            b = deg - 2 * a
            if b < 0 or len(pa) == 0:
                continue
            cof = np.arange(q**b, dtype=np.int64)
            for enc in pa:
                pd = _digits_one(int(enc), q, a + 1)
                sq = _conv_one_many(pd, pd[None, :], fs)[0]
                _mark_products(fs, sq, cof, b, mask, base, monic_idx=True)
    return np.flatnonzero(~mask[start:stop]).astype(np.int64) + base + start


def lcoeffs_for_encodings(fs, g: int, encs, primes: list[np.ndarray]) -> np.ndarray:
    """Exact coefficients c_0..c_2g of the zeta numerator for each squarefree
    discriminant encoding, via the truncated product over primes of degree <= 2g."""
    q = fs.q
    two_g = 2 * g
    prime_coeff_lists: list[tuple[int, list[int]]] = []
    for d, pa in enumerate(primes[:two_g], start=1):
        for enc in pa:
            e = int(enc)
            coeffs = []
            for _ in range(d + 1):
                e, c = divmod(e, q)
                coeffs.append(c)
            prime_coeff_lists.append((d, coeffs))
    out = np.zeros((len(encs), two_g + 1), dtype=np.int64)
    for row, enc in enumerate(encs):
        e = int(enc)
        dcoeffs = []
        while e:
            e, c = divmod(e, q)
            dcoeffs.append(c)
        acc = [1] + [0] * two_g
        for d, pc in prime_coeff_lists:
            s = jacobi(dcoeffs, pc, fs)
            if s == 0:
                continue
            # multiply the series by (1 - s u^d)^(-1), truncated at u^(2g)
            for n in range(d, two_g + 1):
                acc[n] += s * acc[n - d]
        out[row] = acc
    return out


def chi_prime_values(fs, d_coeffs, primes: list[np.ndarray]) -> list[np.ndarray]:
    """chi_D(P) = (D/P) for every prime in the table, grouped by degree."""
    q = fs.q
    dc = list(d_coeffs)
    out = []
    for d, pa in enumerate(primes, start=1):
        vals = np.empty(len(pa), dtype=np.int8)
        for i, enc in enumerate(pa):
            e = int(enc)
            pc = []
            for _ in range(d + 1):
                e, c = divmod(e, q)
                pc.append(c)
            vals[i] = jacobi(dc, pc, fs)
        out.append(vals)
    return out
