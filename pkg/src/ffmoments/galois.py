"""Arithmetic in F_q and the polynomial ring F_q[T], for odd prime-power q.

Field elements are integer residues 0..q-1: ordinary residues mod q when q
is prime, and base-p digit encodings of F_p[x]/(h(x)) when q = p^k with
k > 1.  Extension fields multiply through exp/log tables for a fixed
primitive element; addition is digit-wise mod p.  Tables have size q, so
extension cardinalities are capped at 4096.

Polynomials are immutable coefficient tuples, constant term first, with no
trailing zeros; the zero polynomial is the empty tuple and has degree -1.
The canonical text form is "q<q>:<c0>,<c1>,...,<cn>" with the leading
coefficient last and nonzero, e.g. "q3:1,0,2" for 2T^2 + 1.  The canonical
integer encoding is sum(c_i * q^i); monic polynomials of degree n are
indexed 0..q^n-1 by the encoding of their non-leading coefficients, which
fixes the enumeration order everywhere.
"""

from __future__ import annotations

import functools
import math
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, DomainError

MAX_EXTENSION_Q = 4096
# Encodings are stored in int64; keep a safety margin below 2^63.
_ENC_LIMIT = 1 << 62


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def _prime_factors(n: int) -> list[int]:
    out = []
    while n > 1:
        f = _smallest_prime_factor(n)
        out.append(f)
        while n % f == 0:
            n //= f
    return out


class FieldSpec:
    """A finite field F_q with q = p^k odd, plus the lookup tables kernels need.

    Attributes:
        q, p, k: cardinality, characteristic, extension degree.
        modulus: for k > 1, the defining monic irreducible over F_p
            (coefficient tuple, constant first); None for prime fields.
        exp, log: int32 arrays (powers of the primitive element / discrete
            logs); None for prime fields.
        qr_sign: int8 array of length q; qr_sign[a] is the quadratic
            character of the constant a (0 for a = 0).
        addt, subt, mult, invt: flattened q*q (resp. q) int16 lookup tables,
            built for q <= 128 so kernel inner loops avoid divisions.
    """

    __slots__ = (
        "q", "p", "k", "modulus", "exp", "log", "qr_sign",
        "addt", "subt", "mult", "invt", "_addl", "_subl", "_mull", "_invl",
    )

    def __init__(self, q: int, p: int, k: int, modulus, exp, log, qr_sign):
        self.q = q
        self.p = p
        self.k = k
        self.modulus = modulus
        self.exp = exp
        self.log = log
        self.qr_sign = qr_sign
        self.addt = self.subt = self.mult = self.invt = None
        self._addl = self._subl = self._mull = self._invl = None

    def _build_tables(self):
        q = self.q
        aa = np.repeat(np.arange(q, dtype=np.int64), q)
        bb = np.tile(np.arange(q, dtype=np.int64), q)
        self.addt = self.add_vec(aa, bb).astype(np.int16)
        self.subt = self.add_vec(aa, self.neg_vec(bb)).astype(np.int16)
        self.mult = self.mul_vec(aa, bb).astype(np.int16)
        self.invt = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int16)
        self._addl = self.addt.tolist()
        self._subl = self.subt.tolist()
        self._mull = self.mult.tolist()
        self._invl = self.invt.tolist()

    def __repr__(self):
        return f"FieldSpec(q={self.q})"

    def __reduce__(self):
        # Re-interned on unpickle so worker processes share table identity.
        return (field, (self.q,))

    # -- scalar element operations -------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            s = a + b
            return s - self.q if s >= self.q else s
        if self._addl is not None:
            return self._addl[a * self.q + b]
        p, s, m = self.p, 0, 1
        while a or b:
            s += ((a + b) % p) * m
            a //= p
            b //= p
            m *= p
        return s

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (self.q - a) if a else 0
        if self._subl is not None:
            return self._subl[a]  # subt[0*q + a] = 0 - a
        p, s, m = self.p, 0, 1
        while a:
            d = a % p
            s += (p - d if d else 0) * m
            a //= p
            m *= p
        return s

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            s = a - b
            return s + self.q if s < 0 else s
        if self._subl is not None:
            return self._subl[a * self.q + b]
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.q
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.log[a]) + int(self.log[b])) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.k == 1:
            return pow(a, self.q - 2, self.q)
        return int(self.exp[(-int(self.log[a])) % (self.q - 1)])

    def pow_el(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.k == 1:
            return pow(a, e % (self.q - 1) if e else 0, self.q) if e else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    # -- vectorized element operations (numpy int arrays) ---------------

    def add_vec(self, a, b):
        if self.k == 1:
            return (a + b) % self.q
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        m = 1
        aa, bb = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        for _ in range(self.k):
            out += ((aa + bb) % p) * m
            aa, bb = aa // p, bb // p
            m *= p
        return out

    def mul_vec(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.q
        aa, bb = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        nz = (aa != 0) & (bb != 0)
        la = self.log[np.where(nz, aa, 1)].astype(np.int64)
        lb = self.log[np.where(nz, bb, 1)].astype(np.int64)
        prod = self.exp[(la + lb) % (self.q - 1)].astype(np.int64)
        return np.where(nz, prod, 0)

    def neg_vec(self, a):
        if self.k == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.q
        p = self.p
        aa = np.asarray(a, dtype=np.int64)
        out = np.zeros(aa.shape, dtype=np.int64)
        m = 1
        for _ in range(self.k):
            d = aa % p
            out += ((p - d) % p) * m
            aa = aa // p
            m *= p
        return out


def _lowest_irreducible_primitive(p: int, k: int) -> tuple[tuple[int, ...], list[int]]:
    """Search monic degree-k polynomials over F_p, lowest encoding first, for
    one that is irreducible with T primitive; return (modulus, exp table)."""
    base = field(p)
    q = p**k
    factors = _prime_factors(q - 1)
    t_poly = Poly(base, (0, 1))
    for idx in range(q):
        cand = monic_from_index(base, k, idx)
        if not _is_irreducible_trial(cand):
            continue
        # order of T modulo cand must be exactly q-1
        if any(poly_pow_mod(t_poly, (q - 1) // r, cand).is_one for r in factors):
            continue
        exp_encs = []
        acc = Poly(base, (1,))
        for _ in range(q - 1):
            exp_encs.append(_encode_base(acc.coeffs, p))
            acc = (acc * t_poly) % cand
        return cand.coeffs, exp_encs
    raise ConfigurationError(f"no primitive irreducible of degree {k} over F_{p}")


def _encode_base(coeffs, base: int) -> int:
    e = 0
    for c in reversed(coeffs):
        e = e * base + c
    return e


def _is_irreducible_trial(f: "Poly") -> bool:
    # trial division by every monic of degree 1..deg(f)//2; fine for tiny search spaces
    n = f.degree
    for d in range(1, n // 2 + 1):
        for idx in range(f.field.q**d):
            if (f % monic_from_index(f.field, d, idx)).is_zero:
                return False
    return True


@functools.lru_cache(maxsize=None)
def field(q: int) -> FieldSpec:
    """Intern the field of cardinality q (odd prime power, q >= 3)."""
    if q < 3:
        raise DomainError(f"field cardinality must be >= 3, got {q}")
    p = _smallest_prime_factor(q)
    if p == 2:
        raise DomainError(f"even cardinality {q} not supported")
    k = 0
    n = q
    while n > 1 and n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise DomainError(f"{q} is not a prime power")
    if k == 1:
        qr = np.zeros(q, dtype=np.int8)
        for a in range(1, q):
            qr[a] = 1 if pow(a, (q - 1) // 2, q) == 1 else -1
        fs = FieldSpec(q, p, 1, None, None, None, qr)
    else:
        if q > MAX_EXTENSION_Q:
            raise DomainError(f"extension field tables capped at q <= {MAX_EXTENSION_Q}")
        modulus, exp_encs = _lowest_irreducible_primitive(p, k)
        exp = np.asarray(exp_encs, dtype=np.int32)
        log = np.full(q, -1, dtype=np.int32)
        log[exp] = np.arange(q - 1, dtype=np.int32)
        qr = np.zeros(q, dtype=np.int8)
        # squares are exactly the even powers of the primitive element
        qr[exp] = np.where(np.arange(q - 1) % 2 == 0, 1, -1).astype(np.int8)
        fs = FieldSpec(q, p, k, modulus, exp, log, qr)
    if q <= 128:
        fs._build_tables()
    return fs


class Poly:
    """Immutable polynomial over a FieldSpec, coefficients constant-term first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, fs: FieldSpec, coeffs, *, trusted: bool = False):
        self.field = fs
        if trusted:
            self.coeffs = coeffs
            return
        norm = []
        for c in coeffs:
            c = int(c)
            if fs.k == 1:
                c %= fs.q
            elif not 0 <= c < fs.q:
                raise DomainError(f"coefficient {c} outside 0..{fs.q - 1}")
            norm.append(c)
        while norm and norm[-1] == 0:
            norm.pop()
        self.coeffs = tuple(norm)

    # -- structure -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def norm(self) -> int:
        """|f| = q^deg(f) for f != 0, and |0| = 0."""
        return 0 if self.is_zero else self.field.q ** self.degree

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field.q == other.field.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __repr__(self):
        return self.to_text()

    def _check_field(self, other: "Poly"):
        if self.field.q != other.field.q:
            raise ConfigurationError(
                f"mixed field specs: q={self.field.q} vs q={other.field.q}"
            )

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        while out and out[-1] == 0:
            out.pop()
        return Poly(F, tuple(out), trusted=True)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(c) for c in self.coeffs), trusted=True)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, (), trusted=True)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Poly(F, tuple(out), trusted=True)

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return Poly(F, (), trusted=True)
        return Poly(F, tuple(F.mul(a, c) for a in self.coeffs), trusted=True)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check_field(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        nb = other.degree
        if self.degree < nb:
            return Poly(F, (), trusted=True), self
        inv_lead = F.inv(other.leading)
        rem = list(self.coeffs)
        quot = [0] * (len(rem) - nb)
        b = other.coeffs
        for i in range(len(rem) - 1, nb - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = F.mul(c, inv_lead)
            quot[i - nb] = f
            for j in range(nb + 1):
                rem[i - nb + j] = F.sub(rem[i - nb + j], F.mul(f, b[j]))
        while rem and rem[-1] == 0:
            rem.pop()
        while quot and quot[-1] == 0:
            quot.pop()
        return Poly(F, tuple(quot), trusted=True), Poly(F, tuple(rem), trusted=True)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero:
            raise DomainError("cannot normalize the zero polynomial")
        if self.is_monic:
            return self
        return self.scale(self.field.inv(self.leading))

    def derivative(self) -> "Poly":
        """Formal derivative; exponent multiples of the characteristic vanish."""
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            m = i % F.p
            out.append(F.mul(self.coeffs[i], m) if m else 0)
        while out and out[-1] == 0:
            out.pop()
        return Poly(F, tuple(out), trusted=True)

    def evaluate(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    # -- encodings ---------------------------------------------------------

    def encode(self) -> int:
        """Canonical integer encoding sum(c_i q^i)."""
        q = self.field.q
        if self.coeffs and q ** len(self.coeffs) >= _ENC_LIMIT:
            raise DomainError(f"encoding overflow: q={q}, degree={self.degree}")
        return _encode_base(self.coeffs, q)

    @classmethod
    def decode(cls, fs: FieldSpec, enc: int) -> "Poly":
        if enc < 0:
            raise DomainError("negative encoding")
        out = []
        while enc:
            enc, c = divmod(enc, fs.q)
            out.append(c)
        return cls(fs, tuple(out), trusted=True)

    def to_text(self) -> str:
        """Canonical text form "q<q>:<c0>,...,<cn>"; the zero polynomial is "q<q>:0"."""
        body = ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"
        return f"q{self.field.q}:{body}"

    @classmethod
    def from_text(cls, text: str, fs: FieldSpec | None = None) -> "Poly":
        text = text.strip()
        if ":" in text:
            head, _, body = text.partition(":")
            if not head.startswith("q"):
                raise DomainError(f"malformed polynomial literal {text!r}")
            q = int(head[1:])
            if fs is not None and fs.q != q:
                raise ConfigurationError(f"literal is over F_{q}, expected F_{fs.q}")
            fs = fs or field(q)
        elif fs is None:
            raise DomainError("bare coefficient list needs an explicit field")
        else:
            body = text
        coeffs = tuple(int(c) for c in body.split(",")) if body else ()
        return cls(fs, coeffs)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; both-zero input is a domain error."""
    a._check_field(b)
    if a.is_zero and b.is_zero:
        raise DomainError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_pow_mod(base: Poly, e: int, modulus: Poly) -> Poly:
    """base^e mod modulus by square and multiply."""
    if e < 0:
        raise DomainError("negative exponent")
    result = Poly(base.field, (1,))
    base = base % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


def monic_from_index(fs: FieldSpec, n: int, index: int) -> Poly:
    """The index-th monic polynomial of degree n (base-q digits of index, then 1)."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    if not 0 <= index < fs.q**n:
        raise DomainError(f"index {index} outside [0, q^{n})")
    coeffs = []
    for _ in range(n):
        index, c = divmod(index, fs.q)
        coeffs.append(c)
    coeffs.append(1)
    return Poly(fs, tuple(coeffs), trusted=True)


def monic_index(f: Poly) -> int:
    """Position of a monic polynomial within its degree's enumeration."""
    if not f.is_monic:
        raise DomainError("not monic")
    return _encode_base(f.coeffs[:-1], f.field.q)


class MonicRange:
    """Indexable, cloneable view of all monic degree-n polynomials in canonical order."""

    def __init__(self, fs: FieldSpec, n: int, start: int = 0, stop: int | None = None):
        if n < 0:
            raise DomainError("degree must be >= 0")
        self.field = fs
        self.n = n
        total = fs.q**n
        self.start = start
        self.stop = total if stop is None else stop
        if not (0 <= self.start <= self.stop <= total):
            raise DomainError("range outside the enumeration")

    def __len__(self) -> int:
        return self.stop - self.start

    def __getitem__(self, i):
        if isinstance(i, slice):
            lo, hi, step = i.indices(len(self))
            if step != 1:
                raise DomainError("only unit-stride slices supported")
            return MonicRange(self.field, self.n, self.start + lo, self.start + hi)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return monic_from_index(self.field, self.n, self.start + i)

    def __iter__(self) -> Iterator[Poly]:
        for i in range(self.start, self.stop):
            yield monic_from_index(self.field, self.n, i)


def enumerate_monic(fs: FieldSpec, n: int) -> MonicRange:
    """All q^n monic polynomials of degree n in deterministic canonical order."""
    return MonicRange(fs, n)


def log_norm(f: Poly) -> float:
    """Natural log of |f|; log|P| = deg(P) * ln q throughout."""
    if f.is_zero:
        raise DomainError("log-norm of zero")
    return f.degree * math.log(f.field.q)
