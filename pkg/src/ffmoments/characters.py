"""Quadratic residue symbols (f/P), the gcd-style Jacobi extension, and the
completely multiplicative characters chi_D = (D/.).

The production symbol path is reciprocity-based (no factorization); the
Euler-criterion evaluation at primes is kept as the independent oracle.
"""

from __future__ import annotations

from . import kernel
from .errors import DomainError
from .galois import FieldSpec, Poly, poly_pow_mod
from .primes import PrimeTable, factorize, is_irreducible


def legendre_prime(f: Poly, p: Poly) -> int:
    """(f/P) by the Euler criterion: (f mod P)^((|P|-1)/2) in F_q[T]/P.

    P must be monic irreducible; this is the oracle route, independent of
    the reciprocity recursion.
    """
    f._check_field(p)
    if not p.is_monic or not is_irreducible(p):
        raise DomainError("modulus of the prime symbol must be monic irreducible")
    r = f % p
    if r.is_zero:
        return 0
    e = (p.norm - 1) // 2
    val = poly_pow_mod(r, e, p)
    if val.is_one:
        return 1
    if (val + Poly(f.field, (1,))).is_zero:
        return -1
    raise DomainError("Euler criterion did not land on +-1; modulus not prime?")


def jacobi(c: Poly, d: Poly) -> int:
    """(c/d) for monic nonzero c and d, multiplicative in the lower entry."""
    c._check_field(d)
    if d.is_zero or not d.is_monic or c.is_zero or not c.is_monic:
        raise DomainError("jacobi symbol expects monic nonzero entries")
    return kernel.jacobi(c.coeffs, d.coeffs, c.field)


def jacobi_trace(c: Poly, d: Poly) -> tuple[int, list[str]]:
    """As jacobi(), but pure Python and recording the reciprocity route.

    The trace lists each leading-unit extraction, constant-rule application,
    reciprocity flip, and reduction, for debugging the symbol pipeline.
    """
    c._check_field(d)
    if d.is_zero or not d.is_monic or c.is_zero or not c.is_monic:
        raise DomainError("jacobi symbol expects monic nonzero entries")
    fs = c.field
    flip = ((fs.q - 1) // 2) % 2
    steps = [f"start ({c.to_text()} / {d.to_text()})"]
    sign = 1
    cc = c % d
    dd = d
    steps.append(f"reduce: c := c mod d = {cc.to_text()}")
    while True:
        if cc.is_zero:
            val = sign if dd.degree == 0 else 0
            steps.append(f"c = 0 with deg d = {dd.degree}: symbol = {val}")
            return val, steps
        if not cc.is_monic:
            lead = cc.leading
            const_sign = 1 if (dd.degree % 2 == 0 or fs.qr_sign[lead] > 0) else -1
            sign *= const_sign
            cc = cc.monic()
            steps.append(
                f"unit rule: ({lead}/d) = {const_sign} (deg d = {dd.degree}); c := {cc.to_text()}"
            )
        if cc.degree == 0:
            steps.append(f"c = 1: symbol = {sign}")
            return sign, steps
        if flip and cc.degree % 2 == 1 and dd.degree % 2 == 1:
            sign = -sign
            steps.append("reciprocity flip: both degrees odd and q = 3 mod 4")
        else:
            steps.append("reciprocity swap: no sign change")
        cc, dd = dd % cc, cc
        steps.append(f"swap and reduce: (d mod c / c) with c := {cc.to_text()}, d := {dd.to_text()}")


class QuadraticCharacter:
    """chi_D = (D/.), with symbol values cached at every prime of a table.

    The cache fills eagerly at construction so later reads are lock-free;
    instances are immutable afterwards and safe to share across workers.
    """

    def __init__(self, d: Poly, primes: PrimeTable):
        if d.is_zero or not d.is_monic:
            raise DomainError("character modulus must be monic nonzero")
        if d.field.q % 2 == 0:
            raise DomainError("even field cardinality is not supported")
        if primes.field.q != d.field.q:
            raise DomainError("prime table is over a different field")
        self.modulus = d
        self.table = primes
        vals = kernel.chi_prime_values(d.field, list(d.coeffs), primes.encodings)
        cache: dict[int, int] = {}
        for encs, row in zip(primes.encodings, vals):
            for enc, v in zip(encs, row):
                cache[int(enc)] = int(v)
        self.prime_values = cache

    def at_prime(self, p: Poly) -> int:
        """Cached chi_D(P); falls through to a direct symbol off-table."""
        enc = p.encode()
        v = self.prime_values.get(enc)
        if v is None:
            return chi_eval(self, p)
        return v

    def __call__(self, f: Poly) -> int:
        return chi_eval(self, f)

    def eval_multiplicative(self, f: Poly) -> int:
        """chi_D(f) through f's factorization and the cached prime values."""
        out = 1
        for p, e in factorize(f, self.table).factors:
            v = self.at_prime(p)
            if v == 0:
                return 0
            if e % 2:
                out *= v
        return out


def chi_eval(chi: QuadraticCharacter, f: Poly) -> int:
    """chi_D(f) = (D/f) for monic nonzero f."""
    if f.is_zero:
        raise DomainError("chi is evaluated at monic nonzero polynomials")
    return jacobi(chi.modulus, f)
