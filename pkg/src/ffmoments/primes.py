"""Primes of F_q[T]: tables of monic irreducibles, factorization, and the
standard multiplicative functions (Mobius, prime-power count, divisor count).

Prime tables come from a product sieve in the selected kernel and are cached
both in-process and optionally on disk ("q=<q> maxdeg=<d>" header, then one
canonical encoding per line, sorted by degree then encoding).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import kernel
from .errors import ConfigurationError, DomainError
from .galois import FieldSpec, Poly, field, poly_gcd, poly_pow_mod, _prime_factors


class PrimeTable:
    """Monic irreducibles grouped by degree 1..max_deg, with exact counts.

    Immutable after construction; share freely across workers.
    """

    __slots__ = ("field", "max_deg", "encodings")

    def __init__(self, fs: FieldSpec, max_deg: int, encodings: list[np.ndarray]):
        self.field = fs
        self.max_deg = max_deg
        self.encodings = encodings

    @property
    def counts(self) -> list[int]:
        """pi_q(d) for d = 1..max_deg."""
        return [len(a) for a in self.encodings]

    def count(self, d: int) -> int:
        if not 1 <= d <= self.max_deg:
            raise DomainError(f"degree {d} outside table range 1..{self.max_deg}")
        return len(self.encodings[d - 1])

    def primes_of_degree(self, d: int) -> Iterator[Poly]:
        if not 1 <= d <= self.max_deg:
            raise DomainError(f"degree {d} outside table range 1..{self.max_deg}")
        for enc in self.encodings[d - 1]:
            yield Poly.decode(self.field, int(enc))

    def __iter__(self) -> Iterator[Poly]:
        for d in range(1, self.max_deg + 1):
            yield from self.primes_of_degree(d)

    def necklace_residuals(self) -> list[int]:
        """sum_{d|n} d*pi_q(d) - q^n for each n <= max_deg; all must be 0."""
        out = []
        for n in range(1, self.max_deg + 1):
            s = sum(d * len(self.encodings[d - 1]) for d in range(1, n + 1) if n % d == 0)
            out.append(s - self.field.q**n)
        return out

    def write_cache(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w") as fh:
            fh.write(f"q={self.field.q} maxdeg={self.max_deg}\n")
            for d in range(1, self.max_deg + 1):
                for enc in self.encodings[d - 1]:
                    fh.write(Poly.decode(self.field, int(enc)).to_text() + "\n")


def load_prime_table(path: str | Path) -> PrimeTable:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().split()
        q = int(header[0].split("=")[1])
        max_deg = int(header[1].split("=")[1])
        fs = field(q)
        per_deg: list[list[int]] = [[] for _ in range(max_deg)]
        for line in fh:
            line = line.strip()
            if not line:
                continue
            p = Poly.from_text(line, fs)
            per_deg[p.degree - 1].append(p.encode())
    encodings = [np.array(sorted(lst), dtype=np.int64) for lst in per_deg]
    return PrimeTable(fs, max_deg, encodings)


_tables: dict[int, PrimeTable] = {}


def build_prime_table(fs: FieldSpec, max_deg: int) -> PrimeTable:
    """Sieve a complete duplicate-free table through max_deg."""
    if max_deg < 1:
        raise DomainError("max_deg must be >= 1")
    return PrimeTable(fs, max_deg, kernel.sieve_primes(fs, max_deg))


def prime_table(fs: FieldSpec, max_deg: int, cache_dir: str | Path | None = None) -> PrimeTable:
    """Build or reuse a table covering degrees 1..max_deg.

    In-process tables grow monotonically per field; the disk cache is read
    when present and written when a directory is given and the table is of
    reasonable size.
    """
    cached = _tables.get(fs.q)
    if cached is not None and cached.max_deg >= max_deg:
        return cached
    table = None
    cache_path = None
    if cache_dir is not None:
        cache_path = Path(cache_dir) / f"primes_q{fs.q}_d{max_deg}.txt"
        if cache_path.exists():
            table = load_prime_table(cache_path)
    if table is None:
        table = build_prime_table(fs, max_deg)
        if cache_path is not None and sum(table.counts) <= 2_000_000:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            table.write_cache(cache_path)
    _tables[fs.q] = table
    return table


@functools.lru_cache(maxsize=65536)
def is_irreducible(f: Poly) -> bool:
    """Rabin's criterion: T^(q^n) = T mod f, plus gcd checks at the maximal
    proper prime-index subdegrees."""
    if f.is_zero or f.degree < 1:
        raise DomainError("irreducibility is defined for degree >= 1")
    f = f.monic()
    fs = f.field
    n = f.degree
    t = Poly(fs, (0, 1))
    t_mod = t % f

    def frobenius_iterate(times: int) -> Poly:
        b = t_mod
        for _ in range(times):
            b = poly_pow_mod(b, fs.q, f)
        return b

    if frobenius_iterate(n) != t_mod:
        return False
    for r in set(_prime_factors(n)):
        diff = frobenius_iterate(n // r) - t_mod
        if diff.is_zero or poly_gcd(diff, f).degree > 0:
            return False
    return True


def is_squarefree(f: Poly) -> bool:
    """gcd(f, f') test; f' = 0 in characteristic p means f is a p-th power."""
    if f.is_zero:
        raise DomainError("squarefreeness of 0 is undefined")
    if f.degree == 0:
        return True
    d = f.derivative()
    if d.is_zero:
        return False
    return poly_gcd(f, d).degree == 0


@dataclass(frozen=True)
class Factorization:
    """unit * prod P_i^e_i, factors ordered by (degree, encoding)."""

    input: Poly
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def value(self) -> Poly:
        acc = Poly(self.input.field, (self.unit,))
        for p, e in self.factors:
            for _ in range(e):
                acc = acc * p
        return acc


def factorize(f: Poly, table: PrimeTable | None = None) -> Factorization:
    """Exact factorization by trial division against the prime table."""
    if f.is_zero:
        raise DomainError("cannot factor 0")
    fs = f.field
    unit = f.leading
    rem = f.monic()
    if table is None:
        table = prime_table(fs, max(1, rem.degree // 2))
    elif table.field.q != fs.q:
        raise ConfigurationError("prime table is over a different field")
    factors = []
    for d in range(1, rem.degree // 2 + 1):
        if d > table.max_deg:
            table = prime_table(fs, rem.degree // 2)
        for enc in table.encodings[d - 1]:
            if rem.degree < 2 * d:
                break
            p = Poly.decode(fs, int(enc))
            e = 0
            while True:
                quot, r = divmod(rem, p)
                if not r.is_zero:
                    break
                rem = quot
                e += 1
            if e:
                factors.append((p, e))
        if rem.degree < 2 * (d + 1):
            break
    if rem.degree >= 1:
        factors.append((rem, 1))
    factors.sort(key=lambda pe: (pe[0].degree, pe[0].encode()))
    return Factorization(f, unit, tuple(factors))


def _monic_nonzero(f: Poly):
    if f.is_zero or not f.is_monic:
        raise DomainError("expected a monic nonzero polynomial")


def mobius(f: Poly, table: PrimeTable | None = None) -> int:
    _monic_nonzero(f)
    fac = factorize(f, table)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def omega(f: Poly, table: PrimeTable | None = None) -> int:
    """Number of prime powers dividing f (prime count with multiplicity)."""
    _monic_nonzero(f)
    return sum(e for _, e in factorize(f, table).factors)


def divisor_count(f: Poly, table: PrimeTable | None = None) -> int:
    _monic_nonzero(f)
    out = 1
    for _, e in factorize(f, table).factors:
        out *= e + 1
    return out


def _int_mobius(n: int) -> int:
    out = 1
    for f in set(_prime_factors(n)):
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e > 1:
            return 0
        out = -out
    return out


def pi_count_formula(q: int, d: int) -> int:
    """Closed-form count of monic irreducibles of degree d.

    Used only where tables cannot reach (deep Euler-product main terms); the
    sieve-built tables are what the necklace identity is verified against.
    """
    if d < 1:
        raise DomainError("degree must be >= 1")
    total = sum(_int_mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


def family_size(fs: FieldSpec, g: int) -> int:
    """|H_{2g+1,q}|: q^(2g+1) - q^(2g) for g >= 1, q for g = 0."""
    if g < 0:
        raise DomainError("g must be >= 0")
    if g == 0:
        return fs.q
    return fs.q ** (2 * g + 1) - fs.q ** (2 * g)


def family_encodings(fs: FieldSpec, g: int) -> np.ndarray:
    """Encodings of the monic squarefree degree-(2g+1) discriminants, in
    canonical enumeration order."""
    if g < 0:
        raise DomainError("g must be >= 0")
    deg = 2 * g + 1
    return kernel.squarefree_encodings(fs, deg, 0, fs.q**deg)


def enumerate_H(fs: FieldSpec, g: int) -> Iterator[Poly]:
    """Stream the discriminant family H_{2g+1,q} in deterministic order."""
    for enc in family_encodings(fs, g):
        yield Poly.decode(fs, int(enc))
