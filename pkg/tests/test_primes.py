import itertools

import pytest

from ffmoments.errors import DomainError
from ffmoments.galois import Poly, enumerate_monic, field, monic_from_index
from ffmoments.primes import (
    Factorization,
    build_prime_table,
    divisor_count,
    enumerate_H,
    factorize,
    family_encodings,
    family_size,
    is_irreducible,
    is_squarefree,
    load_prime_table,
    mobius,
    omega,
    pi_count_formula,
    prime_table,
)


def brute_force_irreducible(f):
    """Oracle: no factorization into two monic factors of positive degree."""
    fs = f.field
    for d in range(1, f.degree // 2 + 1):
        for i in range(fs.q**d):
            if (f % monic_from_index(fs, d, i)).is_zero:
                return False
    return True


class TestIrreducibility:
    def test_examples(self, f3):
        assert is_irreducible(Poly(f3, (1, 1)))
        assert not is_irreducible(Poly(f3, (0, 0, 1)))
        assert is_irreducible(Poly(f3, (1, 0, 1)))  # no root in F_3

    def test_constants_rejected(self, f3):
        with pytest.raises(DomainError):
            is_irreducible(Poly(f3, (2,)))

    @pytest.mark.parametrize("q", [3, 5])
    def test_exhaustive_against_brute_force(self, q):
        fs = field(q)
        for deg in (1, 2, 3):
            for f in enumerate_monic(fs, deg):
                assert is_irreducible(f) == brute_force_irreducible(f)

    def test_non_monic_inputs(self, f3):
        # irreducibility is unit-invariant
        assert is_irreducible(Poly(f3, (2, 0, 2)))  # 2(T^2 + 1)


class TestPrimeTable:
    def test_counts_small(self, f3, f5):
        t3 = build_prime_table(f3, 3)
        assert t3.counts == [3, 3, 8]
        assert build_prime_table(f5, 4).count(4) == 150

    def test_matches_rabin_filter(self, f3):
        table = build_prime_table(f3, 4)
        for d in range(1, 5):
            via_rabin = [f.encode() for f in enumerate_monic(f3, d) if is_irreducible(f)]
            assert list(table.encodings[d - 1]) == via_rabin

    @pytest.mark.parametrize("q", [3, 5, 7, 9])
    def test_necklace_identity_through_8(self, q):
        table = prime_table(field(q), 8)
        assert table.necklace_residuals() == [0] * 8

    def test_counts_match_closed_form(self):
        for q in (3, 5, 9):
            table = prime_table(field(q), 8)
            assert table.counts == [pi_count_formula(q, d) for d in range(1, 9)]

    def test_duplicate_free_and_irreducible(self, f5):
        table = build_prime_table(f5, 3)
        seen = set()
        for p in table:
            assert p.is_monic and is_irreducible(p)
            assert p.encode() not in seen
            seen.add(p.encode())

    def test_cache_roundtrip(self, f3, tmp_path):
        table = build_prime_table(f3, 3)
        path = tmp_path / "primes.txt"
        table.write_cache(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "q=3 maxdeg=3"
        assert lines[1] == "q3:0,1"
        loaded = load_prime_table(path)
        assert loaded.counts == table.counts
        assert all((a == b).all() for a, b in zip(loaded.encodings, table.encodings))


class TestSquarefree:
    def test_examples(self, f3):
        assert is_squarefree(Poly(f3, (0, 1)) * Poly(f3, (1, 1)))
        assert not is_squarefree(Poly(f3, (1, 1)) * Poly(f3, (1, 1)))
        assert is_squarefree(Poly(f3, (0, 2, 0, 1)))  # T(T+1)(T+2)

    def test_pth_power_has_zero_derivative(self, f3):
        f = Poly(f3, (1, 0, 0, 1))  # (T+1)^3
        assert f.derivative().is_zero
        assert not is_squarefree(f)

    def test_agrees_with_mobius_exhaustive(self, f3):
        for deg in range(1, 6):
            for f in enumerate_monic(f3, deg):
                assert is_squarefree(f) == (mobius(f) != 0)


class TestFactorization:
    def test_examples(self, f3):
        fac = factorize(Poly(f3, (1, 2, 1)))
        assert [(p.to_text(), e) for p, e in fac.factors] == [("q3:1,1", 2)]
        p = Poly(f3, (1, 0, 1))
        assert factorize(p).factors == ((p, 1),)
        fac = factorize(Poly(f3, (0, 0, 1, 0, 1)))  # T^4 + T^2 = T^2 (T^2+1)
        assert [(p.to_text(), e) for p, e in fac.factors] == [("q3:0,1", 2), ("q3:1,0,1", 1)]

    def test_unit_preserved(self, f3):
        fac = factorize(Poly(f3, (0, 2)))  # 2T
        assert fac.unit == 2 and fac.value() == Poly(f3, (0, 2))

    @pytest.mark.parametrize("q", [3, 5, 9])
    def test_multiply_roundtrip_random(self, q, rng):
        fs = field(q)
        table = prime_table(fs, 3)
        prime_polys = [p for d in (1, 2, 3) for p in table.primes_of_degree(d)]
        for _ in range(1000):
            parts = [rng.choice(prime_polys) for _ in range(rng.randrange(1, 4))]
            unit = rng.randrange(1, q)
            f = Poly(fs, (unit,))
            for p in parts:
                f = f * p
            fac = factorize(f)
            assert fac.value() == f
            assert sum(e for _, e in fac.factors) == len(parts)
            degs = [(p.degree, p.encode()) for p, _ in fac.factors]
            assert degs == sorted(degs)

    def test_multiplicative_functions(self, f3):
        one = Poly(f3, (1,))
        assert (mobius(one), omega(one), divisor_count(one)) == (1, 0, 1)
        f = Poly(f3, (0, 1)) * Poly(f3, (1, 1))
        assert (mobius(f), divisor_count(f)) == (1, 4)
        g = Poly(f3, (0, 0, 1, 0, 1))
        assert (mobius(g), omega(g), divisor_count(g)) == (0, 3, 6)

    def test_monic_required(self, f3):
        with pytest.raises(DomainError):
            mobius(Poly(f3, (0, 2)))


class TestFamily:
    def test_counts(self, f3, f5):
        assert family_size(f3, 0) == 3
        assert len(family_encodings(f3, 0)) == 3
        assert family_size(f3, 1) == 18
        assert family_size(f5, 1) == 100

    @pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1), (5, 2)])
    def test_exhaustive_count_and_membership(self, q, g):
        fs = field(q)
        encs = family_encodings(fs, g)
        assert len(encs) == family_size(fs, g) == q ** (2 * g + 1) - q ** (2 * g)
        members = list(enumerate_H(fs, g))
        assert all(d.is_monic and d.degree == 2 * g + 1 and is_squarefree(d) for d in members[:50])

    def test_matches_filter_oracle(self, f3):
        via_filter = [f.encode() for f in enumerate_monic(f3, 5) if is_squarefree(f)]
        assert list(family_encodings(f3, 2)) == via_filter

    def test_deterministic_order(self, f5):
        a = family_encodings(f5, 1)
        b = family_encodings(f5, 1)
        assert (a == b).all()
        assert (a[:-1] < a[1:]).all()
