"""Equivalence of the compiled kernel lane and the pure-Python fallback."""

import numpy as np
import pytest

from ffmoments import _pykernel
from ffmoments.galois import field
from ffmoments.kernel import active_kernel

try:
    from ffmoments import _ckernel
except ImportError:
    _ckernel = None

needs_compiled = pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")


def test_active_kernel_reports_lane():
    assert active_kernel() in ("cython", "python")


@needs_compiled
@pytest.mark.parametrize("q", [3, 5, 9])
def test_jacobi_equivalence_random(q, rng):
    fs = field(q)
    for _ in range(3000):
        d = [rng.randrange(q) for _ in range(rng.randrange(1, 6))] + [1]
        c = [rng.randrange(q) for _ in range(rng.randrange(0, 7))]
        while c and c[-1] == 0:
            c.pop()
        assert _ckernel.jacobi(c, d, fs) == _pykernel.jacobi(c, d, fs)


@needs_compiled
@pytest.mark.parametrize("q", [3, 5, 9])
def test_sieve_equivalence(q):
    fs = field(q)
    a = _pykernel.sieve_primes(fs, 5)
    b = _ckernel.sieve_primes(fs, 5)
    assert len(a) == len(b)
    assert all((x == y).all() for x, y in zip(a, b))


@needs_compiled
@pytest.mark.parametrize("q,deg", [(3, 5), (5, 4), (9, 3)])
def test_squarefree_equivalence(q, deg):
    fs = field(q)
    total = q**deg
    a = _pykernel.squarefree_encodings(fs, deg, 0, total)
    b = _ckernel.squarefree_encodings(fs, deg, 0, total)
    assert (a == b).all()
    # windowed calls agree with slices of the full call
    lo, hi = total // 3, 2 * total // 3
    w = _ckernel.squarefree_encodings(fs, deg, lo, hi)
    mask = (a >= total + lo) & (a < total + hi)
    assert (w == a[mask]).all()


@needs_compiled
@pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1)])
def test_lcoeffs_equivalence(q, g):
    fs = field(q)
    deg = 2 * g + 1
    encs = _ckernel.squarefree_encodings(fs, deg, 0, q**deg)
    primes_c = _ckernel.sieve_primes(fs, 2 * g)
    primes_p = _pykernel.sieve_primes(fs, 2 * g)
    a = _pykernel.lcoeffs_for_encodings(fs, g, encs, primes_p)
    b = _ckernel.lcoeffs_for_encodings(fs, g, encs, primes_c)
    assert (a == b).all()


@needs_compiled
def test_chi_prime_values_equivalence(rng):
    fs = field(5)
    primes = _ckernel.sieve_primes(fs, 4)
    for _ in range(20):
        d = [rng.randrange(5) for _ in range(rng.randrange(1, 6))] + [1]
        a = _pykernel.chi_prime_values(fs, d, primes)
        b = _ckernel.chi_prime_values(fs, d, primes)
        assert all((x == y).all() for x, y in zip(a, b))
