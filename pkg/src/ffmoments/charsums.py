"""Moments of quadratic character sums, their bound tracking, and the
circle-integral moments they reduce to.

The character sum over |f| <= Y is, exactly, the prefix sum of the
L-coefficients through degree log_q Y (tail coefficients vanish), which is
the discrete form of the contour identity between partial sums and the
generating polynomial.  A numerical contour mode cross-checks the identity.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .galois import Poly, field
from .lfunction import LPolynomial
from .sweep import family_lcoeffs, resolve_threads, shard_fsum

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CharSumSpec:
    """Parameters of the 2m-th character-sum moment with cutoff Y = q^log_q_y."""

    q: int
    g: int
    m: float
    log_q_y: int
    allow_small_m: bool = False

    def __post_init__(self):
        if self.log_q_y < 0:
            raise DomainError("log_q Y must be a nonnegative integer")
        if self.m < 1.5:
            if not self.allow_small_m:
                raise DomainError("m >= 3/2 required (pass allow_small_m for exploration)")
            warnings.warn(f"m = {self.m} < 3/2 is outside the bound's range", stacklevel=3)

    @property
    def y(self) -> int:
        return self.q**self.log_q_y

    @property
    def x(self) -> int:
        return self.q ** (2 * self.g + 1)

    @property
    def log_x(self) -> float:
        return (2 * self.g + 1) * math.log(self.q)

    def to_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "m": self.m, "log_q_y": self.log_q_y}


def char_prefix_sum(lp: LPolynomial, n: int) -> int:
    """Sum of chi_D over monic f with deg f <= n: the exact coefficient
    prefix sum, constant for n >= 2g."""
    if n < 0:
        raise DomainError("cutoff degree must be >= 0")
    return int(sum(lp.coeffs[: n + 1]))


def theorem2_bound(spec: CharSumSpec) -> float:
    """X Y^m (ln X)^(2m^2 - m + 1)."""
    e = 2 * spec.m**2 - spec.m + 1
    return spec.x * spec.y**spec.m * spec.log_x**e


@dataclass(frozen=True)
class CharSumReport:
    spec: CharSumSpec
    value: float
    bound: float
    family_size: int
    histogram: dict[int, int]

    @property
    def ratio(self) -> float:
        return self.value / self.bound

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "spec": self.spec.to_dict(),
            "value": self.value,
            "bound": self.bound,
            "ratio": self.ratio,
            "family_size": self.family_size,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def s_m_moment(
    spec: CharSumSpec,
    *,
    threads: int | None = None,
    shard_count: int | None = None,
    cache_dir=None,
    budget: int | None = None,
) -> CharSumReport:
    """Family sum of |prefix character sum|^(2m), with exact integer inner
    sums and an exact integer outer sum whenever 2m is an integer."""
    fs = field(spec.q)
    threads = resolve_threads(threads)
    shard_count = shard_count if shard_count is not None else threads
    encs, coeffs = family_lcoeffs(fs, spec.g, threads=threads, cache_dir=cache_dir, budget=budget)
    upto = min(spec.log_q_y, 2 * spec.g) + 1
    prefixes = np.abs(coeffs[:, :upto].sum(axis=1))
    hist = Counter(int(v) for v in prefixes)
    two_m = 2 * spec.m
    if float(two_m).is_integer():
        e = int(two_m)
        value = float(sum(int(v) ** e for v in prefixes))
    else:
        value = shard_fsum(prefixes.astype(float) ** two_m, shard_count)
    return CharSumReport(spec, value, theorem2_bound(spec), len(encs), dict(hist))


@dataclass(frozen=True)
class CircleMomentReport:
    q: int
    g: int
    m: float
    points: int
    value: float
    bound: float
    family_size: int

    @property
    def ratio(self) -> float:
        return self.value / self.bound

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "q": self.q,
            "g": self.g,
            "m": self.m,
            "points": self.points,
            "value": self.value,
            "bound": self.bound,
            "ratio": self.ratio,
            "family_size": self.family_size,
        }


def _circle_integral_rows(coeffs: np.ndarray, q: int, points: int) -> np.ndarray:
    """Integral of |L(e^(it)/sqrt(q))| over [0, 2pi] for each coefficient row.

    |L| is only C^0 on the circle: every zero of L sits exactly on it, so the
    modulus has corner kinks there.  The circle is therefore split at the
    root angles and each arc gets Gauss-Legendre quadrature, on which |L|
    is analytic; `points` nodes per arc makes doubling a no-op at 1e-10.
    """
    from .lfunction import _roots_on_circle

    nodes, weights = np.polynomial.legendre.leggauss(points)
    r = q**-0.5
    out = np.empty(len(coeffs), dtype=float)
    for i, row in enumerate(coeffs):
        cdesc = np.asarray(row, dtype=float)[::-1]
        roots = _roots_on_circle(tuple(int(c) for c in row), q)
        if len(roots) == 0:
            cuts = np.array([0.0, TWO_PI])
        else:
            angles = np.sort(np.angle(roots) % TWO_PI)
            cuts = np.concatenate([angles, [angles[0] + TWO_PI]])
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            half = (b - a) / 2
            if half == 0.0:
                continue
            t = (a + b) / 2 + half * nodes
            vals = np.abs(np.polyval(cdesc, r * np.exp(1j * t)))
            total += half * float(weights @ vals)
        out[i] = total
    return out


def circle_integral_moment(
    q: int,
    g: int,
    m: float,
    points: int = 256,
    *,
    threads: int | None = None,
    shard_count: int | None = None,
    cache_dir=None,
    budget: int | None = None,
) -> CircleMomentReport:
    """Family sum of (integral over the critical circle of |L|)^(2m)."""
    if points < 64:
        raise DomainError("need at least 64 quadrature points")
    fs = field(q)
    threads = resolve_threads(threads)
    shard_count = shard_count if shard_count is not None else threads
    encs, coeffs = family_lcoeffs(fs, g, threads=threads, cache_dir=cache_dir, budget=budget)
    integrals = _circle_integral_rows(coeffs, q, points)
    value = shard_fsum(integrals ** (2 * m), shard_count)
    e = 2 * m**2 - m + 1
    bound = q ** (2 * g + 1) * ((2 * g + 1) * math.log(q)) ** e
    return CircleMomentReport(q, g, m, points, value, bound, len(encs))


def perron_contour_value(lp: LPolynomial, n: int, points: int = 512) -> complex:
    """Numerical contour form of the prefix sum: the mean over |u| = q^(-1/2)
    of L(u) / ((1 - u) u^n).  Debug mode that guards the index conventions;
    must agree with char_prefix_sum to 1e-8."""
    if points < 64:
        raise DomainError("need at least 64 quadrature points")
    t = TWO_PI * np.arange(points) / points
    u = np.exp(1j * t) * lp.q**-0.5
    lvals = np.zeros(points, dtype=complex)
    for c in reversed(lp.coeffs):
        lvals = lvals * u + c
    integrand = lvals / ((1 - u) * u**n)
    return complex(integrand.mean())
