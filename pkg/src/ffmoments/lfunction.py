"""Exact L-polynomials of quadratic characters, the closed-form zeta of
F_q[T], critical-circle evaluation, and root-based checks that every
inverse zero has unit modulus.

Conventions: u = q^(-s); a point on the critical line is parametrized by
the angle theta with u = q^(-1/2) e^(i theta), i.e. s = 1/2 - i theta/ln q.
All analytic logs are natural logs, so log|P| = deg(P) ln q.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .characters import QuadraticCharacter, jacobi
from .errors import (
    ConfigurationError,
    DomainError,
    NumericalError,
    PoleError,
    VerificationError,
)
from .galois import FieldSpec, Poly, enumerate_monic
from .primes import PrimeTable, is_squarefree, prime_table

TWO_PI = 2.0 * math.pi


def zeta_a(s: complex, q: int) -> complex:
    """Zeta of the polynomial ring: 1/(1 - q^(1-s)); simple pole where q^(1-s) = 1."""
    w = cmath.exp((1 - s) * math.log(q))
    if abs(w - 1) < 1e-13:
        raise PoleError(f"zeta_A pole at s = {s!r}")
    return 1 / (1 - w)


def zeta_z(u: complex, q: int) -> complex:
    """Same zeta in the u-variable: 1/(1 - q u)."""
    if abs(1 - q * u) < 1e-13:
        raise PoleError(f"zeta_A pole at u = {u!r}")
    return 1 / (1 - q * u)


@dataclass(frozen=True)
class SpectralPoint:
    """A point u = q^(-1/2) e^(i theta) on the critical circle."""

    q: int
    theta: float

    @classmethod
    def from_theta(cls, q: int, theta: float) -> "SpectralPoint":
        return cls(q, theta % TWO_PI)

    @classmethod
    def from_t(cls, q: int, t: float) -> "SpectralPoint":
        """From the additive shift t; theta = t ln q."""
        return cls(q, (t * math.log(q)) % TWO_PI)

    @property
    def u(self) -> complex:
        return cmath.exp(1j * self.theta) / math.sqrt(self.q)

    @property
    def s(self) -> complex:
        return 0.5 - 1j * self.theta / math.log(self.q)


class LPolynomial:
    """Exact integer coefficients c_0..c_2g of the L-polynomial of chi_D.

    c_n is the full character sum over monic polynomials of degree n; the
    degree bound makes all higher sums vanish.  Roots are computed on demand
    and cached.
    """

    __slots__ = ("q", "g", "d", "coeffs", "_roots")

    def __init__(self, q: int, g: int, d: Poly, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != 2 * g + 1:
            raise DomainError(f"expected {2 * g + 1} coefficients, got {len(coeffs)}")
        if coeffs[0] != 1:
            raise VerificationError(f"c_0 = {coeffs[0]} != 1 for D = {d.to_text()}")
        if g >= 1 and coeffs[-1] == 0:
            # the 2g-fold root factorization forces an exact degree
            raise VerificationError(f"leading coefficient vanishes for D = {d.to_text()}")
        for n, c in enumerate(coeffs):
            if abs(c) > q**n:
                raise VerificationError(f"|c_{n}| = {abs(c)} exceeds q^{n}")
        self.q = q
        self.g = g
        self.d = d
        self.coeffs = coeffs
        self._roots = None

    def __eq__(self, other):
        return (
            isinstance(other, LPolynomial)
            and (self.q, self.g, self.coeffs) == (other.q, other.g, other.coeffs)
        )

    def __repr__(self):
        return f"LPolynomial(q={self.q}, g={self.g}, D={self.d.to_text()}, c={list(self.coeffs)})"

    def eval_u(self, u: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def roots(self) -> np.ndarray:
        if self._roots is None:
            self._roots = _roots_on_circle(self.coeffs, self.q)
        return self._roots


def _validate_discriminant(d: Poly) -> int:
    if d.is_zero or not d.is_monic:
        raise DomainError("discriminant must be monic nonzero")
    if d.degree % 2 == 0:
        raise DomainError("discriminant degree must be odd (2g+1)")
    if not is_squarefree(d):
        raise DomainError(f"{d.to_text()} is not squarefree")
    return (d.degree - 1) // 2


def lpoly_direct(d: Poly) -> LPolynomial:
    """Coefficients by direct summation of chi_D over all monic f of each
    degree up to 2g.  The reference oracle for the Euler-product path."""
    g = _validate_discriminant(d)
    fs = d.field
    coeffs = []
    for n in range(2 * g + 1):
        total = 0
        for f in enumerate_monic(fs, n):
            total += jacobi(d, f)
        coeffs.append(total)
    return LPolynomial(fs.q, g, d, coeffs)


def lpoly_euler(d: Poly, primes: PrimeTable | None = None) -> LPolynomial:
    """Coefficients through the truncated product over primes of degree <= 2g
    of (1 - chi_D(P) u^deg P)^(-1).  Must match lpoly_direct exactly."""
    g = _validate_discriminant(d)
    fs = d.field
    if g == 0:
        return LPolynomial(fs.q, 0, d, (1,))
    if primes is None:
        primes = prime_table(fs, 2 * g)
    if primes.max_deg < 2 * g:
        raise ConfigurationError(
            f"prime table reaches degree {primes.max_deg}, need {2 * g}"
        )
    chi = QuadraticCharacter(d, primes)
    acc = [1] + [0] * (2 * g)
    for deg in range(1, 2 * g + 1):
        for enc in primes.encodings[deg - 1]:
            s = chi.prime_values[int(enc)]
            if s == 0:
                continue
            for n in range(deg, 2 * g + 1):
                acc[n] += s * acc[n - deg]
    return LPolynomial(fs.q, g, d, acc)


def lpoly_eval(lp: LPolynomial, pt: SpectralPoint) -> complex:
    """Horner evaluation at u = q^(-1/2) e^(i theta)."""
    if pt.q != lp.q:
        raise ConfigurationError("spectral point belongs to a different field")
    return lp.eval_u(pt.u)


def _aberth_roots(coeffs: tuple[int, ...], q: int) -> np.ndarray | None:
    """Simultaneous root iteration with starts on the expected circle
    |u| = q^(-1/2); returns None if it fails to settle."""
    deg = len(coeffs) - 1
    c = np.asarray(coeffs, dtype=float)
    dc = c[1:] * np.arange(1, deg + 1)
    radius = q**-0.5
    angles = TWO_PI * (np.arange(deg) + 0.5) / deg + 0.377
    z = radius * np.exp(1j * angles)
    for _ in range(120):
        pz = np.polyval(c[::-1], z)
        dpz = np.polyval(dc[::-1], z)
        if np.any(dpz == 0):
            return None
        w = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        if np.any(denom == 0):
            return None
        step = w / denom
        z = z - step
        if not np.all(np.isfinite(z)):
            return None
        if np.max(np.abs(step)) < 1e-14 * radius:
            break
    else:
        return None
    resid = np.abs(np.polyval(c[::-1], z))
    scale = np.abs(c).max()
    if np.max(resid) > 1e-7 * scale:
        return None
    return z


def _roots_on_circle(coeffs: tuple[int, ...], q: int) -> np.ndarray:
    deg = len(coeffs) - 1
    if deg == 0:
        return np.empty(0, dtype=complex)
    roots = _aberth_roots(coeffs, q)
    if roots is None:
        # companion-matrix eigenvalues as the fallback
        roots = np.roots(np.asarray(coeffs, dtype=float)[::-1])
        if not np.all(np.isfinite(roots)):
            raise NumericalError(f"root finding failed for coefficients {coeffs}")
    return np.sort_complex(roots)


def rh_deviation(lp: LPolynomial) -> float:
    """max over roots u of | |u| sqrt(q) - 1 |; zero vacuously when g = 0."""
    roots = lp.roots()
    if len(roots) == 0:
        return 0.0
    return float(np.max(np.abs(np.abs(roots) * math.sqrt(lp.q) - 1.0)))


def rh_check(lp: LPolynomial, tol: float = 1e-8) -> float:
    """Assert every root sits on |u| = q^(-1/2) within tol; returns the
    deviation actually achieved."""
    dev = rh_deviation(lp)
    if not dev < tol:
        raise VerificationError(
            f"root modulus deviation {dev:.3e} >= {tol:.1e} for D = {lp.d.to_text()}"
        )
    return dev
