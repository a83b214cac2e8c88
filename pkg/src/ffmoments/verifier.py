"""Exact and desk-scale verification of the quantitative estimates behind
the moment bounds: prime-sum asymptotics, exact family character-sum
averages, and the pointwise log|L| inequalities.

Hard checks (the pointwise inequality, exact identities) raise on failure.
Estimates with unquantified O(1) terms run in report mode: residuals are
computed against explicit main terms and compared to frozen first-run
baselines by the caller, never against invented constants.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernel
from .errors import DomainError, VerificationError
from .galois import FieldSpec, Poly, enumerate_monic, field
from .lfunction import zeta_a
from .moments import bar_theta
from .primes import (
    PrimeTable,
    factorize,
    family_encodings,
    family_size,
    pi_count_formula,
    prime_table,
)
from .sweep import family_lcoeffs

# float guard on exact inequalities
SLACK_TOL = 1e-9


# -- weight functions ---------------------------------------------------

def h_weight(a, theta, deg_f: int) -> float:
    """H(f) = (1/2) Re sum_m a_m |f|^(-i t_m); depends on f through deg f."""
    return 0.5 * sum(am * math.cos(deg_f * tm) for am, tm in zip(a, theta))


def s_weight(deg_p: int, n_x: int) -> float:
    """log(x/|P|)/log x for x = q^n_x; in [0,1] when |P| <= x."""
    return (n_x - deg_p) / n_x


def h_hat(a, theta, deg_p: int, n_x: int) -> float:
    """2 H(P) / (a_total |P|^(1/log x))."""
    return 2 * h_weight(a, theta, deg_p) / (sum(a) * math.exp(deg_p / n_x))


def h1_hat(a, theta, deg_p: int, n_x: int) -> float:
    """4 H(P^2) / (a_total^2 |P|^(2/log x))."""
    return 4 * h_weight(a, theta, 2 * deg_p) / (sum(a) ** 2 * math.exp(2 * deg_p / n_x))


def i_weight_from_zero_degs(q: int, zero_degs) -> float:
    """prod over prime divisors (1 - 1/(2|P|)), given their degrees."""
    out = 1.0
    for d in zero_degs:
        out *= 1.0 - 0.5 * q**-d
    return out


def i_weight(d_poly: Poly) -> float:
    """I(D) from the factorization of D; always in (0, 1]."""
    return i_weight_from_zero_degs(
        d_poly.field.q, [p.degree for p, _ in factorize(d_poly).factors]
    )


# -- prime-sum asymptotics (Mertens shapes) ------------------------------

@dataclass(frozen=True)
class MertensReport:
    """Both prime-sum shapes at cutoff x = q^n: the log-weighted sum against
    ln x, and the reciprocal sum against ln ln x with its constant estimate."""

    q: int
    n: int
    sum_log: float
    residual_log: float
    sum_recip: float
    b_estimate: float

    @property
    def x(self) -> int:
        return self.q**self.n

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "sum_log": self.sum_log,
            "residual_log": self.residual_log,
            "sum_recip": self.sum_recip,
            "b_estimate": self.b_estimate,
        }


def mertens_log(q: int, n: int, table: PrimeTable | None = None) -> MertensReport:
    """sum over |P| <= x of log|P| / |P| versus log x, plus the reciprocal
    sum's constant estimate; exact prime counts, compensated float sums."""
    fs = field(q)
    if table is None or table.max_deg < n:
        table = prime_table(fs, n)
    lnq = math.log(q)
    ratios = [table.count(d) / q**d for d in range(1, n + 1)]
    sum_log = math.fsum(r * d * lnq for d, r in enumerate(ratios, start=1))
    sum_recip = math.fsum(ratios)
    ln_x = n * lnq
    return MertensReport(
        q=q,
        n=n,
        sum_log=sum_log,
        residual_log=sum_log - ln_x,
        sum_recip=sum_recip,
        b_estimate=sum_recip - math.log(ln_x),
    )


@dataclass(frozen=True)
class MertensCosReport:
    """The oscillating prime sum at frequency alpha against both comparison
    shapes: log|zeta_A| at 1 + 1/log x + i alpha, and the capped 1/bar-theta."""

    q: int
    n: int
    alpha: float
    sum_cos: float
    zeta_log: float
    min_log: float

    @property
    def residual_zeta(self) -> float:
        return self.sum_cos - self.zeta_log

    @property
    def residual_min(self) -> float:
        return self.sum_cos - self.min_log

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "alpha": self.alpha,
            "sum_cos": self.sum_cos,
            "zeta_log": self.zeta_log,
            "min_log": self.min_log,
            "residual_zeta": self.residual_zeta,
            "residual_min": self.residual_min,
        }


def mertens_cos(q: int, n: int, alpha: float, table: PrimeTable | None = None) -> MertensCosReport:
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    fs = field(q)
    if table is None or table.max_deg < n:
        table = prime_table(fs, n)
    lnq = math.log(q)
    sum_cos = math.fsum(
        (table.count(d) / q**d) * math.cos(alpha * d * lnq) for d in range(1, n + 1)
    )
    ln_x = n * lnq
    zeta_log = math.log(abs(zeta_a(1 + 1 / ln_x + 1j * alpha, q)))
    bt = bar_theta(alpha * lnq)
    min_log = math.log(ln_x if bt == 0.0 else min(ln_x, 1.0 / bt))
    return MertensCosReport(q, n, alpha, sum_cos, zeta_log, min_log)


# -- family character-sum averages ---------------------------------------

def _is_square_poly(f: Poly) -> bool:
    if f.degree % 2:
        return False
    return all(e % 2 == 0 for _, e in factorize(f).factors)


@dataclass(frozen=True)
class CharAvgReport:
    q: int
    g: int
    f_text: str
    lhs: float
    main: float
    normalizer: float

    @property
    def residual(self) -> float:
        return self.lhs - self.main

    @property
    def normalized_residual(self) -> float:
        return abs(self.residual) / self.normalizer

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "f": self.f_text,
            "lhs": self.lhs,
            "main": self.main,
            "residual": self.residual,
            "normalized_residual": self.normalized_residual,
        }


def charavg_plain(fs: FieldSpec, g: int, f: Poly) -> CharAvgReport:
    """Exact family sum of (D/f) against the closed main term
    delta_square * (X / zeta_A(2)) * prod_{P|f} |P|/(|P|+1); the residual is
    normalized by X^(1/2) |f|^(1/4)."""
    if f.is_zero or not f.is_monic:
        raise DomainError("f must be monic nonzero")
    q = fs.q
    lhs = 0
    fc = list(f.coeffs)
    for enc in family_encodings(fs, g):
        e = int(enc)
        dc = []
        while e:
            e, c = divmod(e, q)
            dc.append(c)
        lhs += kernel.jacobi(dc, fc, fs)
    x = q ** (2 * g + 1)
    main = 0.0
    if _is_square_poly(f):
        main = float(x - x // q)  # X / zeta_A(2), exact integer
        for p, _ in factorize(f).factors:
            main *= p.norm / (p.norm + 1)
    normalizer = math.sqrt(x) * f.norm**0.25 if f.degree >= 0 else math.sqrt(x)
    return CharAvgReport(q, g, f.to_text(), float(lhs), main, normalizer)


def _weighted_euler_constant(q: int, k: float, max_deg: int = 64) -> tuple[float, float]:
    """log of prod_P (1 - 1/|P|)(1 + I(P)^(-k)/|P|) truncated by degree,
    with the magnitude of the first dropped increment as the tail report."""
    total = 0.0
    tail = 0.0
    for d in range(1, max_deg + 1):
        nd = q**-d
        i_d = 1.0 - 0.5 * nd
        delta = math.log1p(-nd) + math.log1p(i_d**-k * nd)
        inc = pi_count_formula(q, d) * delta
        if abs(inc) < 1e-18:
            tail = abs(inc)
            break
        total += inc
    else:
        tail = abs(inc)
    return total, tail


@dataclass(frozen=True)
class CharAvgWeightedReport:
    q: int
    g: int
    f_text: str
    k_weight: float
    lhs: float
    main: float
    truncation_tail: float
    normalizer: float

    @property
    def residual(self) -> float:
        return self.lhs - self.main

    @property
    def normalized_residual(self) -> float:
        return abs(self.residual) / self.normalizer

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "f": self.f_text,
            "k_weight": self.k_weight,
            "lhs": self.lhs,
            "main": self.main,
            "residual": self.residual,
            "truncation_tail": self.truncation_tail,
            "normalized_residual": self.normalized_residual,
        }


def charavg_weighted(
    fs: FieldSpec, g: int, f: Poly, k_weight: float, eps: float = 0.1
) -> CharAvgWeightedReport:
    """Exact family sum of I(D)^(-k) (D/f) against its Euler-product main
    term (truncated with a reported tail); residual normalized by
    X^(1/2+eps) |f|^eps."""
    if f.is_zero or not f.is_monic:
        raise DomainError("f must be monic nonzero")
    q = fs.q
    table = prime_table(fs, 2 * g + 1)
    fc = list(f.coeffs)
    terms = []
    for enc in family_encodings(fs, g):
        d_poly = Poly.decode(fs, int(enc))
        chi_vals = kernel.chi_prime_values(fs, list(d_poly.coeffs), table.encodings)
        zero_degs = [
            d
            for d, row in enumerate(chi_vals, start=1)
            for v in row
            if v == 0
        ]
        iw = i_weight_from_zero_degs(q, zero_degs)
        terms.append(iw**-k_weight * kernel.jacobi(list(d_poly.coeffs), fc, fs))
    lhs = math.fsum(terms)
    x = q ** (2 * g + 1)
    main = 0.0
    tail = 0.0
    if _is_square_poly(f):
        log_const, tail = _weighted_euler_constant(q, k_weight)
        main = x * math.exp(log_const)
        for p, _ in factorize(f).factors:
            i_p = 1.0 - 0.5 / p.norm
            main /= 1.0 + i_p**-k_weight / p.norm
    normalizer = x ** (0.5 + eps) * max(f.norm, 1) ** eps
    return CharAvgWeightedReport(
        q, g, f.to_text(), k_weight, lhs, main, tail, normalizer
    )


# -- pointwise log|L| inequalities ---------------------------------------

def _chi_degree_sums(fs: FieldSpec, d_coeffs, table: PrimeTable, max_d: int):
    """Per degree d <= max_d: (sum of chi_D(P), sum of chi_D(P)^2)."""
    vals = kernel.chi_prime_values(fs, list(d_coeffs), table.encodings[:max_d])
    s1 = [int(v.astype(np.int64).sum()) for v in vals]
    s2 = [int((v != 0).sum()) for v in vals]
    return s1, s2


@dataclass(frozen=True)
class Prop31Result:
    d_text: str
    h: int
    theta: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "D": self.d_text,
            "h": self.h,
            "theta": self.theta,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


def _prop31_rhs(q, m, h, theta, sigma, s1, s2):
    lnq = math.log(q)
    total = 0.0
    for d in range(1, h + 1):
        for j in range(1, h // d + 1):
            s = s1[d - 1] if j % 2 else s2[d - 1]
            if s == 0:
                continue
            w = (h - j * d) / (j * q ** (j * d * sigma) * math.exp(j * d / h))
            total += s * w * math.cos(j * d * theta)
    return m / h + total / h


def prop31_check(
    d_poly: Poly,
    h: int,
    theta: float,
    sigma: float = 0.5,
    *,
    table: PrimeTable | None = None,
    coeffs=None,
) -> Prop31Result:
    """The pointwise upper bound for log|L|: lhs = log|L(sigma + it)| at
    theta = t ln q, rhs = m/h plus the truncated prime sum.  Exact
    inequality, no O(1): slack below -1e-9 is a pipeline failure."""
    fs = d_poly.field
    m = d_poly.degree
    g = (m - 1) // 2
    if not 1 <= h <= m:
        raise DomainError("need 1 <= h <= deg D")
    if sigma < 0.5:
        raise DomainError("sigma >= 1/2 required")
    if table is None or table.max_deg < h:
        table = prime_table(fs, max(h, 1))
    if coeffs is None:
        from .lfunction import lpoly_euler

        coeffs = lpoly_euler(d_poly, prime_table(fs, max(2 * g, 1))).coeffs
    s1, s2 = _chi_degree_sums(fs, d_poly.coeffs, table, h)
    u = fs.q**-sigma * cmath.exp(-1j * theta)
    lval = 0j
    for c in reversed(coeffs):
        lval = lval * u + c
    mag = abs(lval)
    lhs = -math.inf if mag < 1e-300 else math.log(mag)
    rhs = _prop31_rhs(fs.q, m, h, theta, sigma, s1, s2)
    return Prop31Result(d_poly.to_text(), h, theta, lhs, rhs)


@dataclass
class Prop31GridReport:
    q: int
    g: int
    h_values: list[int]
    theta_values: list[float]
    checks: int = 0
    min_slack: float = math.inf
    zero_hits: int = 0
    violations: list[dict] = dc_field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "h_values": self.h_values,
            "theta_values": self.theta_values,
            "checks": self.checks,
            "min_slack": self.min_slack,
            "zero_hits": self.zero_hits,
            "violations": self.violations,
        }


def prop31_grid(
    fs: FieldSpec,
    g: int,
    h_values,
    theta_values,
    sigma: float = 0.5,
    *,
    strict: bool = True,
) -> Prop31GridReport:
    """Run the inequality over every discriminant of the family and the full
    (h, theta) grid; raises on any slack below -1e-9 when strict."""
    q = fs.q
    m = 2 * g + 1
    h_values = sorted(set(h_values))
    if h_values and h_values[-1] > m:
        raise DomainError("h cannot exceed deg D = 2g+1")
    table = prime_table(fs, m)
    encs, coeffs = family_lcoeffs(fs, g)
    report = Prop31GridReport(q, g, list(h_values), [float(t) for t in theta_values])
    max_h = h_values[-1] if h_values else 0
    for row, enc in enumerate(encs):
        d_poly = Poly.decode(fs, int(enc))
        s1, s2 = _chi_degree_sums(fs, d_poly.coeffs, table, max_h)
        lrow = coeffs[row]
        for theta in theta_values:
            u = q**-sigma * cmath.exp(-1j * float(theta))
            lval = 0j
            for c in lrow[::-1]:
                lval = lval * u + c
            mag = abs(lval)
            if mag < 1e-300:
                report.zero_hits += 1
                report.checks += len(h_values)
                continue
            lhs = math.log(mag)
            for h in h_values:
                rhs = _prop31_rhs(q, m, h, float(theta), sigma, s1, s2)
                slack = rhs - lhs
                report.checks += 1
                if slack < report.min_slack:
                    report.min_slack = slack
                if slack < -SLACK_TOL:
                    report.violations.append(
                        Prop31Result(d_poly.to_text(), h, float(theta), lhs, rhs).to_dict()
                    )
    if strict and report.violations:
        v = report.violations[0]
        raise VerificationError(
            f"pointwise log|L| bound violated: slack {v['slack']:.3e} at "
            f"D={v['D']}, h={v['h']}, theta={v['theta']}"
        )
    return report


@dataclass(frozen=True)
class Prop32Report:
    """Report-mode residuals for the weighted multi-shift inequality; the
    O(1) term is unquantified, so the max residual is a frozen baseline,
    not an assertion."""

    q: int
    g: int
    n_x: int
    a: tuple[float, ...]
    theta: tuple[float, ...]
    sigma: float
    max_delta: float
    zero_hits: int
    family: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "g": self.g,
            "n_x": self.n_x,
            "a": list(self.a),
            "theta": list(self.theta),
            "sigma": self.sigma,
            "max_delta": self.max_delta,
            "zero_hits": self.zero_hits,
            "family": self.family,
        }


def prop32_residual(
    fs: FieldSpec,
    g: int,
    n_x: int,
    a,
    theta,
    sigma: float = 0.5,
) -> Prop32Report:
    """Per-discriminant Delta = sum_j a_j log|I(D) L| minus the explicit
    right-hand terms (weighted prime sum, prime-square sum, a log X/log x);
    returns the family maximum."""
    if sigma < 0.5:
        raise DomainError("sigma >= 1/2 required")
    if n_x < 1 or n_x > 2 * g + 1:
        raise DomainError("x must be a q-power with 1 <= log_q x <= 2g+1")
    q = fs.q
    a = tuple(float(v) for v in a)
    theta = tuple(float(t) for t in theta)
    a_total = sum(a)
    m_deg = 2 * g + 1
    table = prime_table(fs, max(n_x, m_deg))
    encs, coeffs = family_lcoeffs(fs, g)
    # chi-independent prime-square sum over |P| <= x^(1/2)
    square_term = math.fsum(
        table.count(d) * h_weight(a, theta, 2 * d) * q ** (-2 * d * sigma)
        for d in range(1, n_x // 2 + 1)
    )
    tail_term = a_total * m_deg / n_x
    max_delta = -math.inf
    zero_hits = 0
    for row, enc in enumerate(encs):
        d_poly = Poly.decode(fs, int(enc))
        s1, _ = _chi_degree_sums(fs, d_poly.coeffs, table, max(n_x, m_deg))
        zero_degs = [
            d
            for d, pa in enumerate(table.encodings[:m_deg], start=1)
            for v in kernel.chi_prime_values(fs, list(d_poly.coeffs), [pa])[0]
            if v == 0
        ]
        iw = i_weight_from_zero_degs(q, zero_degs)
        lhs = 0.0
        hit_zero = False
        for aj, tj in zip(a, theta):
            u = q**-sigma * cmath.exp(-1j * tj)
            lval = 0j
            for c in coeffs[row][::-1]:
                lval = lval * u + c
            mag = abs(lval)
            if mag * iw < 1e-300:
                hit_zero = True
                break
            lhs += aj * math.log(iw * mag)
        if hit_zero:
            zero_hits += 1
            continue
        prime_term = math.fsum(
            2
            * h_weight(a, theta, d)
            * s1[d - 1]
            * s_weight(d, n_x)
            / (q ** (d * sigma) * math.exp(d / n_x))
            for d in range(1, n_x + 1)
        )
        delta = lhs - (prime_term + square_term + tail_term)
        if delta > max_delta:
            max_delta = delta
    return Prop32Report(
        q, g, n_x, a, theta, sigma, max_delta, zero_hits, len(encs)
    )


# -- tail vanishing -------------------------------------------------------

def tail_vanishing_check(fs: FieldSpec, g: int, extra: int = 3) -> int:
    """Direct summation of chi_D over every degree n with 2g < n <= 2g+extra
    must give exactly 0 for every discriminant; returns the number of sums
    checked, raises on any nonzero."""
    checked = 0
    for enc in family_encodings(fs, g):
        d_poly = Poly.decode(fs, int(enc))
        dc = list(d_poly.coeffs)
        for n in range(2 * g + 1, 2 * g + extra + 1):
            total = 0
            for f in enumerate_monic(fs, n):
                total += kernel.jacobi(dc, list(f.coeffs), fs)
            if total != 0:
                raise VerificationError(
                    f"character sum at degree {n} is {total} != 0 for D = {d_poly.to_text()}"
                )
            checked += 1
    return checked
