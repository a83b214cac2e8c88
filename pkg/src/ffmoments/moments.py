"""Shifted moments of |L| over the discriminant family, and the two bound
shapes they are tracked against: the zeta-factor form and the min/bar-theta
form.  Shifts are handled as angles theta = t ln q, the natural periodic
variable; every |L| is evaluated exactly from integer L-coefficients.

The implied constants in the bounds are unknowable, so reports carry
empirical/bound ratios; first-run ratios are frozen as regression baselines
elsewhere rather than asserted here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .galois import field
from .lfunction import zeta_a
from .sweep import SweepCheckpoint, family_lcoeffs, resolve_threads, shard_fsum, shard_plan

TWO_PI = 2.0 * math.pi

# below this, |L| is treated as an exact central zero and never powered
ZERO_EPS = 1e-14


def bar_theta(theta: float) -> float:
    """Distance from theta to the nearest multiple of 2 pi, in [0, pi]."""
    r = math.fmod(theta, TWO_PI)
    if r < 0:
        r += TWO_PI
    return min(r, TWO_PI - r)


@dataclass(frozen=True)
class MomentSpec:
    """Family parameters and the shift/exponent vectors of a moment."""

    q: int
    g: int
    a: tuple[float, ...]
    theta: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) < 1 or len(self.a) != len(self.theta):
            raise DomainError("need k >= 1 exponents with matching shifts")
        if any(x <= 0 for x in self.a):
            raise DomainError("exponents must be positive")
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "theta", tuple(float(t) % TWO_PI for t in self.theta))
        if self.g < 0:
            raise DomainError("g must be >= 0")

    @classmethod
    def from_t(cls, q: int, g: int, a, t) -> "MomentSpec":
        lnq = math.log(q)
        return cls(q, g, tuple(a), tuple(ti * lnq for ti in t))

    @property
    def x(self) -> int:
        return self.q ** (2 * self.g + 1)

    @property
    def log_x(self) -> float:
        return (2 * self.g + 1) * math.log(self.q)

    def to_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "a": list(self.a), "theta": list(self.theta)}


def _bound_factor(spec: MomentSpec, alpha: float, variant: str) -> float:
    """One zeta-shaped factor of the bound at angle separation alpha."""
    if variant == "zeta":
        s = 1 + 1 / spec.log_x + 1j * alpha / math.log(spec.q)
        return abs(zeta_a(s, spec.q))
    if variant == "min":
        bt = bar_theta(alpha)
        if bt == 0.0:
            return spec.log_x
        return min(spec.log_x, 1.0 / bt)
    raise DomainError(f"unknown bound variant {variant!r}")


def theorem1_bound(spec: MomentSpec, variant: str = "zeta") -> float:
    """X (ln X)^(sum a_j^2/4) times the pairwise factors at theta_j -+ theta_l
    and the diagonal factors at 2 theta_j with exponent a_j^2/4 + a_j/2."""
    k = len(spec.a)
    out = spec.x * spec.log_x ** (sum(x * x for x in spec.a) / 4)
    for j in range(k):
        for l in range(j + 1, k):
            e = spec.a[j] * spec.a[l] / 2
            out *= _bound_factor(spec, spec.theta[j] - spec.theta[l], variant) ** e
            out *= _bound_factor(spec, spec.theta[j] + spec.theta[l], variant) ** e
    for j in range(k):
        e = spec.a[j] ** 2 / 4 + spec.a[j] / 2
        out *= _bound_factor(spec, 2 * spec.theta[j], variant) ** e
    return out


def _contributions(coeffs: np.ndarray, spec: MomentSpec) -> tuple[np.ndarray, int]:
    """Per-discriminant products prod_j |L(theta_j)|^(a_j) and the count of
    discriminants with a detected zero on the shift grid."""
    n, width = coeffs.shape
    contrib = np.ones(n, dtype=float)
    zero_mask = np.zeros(n, dtype=bool)
    r = spec.q**-0.5
    for aj, tj in zip(spec.a, spec.theta):
        u = r * np.exp(1j * tj)
        vals = coeffs.astype(float) @ (u ** np.arange(width))
        mag = np.abs(vals)
        zero_here = mag < ZERO_EPS
        zero_mask |= zero_here
        mag = np.where(zero_here, 0.0, mag)
        contrib *= mag**aj
    return contrib, int(zero_mask.sum())


@dataclass(frozen=True)
class MomentResult:
    empirical: float
    zeros_detected: int
    family_size: int


def shifted_moment(
    spec: MomentSpec,
    *,
    threads: int | None = None,
    shard_count: int | None = None,
    cache_dir=None,
    budget: int | None = None,
    checkpoint=None,
) -> MomentResult:
    """Family sum of prod_j |L(1/2 + i t_j, chi_D)|^(a_j), theta_j = t_j ln q.

    Compensated summation grouped by the shard plan; a checkpoint path makes
    the sweep resumable with per-shard partial accumulators.
    """
    fs = field(spec.q)
    threads = resolve_threads(threads)
    shard_count = shard_count if shard_count is not None else threads
    if checkpoint is not None:
        return _checkpointed_moment(spec, threads, shard_count, cache_dir, budget, checkpoint)
    encs, coeffs = family_lcoeffs(fs, spec.g, threads=threads, cache_dir=cache_dir, budget=budget)
    contrib, zeros = _contributions(coeffs, spec)
    return MomentResult(shard_fsum(contrib, shard_count), zeros, len(encs))


def _checkpointed_moment(spec, threads, shard_count, cache_dir, budget, checkpoint):
    from . import kernel
    from .primes import prime_table
    from .sweep import check_budget

    fs = field(spec.q)
    check_budget(fs, spec.g, budget)
    deg = 2 * spec.g + 1
    encs = kernel.squarefree_encodings(fs, deg, 0, fs.q**deg)
    plan = shard_plan(len(encs), shard_count)
    config = {"op": "shifted_moment", **spec.to_dict(), "shards": shard_count}
    ck = SweepCheckpoint(checkpoint, config, shard_count)
    table = prime_table(fs, max(1, 2 * spec.g))
    for idx in ck.pending():
        a, b = plan[idx]
        coeffs = kernel.lcoeffs_for_encodings(fs, spec.g, encs[a:b], table.encodings)
        contrib, zeros = _contributions(coeffs, spec)
        ck.put(idx, {"sum": math.fsum(contrib), "zeros": zeros, "count": b - a})
    parts = ck.ordered()
    return MomentResult(
        math.fsum(p["sum"] for p in parts),
        sum(p["zeros"] for p in parts),
        sum(p["count"] for p in parts),
    )


@dataclass(frozen=True)
class MomentReport:
    """Empirical moment next to both bound variants and their ratios."""

    spec: MomentSpec
    empirical: float
    bound_zeta: float
    bound_min: float
    family_size: int
    zeros_detected: int

    @property
    def ratio_zeta(self) -> float:
        return self.empirical / self.bound_zeta

    @property
    def ratio_min(self) -> float:
        return self.empirical / self.bound_min

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "spec": self.spec.to_dict(),
            "empirical": self.empirical,
            "bound_zeta": self.bound_zeta,
            "bound_min": self.bound_min,
            "ratio_zeta": self.ratio_zeta,
            "ratio_min": self.ratio_min,
            "family_size": self.family_size,
            "zeros_detected": self.zeros_detected,
        }


def moment_report(spec: MomentSpec, **kwargs) -> MomentReport:
    res = shifted_moment(spec, **kwargs)
    return MomentReport(
        spec=spec,
        empirical=res.empirical,
        bound_zeta=theorem1_bound(spec, "zeta"),
        bound_min=theorem1_bound(spec, "min"),
        family_size=res.family_size,
        zeros_detected=res.zeros_detected,
    )


def moment_ratio_sweep(q: int, g_values, a, theta, **kwargs) -> list[MomentReport]:
    """One report per genus; the ratio sequence is what regression baselines
    track (boundedness itself is a warning-level observation)."""
    reports = []
    for g in g_values:
        reports.append(moment_report(MomentSpec(q, g, tuple(a), tuple(theta)), **kwargs))
    return reports


def ratio_growth_warnings(reports: list[MomentReport], factor: float = 2.0) -> list[str]:
    """Flag ratio growth beyond `factor` per unit g; advisory, not an error."""
    out = []
    for prev, cur in zip(reports, reports[1:]):
        if prev.ratio_zeta > 0 and cur.ratio_zeta / prev.ratio_zeta > factor:
            out.append(
                f"ratio grew by {cur.ratio_zeta / prev.ratio_zeta:.2f}x from "
                f"g={prev.spec.g} to g={cur.spec.g}"
            )
    return out
