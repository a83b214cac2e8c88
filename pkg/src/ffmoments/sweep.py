"""Deterministic sharded family sweeps.

The family of discriminants is enumerated once per (q, g) in canonical
order; shard plans split its index range into contiguous, disjoint,
covering windows.  Integer results are identical for any shard count;
floating accumulators use exactly-rounded compensated summation grouped by
shard, so regrouping stays within 1e-12 relative.  Workers (processes) own
private accumulators and the merge is sequential in shard order.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import multiprocessing
import os
from pathlib import Path

import numpy as np

from . import kernel
from .errors import BudgetError, ConfigurationError, DomainError
from .galois import FieldSpec, Poly, field
from .primes import family_size, prime_table

DEFAULT_BUDGET = 10_000_000
# families below this size are not worth forking workers for
PARALLEL_THRESHOLD = 4096

# in-process cache of (encodings, coeffs) keyed by (q, g)
_family_cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}


def shard_plan(n_items: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous, disjoint, covering index ranges; earlier shards absorb
    the remainder so sizes differ by at most one."""
    if workers < 1:
        raise DomainError("workers must be >= 1")
    workers = min(workers, max(n_items, 1))
    base, extra = divmod(n_items, workers)
    plan = []
    start = 0
    for i in range(workers):
        size = base + (1 if i < extra else 0)
        plan.append((start, start + size))
        start += size
    return plan


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument wins, then FFM_THREADS, then available parallelism."""
    if threads is not None:
        if threads < 1:
            raise ConfigurationError("thread count must be >= 1")
        return threads
    env = os.environ.get("FFM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def check_budget(fs: FieldSpec, g: int, budget: int | None) -> int:
    """Refuse sweeps beyond the family budget, with a cost estimate."""
    budget = DEFAULT_BUDGET if budget is None else budget
    n = family_size(fs, g)
    if n > budget:
        n_primes = sum(
            _pi_upper(fs.q, d) for d in range(1, 2 * g + 1)
        )
        symbols = n * n_primes
        mem = n * (2 * g + 1) * 8
        raise BudgetError(
            f"family size {n} = |H_{{{2 * g + 1},{fs.q}}}| exceeds budget {budget}; "
            f"estimated {symbols:.2e} symbol evaluations "
            f"(~{symbols / 5e6:.0f}s at 5e6/s) and {mem / 1e6:.0f} MB of coefficients"
        )
    return n


def _pi_upper(q: int, d: int) -> int:
    return q**d // d


def shard_fsum(values, shard_count: int) -> float:
    """Compensated family sum grouped by the shard plan, merged in order."""
    values = np.asarray(values, dtype=float)
    plan = shard_plan(len(values), shard_count)
    return math.fsum(math.fsum(values[a:b]) for a, b in plan)


def _lcoeffs_worker(args):
    q, g, encs, prime_encs = args
    fs = field(q)
    return kernel.lcoeffs_for_encodings(fs, g, encs, prime_encs)


def family_lcoeffs(
    fs: FieldSpec,
    g: int,
    *,
    threads: int | None = None,
    cache_dir: str | Path | None = None,
    budget: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Discriminant encodings and exact L-coefficient rows for H_{2g+1,q}.

    Results are cached in-process and, when cache_dir is given, as a CSV
    with one canonical discriminant encoding plus c_0..c_2g per row.
    """
    key = (fs.q, g)
    cached = _family_cache.get(key)
    if cached is not None:
        return cached
    check_budget(fs, g, budget)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"lcoeffs_q{fs.q}_g{g}.csv"
        if path.exists():
            encs, coeffs = _read_lcoeffs_csv(path, fs, g)
            _family_cache[key] = (encs, coeffs)
            return encs, coeffs
    deg = 2 * g + 1
    encs = kernel.squarefree_encodings(fs, deg, 0, fs.q**deg)
    table = prime_table(fs, max(1, 2 * g))
    prime_encs = table.encodings
    threads = resolve_threads(threads)
    plan = shard_plan(len(encs), threads)
    if threads == 1 or len(encs) < PARALLEL_THRESHOLD:
        parts = [
            kernel.lcoeffs_for_encodings(fs, g, encs[a:b], prime_encs) for a, b in plan
        ]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(threads) as pool:
            parts = pool.map(
                _lcoeffs_worker,
                [(fs.q, g, encs[a:b], prime_encs) for a, b in plan],
            )
    coeffs = np.vstack(parts) if parts else np.zeros((0, 2 * g + 1), dtype=np.int64)
    _family_cache[key] = (encs, coeffs)
    if path is not None:
        _write_lcoeffs_csv(path, fs, encs, coeffs)
    return encs, coeffs


def _write_lcoeffs_csv(path: Path, fs: FieldSpec, encs: np.ndarray, coeffs: np.ndarray):
    path.parent.mkdir(parents=True, exist_ok=True)
    two_g1 = coeffs.shape[1]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["D"] + [f"c_{n}" for n in range(two_g1)])
        for enc, row in zip(encs, coeffs):
            w.writerow([Poly.decode(fs, int(enc)).to_text()] + [int(c) for c in row])


def _read_lcoeffs_csv(path: Path, fs: FieldSpec, g: int):
    encs = []
    rows = []
    with path.open() as fh:
        r = csv.reader(fh)
        header = next(r)
        if header[0] != "D" or len(header) != 2 * g + 2:
            raise ConfigurationError(f"unexpected L-coefficient cache header in {path}")
        for line in r:
            encs.append(Poly.from_text(line[0], fs).encode())
            rows.append([int(c) for c in line[1:]])
    return np.asarray(encs, dtype=np.int64), np.asarray(rows, dtype=np.int64)


def clear_family_cache():
    _family_cache.clear()


class SweepCheckpoint:
    """Resumable per-shard partial results for a long sweep.

    The file stores the config hash, the shard plan size, and one JSON
    object of partials per completed shard; resuming with the same config
    reproduces an uninterrupted run exactly (integer accumulators) or within
    the summation tolerance (floats).
    """

    def __init__(self, path: str | Path, config: dict, shard_count: int):
        self.path = Path(path)
        blob = json.dumps(config, sort_keys=True).encode()
        self.config_hash = hashlib.sha256(blob).hexdigest()[:16]
        self.shard_count = shard_count
        self.partials: dict[int, dict] = {}
        if self.path.exists():
            state = json.loads(self.path.read_text())
            if (
                state.get("config_hash") == self.config_hash
                and state.get("shard_count") == shard_count
            ):
                self.partials = {int(k): v for k, v in state["partials"].items()}

    def pending(self) -> list[int]:
        return [i for i in range(self.shard_count) if i not in self.partials]

    def put(self, shard_idx: int, partial: dict):
        self.partials[shard_idx] = partial
        self._flush()

    def _flush(self):
        state = {
            "schema_version": 1,
            "config_hash": self.config_hash,
            "shard_count": self.shard_count,
            "partials": {str(k): v for k, v in self.partials.items()},
        }
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(state))
        tmp.replace(self.path)

    def ordered(self) -> list[dict]:
        if len(self.partials) != self.shard_count:
            raise ConfigurationError("checkpoint incomplete")
        return [self.partials[i] for i in range(self.shard_count)]
