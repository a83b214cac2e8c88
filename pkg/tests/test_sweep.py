import json
import math

import numpy as np
import pytest

import ffmoments.sweep as sweep_mod
from ffmoments.errors import BudgetError, ConfigurationError, DomainError
from ffmoments.galois import field
from ffmoments.moments import MomentSpec, shifted_moment
from ffmoments.sweep import (
    SweepCheckpoint,
    check_budget,
    clear_family_cache,
    family_lcoeffs,
    resolve_threads,
    shard_fsum,
    shard_plan,
)


class TestShardPlan:
    def test_examples(self):
        assert shard_plan(18, 1) == [(0, 18)]
        assert shard_plan(18, 4) == [(0, 5), (5, 10), (10, 14), (14, 18)]

    def test_cover_disjoint_property(self, rng):
        for _ in range(200):
            n = rng.randrange(0, 500)
            w = rng.randrange(1, 12)
            plan = shard_plan(n, w)
            assert plan[0][0] == 0 and plan[-1][1] == n
            for (a1, b1), (a2, b2) in zip(plan, plan[1:]):
                assert b1 == a2 and a1 <= b1
            sizes = [b - a for a, b in plan]
            assert max(sizes) - min(sizes) <= 1

    def test_workers_validation(self):
        with pytest.raises(DomainError):
            shard_plan(10, 0)


class TestThreads:
    def test_explicit_wins(self, monkeypatch):
        monkeypatch.setenv("FFM_THREADS", "7")
        assert resolve_threads(3) == 3

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("FFM_THREADS", "5")
        assert resolve_threads(None) == 5

    def test_default_positive(self, monkeypatch):
        monkeypatch.delenv("FFM_THREADS", raising=False)
        assert resolve_threads(None) >= 1

    def test_invalid(self):
        with pytest.raises(ConfigurationError):
            resolve_threads(0)


class TestBudget:
    def test_within(self, f3):
        assert check_budget(f3, 2, None) == 162

    def test_refusal_message(self, f3):
        with pytest.raises(BudgetError, match="symbol evaluations"):
            check_budget(f3, 9, None)
        with pytest.raises(BudgetError):
            check_budget(f3, 2, budget=100)


class TestShardFsum:
    def test_grouping_within_tolerance(self, rng):
        values = np.array([rng.uniform(-1, 1) * 10 ** rng.randrange(-8, 8) for _ in range(4000)])
        ref = shard_fsum(values, 1)
        for w in (2, 4, 7):
            assert shard_fsum(values, w) == pytest.approx(ref, rel=1e-13)

    def test_exact_on_single_shard(self):
        vals = [0.1] * 10
        assert shard_fsum(vals, 1) == math.fsum(vals)


class TestFamilyLcoeffs:
    def test_in_process_cache_identity(self, f3):
        clear_family_cache()
        a = family_lcoeffs(f3, 1)
        b = family_lcoeffs(f3, 1)
        assert a[0] is b[0] and a[1] is b[1]

    def test_disk_cache_roundtrip(self, f3, tmp_path):
        clear_family_cache()
        encs, coeffs = family_lcoeffs(f3, 1, cache_dir=tmp_path)
        path = tmp_path / "lcoeffs_q3_g1.csv"
        assert path.exists()
        header = path.read_text().splitlines()[0]
        assert header == "D,c_0,c_1,c_2"
        clear_family_cache()
        encs2, coeffs2 = family_lcoeffs(f3, 1, cache_dir=tmp_path)
        assert (encs == encs2).all() and (coeffs == coeffs2).all()
        clear_family_cache()

    def test_thread_count_invariance(self, f5, monkeypatch):
        monkeypatch.setattr(sweep_mod, "PARALLEL_THRESHOLD", 16)
        clear_family_cache()
        encs1, co1 = family_lcoeffs(f5, 1, threads=1)
        clear_family_cache()
        encs4, co4 = family_lcoeffs(f5, 1, threads=4)
        clear_family_cache()
        assert (encs1 == encs4).all()
        assert (co1 == co4).all()


class TestCheckpoint:
    def test_resume_identical(self, tmp_path):
        clear_family_cache()
        spec = MomentSpec(3, 2, (1.0,), (0.7,))
        direct = shifted_moment(spec, shard_count=4)
        ck_path = tmp_path / "sweep.ckpt"
        first = shifted_moment(spec, shard_count=4, checkpoint=ck_path)
        assert first.empirical == pytest.approx(direct.empirical, rel=1e-12)

        # drop two shards and resume; the result must be unchanged
        state = json.loads(ck_path.read_text())
        assert len(state["partials"]) == 4
        for idx in ("1", "2"):
            del state["partials"][idx]
        ck_path.write_text(json.dumps(state))
        resumed = shifted_moment(spec, shard_count=4, checkpoint=ck_path)
        assert resumed.empirical == first.empirical
        assert resumed.family_size == first.family_size

    def test_config_change_invalidates(self, tmp_path):
        path = tmp_path / "c.ckpt"
        ck = SweepCheckpoint(path, {"op": "x", "v": 1}, 2)
        ck.put(0, {"sum": 1.0})
        ck.put(1, {"sum": 2.0})
        again = SweepCheckpoint(path, {"op": "x", "v": 1}, 2)
        assert not again.pending()
        changed = SweepCheckpoint(path, {"op": "x", "v": 2}, 2)
        assert changed.pending() == [0, 1]

    def test_incomplete_ordered_raises(self, tmp_path):
        ck = SweepCheckpoint(tmp_path / "d.ckpt", {"op": "y"}, 3)
        ck.put(0, {})
        with pytest.raises(ConfigurationError):
            ck.ordered()
