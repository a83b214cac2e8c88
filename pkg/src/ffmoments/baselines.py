"""Frozen-regression baselines.

The bound statements carry unknowable implied constants, so the artifact
freezes every residual/ratio constant on an audited first run and asserts
later runs reproduce them to 1e-9 relative.  The shipped store lives in
data/baselines.json; --update-baselines rewrites it.
"""

from __future__ import annotations

import importlib.resources
import json
import math
from pathlib import Path

from .errors import ConfigurationError

_PACKAGED = "data/baselines.json"


def packaged_path() -> Path:
    return Path(importlib.resources.files("ffmoments").joinpath(_PACKAGED))


class BaselineStore:
    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else packaged_path()
        self.entries: dict[str, float] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text())
            self.entries = {k: float(v) for k, v in data.get("entries", {}).items()}

    def get(self, key: str) -> float:
        if key not in self.entries:
            raise ConfigurationError(
                f"no frozen baseline for {key!r}; run with --update-baselines first"
            )
        return self.entries[key]

    def record(self, key: str, value: float) -> None:
        self.entries[key] = float(value)

    def check(self, key: str, value: float, rtol: float = 1e-9) -> tuple[bool, float]:
        """Compare against the frozen value; returns (ok, frozen)."""
        frozen = self.get(key)
        scale = max(abs(frozen), abs(value), 1e-30)
        return (abs(value - frozen) <= rtol * scale, frozen)

    def save(self, path: str | Path | None = None) -> Path:
        target = Path(path) if path is not None else self.path
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "schema_version": 1,
            "entries": {k: self.entries[k] for k in sorted(self.entries)},
        }
        target.write_text(json.dumps(payload, indent=2) + "\n")
        return target


def fmt_angle(value: float) -> str:
    return f"{value:.6g}"


def moment_key(q: int, g: int, a, theta) -> str:
    astr = "_".join(fmt_angle(v) for v in a)
    tstr = "_".join(fmt_angle(v) for v in theta)
    return f"moments/q{q}/g{g}/a{astr}/theta{tstr}"


def charsum_key(q: int, g: int, m: float, log_q_y: int) -> str:
    return f"charsums/q{q}/g{g}/m{fmt_angle(m)}/N{log_q_y}"


def circle_key(q: int, g: int, m: float) -> str:
    return f"circle/q{q}/g{g}/m{fmt_angle(m)}"
