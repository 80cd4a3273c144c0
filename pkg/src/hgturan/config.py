"""Tunable constants and cache location.

The density hypotheses of the finders hold "for a sufficiently large
constant".  Those constants live in one table so a run can override them and
record exactly what it used.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

CACHE_ENV = "HGTURAN_CACHE_DIR"
CONFIG_ENV = "HGTURAN_CONFIG"
CONFIG_FILE = "hgturan.json"

# Blanket value that suffices for every argument, per the source analysis.
FALLBACK_CONSTANT = 2**30


@dataclass(frozen=True)
class Constants:
    # Sf_3(1,k): "every 3-graph with 4k^2 n edges contains a copy"
    sf31_density: float = 4.0
    # Sf_4(1,k): e >= c * k^2 n^2 (the deletion budget closes at about 8.5)
    sf41_density: float = 72.0
    # Sf_4(2,k): a vertex of degree 4e/n >= 4k^2 n carries an Sf_3(1,k) in its link
    sf42_density: float = 1.0
    # disjoint Sf_3(1,k) under bounded codegree: e >= c * max(k^2 n, k^(9/2))
    disjoint_sf3_density: float = float(FALLBACK_CONSTANT)
    # St_3(h,k): e >= c * max(k n^2, h^2 k^2 n)
    st3_density: float = float(FALLBACK_CONSTANT)
    # disjoint well-behaved St_3(h,k): s = e / (c n^2)
    st3_disjoint_density: float = float(FALLBACK_CONSTANT)
    # St_4(sqrt k, k, 1): e >= c * n * max(k^2 n, k^(9/2))
    st4_middle_density: float = float(FALLBACK_CONSTANT)
    # St_4(d,d,k) and its disjoint copies: e >= c * k n^3
    st4_dense_density: float = float(FALLBACK_CONSTANT)
    # Sf_3(2,k) / Sf_4(3,k) pigeonhole: e >= k * n^(r-1) forces a heavy (r-1)-set
    pigeonhole_density: float = 1.0
    # retries for seeded constructions whose certificate fails
    construction_retries: int = 16

    def override(self, **values) -> Constants:
        known = {f.name for f in fields(self)}
        unknown = set(values) - known
        if unknown:
            raise KeyError(f"unknown constants: {sorted(unknown)}")
        return replace(self, **values)

    def snapshot(self) -> dict:
        return asdict(self)


DEFAULT = Constants()


def _config_file() -> Path | None:
    explicit = os.environ.get(CONFIG_ENV)
    if explicit:
        return Path(explicit)
    local = Path.cwd() / CONFIG_FILE
    return local if local.exists() else None


def cache_dir() -> Path | None:
    """Oracle cache directory: environment variable first, then config file key."""
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    cfg = _config_file()
    if cfg is not None and cfg.exists():
        value = json.loads(cfg.read_text()).get("cache_dir")
        if value:
            return Path(value)
    return None
