"""Run configuration: seeds, grids, optimizer budgets, verification sizes.

Configs serialize to plain ``key=value`` text (one per line, ``#`` starts a
comment); lists are comma-separated.  Round-trip is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

from .errors import InvalidParameter, ParseError

__all__ = ["RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    seed: int = 20260801
    dim: int = 2
    depth: int = 5
    basis: str = "haar"
    meyer_delta_log2: int = 11
    meyer_radius: float = 32.0
    meyer_decay_m: int = 2
    p_list: Tuple[float, ...] = (1.0, 1.5, 2.0, 3.0)
    descent_starts: int = 8
    descent_iters: int = 500
    ascent_iters: int = 150
    tol_psd: float = 1e-10
    corpus_count: int = 8
    roundtrip_instances: int = 100
    fefferman_pairs: int = 200
    hp_pairs: int = 200
    lemma_instances: int = 500
    stein_instances: int = 50
    rademacher_instances: int = 40
    signflip_vars: int = 7
    maximal_instances: int = 20
    lpmo_bmo_instances: int = 20
    bg_instances: int = 6
    smooth_instances: int = 12
    out: Optional[str] = None
    inject_defect: Optional[str] = None

    def __post_init__(self):
        if self.depth < 1 or self.depth > 12:
            raise InvalidParameter("depth must be in [1, 12]")
        if self.tol_psd <= 0:
            raise InvalidParameter("tolerances must be positive")
        if self.basis not in ("haar", "meyer"):
            raise InvalidParameter(f"unknown basis {self.basis!r}")
        if any(p < 1 for p in self.p_list):
            raise InvalidParameter("every p must be >= 1")
        if self.signflip_vars > 10:
            raise InvalidParameter("signflip_vars capped at 10 (2^N enumerations)")

    # -- key=value text ------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            if isinstance(val, tuple):
                val = ",".join(f"{v:.17g}" for v in val)
            lines.append(f"{f.name}={val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        mapping = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"line {lineno}: expected key=value, got {raw!r}")
            key, val = line.split("=", 1)
            mapping[key.strip()] = val.strip()
        return cls.from_mapping(mapping)

    @classmethod
    def from_mapping(cls, mapping) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, val in mapping.items():
            if key not in known:
                raise ParseError("unknown configuration key", key)
            kwargs[key] = _coerce(key, val)
        return cls(**kwargs)

    def updated(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)


_INT_KEYS = {
    "seed",
    "dim",
    "depth",
    "meyer_delta_log2",
    "meyer_decay_m",
    "descent_starts",
    "descent_iters",
    "ascent_iters",
    "corpus_count",
    "roundtrip_instances",
    "fefferman_pairs",
    "hp_pairs",
    "lemma_instances",
    "stein_instances",
    "rademacher_instances",
    "signflip_vars",
    "maximal_instances",
    "lpmo_bmo_instances",
    "bg_instances",
    "smooth_instances",
}
_FLOAT_KEYS = {"meyer_radius", "tol_psd"}
_STR_KEYS = {"basis", "out", "inject_defect"}


def _coerce(key, val):
    if isinstance(val, (int, float, tuple, list)) and not isinstance(val, bool):
        if key == "p_list":
            return tuple(float(v) for v in val) if isinstance(val, (tuple, list)) else (float(val),)
        if key in _FLOAT_KEYS:
            return float(val)
        if key in _INT_KEYS:
            return int(val)
        return val
    if not isinstance(val, str):
        raise ParseError("unsupported value type", key)
    try:
        if key == "p_list":
            return tuple(float(v) for v in val.split(",") if v.strip())
        if key in _INT_KEYS:
            return int(val)
        if key in _FLOAT_KEYS:
            return float(val)
        if key in _STR_KEYS:
            return val
    except ValueError as exc:
        raise ParseError(str(exc), key) from None
    raise ParseError("unknown configuration key", key)
