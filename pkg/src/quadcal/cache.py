"""Per-discriminant summary records and the append-only JSON-lines cache that stores them."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

from filelock import FileLock, Timeout

from . import __version__
from .enumeration import profile
from .units import fundamental_unit

ENGINE_VERSION = f"quadcal-{__version__}"
DEFAULT_CACHE = "quadcal-cache.jsonl"
CACHE_ENV = "QUADCAL_CACHE"


@dataclass(frozen=True)
class CacheRecord:
    D: int
    kappa: int
    kappa_plus: int
    h: int
    h_plus: int
    t: int
    u: int
    unit_norm: int
    cycles_plus: tuple[tuple[int, ...], ...] = field(default=(), compare=True)
    cycles_minus: tuple[tuple[int, ...], ...] = field(default=(), compare=True)
    engine_version: str = ENGINE_VERSION

    def to_json(self) -> dict:
        d = asdict(self)
        d["t"], d["u"] = str(self.t), str(self.u)
        d["cycles_plus"] = [list(w) for w in self.cycles_plus]
        d["cycles_minus"] = [list(w) for w in self.cycles_minus]
        return d

    def profile_json(self) -> dict:
        """The public profile schema (no engine version)."""
        d = self.to_json()
        del d["engine_version"]
        return d

    @classmethod
    def from_json(cls, d: dict) -> CacheRecord:
        return cls(
            D=int(d["D"]),
            kappa=int(d["kappa"]),
            kappa_plus=int(d["kappa_plus"]),
            h=int(d["h"]),
            h_plus=int(d["h_plus"]),
            t=int(d["t"]),
            u=int(d["u"]),
            unit_norm=int(d["unit_norm"]),
            cycles_plus=tuple(tuple(w) for w in d.get("cycles_plus", ())),
            cycles_minus=tuple(tuple(w) for w in d.get("cycles_minus", ())),
            engine_version=d.get("engine_version", ""),
        )


def compute_record(D: int) -> CacheRecord:
    prof = profile(D)
    eps = fundamental_unit(D, prof.plus)
    return CacheRecord(
        D=D,
        kappa=prof.kappa,
        kappa_plus=prof.kappa_plus,
        h=prof.h,
        h_plus=prof.h_plus,
        t=eps.t,
        u=eps.u,
        unit_norm=eps.norm,
        cycles_plus=tuple(prof.cycles_plus),
        cycles_minus=tuple(prof.cycles_minus),
    )


def resolve_cache_path(flag: str | None) -> Path:
    """--cache flag, then $QUADCAL_CACHE, then ./quadcal-cache.jsonl."""
    return Path(flag or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)


class ProfileCache:
    """Append-only JSON-lines store; the last record per D wins.

    Lines that fail to parse or carry a different engine version are skipped,
    so a truncated final line only costs a recomputation. Writers take a lock
    file next to the cache; there is one writer per process tree by design.
    """

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self.records: dict[int, CacheRecord] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                try:
                    rec = CacheRecord.from_json(json.loads(line))
                except (ValueError, KeyError, TypeError):
                    continue
                if rec.engine_version == ENGINE_VERSION:
                    self.records[rec.D] = rec

    def get(self, D: int) -> CacheRecord | None:
        return self.records.get(D)

    def snapshot(self) -> dict[int, CacheRecord]:
        return dict(self.records)

    def add(self, recs: Iterable[CacheRecord]) -> None:
        new = [r for r in recs if self.records.get(r.D) != r]
        if not new:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        try:
            with FileLock(str(self.path) + ".lock", timeout=30):
                with open(self.path, "a", encoding="utf-8") as fh:
                    for r in sorted(new, key=lambda r: r.D):
                        fh.write(json.dumps(r.to_json(), separators=(",", ":")) + "\n")
        except Timeout as exc:
            raise OSError(f"could not lock cache {self.path}") from exc
        for r in new:
            self.records[r.D] = r

    def lookup(self, D: int) -> CacheRecord:
        rec = self.records.get(D)
        if rec is None:
            rec = compute_record(D)
            self.add([rec])
        return rec
