"""Append-only JSON-lines cache of experiment records.

One line per record, keyed by (q, canonical modulus, tool version).  Later
lines win, so updating a record is an append.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .report import SCHEMA_VERSION, DensityReport

CACHE_ENV = "FFBIAS_CACHE_DIR"
CACHE_FILE = "records.jsonl"


def _version() -> str:
    from . import __version__

    return __version__


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class ExperimentRecord:
    q: int
    p: int
    k: int
    modulus: str
    l_coeffs: tuple[int, ...]
    angles: tuple[float, ...]
    gsh_verdict: str
    densities: dict[str, DensityReport] = field(default_factory=dict)  # "lambda-nc", "mu-cum", ...
    ext_modulus: tuple[int, ...] | None = None
    created: str = field(default_factory=_now)
    tool_version: str = field(default_factory=_version)

    @property
    def key(self) -> tuple[int, str, str]:
        return (self.q, self.modulus, self.tool_version)

    def with_density(self, name: str, report: DensityReport) -> ExperimentRecord:
        dens = dict(self.densities)
        dens[name] = report
        return ExperimentRecord(
            self.q, self.p, self.k, self.modulus, self.l_coeffs, self.angles, self.gsh_verdict,
            dens, self.ext_modulus, _now(), self.tool_version,
        )

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "p": self.p,
            "k": self.k,
            "modulus": self.modulus,
            "l_coeffs": list(self.l_coeffs),
            "angles": list(self.angles),
            "gsh_verdict": self.gsh_verdict,
            "densities": {k: v.to_dict() for k, v in self.densities.items()},
            "created": self.created,
            "tool_version": self.tool_version,
        }
        if self.ext_modulus is not None:
            out["ext_modulus"] = list(self.ext_modulus)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, obj: dict) -> ExperimentRecord:
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported record schema {obj.get('schema_version')!r}")
        ext = obj.get("ext_modulus")
        return cls(
            q=obj["q"],
            p=obj["p"],
            k=obj["k"],
            modulus=obj["modulus"],
            l_coeffs=tuple(int(c) for c in obj["l_coeffs"]),
            angles=tuple(float(a) for a in obj["angles"]),
            gsh_verdict=obj["gsh_verdict"],
            densities={k: DensityReport.from_dict(v) for k, v in obj["densities"].items()},
            ext_modulus=tuple(ext) if ext is not None else None,
            created=obj["created"],
            tool_version=obj["tool_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> ExperimentRecord:
        return cls.from_dict(json.loads(text))


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "ffbias"


def cache_store(record: ExperimentRecord, directory: Path | None = None) -> Path:
    d = Path(directory) if directory is not None else cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    path = d / CACHE_FILE
    # a single write() of one line keeps appends from concurrent writers whole
    line = (record.to_json() + "\n").encode("utf-8")
    fd = os.open(path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        os.write(fd, line)
    finally:
        os.close(fd)
    return path


def cache_load(q: int, modulus: str, directory: Path | None = None) -> ExperimentRecord | None:
    d = Path(directory) if directory is not None else cache_dir()
    path = d / CACHE_FILE
    if not path.exists():
        return None
    key = (q, modulus, _version())
    found = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = ExperimentRecord.from_json(line)
            except (ValueError, KeyError):
                continue  # unreadable or foreign-schema line
            if rec.key == key:
                found = rec
    return found
