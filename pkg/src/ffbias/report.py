"""Density report shared by the empirical and theoretical paths."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1

SOURCES = (
    "empirical",
    "model-closed-form",
    "model-quadrature",
    "model-qmc",
    "periodic-exact",
    "theorem-mu",
)


@dataclass(frozen=True)
class DensityReport:
    delta_plus: float
    delta_zero: float
    delta_minus: float
    source: str
    error_bound: float = 0.0
    kind: str = "lambda"  # "lambda" | "mu"
    cumulative: bool = False
    modulus: str = ""
    q: int = 0
    gsh_verdict: str = ""
    exact: tuple[Fraction, Fraction, Fraction] | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown density source {self.source!r}")

    @classmethod
    def from_fractions(cls, plus: Fraction, zero: Fraction, minus: Fraction, source: str, **kw) -> DensityReport:
        return cls(float(plus), float(zero), float(minus), source, exact=(plus, zero, minus), **kw)

    @property
    def total(self) -> float:
        return self.delta_plus + self.delta_zero + self.delta_minus

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "modulus": self.modulus,
            "q": self.q,
            "kind": self.kind,
            "cumulative": self.cumulative,
            "delta_plus": self.delta_plus,
            "delta_zero": self.delta_zero,
            "delta_minus": self.delta_minus,
            "source": self.source,
            "error_bound": self.error_bound,
            "gsh_verdict": self.gsh_verdict,
        }
        if self.exact is not None:
            out["exact"] = [str(x) for x in self.exact]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> DensityReport:
        exact = obj.get("exact")
        return cls(
            delta_plus=obj["delta_plus"],
            delta_zero=obj["delta_zero"],
            delta_minus=obj["delta_minus"],
            source=obj["source"],
            error_bound=obj["error_bound"],
            kind=obj["kind"],
            cumulative=obj["cumulative"],
            modulus=obj["modulus"],
            q=obj["q"],
            gsh_verdict=obj["gsh_verdict"],
            exact=tuple(Fraction(x) for x in exact) if exact else None,
            notes=tuple(obj.get("notes", ())),
        )
