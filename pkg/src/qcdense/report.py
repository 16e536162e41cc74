"""JSON reports shared by every verdict-producing command."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .models import character_json, format_point
from .solenoid import SolenoidElement
from .torus import TorusValue, format_rational

# echoed in every report so that a change of convention is visible
CONVENTIONS = {"T_plus": "closed [-1/4, 1/4]", "arcs": "open (-r, r)", "torus_representative": "(-1/2, 1/2]"}


def to_jsonable(obj):
    if isinstance(obj, TorusValue):
        return str(obj)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, SolenoidElement):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(v) for v in sorted(obj)]
    return obj


def certificates_json(ctx, certs) -> list:
    """(character, witness, value) triples as JSON objects."""
    out = []
    for chi, x, v in certs:
        if isinstance(x, SolenoidElement):
            out.append({"character": format_rational(chi), "witness": x.to_json(), "value": str(v)})
        else:
            out.append(
                {"character": character_json(ctx, chi), "witness": format_point(ctx, x), "value": str(v)}
            )
    return out


@dataclass
class Report:
    command: str
    inputs: dict
    result: dict = field(default_factory=dict)
    certificates: list | None = None
    bound: str | None = None
    timing_ms: int = 0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def finish(self) -> "Report":
        self.timing_ms = int((time.perf_counter() - self._t0) * 1000)
        return self

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "conventions": CONVENTIONS,
            "result": to_jsonable(self.result),
        }
        if self.certificates is not None:
            d["certificates"] = self.certificates
        if self.bound is not None:
            d["bound"] = self.bound
        d["timing_ms"] = self.timing_ms
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
