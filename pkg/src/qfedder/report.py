"""Verdicts and their JSON / plain-text reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .modpoly import ModPoly
from .parser import format_monomial, format_poly


class Kind(str, Enum):
    F_PURE = "F_PURE"
    NOT_F_PURE = "NOT_F_PURE"
    QFE_SPLIT_CERTIFIED = "QFE_SPLIT_CERTIFIED"
    NOT_QFE_SPLIT_UP_TO_DEGREE = "NOT_QFE_SPLIT_UP_TO_DEGREE"
    NOT_EXCLUDED = "NOT_EXCLUDED"
    QFR_CERTIFIED = "QFR_CERTIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"
    HEIGHT = "HEIGHT"
    TAU_ELEMENTS = "TAU_ELEMENTS"


class Soundness(str, Enum):
    EXACT = "EXACT"
    SOUND_ONE_SIDED = "SOUND_ONE_SIDED"
    HEURISTIC = "HEURISTIC"


@dataclass
class Verdict:
    command: str
    kind: Kind
    soundness: Soundness
    f: ModPoly
    params: dict[str, Any] = field(default_factory=dict)
    certificate: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.kind in (Kind.QFE_SPLIT_CERTIFIED, Kind.QFR_CERTIFIED)


REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "ring", "input", "parameters", "verdict", "certificate", "soundness"],
    "properties": {
        "command": {"type": "string"},
        "ring": {
            "type": "object",
            "required": ["vars", "p"],
            "properties": {
                "vars": {"type": "array", "items": {"type": "string"}},
                "p": {"type": "integer", "minimum": 2},
                "precision": {"type": "integer", "minimum": 1},
            },
        },
        "input": {"type": "object", "required": ["f"], "properties": {"f": {"type": "string"}}},
        "parameters": {
            "type": "object",
            "properties": {
                "n": {"type": ["integer", "null"]},
                "e": {"type": ["integer", "null"]},
                "c": {"type": ["string", "null"]},
            },
        },
        "verdict": {"enum": [k.value for k in Kind]},
        "certificate": {"type": "object"},
        "soundness": {"enum": [s.value for s in Soundness]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


def _jsonable(value, names):
    if isinstance(value, ModPoly):
        return format_poly(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v, names) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, names) for v in value]
    return value


def report_dict(v: Verdict) -> dict[str, Any]:
    names = v.f.cfg.vars
    params = {"n": v.params.get("n"), "e": v.params.get("e"), "c": v.params.get("c")}
    params.update({k: val for k, val in v.params.items() if k not in params})
    return {
        "command": v.command,
        "ring": {"vars": list(names), "p": v.f.p, "precision": v.f.cfg.W},
        "input": {"f": format_poly(v.f)},
        "parameters": _jsonable(params, names),
        "verdict": v.kind.value,
        "certificate": _jsonable(v.certificate, names),
        "soundness": v.soundness.value,
        "notes": list(v.notes),
    }


def emit_report(v: Verdict) -> str:
    """JSON text of the report; key order is fixed so output is byte-stable."""
    return json.dumps(report_dict(v), indent=2)


def emit_text(v: Verdict) -> str:
    """The same fields as ``emit_report`` as labeled lines."""
    d = report_dict(v)
    lines = [
        f"command: {d['command']}",
        f"ring: vars={','.join(d['ring']['vars'])} p={d['ring']['p']} precision={d['ring']['precision']}",
        f"f: {d['input']['f']}",
    ]
    for k, val in d["parameters"].items():
        if val is not None:
            lines.append(f"param.{k}: {val}")
    lines.append(f"verdict: {d['verdict']}")
    for k, val in d["certificate"].items():
        lines.append(f"certificate.{k}: {json.dumps(val) if isinstance(val, (dict, list)) else val}")
    lines.append(f"soundness: {d['soundness']}")
    for note in d["notes"]:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def monomial_str(exps, names) -> str:
    return format_monomial(exps, names)
