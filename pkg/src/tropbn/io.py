"""JSON serialization for curves, points, divisors, subcurves, and types.

All rational numbers are written as strings like "3/2" (integers as "3"),
and emitted JSON is byte-deterministic: keys sorted, no float anywhere.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Optional

from .curve import CombinatorialType, Point, Subcurve, TropicalCurve
from .divisor import Divisor


def frac_str(x) -> str:
    return str(Fraction(x))


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"expected a rational string, got {s!r}")


def curve_to_json(curve: TropicalCurve) -> dict:
    return {
        "vertices": [{"id": v, "weight": curve.weight(v)} for v in curve.vertices()],
        "edges": [
            {"id": e, "ends": list(curve.ends(e)), "length": frac_str(curve.length(e))}
            for e in curve.edges()
        ],
    }


def curve_from_json(obj: dict) -> TropicalCurve:
    try:
        vertices = [(v["id"], int(v.get("weight", 0))) for v in obj["vertices"]]
        edges = [(e["id"], tuple(e["ends"]), parse_frac(e["length"]))
                 for e in obj.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed curve JSON: {exc}") from exc
    return TropicalCurve(vertices, edges)


def type_to_json(ctype: CombinatorialType) -> dict:
    return {
        "vertices": [{"id": v, "weight": w} for v, w in ctype.weights.items()],
        "edges": [{"id": e, "ends": list(uv)} for e, uv in ctype.edge_ends.items()],
    }


def type_from_json(obj: dict) -> CombinatorialType:
    try:
        vertices = [(v["id"], int(v.get("weight", 0))) for v in obj["vertices"]]
        edges = [(e["id"], tuple(e["ends"])) for e in obj.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed type JSON: {exc}") from exc
    return CombinatorialType(vertices, edges)


def point_to_json(p: Point) -> dict:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": frac_str(p.offset)}


def point_from_json(obj, curve: TropicalCurve) -> Point:
    if isinstance(obj, str):
        return curve.point(obj)
    if "vertex" in obj:
        return curve.point(obj["vertex"])
    if "edge" in obj:
        return curve.point(obj["edge"], parse_frac(obj["offset"]))
    raise ValueError(f"malformed point JSON: {obj!r}")


def divisor_to_json(D: Divisor, curve_ref: Optional[str] = None) -> dict:
    out = {"chips": [{"at": point_to_json(p), "mult": m} for p, m in D.items()]}
    if curve_ref is not None:
        out["curve"] = curve_ref
    return out


def divisor_from_json(obj: dict, curve: TropicalCurve) -> Divisor:
    chips = [(point_from_json(c["at"], curve), int(c["mult"]))
             for c in obj.get("chips", [])]
    return Divisor(curve, chips)


def subcurve_to_json(sub: Subcurve) -> dict:
    segments = []
    for e, ivs in sorted(sub.segments.items()):
        for a, b in ivs:
            segments.append({"edge": e, "from": frac_str(a), "to": frac_str(b)})
    return {
        "vertices": sorted(sub.vertices),
        "edges": sorted(sub.whole_edges),
        "segments": segments,
    }


def subcurve_from_json(obj: dict, curve: TropicalCurve) -> Subcurve:
    segs = {}
    for s in obj.get("segments", []):
        segs.setdefault(s["edge"], []).append(
            (parse_frac(s["from"]), parse_frac(s["to"])))
    return Subcurve(curve, obj.get("vertices", []), obj.get("edges", []), segs)


def canonical_dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, no floats."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "),
                      allow_nan=False)


def digest(obj) -> str:
    if isinstance(obj, bytes):
        data = obj
    elif isinstance(obj, str):
        data = obj.encode()
    else:
        data = canonical_dumps(obj).encode()
    return hashlib.sha256(data).hexdigest()


def read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_json(obj, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(obj) + "\n")
