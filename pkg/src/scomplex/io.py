"""Canonical JSON complex documents, triplet text for matrices, and the
per-simplex CSV table."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .core import (EMPTY, Simplex, SimplicialComplex, WeightAssignment,
                   build_complex)
from .operators import LevelOperator, OrientationAssignment
from .schrodinger import forman_curvature, schrodinger_data


class DocumentError(ValueError):
    """Malformed complex document; carries the offending key."""

    def __init__(self, message: str, key: str = ""):
        super().__init__(message)
        self.key = key


@dataclass(eq=False)
class Document:
    """A complex plus the exact serialization choices it was declared with."""

    complex: SimplicialComplex
    weights: WeightAssignment
    empty_policy: str = "auto"
    empty_weight: float = 1.0


def simplex_key(s: Simplex) -> str:
    return s.key()


def parse_simplex_key(key: str) -> Simplex:
    if key == "":
        return EMPTY
    try:
        return Simplex(tuple(int(v) for v in key.split(",")))
    except ValueError as exc:
        raise DocumentError(f"bad simplex key {key!r}: {exc}", key=key)


def load_document(doc: dict) -> Document:
    """Parse and build; malformed entries raise DocumentError with the key."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if "maximal" not in doc:
        raise DocumentError("missing 'maximal'", key="maximal")
    maximal = doc["maximal"]
    if (not isinstance(maximal, list) or not maximal
            or not all(isinstance(m, list) and m for m in maximal)):
        raise DocumentError("'maximal' must be a non-empty list of vertex lists",
                            key="maximal")
    empty_policy = doc.get("empty", "auto")
    if empty_policy not in ("auto", "include", "exclude"):
        raise DocumentError(f"bad empty policy {empty_policy!r}", key="empty")
    empty_weight = doc.get("empty_weight", 1.0)
    if not isinstance(empty_weight, (int, float)) or empty_weight <= 0:
        raise DocumentError("empty_weight must be a positive number", key="empty_weight")

    raw_weights = doc.get("weights", {"scheme": "combinatorial"})
    if not isinstance(raw_weights, dict):
        raise DocumentError("'weights' must be an object", key="weights")
    if "scheme" in raw_weights:
        scheme = raw_weights["scheme"]
        if scheme not in ("combinatorial", "normalizing"):
            raise DocumentError(f"unknown weight scheme {scheme!r}", key="scheme")
        spec = scheme
    else:
        spec = {}
        for key, value in raw_weights.items():
            if not isinstance(value, (int, float)) or value <= 0:
                raise DocumentError(f"weight for {key!r} must be positive", key=key)
            spec[parse_simplex_key(key)] = float(value)
    try:
        complex_, weights = build_complex(maximal, weight_spec=spec,
                                          empty_policy=empty_policy,
                                          empty_weight=float(empty_weight))
    except ValueError as exc:
        raise DocumentError(str(exc))
    return Document(complex=complex_, weights=weights, empty_policy=empty_policy,
                    empty_weight=float(empty_weight))


def save_document(doc: Document) -> dict:
    """Inverse of load: schemes round-trip as schemes, explicit maps as maps."""
    out: dict = {"maximal": sorted(list(s.vertices) for s in doc.complex.maximal_simplices())}
    if doc.weights.scheme in ("combinatorial", "normalizing"):
        out["weights"] = {"scheme": doc.weights.scheme}
    else:
        out["weights"] = {simplex_key(s): w for s, w in sorted(doc.weights.weights.items(),
                                                               key=lambda kv: kv[0].sort_key())}
    out["empty"] = doc.empty_policy
    out["empty_weight"] = doc.empty_weight
    return out


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)


# The empty simplex needs a whitespace-safe token in triplet text.
EMPTY_TOKEN = "-"


def _triplet_key(s: Simplex) -> str:
    return s.key() if s.dim >= 0 else EMPTY_TOKEN


def operator_to_triplets(op: LevelOperator) -> str:
    lines = [f"{_triplet_key(r)} {_triplet_key(c)} {v!r}" for r, c, v in op.triplets()]
    return "\n".join(lines) + ("\n" if lines else "")


def operator_to_json(op: LevelOperator) -> dict:
    return {
        "source_dim": op.source_dim,
        "target_dim": op.target_dim,
        "convention": op.convention,
        "rows": [_triplet_key(s) for s in op.rows],
        "cols": [_triplet_key(s) for s in op.cols],
        "entries": [[_triplet_key(r), _triplet_key(c), v] for r, c, v in op.triplets()],
    }


CURVATURE_HEADER = "key,dim,m,c_plus,c_minus,c_H,forman,gamma_plus"


def curvature_rows(complex_: SimplicialComplex, weights: WeightAssignment,
                   orientation: OrientationAssignment) -> list[dict]:
    up = schrodinger_data(complex_, weights, orientation, "up")
    down = schrodinger_data(complex_, weights, orientation, "down")
    hodge = schrodinger_data(complex_, weights, orientation, "hodge")
    curv = forman_curvature(complex_, weights, orientation)
    rows = []
    for tau in complex_.simplices():
        rows.append({
            "key": simplex_key(tau),
            "dim": tau.dim,
            "m": weights(tau),
            "c_plus": up.potential[tau],
            "c_minus": down.potential[tau],
            "c_H": hodge.potential[tau],
            "forman": curv[tau],
            "gamma_plus": up.degree[tau],
        })
    return rows


def curvature_csv(rows: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CURVATURE_HEADER.split(","))
    for r in rows:
        writer.writerow([r["key"], r["dim"], repr(r["m"]), repr(r["c_plus"]),
                         repr(r["c_minus"]), repr(r["c_H"]), repr(r["forman"]),
                         repr(r["gamma_plus"])])
    return out.getvalue()
