"""JSON forms of registers, reports and protocol traces (``schema: 1``).

Operators are stored as ``{"text": ..., "terms": [[letters, re, im], ...]}``;
``text`` is for people, ``terms`` is what gets parsed back.  Python's float
repr makes the round trip exact.  Matrices are row-major lists of
``[re, im]`` pairs; 3x3 expectation tables are lists of real pairs
``[full, reference]``.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .descriptors import Register
from .errors import ContractError
from .pauli import PauliSum

SCHEMA = 1


def operator_to_json(p: PauliSum) -> dict:
    terms = [[s.letters, float(c.real), float(c.imag)] for s, c in p]
    return {"text": str(p), "terms": terms}


def operator_from_json(n: int, obj: dict) -> PauliSum:
    return PauliSum.from_terms(n, [(letters, complex(re, im)) for letters, re, im in obj["terms"]])


def register_to_json(r: Register) -> dict:
    return {
        "schema": SCHEMA,
        "type": "register",
        "n": r.n,
        "qubits": [
            {"qubit": d.qubit, "components": {c: operator_to_json(p) for c, p in zip("xyz", d.comps)}}
            for d in r
        ],
    }


def register_from_json(obj: dict) -> Register:
    if obj.get("schema") != SCHEMA:
        raise ContractError(f"unsupported schema {obj.get('schema')!r}")
    n = obj["n"]
    rows = sorted(obj["qubits"], key=lambda q: q["qubit"])
    table = [[operator_from_json(n, row["components"][c]) for c in "xyz"] for row in rows]
    return Register.from_table(table, label="json")


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def _pairs(a: np.ndarray, b: np.ndarray) -> list:
    return [[[float(a[i, j]), float(b[i, j])] for j in range(3)] for i in range(3)]


def correlation_to_json(rep) -> dict:
    return {
        "pair": list(rep.pair),
        "correlated": rep.correlated,
        "table": _pairs(rep.joint, rep.product),
        "witnesses": ["".join(w) for w in rep.witnesses],
    }


def pure_separability_to_json(v) -> dict:
    return {"method": "pure-reduction", "separable": v.separable, "table": _pairs(v.full, v.reduced)}


def certificate_to_json(c) -> dict:
    return {
        "form": c.form,
        "weights": [[float(w) for w in row] for row in np.asarray(c.weights)],
        "unitaries": [matrix_to_json(u) for u in c.unitaries],
        "primed": [matrix_to_json(u) for u in c.primed],
    }


def verdict_to_json(v) -> dict:
    out = {
        "method": v.method,
        "separable": v.separable,
        "status": v.status,
        "residual": _finite(v.residual),
        "details": {k: _plain(x) for k, x in v.details.items()},
    }
    if v.certificate is not None:
        out["certificate"] = certificate_to_json(v.certificate)
    if v.ppt is not None:
        out["ppt"] = verdict_to_json(v.ppt)
    return out


def attribution_to_json(rep) -> dict:
    return {
        "pair": list(rep.pair),
        "purifier": rep.purifier,
        "outcome": rep.outcome,
        "table": _pairs(rep.reduced, rep.reduced_product),
        "entries": {"".join(k): v for k, v in sorted(rep.entries.items())},
    }


def trace_to_json(trace) -> dict:
    return {
        "schema": SCHEMA,
        "type": "protocol",
        "name": trace.name,
        "steps": [{"label": label, "register": register_to_json(r)} for label, r in trace.steps],
        "bits": [{"source": b.source, "step": b.step, "content": operator_to_json(b.content)} for b in trace.bit_channels],
        "notes": {k: _plain(x) for k, x in trace.notes.items()},
    }


def _finite(x: float) -> float | None:
    return float(x) if np.isfinite(x) else None


def _plain(x: Any) -> Any:
    if isinstance(x, (np.floating, float)):
        return _finite(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def descriptor_rows(r: Register) -> list[tuple[int, str, str]]:
    """(qubit, component, text) rows in qubit then x, y, z order."""
    return [(d.qubit, c, str(p)) for d in r for c, p in zip("xyz", d.comps)]

