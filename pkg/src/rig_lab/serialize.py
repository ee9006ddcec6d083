"""Canonical JSON persistence for instances, ledgers and reports.

File format (version 1):
    {"version": 1,
     "params": {"n", "d", "p", "q", "seed"}            (+ "q_up"/"q_down" for two-sided),
     "delta": float,
     "labels": [[sorted label ids] per vertex],
     "edges": [[u, v] with u < v, lexicographic],
     "ledger": {...}?}

Dumping is canonical (fixed key order, no whitespace), so identical inputs
produce byte-identical files and load/save round-trips are exact.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .adversary import AdversaryLedger
from .errors import SerializationError
from .graphs import Graph
from .model import RigInstance, RigParams, TwoSidedParams

FORMAT_VERSION = 1


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def instance_to_dict(inst: RigInstance, ledger: AdversaryLedger | None = None) -> dict:
    if inst.two_sided:
        p = inst.params
        params = {"n": p.n, "d": p.d, "p": p.p, "q_up": p.q_up, "q_down": p.q_down, "seed": p.seed}
    else:
        p = inst.params
        params = {"n": p.n, "d": p.d, "p": p.p, "q": p.q, "seed": p.seed}
    doc = {
        "version": FORMAT_VERSION,
        "params": params,
        "delta": inst.delta,
        "labels": [sorted(int(l) for l in inst.labels_of(v)) for v in range(inst.n)],
        "edges": [[int(u), int(v)] for u, v in inst.graph.edges()],
    }
    if not inst.pristine:
        doc["pristine"] = False
    if ledger is not None:
        doc["ledger"] = ledger_to_dict(ledger)
    return doc


def ledger_to_dict(ledger: AdversaryLedger) -> dict:
    return {
        "monotone_deletions": [[u, v] for u, v in ledger.monotone_deletions],
        "flipped_edges": [[u, v] for u, v in ledger.flipped_edges],
        "flip_counts": {str(v): c for v, c in sorted(ledger.flip_counts.items())},
        "corrupted_vertices": list(ledger.corrupted_vertices),
        "eps_deg": ledger.eps_deg,
        "eps_node": ledger.eps_node,
        "order": list(ledger.order),
    }


def ledger_from_dict(doc: dict) -> AdversaryLedger:
    return AdversaryLedger(
        monotone_deletions=[(int(u), int(v)) for u, v in doc.get("monotone_deletions", [])],
        flipped_edges=[(int(u), int(v)) for u, v in doc.get("flipped_edges", [])],
        flip_counts={int(v): int(c) for v, c in doc.get("flip_counts", {}).items()},
        corrupted_vertices=[int(v) for v in doc.get("corrupted_vertices", [])],
        eps_deg=float(doc.get("eps_deg", 0.0)),
        eps_node=float(doc.get("eps_node", 0.0)),
        order=list(doc.get("order", [])),
    )


def save_instance(path: str, inst: RigInstance, ledger: AdversaryLedger | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(instance_to_dict(inst, ledger)))


def _need(doc: dict, field: str, ctx: str):
    if field not in doc:
        raise SerializationError(f"missing field {field!r} in {ctx}")
    return doc[field]


def instance_from_dict(doc: dict) -> tuple[RigInstance, AdversaryLedger | None]:
    if not isinstance(doc, dict):
        raise SerializationError("instance document must be a JSON object")
    version = _need(doc, "version", "instance")
    if version != FORMAT_VERSION:
        raise SerializationError(f"unsupported format version {version}")
    pdoc = _need(doc, "params", "instance")
    for fld in ("n", "d", "seed"):
        _need(pdoc, fld, "params")
    try:
        if "q_up" in pdoc:
            params: RigParams | TwoSidedParams = TwoSidedParams(
                n=int(pdoc["n"]), d=int(pdoc["d"]), p=float(pdoc["p"]),
                q_up=float(pdoc["q_up"]), q_down=float(pdoc["q_down"]), seed=int(pdoc["seed"]),
            )
        else:
            params = RigParams(
                n=int(pdoc["n"]), d=int(pdoc["d"]), p=float(pdoc["p"]),
                q=float(pdoc["q"]), seed=int(pdoc["seed"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError(f"bad params block: {exc}") from exc
    delta = float(_need(doc, "delta", "instance"))
    labels_doc = _need(doc, "labels", "instance")
    if len(labels_doc) != params.n:
        raise SerializationError(f"labels has {len(labels_doc)} rows, expected n={params.n}")
    labels = np.zeros((params.n, params.d), dtype=bool)
    for v, row in enumerate(labels_doc):
        for l in row:
            if not 0 <= int(l) < params.d:
                raise SerializationError(f"label {l} out of range at vertex {v}")
            labels[v, int(l)] = True
    edges_doc = _need(doc, "edges", "instance")
    for i, e in enumerate(edges_doc):
        if len(e) != 2 or not (0 <= e[0] < e[1] < params.n):
            raise SerializationError(f"bad edge entry at index {i}: {e}")
    graph = Graph.from_edges(params.n, edges_doc)
    inst = RigInstance(
        params=params, delta=delta, label_matrix=labels, graph=graph,
        pristine=bool(doc.get("pristine", True)),
    )
    ledger = ledger_from_dict(doc["ledger"]) if "ledger" in doc else None
    return inst, ledger


def load_instance(path: str) -> tuple[RigInstance, AdversaryLedger | None]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return instance_from_dict(doc)
