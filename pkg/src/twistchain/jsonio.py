"""Canonical JSON encoding of run results.

Conventions: complex numbers are two-element [re, im] arrays; root sets
are {"levels": [[[re, im], ...], ...]}; eigenvalue clusters are
{"value": [re, im], "deg": k}.  Keys are emitted sorted so identical runs
produce identical bytes.
"""

import json

import numpy as np

from .bethe import BetheRootSet, MatchReport, MatchedPair
from .linalg import EigenClusterSet

SCHEMA_VERSION = 1


def cnum(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def rootset_payload(rs: BetheRootSet) -> dict:
    return {"levels": [[cnum(z) for z in lvl] for lvl in rs.levels]}


def rootset_from_payload(doc: dict) -> BetheRootSet:
    return BetheRootSet(tuple(tuple(complex(re, im) for re, im in lvl)
                              for lvl in doc["levels"]))


def spectrum_payload(clusters: EigenClusterSet) -> dict:
    return {"clusters": [{"value": cnum(v), "deg": int(d)}
                         for v, d in zip(clusters.values, clusters.degeneracies)],
            "tol": clusters.tol}


def match_report_payload(report: MatchReport) -> dict:
    return {
        "pairs": [{
            "eigenvalue": cnum(p.eigenvalue),
            "deg": int(p.degeneracy),
            "roots": rootset_payload(p.roots),
            "lambda_error": float(p.lambda_error),
            "energy_error": None if p.energy_error is None else float(p.energy_error),
        } for p in report.pairs],
        "unmatched_eigenvalues": [{"value": cnum(e["value"]), "deg": int(e["deg"])}
                                  for e in report.unmatched_eigenvalues],
        "unmatched_rootsets": [rootset_payload(r) for r in report.unmatched_rootsets],
        "probes": [cnum(p) for p in report.probes],
        "cardinality_caps": list(report.cardinality_caps),
    }


def match_report_from_payload(doc: dict) -> MatchReport:
    pairs = [MatchedPair(
        eigenvalue=complex(*p["eigenvalue"]),
        degeneracy=p["deg"],
        roots=rootset_from_payload(p["roots"]),
        lambda_error=p["lambda_error"],
        energy_error=p["energy_error"],
    ) for p in doc["pairs"]]
    return MatchReport(
        pairs=pairs,
        unmatched_eigenvalues=[{"value": complex(*e["value"]), "deg": e["deg"]}
                               for e in doc["unmatched_eigenvalues"]],
        unmatched_rootsets=[rootset_from_payload(r) for r in doc["unmatched_rootsets"]],
        probes=[complex(*p) for p in doc["probes"]],
        cardinality_caps=tuple(doc["cardinality_caps"]),
    )


def result_document(manifest: dict, payload, wall_time: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest,
        "payload": payload,
        "wall_time_seconds": wall_time,
    }


def encode(document: dict) -> bytes:
    return (json.dumps(document, sort_keys=True, indent=1) + "\n").encode("utf-8")


def decode(data: bytes) -> dict:
    try:
        return json.loads(data.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed result document at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
