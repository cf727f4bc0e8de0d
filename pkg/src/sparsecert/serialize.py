"""File formats: matrices as CSV/JSON, hypergraphs, code sets, certificates,
theorem reports, and the experiment CSV.

JSON matrices round-trip bit-exactly (Python's shortest-repr float encoding
restores the original doubles); CSV uses 17 significant digits for the same
reason.
"""

from __future__ import annotations

import hashlib
import io
import json

import numpy as np

from .codes import SparseCodeSet
from .hypergraph import Hypergraph

TOOLKIT_VERSION = "0.1.0"

EXPERIMENT_CSV_HEADER = "seed,eps,max_col_err,bound5,max_code_err,bound6,pass5,pass6,ms"


def save_matrix_csv(path, mat):
    np.savetxt(path, np.asarray(mat, dtype=float), delimiter=",", fmt="%.17g")


def load_matrix_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


def matrix_to_json_dict(mat):
    mat = np.asarray(mat, dtype=float)
    return {
        "rows": int(mat.shape[0]),
        "cols": int(mat.shape[1]),
        "data": [float(v) for v in mat.ravel(order="C")],
    }


def matrix_from_json_dict(payload):
    rows, cols = int(payload["rows"]), int(payload["cols"])
    data = np.asarray(payload["data"], dtype=float)
    if data.size != rows * cols:
        raise ValueError("matrix payload has wrong length")
    return data.reshape(rows, cols)


def hypergraph_to_json_dict(hypergraph):
    return {"m": hypergraph.m, "edges": [list(e) for e in hypergraph.edges]}


def hypergraph_from_json_dict(payload):
    return Hypergraph(int(payload["m"]), payload["edges"])


def code_set_to_json_dict(codes):
    return {
        "m": codes.m,
        "k": codes.k,
        "supports": [list(s) for s in codes.supports],
        "codes": matrix_to_json_dict(codes.codes),
    }


def code_set_from_json_dict(payload):
    return SparseCodeSet(
        int(payload["m"]),
        matrix_from_json_dict(payload["codes"]),
        tuple(tuple(s) for s in payload["supports"]),
        int(payload["k"]),
    )


def canonical_digest(payload):
    """SHA-256 of the canonical JSON encoding of a payload dict."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def certificate_to_json_dict(cert, input_digests=None, diagnostics=None):
    counts = [
        {"support": list(edge), "count": count}
        for edge, count in sorted(cert.support_counts.items())
    ]
    payload = {
        "version": TOOLKIT_VERSION,
        "m": cert.m,
        "n": cert.n,
        "k": cert.k,
        "m_bar": cert.m_bar,
        "r": cert.r,
        "L2": cert.L2,
        "L2k": cert.L2k,
        "L2H": cert.L2H,
        "C2": cert.C2,
        "C1": cert.C1,
        "eps_max_dictionary": cert.eps_max_dictionary,
        "eps_max_codes": cert.eps_max_codes,
        "max_code_l1": cert.max_code_l1,
        "required_per_support": cert.required_per_support,
        "support_counts": counts,
        "flags": {
            "sip_ok": cert.sip_ok,
            "regular_ok": cert.regular_ok,
            "lower_bound_ok": cert.lower_bound_ok,
            "glp_ok": cert.glp_ok,
            "spark_ok": cert.spark_ok,
            "counts_ok": cert.counts_ok,
        },
    }
    if input_digests:
        payload["inputs"] = dict(input_digests)
    if diagnostics:
        payload["diagnostics"] = dict(diagnostics)
    return payload


def theorem_report_to_json_dict(report):
    payload = {
        "eps": report.eps,
        "residuals": [float(v) for v in report.residuals],
        "m": report.m,
        "m_bar": report.m_bar,
        "r": report.r,
        "m_bar_ok": report.m_bar_ok,
        "guaranteed_columns": report.guaranteed_columns,
        "matched_subset": list(report.matched_subset),
        "matched_pairs": [
            {
                "source": j,
                "target": report.alignment.pi[j],
                "scale": report.alignment.scales[j],
                "column_error": report.alignment.column_errors[j],
            }
            for j in sorted(report.alignment.pi)
        ],
        "max_column_error": report.max_column_error,
        "bound5": report.bound5,
        "eq5_ok": report.eq5_ok,
        "code_tier_active": report.code_tier_active,
    }
    if report.code_tier_active:
        payload.update(
            {
                "code_errors": [float(v) for v in report.code_errors],
                "code_bounds": [float(v) for v in report.code_bounds],
                "eq6_ok": report.eq6_ok,
                "l2k_aligned": report.l2k_aligned,
                "l2k_floor": report.l2k_floor,
                "l2k_ok": report.l2k_ok,
            }
        )
    return payload


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records):
    """Experiment records in the stable CSV schema (sorted by seed, eps)."""
    out = io.StringIO()
    out.write(EXPERIMENT_CSV_HEADER + "\n")
    for rec in sorted(records, key=lambda r: (r.seed, r.eps)):
        cells = [
            rec.seed, rec.eps, rec.max_col_err, rec.bound5,
            rec.max_code_err, rec.bound6, rec.pass5, rec.pass6, rec.ms,
        ]
        out.write(",".join(_csv_cell(c) for c in cells) + "\n")
    return out.getvalue()


def dump_json(payload, path=None):
    """Serialize deterministically; write to path or return the string."""
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return None
