"""Report documents: deterministic JSON and a text rendering.

The JSON form is canonical: keys sorted, two-space indentation, floats
printed with 17 significant digits, no locale or hash-order dependence.
Two runs of the same scenario produce byte-identical documents.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Optional

from .portmanteau import Report, Verdict

SCHEMA_VERSION = "1"

VERDICT_SEMANTICS = (
    "Verdicts are probe-based, not proofs: HOLDS means consistent with "
    "convergence on all probes at n_max within tolerance and with a "
    "plausible trend."
)


def _real(x):
    """Report-ready number: floats stay floats, Fractions collapse to float,
    infinities become strings (JSON has no Infinity)."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return x


def _verdict_block(v: Verdict) -> dict:
    block = {
        "status": v.status,
        "skipped": list(v.skipped),
        "witness": None,
        "probes": [],
    }
    if v.witness is not None:
        w = v.witness
        block["witness"] = {
            "probe": w.probe_id,
            "value_at_n_max": _real(w.value_at_n_max),
            "limit_value": _real(w.limit_value),
            "limsup_est": _real(w.limsup_est),
            "liminf_est": _real(w.liminf_est),
            "residual": _real(w.residual),
        }
    for p in v.probes:
        block["probes"].append({
            "id": p.probe_id,
            "status": p.status,
            "reason": p.reason,
            "limit_value": _real(p.s_limit),
            "series": [[n, _real(val), _real(res)]
                       for (n, val), res in zip(p.series, p.residuals)],
            "last": _real(p.estimates.last),
            "limsup_est": _real(p.estimates.limsup_est),
            "liminf_est": _real(p.estimates.liminf_est),
            "trend": p.estimates.trend,
        })
    return block


def build_document(
    analysis: Report,
    scenario_echo: dict,
    *,
    levy_block: Optional[dict] = None,
    expected: Optional[dict] = None,
) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "verdict_semantics": VERDICT_SEMANTICS,
        "scenario": scenario_echo,
        "conditions": {k: _verdict_block(v) for k, v in analysis.conditions.items()},
        "combined": dict(analysis.combined),
        "consistent": analysis.consistent,
        "stats": dict(analysis.stats),
        "levy": levy_block,
        "expected": expected,
        "matches_expected": None,
    }
    if expected:
        doc["matches_expected"] = _matches_expected(doc, expected)
    return doc


def _matches_expected(doc: dict, expected: dict) -> bool:
    for key, want in sorted(expected.items()):
        if key == "levy_valid":
            got = (doc.get("levy") or {}).get("valid")
        elif key == "conditions":
            got_all = set(doc["combined"].values())
            if want == "HOLDS":
                if got_all != {"HOLDS"}:
                    return False
                continue
            if want == "FAILS":
                if "FAILS" not in got_all or "HOLDS" in got_all:
                    return False
                continue
            return False
        elif key in doc["combined"]:
            got = doc["combined"][key]
        elif key in doc["conditions"]:
            got = doc["conditions"][key]["status"]
        else:
            return False
        if key != "conditions" and got != want:
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def canonical_json(doc) -> str:
    """Byte-stable JSON: sorted keys, fixed indentation, floats at 17
    significant digits."""
    out = []
    _emit(doc, out, 0)
    out.append("\n")
    return "".join(out)


def _emit(x, out: list, depth: int) -> None:
    pad = "  " * depth
    pad_in = "  " * (depth + 1)
    if x is None:
        out.append("null")
    elif isinstance(x, bool):
        out.append("true" if x else "false")
    elif isinstance(x, int):
        out.append(str(x))
    elif isinstance(x, float):
        out.append(format(x, ".17g"))
    elif isinstance(x, Fraction):
        out.append(format(float(x), ".17g"))
    elif isinstance(x, str):
        out.append(json.dumps(x, ensure_ascii=True))
    elif isinstance(x, dict):
        if not x:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(x.keys())
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise TypeError(f"document keys must be strings, got {k!r}")
            out.append(pad_in)
            out.append(json.dumps(k, ensure_ascii=True))
            out.append(": ")
            _emit(x[k], out, depth + 1)
            out.append(",\n" if i + 1 < len(keys) else "\n")
        out.append(pad + "}")
    elif isinstance(x, (list, tuple)):
        if not x:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(x):
            out.append(pad_in)
            _emit(item, out, depth + 1)
            out.append(",\n" if i + 1 < len(x) else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(x).__name__}: {x!r}")


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------


def render_text(doc: dict) -> str:
    lines = []
    sc = doc["scenario"]
    lines.append(f"scenario: {sc.get('name', '<unnamed>')}")
    lines.append(doc["verdict_semantics"])
    lines.append(f"n_max={sc.get('n_max')}  grid={sc.get('n_grid')}")
    lines.append("")
    for key in sorted(doc["conditions"].keys()):
        block = doc["conditions"][key]
        lines.append(f"[{key}] {block['status']}")
        for probe in block["probes"]:
            lines.append(
                f"    {probe['id']}: {probe['status']} ({probe['reason']}); "
                f"last={probe['last']} limit={probe['limit_value']} trend={probe['trend']}"
            )
        for s in block["skipped"]:
            lines.append(f"    skipped: {s}")
        w = block["witness"]
        if w:
            lines.append(
                f"    witness: {w['probe']} value={w['value_at_n_max']} "
                f"limit={w['limit_value']} limsup_est={w['limsup_est']}"
            )
    lines.append("")
    lines.append("combined: " + "  ".join(
        f"{k}={v}" for k, v in sorted(doc["combined"].items())
    ))
    lines.append(f"consistent: {doc['consistent']}")
    if doc.get("levy"):
        lv = doc["levy"]
        lines.append(
            f"levy: valid={lv['valid']} value={lv['value']} "
            f"error_bound={lv['error_bound']} cutoff={lv['cutoff']}"
        )
    if doc.get("expected"):
        lines.append(f"matches_expected: {doc['matches_expected']}")
    lines.append("")
    return "\n".join(lines)
