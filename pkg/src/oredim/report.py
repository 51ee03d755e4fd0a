"""Run reports: a versioned JSON document plus a plain-text rendering.

The report is ``{"schema", "header", "body"}``.  The only timestamp lives in
``header.generated_at``; the body is a pure function of the inputs and is
serialized with sorted keys, so two runs on the same fixtures produce
byte-identical bodies.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

SCHEMA_ID = "oredim-report/1"


def make_report(command: str, body: dict) -> dict:
    return {
        "schema": SCHEMA_ID,
        "header": {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")},
        "body": {"tool": "oredim", "version": __version__, "command": command, **body},
    }


def _default(obj):
    # numpy scalars and bools sneak in through lattice arithmetic
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def body_bytes(report: dict) -> bytes:
    return json.dumps(report["body"], sort_keys=True, separators=(",", ":"), default=_default).encode()


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def write_report(report: dict, path) -> None:
    Path(path).write_text(dumps(report))


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()
    out = [line, "  ".join("-" * w for w in widths).rstrip()]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(out)


def _laws_rows(laws: dict) -> list[list]:
    rows = []
    for subject, rep in laws.items():
        bad = rep["violations"]
        if not bad:
            rows.append([subject, "ok", ""])
        for v in bad:
            rows.append([subject, v["law"], f"{v['count']} violations, first {v['witness']}"])
    return rows


def _compat_lines(comp: dict) -> list[str]:
    flags = ["sigma_compatible", "delta_compatible", "completely_sigma_compatible",
             "completely_delta_compatible", "completely_compatible"]
    lines = [_table(["flag", "value"], [[f, comp[f]] for f in flags])]
    for kind, w in comp["witnesses"].items():
        lines.append(f"  witness {kind}: m={w['m']} r={w['r']} N={w['N']}")
    props = comp.get("propositions")
    if props and props["applicable"]:
        lines.append(_table(["item", "ok", "checked"],
                            [[k, v["ok"], v["checked"]] for k, v in props["items"].items()]))
    elif props:
        lines.append("  propositions not applicable (M is not completely compatible)")
    return lines


def _dims_table(rows: list[dict]) -> str:
    body = []
    for r in rows:
        if "skipped" in r:
            body.append([r["object"], "-", "-", "-", "-", "-", r["skipped"]])
            continue
        body.append([r["object"], r["size"], r["submodules"], r["rudim"], r["corank"],
                     len(r["radical"]), "semisimple" if r["semisimple"] else ""])
    return _table(["object", "|.|", "#sub", "rudim", "corank", "|J|", ""], body)


def _runs_table(runs: list[dict]) -> str:
    rows = []
    for r in runs:
        reasons = sorted({v.get("reason", "") for v in r["verdicts"] if v["status"] == "skip"} - {""})
        rows.append([r["theorem"], ",".join(map(str, r["depths"])), r["status"], "; ".join(reasons)])
    return _table(["check", "depths", "status", "notice"], rows)


def render_fixture(fx: dict) -> str:
    parts = [f"== {fx['id']} ({fx['status']})"]
    parts.append(_table(["subject", "law", "detail"], _laws_rows(fx["laws"])))
    parts.extend(_compat_lines(fx["compat"]))
    parts.append(_dims_table(fx["dimensions"]))
    ea = fx["exponent_audit"]
    parts.append(f"collapsed-exponent product differs on {ea['differ']} of {ea['pairs']} monomial pairs")
    parts.append(_runs_table(fx["theorem_runs"]))
    return "\n".join(parts)


def render_text(report: dict) -> str:
    body = report["body"]
    cmd = body["command"]
    out = [f"oredim {body['version']} {cmd}"]
    if cmd == "suite":
        out.append(body["scope"])
        for fx in body["fixtures"]:
            out.append(render_fixture(fx))
        c = body["run_counts"]
        out.append(f"runs: {c['pass']} pass, {c['fail']} fail, {c['skip']} skip")
    elif cmd == "verify":
        out.append(f"== {body['id']}")
        out.append(_table(["subject", "law", "detail"], _laws_rows(body["laws"])))
        out.extend(_compat_lines(body["compat"]))
    elif cmd == "dim":
        r = body["result"]
        out.append(f"{body['kind']}({body['object']}) = {r['value']}   (second characterization: {r['check_value']})")
        out.append(f"witness: {r['witness']}")
    elif cmd == "check":
        run = body["run"]
        out.append(body["scope"])
        out.append(_runs_table([run]))
        for v in run["verdicts"]:
            keys = [k for k in v if k not in ("status", "depth", "proof_witness_audit", "hypotheses")]
            detail = ", ".join(f"{k}={v[k]}" for k in keys)
            out.append(f"  d={'-' if v['depth'] is None else v['depth']} {v['status']}: {detail}")
        for note in run["notes"]:
            out.append(f"  note: {note}")
    out.append(f"status: {body['status']}")
    return "\n".join(out) + "\n"
