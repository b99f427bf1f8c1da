"""Plain-text rendering of census reports."""

from __future__ import annotations

from .census import PRINTED_TABLE, CensusReport, bounds


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*map(str, r)) for r in rows]
    return out


def _hist(h: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in h.items()) or "-"


def render_text(report: CensusReport) -> str:
    b = bounds(report.t)
    lines = [
        f"C_2(X) census over GF({report.q}), t={report.t}, poly {report.poly}",
        f"mode={report.mode} seed={report.provenance.get('seed')} shards={report.provenance.get('shards')}",
        f"s..s5 = {', '.join(map(str, b.sections))}   weights |X|-s_i = {', '.join(map(str, b.weights))}",
        "",
    ]
    if report.rows:
        header = ["rank", "type", "paper says", "observed |Z cap X|", "count", "mode", "verdict"]
        if report.t == 2:
            header.insert(3, "paper F4")
        rows = []
        for r in report.rows:
            general, f4 = PRINTED_TABLE[r["type"]]
            row = [r["rank"], f"{r['type']} {r['name']}", general, _hist(r["histogram"]), r["count"], r["mode"],
                   "ok" if r["ok"] else "FAIL"]
            if report.t == 2:
                row.insert(3, f4)
            rows.append(row)
        lines += _table(header, rows)
        lines.append("")
        for r in report.rows:
            for d in r["detail"]:
                if "predicted" in d:
                    mark = "ok" if d["ok"] else "FAIL"
                    lines.append(f"  type {r['type']}: {d['tangent_planes']} tangent plane(s), line {d['line_class']}:"
                                 f" predicted {d['predicted']}, observed {_hist(d['histogram'])} [{mark}]")
        lines.append("")
    for v in report.violations():
        lines.append(f"VIOLATION {v}")
    if report.families:
        lines += _table(
            ["family", "constructed", "formula", "census", "codewords", "classification", "ok"],
            [[f["family"], f["constructed_count"], f["formula_count"],
              "-" if f["census_count"] is None else f["census_count"], f["codewords"],
              ", ".join(f"{k} x{n}" for k, n in f["classification"].items()), f["ok"]] for f in report.families],
        )
        lines.append("")
    summary = report.summary
    if "weights" in summary:
        lines.append("smallest weights: " + ", ".join(f"{w} ({summary['weight_counts'][str(w)]})"
                                                      for w in summary["weights"][:6]))
    for c in summary.get("checks", []):
        lines.append(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']}")
    if report.theorem_4_5:
        th = report.theorem_4_5
        hist = th.get("histogram") or {**th.get("uniform_histogram", {}), "targeted": th.get("targeted_histogram")}
        lines.append(f"{'ok  ' if th['ok'] else 'FAIL'} two-skew-generator hyperbolics: max {th['max']}, {hist}")
    if report.conjecture:
        c = report.conjecture
        if c["mode"] == "exact":
            lines.append(f"{'ok  ' if c['ok'] else 'FAIL'} fourth weight {c['fourth_weight']} (predicted"
                         f" {c['predicted_fourth']}), fifth weight {c['fifth_weight']} (predicted {c['predicted_fifth']})")
            lines.append(f"     fourth attained by types {c['fourth_attained_by']['by_type']}")
            lines.append(f"     fifth attained by types {c['fifth_attained_by']['by_type']}")
        else:
            lines.append(f"{'ok  ' if c['ok'] else 'FAIL'} sampled maxima by type {c['sampled_max_by_type']},"
                         f" no section above s4={c['s4']} other than s, s2, s3: {not c['sections_refuting']}")
    for a in report.acceptance:
        lines.append(f"{'PASS' if a['ok'] else 'FAIL'} criterion {a['id']}: {a['name']}")
    return "\n".join(lines).rstrip() + "\n"
