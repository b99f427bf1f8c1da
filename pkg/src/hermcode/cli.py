"""
Command-line entry point: ``hermcode <command> --t T [options]``.

Reports go to stdout unless ``--output`` is given.  Relative output paths are
resolved against ``$HERMCODE_OUTPUT_DIR``; if that variable is set and no
``--output`` is given, the report is written there as ``<command>-t<T>.<ext>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .finite_field import DEFINING_POLYNOMIALS
from .hermitian_surface import surface

OUTPUT_DIR_ENV = "HERMCODE_OUTPUT_DIR"
COMMANDS = ("surface", "census", "weights", "families", "verify", "conjecture")
MODES = ("exhaustive", "stratified", "sample")
FORMATS = ("text", "json", "csv")
CSV_COMMANDS = ("census", "weights")
EXTENSIONS = {"text": "txt", "json": "json", "csv": "csv"}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    t: int
    command: str
    mode: str | None = None
    sample_size: int = 1_000_000
    seed: int = 0
    shards: int = 1
    output_format: str = "text"
    output_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.t not in DEFINING_POLYNOMIALS:
            raise UsageError(f"t must be one of {sorted(DEFINING_POLYNOMIALS)}")
        if self.mode is None:
            self.mode = "exhaustive" if self.t == 2 else "stratified"
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode == "exhaustive" and self.t != 2:
            raise UsageError("exhaustive mode is only available for t=2")
        if self.command == "weights" and self.mode == "sample":
            raise UsageError("weights needs exhaustive (t=2) or stratified mode")
        if self.command in ("verify", "conjecture", "families") and self.mode != ("exhaustive" if self.t == 2 else "stratified"):
            raise UsageError(f"{self.command} uses exhaustive mode at t=2 and stratified mode otherwise")
        if self.sample_size <= 0:
            raise UsageError("--sample-size must be positive")
        if self.shards < 1:
            raise UsageError("--shards must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown output format {self.output_format!r}")
        if self.output_format == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"csv output is available for {', '.join(CSV_COMMANDS)} only")

    def census_config(self):
        from .census import CensusConfig

        return CensusConfig(sample_size=self.sample_size, seed=self.seed, shards=self.shards)

    def provenance(self) -> dict:
        f = surface(self.t).field
        return {"t": self.t, "q": f.q, "poly": f.poly_str, "seed": self.seed, "mode": self.mode,
                "shards": self.shards, "command": self.command}

    def destination(self) -> Path | None:
        base = os.environ.get(OUTPUT_DIR_ENV)
        if self.output_path:
            path = Path(self.output_path)
            return Path(base) / path if base and not path.is_absolute() else path
        if base:
            return Path(base) / f"{self.command}-t{self.t}.{EXTENSIONS[self.output_format]}"
        return None


def _provenance_lines(prov: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in prov.items())


def _census_csv(report, prov: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["type", "rank", "mode", "section", "count", "ok"])
    for r in report.rows:
        for sec, n in r["histogram"].items():
            w.writerow([r["type"], r["rank"], r["mode"], sec, n, r["ok"]])
    return _provenance_lines(prov) + buf.getvalue()


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _report_output(report, cfg: RunConfig) -> str:
    report.provenance.update(cfg.provenance())
    if cfg.output_format == "json":
        return report.to_json()
    if cfg.output_format == "csv":
        return _census_csv(report, cfg.provenance())
    return report.to_text()


def cmd_surface(cfg: RunConfig) -> tuple[str, int]:
    s = surface(cfg.t)
    info = s.summary()
    info["generators"] = info["lines"]["generator"]
    if cfg.output_format == "json":
        return _json({"surface": info, "provenance": cfg.provenance()}), 0
    lines = [
        f"Hermitian surface over GF({s.q}), t={s.t}, poly {s.field.poly_str}",
        f"points |X|             {info['points']}",
        f"tangent planes         {info['tangent_planes']}",
        f"non-tangent planes     {info['nontangent_planes']}",
        f"tangent lines          {info['lines']['tangent']}",
        f"secant lines           {info['lines']['secant']}",
        f"generators             {info['generators']}",
        f"generators per point   {', '.join(map(str, info['generators_per_point']))}",
        f"seed={cfg.seed} mode={cfg.mode}",
    ]
    return "\n".join(lines) + "\n", 0


def cmd_census(cfg: RunConfig) -> tuple[str, int]:
    from .census import verify_table

    report = verify_table(surface(cfg.t), cfg.mode, cfg.census_config())
    return _report_output(report, cfg), 0


def cmd_weights(cfg: RunConfig) -> tuple[str, int]:
    from .functional_code import full_weight_distribution, stratified_census

    s = surface(cfg.t)
    if cfg.mode == "exhaustive":
        wd = full_weight_distribution(s, cfg.shards)
    else:
        wd, _ = stratified_census(s, cfg.census_config())
    prov = cfg.provenance()
    if cfg.output_format == "json":
        return _json({"distribution": wd.to_dict(), "provenance": prov}), 0
    if cfg.output_format == "csv":
        return _provenance_lines(prov) + wd.to_csv(), 0
    scope = "all codewords" if wd.exact else "ranks 1-2 only (partial)"
    lines = [f"weight distribution of C_2(X), t={cfg.t}, length {wd.length}, {scope}",
             f"{'weight':>6}  {'codewords':>12}  {'quadrics':>10}"]
    lines += [f"{w:>6}  {wd.counts[w]:>12}  {wd.counts[w] // (wd.q - 1):>10}" for w in wd.weights()]
    lines.append(f"total {wd.total}; seed={cfg.seed} mode={cfg.mode} poly {s.field.poly_str}")
    return "\n".join(lines) + "\n", 0


def cmd_families(cfg: RunConfig) -> tuple[str, int]:
    from .census import (CensusReport, count_formulas, enumerate_second_weight_families,
                         enumerate_third_weight_family, family_reconciliation, verify_table)

    s = surface(cfg.t)
    census = verify_table(s, cfg.mode, cfg.census_config()) if cfg.t == 2 else None
    stats = census.stats["exhaustive"] if census else None
    fams = enumerate_second_weight_families(s, stats)
    third = enumerate_third_weight_family(s, stats)
    report = CensusReport(s.t, s.q, s.field.poly_str, cfg.mode)
    report.families = [f.to_dict() for f in fams + [third]]
    recon = family_reconciliation(s, fams)
    f = count_formulas(cfg.t)
    report.summary = {
        "formulas": f,
        "family_reconciliation": recon,
        "third_weight_codewords": third.codewords,
        "checks": [{"name": f"second-weight families x (q-1) = {f['second_count']}", "ok": recon["ok"]},
                   {"name": f"third-weight family x (q-1) = {f['third_count']}",
                    "ok": third.codewords == f["third_count"]}],
    }
    return _report_output(report, cfg), 0 if report.ok else 1


def cmd_conjecture(cfg: RunConfig) -> tuple[str, int]:
    from .census import CensusReport, check_conjecture

    s = surface(cfg.t)
    report = CensusReport(s.t, s.q, s.field.poly_str, cfg.mode)
    report.conjecture = check_conjecture(s, cfg.census_config())
    return _report_output(report, cfg), 0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    from .acceptance import verify_all

    report = verify_all(cfg.t, cfg.census_config())
    return _report_output(report, cfg), 0 if report.ok else 1


HANDLERS = {
    "surface": cmd_surface,
    "census": cmd_census,
    "weights": cmd_weights,
    "families": cmd_families,
    "verify": cmd_verify,
    "conjecture": cmd_conjecture,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermcode", description="Functional codes C_2(X) on the Hermitian surface.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--t", type=int, required=True, help="subfield order; q = t^2")
        p.add_argument("--mode", choices=MODES, help="default: exhaustive for t=2, stratified otherwise")
        p.add_argument("--sample-size", type=int, default=1_000_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--shards", type=int, default=1, help="worker processes")
        p.add_argument("--output-format", choices=FORMATS, default="text")
        p.add_argument("--output", help=f"output file (relative paths are under ${OUTPUT_DIR_ENV})")
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return RunConfig(t=args.t, command=args.command, mode=args.mode, sample_size=args.sample_size,
                         seed=args.seed, shards=args.shards, output_format=args.output_format,
                         output_path=args.output)
    except UsageError as e:
        parser.error(str(e))


def run(cfg: RunConfig) -> int:
    text, status = HANDLERS[cfg.command](cfg)
    dest = cfg.destination()
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
        print(f"wrote {dest}", file=sys.stderr)
    return status


def main(argv: list[str] | None = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
