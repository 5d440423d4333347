"""Command-line front end.

Subcommands: evaluate (score one refinement), scan (generate and rank
median time-of-day candidates), stats (dump ordering statistics),
gen-candidates (list candidates without evaluating), convert (csv <->
minimal xes).  Output is JSON by default, human-readable with --pretty.

Exit codes: 0 success (including useful=false analyses), 1 usage or
configuration error, 2 input parse error, 3 refinement-precondition
failure.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .evaluate import (EvaluationConfig, EvaluationReport, evaluate,
                       generate_median_time_candidates, rank_candidates)
from .ingest import (CsvFormatError, CsvSchema, PartitionKeySpec, XesFormatError,
                     parse_csv, parse_xes_minimal, partition, write_csv,
                     write_xes_minimal)
from .model import EventLog, Label, MissingAttributeError, Trace
from .ordering import DEFAULT_RELATIONS, OrderingRelation, relation_counts
from .relabel import (Projection, RefinementError, RuleBased, RuleError,
                      TimeThreshold, parse_time_of_day)
from .stats import CorrectionPolicy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_REFINEMENT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_kv_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


# flags that may appear in a --config file, with their coercions
_CONFIG_COERCE = {
    "csv": str, "xes": str, "csv-schema": str, "case-key": str,
    "calendar-key": str, "timezone": str, "alpha": float, "relations": str,
    "correction": str, "family-scope": str, "context-labels": str,
    "base-label": str, "refined-label": str, "rules": str, "threshold": str,
    "out": str, "seed": int,
    "json": lambda v: v.lower() in ("1", "true", "yes"),
    "pretty": lambda v: v.lower() in ("1", "true", "yes"),
    "deterministic": lambda v: v.lower() in ("1", "true", "yes"),
    "include-self": lambda v: v.lower() in ("1", "true", "yes"),
}


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not args.config:
        return
    explicit = {token.split("=", 1)[0] for token in argv if token.startswith("--")}
    for key, raw in _read_kv_file(args.config).items():
        if key not in _CONFIG_COERCE:
            raise UsageError(f"unknown config key {key!r}")
        if f"--{key}" in explicit:
            continue  # flags take precedence
        dest = key.replace("-", "_")
        if hasattr(args, dest):
            setattr(args, dest, _CONFIG_COERCE[key](raw))


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--csv", metavar="FILE", help="CSV event log input")
    parser.add_argument("--xes", metavar="FILE", help="minimal-XES event log input")
    parser.add_argument("--csv-schema", metavar="FILE",
                        help="key=value schema file (id_column, timestamp_column, "
                             "timestamp_format, attribute_columns, delimiter, timezone)")
    parser.add_argument("--case-key", metavar="ATTRS",
                        help="comma-separated attributes grouping events into traces")
    parser.add_argument("--calendar-key", choices=["none", "day"], default="none",
                        help="extend the case key with the calendar day")
    parser.add_argument("--timezone", default="UTC",
                        help="timezone for day boundaries and times of day")
    parser.add_argument("--alpha", type=float, default=0.01)
    parser.add_argument("--relations", default=None,
                        help="comma-separated ordering relations (default: "
                             "directly/eventually follows/precedes)")
    parser.add_argument("--correction", choices=["none", "bonferroni"],
                        default="bonferroni")
    parser.add_argument("--family-scope",
                        choices=["per_candidate", "per_candidate_set"],
                        default="per_candidate")
    parser.add_argument("--context-labels", default=None,
                        help="comma-separated context labels to test against")
    parser.add_argument("--json", action="store_true", default=False,
                        help="JSON output (the default)")
    parser.add_argument("--pretty", action="store_true", default=False,
                        help="human-readable output instead of JSON")
    parser.add_argument("--deterministic", action="store_true", default=False,
                        help="omit run metadata so identical runs are byte-identical")
    parser.add_argument("--seed", type=int, default=None,
                        help="accepted for interface parity; nothing is random")
    parser.add_argument("--config", metavar="FILE",
                        help="key=value file of flag defaults")
    parser.add_argument("--out", metavar="FILE", help="write output here (default stdout)")


def _add_labeling_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--base-label", metavar="ATTRS",
                        help="comma-separated attributes forming the base label")


def build_parser() -> _Parser:
    parser = _Parser(prog="labelsplit",
                     description="Statistical evaluation of event-label refinements.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_eval = sub.add_parser("evaluate", help="score one candidate refinement",
                            parents=[], description="Evaluate one refinement.")
    _add_shared_flags(p_eval)
    _add_labeling_flags(p_eval)
    p_eval.add_argument("--refined-label", metavar="ATTRS",
                        help="attributes forming the refined label")
    p_eval.add_argument("--rules", metavar="FILE",
                        help="rule file producing the refined label")
    p_eval.add_argument("--threshold", metavar="BASE,HH:MM,LOW,HIGH",
                        help="time-of-day split producing the refined label")

    p_scan = sub.add_parser("scan", help="rank median time-of-day candidates")
    _add_shared_flags(p_scan)
    _add_labeling_flags(p_scan)

    p_stats = sub.add_parser("stats", help="dump ordering statistics")
    _add_shared_flags(p_stats)
    _add_labeling_flags(p_stats)
    p_stats.add_argument("--b-labels", default=None,
                         help="restrict source labels (comma-separated)")
    p_stats.add_argument("--c-labels", default=None,
                         help="restrict context labels (comma-separated)")
    p_stats.add_argument("--include-self", action="store_true", default=False,
                         help="include b == c rows")
    p_stats.add_argument("--format", choices=["json", "csv"], default="json")

    p_gen = sub.add_parser("gen-candidates",
                           help="list median time-of-day candidates")
    _add_shared_flags(p_gen)
    _add_labeling_flags(p_gen)

    p_conv = sub.add_parser("convert", help="convert between CSV and minimal XES")
    _add_shared_flags(p_conv)
    _add_labeling_flags(p_conv)
    p_conv.add_argument("--to", choices=["csv", "xes"], required=True)

    return parser


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _resolve_schema(header: list[str], args) -> CsvSchema:
    if args.csv_schema:
        kv = _read_kv_file(args.csv_schema)
        unknown = set(kv) - {"id_column", "timestamp_column", "timestamp_format",
                             "attribute_columns", "delimiter", "timezone"}
        if unknown:
            raise UsageError(f"unknown schema keys: {sorted(unknown)}")
        try:
            return CsvSchema(
                timestamp_column=kv.get("timestamp_column", "timestamp"),
                attribute_columns=tuple(_split_list(kv.get("attribute_columns", ""))),
                id_column=kv.get("id_column", "synthesize"),
                timestamp_format=kv.get("timestamp_format") or None,
                delimiter=kv.get("delimiter", ","),
                timezone=kv.get("timezone", args.timezone),
            )
        except ValueError as exc:
            raise UsageError(f"bad schema: {exc}") from exc
    # default schema sniffed from the header: id/timestamp columns by name,
    # everything else an attribute
    id_column = "id" if "id" in header else "synthesize"
    if "timestamp" not in header:
        raise CsvFormatError("no 'timestamp' column; provide --csv-schema")
    attrs = tuple(c for c in header if c not in ("id", "timestamp") and c)
    if not attrs:
        raise CsvFormatError("no attribute columns found in header")
    return CsvSchema(timestamp_column="timestamp", attribute_columns=attrs,
                     id_column=id_column, timezone=args.timezone)


def _load_base_log(args) -> EventLog:
    """Read the input into an event log carrying the base labeling."""
    if bool(args.csv) == bool(args.xes):
        raise UsageError("exactly one of --csv or --xes is required")
    if args.csv:
        try:
            text = Path(args.csv).read_text(encoding="utf-8")
        except OSError as exc:
            raise CsvFormatError(f"cannot read {args.csv}: {exc}") from exc
        header = text.splitlines()[0].split(",") if text else []
        schema = _resolve_schema([h.strip() for h in header], args)
        events = parse_csv(text, schema)
        if args.case_key or args.calendar_key != "none":
            spec = PartitionKeySpec(
                attribute_keys=tuple(_split_list(args.case_key or "")),
                calendar_key=args.calendar_key,
                timezone=args.timezone,
            )
            log = partition(events, spec)
        elif "case" in schema.attribute_columns:
            log = partition(events, PartitionKeySpec(("case",)))
        else:
            log = EventLog([Trace("all", events)]) if events else EventLog()
    else:
        try:
            data = Path(args.xes).read_bytes()
        except OSError as exc:
            raise XesFormatError(f"cannot read {args.xes}: {exc}") from exc
        log = parse_xes_minimal(data)
    if args.base_label:
        log = Projection(tuple(_split_list(args.base_label))).apply(log)
    return log


def _refined_log(args, base_log: EventLog):
    chosen = [opt for opt in (args.refined_label, args.rules, args.threshold) if opt]
    if len(chosen) != 1:
        raise UsageError("exactly one of --refined-label, --rules, --threshold "
                         "is required")
    if args.refined_label:
        fn = Projection(tuple(_split_list(args.refined_label)))
    elif args.rules:
        fn = RuleBased.from_text(Path(args.rules).read_text(encoding="utf-8"),
                                 name=Path(args.rules).name)
    else:
        parts = args.threshold.split(",")
        if len(parts) != 4:
            raise UsageError("--threshold expects BASE,HH:MM,LOW,HIGH")
        base, at, low, high = (p.strip() for p in parts)
        try:
            threshold = parse_time_of_day(at)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        fn = TimeThreshold(Label(base), threshold, Label(low), Label(high),
                           timezone=args.timezone)
    return fn.apply(base_log), fn.description


def _relations(args) -> tuple[OrderingRelation, ...]:
    if not args.relations:
        return DEFAULT_RELATIONS
    by_value = {r.value: r for r in OrderingRelation}
    out = []
    for name in _split_list(args.relations):
        if name not in by_value:
            raise UsageError(f"unknown relation {name!r}; valid: {sorted(by_value)}")
        out.append(by_value[name])
    return tuple(out)


def _eval_config(args) -> EvaluationConfig:
    contexts = None
    if args.context_labels is not None:
        contexts = tuple(Label(text) for text in _split_list(args.context_labels))
    try:
        return EvaluationConfig(
            alpha=args.alpha,
            relations=_relations(args),
            correction=CorrectionPolicy(args.correction, args.family_scope),
            context_labels=contexts,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _round_floats(value: Any) -> Any:
    """Fix float text at 12 significant digits so output is reproducible."""
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v) for v in value]
    return value


def _emit(args, doc: Any, pretty_text: str | None = None) -> None:
    if args.pretty and pretty_text is not None:
        text = pretty_text
    else:
        if isinstance(doc, dict) and not args.deterministic:
            doc = {**doc, "generated_at": datetime.now(timezone.utc).isoformat()}
        text = json.dumps(_round_floats(doc), ensure_ascii=False, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def human_label(label: Label) -> str:
    if any("+" in str(part) for part in label.parts):
        return "+".join(f'"{part}"' for part in label.parts)
    return str(label)


def _pretty_report(report: EvaluationReport) -> str:
    lines = [
        f"candidate: {report.candidate_description}",
        f"useful: {'yes' if report.useful else 'no'}    score: {report.score:.6g}",
        f"tests: {report.m_tests} at corrected alpha {report.corrected_alpha:.6g}"
        f" (alpha {report.alpha:g})",
    ]
    for sp in report.split_pairs:
        children = ", ".join(human_label(c) for c in sp.children)
        lines.append(f"split: {human_label(sp.parent)} -> {children}")
    if report.tests:
        lines.append("")
        lines.append(f"{'relation':<22}{'context':<28}{'a1 +/-':<12}"
                     f"{'a2 +/-':<12}{'parent +/-':<12}{'p':<12}sig")
        for t in report.tests:
            lines.append(
                f"{t.relation.value:<22}{human_label(t.context_label):<28}"
                f"{f'{t.table.col_a1.pos}/{t.table.col_a1.neg}':<12}"
                f"{f'{t.table.col_a2.pos}/{t.table.col_a2.neg}':<12}"
                f"{f'{t.table.parent_col.pos}/{t.table.parent_col.neg}':<12}"
                f"{t.p_value:<12.4g}{'*' if t.significant else ''}")
    e = report.entropy
    lines.append("")
    lines.append(f"entropy before: {e.total_before:.6g}  after: {e.total_after:.6g}"
                 f"  relative gain: {e.relative_information_gain:.6g}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def cmd_evaluate(args) -> int:
    base_log = _load_base_log(args)
    refined, description = _refined_log(args, base_log)
    report = evaluate(base_log, refined, _eval_config(args), description)
    _emit(args, report.to_json_dict(), _pretty_report(report))
    return EXIT_OK


def cmd_scan(args) -> int:
    base_log = _load_base_log(args)
    skipped: list[str] = []
    candidates = generate_median_time_candidates(base_log, args.timezone, skipped)
    reports = rank_candidates(base_log, candidates, _eval_config(args))
    doc = {
        "candidates": [r.to_json_dict() for r in reports],
        "skipped_labels": skipped,
    }
    pretty = ["rank  score       useful  candidate"]
    for i, r in enumerate(reports, 1):
        pretty.append(f"{i:<6}{r.score:<12.6g}{'yes' if r.useful else 'no':<8}"
                      f"{r.candidate_description}")
    for s in skipped:
        pretty.append(f"skipped: {s}")
    _emit(args, doc, "\n".join(pretty) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    log = _load_base_log(args)
    relations = _relations(args)
    alphabet = list(log.alphabet)
    b_filter = set(_split_list(args.b_labels)) if args.b_labels else None
    c_filter = set(_split_list(args.c_labels)) if args.c_labels else None
    rows = []
    for relation in relations:
        counts = relation_counts(log, relation)
        for b in alphabet:
            if b_filter is not None and str(b) not in b_filter:
                continue
            for c in alphabet:
                if c == b and not args.include_self:
                    continue
                if c_filter is not None and str(c) not in c_filter:
                    continue
                oc = counts[(b, c)]
                rows.append({"relation": relation.value,
                             "b": b.json_parts(), "c": c.json_parts(),
                             "pos": oc.pos, "neg": oc.neg})
    if args.format == "csv":
        lines = ["relation,b,c,pos,neg"]
        for row in rows:
            b = "+".join(str(p) for p in row["b"])
            c = "+".join(str(p) for p in row["c"])
            lines.append(f"{row['relation']},\"{b}\",\"{c}\",{row['pos']},{row['neg']}")
        text = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    _emit(args, {"rows": rows})
    return EXIT_OK


def cmd_gen_candidates(args) -> int:
    log = _load_base_log(args)
    skipped: list[str] = []
    candidates = generate_median_time_candidates(log, args.timezone, skipped)
    doc = {
        "candidates": [
            {"base_label": fn.base_label.json_parts(),
             "threshold": fn.threshold.isoformat(),
             "low_label": fn.low_label.json_parts(),
             "high_label": fn.high_label.json_parts(),
             "timezone": fn.timezone,
             "description": fn.description}
            for fn in candidates
        ],
        "skipped_labels": skipped,
    }
    pretty = [f"{fn.description}" for fn in candidates]
    pretty += [f"skipped: {s}" for s in skipped]
    _emit(args, doc, "\n".join(pretty) + "\n")
    return EXIT_OK


def cmd_convert(args) -> int:
    log = _load_base_log(args)
    text = write_csv(log) if args.to == "csv" else write_xes_minimal(log)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "evaluate": cmd_evaluate,
    "scan": cmd_scan,
    "stats": cmd_stats,
    "gen-candidates": cmd_gen_candidates,
    "convert": cmd_convert,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        _apply_config(args, argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CsvFormatError, XesFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MissingAttributeError, RuleError, ValueError) as exc:
        if isinstance(exc, RefinementError):
            print(f"refinement error: {exc}", file=sys.stderr)
            return EXIT_REFINEMENT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
