"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/model error, 3 when a single
evaluation ends in no_rule_fired. Machine-readable output goes to stdout
(`--json` emits one JSON document); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from typing import Optional, TextIO

from . import __version__
from .core import (
    ModelConsistencyError,
    OutOfUniverseError,
    infer,
    validate_model,
)
from .dsl import ModelFormatError, builtin_student_model, load_model_file, serialize_model
from .reporting import (
    RecordError,
    batch_infer,
    batch_results,
    frequency_report,
    frequency_report_json,
    frequency_report_text,
    inference_result_json,
    surface_grid,
    surface_grid_csv,
    surface_grid_json,
)
from .store import ReferralStore, StoreLockedError, parse_referral_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NO_RULE_FIRED = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we own the codes
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fuzzdss", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", default="builtin", help="'builtin' or a .fzm path")
        p.add_argument("--json", action="store_true", help="JSON output on stdout")
        p.add_argument("--store", default=None, help="referral store path")
        return p

    p_eval = add("eval", "evaluate one set of crisp inputs")
    p_eval.add_argument("--in", dest="inputs", required=True,
                        help="comma-separated name=value pairs")

    p_batch = add("batch", "evaluate a referral CSV and print a frequency report")
    p_batch.add_argument("csv", nargs="?", default="-", help="CSV path or - for stdin")

    p_report = add("report", "frequency report over stored referrals")
    p_report.add_argument("--from", dest="date_from", default=None, metavar="DATE")
    p_report.add_argument("--to", dest="date_to", default=None, metavar="DATE")

    p_surface = add("surface", "export an x/y response grid (CSV, or JSON with --json)")
    p_surface.add_argument("--x", required=True, dest="x_var")
    p_surface.add_argument("--y", required=True, dest="y_var")
    p_surface.add_argument("--fixed", default="", help="name=value pairs for the rest")
    p_surface.add_argument("--resolution", type=int, default=50)

    add("validate", "structural diagnostics, dead zones, unreachable rules")

    p_ingest = add("ingest", "append referral CSV rows to the store")
    p_ingest.add_argument("csv", nargs="?", default="-", help="CSV path or - for stdin")

    p_serve = add("serve", "run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--cors-origin", action="append", default=[],
                         help="allowed CORS origin (repeatable)")

    p_model = add("model", "inspect or reformat model files")
    p_model.add_argument("action", choices=["show", "fmt"])
    p_model.add_argument("path", nargs="?", default=None,
                         help="model file for 'fmt' (defaults to --model)")
    return parser


def _load_model(ref: str):
    if ref == "builtin":
        return builtin_student_model()
    try:
        return load_model_file(ref)
    except OSError as e:
        raise DataError(f"cannot read model file: {e}")
    except ModelFormatError as e:
        raise DataError(str(e))


def _parse_pairs(text: str, what: str) -> dict[str, float]:
    pairs: dict[str, float] = {}
    if not text:
        return pairs
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise UsageError(f"bad {what} entry '{chunk}': expected name=value")
        name, _, value = chunk.partition("=")
        try:
            pairs[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad {what} value '{value}' for '{name.strip()}'")
    return pairs


def _store_path(args) -> str:
    path = args.store or os.environ.get("FUZZDSS_STORE")
    if not path:
        raise UsageError("no store path: pass --store or set FUZZDSS_STORE")
    return path


def _open_input(ref: str, stdin: TextIO) -> TextIO:
    if ref == "-":
        return stdin
    try:
        return open(ref, "r", encoding="utf-8", newline="")
    except OSError as e:
        raise DataError(f"cannot read '{ref}': {e}")


def _parse_date(text: Optional[str], flag: str) -> Optional[dt.date]:
    if text is None:
        return None
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise UsageError(f"bad {flag} date '{text}' (expected YYYY-MM-DD)")


def _print_json(doc, stdout: TextIO):
    json.dump(doc, stdout, indent=2, sort_keys=True)
    stdout.write("\n")


def _print_result(model, res, stdout: TextIO):
    if res.status == "no_rule_fired":
        stdout.write("status: no_rule_fired\n")
        stdout.write("no intervention can be recommended; activated combinations "
                     "without a rule:\n")
        for combo in res.uncovered_combinations:
            stdout.write("  " + " and ".join(f"{v} is {t}" for v, t in combo) + "\n")
        return
    stdout.write(f"crisp_value: {res.crisp_value:.6f}\n")
    stdout.write(f"category: {res.category}\n")
    stdout.write("fired rules:\n")
    for i, s in res.fired_rules:
        stdout.write(f"  rule {i + 1} ({model.rule_text(i)}) strength {s:.6f}\n")


def cmd_eval(args, stdin, stdout, stderr) -> int:
    model = _load_model(args.model)
    inputs = _parse_pairs(args.inputs, "--in")
    try:
        res = infer(model, inputs)
    except (OutOfUniverseError, ModelConsistencyError) as e:
        raise DataError(str(e))
    if args.json:
        _print_json(inference_result_json(model, res), stdout)
    else:
        _print_result(model, res, stdout)
    return EXIT_NO_RULE_FIRED if res.status == "no_rule_fired" else EXIT_OK


def cmd_batch(args, stdin, stdout, stderr) -> int:
    model = _load_model(args.model)
    fh = _open_input(args.csv, stdin)
    try:
        records, row_errors = parse_referral_csv(fh)
    finally:
        if fh is not stdin:
            fh.close()
    for e in row_errors:
        stderr.write(f"row {e.row}: {e.message}\n")
    if any(e.row == 1 for e in row_errors):
        return EXIT_DATA  # header-level failure: nothing usable
    items = batch_infer(model, records)
    report = frequency_report(
        batch_results(items), [b.label for b in model.bands]
    )
    if args.json:
        doc = {
            "rows": [
                {
                    "student_id": rec.student_id,
                    "date": rec.date.isoformat(),
                    "counts": rec.count_map(),
                    "result": (
                        inference_result_json(model, res)
                        if not isinstance(res, RecordError)
                        else {"error": res.message}
                    ),
                }
                for rec, res in items
            ],
            "report": frequency_report_json(report),
        }
        _print_json(doc, stdout)
        return EXIT_OK
    for rec, res in items:
        head = f"{rec.student_id} {rec.date.isoformat()} " + " ".join(
            f"{k}={v:g}" for k, v in rec.counts
        )
        if isinstance(res, RecordError):
            stdout.write(f"{head} -> error: {res.message}\n")
        elif res.status == "no_rule_fired":
            stdout.write(f"{head} -> no_rule_fired\n")
        else:
            stdout.write(f"{head} -> {res.crisp_value:.6f} {res.category}\n")
            for i, s in res.fired_rules:
                stdout.write(f"    rule {i + 1} ({model.rule_text(i)}) strength {s:.6f}\n")
    stdout.write("\n")
    stdout.write(frequency_report_text(report))
    return EXIT_OK


def cmd_report(args, stdin, stdout, stderr) -> int:
    model = _load_model(args.model)
    store = ReferralStore(_store_path(args))
    records, errors = store.load(
        date_from=_parse_date(args.date_from, "--from"),
        date_to=_parse_date(args.date_to, "--to"),
    )
    for e in errors:
        stderr.write(f"store line {e.row}: {e.message}\n")
    items = batch_infer(model, records)
    report = frequency_report(batch_results(items), [b.label for b in model.bands])
    if args.json:
        _print_json(frequency_report_json(report), stdout)
    else:
        stdout.write(frequency_report_text(report))
    return EXIT_OK


def cmd_surface(args, stdin, stdout, stderr) -> int:
    model = _load_model(args.model)
    fixed = _parse_pairs(args.fixed, "--fixed")
    try:
        grid = surface_grid(model, args.x_var, args.y_var, fixed, args.resolution)
    except (ValueError, ModelConsistencyError) as e:
        raise DataError(str(e))
    if args.json:
        _print_json(surface_grid_json(grid), stdout)
    else:
        stdout.write(surface_grid_csv(grid))
    return EXIT_OK


def cmd_validate(args, stdin, stdout, stderr) -> int:
    model = _load_model(args.model)
    diagnostics = validate_model(model)
    if args.json:
        _print_json(
            {
                "model": model.name,
                "diagnostics": [
                    {"kind": d.kind, "message": d.message} for d in diagnostics
                ],
            },
            stdout,
        )
        return EXIT_OK
    stdout.write(f"model '{model.name}': structurally OK\n")
    if not diagnostics:
        stdout.write("no diagnostics\n")
    for d in diagnostics:
        stdout.write(f"[{d.kind}] {d.message}\n")
    return EXIT_OK


def cmd_ingest(args, stdin, stdout, stderr) -> int:
    store = ReferralStore(_store_path(args))
    fh = _open_input(args.csv, stdin)
    try:
        records, row_errors = parse_referral_csv(fh)
    finally:
        if fh is not stdin:
            fh.close()
    if any(e.row == 1 for e in row_errors):
        for e in row_errors:
            stderr.write(f"row {e.row}: {e.message}\n")
        return EXIT_DATA
    for e in row_errors:
        stderr.write(f"row {e.row}: {e.message}\n")
    try:
        total = store.append(records)
    except (OSError, StoreLockedError) as e:
        raise DataError(str(e))
    if args.json:
        _print_json({"appended": len(records), "total_records": total}, stdout)
    else:
        stdout.write(f"appended {len(records)} record(s); store now holds {total}\n")
    return EXIT_OK


def cmd_serve(args, stdin, stdout, stderr) -> int:
    import uvicorn

    from .service import create_app

    model = _load_model(args.model)
    store_path = args.store or os.environ.get("FUZZDSS_STORE")
    app = create_app(model, store_path=store_path, cors_origins=args.cors_origin)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_model(args, stdin, stdout, stderr) -> int:
    if args.action == "fmt":
        ref = args.path or args.model
        if ref == "builtin":
            raise UsageError("model fmt needs a file path")
        model = _load_model(ref)
    else:
        model = _load_model(args.path or args.model)
    stdout.write(serialize_model(model))
    return EXIT_OK


_COMMANDS = {
    "eval": cmd_eval,
    "batch": cmd_batch,
    "report": cmd_report,
    "surface": cmd_surface,
    "validate": cmd_validate,
    "ingest": cmd_ingest,
    "serve": cmd_serve,
    "model": cmd_model,
}


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:  # -h / --version print and exit
            return int(e.code or 0)
        if args.command is None:
            parser.print_usage(stderr)
            return EXIT_USAGE
        return _COMMANDS[args.command](args, stdin, stdout, stderr)
    except UsageError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except DataError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_DATA
    except BrokenPipeError:
        return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
