"""Command-line front end.

Exit codes: 0 success, 1 a counterexample was found, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence

from .certify import DisconnectedGraphError, analyze, certify
from .graph import ConstructionError, FamilySpec, Graph, Graph6Error, construct, from_graph6, to_graph6
from .harness import (
    LABELED_LIMIT,
    SWEEP_COLUMNS,
    CorpusError,
    default_workers,
    margin_sweep,
    verify_rules,
)
from .spectral import EPS, fmt
from .structure import RegimeError
from .thresholds import K_CONNECTED, PROPERTIES, RULES, catalog_rows, resolve_rule

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2
TOL_MIN, TOL_MAX = 1e-12, 1e-6


class InputError(Exception):
    pass


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not TOL_MIN <= value <= TOL_MAX:
        raise argparse.ArgumentTypeError(f"tolerance must lie in [{TOL_MIN:g}, {TOL_MAX:g}]")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", help="graph6 string")
    src.add_argument("--file", help="graph6 file, one graph per line ('-' for stdin)")
    src.add_argument("--construct", metavar="SPEC", help="family spec, e.g. join-cliques:k=1,a=3,b=3")


def _add_format(p: argparse.ArgumentParser, choices: Sequence[str], default: str = "json") -> None:
    p.add_argument("--format", choices=choices, default=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qconn", description="Q-index certificates for graph connectivity")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural and spectral report")
    _add_input(p)
    _add_format(p, ("json", "text"))

    p = sub.add_parser("certify", help="evaluate every rule for one property")
    _add_input(p)
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--k", type=int)
    p.add_argument("--tolerance", type=_tolerance, default=EPS)
    _add_format(p, ("json", "text"))

    p = sub.add_parser("construct", help="build an extremal family member")
    p.add_argument("--family", required=True)
    p.add_argument("--params", default="", help="comma-separated key=value list")
    p.add_argument("--side", choices=("ceil", "floor"), default="ceil")
    _add_format(p, ("text", "json"), default="text")

    for name, helptext in (("verify", "exhaustive rule verification"), ("sweep", "margin table as CSV")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--rule", action="append", help="rule id (repeatable; default: all)" if name == "verify"
                       else "rule id")
        p.add_argument("--nmin", type=int, default=2)
        p.add_argument("--nmax", type=int, default=LABELED_LIMIT)
        p.add_argument("--corpus", help="graph6 corpus file (needed above n = 7)")
        p.add_argument("--workers", type=_positive, default=None)
        p.add_argument("--tolerance", type=_tolerance, default=EPS)
        if name == "verify":
            p.add_argument("--lemmas", action="store_true", help="also run the lemma suite")
            _add_format(p, ("json", "text"))
        else:
            _add_format(p, ("csv",), default="csv")

    p = sub.add_parser("rules", help="list the rule catalog")
    _add_format(p, ("text", "json"))
    return ap


# input -----------------------------------------------------------------------

def _graphs(args: argparse.Namespace) -> tuple[list[Graph], bool]:
    """Parsed inputs and whether the output should be a list."""
    if args.graph6 is not None:
        return [from_graph6(args.graph6)], False
    if args.construct is not None:
        return [construct(FamilySpec.parse(args.construct))], False
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="ascii") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    graphs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            try:
                graphs.append(from_graph6(line.strip()))
            except Graph6Error as exc:
                raise InputError(f"line {lineno}: {exc}") from None
    if not graphs:
        raise InputError("no graphs in input")
    return graphs, True


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _show(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return str(fmt(value))
    return str(value)


# commands --------------------------------------------------------------------

def _analyze(args: argparse.Namespace) -> int:
    graphs, many = _graphs(args)
    out = []
    for g in graphs:
        structure, spectra = analyze(g)
        out.append({"graph6": to_graph6(g), "structure": structure.to_json(), "spectra": spectra.to_json()})
    if args.format == "json":
        print(_dump(out if many else out[0]))
    else:
        blocks = []
        for item in out:
            rows = [["graph6", item["graph6"]]]
            rows += [[k, _show(v)] for k, v in item["structure"].items() if k != "witness"]
            w = item["structure"]["witness"]
            if w:
                rows.append(["min cut", " ".join(map(str, w["cut"]))])
            rows += [[k, _show(v)] for k, v in item["spectra"].items()]
            blocks.append(_table(rows))
        print("\n\n".join(blocks))
    return EXIT_OK


def _certify(args: argparse.Namespace) -> int:
    if args.property == K_CONNECTED and args.k is None:
        raise InputError("--k is required for k-connected")
    graphs, many = _graphs(args)
    certs = [certify(g, args.property, args.k if args.property == K_CONNECTED else None, args.tolerance)
             for g in graphs]
    if args.format == "json":
        payload = [c.to_json() for c in certs]
        print(_dump(payload if many else payload[0]))
    else:
        blocks = []
        for c in certs:
            head = (f"{c.graph6}  {c.property}" + (f" k={c.k}" if c.k is not None else "")
                    + f"  verdict: {c.verdict}  ground truth: {_show(c.ground_truth)}")
            rows = [["rule", "status", "value", "threshold", "margin", "exceptional"]]
            for r in c.rule_results:
                rows.append([
                    r.rule, r.status,
                    _show(r.hypothesis_value),
                    _show(float(r.threshold)) if r.threshold else "-",
                    _show(r.margin),
                    str(r.exceptional_match) if r.exceptional_match else (r.reason or "-"),
                ])
            blocks.append(head + "\n" + _table(rows))
        print("\n\n".join(blocks))
    return EXIT_COUNTEREXAMPLE if any(c.counterexample for c in certs) else EXIT_OK


def _construct(args: argparse.Namespace) -> int:
    text = f"{args.family}:{args.params}"
    if args.side != "ceil":
        text += f",side={args.side}"
    spec = FamilySpec.parse(text)
    g = construct(spec)
    if args.format == "json":
        print(_dump({"family": spec.to_json(), "graph6": to_graph6(g), "n": g.n, "m": g.m}))
    else:
        print(to_graph6(g))
    return EXIT_OK


def _rule_ids(raw: list[str] | None) -> list[str]:
    if not raw:
        return list(RULES)
    out = []
    for item in raw:
        for name in filter(None, (x.strip() for x in item.split(","))):
            try:
                out.append(resolve_rule(name).id)
            except KeyError as exc:
                raise InputError(exc.args[0]) from None
    return out


def _verify(args: argparse.Namespace) -> int:
    ids = _rule_ids(args.rule)
    reports, lemmas = verify_rules(ids, (args.nmin, args.nmax), args.corpus, args.workers or default_workers(),
                                   args.tolerance, lemmas=args.lemmas)
    passed = all(r.passed for r in reports) and (lemmas is None or lemmas.passed)
    if args.format == "json":
        payload = {"passed": passed, "reports": [r.to_json() for r in reports]}
        if lemmas is not None:
            payload["lemmas"] = lemmas.to_json()
        print(_dump(payload))
    else:
        rows = [["rule", "scanned", "instances", "hypothesis", "fired", "exceptional", "counterexamples",
                 "min margin", "status"]]
        for r in reports:
            status = "pass" if r.passed else "FAIL"
            if r.vacuous:
                status += " (vacuous)"
            rows.append([r.rule, str(r.scanned), str(r.instances), str(r.hypothesis_count), str(r.fired),
                         str(r.boundary_exceptional), str(len(r.counterexamples)), _show(r.min_margin), status])
        print(_table(rows))
        if lemmas is not None:
            print()
            print(_table([["lemma", "checked", "violations"]] + [
                [k, str(lemmas.checked[k]), str(len(v))] for k, v in lemmas.violations.items()]))
    return EXIT_OK if passed else EXIT_COUNTEREXAMPLE


def _sweep(args: argparse.Namespace) -> int:
    ids = _rule_ids(args.rule)
    if len(ids) != 1:
        raise InputError("sweep takes exactly one --rule")
    rows = margin_sweep(ids[0], (args.nmin, args.nmax), args.corpus, args.workers or default_workers(),
                        args.tolerance)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _rules(args: argparse.Namespace) -> int:
    rows = catalog_rows()
    if args.format == "json":
        print(_dump(rows))
    else:
        keys = list(rows[0])
        print(_table([keys] + [[_show(r[k]) for k in keys] for r in rows]))
    return EXIT_OK


COMMANDS = {
    "analyze": _analyze,
    "certify": _certify,
    "construct": _construct,
    "verify": _verify,
    "sweep": _sweep,
    "rules": _rules,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, Graph6Error, ConstructionError, CorpusError, RegimeError,
            DisconnectedGraphError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qconn {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
