"""Command line interface: ``sdlkit {check,query,compare,translate,oracle}``.

Exit codes: ``check`` 0 consistent / 1 inconsistent, ``query`` 0 guaranteed /
1 not guaranteed, ``oracle`` 0 model found / 1 none within bound, and 2 for
any usage, I/O, syntax or resource error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .alc import apply_lifting, export_kb, translate_system
from .analysis import (AnalysisConfig, GuaranteeQuery, Verdict, check_consistency,
                       compare_codes, describe, guarantees_outcome, resolve_atom)
from .errors import (BoundExceededError, DuplicateNameError, EmptySystemError,
                     ResourceLimitError, SDLSyntaxError, UnknownAtomError)
from .kripke import BoundedSearchSpec, sat_oracle
from .syntax import conjoin, format_formula, parse_formula, parse_system

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2
NAMES_FILE = "names.tsv"


class CLIError(Exception):
    pass


def _load_aliases(system_path: Path) -> dict:
    table = system_path.parent / NAMES_FILE
    if not table.is_file():
        return {}
    with table.open(encoding="utf-8", newline="") as fh:
        return {row["alias"]: row["atom"] for row in csv.DictReader(fh, delimiter="\t")}


def _atom_name(name: str, aliases: dict) -> str:
    name = name.strip()
    if name in aliases:
        return aliases[name]
    if name.endswith(("*", "★")):
        return name[:-1] + "_star"
    return name


def _resolve(names: str, aliases: dict, vocabulary, what: str) -> list:
    out = []
    for raw in filter(None, (n.strip() for n in names.split(","))):
        try:
            out.append(resolve_atom(_atom_name(raw, aliases), vocabulary))
        except UnknownAtomError as exc:
            raise CLIError(f"{what}: {exc}") from None
    return out


def _load(args):
    path = Path(args.system)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror or exc}") from None
    system = parse_system(text, name=path.stem)
    return system, _load_aliases(path)


def _config(args) -> AnalysisConfig:
    if args.node_cap < 1000:
        raise CLIError("--node-cap must be at least 1000")
    return AnalysisConfig(lifting=args.lifting, node_cap=args.node_cap)


def _verdict_text(v: Verdict, timing: bool) -> str:
    lines = [describe(v) + (f"  [{v.timing_ms:.1f} ms]" if timing else "")]
    if v.witness is not None:
        m = v.witness
        lines.append(f"witness model: {len(m.worlds)} world(s), root {m.root}")
        for w in m.worlds:
            succ = ", ".join(str(x) for x in m.successors(w))
            atoms = ", ".join(sorted(m.valuation[w])) or "-"
            lines.append(f"  world {w}: true atoms {{{atoms}}}; successors [{succ}]")
    if v.certificate is not None:
        branches = {s["branch"] for s in v.certificate if s["rule"] == "clash"}
        lines.append(f"certificate: {len(v.certificate)} rule applications, "
                     f"{len(branches)} branch(es), each closed by a clash")
    return "\n".join(lines) + "\n"


def _render(v: Verdict, args) -> str:
    timing = not args.no_timing
    if args.format == "json":
        return v.to_json(timing=timing, indent=2) + "\n"
    if args.format == "dot":
        if v.witness is None:
            return f"// {v.kind}: no witness model\n"
        return v.witness.to_dot()
    return _verdict_text(v, timing)


def _emit(text: str, args) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    system, aliases = _load(args)
    assumed = _resolve(args.assume or "", aliases, system.atoms(), "--assume")
    verdict = check_consistency(system.extended(*assumed), _config(args))
    _emit(_render(verdict, args), args)
    return EXIT_OK if verdict.kind == "CONSISTENT" else EXIT_NEGATIVE


def cmd_query(args) -> int:
    system, aliases = _load(args)
    vocab = system.atoms()
    code = _resolve(args.code, aliases, vocab, "--code")
    outcome = _resolve(args.outcome, aliases, vocab, "--outcome")
    if len(code) != 1 or len(outcome) != 1:
        raise CLIError("--code and --outcome each take exactly one name")
    assumed = _resolve(args.assume or "", aliases, vocab, "--assume")
    verdict = guarantees_outcome(GuaranteeQuery(system, code[0], outcome[0], tuple(assumed)),
                                 _config(args))
    _emit(_render(verdict, args), args)
    return EXIT_OK if verdict.kind == "GUARANTEED" else EXIT_NEGATIVE


def cmd_compare(args) -> int:
    system, aliases = _load(args)
    vocab = system.atoms()
    codes = _resolve(args.codes, aliases, vocab, "--codes")
    if not codes:
        raise CLIError("--codes needs at least one code")
    outcome = _resolve(args.outcome, aliases, vocab, "--outcome")
    if len(outcome) != 1:
        raise CLIError("--outcome takes exactly one name")
    assumed = _resolve(args.assume or "", aliases, vocab, "--assume")
    rows = compare_codes(system, codes, outcome[0], assumed, _config(args))
    timing = not args.no_timing
    failed = any(isinstance(v, Exception) for _, v in rows)
    if args.format == "json":
        out = {"outcome": outcome[0].name, "rows": []}
        for code, v in rows:
            entry = {"code": format_formula(code)}
            if isinstance(v, Exception):
                entry["error"] = str(v)
            else:
                entry["verdict"] = v.to_dict(timing)
            out["rows"].append(entry)
        text = json.dumps(out, indent=2) + "\n"
    else:
        width = max(len(format_formula(c)) for c, _ in rows)
        lines = [f"{'code':<{width}}  verdict (outcome {outcome[0].name})"]
        for code, v in rows:
            shown = f"error: {v}" if isinstance(v, Exception) else describe(v)
            if timing and not isinstance(v, Exception):
                shown += f"  [{v.timing_ms:.1f} ms]"
            lines.append(f"{format_formula(code):<{width}}  {shown}")
        text = "\n".join(lines) + "\n"
    _emit(text, args)
    return EXIT_ERROR if failed else EXIT_OK


def cmd_translate(args) -> int:
    system, _ = _load(args)
    kb = translate_system(apply_lifting(system, args.lifting))
    _emit(export_kb(kb, args.format), args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if bool(args.system) == bool(args.formula):
        raise CLIError("give either a system file or --formula")
    if args.formula:
        target = parse_formula(args.formula)
    else:
        system, aliases = _load(args)
        assumed = _resolve(args.assume or "", aliases, system.atoms(), "--assume")
        lifted = apply_lifting(system.extended(*assumed), "formula")
        target = conjoin(lifted.formulas)
    spec = BoundedSearchSpec(args.max_worlds, not args.no_serial)
    result = sat_oracle(target, spec)
    if args.format == "json":
        d = {"status": result.status, "models_checked": result.models_checked}
        if result.model is not None:
            d["model"] = result.model.to_dict()
        text = json.dumps(d, indent=2) + "\n"
    elif args.format == "dot":
        text = result.model.to_dot() if result.model else f"// {result.status}\n"
    else:
        text = f"{result.status} (max {args.max_worlds} worlds, " \
               f"{result.models_checked} candidate models)\n"
        if result.model is not None:
            for w in result.model.worlds:
                atoms = ", ".join(sorted(result.model.valuation[w])) or "-"
                succ = ", ".join(str(x) for x in result.model.successors(w))
                text += f"  world {w}: true atoms {{{atoms}}}; successors [{succ}]\n"
    _emit(text, args)
    return EXIT_OK if result.found else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdlkit",
        description="Standard deontic logic reasoning through an ALC tableau.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json", "dot"), default="text"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--lifting", choices=("tbox", "formula"), default="tbox",
                       help="global formulas as TBox inclusions or boxed formulas")
        p.add_argument("--node-cap", type=int, default=10 ** 6)
        p.add_argument("--output", metavar="PATH", help="write the report to PATH")
        p.add_argument("--no-timing", action="store_true",
                       help="omit wall-clock timings for byte-stable output")

    p = sub.add_parser("check", help="consistency of a normative system")
    p.add_argument("system")
    p.add_argument("--assume", metavar="A,B", help="atoms to add as formulas")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("query", help="does a code guarantee an outcome?")
    p.add_argument("system")
    p.add_argument("--code", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--assume", metavar="A,B")
    common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("compare", help="guarantee verdicts for several codes")
    p.add_argument("system")
    p.add_argument("--codes", required=True, metavar="A,B,...")
    p.add_argument("--outcome", required=True)
    p.add_argument("--assume", metavar="A,B")
    common(p, formats=("text", "json"))
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("translate", help="print the ALC knowledge base")
    p.add_argument("system")
    common(p, formats=("native", "tptp"), default="native")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("oracle", help="brute-force bounded model search")
    p.add_argument("system", nargs="?")
    p.add_argument("--formula")
    p.add_argument("--assume", metavar="A,B")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--no-serial", action="store_true")
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CLIError, SDLSyntaxError, DuplicateNameError, EmptySystemError,
            UnknownAtomError, ResourceLimitError, BoundExceededError, OSError) as exc:
        print(f"sdlkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
