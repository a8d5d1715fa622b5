"""Command line: ``lpconsensus {validate,solve,sweep,compare}``.

Exit codes: 0 success, 1 invalid input or configuration, 2 the solver did
not converge (the document is still written), 3 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import sys
import warnings
from typing import Sequence

from .model import SocietyValidationError, validate_society
from .problem import PrincipleSpec, build_system, parse_principle, principle_label
from .report import DEFAULT_SWEEP, comparison_table, residual_stats, sweep, sweep_table
from .solver import CONVERGED, NonConvergenceWarning, SolveOptions, solve_multi, solve_reweighted, solve_single

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputIOError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _principles(text: str) -> list[float]:
    try:
        ps = [parse_principle(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not ps:
        raise argparse.ArgumentTypeError("empty principle list")
    return ps


def _single(text: str) -> float:
    try:
        return parse_principle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpconsensus", description="Multi-norm consensus for group decision making.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, solving=True):
        p.add_argument("--input", required=True, help="society JSON document")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if solving:
            p.add_argument("--feasible", choices=("unconstrained", "borda", "saaty-box"))
            p.add_argument("--t1", type=float, help="lower end of the saaty box")
            p.add_argument("--t2", type=float, help="upper end of the saaty box")
            p.add_argument("--tol", type=float, default=SolveOptions.tol)
            p.add_argument("--max-iter", type=int, default=SolveOptions.max_iter)
            p.add_argument("--seedless", action="store_true", help="reserved; the solver uses no randomness")

    common(sub.add_parser("validate", help="check an input document"), solving=False)

    solve = sub.add_parser("solve", help="compute a consensus")
    common(solve)
    which = solve.add_mutually_exclusive_group(required=True)
    which.add_argument("--p", type=_single, help="single principle, a real >= 1 or 'inf'")
    which.add_argument("--principles", type=_principles, help="comma separated principles")
    solve.add_argument("--lambda", dest="lambdas", type=_floats, help="one weight per principle")
    solve.add_argument("--reweight", action=argparse.BooleanOptionalAction, default=None)

    sw = sub.add_parser("sweep", help="single-norm solves over a list of p")
    common(sw)
    sw.add_argument("--ps", "--principles", dest="ps", type=_principles, default=list(DEFAULT_SWEEP))

    cmp_ = sub.add_parser("compare", help="unweighted vs re-weighted rows for every subset of principles")
    common(cmp_)
    cmp_.add_argument("--principles", type=_principles, default=[1.0, 2.0, float("inf")])
    return parser


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _society(args):
    raw = _load(args.input)
    if getattr(args, "feasible", None) is not None or getattr(args, "t1", None) is not None or getattr(args, "t2", None) is not None:
        if not isinstance(raw, dict):
            raise UsageError("input must be a JSON object")
        feas = raw.get("feasible")
        feas = dict(feas) if isinstance(feas, dict) else ({"kind": feas} if isinstance(feas, str) else {})
        if args.feasible is not None:
            feas = {"kind": args.feasible}
        if args.t1 is not None or args.t2 is not None:
            if feas.get("kind", "saaty-box") != "saaty-box":
                raise UsageError("--t1/--t2 only apply to the saaty-box feasible set")
            feas["kind"] = "saaty-box"
            if args.t1 is not None:
                feas["t1"] = args.t1
            if args.t2 is not None:
                feas["t2"] = args.t2
        raw = dict(raw, feasible=feas)
    return validate_society(raw)


def _options(args) -> SolveOptions:
    try:
        return SolveOptions(tol=args.tol, max_iter=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _header(command, society, opts):
    return {
        "command": command,
        "society": {
            "n": society.n,
            "m": society.m,
            "mode": society.mode,
            "alternatives": list(society.alternatives),
        },
        "feasible": society.feasible.to_dict(),
        "options": opts.to_dict(),
    }


def cmd_validate(args, out) -> int:
    society = _society(args)
    if args.format == "json":
        doc = {
            "valid": True,
            "summary": society.summary(),
            "individuals": [{"id": ind.id, "weight": ind.weight} for ind in society.individuals],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(society.summary() + "\n")
        for ind in society.individuals:
            out.write(f"  {ind.id}: weight {ind.weight:g}, ok\n")
    return EXIT_OK


def cmd_solve(args, out) -> int:
    society = _society(args)
    opts = _options(args)
    system = build_system(society)
    F = society.feasible
    if args.p is not None:
        if args.lambdas is not None or args.reweight:
            raise UsageError("--lambda and --reweight need --principles")
        model = "single"
        sol = solve_single(system, F, args.p, opts)
        labels = [principle_label(args.p)]
    else:
        ps = args.principles
        labels = [principle_label(p) for p in ps]
        if args.reweight:
            if args.lambdas is not None:
                raise UsageError("--lambda cannot be combined with --reweight")
            model = "reweighted"
            sol = solve_reweighted(system, F, ps, opts)
        else:
            lams = args.lambdas if args.lambdas is not None else [1.0] * len(ps)
            if len(lams) != len(ps):
                raise UsageError(f"--lambda has {len(lams)} values for {len(ps)} principles")
            try:
                spec = PrincipleSpec(tuple(ps), tuple(lams))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            model = "single" if len(ps) == 1 else "unweighted"
            sol = solve_multi(system, F, spec, opts)
    report = residual_stats(sol.x, system)
    label = "{" + ",".join(labels) + "}" + ("" if model == "single" else f" {model}")
    table = comparison_table([(label, sol, report)])
    if args.format == "csv":
        out.write(table.to_csv())
    else:
        doc = _header("solve", society, opts)
        doc.update(model=model, principles=labels, solution=sol.to_dict(), residuals=report.to_dict(), table=table.records())
        out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if sol.status == CONVERGED else EXIT_NONCONVERGED


def cmd_sweep(args, out) -> int:
    society = _society(args)
    opts = _options(args)
    system = build_system(society)
    rows = sweep(system, society.feasible, args.ps, opts)
    table = sweep_table(rows)
    if args.format == "csv":
        out.write(table.to_csv())
    else:
        doc = _header("sweep", society, opts)
        doc["principles"] = [r.label for r in rows]
        doc["rows"] = [
            {
                "label": r.label,
                "status": r.status,
                "eta": r.eta,
                "consensus": r.solution.consensus.tolist() if r.solution else None,
                "residuals": r.report.to_dict() if r.report else None,
                "error": r.error,
            }
            for r in rows
        ]
        doc["table"] = table.records()
        out.write(json.dumps(doc, indent=2) + "\n")
    if any(r.error for r in rows):
        return EXIT_INVALID
    return EXIT_OK if all(r.status == CONVERGED for r in rows) else EXIT_NONCONVERGED


def cmd_compare(args, out) -> int:
    society = _society(args)
    opts = _options(args)
    system = build_system(society)
    F = society.feasible
    ps = args.principles
    entries = []
    statuses = []
    for size in range(1, len(ps) + 1):
        for subset in itertools.combinations(ps, size):
            name = "{" + ",".join(principle_label(p) for p in subset) + "}"
            plain = solve_multi(system, F, PrincipleSpec.uniform(subset), opts)
            weighted = solve_reweighted(system, F, subset, opts)
            statuses += [plain.status, weighted.status]
            entries.append((f"{name} unweighted", plain, residual_stats(plain.x, system)))
            entries.append((f"{name} reweighted", weighted, residual_stats(weighted.x, system)))
    table = comparison_table(entries)
    if args.format == "csv":
        out.write(table.to_csv())
    else:
        doc = _header("compare", society, opts)
        doc["principles"] = [principle_label(p) for p in ps]
        doc["solutions"] = {label: sol.to_dict() for label, sol, _ in entries}
        doc["table"] = table.records()
        out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if all(s == CONVERGED for s in statuses) else EXIT_NONCONVERGED


COMMANDS = {"validate": cmd_validate, "solve": cmd_solve, "sweep": cmd_sweep, "compare": cmd_compare}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"lpconsensus: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID

    buf = io.StringIO()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonConvergenceWarning)
            code = COMMANDS[args.command](args, buf)
    except InputIOError as exc:
        print(f"lpconsensus: {exc}", file=sys.stderr)
        return EXIT_IO
    except SocietyValidationError as exc:
        print(f"lpconsensus: invalid input ({len(exc.errors)} problem(s)):", file=sys.stderr)
        for err in exc.errors:
            print(f"  - {err}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, ValueError) as exc:
        print(f"lpconsensus: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            print(f"lpconsensus: cannot write {args.output}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
