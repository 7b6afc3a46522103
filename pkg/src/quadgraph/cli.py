"""Command-line front end.

Subcommands: analyze (build + decompose one instance), predict (closed-form
decomposition, no graph build), verify (reconcile prediction vs brute force),
sweep (verify over all primes up to a bound), dot (Graphviz export) and
preimage (predicted vs observed preimage counts for chosen points).

Exit codes: 0 success, 1 verification mismatch, 2 invalid parameters,
3 resource limit exceeded.  Output is deterministic for identical
invocations; timings are only included on request.
"""

from __future__ import annotations

import argparse
import sys

from . import _kernels
from .dynamics import MapParams, preimage_count_predicted, preimages_bruteforce
from .graph import MAX_Q_ENV, ResourceLimitError, build_graph, decompose, to_dot
from .theory import predict_a_minus1, predict_a_plus1, predict_partial_general
from .verify import sweep, verify_instance

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")


def _parse_alpha(raw: str) -> tuple[int, int]:
    try:
        x, y = raw.split(",")
        return int(x), int(y)
    except ValueError:
        raise ValueError(f"--alpha expects 'x,y', got {raw!r}") from None


def _add_instance_args(parser: argparse.ArgumentParser, need_c: bool = True) -> None:
    parser.add_argument("--q", type=int, required=True, help="odd prime modulus")
    parser.add_argument("--a", type=int, required=True,
                        help="coefficient a (reduced mod q; -1 is accepted)")
    if need_c:
        parser.add_argument("--c", type=int, required=True, help="coefficient c != 0")
    else:
        parser.add_argument("--c", type=int, default=1, help="coefficient c != 0")
    parser.add_argument("--b", type=int, default=None,
                        help="non-square for beta^2=b (default: smallest)")
    parser.add_argument("--max-q", type=int, default=None,
                        help=f"graph-build bound (also {MAX_Q_ENV})")
    parser.add_argument("--backend", choices=_kernels.available_backends(),
                        default=None, help="kernel backend override")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadgraph",
        description="functional graphs of X -> c(X^(q+1) + a*X^2) over GF(q^2)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="build one graph and print its structure")
    _add_instance_args(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None)

    p = sub.add_parser("predict", help="closed-form decomposition, no graph build")
    _add_instance_args(p, need_c=False)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None)

    p = sub.add_parser("verify", help="reconcile prediction against brute force")
    _add_instance_args(p)
    p.add_argument("--format", choices=["text", "json", "jsonl"], default="text")
    p.add_argument("--output", default=None)
    p.add_argument("--timings", action="store_true", help="include wall-clock times")

    p = sub.add_parser("sweep", help="verify all primes q <= qmax")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--a", default="both",
                   help="'both', '-1', '+1', 'general', 'all' or an integer")
    p.add_argument("--c", default="all", help="'all', 'one' or an integer")
    p.add_argument("--jobs", type=int, default=0, help="worker processes")
    p.add_argument("--max-q", type=int, default=None)
    p.add_argument("--backend", choices=_kernels.available_backends(), default=None)
    p.add_argument("--format", choices=["text", "json", "jsonl"], default="text")
    p.add_argument("--output", default=None)

    p = sub.add_parser("dot", help="Graphviz DOT export")
    _add_instance_args(p)
    p.add_argument("--component", type=str, default=None,
                   help="restrict to the component of this state, as 'x,y'")
    p.add_argument("--labels", choices=["coords", "beta"], default="coords")
    p.add_argument("--output", default=None)

    p = sub.add_parser("preimage", help="predicted vs observed preimage counts")
    _add_instance_args(p)
    p.add_argument("--alpha", action="append", required=True,
                   help="target point 'x,y' (repeatable)")
    p.add_argument("--output", default=None)
    return parser


def _selector(raw: str) -> str | int:
    try:
        return int(raw)
    except ValueError:
        return raw


def _cmd_analyze(args) -> int:
    params = MapParams.from_ints(args.q, args.a, args.c, args.b)
    graph = build_graph(params, backend=args.backend, max_q=args.max_q)
    dec = decompose(graph, backend=args.backend)
    q = params.q
    census = dec.signature.cycle_census()
    predicted = None
    match = None
    if params.is_a_minus_one:
        predicted = predict_a_minus1(q, params.c_int)
    elif params.is_a_plus_one:
        predicted = predict_a_plus1(q, params.c_int)
    if predicted is not None:
        match = predicted.signature() == dec.signature

    if args.format == "json":
        import json

        data = {
            "q": q,
            "a": params.a_int,
            "c": params.c_int,
            "b": params.b,
            "states": graph.n,
            "components": dec.signature.component_count(),
            "periodic": int(dec.periodic.size),
            "cycle_census": {str(k): v for k, v in census.items()},
            "decomposition": dec.signature.describe(q),
            "predicted": None if predicted is None else predicted.describe(),
            "signature_match": match,
        }
        _emit(json.dumps(data, indent=2), args.output)
    else:
        lines = [
            params.describe(),
            f"states: {graph.n}  components: {dec.signature.component_count()}"
            f"  periodic: {dec.periodic.size}",
            "cycle census: " + " ".join(f"{k}:{v}" for k, v in census.items()),
            "decomposition: " + dec.signature.describe(q),
        ]
        if predicted is not None:
            lines.append("predicted:     " + predicted.describe())
            lines.append(f"signature match: {match}")
            for note in predicted.notes:
                lines.append(f"note: {note}")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if match in (None, True) else EXIT_MISMATCH


def _cmd_predict(args) -> int:
    q = args.q
    params = MapParams.from_ints(q, args.a, args.c, args.b)
    if params.is_a_minus_one or params.is_a_plus_one:
        dec = (
            predict_a_minus1(q, params.c_int)
            if params.is_a_minus_one
            else predict_a_plus1(q, params.c_int)
        )
        nodes = dec.node_count()
        if args.format == "json":
            import json

            data = {
                "q": q,
                "a": params.a_int,
                "decomposition": dec.describe(),
                "node_count": nodes,
                "node_count_ok": nodes == q * q,
                "notes": list(dec.notes),
            }
            _emit(json.dumps(data, indent=2), args.output)
        else:
            lines = [
                dec.describe(),
                f"node count: {nodes} (q^2 = {q * q}, "
                f"{'ok' if nodes == q * q else 'MISMATCH'})",
            ]
            lines.extend(f"note: {n}" for n in dec.notes)
            _emit("\n".join(lines), args.output)
        return EXIT_OK if nodes == q * q else EXIT_MISMATCH

    facts = predict_partial_general(q, params.a_int, params.c_int)
    if args.format == "json":
        import json

        data = {
            "q": q,
            "a": params.a_int,
            "c": params.c_int,
            "s": facts.s,
            "chi2_of_1_minus_a2": facts.chi_one_minus_a2,
            "applicable": facts.applicable,
            "fixed_points": [list(p) for p in facts.fixed_points],
            "augmented_alphas": list(facts.augmented_alphas),
            "center_component": facts.center_shape_name,
            "notes": list(facts.notes),
        }
        _emit(json.dumps(data, indent=2), args.output)
    else:
        lines = [
            f"partial facts for q={q} a={params.a_int} c={params.c_int}",
            f"fixed points: " + " ".join(f"({x},{y})" for x, y in facts.fixed_points),
            f"chi2(1-a^2) = {facts.chi_one_minus_a2}"
            f" -> structural facts {'apply' if facts.applicable else 'do not apply'}",
        ]
        if facts.applicable:
            lines.append(
                "alphas gaining two childless parents off GF(q): "
                + (" ".join(map(str, facts.augmented_alphas)) or "none")
            )
            lines.append(f"component of ({facts.center_state[0]},0): "
                         f"{facts.center_shape_name}")
        lines.extend(f"note: {n}" for n in facts.notes)
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = verify_instance(
        args.q, args.a, args.c, args.b, max_q=args.max_q, backend=args.backend
    )
    if args.format == "json":
        _emit(report.to_json(include_timings=args.timings), args.output)
    elif args.format == "jsonl":
        _emit("\n".join(report.to_jsonl_lines(include_timings=args.timings)),
              args.output)
    else:
        lines = [
            f"verify q={report.q} a={report.a} c={report.c} b={report.b} "
            f"[{report.mode}, backend={report.backend}]",
            f"signature match: {report.signature_match}",
            f"observed:  {report.observed_signature}",
        ]
        if report.predicted_signature is not None:
            lines.append(f"predicted: {report.predicted_signature}")
        lines.append(
            "preimage checks: "
            + "  ".join(
                f"{name} {p}/{f}" for name, (p, f) in report.preimage_checks.items()
            )
        )
        lines.append(f"fixed points: {'ok' if report.fixed_point_check else 'FAIL'}")
        for check in report.invariants:
            status = "ok" if check.passed else "FAIL"
            lines.append(f"check {check.name}: {status}")
            if check.witness:
                lines.append(f"  witness: {check.witness}")
        for note in report.erratum_notes:
            lines.append(f"note: {note}")
        if args.timings:
            for phase, seconds in report.timings.items():
                lines.append(f"time {phase}: {seconds:.3f}s")
        lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _cmd_sweep(args) -> int:
    summary = sweep(
        args.qmax,
        _selector(args.a),
        _selector(args.c),
        workers=args.jobs,
        max_q=args.max_q,
        backend=args.backend,
    )
    if args.format == "json":
        _emit(summary.to_json(), args.output)
    elif args.format == "jsonl":
        _emit("\n".join(summary.to_jsonl_lines()), args.output)
    else:
        lines = [
            f"sweep qmax={summary.q_max} a={summary.a_mode} c={summary.c_mode}: "
            f"{summary.total} instances, {summary.passed} passed, "
            f"{summary.failed} failed"
        ]
        for row in summary.rows:
            if not row["passed"]:
                lines.append(
                    f"FAIL q={row['q']} a={row['a']} c={row['c']} b={row['b']}: "
                    + ", ".join(row["failed_checks"])
                )
                if row["witness"]:
                    lines.append(f"  witness: {row['witness']}")
        lines.append(f"result: {'PASS' if summary.all_passed else 'FAIL'}")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if summary.all_passed else EXIT_MISMATCH


def _cmd_dot(args) -> int:
    params = MapParams.from_ints(args.q, args.a, args.c, args.b)
    graph = build_graph(params, backend=args.backend, max_q=args.max_q)
    component = _parse_alpha(args.component) if args.component else None
    _emit(to_dot(graph, component=component, labels=args.labels), args.output)
    return EXIT_OK


def _cmd_preimage(args) -> int:
    params = MapParams.from_ints(args.q, args.a, args.c, args.b)
    lines = []
    mismatch = False
    for raw in args.alpha:
        x, y = _parse_alpha(raw)
        alpha = params.ext.element(x, y)
        observed = len(preimages_bruteforce(alpha, params))
        predicted = preimage_count_predicted(alpha, params)
        if predicted is None:
            lines.append(
                f"alpha=({x % params.q},{y % params.q}) predicted=uncovered "
                f"observed={observed}"
            )
        else:
            ok = predicted == observed
            mismatch = mismatch or not ok
            lines.append(
                f"alpha=({x % params.q},{y % params.q}) predicted={predicted} "
                f"observed={observed} {'ok' if ok else 'MISMATCH'}"
            )
    _emit("\n".join(lines), args.output)
    return EXIT_MISMATCH if mismatch else EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "predict": _cmd_predict,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "dot": _cmd_dot,
    "preimage": _cmd_preimage,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
