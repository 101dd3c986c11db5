"""Command line interface: ``solve``, ``verify``, ``gen`` and ``compare``.

Instance arguments are file paths, or one of the bundled names EX1,
EX1-STRICT, EX1-COARSE and EX2.

``verify`` exits 0 when the match passes, 1 when it is blocked (the
certificate is printed), 2 when the search budget ran out. With
``--certificate`` it replays a stored certificate instead and exits 1 if the
certificate blocks the match, 3 if it does not.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Membership,
    certificate_holds,
    fairness_violations,
    find_pareto_improvement,
    is_in_efficient_core,
    is_in_unified_core,
)
from .examples import INSTANCES, load_instance
from .generate import GeneratorError, GeneratorParams, generate_instance
from .model import UNMATCHED, InvalidInstance
from .pipeline import compare_report, run_pipeline
from .textio import (
    MatchError,
    ParseError,
    parse_certificate,
    parse_instance,
    parse_match,
    serialize_certificate,
    serialize_instance,
    serialize_match,
)

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_BLOCKED, EXIT_UNKNOWN, EXIT_BAD_CERTIFICATE, EXIT_INPUT = 0, 1, 2, 3, 4


def _read_instance(arg: str):
    if arg in INSTANCES and not Path(arg).exists():
        return load_instance(arg)
    return parse_instance(Path(arg).read_text(encoding="utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    result = run_pipeline(inst)
    match = result.stage1 if args.stage == "da" else result.stage2
    _emit(serialize_match(inst, match), args.output)
    if args.trace:
        report = result.da_trace.report()
        if args.stage == "da-ttc":
            report += "\n" + (result.ttc_trace.report() or "TTC: no active students")
            report += f"\nTTC trades: {len(result.ttc_trace.trades)}"
        print(report, file=sys.stderr if not args.output else sys.stdout)
    return EXIT_PASS


def _certificate_text(inst, cert) -> str:
    lines = [serialize_certificate(inst, cert).rstrip("\n")]
    for ev in cert.evidence:
        lines.append(f"# {ev.school}: group counts preserved={ev.equivalent} "
                     f"interrupters={ev.interrupters} spare seats={ev.spare_seats}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    inst = _read_instance(args.instance)
    mu = parse_match(Path(args.match).read_text(encoding="utf-8"), inst)

    if args.certificate:
        cert = parse_certificate(Path(args.certificate).read_text(encoding="utf-8"), inst, mu)
        ok = certificate_holds(inst, mu, cert)
        print(f"certificate ({cert.kind.value}) {'blocks' if ok else 'does not block'} the match")
        return EXIT_BLOCKED if ok else EXIT_BAD_CERTIFICATE

    payload: dict = {"core": args.core}
    if args.core == "fair":
        violations = fairness_violations(inst, mu)
        status = Membership.OUT if violations else Membership.IN
        payload["violations"] = [[i, s] for i, s in violations]
        detail = "".join(f"violation : {i} {'-' if s is UNMATCHED else s}\n"
                         for i, s in violations)
    elif args.core == "pareto":
        try:
            better = find_pareto_improvement(inst, mu, args.budget)
        except BudgetExceeded:
            better, status = None, Membership.UNKNOWN
        else:
            status = Membership.IN if better is None else Membership.OUT
        detail = serialize_match(inst, better) if better is not None else ""
        if better is not None:
            payload["dominating_match"] = dict(better.items())
    else:
        check = is_in_unified_core if args.core == "unified" else is_in_efficient_core
        verdict = check(inst, mu, args.budget)
        status = verdict.status
        detail = _certificate_text(inst, verdict.certificate) if verdict.certificate else ""
        if verdict.certificate:
            cert = verdict.certificate
            payload["certificate"] = {
                "kind": cert.kind.value,
                "coalition": [i for i in inst.students if i in cert.coalition],
                "alt_match": dict(cert.alt_match.items()),
            }
            if args.output:
                Path(args.output).write_text(serialize_certificate(inst, cert), encoding="utf-8")

    payload["verdict"] = status.value
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"{args.core}: {status.value}")
        if status is Membership.UNKNOWN:
            print(f"search budget of {args.budget} nodes exhausted")
        sys.stdout.write(detail)
    return {Membership.IN: EXIT_PASS, Membership.OUT: EXIT_BLOCKED,
            Membership.UNKNOWN: EXIT_UNKNOWN}[status]


def _params(args, seed: int) -> GeneratorParams:
    return GeneratorParams(
        seed=seed,
        n_students=args.students,
        n_schools=args.schools,
        capacity_range=tuple(args.capacity),
        list_length_range=tuple(args.list_length or (1, args.schools)),
        groups_per_school_range=tuple(args.groups or (1, args.students)),
    )


def cmd_gen(args) -> int:
    inst = generate_instance(_params(args, args.seed))
    _emit(serialize_instance(inst), args.output)
    return EXIT_PASS


def _trial(job):
    params, budget = job
    return params.seed, compare_report(generate_instance(params), budget).to_dict()


def cmd_compare(args) -> int:
    if args.trials is None:
        if args.instance is None:
            raise SystemExit("compare needs an instance or --trials")
        report = compare_report(_read_instance(args.instance), args.budget)
        if args.json:
            print(json.dumps(report.to_dict(), indent=2))
        else:
            print(report.render())
        return EXIT_PASS

    if args.instance is not None:
        raise SystemExit("give either an instance or --trials, not both")
    jobs = [(_params(args, args.seed + k), args.budget) for k in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_trial, jobs))
    else:
        results = [_trial(job) for job in jobs]
    results.sort(key=lambda r: r[0])

    totals: dict = {}
    for _, rep in results:
        for m in rep["mechanisms"]:
            agg = totals.setdefault(m["mechanism"], {
                "rank_histogram": Counter(), "unmatched": 0, "improved_by_stage2": 0,
                "verdicts": {}})
            agg["rank_histogram"].update(m["rank_histogram"])
            agg["unmatched"] += m["unmatched"]
            agg["improved_by_stage2"] += m["improved_by_stage2"]
            for core, v in m["verdicts"].items():
                agg["verdicts"].setdefault(core, Counter())[v] += 1
    summary = {
        "trials": args.trials,
        "seed": args.seed,
        "mechanisms": {
            name: {**agg, "rank_histogram": dict(agg["rank_histogram"]),
                   "verdicts": {k: dict(v) for k, v in agg["verdicts"].items()}}
            for name, agg in totals.items()
        },
    }
    if args.json:
        summary["per_trial"] = [{"seed": seed, **rep} for seed, rep in results]
        print(json.dumps(summary, indent=2))
    else:
        print(f"{args.trials} trials from seed {args.seed}")
        for name, agg in summary["mechanisms"].items():
            print(f"{name}: ranks {agg['rank_histogram']}; unmatched {agg['unmatched']}; "
                  f"improved by stage 2 {agg['improved_by_stage2']}")
            print("  " + "; ".join(f"{k} {v}" for k, v in agg["verdicts"].items()))
    return EXIT_PASS


def _range(text: str) -> list[int]:
    parts = text.replace(":", " ").replace(",", " ").split()
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return [int(p) for p in parts]


def _add_gen_options(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--students", type=int, required=required, default=None if required else 6)
    p.add_argument("--schools", type=int, required=required, default=None if required else 5)
    p.add_argument("--capacity", type=_range, default=[1, 1], metavar="LO:HI")
    p.add_argument("--list-length", type=_range, default=None, metavar="LO:HI",
                   help="preference list lengths (default 1:schools)")
    p.add_argument("--groups", type=_range, default=None, metavar="LO:HI",
                   help="priority groups per school (default 1:students)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unicore", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run deferred acceptance, optionally followed by trading")
    p.add_argument("instance")
    p.add_argument("--stage", choices=["da", "da-ttc"], default="da-ttc")
    p.add_argument("--trace", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a match against a core notion")
    p.add_argument("instance")
    p.add_argument("match")
    p.add_argument("--core", choices=["unified", "fair", "efficient", "pareto"], default="unified")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--certificate", help="replay a stored certificate instead of searching")
    p.add_argument("-o", "--output", help="write a found certificate to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random instance")
    _add_gen_options(p, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="compare the first stage with both stages")
    p.add_argument("instance", nargs="?")
    p.add_argument("--trials", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    _add_gen_options(p, required=False)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvalidInstance as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
    except (ParseError, MatchError, GeneratorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
