"""Command-line entry point: ``scalarmo <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .harness import analysis as an
from .harness import report, store
from .harness.campaign import PROFILES, Campaign
from .harness.runner import run_campaign
from .indicators import ReferenceData
from .landscape import InstanceParams, generate_instance, instance_to_csv, save_instance


def _campaign(args) -> Campaign:
    if args.campaign:
        c = Campaign.load(args.campaign)
        if args.seed is not None:
            c.master_seed = args.seed
        return c
    factory = PROFILES[args.profile]
    return factory() if args.seed is None else factory(args.seed)


def cmd_gen_instance(args) -> int:
    inst = generate_instance(InstanceParams(n=args.n, k=args.k, rho=args.rho, seed=args.seed))
    save_instance(inst, args.out)
    if args.dump_text:
        Path(args.dump_text).write_text(instance_to_csv(inst))
    print(f"wrote {args.out}")
    return 0


def cmd_campaign(args) -> int:
    c = _campaign(args)
    text = c.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    c = _campaign(args)
    out = run_campaign(c, args.out, workers=args.workers, dump_offspring=args.dump_offspring)
    print(f"{len(store.load_results(out))} runs in {out / store.RESULTS}")
    return 0


def cmd_analyze(args) -> int:
    rows = store.load_results(args.out)
    dest = report.write_analysis(rows, args.out)
    print(f"analysis tables in {dest}")
    return 0


def parse_policy(text: str) -> tuple[str, float | None]:
    """``kind:uniform:EPS`` -> (kind, EPS); ``kind:nonuniform`` -> (kind, None)."""
    parts = text.split(":")
    if len(parts) == 3 and parts[1] == "uniform":
        return parts[0], float(parts[2])
    if len(parts) == 2 and parts[1] == "nonuniform":
        return parts[0], None
    raise argparse.ArgumentTypeError(f"bad policy {text!r}; use kind:uniform:EPS or kind:nonuniform")


def cmd_indicators(args) -> int:
    rows = store.load_results(args.out)
    if not args.policy:
        dest, _, _ = report.write_indicators(rows, args.out)
        print(f"indicator table in {dest / 'indicators.csv'}")
        return 0
    refs = an.reference_sets(rows)
    _, stars = an.analyze_deviation(rows, an.build_best_registry(rows))
    table = []
    for iid, rho in sorted({(r.instance_id, r.rho) for r in rows}):
        refdata = ReferenceData((0.0, 0.0), refs[iid])
        for kind, eps in args.policy:
            if eps is None:
                pol = an.EpsPolicy(kind, eps_map=an.eps_star_map(stars, iid, kind))
                eps = ""
            else:
                pol = an.EpsPolicy(kind, uniform_eps=eps)
            for s in an.evaluate_policy(rows, pol, refdata, iid):
                table.append((iid, rho, pol.kind, pol.label, eps, s.hv_diff, s.eps_ind, s.n_points, s.replicate))
    sys.stdout.write(store.csv_text(report.INDICATOR_FIELDS, table))
    return 0


def cmd_report(args) -> int:
    dest = report.write_report(args.out, figures=not args.no_figures)
    print(f"report in {dest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scalarmo", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-instance", help="generate a rho-MNK instance file")
    g.add_argument("--n", type=int, default=128)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--rho", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--dump-text", metavar="CSV", help="also write the instance as CSV")
    g.set_defaults(func=cmd_gen_instance)

    def campaign_args(sp):
        sp.add_argument("--campaign", help="campaign file (overrides --profile)")
        sp.add_argument("--profile", choices=sorted(PROFILES), default="desk")
        sp.add_argument("--seed", type=int, help="master seed")

    cp = sub.add_parser("campaign", help="print or write a campaign file for a profile")
    campaign_args(cp)
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_campaign)

    r = sub.add_parser("run", help="run a campaign into a results store")
    campaign_args(r)
    r.add_argument("--out", required=True)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--dump-offspring", action="store_true", help="record every offspring (large)")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("analyze", help="angle, deviation and regression tables")
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("indicators", help="set-based indicator table")
    i.add_argument("--out", required=True)
    i.add_argument(
        "--policy",
        action="append",
        type=parse_policy,
        help="kind:uniform:EPS or kind:nonuniform (repeatable); prints to stdout",
    )
    i.set_defaults(func=cmd_indicators)

    rp = sub.add_parser("report", help="all tables, summary, dynamics dumps and figures")
    rp.add_argument("--out", required=True)
    rp.add_argument("--no-figures", action="store_true")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
