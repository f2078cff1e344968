"""``tranchelab`` command-line entry point.

Exit status: 0 on success, 1 on computational errors, 2 on usage errors.
Errors are printed as a single ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from decimal import Decimal, InvalidOperation
from typing import Sequence

from . import __version__, kernels
from .cycles import read_panel_csv, simulate_panel, write_panel_csv
from .defaults import cohort_batch
from .engine import default_workers
from .errors import TranchelabError
from .ingest import ingest_gdp_growth
from .pricing import cds_quotes, country_expected_losses
from .reports import Column, Report, deal_report, emit_report, render_deal
from .scenario import (
    BondSpec, FactorParams, LossConvention, Scenario, SyncMode, canonical_dataset, read_countries_csv,
    validate_scenario,
)
from .syncstats import median_sync_stats, sync_stats
from .tranche import KAPPAS, WeightScheme, national_tranching, structure_deal, sweep_batch

PARAMS_ENV = "TRANCHELAB_PARAMS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _decimal(text: str) -> Decimal:
    try:
        return Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("simulation")
    g.add_argument("--seed", type=_seed, default=0, help="master seed (default 0)")
    g.add_argument("--runs", type=int, default=100_000, help="Monte Carlo runs (default 100000)")
    g.add_argument("--workers", type=int, default=1, help="worker threads; 0 = auto")
    g.add_argument("--params", default=None, help=f"country CSV (default ${PARAMS_ENV} or built-in)")
    g.add_argument("--out", default=None, help="write output here instead of stdout")
    g.add_argument("--format", choices=("csv", "markdown"), default="csv")
    g.add_argument("--perfect-sync", action="store_true", help="one shared recession state per year")
    g.add_argument("--maturity", type=int, default=None, help="bond maturity in years (default 5)")
    g.add_argument("--coupon", type=float, default=0.10, help="annual coupon rate (default 0.10)")
    g.add_argument("--convention", default="face",
                   choices=("face", "coupon", "face-only", "coupon-inclusive"),
                   help="loss accounting: face value only, or face plus lost coupons")

    p = _Parser(prog="tranchelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tranchelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sync-stats", parents=[common], help="recession synchronization measures")
    src = s.add_mutually_exclusive_group()
    src.add_argument("--gdp", help="empirical growth CSV (code,year,growth_pct)")
    src.add_argument("--panel", help="0/1 panel CSV as written by simulate-panel")
    s.add_argument("--replications", type=int, default=100_000)
    s.add_argument("--years", type=int, default=34)

    sub.add_parser("cds", parents=[common], help="model CDS spreads (10-year cohorts)")
    sub.add_parser("el", parents=[common], help="per-country expected loss rates")

    t = sub.add_parser("tranche-sweep", parents=[common], help="senior/junior EL across subordination")
    t.add_argument("--scheme", default="all",
                   choices=["all"] + [s.value for s in WeightScheme])

    n = sub.add_parser("national-tranche", parents=[common], help="tranche one sovereign on its own")
    n.add_argument("--country", default="CHN")
    n.add_argument("--kappa", type=float, default=0.25)

    d = sub.add_parser("deal", parents=[common], help="vehicle balance sheet for a debt swap")
    d.add_argument("--debt", type=_decimal, required=True)
    d.add_argument("--kappa", type=_decimal, default=Decimal("0.5"))
    d.add_argument("--multiple", type=_decimal, default=Decimal("2"))

    sp = sub.add_parser("simulate-panel", parents=[common], help="dump one simulated recession panel")
    sp.add_argument("--years", type=int, default=34)
    sp.add_argument("--index", type=int, default=0, help="substream (replication) index")
    return p


def load_scenario(args) -> Scenario:
    path = args.params or os.environ.get(PARAMS_ENV)
    countries = read_countries_csv(path) if path else canonical_dataset()
    sync = SyncMode.PERFECT_SYNC if args.perfect_sync else SyncMode.FACTOR_DRIVEN
    scenario = Scenario(
        countries=tuple(countries),
        factor=FactorParams(sync_mode=sync),
        bond=BondSpec(maturity_years=args.maturity or 5, coupon_rate=args.coupon,
                      loss_convention=LossConvention.parse(args.convention)),
        n_runs=args.runs,
        master_seed=args.seed,
    )
    return validate_scenario(scenario)


def _provenance(scenario: Scenario, args, **extra) -> dict[str, str]:
    prov = {"tranchelab": __version__, "seed": str(scenario.master_seed),
            "runs": str(scenario.n_runs), "scenario": scenario.digest(),
            "backend": kernels.backend_name}
    prov.update({k: str(v) for k, v in extra.items()})
    return prov


def _workers(args) -> int:
    return default_workers() if args.workers == 0 else max(1, args.workers)


def cmd_sync_stats(args, scenario):
    if args.gdp:
        _, panel = ingest_gdp_growth(args.gdp, scenario.codes)
        stats = sync_stats(panel)
        prov = {"tranchelab": __version__, "source": "empirical", "file": os.path.basename(args.gdp)}
    elif args.panel:
        stats = sync_stats(read_panel_csv(args.panel))
        prov = {"tranchelab": __version__, "source": "panel", "file": os.path.basename(args.panel)}
    else:
        stats = median_sync_stats(scenario, args.replications, args.years, _workers(args))
        prov = _provenance(scenario, args, source="model-median", replications=args.replications,
                           years=args.years, sync=scenario.factor.sync_mode.value)
        prov.pop("runs")
    cols = [Column("recession_rate", "frac3"), Column("concordance_rate", "frac3"),
            Column("pca", "frac3"), Column("pca_tetrachoric", "frac3")]
    return emit_report(Report("T1", cols, [list(stats.as_tuple())], prov), args.format)


def cmd_cds(args, scenario):
    quotes = cds_quotes(scenario, _workers(args))
    cols = [Column("code"), Column("cum_pd", "frac6"), Column("mean_lgd", "frac6"),
            Column("hazard", "frac6"), Column("spread_pct", "pct1")]
    rows = [[q.code, q.cum_pd, None if q.n_defaults == 0 else q.mean_lgd, q.hazard, q.spread]
            for q in quotes]
    prov = _provenance(replace(scenario, bond=replace(scenario.bond, maturity_years=10)), args,
                       maturity=10)
    return emit_report(Report("CDS", cols, rows, prov), args.format)


def cmd_el(args, scenario):
    batch = cohort_batch(scenario, _workers(args))
    els = country_expected_losses(batch)
    cols = [Column("code"), Column("el_pct", "pct1"), Column("se_pct", "pct2")]
    rows = [[code, e.mean, e.std_error] for code, e in els.items()]
    prov = _provenance(scenario, args, maturity=scenario.bond.maturity_years,
                       convention=scenario.bond.loss_convention.value)
    return emit_report(Report("EL", cols, rows, prov), args.format)


def cmd_tranche_sweep(args, scenario):
    schemes = list(WeightScheme) if args.scheme == "all" else [WeightScheme.parse(args.scheme)]
    batch = cohort_batch(scenario, _workers(args))
    curves = [sweep_batch(batch, s) for s in schemes]
    cols = [Column("kappa", "kappa")]
    for s in schemes:
        cols += [Column(f"{s.value}_S", "pct1"), Column(f"{s.value}_J", "pct1")]
    rows = []
    for i, k in enumerate(KAPPAS):
        row = [k]
        for c in curves:
            row += [c.rows[i].el_senior, c.rows[i].el_junior]
        rows.append(row)
    prov = _provenance(scenario, args, maturity=scenario.bond.maturity_years,
                       convention=scenario.bond.loss_convention.value,
                       sync=scenario.factor.sync_mode.value)
    return emit_report(Report("T4", cols, rows, prov), args.format)


def cmd_national(args, scenario):
    country = scenario.country(args.country)
    est = national_tranching(country, args.kappa, scenario, workers=_workers(args))
    cols = [Column("code"), Column("kappa", "kappa"), Column("senior_el_pct", "pct2"),
            Column("se_pct", "pct2")]
    prov = _provenance(scenario, args, maturity=scenario.bond.maturity_years,
                       convention=scenario.bond.loss_convention.value)
    return emit_report(Report("NATIONAL", cols, [[country.code, args.kappa, est.mean, est.std_error]],
                              prov), args.format)


def cmd_deal(args, scenario):
    sheet = structure_deal(args.debt, args.kappa, args.multiple)
    prov = {"tranchelab": __version__}
    if args.format == "markdown":
        return emit_report(deal_report(sheet, prov), "markdown")
    return render_deal(sheet, prov)


def cmd_simulate_panel(args, scenario):
    panel = simulate_panel(scenario.factor, args.years, len(scenario.countries),
                           scenario.master_seed, args.index, scenario.codes)
    prov = _provenance(scenario, args, index=args.index, years=args.years,
                       sync=scenario.factor.sync_mode.value)
    prov.pop("runs")
    return write_panel_csv(panel, [f"{k}={v}" for k, v in {"table": "PANEL", **prov}.items()])


COMMANDS = {
    "sync-stats": cmd_sync_stats,
    "cds": cmd_cds,
    "el": cmd_el,
    "tranche-sweep": cmd_tranche_sweep,
    "national-tranche": cmd_national,
    "deal": cmd_deal,
    "simulate-panel": cmd_simulate_panel,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.runs < 1:
            raise UsageError("--runs must be >= 1")
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    try:
        scenario = load_scenario(args)
        text = COMMANDS[args.command](args, scenario)
    except (TranchelabError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {' '.join(str(exc).split())}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
