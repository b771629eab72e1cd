"""Command line entry point.

Exit status: 0 success, 1 invalid configuration or sampling, 2 a scenario ran
but one of its agreement checks failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import CONFIG_KEYS, SCENARIOS, ScenarioConfig, load_config, parse_value
from .errors import AfsharSimError, ChainError, ConfigurationError, SamplingError
from .export import export_result, write_summary_csv
from .scenarios import preflight, run_scenario

log = logging.getLogger("afshar_sim")

EXIT_OK, EXIT_INVALID, EXIT_DISAGREE = 0, 1, 2


def _config(args, scenario=None) -> ScenarioConfig:
    cfg = load_config(args.config, scenario) if args.config else ScenarioConfig(scenario=scenario or "focal_fringes")
    if getattr(args, "seed", None) is not None:
        cfg = cfg.replace(seed=args.seed)
    if getattr(args, "no_figures", False):
        cfg = cfg.replace(figures=False)
    return cfg


def _run_one(cfg, scenario, out_dir):
    """Run and export one scenario; returns (exit status, report or None)."""
    try:
        result = run_scenario(cfg, scenario)
    except (ConfigurationError, SamplingError, ChainError) as exc:
        log.error("%s: invalid setup: %s", scenario, exc)
        return EXIT_INVALID, None
    except AfsharSimError as exc:
        log.error("%s: analysis failed: %s", scenario, exc)
        return EXIT_DISAGREE, None
    export_result(result, out_dir, figures=cfg.figures)
    rep = result.report
    for c in rep.checks:
        log.info("%s %-40s %.6g  (%s)", "PASS" if c.passed else "FAIL", c.name, c.value, c.target)
    for note in rep.notes:
        log.info("note: %s", note)
    log.info("wrote %s", out_dir)
    return (EXIT_OK if rep.passed else EXIT_DISAGREE), rep


def cmd_run(args):
    cfg = _config(args, args.scenario)
    out = Path(args.out or cfg.output_dir) / args.scenario
    return _run_one(cfg, args.scenario, out)[0]


def cmd_sweep(args):
    if args.param not in CONFIG_KEYS or args.param == "scenario":
        raise ConfigurationError(f"unknown sweep parameter {args.param!r}")
    base = _config(args, args.scenario)
    root = Path(args.out or base.output_dir) / f"sweep_{args.scenario}_{args.param}"
    rows, status = [], EXIT_OK
    for text in args.values.split(","):
        value = parse_value(args.param, text)
        try:
            cfg = base.replace(**{args.param: value})
        except ConfigurationError as exc:
            log.error("%s=%s: %s", args.param, text.strip(), exc)
            status = max(status, EXIT_INVALID)
            continue
        code, rep = _run_one(cfg, args.scenario, root / f"{args.param}={text.strip()}")
        status = max(status, code)
        if rep is not None:
            for row in rep.summary_rows():
                rows.append({**row, "scenario": f"{row['scenario']}[{args.param}={text.strip()}]"})
    root.mkdir(parents=True, exist_ok=True)
    write_summary_csv(root / "summary.csv", rows)
    return status


def cmd_validate(args):
    cfg = load_config(args.config, args.scenario)
    problems = preflight(cfg)
    for p in problems:
        log.error("%s", p)
    if not problems:
        log.info("%s: configuration valid for %s", args.config, cfg.scenario)
    return EXIT_INVALID if problems else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="afshar-sim", description=__doc__.splitlines()[0])
    p.add_argument("-q", "--quiet", action="store_true", help="only report errors")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and export its results")
    run.add_argument("scenario", choices=SCENARIOS)
    sweep = sub.add_parser("sweep", help="rerun a scenario over a list of values of one config key")
    sweep.add_argument("--param", required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--scenario", choices=SCENARIOS, default="focal_fringes")
    for sp in (run, sweep):
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--out", help="output directory (default: the config's output_dir)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    val = sub.add_parser("validate", help="check a config file without running it")
    val.add_argument("--config", required=True)
    val.add_argument("--scenario", choices=SCENARIOS)

    run.set_defaults(func=cmd_run)
    sweep.set_defaults(func=cmd_sweep)
    val.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        log.error("%s", exc)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
