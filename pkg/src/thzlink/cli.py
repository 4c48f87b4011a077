"""Command-line entry point.

``thzlink simulate`` runs a Monte Carlo campaign from a JSON config and writes
CSV tables plus a manifest.  Exit codes: 0 ok, 2 config error, 3 campaign
aborted (too many failed trials).
"""

from __future__ import annotations

import argparse
import sys

from .analog import SolverOptions
from .campaign import SCHEMES, CampaignAborted, CampaignSpec, run_campaign, write_outputs
from .config import ConfigError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thzlink")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a Monte Carlo link-level campaign")
    sim.add_argument("--config", required=True, help="JSON system config file")
    sim.add_argument("--trials", type=int, default=200, help="number of Monte Carlo trials")
    sim.add_argument("--seed", type=int, default=0, help="master seed (64-bit unsigned)")
    sim.add_argument(
        "--schemes",
        default=",".join(SCHEMES),
        help=f"comma-separated subset of {','.join(SCHEMES)}",
    )
    sim.add_argument("--out", required=True, help="output directory for CSVs and manifest")
    sim.add_argument("--parallelism", type=int, default=1, help="worker process count")
    sim.add_argument(
        "--unquantized",
        action="store_true",
        help="skip the delay grid: keep continuous delay values",
    )
    sim.add_argument(
        "--literal-step7",
        action="store_true",
        help="phase update uses the previous iterate's delay (stale ordering)",
    )
    sim.add_argument(
        "--dump-channels", action="store_true", help="write per-trial channel CSVs"
    )
    sim.add_argument(
        "--trace-solver", action="store_true", help="write per-trial solver trace CSVs"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = CampaignSpec(
        config_path=args.config,
        trials=args.trials,
        master_seed=args.seed,
        schemes=tuple(s for s in args.schemes.split(",") if s),
        output_dir=args.out,
        parallelism=args.parallelism,
        solver=SolverOptions(
            quantize=not args.unquantized, jacobi_phase_update=args.literal_step7
        ),
        dump_channels=args.dump_channels,
        trace_solver=args.trace_solver,
    )
    try:
        campaign = run_campaign(spec)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CampaignAborted as exc:
        print(f"campaign aborted: {exc}", file=sys.stderr)
        return 3
    write_outputs(campaign, spec.output_dir)
    done = len(campaign.results)
    print(
        f"wrote {spec.output_dir}: {done} trials x {len(spec.schemes)} schemes"
        + (f" ({len(campaign.failures)} failed trials skipped)" if campaign.failures else "")
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
