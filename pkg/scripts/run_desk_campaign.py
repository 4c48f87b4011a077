#!/usr/bin/env python3
"""Run the desk-scale reference campaign and print a one-screen summary.

Writes the usual CSV tables plus manifest into the output directory, then
summarizes per-scheme fairness and beamforming-gain statistics on stdout.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from thzlink import CampaignSpec, run_campaign, write_outputs
from thzlink.campaign import gain_means, min_objective_samples, min_rate_samples

REPO = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(REPO / "configs" / "desk.json"))
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="runs/desk")
    parser.add_argument("--parallelism", type=int, default=1)
    args = parser.parse_args()

    spec = CampaignSpec(
        config_path=args.config,
        trials=args.trials,
        master_seed=args.seed,
        output_dir=args.out,
        parallelism=args.parallelism,
    )
    start = time.perf_counter()
    campaign = run_campaign(spec)
    write_outputs(campaign, args.out)
    elapsed = time.perf_counter() - start

    print(f"campaign: {len(campaign.results)} trials in {elapsed:.1f}s -> {args.out}")
    if campaign.failures:
        print(f"  skipped {len(campaign.failures)} failed trials")
    header = f"{'scheme':<16}{'mean min-rate':>16}{'median min-rate':>18}{'min-objective':>16}{'edge gain':>12}"
    print(header)
    for scheme in spec.schemes:
        rates = min_rate_samples(campaign.results, scheme)
        objective = min_objective_samples(campaign.results, scheme)
        _, normalized = gain_means(campaign.results, scheme)
        edge = min(normalized[0], normalized[-1])
        print(
            f"{scheme:<16}{rates.mean():>16.4e}{np.median(rates):>18.4e}"
            f"{objective.mean():>16.4e}{edge:>12.4f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
