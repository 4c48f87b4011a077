#!/usr/bin/env python3
"""Regenerate the golden CSV fixtures used by the figure-renderer tests.

Runs a small, fully seeded desk-scale campaign through the public CLI and
copies the outputs into frontend/tests/fixtures/golden/.  The scenario widens
the near/far distance split relative to the desk default so the scheme
ordering in the min-rate CDF is visible in the fixture.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
GOLDEN = REPO / "frontend" / "tests" / "fixtures" / "golden"
TRIALS = 200
SEED = 424242
OUTPUTS = (
    "allocation.csv",
    "rates.csv",
    "gain.csv",
    "cdf_minrate.csv",
    "cdf_minobj.csv",
    "manifest.json",
)


def main() -> int:
    config = json.loads((REPO / "configs" / "desk.json").read_text(encoding="utf-8"))
    config["user_distances_m"] = [10.0, 30.0]
    with tempfile.TemporaryDirectory() as tmp:
        config_path = Path(tmp) / "golden_config.json"
        config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
        out_dir = Path(tmp) / "out"
        subprocess.run(
            [
                sys.executable,
                "-m",
                "thzlink",
                "simulate",
                "--config",
                str(config_path),
                "--trials",
                str(TRIALS),
                "--seed",
                str(SEED),
                "--out",
                str(out_dir),
            ],
            check=True,
        )
        GOLDEN.mkdir(parents=True, exist_ok=True)
        for name in OUTPUTS:
            shutil.copy2(out_dir / name, GOLDEN / name)
        shutil.copy2(config_path, GOLDEN / "golden_config.json")
    print(f"golden fixtures written to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
