"""Run every bundled scenario, writing tables under one output directory."""

import argparse
import sys
from pathlib import Path

from chiralbrst.cli import bundled_scenarios, main as cli_main


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("runs"))
    args = p.parse_args()
    worst = 0
    for name in bundled_scenarios():
        print(f"== {name}", flush=True)
        worst = max(worst, cli_main(["run", name, "--out", str(args.out / name)]))
    return worst


if __name__ == "__main__":
    sys.exit(main())
