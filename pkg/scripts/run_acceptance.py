"""Run the ten acceptance criteria and print one PASS/FAIL line each."""

import sys
from pathlib import Path

TESTS = Path(__file__).resolve().parents[1] / "tests"
sys.path.insert(0, str(TESTS))

from test_acceptance import CRITERIA, run_criterion  # noqa: E402


def main() -> int:
    ok_all = True
    for number, fn, budget in CRITERIA:
        ok, line = run_criterion(number, fn, budget)
        print(line, flush=True)
        ok_all &= ok
    return 0 if ok_all else 1


if __name__ == "__main__":
    sys.exit(main())
