"""Run the acceptance checks and print one line per criterion.

Usage: python3 scripts/run_acceptance.py [--seed S] [--only 3 9 12]
"""

import argparse
import sys

from rhsplit.acceptance import AcceptanceConfig, run_checks


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, nargs="*", default=None)
    args = p.parse_args()
    results = run_checks(AcceptanceConfig(seed=args.seed), only=args.only)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
