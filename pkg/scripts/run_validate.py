"""Run all acceptance checks and print one PASS/FAIL line per criterion.

    python3 scripts/run_validate.py
"""
import sys

from gascasimir.acceptance import run_all


def main():
    results = run_all()
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d} {r.name}: {r.detail}")
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return 0 if n_ok == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
