#!/usr/bin/env python3
"""Run the certified inequality suite and write one JSON certificate per task.

Every analytic inequality used by the round-growth bounds is decided by
adaptive bisection with outward-rounded interval arithmetic; a certificate
records the verdict, box count, and rounding mode.

Usage: verify_inequalities.py [--out DIR] [--max-boxes N]
"""

import argparse
import os
import sys
import time

from coopcast.experiments import _atomic_write
from coopcast.prover import inequality_suite, prove


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/certificates")
    ap.add_argument("--max-boxes", type=int, default=2**24)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    all_proved = True
    for task in inequality_suite():
        t0 = time.monotonic()
        result = prove(task, max_boxes=args.max_boxes)
        dt = time.monotonic() - t0
        print(f"{task.name:28s} {result.verdict:9s} "
              f"{result.boxes_processed:8d} boxes  {dt:6.1f}s")
        _atomic_write(os.path.join(args.out, f"certificate_{task.name}.json"),
                      result.certificate_json() + "\n")
        all_proved &= result.verdict == "proved"
    return 0 if all_proved else 1


if __name__ == "__main__":
    sys.exit(main())
