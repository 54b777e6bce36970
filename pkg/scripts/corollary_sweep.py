#!/usr/bin/env python3
"""Run the structural checks on several models and print every non-passing instance."""
import argparse
from dataclasses import dataclass, field

from clover.homology import closed_rational_model
from clover.verification import run_suite


@dataclass
class CorollaryConfig:
    models: list = field(default_factory=lambda: [(0, ()), (1, ()), (2, ()), (0, (3,)), (1, (3,)), (3, ())])
    degree_max: int = 3
    ring: str = "Q"
    verbose: bool = False


def run(cfg: CorollaryConfig) -> bool:
    ok = True
    for b1, tors in cfg.models:
        for rep in run_suite(closed_rational_model(b1, tors), cfg.degree_max, ring=cfg.ring):
            ok &= rep.status != "fail"
            for line in rep.lines(verbose=cfg.verbose):
                print(line)
        print()
    return ok


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--degree-max", type=int, default=3)
    p.add_argument("--integral", action="store_true")
    p.add_argument("--verbose", action="store_true")
    a = p.parse_args()
    raise SystemExit(0 if run(CorollaryConfig(degree_max=a.degree_max, ring="Z" if a.integral else "Q",
                                              verbose=a.verbose)) else 1)


if __name__ == "__main__":
    main()
