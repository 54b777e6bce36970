#!/usr/bin/env python3
"""Rank tables of B, A, Ao and A(phi) for a list of closed models.

    python3 scripts/rank_tables.py --degree-max 4 --models 0 1 2 0:3 1:3 --integral
"""
import argparse
from dataclasses import dataclass, field

from clover.cli import rank_table
from clover.homology import closed_rational_model


@dataclass
class RankConfig:
    models: list = field(default_factory=lambda: ["0", "1", "2", "0:3", "1:3"])
    degree_max: int = 3
    ring: str = "Q"
    legs: list | None = None


def parse_closed(spec):
    b1, _, tors = spec.partition(":")
    return closed_rational_model(int(b1), [int(t) for t in tors.split(",") if t])


def run(cfg: RankConfig):
    for spec in cfg.models:
        table = rank_table(parse_closed(spec), cfg.degree_max, cfg.ring, legs=cfg.legs)
        print("\n".join(table.lines()))
        print()


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--models", nargs="+", default=RankConfig().models, help="B1[:T1,T2..] specs")
    p.add_argument("--degree-max", type=int, default=RankConfig.degree_max)
    p.add_argument("--integral", action="store_true")
    p.add_argument("--legs", type=int, nargs="*")
    a = p.parse_args()
    run(RankConfig(a.models, a.degree_max, "Z" if a.integral else "Q", a.legs))


if __name__ == "__main__":
    main()
