#!/usr/bin/env python3
"""Verify every move kind on a small set of models, one line per (model, move, degree)."""
import argparse
import time
from dataclasses import dataclass, field

from clover.homology import H2Generator, LinkComponent, ManifoldModel, ObrSurface, closed_rational_model
from clover.moves import apply_move_to_model, parse_move, verify_isomorphism
from clover.verification import model_label


@dataclass
class SweepConfig:
    degrees: tuple = (1, 2, 3)
    ring: str = "Z"
    moves: dict = field(default_factory=lambda: {
        "two-component": ["id", "m1:x:y:+1", "m1:x:y:-1", "m2:x:+1", "m2:y:-1", "m3:insert:b0:x=1,y=0"],
        "closed-1": ["m2:x:+1", "m2:x:-1", "m3:insert:b0:x=1"],
        "closed-1-t3": ["m1:x:t:+1", "m2:t:-1", "m3:insert:b0:x=1,t=0"],
    })


def models():
    comps = (LinkComponent("x", (1,), ()), LinkComponent("y", (1,), ()))
    return {
        "two-component": ManifoldModel(1, (), comps, (H2Generator("S", (1, 1)),), (ObrSurface((1, -1), (0, 0)),)),
        "closed-1": closed_rational_model(1),
        "closed-1-t3": closed_rational_model(1, [3]),
    }


def run(cfg: SweepConfig) -> bool:
    ok = True
    for name, model in models().items():
        for text in cfg.moves.get(name, []):
            mv = parse_move(text)
            for d in cfg.degrees:
                t0 = time.perf_counter()
                rep = verify_isomorphism(mv, d, model, ring=cfg.ring)
                ok &= rep.passed
                print(f"{name:14} {text:24} degree={d} {'pass' if rep.passed else 'FAIL'} "
                      f"{rep.checks['invariants'][1]} ({time.perf_counter() - t0:.2f}s)")
            if mv.kind == "M3" and mv.insert:
                tgt = apply_move_to_model(model, mv)
                for d in cfg.degrees:
                    rep = verify_isomorphism(mv.inverse(), d, tgt, ring=cfg.ring)
                    ok &= rep.passed
                    print(f"{name:14} {'(delete ' + mv.component + ')':24} degree={d} "
                          f"{'pass' if rep.passed else 'FAIL'} [{model_label(tgt)}]")
    return ok


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--degree-max", type=int, default=3)
    p.add_argument("--rational", action="store_true")
    a = p.parse_args()
    ok = run(SweepConfig(tuple(range(1, a.degree_max + 1)), "Q" if a.rational else "Z"))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
