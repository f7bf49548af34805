#!/usr/bin/env python3
"""Timing comparison between the compiled search core and the pure-Python
fallback on the three kernel entry points.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from gerbelab import cover, cyclic_group, inner_xmod, trivial_group, validate_crossed_module
from gerbelab.cocycle import program_for
from gerbelab.kernels import backends


def instances():
    z1 = trivial_group()
    z3 = cyclic_group(3)
    z4 = cyclic_group(4)
    circ3 = cover(3, [[0, 1], [1, 2], [0, 2]])
    pt2 = cover(1, [[0], [0]])
    pt3 = cover(1, [[0], [0], [0]])
    h_z4 = validate_crossed_module(z1, z4, [0], [[0]] * 4)
    h_z3 = validate_crossed_module(z1, z3, [0], [[0]] * 3)
    return [
        ("1->Z4 on CIRC3", program_for(h_z4, circ3)),
        ("1->Z3 on PT3", program_for(h_z3, pt3)),
        ("inn(Z3) on PT2", program_for(inner_xmod(z3), pt2)),
    ]


def _time(fn, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backs = backends()
    if "compiled" not in backs:
        print("compiled backend unavailable; showing pure-Python timings only")
    names = [n for n in ("python", "compiled") if n in backs]
    header = f"{'instance':<16} {'kernel':<10}"
    for n in names:
        header += f" {n:>12}"
    if len(names) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for label, prog in instances():
        rows = {
            "enumerate": lambda b, p=prog: b.enumerate_tables(p),
        }
        tables = backs[names[0]].enumerate_tables(prog)
        rows["orbit"] = lambda b, p=prog, t=tables: b.orbit_labels(p, t)
        if len(tables) >= 2:
            rows["relating"] = (lambda b, p=prog, t=tables:
                                b.relating_coboundaries(p, t[0], t[-1], None))
        for kernel, fn in rows.items():
            times = {}
            out = {}
            for n in names:
                times[n], out[n] = _time(lambda n=n: fn(backs[n]), args.repeat)
            if len(names) == 2 and out["python"] != out["compiled"]:
                print(f"{label:<16} {kernel:<10} BACKEND MISMATCH")
                return 1
            line = f"{label:<16} {kernel:<10}"
            for n in names:
                line += f" {times[n] * 1000:>10.2f}ms"
            if len(names) == 2 and times["compiled"] > 0:
                line += f" {times['python'] / times['compiled']:>8.1f}x"
            print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
