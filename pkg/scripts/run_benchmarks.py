#!/usr/bin/env python3
"""Time every solver over a corpus directory and assert welfare agreement.

Thin wrapper over the library so numbers land in one table; the CLI's
``sdgsolve bench`` offers the same checks with exit-code semantics.
"""

import argparse
import sys
import time
from pathlib import Path

from sdgsolve import ScoringVector, brute_force_solve, solve_fpt, solve_vc
from sdgsolve.formats import read_gr
from sdgsolve.solver_twdp import solve_tw_ir, solve_tw_ns, solve_tw_welfare
from sdgsolve.treedecomp import nice_decomposition


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default="corpus")
    parser.add_argument("--scores", default="1,-3")
    parser.add_argument("--tail", choices=["closed", "open"], default="closed")
    parser.add_argument("--modes", default="welfare,ir,ns")
    args = parser.parse_args()
    s = ScoringVector.parse(args.scores, args.tail)
    modes = args.modes.split(",")
    paths = sorted(Path(args.corpus).glob("*.gr"))
    if not paths:
        print(f"no .gr files under {args.corpus}", file=sys.stderr)
        return 1
    tw_fns = {"welfare": solve_tw_welfare, "ir": solve_tw_ir, "ns": solve_tw_ns}
    total = {"brute": 0.0, "twdp": 0.0, "fptdp": 0.0, "vc": 0.0}
    print(f"{'instance':24s} {'mode':7s} {'welfare':>7s}  brute    twdp   fptdp      vc")
    for path in paths:
        G = read_gr(path.read_text())
        ntd = nice_decomposition(G) if s.is_closed else None
        for mode in modes:
            times = {}
            welfare = {}
            t = time.perf_counter()
            r = brute_force_solve(s, G, mode)
            times["brute"] = time.perf_counter() - t
            welfare["brute"] = None if r is None else r.welfare
            if s.is_closed:
                t = time.perf_counter()
                r = tw_fns[mode](s, G, ntd)
                times["twdp"] = time.perf_counter() - t
                welfare["twdp"] = None if r is None else r.welfare
            t = time.perf_counter()
            r = solve_fpt(s, G, sz=G.n, mode=mode)
            times["fptdp"] = time.perf_counter() - t
            welfare["fptdp"] = None if r is None else r.welfare
            t = time.perf_counter()
            r = solve_vc(s, G, mode)
            times["vc"] = time.perf_counter() - t
            welfare["vc"] = None if r is None else r.welfare
            if len(set(welfare.values())) != 1:
                print(f"DISAGREEMENT on {path.name} {mode}: {welfare}", file=sys.stderr)
                return 3
            for k, v in times.items():
                total[k] += v
            cells = "  ".join(
                f"{times.get(k, float('nan')) * 1000:6.1f}" for k in ("brute", "twdp", "fptdp", "vc")
            )
            print(f"{path.name:24s} {mode:7s} {str(welfare['brute']):>7s}  {cells}")
    print("totals (s): " + "  ".join(f"{k}={v:.2f}" for k, v in total.items()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
