"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times three workloads with each backend: the case-study verification
(many small simplex solves), a batch of random dense LPs, and long rollouts.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from agcontracts import _core_py, _kernels, lp
from agcontracts.model import Contract
from agcontracts.sim import follower_system, headway_guarantee, simulate, vehicle_assumptions
from agcontracts.verify import theta_constraints, _guarantee_rows


def case_study_programs():
    sys = follower_system(0.1, 2.0)
    con = Contract(vehicle_assumptions(0.1, 9.8), headway_guarantee(2.0))
    progs = []
    for n, l in [(0, 0), (2, 1), (6, 5)]:
        L, base = theta_constraints(sys, con, sys.x0, n, l)
        progs += [base.with_objective(c) for c in _guarantee_rows(con, L, n)]
    return progs


def random_programs(count=40, n=12, m=30, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        A = rng.standard_normal((m, n))
        b = A @ rng.standard_normal(n) + rng.uniform(0, 1, m)
        out.append(lp.LinearProgram.build(A.T @ rng.uniform(0, 1, m), A, b))
    return out


def rollout_case(steps=20_000, seed=0):
    rng = np.random.default_rng(seed)
    sys = follower_system(0.1, 2.0)
    return sys, rng.standard_normal((steps, 2)), np.array([0.0, 20.0])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"python": _core_py}
    if _kernels.BACKEND == "compiled":
        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; timing the Python backend only")

    case, rand = case_study_programs(), random_programs()
    sys, inputs, x0 = rollout_case()
    workloads = {
        f"case-study theta LPs ({len(case)} solves)": lambda k: [lp.solve(p, kernels=k) for p in case],
        f"random LPs 12x30 ({len(rand)} solves)": lambda k: [lp.solve(p, kernels=k) for p in rand],
        f"rollout {len(inputs)} steps": lambda k: simulate(sys, inputs, x0, kernels=k),
    }
    print(f"{'workload':<36}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for label, fn in workloads.items():
        times = {}
        for name, mod in backends.items():
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:<36}" + "".join(f"{times[n] * 1e3:>11.2f} ms" for n in backends)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
