"""Acceptance criteria 1-10.

Each ``criterion_N`` returns ``(passed, detail)``. Under pytest every
criterion is one test, and a one-line PASS/FAIL summary per criterion is
printed at the end of the session. Run this file directly to get the same
lines without pytest.
"""
from __future__ import annotations

import itertools
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from agcontracts.compose import cascade_systems  # noqa: E402
from agcontracts.lp import LinearProgram, Status, solve  # noqa: E402
from agcontracts.model import Contract, build_assumptions  # noqa: E402
from agcontracts.modelfile import load_model  # noqa: E402
from agcontracts.refine import check_refinement  # noqa: E402
from agcontracts.sim import (  # noqa: E402
    LeaderProfileParams,
    audit_guarantees,
    follower_system,
    headway_guarantee,
    leader_profile,
    simulate,
    vehicle_assumptions,
)
from agcontracts.verify import ThetaStatus, compute_theta, verify_contract  # noqa: E402

from instances import (  # noqa: E402
    box_assumptions,
    chain_params,
    input_mirror_contract,
    output_box_contract,
    output_mirror_contract,
    random_system,
    sample_inputs,
    sample_x0,
    unit_gain,
)
from oracles import bounded_lp, vertex_max  # noqa: E402

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str]] = {}


def _case_study():
    return follower_system(0.1, 2.0), Contract(vehicle_assumptions(0.1, 9.8), headway_guarantee(2.0))


def criterion_1():
    sys_, con = _case_study()
    start = time.perf_counter()
    rep = verify_contract(sys_, con)
    elapsed = time.perf_counter() - start
    got = {(t.n, t.l): t.value for t in rep.thetas}
    ok = (
        rep.verified
        and set(got) == {(0, 0), (2, 1)}
        and abs(got[(0, 0)] - 0.0) <= 1e-6
        and abs(got[(2, 1)] + 0.2) <= 1e-6
        and elapsed < 1.0
    )
    return ok, f"theta00={got.get((0, 0))}, theta21={got.get((2, 1))}, verified={rep.verified}, {elapsed:.3f}s"


def criterion_2():
    c1 = load_model("refine_c1").contract()
    c2 = load_model("refine_c2").contract()
    start = time.perf_counter()
    rep = check_refinement(c1, c2)
    elapsed = time.perf_counter() - start
    d, o = rep.psi_d, rep.psi_omega
    ok = (
        d.status is ThetaStatus.VALUE and abs(d.value + 0.03) <= 1e-6
        and o.status is ThetaStatus.VALUE and abs(o.value - 0.0) <= 1e-6
        and rep.refines
        and elapsed < 1.0
    )
    return ok, (f"psi_D={d.value} (rows {[round(v, 12) for v in d.row_values]}), "
                f"psi_Omega={o.value} [{o.status.value}], refines={rep.refines}, {elapsed:.3f}s")


def criterion_3():
    worst, failures = 0.0, []
    for seed in range(25):
        rng = np.random.default_rng(1000 + seed)
        n_d = int(rng.integers(1, 4))
        a, _ = box_assumptions(rng, n_d)
        sys_ = random_system(rng, int(rng.integers(1, 5)), n_d, int(rng.integers(1, 3)),
                             x_box=rng.uniform(0.5, 3.0))
        for label, rep in (("test1", verify_contract(sys_, input_mirror_contract(a, sys_.n_y))),
                           ("test2", verify_contract(unit_gain(n_d), output_mirror_contract(a)))):
            vals = [t.value for t in rep.thetas if t.status is ThetaStatus.VALUE]
            if not rep.verified or len(vals) != len(rep.thetas) or any(abs(v) > 1e-8 for v in vals):
                failures.append((label, seed))
            else:
                worst = max(worst, max(abs(v) for v in vals))
    # inconsistent draws: unconstrained random triples and forced contradictions
    statuses = {s: 0 for s in ThetaStatus}
    crashes, forced_ok = 0, 0
    for seed in range(25):
        rng = np.random.default_rng(2000 + seed)
        n_d = int(rng.integers(1, 3))
        sys_ = random_system(rng, 2, n_d, 1)
        m = int(rng.integers(1, 6))
        a = build_assumptions(rng.standard_normal((m, n_d)), rng.standard_normal((m, n_d)),
                              rng.standard_normal(m))
        forced = build_assumptions(
            np.vstack([a.A1, np.eye(n_d)[:1], -np.eye(n_d)[:1]]),
            np.vstack([a.A0, np.zeros((2, n_d))]),
            np.concatenate([a.a0, [-1.0, -1.0]]),
        )
        try:
            for t in verify_contract(sys_, input_mirror_contract(a, 1)).thetas:
                statuses[t.status] += 1
            rep = verify_contract(sys_, input_mirror_contract(forced, 1))
            forced_ok += all(t.status is ThetaStatus.INFEASIBLE for t in rep.thetas) and not rep.verified
        except Exception:  # any crash fails the criterion
            crashes += 1
    ok = not failures and crashes == 0 and forced_ok == 25
    return ok, (f"50 consistent runs, max |theta|={worst:.2e}, failures={failures}; "
                f"inconsistent: crashes={crashes}, forced infeasible {forced_ok}/25, "
                f"random statuses {{{', '.join(f'{k.value}: {v}' for k, v in statuses.items())}}}")


def criterion_4():
    worst, bad = 0.0, []
    for seed in range(25):
        rng = np.random.default_rng(3000 + seed)
        n_d = int(rng.integers(1, 4))
        a, _ = box_assumptions(rng, n_d)
        sys_ = random_system(rng, int(rng.integers(1, 4)), n_d, 1)
        p0 = rng.uniform(0.01, 1.0, a.n_rows)
        rep = verify_contract(sys_, input_mirror_contract(a, 1, slack=p0))
        target = -p0.min()
        errs = [abs(t.value - target) if t.status is ThetaStatus.VALUE else np.inf for t in rep.thetas]
        worst = max(worst, max(errs))
        if max(errs) > 1e-8 or not rep.verified:
            bad.append(seed)
    return not bad, f"25 slack vectors, max |theta + min p0|={worst:.2e}, failing seeds={bad}"


def criterion_5():
    sys_ = follower_system(0.1, 2.0)
    worst, slowest, bad = np.inf, 0.0, []
    for seed in range(12):
        start = time.perf_counter()
        prof = leader_profile(LeaderProfileParams(seed=seed))
        tr = simulate(sys_, prof.inputs, [0.0, 22.5], dt=0.1)
        elapsed = time.perf_counter() - start
        slack = tr.inputs[:, 0] - tr.outputs[:, 0] - 2.0 * tr.outputs[:, 1]
        worst, slowest = min(worst, slack.min()), max(slowest, elapsed)
        if len(tr) != 301 or slack.min() < -1e-7 or elapsed >= 1.0:
            bad.append(seed)
    return not bad, f"12 seeds x 301 samples, min slack={worst:.3g}, slowest rollout {slowest * 1e3:.2f} ms, bad={bad}"


def criterion_6():
    rng = np.random.default_rng(6)
    compared, worst, mismatches = 0, 0.0, 0
    while compared < 220:
        n = int(rng.integers(1, 7))
        m = int(rng.integers(n + 1, 11))
        c, A, b, _, _ = bounded_lp(rng, n, m)
        ref = vertex_max(c, A, b)
        if ref is None:
            continue
        out = solve(LinearProgram.build(c, A, b))
        err = abs(out.value - ref) if out.status is Status.OPTIMAL else np.inf
        worst = max(worst, err)
        mismatches += err > 1e-8
        compared += 1
    status_bad = 0
    for _ in range(30):
        n = int(rng.integers(1, 6))
        a = rng.standard_normal(n)
        A = np.vstack([a, -a, rng.standard_normal((3, n))])
        b = np.concatenate([[-1.0, -1.0], rng.uniform(0, 1, 3)])
        status_bad += solve(LinearProgram.build(rng.standard_normal(n), A, b)).status is not Status.INFEASIBLE
        A = np.hstack([rng.standard_normal((4, n)), np.zeros((4, 1))])
        c = np.zeros(n + 1)
        c[-1] = 1.0
        status_bad += solve(LinearProgram.build(c, A, rng.uniform(0.5, 1, 4))).status is not Status.UNBOUNDED
    ok = mismatches == 0 and status_bad == 0
    return ok, f"{compared} LPs vs vertex enumeration, max error={worst:.2e}; status mismatches={status_bad}/60"


def criterion_7():
    violations, finite = [], 0
    for seed in range(22):
        rng = np.random.default_rng(7000 + seed)
        n_x = int(rng.integers(1, 4))
        a, _ = box_assumptions(rng, 1)
        sys_ = random_system(rng, n_x, 1, int(rng.integers(1, 3)))
        R = rng.standard_normal((2, 1 + sys_.n_y))
        con = output_box_contract(a, sys_.n_y, rng.uniform(2, 6), (R, rng.uniform(0.5, 3, 2)))
        n = 3
        keys = [compute_theta(sys_, con, None, n, l).sort_key() for l in range(n, -1, -1)]
        if not all(x <= y + 1e-8 for x, y in itertools.pairwise(keys)):
            violations.append(("monotone", seed))
        for l in range(3):
            ref = compute_theta(sys_, con, None, l + 1, l)
            for n2 in (l + 2, l + 3):
                other = compute_theta(sys_, con, None, n2, l)
                same = other.status is ref.status and (
                    ref.status is not ThetaStatus.VALUE or abs(other.value - ref.value) <= 1e-8)
                if not same:
                    violations.append(("stationary", seed, l))
            finite += ref.status is ThetaStatus.VALUE
    return not violations, f"22 instances, {finite} finite stationarity chains, violations={violations}"


def _vehicle_instances(rng):
    dt = float(rng.choice([0.05, 0.1, 0.2]))
    h = rng.uniform(1.0, 3.0)
    a_max = rng.uniform(3.0, 10.0)
    sys_ = follower_system(dt, h, offset=rng.uniform(0.0, 2.0))
    con = Contract(vehicle_assumptions(dt, a_max), headway_guarantee(h))

    def draw(steps):
        acc = rng.uniform(-a_max, a_max, steps)
        hard = rng.random(steps) < 0.3
        acc[hard] = np.sign(acc[hard]) * a_max
        v = rng.uniform(0, 40) + dt * np.concatenate([[0.0], np.cumsum(acc[:-1])])
        p = rng.uniform(-10, 10) + dt * np.concatenate([[0.0], np.cumsum(v[:-1])])
        d = np.column_stack([p, v])
        v1 = rng.uniform(-5, 40)
        x = np.array([p[0] - h * v1 - rng.uniform(0, 5), v1])
        return d, x

    return sys_, con, draw


def _box_instances(rng, kind):
    n_d = int(rng.integers(1, 3))
    a, shape = box_assumptions(rng, n_d)
    if kind == "slack":
        sys_ = random_system(rng, int(rng.integers(1, 4)), n_d, 1)
        con = input_mirror_contract(a, 1, slack=rng.uniform(0.0, 0.5, a.n_rows))
    else:
        sys_ = random_system(rng, int(rng.integers(1, 4)), n_d, 1, x_box=rng.uniform(0.2, 1.0))
        con = output_box_contract(a, 1, rng.uniform(1.0, 12.0))

    def draw(steps):
        return sample_inputs(rng, shape, steps), sample_x0(rng, sys_)

    return sys_, con, draw


def criterion_8():
    verified, skipped, total_violations, rollouts = 0, 0, 0, 0
    for seed in range(45):
        rng = np.random.default_rng(8000 + seed)
        kind = ("vehicle", "slack", "box")[seed % 3]
        sys_, con, draw = _vehicle_instances(rng) if kind == "vehicle" else _box_instances(rng, kind)
        if not verify_contract(sys_, con).verified:
            skipped += 1
            continue
        verified += 1
        for _ in range(100):
            d, x = draw(200)
            tr = simulate(sys_, d, x)
            total_violations += len(audit_guarantees(tr, con.guarantees, tol=1e-7))
            rollouts += 1
    ok = total_violations == 0 and verified >= 20
    return ok, (f"{verified} verified instances ({skipped} not verified, skipped), "
                f"{rollouts} rollouts x 200 steps, violations={total_violations}")


def _nested_contract(T, R, b, c, gb, r):
    a, _ = box_assumptions(None, T.shape[0], T=T, b=b, c=c)
    return output_box_contract(a, 1, gb, (R, r))


def criterion_9():
    reflexive_bad = 0
    for seed in range(25):
        rng = np.random.default_rng(9000 + seed)
        n_d = int(rng.integers(1, 3))
        a, _ = box_assumptions(rng, n_d)
        R = rng.standard_normal((2, n_d + 1))
        con = output_box_contract(a, 1, rng.uniform(1, 4), (R, rng.uniform(0, 2, 2)))
        reflexive_bad += not check_refinement(con, con).refines

    trans_premises, trans_bad = 0, 0
    for seed in range(60):
        rng = np.random.default_rng(9100 + seed)
        T = np.eye(1) * rng.uniform(0.5, 2)
        R = rng.standard_normal((2, 2))
        params = chain_params(rng, broken=rng.random() < 0.25)
        cs = [_nested_contract(T, R, *p) for p in params]
        if check_refinement(cs[0], cs[1]).refines and check_refinement(cs[1], cs[2]).refines:
            trans_premises += 1
            trans_bad += not check_refinement(cs[0], cs[2]).refines

    transport_premises, transport_bad = 0, 0
    for seed in range(60):
        rng = np.random.default_rng(9200 + seed)
        a1, (T, b, c) = box_assumptions(rng, 1)
        shrink = rng.uniform(0.6, 1.1)
        a2, _ = box_assumptions(rng, 1, T=T, b=b * shrink, c=c * shrink)
        sys_ = random_system(rng, 2, 1, 1)
        c1 = input_mirror_contract(a1, 1, slack=rng.uniform(0.01, 0.5, a1.n_rows))
        c2 = input_mirror_contract(a2, 1, slack=rng.uniform(0.01, 0.5, a2.n_rows))
        if verify_contract(sys_, c1).verified and check_refinement(c1, c2).refines:
            transport_premises += 1
            transport_bad += not verify_contract(sys_, c2).verified

    ok = (reflexive_bad == 0 and trans_bad == 0 and transport_bad == 0
          and trans_premises >= 10 and transport_premises >= 10)
    return ok, (f"reflexivity 25 contracts, failures={reflexive_bad}; transitivity {trans_premises} "
                f"premise triples, failures={trans_bad}; transport {transport_premises} premise pairs, "
                f"failures={transport_bad}")


def criterion_10():
    worst, bad = 0.0, 0
    for seed in range(60):
        rng = np.random.default_rng(10_000 + seed)
        n_d, n_mid, n_y = (int(v) for v in rng.integers(1, 4, 3))
        s1 = random_system(rng, int(rng.integers(1, 4)), n_d, n_mid)
        s2 = random_system(rng, int(rng.integers(1, 4)), n_mid, n_y)
        s = cascade_systems(s1, s2)
        d = rng.standard_normal((100, n_d))
        x1, x2 = rng.standard_normal(s1.n_x), rng.standard_normal(s2.n_x)
        y2 = simulate(s2, simulate(s1, d, x1).outputs, x2).outputs
        y = simulate(s, d, np.concatenate([x1, x2])).outputs
        err = np.abs(y - y2).max()
        worst = max(worst, err)
        bad += err > 1e-9
    return bad == 0, f"60 runs x 100 steps, max |y_composed - y_sequential|={worst:.2e}"


CRITERIA = {
    1: ("case-study satisfaction", criterion_1),
    2: ("case-study refinement", criterion_2),
    3: ("random mirror contracts", criterion_3),
    4: ("slackened guarantees", criterion_4),
    5: ("simulation headway", criterion_5),
    6: ("LP oracle equivalence", criterion_6),
    7: ("theta monotonicity and stationarity", criterion_7),
    8: ("soundness against rollouts", criterion_8),
    9: ("refinement algebra", criterion_9),
    10: ("cascade trace semantics", criterion_10),
}


def summary_line(number: int) -> str:
    name = CRITERIA[number][0]
    ok, detail = RESULTS[number]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {name}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = CRITERIA[number][1]()
    RESULTS[number] = (ok, detail)
    print(summary_line(number))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number in sorted(CRITERIA):
        RESULTS[number] = CRITERIA[number][1]()
        print(summary_line(number), flush=True)
        failed += not RESULTS[number][0]
    sys.exit(1 if failed else 0)
