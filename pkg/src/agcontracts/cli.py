"""Command-line entry point.

Exit codes: 0 when the checked property holds, 1 when it does not, 2 on any
operational error (bad file, dimension mismatch, solver failure).
"""
from __future__ import annotations

import csv
import functools
import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from .compose import EliminationBlowup, cascade_systems, check_extendable
from .linalg import DimensionError
from .lp import SolverError
from .modelfile import ModelDoc, ModelError, bundled_names, dump_model, load_model
from .refine import check_refinement
from .sim import KMH, LeaderProfileParams, audit_assumptions, leader_profile, simulate
from .verify import TOLERANCE, ThetaStatus, verify_contract

CSV_COLUMNS = ["k", "t_s", "p2_m", "v2_mps", "a2_mps2", "p1_m", "v1_mps", "a1_mps2",
               "gap_m", "headway_s", "guarantee_slack"]
OPERATIONAL = (ModelError, DimensionError, SolverError, EliminationBlowup, OSError, ValueError)


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    s = f"{x:.10g}"
    return "0" if s == "-0" else s


def _num(x) -> str:
    # shortest round-trip form; adding 0.0 folds -0.0 into 0.0
    return repr(float(x) + 0.0)


def _status_text(status: ThetaStatus, value) -> str:
    if status is ThetaStatus.INFEASIBLE:
        return "infeasible"
    if status is ThetaStatus.PLUS_INFINITY:
        return "+inf (unbounded)"
    return _fmt(value)


def operational(fn):
    """Map expected failures to exit code 2 with a one-line message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OPERATIONAL as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Verify assume/guarantee contracts for discrete-time affine LTI systems.

    MODEL arguments accept a JSON file path or the name of a bundled example
    (see the ``examples`` command).
    """


@main.command("examples")
def examples_cmd():
    """List the bundled model files."""
    for name in bundled_names():
        click.echo(name)


@main.command("verify")
@click.argument("model")
@click.option("--tolerance", type=float, default=TOLERANCE, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@operational
def verify_cmd(model, tolerance, as_json):
    """Check that the system in MODEL satisfies its contract."""
    doc = load_model(model)
    report = verify_contract(doc.require_system(), doc.contract(), tolerance=tolerance)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        click.echo(f"observability index: {report.obs_index}")
        for t in report.thetas:
            click.echo(f"theta[{t.n},{t.l}] = {_status_text(t.status, t.value)}")
        for line in report.diagnostics:
            click.echo(f"note: {line}")
        verdict = "verified" if report.verified else "NOT verified"
        click.echo(f"{verdict} (tolerance {tolerance:g})")
    sys.exit(0 if report.verified else 1)


@main.command("refine")
@click.argument("c1")
@click.argument("c2")
@click.option("--tolerance", type=float, default=TOLERANCE, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@operational
def refine_cmd(c1, c2, tolerance, as_json):
    """Check that the contract in C1 refines the contract in C2."""
    report = check_refinement(load_model(c1).contract(), load_model(c2).contract(), tolerance)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for label, psi in (("psi_D", report.psi_d), ("psi_Omega", report.psi_omega)):
            click.echo(f"{label} = {_status_text(psi.status, psi.value)}")
            if psi.row_values:
                click.echo("  rows: " + ", ".join(_fmt(v) for v in psi.row_values))
        for line in report.diagnostics:
            click.echo(f"note: {line}")
        click.echo("note: extendability of C2's assumptions is assumed, not checked "
                   "(run check-extendable)")
        click.echo(f"{'refines' if report.refines else 'does NOT refine'} (tolerance {tolerance:g})")
    sys.exit(0 if report.refines else 1)


@main.command("check-extendable")
@click.argument("model")
@click.option("--which", type=click.Choice(["assumptions", "guarantees"]), default="assumptions",
              show_default=True)
@operational
def check_extendable_cmd(model, which):
    """Check that the chosen inequality triple in MODEL is extendable."""
    doc = load_model(model)
    if which == "assumptions":
        if doc.assumptions is None:
            raise ModelError(f"{doc.source}: missing 'assumptions' section")
        a = doc.assumptions
        result = check_extendable(a.A1, a.A0, a.a0)
    else:
        if doc.guarantees is None:
            raise ModelError(f"{doc.source}: missing 'guarantees' section")
        g = doc.guarantees
        result = check_extendable(g.G1, g.G0, g.g0)
    if result.vacuous:
        click.echo("note: the pair set is empty; extendable only vacuously")
    click.echo(f"worst continuation residual: {_fmt(result.worst)}")
    click.echo("extendable" if result else "NOT extendable")
    sys.exit(0 if result else 1)


@main.command("cascade")
@click.argument("s1")
@click.argument("s2")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@operational
def cascade_cmd(s1, s2, out_path):
    """Write the series connection S1 -> S2 as a new model file.

    The result keeps S1's assumptions and takes guarantees from S2 when they
    fit the composed signals, otherwise from S1.
    """
    d1, d2 = load_model(s1), load_model(s2)
    composed = cascade_systems(d1.require_system(), d2.require_system())
    doc = ModelDoc(system=composed, initial_set=composed.x0, assumptions=d1.assumptions,
                   description=f"cascade of {d1.source} and {d2.source}")
    width = composed.n_d + composed.n_y
    for g in (d2.guarantees, d1.guarantees):
        if g is not None and g.width == width:
            doc.guarantees = g
            break
    Path(out_path).write_text(dump_model(doc), encoding="utf-8")
    click.echo(f"wrote {out_path}: n_x={composed.n_x}, n_d={composed.n_d}, n_y={composed.n_y}, "
               f"obs_index={composed.obs_index}")


def _leader_params(sim: dict, seed) -> tuple[LeaderProfileParams, float]:
    leader = sim.get("leader", {})
    dt = float(sim.get("dt", 0.1))
    phases = [float(t) for t in leader.get("phases_s", (10.0, 10.0, 10.0))]
    horizon = float(sim.get("horizon_s", sum(phases)))
    # fit the phases to the horizon: truncate from the front, pad the last
    fitted, left = [], horizon
    for t in phases[:2]:
        fitted.append(min(t, left))
        left -= fitted[-1]
    fitted.append(max(left, 0.0))
    params = LeaderProfileParams(
        dt=dt,
        phases_s=tuple(fitted),
        v_init=float(leader.get("v_init_kmh", 110.0)) * KMH,
        v_low=float(leader.get("v_low_kmh", 80.0)) * KMH,
        v_high=float(leader.get("v_high_kmh", 110.0)) * KMH,
        a_mag=float(leader.get("a_mag_mps2", 9.8)),
        p_init=float(leader.get("p_init_m", 45.0)),
        seed=int(sim.get("seed", LeaderProfileParams.seed) if seed is None else seed),
    )
    return params, horizon


def simulation_rows(doc: ModelDoc, seed=None) -> list[list]:
    """CSV rows for the two-vehicle rollout described by *doc*."""
    system = doc.require_system()
    if doc.sim is None:
        raise ModelError(f"{doc.source}: missing 'sim' section")
    if system.n_d != 2 or system.n_y != 2:
        raise ModelError(f"{doc.source}: simulate expects d = [p2, v2] and y = [p1, v1]")
    if "x_init" not in doc.sim:
        raise ModelError(f"{doc.source}: 'sim.x_init' is required")
    params, horizon = _leader_params(doc.sim, seed)
    if horizon <= 0:
        return []
    profile = leader_profile(params)
    if doc.assumptions is not None:
        bad = audit_assumptions(profile.inputs, doc.assumptions)
        if bad:
            click.echo(f"warning: leader profile violates the assumptions at {len(bad)} step(s)", err=True)
    trace = simulate(system, profile.inputs, doc.sim["x_init"], dt=params.dt)
    dt = params.dt
    states = np.vstack([trace.states, trace.final_state])
    a1 = (states[1:, 1] - states[:-1, 1]) / dt
    dy = trace.stacked
    slack = np.full(len(trace), np.nan)
    g = doc.guarantees
    if g is not None and g.n_rows:
        res = dy[1:] @ g.G1.T + dy[:-1] @ g.G0.T - g.g0
        slack[:-1] = -res.max(axis=1)
        if not np.any(g.G1):
            slack[-1] = -(dy[-1] @ g.G0.T - g.g0).max()
    rows = []
    for k in range(len(trace)):
        p2, v2 = trace.inputs[k]
        p1, v1 = trace.outputs[k]
        gap = p2 - p1
        rows.append([
            k, _num(round(k * dt, 10)), _num(p2), _num(v2), _num(profile.a[k]),
            _num(p1), _num(v1), _num(a1[k]), _num(gap),
            _num(gap / v1) if v1 > 0 else "",
            "" if np.isnan(slack[k]) else _num(slack[k]),
        ])
    return rows


@main.command("simulate")
@click.argument("model")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="CSV destination (default: stdout).")
@click.option("--seed", type=int, default=None, help="Override sim.seed.")
@operational
def simulate_cmd(model, out_path, seed):
    """Roll out the two-vehicle scenario in MODEL and emit a CSV trace."""
    doc = load_model(model)
    rows = simulation_rows(doc, seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    if out_path is None:
        click.echo(buf.getvalue(), nl=False)
    else:
        Path(out_path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    slacks = [float(r[-1]) for r in rows if r[-1] != ""]
    violations = sum(s < -1e-7 for s in slacks)
    summary = (f"rows: {len(rows)}; min guarantee slack: {_fmt(min(slacks)) if slacks else 'n/a'}; "
               f"violations: {violations}")
    click.echo(summary, err=out_path is None)
    sys.exit(1 if violations else 0)


if __name__ == "__main__":
    main()
