"""JSON model documents.

A document may carry any of the sections ``system``, ``initial_set``,
``assumptions``, ``guarantees`` and ``sim``; which ones are required depends
on the command. Matrices are nested arrays of numbers, vectors flat arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .linalg import DimensionError
from .model import (
    Assumptions,
    Contract,
    Guarantees,
    InitialSet,
    System,
    build_assumptions,
    build_guarantees,
    build_system,
    build_x0,
)

SECTIONS = {
    "system": ("A", "B", "C", "D", "w", "v"),
    "initial_set": ("Fx", "Fd", "f"),
    "assumptions": ("A1", "A0", "a0"),
    "guarantees": ("G1", "G0", "g0"),
}
OPTIONAL = {"w", "v"}


class ModelError(ValueError):
    """Malformed or inconsistent model document."""


@dataclass
class ModelDoc:
    system: System | None = None
    initial_set: InitialSet | None = None
    assumptions: Assumptions | None = None
    guarantees: Guarantees | None = None
    sim: dict | None = None
    description: str | None = None
    source: str = "<memory>"
    extra: dict = field(default_factory=dict)

    def contract(self) -> Contract:
        if self.assumptions is None or self.guarantees is None:
            raise ModelError(f"{self.source}: needs both 'assumptions' and 'guarantees' sections")
        try:
            return Contract(self.assumptions, self.guarantees)
        except DimensionError as exc:
            raise ModelError(f"{self.source}: {exc}") from exc

    def require_system(self) -> System:
        if self.system is None:
            raise ModelError(f"{self.source}: missing 'system' section")
        return self.system


def _section(data: dict, name: str, source: str) -> dict | None:
    sec = data.get(name)
    if sec is None:
        return None
    if not isinstance(sec, dict):
        raise ModelError(f"{source}: '{name}' must be an object")
    unknown = set(sec) - set(SECTIONS[name])
    if unknown:
        raise ModelError(f"{source}: unknown field(s) {sorted(unknown)} in '{name}'")
    missing = [k for k in SECTIONS[name] if k not in sec and k not in OPTIONAL]
    if missing:
        raise ModelError(f"{source}: '{name}' is missing field(s) {missing}")
    for key, val in sec.items():
        if not isinstance(val, list):
            raise ModelError(f"{source}: '{name}.{key}' must be an array")
    return sec


def parse_model(text: str, source: str = "<memory>") -> ModelDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ModelError(f"{source}: top level must be an object")
    unknown = set(data) - set(SECTIONS) - {"sim", "description"}
    if unknown:
        raise ModelError(f"{source}: unknown section(s) {sorted(unknown)}")

    doc = ModelDoc(source=source, description=data.get("description"), sim=data.get("sim"))
    try:
        sys_sec = _section(data, "system", source)
        x0_sec = _section(data, "initial_set", source)
        ass_sec = _section(data, "assumptions", source)
        gua_sec = _section(data, "guarantees", source)
        n_x = n_d = n_y = None
        if sys_sec is not None:
            A = np.asarray(sys_sec["A"], dtype=float)
            n_x = A.shape[0] if A.ndim == 2 else None
            B = np.asarray(sys_sec["B"], dtype=float)
            n_d = B.shape[1] if B.ndim == 2 else None
        if x0_sec is not None:
            doc.initial_set = build_x0(x0_sec["Fx"], x0_sec["Fd"], x0_sec["f"], n_x, n_d)
        if sys_sec is not None:
            doc.system = build_system(
                sys_sec["A"], sys_sec["B"], sys_sec["C"], sys_sec["D"],
                sys_sec.get("w"), sys_sec.get("v"), doc.initial_set,
            )
            n_d, n_y = doc.system.n_d, doc.system.n_y
        if ass_sec is not None:
            doc.assumptions = build_assumptions(ass_sec["A1"], ass_sec["A0"], ass_sec["a0"], n_d)
            n_d = doc.assumptions.n_d
        if gua_sec is not None:
            width = n_d + n_y if n_d is not None and n_y is not None else None
            if width is None and len(gua_sec["G1"]) == 0:
                width = n_d
            doc.guarantees = build_guarantees(gua_sec["G1"], gua_sec["G0"], gua_sec["g0"], width)
    except (DimensionError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"{source}: {exc}") from exc
    if doc.sim is not None and not isinstance(doc.sim, dict):
        raise ModelError(f"{source}: 'sim' must be an object")
    return doc


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("agcontracts") / "examples" / f"{name}.json"))


def bundled_names() -> list[str]:
    folder = Path(str(resources.files("agcontracts") / "examples"))
    return sorted(p.stem for p in folder.glob("*.json"))


def resolve(path_or_name: str | Path) -> Path:
    """A filesystem path, or the name of a bundled example."""
    path = Path(path_or_name)
    if path.exists():
        return path
    if path.suffix == "" and bundled_path(str(path_or_name)).exists():
        return bundled_path(str(path_or_name))
    raise ModelError(f"{path_or_name}: no such file or bundled example")


def load_model(path_or_name: str | Path) -> ModelDoc:
    path = resolve(path_or_name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"{path}: {exc}") from exc
    return parse_model(text, str(path))


def _mat(a: np.ndarray) -> list:
    return [[float(x) for x in row] for row in a]


def _vec(a: np.ndarray) -> list:
    return [float(x) for x in a]


def to_dict(doc: ModelDoc) -> dict:
    out: dict = {}
    if doc.description is not None:
        out["description"] = doc.description
    if doc.system is not None:
        s = doc.system
        out["system"] = {"A": _mat(s.A), "B": _mat(s.B), "C": _mat(s.C), "D": _mat(s.D),
                         "w": _vec(s.w), "v": _vec(s.v)}
    x0 = doc.initial_set if doc.initial_set is not None else (doc.system.x0 if doc.system else None)
    if x0 is not None and x0.n_rows:
        out["initial_set"] = {"Fx": _mat(x0.Fx), "Fd": _mat(x0.Fd), "f": _vec(x0.f)}
    if doc.assumptions is not None:
        a = doc.assumptions
        out["assumptions"] = {"A1": _mat(a.A1), "A0": _mat(a.A0), "a0": _vec(a.a0)}
    if doc.guarantees is not None:
        g = doc.guarantees
        out["guarantees"] = {"G1": _mat(g.G1), "G0": _mat(g.G0), "g0": _vec(g.g0)}
    if doc.sim is not None:
        out["sim"] = doc.sim
    return out


def dump_model(doc: ModelDoc) -> str:
    return json.dumps(to_dict(doc), indent=2) + "\n"
