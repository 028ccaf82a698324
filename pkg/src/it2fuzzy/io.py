"""JSON system definitions and CSV datasets/surfaces.

A system definition looks like::

    {
      "version": 1,
      "kind": "it2",
      "inputs": [{"name": "edot", "domain": [-1, 1]}, ...],
      "sets": [{"name": "N_edot", "family": "gaussian_uncertain_std",
                "params": {"m": -1, "sigma1": 0.5, "sigma2": 0.7}}, ...],
      "rules": [{"if": ["N_edot", "N_e"], "then": {"type": "constant", "c0": -1}}, ...],
      "t_norm": "product",
      "reducer": {"name": "eiasc_cos"}
    }
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .rulebase import (CrispConstant, CrispInterval, FuzzySystem, InputVariable,
                       IntervalLinear, Linear, Reducer, Rule, validate_system)
from .sets import FAMILIES, make_set

FORMAT_VERSION = 1
BUNDLED = ("demo_t1.json", "demo_it2.json")


class DefinitionError(ValueError):
    """A system definition could not be parsed or failed validation."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


def _num(value, path, errors):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{path}: expected a number, got {value!r}")
        return math.nan
    return float(value)


def _coeffs(value, path, errors):
    if not isinstance(value, list) or not value:
        errors.append(f"{path}: expected a non-empty list of numbers")
        return ()
    return tuple(_num(v, f"{path}[{j}]", errors) for j, v in enumerate(value))


def _consequent(doc, path, errors):
    if not isinstance(doc, dict):
        errors.append(f"{path}: expected an object")
        return None
    kind = doc.get("type")
    try:
        if kind == "constant":
            return CrispConstant(_num(doc.get("c0"), f"{path}.c0", errors))
        if kind == "interval":
            return CrispInterval(_num(doc.get("c0_lower"), f"{path}.c0_lower", errors),
                                 _num(doc.get("c0_upper"), f"{path}.c0_upper", errors))
        if kind == "linear":
            return Linear(_coeffs(doc.get("coeffs"), f"{path}.coeffs", errors))
        if kind == "interval_linear":
            return IntervalLinear(_coeffs(doc.get("lower"), f"{path}.lower", errors),
                                  _coeffs(doc.get("upper"), f"{path}.upper", errors))
    except ValueError as exc:
        errors.append(f"{path}: {exc}")
        return None
    errors.append(f"{path}.type: unknown consequent type {kind!r}")
    return None


def _reducer(doc, errors):
    if isinstance(doc, str):
        doc = {"name": doc}
    if not isinstance(doc, dict) or "name" not in doc:
        errors.append("reducer: expected a name or an object with 'name'")
        return Reducer()
    return Reducer(doc["name"],
                   _num(doc.get("alpha", 0.5), "reducer.alpha", errors),
                   _num(doc.get("beta", 0.5), "reducer.beta", errors))


def system_from_dict(doc) -> FuzzySystem:
    errors = []
    if not isinstance(doc, dict):
        raise DefinitionError(["<root>: expected a JSON object"])
    for key in ("version", "kind", "inputs", "sets", "rules", "t_norm", "reducer"):
        if key not in doc:
            errors.append(f"<root>: missing key {key!r}")
    if errors:
        raise DefinitionError(errors)
    if doc["version"] != FORMAT_VERSION:
        errors.append(f"version: unsupported version {doc['version']!r}")

    inputs = []
    for j, item in enumerate(doc["inputs"] or []):
        path = f"inputs[{j}]"
        dom = item.get("domain") if isinstance(item, dict) else None
        if not isinstance(dom, list) or len(dom) != 2:
            errors.append(f"{path}.domain: expected [lo, hi]")
            continue
        inputs.append(InputVariable(str(item.get("name", f"x{j + 1}")),
                                    _num(dom[0], f"{path}.domain[0]", errors),
                                    _num(dom[1], f"{path}.domain[1]", errors)))

    sets = {}
    for j, item in enumerate(doc["sets"] or []):
        path = f"sets[{j}]"
        if not isinstance(item, dict):
            errors.append(f"{path}: expected an object")
            continue
        name, family = item.get("name"), item.get("family")
        if not isinstance(name, str) or not name:
            errors.append(f"{path}.name: expected a non-empty string")
            continue
        if name in sets:
            errors.append(f"{path}.name: duplicate set name {name!r}")
            continue
        if family not in FAMILIES:
            errors.append(f"{path}.family: unknown family tag {family!r}")
            continue
        params = item.get("params")
        if not isinstance(params, dict):
            errors.append(f"{path}.params: expected an object")
            continue
        params = {k: _num(v, f"{path}.params.{k}", errors) for k, v in params.items()}
        try:
            sets[name] = make_set(family, params, name=name)
        except (TypeError, ValueError) as exc:
            errors.append(f"{path} ({name}): {exc}")

    rules = []
    for j, item in enumerate(doc["rules"] or []):
        path = f"rules[{j}]"
        if not isinstance(item, dict) or not isinstance(item.get("if"), list):
            errors.append(f"{path}: expected an object with an 'if' list")
            continue
        ante = []
        for k, ref in enumerate(item["if"]):
            if ref not in sets:
                errors.append(f"{path}.if[{k}]: unresolved set reference {ref!r}")
            else:
                ante.append(sets[ref])
        cons = _consequent(item.get("then"), f"{path}.then", errors)
        if cons is not None and len(ante) == len(item["if"]):
            rules.append(Rule(tuple(ante), cons))

    reducer = _reducer(doc["reducer"], errors)
    if errors:
        raise DefinitionError(errors)
    system = FuzzySystem(tuple(inputs), tuple(rules), kind=doc["kind"],
                         t_norm=doc["t_norm"], reducer=reducer)
    report = validate_system(system)
    if not report.ok:
        raise DefinitionError([f"validation: {v}" for v in report.violations])
    return system


def parse_system_definition(text: str) -> FuzzySystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionError([f"line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    return system_from_dict(doc)


def _consequent_dict(c):
    if isinstance(c, CrispConstant):
        return {"type": "constant", "c0": c.c0}
    if isinstance(c, CrispInterval):
        return {"type": "interval", "c0_lower": c.c0_lower, "c0_upper": c.c0_upper}
    if isinstance(c, Linear):
        return {"type": "linear", "coeffs": list(c.coeffs)}
    return {"type": "interval_linear", "lower": list(c.lower), "upper": list(c.upper)}


def system_to_dict(system: FuzzySystem) -> dict:
    names = {}
    used = set()
    sets = []
    for k in range(system.n_inputs):
        for fs in system.input_sets(k):
            if id(fs) in names:
                continue
            name = fs.name or f"{system.inputs[k].name}_{len(sets) + 1}"
            if name in used:
                raise ValueError(f"two different sets are named {name!r}")
            used.add(name)
            names[id(fs)] = name
            sets.append({"name": name, "family": fs.family, "params": fs.params()})
    red = {"name": system.reducer.name}
    if red["name"] == "bmm":
        red.update(alpha=system.reducer.alpha, beta=system.reducer.beta)
    return {
        "version": FORMAT_VERSION,
        "kind": system.kind,
        "inputs": [{"name": v.name, "domain": [v.lo, v.hi]} for v in system.inputs],
        "sets": sets,
        "rules": [{"if": [names[id(fs)] for fs in r.antecedents],
                   "then": _consequent_dict(r.consequent)} for r in system.rules],
        "t_norm": system.t_norm,
        "reducer": red,
    }


def serialize_system(system: FuzzySystem) -> str:
    return json.dumps(system_to_dict(system), indent=2) + "\n"


def load_system(path) -> FuzzySystem:
    """Load a definition file; bare bundled names such as ``demo_it2.json`` also work."""
    p = Path(path)
    if not p.exists() and p.name in BUNDLED and str(path) == p.name:
        text = resources.files("it2fuzzy").joinpath("data", p.name).read_text("utf-8")
    else:
        text = p.read_text(encoding="utf-8")
    return parse_system_definition(text)


# -- CSV ---------------------------------------------------------------------

def read_dataset_csv(path, header: bool = False):
    """Load ``(X, y)``: feature columns first, target last."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if header:
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    if width < 2:
        raise ValueError(f"{path}: need at least one feature column and a target")
    data = []
    for lineno, r in enumerate(rows, start=2 if header else 1):
        if len(r) != width:
            raise ValueError(f"{path}: row {lineno} has {len(r)} fields, expected {width}")
        try:
            data.append([float(c) for c in r])
        except ValueError:
            raise ValueError(f"{path}: row {lineno} is not numeric: {r}") from None
    arr = np.asarray(data)
    return arr[:, :-1], arr[:, -1]


def write_surface_csv(sample, fh=None, precision: int = 10) -> str:
    """Write a surface sample as ``x1[,x2],y``; gap cells get an empty ``y``."""
    out = fh if fh is not None else _io.StringIO()
    p = len(sample.grid)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"x{k + 1}" for k in range(p)] + ["y"])
    fmt = lambda v: format(float(v), f".{precision}g")  # noqa: E731
    for idx in np.ndindex(*sample.outputs.shape):
        xs = [fmt(sample.grid[k][idx[k]]) for k in range(p)]
        y = sample.outputs[idx]
        writer.writerow(xs + ["" if not np.isfinite(y) else fmt(y)])
    return out.getvalue() if fh is None else ""
