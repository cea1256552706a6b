"""JSON formats for rules, groups, homomorphism data, systems, and triples.

Loads validate eagerly and raise ValidationError with a file/line location
when the JSON itself is malformed.  Dumps are deterministic: keys sorted,
stable orderings throughout.
"""

from __future__ import annotations

import json
from importlib import resources
from itertools import product
from pathlib import Path

import numpy as np

from .ambient import Ambi
from .errors import ValidationError
from .fields import Field
from .feudal import HomDatum, detect_feudal
from .groups import FiniteGroup
from .rules import FusionRule
from .systems import FusionSystem, GaugeXi
from .uber import Uberderivation

BUILTIN_RULES = ("ty_z2", "ty_z3", "mr", "z4_graded", "z2xz2", "broken")


def _load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e


def load_document(path) -> dict:
    """Load a JSON file or a bundled fixture named builtin:<name>."""
    path = str(path)
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if name not in BUILTIN_RULES:
            raise ValidationError(f"unknown builtin {name!r}; have {', '.join(BUILTIN_RULES)}")
        text = resources.files("fusionkit.data").joinpath(f"{name}.json").read_text()
        return json.loads(text)
    return _load_json(path)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


# ---- fusion rules -------------------------------------------------------------


def rule_from_dict(doc: dict) -> FusionRule:
    try:
        labels = list(doc["labels"])
        unit = doc["unit"]
        dual_map = doc["dual"]
        table_map = doc.get("table", {})
    except (KeyError, TypeError) as e:
        raise ValidationError(f"rule document missing field: {e}") from e
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    if unit not in idx:
        raise ValidationError(f"unit {unit!r} is not a label")
    dual = np.zeros(n, dtype=np.int64)
    for lab in labels:
        if lab not in dual_map:
            raise ValidationError(f"dual map missing {lab!r}")
        dual[idx[lab]] = idx[dual_map[lab]]
    table = np.zeros((n, n, n), dtype=np.int64)
    for key, cell in table_map.items():
        parts = key.split(",")
        if len(parts) != 2 or parts[0] not in idx or parts[1] not in idx:
            raise ValidationError(f"bad table key {key!r}")
        x, y = idx[parts[0]], idx[parts[1]]
        for lab, mult in cell.items():
            if lab not in idx:
                raise ValidationError(f"bad product label {lab!r} at {key!r}")
            table[x, y, idx[lab]] = int(mult)
    return FusionRule(labels, table, idx[unit], dual)


def _check_labels(labels):
    for lab in labels:
        if "," in lab:
            raise ValidationError(f"label {lab!r} contains a comma; keys would be ambiguous")


def rule_to_dict(rule: FusionRule) -> dict:
    _check_labels(rule.labels)
    table = {}
    for x, y in product(range(rule.n), repeat=2):
        cell = {rule.labels[z]: int(rule.table[x, y, z]) for z in rule.support(x, y)}
        if cell:
            table[f"{rule.labels[x]},{rule.labels[y]}"] = cell
    return {
        "labels": list(rule.labels),
        "unit": rule.labels[rule.unit],
        "dual": {rule.labels[i]: rule.labels[int(rule.dual[i])] for i in range(rule.n)},
        "table": table,
    }


def load_rule(path) -> FusionRule:
    return rule_from_dict(load_document(path))


# ---- groups and homomorphism data ------------------------------------------------


def group_from_dict(doc: dict) -> FiniteGroup:
    labels = list(doc["labels"])
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    table = np.zeros((n, n), dtype=np.int64)
    for key, val in doc["table"].items():
        parts = key.split(",")
        if len(parts) != 2 or parts[0] not in idx or parts[1] not in idx or val not in idx:
            raise ValidationError(f"bad group table entry {key!r}: {val!r}")
        table[idx[parts[0]], idx[parts[1]]] = idx[val]
    return FiniteGroup(labels, table, name=doc.get("name"))


def group_to_dict(g: FiniteGroup) -> dict:
    _check_labels(g.labels)
    return {
        "name": g.name,
        "labels": list(g.labels),
        "table": {
            f"{g.labels[a]},{g.labels[b]}": g.labels[g.mul(a, b)]
            for a, b in product(range(len(g)), repeat=2)
        },
    }


def hom_datum_from_dict(doc: dict) -> HomDatum:
    src = group_from_dict(doc["source"])
    tgt = group_from_dict(doc["target"])
    mapping = np.zeros(len(src), dtype=np.int64)
    for lab, img in doc["map"].items():
        mapping[src.index(lab)] = tgt.index(img)
    return HomDatum(src, tgt, mapping)


def hom_datum_to_dict(h: HomDatum) -> dict:
    return {
        "source": group_to_dict(h.source),
        "target": group_to_dict(h.target),
        "map": {
            h.source.labels[a]: h.target.labels[int(h.mapping[a])] for a in range(len(h.source))
        },
    }


def load_hom_datum(path) -> HomDatum:
    return hom_datum_from_dict(load_document(path))


# ---- fusion systems ------------------------------------------------------------


def system_from_dict(doc: dict) -> FusionSystem:
    rule = rule_from_dict(doc["rule"]) if isinstance(doc["rule"], dict) else load_rule(doc["rule"])
    field = Field(int(doc["p"]))
    idx = {lab: i for i, lab in enumerate(rule.labels)}
    coeffs = {}
    for key, val in doc["coeffs"].items():
        parts = key.split(",")
        if len(parts) != 6 or any(p not in idx for p in parts):
            raise ValidationError(f"bad coefficient key {key!r}")
        coeffs[tuple(idx[p] for p in parts)] = int(val)
    return FusionSystem(rule, field, coeffs)


def system_to_dict(f: FusionSystem) -> dict:
    labels = f.rule.labels
    return {
        "rule": rule_to_dict(f.rule),
        "p": f.field.p,
        "coeffs": {
            ",".join(labels[i] for i in key): int(val) for key, val in sorted(f.coeffs.items())
        },
    }


def load_system(path) -> FusionSystem:
    return system_from_dict(load_document(path))


def gauge_from_dict(doc: dict, rule: FusionRule | None = None, field: Field | None = None) -> GaugeXi:
    if rule is None:
        rule = rule_from_dict(doc["rule"]) if isinstance(doc["rule"], dict) else load_rule(doc["rule"])
    if field is None:
        field = Field(int(doc["p"]))
    idx = {lab: i for i, lab in enumerate(rule.labels)}
    values = {}
    for key, val in doc["values"].items():
        parts = key.split(",")
        if len(parts) != 3 or any(p not in idx for p in parts):
            raise ValidationError(f"bad gauge key {key!r}")
        values[tuple(idx[p] for p in parts)] = int(val)
    return GaugeXi(rule, field, values)


def gauge_to_dict(xi: GaugeXi) -> dict:
    labels = xi.rule.labels
    return {
        "rule": rule_to_dict(xi.rule),
        "p": xi.field.p,
        "values": {",".join(labels[i] for i in k): int(v) for k, v in sorted(xi.values.items())},
    }


# ---- uberderivations ---------------------------------------------------------------


def uber_from_dict(doc: dict) -> Uberderivation:
    rule = rule_from_dict(doc["rule"]) if isinstance(doc["rule"], dict) else load_rule(doc["rule"])
    field = Field(int(doc["p"]))
    fr = detect_feudal(rule)
    if fr is None:
        raise ValidationError("rule carries no feudal structure")
    ambi = Ambi(fr, field)
    idx = {lab: i for i, lab in enumerate(rule.labels)}

    def parse(table):
        out = {}
        for key, vec in table.items():
            parts = key.split(",")
            if len(parts) != 2 or any(p not in idx for p in parts):
                raise ValidationError(f"bad serf pair {key!r}")
            if len(vec) != ambi.npoints:
                raise ValidationError(f"value at {key!r} must list one residue per lord")
            out[(idx[parts[0]], idx[parts[1]])] = np.array([int(v) for v in vec], dtype=np.int64)
        return out

    tau = np.array([int(v) for v in doc["tau"]], dtype=np.int64)
    return Uberderivation(ambi, parse(doc["chi"]), parse(doc["ups"]), tau)


def uber_to_dict(u: Uberderivation) -> dict:
    labels = u.ambi.feudal.rule.labels
    return {
        "rule": rule_to_dict(u.ambi.feudal.rule),
        "p": u.ambi.field.p,
        "chi": {
            f"{labels[a]},{labels[b]}": [int(v) for v in vec] for (a, b), vec in sorted(u.chi.items())
        },
        "ups": {
            f"{labels[a]},{labels[b]}": [int(v) for v in vec] for (a, b), vec in sorted(u.ups.items())
        },
        "tau": [int(v) for v in u.tau],
    }


def load_uber(path) -> Uberderivation:
    return uber_from_dict(load_document(path))
