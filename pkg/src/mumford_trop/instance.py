"""Instance files: JSON documents describing a rank-two Schottky datum.

Example::

    {
      "version": 1,
      "name": "SE-1",
      "generators": [[["t^4", "-t^6"], ["0", "-1"]], ...],
      "discs": [{"label": "B1", "center": "t^4", "log_radius": "-5"}, ...],
      "options": {"precision": "32", "grid": "1/16", "words": 4,
                  "join_edges": {"S1,T3": "0"}}
    }

Errors carry the line and column of the offending JSON value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .faithful import LABELS as MARK_LABELS
from .moebius import DISC_LABELS, Disc, MoebiusMap, SchottkyRank2
from .valued_field import PuiseuxParseError, format_puiseux, parse_puiseux

FORMAT_VERSION = 1


class InstanceError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class Instance:
    schottky: SchottkyRank2
    name: str = ""
    options: dict = field(default_factory=dict)

    @property
    def precision(self) -> Fraction | None:
        p = self.options.get("precision")
        return None if p is None else Fraction(p)

    @property
    def grid(self) -> Fraction:
        return Fraction(self.options.get("grid", "1/16"))

    @property
    def words(self) -> int:
        return int(self.options.get("words", 4))

    @property
    def join_edges(self) -> dict:
        return dict(self.options.get("join_edges", {}))


def _locate(text: str, needle: str, offset: int = 0) -> tuple[int, int] | tuple[None, None]:
    pos = text.find(json.dumps(needle))
    if pos < 0:
        return None, None
    pos += 1 + offset  # skip the opening quote
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _puiseux(text: str, value, what: str):
    if not isinstance(value, str):
        raise InstanceError(f"{what}: expected a Puiseux string, got {value!r}")
    try:
        return parse_puiseux(value)
    except PuiseuxParseError as exc:
        line, col = _locate(text, value, exc.position)
        raise InstanceError(f"{what}: {exc}", line, col) from None


def _rational(text: str, value, what: str) -> Fraction:
    try:
        if isinstance(value, float):
            raise ValueError("floats are not exact")
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        line, col = _locate(text, value) if isinstance(value, str) else (None, None)
        raise InstanceError(f"{what}: bad rational {value!r} ({exc})", line, col) from None


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InstanceError("top level must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise InstanceError(f"unsupported version {doc.get('version')!r}")
    gens = doc.get("generators")
    if not (isinstance(gens, list) and len(gens) == 2):
        raise InstanceError("'generators' must list two 2x2 matrices")
    maps = []
    for k, m in enumerate(gens, 1):
        if not (isinstance(m, list) and len(m) == 2 and all(
                isinstance(r, list) and len(r) == 2 for r in m)):
            raise InstanceError(f"generator {k} is not a 2x2 matrix")
        (a, b), (c, d) = ((_puiseux(text, x, f"generator {k}") for x in row) for row in m)
        maps.append(MoebiusMap(a, b, c, d))
    discs = {}
    for entry in doc.get("discs", []):
        label = entry.get("label")
        if label not in DISC_LABELS:
            raise InstanceError(f"unknown disc label {label!r}")
        discs[label] = Disc(_puiseux(text, entry.get("center"), f"disc {label} center"),
                            _rational(text, entry.get("log_radius"), f"disc {label} radius"))
    missing = [l for l in DISC_LABELS if l not in discs]
    if missing:
        raise InstanceError(f"missing discs: {', '.join(missing)}")
    S = SchottkyRank2(maps[0], maps[1], *(discs[l] for l in DISC_LABELS))
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InstanceError("'options' must be an object")
    _check_options(text, options)
    return Instance(S, str(doc.get("name", "")), dict(options))


def _check_options(text: str, options: dict) -> None:
    for key in ("precision", "grid"):
        if key in options and _rational(text, options[key], key) <= 0:
            raise InstanceError(f"{key} must be positive", *_locate(text, options[key]))
    words = options.get("words", 0)
    if isinstance(words, bool) or not isinstance(words, int) or words < 0:
        raise InstanceError(f"words: expected a non-negative integer, got {words!r}")
    joins = options.get("join_edges", {})
    if not isinstance(joins, dict):
        raise InstanceError("join_edges must be an object")
    for labels, eps in joins.items():
        names = labels.replace("/", ",").split(",")
        unknown = [n for n in names if n.strip() not in MARK_LABELS]
        if len(names) < 2 or unknown:
            raise InstanceError(f"join_edges: bad key {labels!r}", *_locate(text, labels))
        if _rational(text, eps, f"join edge {labels}") < 0:
            raise InstanceError(f"join edge {labels}: length must be >= 0",
                                *_locate(text, eps))


def load_instance(path) -> Instance:
    return loads_instance(Path(path).read_text())


def instance_to_dict(inst: Instance) -> dict:
    S = inst.schottky
    gens = []
    for g in (S.gen1, S.gen2):
        gens.append([[format_puiseux(g.a), format_puiseux(g.b)],
                     [format_puiseux(g.c), format_puiseux(g.d)]])
    discs = [{"label": l, "center": format_puiseux(S.disc(l).center),
              "log_radius": str(S.disc(l).log_radius)} for l in DISC_LABELS]
    out = {"version": FORMAT_VERSION, "generators": gens, "discs": discs}
    if inst.name:
        out["name"] = inst.name
    if inst.options:
        out["options"] = inst.options
    return out


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=True) + "\n"
