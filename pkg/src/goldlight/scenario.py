"""Scenario files: JSON documents describing an ambient space, a submanifold
and the checks to run on it.

Scalars use the text form ``"p/q + r/s r2 + t/u r5 + v/w r10"`` and
polynomials are strings in ``x1..xm``.  A minimal file::

    {
      "ambient": {"dim": 2, "metric": {"diagonal": ["1", "-1"]}, "F": "block-product(1,1)"},
      "submanifold": {"frame": [["1", "1"]]},
      "checks": "all"
    }
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bilinear import DimensionMismatch, SymmetricForm
from .connection import ALIASES, IDENTITIES, THEOREMS
from .golden import InvalidProductStructure, ProductStructure, block_product
from .lightlike import AmbientSpace, Immersion, InvalidAmbient
from .poly import ParseError, parse_polynomial, parse_scalar
from .scalar import ZERO

__all__ = [
    "Scenario",
    "ScenarioError",
    "ScenarioParseError",
    "CHECK_IDS",
    "CLAIM_KINDS",
    "BUILTINS",
    "load_scenario",
    "parse_scenario",
    "builtin_scenario",
    "builtin_text",
    "resolve_checks",
]

CHECK_IDS = tuple(IDENTITIES) + tuple(THEOREMS) + tuple(ALIASES)

CLAIM_KINDS = (
    "golden_coefficient",
    "immersion_pushforward",
    "immersion_dimension",
    "ltr_witness",
    "vector_consistency",
    "classification",
    "radical_span",
    "d0_span",
    "pairing",
)

BUILTINS = {
    "1": "example1",
    "2": "example2",
    "example1": "example1",
    "example2": "example2",
    "curved1": "curved1",
    "curved2": "curved2",
}


class ScenarioError(ValueError):
    """The file parsed but does not describe a valid geometry."""


class ScenarioParseError(ParseError):
    """Malformed scenario text; carries a line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str = "",
                 field_text: str | None = None):
        where = []
        if path:
            where.append(path)
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        full = f"{message} ({', '.join(where)})" if where else message
        super().__init__(full)
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        self.field_text = field_text  # raw string value the column refers to


@dataclass
class Scenario:
    name: str
    ambient: AmbientSpace
    immersion: Immersion
    points: tuple
    explicit_frame: bool = False
    screen: list | None = None
    checks: tuple = ()
    mode: str = "exact"
    tolerance: float = 1e-9
    claims: list = field(default_factory=list)
    description: str = ""

    @property
    def m(self) -> int:
        return self.immersion.arity


# ------------------------------------------------------------------ helpers


def _scalar(raw, path):
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ScenarioParseError("expected a scalar string or integer", path=path)
    try:
        return parse_scalar(raw)
    except ParseError as exc:
        text = raw if isinstance(raw, str) else None
        raise ScenarioParseError(exc.message, column=exc.column, path=path, field_text=text) from exc


def _vector(raw, path, n=None):
    if not isinstance(raw, list):
        raise ScenarioParseError("expected a list of scalars", path=path)
    v = tuple(_scalar(x, f"{path}[{i}]") for i, x in enumerate(raw))
    if n is not None and len(v) != n:
        raise ScenarioError(f"{path}: expected {n} entries, found {len(v)}")
    return v


def _matrix(raw, path, n):
    if not isinstance(raw, list) or len(raw) != n:
        raise ScenarioError(f"{path}: expected {n} rows")
    return tuple(_vector(r, f"{path}[{i}]", n) for i, r in enumerate(raw))


def _poly(raw, nvars, path):
    if not isinstance(raw, str):
        raw = str(raw)
    try:
        return parse_polynomial(raw, nvars)
    except ParseError as exc:
        raise ScenarioParseError(exc.message, column=exc.column, path=path, field_text=raw) from exc


def _require(d, key, path):
    if not isinstance(d, dict) or key not in d:
        raise ScenarioError(f"{path}: missing field {key!r}")
    return d[key]


_BLOCK = re.compile(r"^\s*block-product\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def _ambient(raw) -> AmbientSpace:
    n = _require(raw, "dim", "ambient")
    if not isinstance(n, int) or n < 1:
        raise ScenarioError("ambient.dim must be a positive integer")
    metric = _require(raw, "metric", "ambient")
    if isinstance(metric, dict) and "diagonal" in metric:
        form = SymmetricForm.diagonal(_vector(metric["diagonal"], "ambient.metric.diagonal", n), ZERO)
    elif isinstance(metric, dict) and "matrix" in metric:
        try:
            form = SymmetricForm(_matrix(metric["matrix"], "ambient.metric.matrix", n))
        except ValueError as exc:
            raise ScenarioError(f"ambient.metric: {exc}") from exc
    else:
        raise ScenarioError("ambient.metric needs 'diagonal' or 'matrix'")
    F_raw = _require(raw, "F", "ambient")
    try:
        if isinstance(F_raw, str):
            m = _BLOCK.match(F_raw)
            if not m:
                raise ScenarioParseError("F must be 'block-product(p,q)' or a matrix", path="ambient.F")
            F = block_product(int(m.group(1)), int(m.group(2)))
        else:
            F = ProductStructure(_matrix(F_raw, "ambient.F", n))
        return AmbientSpace.build(form, F)
    except (InvalidAmbient, InvalidProductStructure, DimensionMismatch) as exc:
        raise ScenarioError(f"ambient: {exc}") from exc


def _immersion(raw, path) -> Immersion:
    nvars = _require(raw, "variables", path)
    comps = _require(raw, "components", path)
    if not isinstance(nvars, int) or nvars < 1 or not isinstance(comps, list):
        raise ScenarioError(f"{path}: needs an integer 'variables' and a 'components' list")
    return Immersion(tuple(_poly(c, nvars, f"{path}.components[{i}]") for i, c in enumerate(comps)))


def resolve_checks(raw) -> tuple:
    """``"all"`` or a list of ids (also a comma separated string)."""
    if raw is None or raw == "all":
        return CHECK_IDS
    if isinstance(raw, str):
        raw = [s for s in (t.strip() for t in raw.split(",")) if s]
    if not isinstance(raw, list):
        raise ScenarioError("checks must be 'all' or a list of ids")
    if "all" in raw:
        return CHECK_IDS
    unknown = [c for c in raw if c not in CHECK_IDS]
    if unknown:
        raise ScenarioError(f"unknown check ids: {', '.join(map(str, unknown))}")
    return tuple(raw)


def _claim(raw, i, n):
    path = f"claims[{i}]"
    kind = _require(raw, "kind", path)
    if kind not in CLAIM_KINDS:
        raise ScenarioError(f"{path}: unknown claim kind {kind!r}")
    c = {"id": str(raw.get("id", f"claim{i + 1}")), "kind": kind}
    if kind == "golden_coefficient":
        c["value"] = _scalar(_require(raw, "value", path), f"{path}.value")
    elif kind in ("immersion_pushforward", "immersion_dimension"):
        c["immersion"] = _immersion(_require(raw, "immersion", path), f"{path}.immersion")
        if kind == "immersion_pushforward":
            c["point"] = _vector(_require(raw, "point", path), f"{path}.point", c["immersion"].arity)
    elif kind == "ltr_witness":
        c["vector"] = _vector(_require(raw, "vector", path), f"{path}.vector", n)
    elif kind == "vector_consistency":
        c["name"] = str(raw.get("name", ""))
        c["values"] = [
            _vector(v, f"{path}.values[{j}]", n) for j, v in enumerate(_require(raw, "values", path))
        ]
    elif kind == "classification":
        c["value"] = str(_require(raw, "value", path))
    elif kind in ("radical_span", "d0_span"):
        c["vectors"] = [
            _vector(v, f"{path}.vectors[{j}]", n) for j, v in enumerate(_require(raw, "vectors", path))
        ]
    elif kind == "pairing":
        c["u"] = _vector(_require(raw, "u", path), f"{path}.u", n)
        c["v"] = _vector(_require(raw, "v", path), f"{path}.v", n)
        c["value"] = _scalar(_require(raw, "value", path), f"{path}.value")
    return c


# ------------------------------------------------------------------ entry points


def parse_scenario(data: dict, name: str = "") -> Scenario:
    """Build a :class:`Scenario` from already decoded JSON."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    ambient = _ambient(_require(data, "ambient", "scenario"))
    n = ambient.dim
    sub = _require(data, "submanifold", "scenario")
    if isinstance(sub, dict) and "frame" in sub:
        frame = [_vector(v, f"submanifold.frame[{i}]", n) for i, v in enumerate(sub["frame"])]
        if not frame:
            raise ScenarioError("submanifold.frame is empty")
        imm = Immersion.linear(frame)
        points = ((ZERO,) * imm.arity,)
        explicit = True
    elif isinstance(sub, dict) and "immersion" in sub:
        imm = _immersion(sub["immersion"], "submanifold.immersion")
        pts = _require(sub, "points", "submanifold")
        if not isinstance(pts, list) or not pts:
            raise ScenarioError("submanifold.points must be a non-empty list")
        points = tuple(_vector(p, f"submanifold.points[{i}]", imm.arity) for i, p in enumerate(pts))
        explicit = False
    else:
        raise ScenarioError("submanifold needs 'frame' or 'immersion'")
    if imm.target_dim != n:
        raise ScenarioError(f"immersion has {imm.target_dim} components for a {n}-dimensional space")

    screen = None
    if data.get("screen") is not None:
        rows = data["screen"]
        if not isinstance(rows, list):
            raise ScenarioError("screen must be a list of coefficient rows")
        screen = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != imm.arity:
                raise ScenarioError(f"screen[{i}] must have {imm.arity} frame coefficients")
            parsed = [_poly(c, imm.arity, f"screen[{i}][{j}]") for j, c in enumerate(row)]
            screen.append([p.constant_value() if p.is_constant() else p for p in parsed])

    mode = data.get("mode", "exact")
    tolerance = 1e-9
    if isinstance(mode, dict):
        tolerance = float(mode.get("tolerance", tolerance))
        mode = mode.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise ScenarioError("mode must be 'exact' or 'float'")
    if "tolerance" in data:
        tolerance = float(data["tolerance"])

    claims = data.get("claims", [])
    if not isinstance(claims, list):
        raise ScenarioError("claims must be a list")
    return Scenario(
        name=str(data.get("name", name)),
        ambient=ambient,
        immersion=imm,
        points=points,
        explicit_frame=explicit,
        screen=screen,
        checks=resolve_checks(data.get("checks", "all")),
        mode=mode,
        tolerance=tolerance,
        claims=[_claim(c, i, n) for i, c in enumerate(claims)],
        description=str(data.get("description", "")),
    )


def _decode(text: str, source: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno, source) from exc


def _in_file(exc: ScenarioParseError, text: str, source: str) -> ScenarioParseError:
    """Move a column inside a string value to a line and column of the file.

    The first occurrence of the encoded string is used; fields are parsed in
    file order, so an earlier identical string would have failed first.
    """
    if exc.line is not None or exc.field_text is None:
        return exc
    at = text.find(json.dumps(exc.field_text))
    if at < 0:
        return exc
    line = text.count("\n", 0, at) + 1
    col = at - (text.rfind("\n", 0, at) + 1) + 1  # column of the opening quote
    inner = exc.column if exc.column is not None else 1
    return ScenarioParseError(exc.message, line, col + inner, f"{source}, {exc.path}", exc.field_text)


def _parse_text(text: str, source: str, name: str) -> Scenario:
    try:
        return parse_scenario(_decode(text, source), name)
    except ScenarioParseError as exc:
        located = _in_file(exc, text, source)
        if located is exc:
            raise
        raise located from exc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from exc
    return _parse_text(text, str(path), path.stem)


def builtin_text(ident: str) -> str:
    if ident not in BUILTINS:
        raise ScenarioError(f"unknown built-in scenario {ident!r}; choose from {', '.join(BUILTINS)}")
    return resources.files("goldlight.scenarios").joinpath(f"{BUILTINS[ident]}.json").read_text("utf-8")


def builtin_scenario(ident: str) -> Scenario:
    name = BUILTINS.get(ident, ident)
    return _parse_text(builtin_text(ident), name, name)

