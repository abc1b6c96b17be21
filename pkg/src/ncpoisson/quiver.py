"""Quiver data model: parsing, doubling, the canonical bracket and moment map.

A quiver is a finite directed graph.  Doubling adds a reversed arrow a* for
every arrow a; the doubled quiver carries the canonical degree-0 double
bracket {{a, a*}} = e_{s(a)} ⊗ e_{t(a)}, {{a*, a}} = −e_{t(a)} ⊗ e_{s(a)} and
the canonical moment element w = Σ_a (a a* − a* a).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .ncalg import Gen, NCElement, TensorElement, idword

DUAL_SUFFIX = "*"


class QuiverError(ValueError):
    """Invalid quiver document or quiver operation."""


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Gen, ...]

    def __post_init__(self) -> None:
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise QuiverError(f"duplicate arrow name(s): {', '.join(dup)}")
        vs = set(self.vertices)
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in vs:
                    raise QuiverError(f"arrow {a.name} references undeclared vertex {v}")

    @property
    def is_doubled(self) -> bool:
        names = {a.name for a in self.arrows}
        for a in self.arrows:
            if a.name.endswith(DUAL_SUFFIX):
                continue
            if a.name + DUAL_SUFFIX not in names:
                return False
        return any(a.name.endswith(DUAL_SUFFIX) for a in self.arrows) or not self.arrows

    def generator(self, name: str) -> Gen:
        for a in self.arrows:
            if a.name == name:
                return a
        raise QuiverError(f"unknown arrow {name}")

    def generator_map(self) -> dict[str, Gen]:
        return {a.name: a for a in self.arrows}

    def original_arrows(self) -> tuple[Gen, ...]:
        return tuple(a for a in self.arrows if not a.name.endswith(DUAL_SUFFIX))

    def dual(self, a: Gen) -> Gen:
        if a.name.endswith(DUAL_SUFFIX):
            return self.generator(a.name[: -len(DUAL_SUFFIX)])
        return self.generator(a.name + DUAL_SUFFIX)


def double(q: Quiver) -> Quiver:
    """The doubled quiver: one dual arrow a* per arrow a, with endpoints
    swapped and the same degree."""
    for a in q.arrows:
        if a.name.endswith(DUAL_SUFFIX):
            raise QuiverError(f"quiver already contains a dual arrow: {a.name}")
    duals = tuple(
        Gen(a.name + DUAL_SUFFIX, source=a.target, target=a.source, degree=a.degree)
        for a in q.arrows
    )
    return Quiver(q.vertices, q.arrows + duals)


def standard_bracket(qbar: Quiver):
    """The canonical degree-0 double bracket of a doubled quiver."""
    from .dbracket import DoubleBracketSpec

    if not qbar.is_doubled:
        raise QuiverError("standard bracket requires a doubled quiver")
    table: dict[tuple[str, str], TensorElement] = {}
    for a in qbar.original_arrows():
        astar = qbar.dual(a)
        table[(a.name, astar.name)] = TensorElement.from_pair(
            idword(a.source), idword(a.target)
        )
        table[(astar.name, a.name)] = TensorElement.from_pair(
            idword(a.target), idword(a.source), -1
        )
    return DoubleBracketSpec(
        degree=0, vertices=qbar.vertices, generators=qbar.arrows, table=table
    )


def standard_moment(qbar: Quiver) -> NCElement:
    """The canonical moment element w = Σ_a (a a* − a* a) of a doubled quiver."""
    if not qbar.is_doubled:
        raise QuiverError("standard moment requires a doubled quiver")
    w = NCElement.zero()
    for a in qbar.original_arrows():
        astar = qbar.dual(a)
        xa, xs = NCElement.generator(a), NCElement.generator(astar)
        w = w + xa * xs - xs * xa
    return w


@dataclass(frozen=True)
class QuiverDocument:
    """A parsed quiver-spec document: the quiver plus optional bracket,
    moment and derivation sections (kept as raw strings/tables for the
    modules that consume them)."""

    quiver: Quiver
    bracket: dict[tuple[str, str], str] | None = None
    moment: str | None = None
    derivation: dict[str, str] | None = None


def parse_quiver_document(text: str) -> QuiverDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise QuiverError("quiver document must be a JSON object")
    vertices = data.get("vertices")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise QuiverError("'vertices' must be a list of strings")
    if len(set(vertices)) != len(vertices):
        raise QuiverError("duplicate vertex ids")
    arrows_raw = data.get("arrows", [])
    if not isinstance(arrows_raw, list):
        raise QuiverError("'arrows' must be a list")
    arrows = []
    for i, entry in enumerate(arrows_raw):
        if not isinstance(entry, dict):
            raise QuiverError(f"arrow #{i} must be an object")
        try:
            name = entry["name"]
            source = entry["source"]
            target = entry["target"]
        except KeyError as exc:
            raise QuiverError(f"arrow #{i} missing key {exc}")
        degree = entry.get("degree", 0)
        if not isinstance(name, str) or not name:
            raise QuiverError(f"arrow #{i} has an invalid name")
        if DUAL_SUFFIX in name:
            raise QuiverError(
                f"arrow name {name!r} contains the reserved character {DUAL_SUFFIX!r}"
            )
        if not isinstance(degree, int) or degree > 0:
            raise QuiverError(f"arrow {name}: degree must be an integer <= 0")
        arrows.append(Gen(name, source=str(source), target=str(target), degree=degree))
    q = Quiver(tuple(vertices), tuple(arrows))

    bracket = None
    if "bracket" in data:
        raw = data["bracket"]
        if not isinstance(raw, dict):
            raise QuiverError("'bracket' must map 'g,h' pairs to expressions")
        bracket = {}
        for key, val in raw.items():
            parts = [p.strip() for p in key.split(",")]
            if len(parts) != 2:
                raise QuiverError(f"bracket key {key!r} is not a 'g,h' pair")
            bracket[(parts[0], parts[1])] = str(val)
    moment = data.get("moment")
    if moment is not None and not isinstance(moment, str):
        raise QuiverError("'moment' must be an expression string")
    derivation = None
    if "derivation" in data:
        raw = data["derivation"]
        if not isinstance(raw, dict):
            raise QuiverError("'derivation' must map generator names to expressions")
        derivation = {str(k): str(v) for k, v in raw.items()}
    return QuiverDocument(q, bracket=bracket, moment=moment, derivation=derivation)


def parse_quiver(text: str) -> Quiver:
    """Parse and validate a quiver-spec JSON document."""
    return parse_quiver_document(text).quiver


def jordan_quiver() -> Quiver:
    """One vertex, one loop: the smallest interesting quiver."""
    return Quiver(("0",), (Gen("a", "0", "0"),))


def a2_quiver() -> Quiver:
    """Two vertices joined by one arrow."""
    return Quiver(("0", "1"), (Gen("a", "0", "1"),))


def a3_framed_quiver() -> Quiver:
    """The A3 cycle with a framing vertex: vertices inf,0,1,2 and arrows
    p: inf→0, a0: 0→1, a1: 1→2, a2: 2→0."""
    return Quiver(
        ("inf", "0", "1", "2"),
        (
            Gen("p", "inf", "0"),
            Gen("a0", "0", "1"),
            Gen("a1", "1", "2"),
            Gen("a2", "2", "0"),
        ),
    )
