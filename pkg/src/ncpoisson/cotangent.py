"""Shifted noncommutative cotangent bundles of path algebras.

For a free path algebra with arrow set {a}, the n-shifted cotangent algebra
adjoins one dual letter D_a per arrow, of degree n − |a|, running backwards
(source t(a), target s(a)).  It carries the graded double bracket

    {{D_a, a}} = e_{t(a)} ⊗ e_{s(a)},   {{a_i, a_j}} = {{D_i, D_j}} = 0,

of degree n, a weight grading counting D letters, and the induced Lie bracket
on necklaces.  Weight-2 necklaces are bivectors; a bivector P with
(1/2){P, P} = 0 encodes a double Poisson bracket on the base, recovered by
pairing its two D letters against generator differentials.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dbracket import DoubleBracketSpec, induced_loday
from .ncalg import (
    CyclicElement,
    Gen,
    NCElement,
    TensorElement,
    Word,
    idword,
    rotations,
    to_cyclic,
)
from .quiver import Quiver

D_PREFIX = "D_"


class WeightError(ValueError):
    """A polyvector operation received the wrong weight."""


@dataclass(frozen=True)
class CotangentAlgebra:
    base: Quiver
    shift: int
    generators: tuple[Gen, ...]
    spec: DoubleBracketSpec

    def dual_letter(self, arrow_name: str) -> Gen:
        return self.spec.generator_map()[D_PREFIX + arrow_name]

    def generator_map(self) -> dict[str, Gen]:
        return {g.name: g for g in self.generators}

    def weight(self, w: Word) -> int:
        return sum(1 for g in w.gens if g.name.startswith(D_PREFIX))

    def is_dual(self, g: Gen) -> bool:
        return g.name.startswith(D_PREFIX)


def build_cotangent(base: Quiver, shift: int) -> CotangentAlgebra:
    """The shifted cotangent algebra of a free path algebra, with its
    canonical double bracket installed on generators."""
    for a in base.arrows:
        if a.name.startswith(D_PREFIX):
            raise ValueError(
                f"arrow name {a.name!r} collides with the reserved dual prefix {D_PREFIX!r}"
            )
    duals = tuple(
        Gen(D_PREFIX + a.name, source=a.target, target=a.source, degree=shift - a.degree)
        for a in base.arrows
    )
    gens = base.arrows + duals
    table: dict[tuple[str, str], TensorElement] = {}
    for a in base.arrows:
        table[(D_PREFIX + a.name, a.name)] = TensorElement.from_pair(
            idword(a.target), idword(a.source)
        )
    spec = DoubleBracketSpec(
        degree=shift, vertices=base.vertices, generators=gens, table=table
    )
    return CotangentAlgebra(base=base, shift=shift, generators=gens, spec=spec)


def check_weight(cot: CotangentAlgebra, x: CyclicElement, weight: int) -> None:
    for w, _ in x.items():
        if cot.weight(w) != weight:
            raise WeightError(f"necklace {w} has weight {cot.weight(w)}, expected {weight}")


def schouten(cot: CotangentAlgebra, x: CyclicElement, y: CyclicElement) -> CyclicElement:
    """The Lie bracket on necklaces of the cotangent algebra."""
    return to_cyclic(induced_loday(cot.spec, x.lift(), y.lift()))


def mc_check(cot: CotangentAlgebra, bivector: CyclicElement) -> CyclicElement:
    """The Maurer-Cartan residual (1/2){P, P}; empty means P encodes a double
    Poisson bracket on the base."""
    check_weight(cot, bivector, 2)
    from fractions import Fraction

    return schouten(cot, bivector, bivector).scale(Fraction(1, 2))


def standard_bivector(cot: CotangentAlgebra) -> CyclicElement:
    """The canonical bivector Σ_a −D_a · D_{a*} of a doubled quiver base."""
    if not cot.base.is_doubled:
        raise ValueError("the canonical bivector needs a doubled base quiver")
    out = CyclicElement.zero()
    for a in cot.base.original_arrows():
        da = cot.dual_letter(a.name)
        ds = cot.dual_letter(cot.base.dual(a).name)
        out = out + CyclicElement({Word((da, ds)): -1})
    return out


def check_canonical_bivector(cot: CotangentAlgebra) -> "Report":
    """The canonical bivector of a doubled base is flat ((1/2){P,P} = 0) and
    its associated bracket reproduces the canonical double bracket of the
    base on every ordered generator pair."""
    from .dbracket import eval_double
    from .quiver import standard_bracket
    from .report import Report

    report = Report("maurer-cartan", params={"shift": cot.shift})
    bivector = standard_bivector(cot)
    residual = mc_check(cot, bivector)
    report.add(
        "(1/2){P, P} vanishes",
        residual.is_zero(),
        [] if residual.is_zero() else [str(residual)],
    )
    derived = associated_bracket(cot, bivector)
    want = standard_bracket(cot.base)
    bad: list[str] = []
    for g in cot.base.arrows:
        for h in cot.base.arrows:
            x, y = NCElement.generator(g), NCElement.generator(h)
            got = eval_double(derived, x, y)
            expected = eval_double(want, x, y)
            if got != expected:
                bad.append(f"({g.name}, {h.name}): got {got}, want {expected}")
    report.add(
        "associated bracket matches the canonical bracket on generator pairs",
        not bad,
        bad[:5],
    )
    return report


def associated_bracket(cot: CotangentAlgebra, bivector: CyclicElement) -> DoubleBracketSpec:
    """Read off the double bracket encoded by a weight-2 bivector: for every
    rotation D_g v D_h u of a necklace of P, the pair (g, h) receives
    −(rotation sign)·(e_{t(h)} u e_{s(g)}) ⊗ (e_{t(g)} v e_{s(h)}).

    The overall sign is the convention that makes the canonical bivector of a
    doubled quiver reproduce the standard bracket exactly."""
    check_weight(cot, bivector, 2)
    degrees = {w.degree for w, _ in bivector.items()}
    if len(degrees) > 1:
        raise ValueError("bivector must be degree-homogeneous")
    pdeg = degrees.pop() if degrees else 2 * cot.shift
    out_degree = 2 * cot.shift - pdeg
    table: dict[tuple[str, str], TensorElement] = {}
    for neck, c in bivector.items():
        for rot, sgn in rotations(neck):
            if not cot.is_dual(rot.gens[0]):
                continue
            dg = rot.gens[0]
            rest = rot.gens[1:]
            split = next(i for i, g in enumerate(rest) if cot.is_dual(g))
            v_gens, dh, u_gens = rest[:split], rest[split], rest[split + 1 :]
            g = dg.name[len(D_PREFIX) :]
            h = dh.name[len(D_PREFIX) :]
            v = Word(v_gens) if v_gens else idword(dg.source)
            u = Word(u_gens) if u_gens else idword(dh.source)
            gg = cot.base.generator(g)
            hh = cot.base.generator(h)
            left = (
                NCElement.idempotent(hh.target)
                * NCElement.from_word(u)
                * NCElement.idempotent(gg.source)
            )
            right = (
                NCElement.idempotent(gg.target)
                * NCElement.from_word(v)
                * NCElement.idempotent(hh.source)
            )
            val = TensorElement.of(left, right).scale(-sgn * c)
            if val.is_zero():
                continue
            key = (g, h)
            table[key] = table.get(key, TensorElement.zero()) + val
    table = {k: v for k, v in table.items() if not v.is_zero()}
    return DoubleBracketSpec(
        degree=out_degree,
        vertices=cot.base.vertices,
        generators=cot.base.arrows,
        table=table,
    )
