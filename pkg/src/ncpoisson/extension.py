"""Poisson extensions of a path algebra by one free variable t.

A double derivation Θ (generator table into tensors, Leibniz-extended with the
outer bimodule actions) is a Poisson derivation when it interacts with the
double bracket through the two signed identities checked here.  For such Θ of
degree 0 the bracket extends to A⟨t⟩ with {{t,t}} = t⊗1 − 1⊗t and
{{t,g}} = Θ(g); the multiplied derivation θ = m∘Θ extends the induced Lie
bracket on necklaces, and when Θ preserves the relation ideal the whole
construction descends to the Hamiltonian reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .dbracket import (
    DoubleBracketSpec,
    eval_double,
    project_loday_cyclic,
    random_word,
)
from .hamred import all_words
from .linalg import RowReducer
from .ncalg import (
    CyclicElement,
    Gen,
    NCElement,
    TensorElement,
    Word,
    genword,
    idword,
    sign_pow,
    to_cyclic,
)
from .report import Report

T_NAME = "t"


@dataclass(frozen=True)
class DoubleDerivation:
    """A double derivation given on generators, extended to words by
    Θ(uv) = Θ(u)·v + (−1)^{|Θ||u|} u·Θ(v) with the outer bimodule actions."""

    degree: int
    table: dict[str, TensorElement]

    def validate(self, spec: DoubleBracketSpec) -> None:
        gens = spec.generator_map()
        for name, val in self.table.items():
            g = gens.get(name)
            if g is None:
                raise ValueError(f"derivation table references unknown generator {name}")
            for (p, q) in val.terms:
                if p.degree + q.degree != g.degree + self.degree:
                    raise ValueError(f"derivation value for {name} violates degree bookkeeping")
                if p.target != g.target or q.source != g.source:
                    raise ValueError(f"derivation value for {name} has mismatched outer endpoints")
                if p.source != q.target:
                    raise ValueError(f"derivation value for {name} has mismatched inner endpoints")

    def on_word(self, w: Word) -> TensorElement:
        if w.length == 0:
            return TensorElement.zero()
        head, rest = w.gens[0], Word(w.gens[1:]) if w.length > 1 else None
        first = self.table.get(head.name, TensorElement.zero())
        if rest is None:
            return first
        out = first.rmul(NCElement.from_word(rest))
        s = sign_pow(self.degree * head.degree)
        out = out + s * self.on_word(rest).lmul(NCElement.generator(head))
        return out

    def __call__(self, x: NCElement) -> TensorElement:
        out = TensorElement.zero()
        for w, c in x.terms.items():
            out = out + c * self.on_word(w)
        return out


@dataclass(frozen=True)
class NCDerivation:
    """An ordinary derivation given on generators, Leibniz-extended."""

    degree: int
    table: dict[str, NCElement]

    def on_word(self, w: Word) -> NCElement:
        if w.length == 0:
            return NCElement.zero()
        head, rest = w.gens[0], Word(w.gens[1:]) if w.length > 1 else None
        first = self.table.get(head.name, NCElement.zero())
        if rest is None:
            return first
        out = first * NCElement.from_word(rest)
        s = sign_pow(self.degree * head.degree)
        return out + s * (NCElement.generator(head) * self.on_word(rest))

    def __call__(self, x: NCElement) -> NCElement:
        out = NCElement.zero()
        for w, c in x.terms.items():
            out = out + c * self.on_word(w)
        return out


def zero_double_derivation(degree: int = 0) -> DoubleDerivation:
    return DoubleDerivation(degree=degree, table={})


def inner_double_derivation(spec: DoubleBracketSpec) -> DoubleDerivation:
    """The inner double derivation x ↦ x⊗1 − 1⊗x, on generators."""
    table = {}
    for g in spec.generators:
        table[g.name] = TensorElement.from_pair(genword(g), idword(g.source)) - (
            TensorElement.from_pair(idword(g.target), genword(g))
        )
    return DoubleDerivation(degree=0, table=table)


def _derivation_first_slot(theta: DoubleDerivation, t: TensorElement) -> "_Tensor3Like":
    """(Θ⊗id) applied to a tensor: Θ hits the first factor, producing triples."""
    out: dict[tuple[Word, Word, Word], Fraction] = {}
    for (u, v), c in t.terms.items():
        for (p, q), ci in theta.on_word(u).terms.items():
            key = (p, q, v)
            out[key] = out.get(key, Fraction(0)) + c * ci
    return out


_Tensor3Like = dict


def _axiom_sides(
    spec: DoubleBracketSpec, theta: DoubleDerivation, a: NCElement, b: NCElement
) -> tuple[_Tensor3Like, _Tensor3Like]:
    """Both sides of the derivation/bracket compatibility identity
    Θ({{a,b}}′) ⊗ {{a,b}}″ = (−1)^{κ₁} Θ(b)′ ⊗ {{a, Θ(b)″}}
                            + (−1)^{κ₂} {{b, Θ(a)′}}″ ⊗ Θ(a)″ ⊗ {{b, Θ(a)′}}′
    as triple tensors."""
    n = spec.degree
    lhs = _derivation_first_slot(theta, eval_double(spec, a, b))

    rhs: dict[tuple[Word, Word, Word], Fraction] = {}
    da, db = a.degree, b.degree
    # first term: Θ hits b, the bracket eats the second piece
    for (u, v), c in theta(b).terms.items():
        inner = eval_double(spec, a, NCElement.from_word(v))
        for (p, q), ci in inner.terms.items():
            k1 = theta.degree * (da - n) + u.degree * v.degree + u.degree * (
                da + v.degree - n
            )
            key = (u, p, q)
            rhs[key] = rhs.get(key, Fraction(0)) + sign_pow(k1) * c * ci
    # second term: Θ hits a, the bracket eats the first piece, slots rearranged
    for (p, q), c in theta(a).terms.items():
        inner = eval_double(spec, b, NCElement.from_word(p))
        for (r, s), ci in inner.terms.items():
            k2 = (db - n) * (theta.degree - n - da) + r.degree * (s.degree + q.degree) + 1
            key = (s, q, r)
            rhs[key] = rhs.get(key, Fraction(0)) + sign_pow(k2) * c * ci
    return lhs, rhs


def _triples_equal(x: _Tensor3Like, y: _Tensor3Like) -> bool:
    diff = dict(x)
    for k, v in y.items():
        nv = diff.get(k, Fraction(0)) - v
        if nv:
            diff[k] = nv
        else:
            diff.pop(k, None)
    return not any(diff.values())


def check_double_poisson_derivation(
    spec: DoubleBracketSpec,
    theta: DoubleDerivation,
    samples: int = 25,
    seed: int = 0,
    max_length: int = 3,
) -> Report:
    """Verify the derivation/bracket compatibility identity on all generator
    pairs and on random word pairs.  (The algebras here carry the zero
    differential, so the differential-compatibility half is automatic.)"""
    theta.validate(spec)
    report = Report("double-poisson-derivation", params={"samples": samples, "seed": seed})
    bad: list[str] = []
    for g in spec.generators:
        for h in spec.generators:
            lhs, rhs = _axiom_sides(spec, theta, NCElement.generator(g), NCElement.generator(h))
            if not _triples_equal(lhs, rhs):
                bad.append(f"({g.name}, {h.name})")
    report.add("compatibility identity on generator pairs", not bad, bad[:8])
    rng = random.Random(seed)
    bad_words: list[str] = []
    for _ in range(samples):
        wa = random_word(spec, rng, max_length)
        wb = random_word(spec, rng, max_length)
        if wa is None or wb is None:
            continue
        lhs, rhs = _axiom_sides(spec, theta, NCElement.from_word(wa), NCElement.from_word(wb))
        if not _triples_equal(lhs, rhs):
            bad_words.append(f"({wa}, {wb})")
    report.add("compatibility identity on random word pairs", not bad_words, bad_words[:8])
    report.add("commutes with the (zero) differential", True, [])
    return report


def t_generators(spec: DoubleBracketSpec) -> list[Gen]:
    """One loop per vertex representing e_v t e_v; together they stand for the
    free variable t, which commutes with the vertex idempotents."""
    names = {g.name for g in spec.generators}
    out = []
    single = len(spec.vertices) == 1
    for v in spec.vertices:
        name = T_NAME if single else f"{T_NAME}_{v}"
        if name in names:
            raise ValueError(f"base algebra already has a generator named {name}")
        out.append(Gen(name, source=v, target=v, degree=spec.degree))
    return out


def t_class(extended: DoubleBracketSpec) -> CyclicElement:
    """The necklace class of t in the extended algebra."""
    terms = {}
    for g in extended.generators:
        if g.name == T_NAME or g.name.startswith(T_NAME + "_"):
            terms[genword(g)] = Fraction(1)
    return CyclicElement(terms)


def extend_double(
    spec: DoubleBracketSpec, theta: DoubleDerivation, check: bool = True
) -> DoubleBracketSpec:
    """The extended double bracket on A⟨t⟩: {{t,t}} = t⊗1 − 1⊗t (in its
    vertex-block form) and {{t,g}} = Θ(g).  Θ must have degree 0 and t gets
    the bracket's degree."""
    if theta.degree != 0:
        raise ValueError("only degree-0 derivations extend the double bracket")
    theta.validate(spec)
    if check:
        rep = check_double_poisson_derivation(spec, theta)
        if not rep.ok:
            raise ValueError(f"derivation fails the compatibility identity: {rep.render()}")
    ts = t_generators(spec)
    table = dict(spec.table)
    gens = spec.generator_map()
    for tv in ts:
        v = tv.source
        table[(tv.name, tv.name)] = TensorElement.from_pair(genword(tv), idword(v)) - (
            TensorElement.from_pair(idword(v), genword(tv))
        )
        for g in spec.generators:
            val = theta.table.get(g.name)
            if val is None:
                continue
            block = TensorElement(
                {(p, q): c for (p, q), c in val.terms.items() if p.source == v}
            )
            if not block.is_zero():
                table[(tv.name, g.name)] = block
    return DoubleBracketSpec(
        degree=spec.degree,
        vertices=spec.vertices,
        generators=spec.generators + tuple(ts),
        table=table,
    )


def induced_nc_derivation(theta: DoubleDerivation) -> NCDerivation:
    """θ = m∘Θ, the multiplied derivation on the algebra."""
    table = {}
    for name, val in theta.table.items():
        image = val.mult()
        if not image.is_zero():
            table[name] = image
    return NCDerivation(degree=theta.degree, table=table)


CyclicBracket = Callable[[CyclicElement, CyclicElement], CyclicElement]


def check_nc_poisson_derivation(
    bracket: CyclicBracket,
    spec: DoubleBracketSpec,
    nu: NCDerivation,
    samples: int = 50,
    seed: int = 0,
    max_length: int = 3,
) -> Report:
    """Sampled check that ν is a derivation of the necklace Lie bracket:
    ν{x̄, ȳ} = {ν(x)‾, ȳ} + (−1)^{|ν|(|x|−n)} {x̄, ν(y)‾}."""
    report = Report("nc-poisson-derivation", params={"samples": samples, "seed": seed})
    rng = random.Random(seed)
    n = spec.degree
    bad: list[str] = []
    tried = 0
    while tried < samples:
        wx = random_word(spec, rng, max_length, closed=True)
        wy = random_word(spec, rng, max_length, closed=True)
        if wx is None or wy is None:
            break
        tried += 1
        cx = to_cyclic(NCElement.from_word(wx))
        cy = to_cyclic(NCElement.from_word(wy))
        lhs = to_cyclic(nu(bracket(cx, cy).lift()))
        s = sign_pow(nu.degree * (wx.degree - n))
        rhs = bracket(to_cyclic(nu(NCElement.from_word(wx))), cy) + s * bracket(
            cx, to_cyclic(nu(NCElement.from_word(wy)))
        )
        if lhs != rhs:
            bad.append(f"({wx}, {wy})")
    report.add(f"Leibniz over the Lie bracket on {tried} necklace pairs", not bad, bad[:5])
    return report


@dataclass(frozen=True)
class NCExtension:
    """The extended Lie bracket on necklaces of A⟨t⟩ determined by an ordinary
    Poisson derivation ν: {t̄, ā} = ν(a)-class, {t̄, t̄} = 0, base pairs by the
    base bracket."""

    base_bracket: CyclicBracket
    nu: NCDerivation
    t_marker: CyclicElement

    def bracket(self, c1: CyclicElement, c2: CyclicElement) -> CyclicElement:
        t1, t2 = c1 == self.t_marker, c2 == self.t_marker
        if t1 and t2:
            return CyclicElement.zero()
        if t1:
            return to_cyclic(self.nu(c2.lift()))
        if t2:
            return -to_cyclic(self.nu(c1.lift()))
        return self.base_bracket(c1, c2)


def extend_nc(
    base_bracket: CyclicBracket,
    spec: DoubleBracketSpec,
    nu: NCDerivation,
    check: bool = True,
    samples: int = 50,
    seed: int = 0,
) -> NCExtension:
    """Extend an NC Poisson bracket by a degree-0 derivation ν; the
    derivation property is sampled, not proved, before extending."""
    if nu.degree != 0:
        raise ValueError("only degree-0 derivations extend the necklace bracket")
    if check:
        rep = check_nc_poisson_derivation(base_bracket, spec, nu, samples=samples, seed=seed)
        if not rep.ok:
            raise ValueError(
                f"derivation fails the necklace Leibniz identity: {rep.render()}"
            )
    marker = t_marker(spec)
    return NCExtension(base_bracket=base_bracket, nu=nu, t_marker=marker)


def t_marker(spec: DoubleBracketSpec) -> CyclicElement:
    terms = {genword(tv): Fraction(1) for tv in t_generators(spec)}
    return CyclicElement(terms)


def check_extension_diagram(
    spec: DoubleBracketSpec,
    theta: DoubleDerivation,
    samples: int = 50,
    seed: int = 0,
    max_length: int = 3,
) -> Report:
    """The two routes from Θ to the bracket with t̄ agree on necklace classes:
    the class of θ(x) = m(Θ(x)) equals {t̄, x̄} computed through the extended
    double bracket."""
    report = Report("extension-diagram", params={"samples": samples, "seed": seed})
    extended = extend_double(spec, theta, check=False)
    nu = induced_nc_derivation(theta)
    tbar = t_class(extended)
    rng = random.Random(seed)
    bad: list[str] = []
    tried = 0
    while tried < samples:
        wx = random_word(spec, rng, max_length, closed=True)
        if wx is None:
            break
        tried += 1
        direct = to_cyclic(nu(NCElement.from_word(wx)))
        via_ext = project_loday_cyclic(
            extended, tbar, to_cyclic(NCElement.from_word(wx))
        )
        if direct != via_ext:
            bad.append(f"{wx}: direct {direct}, extended {via_ext}")
    report.add(f"θ-route equals extension route on {tried} closed words", not bad, bad[:5])
    return report


def check_ideal_preservation(
    spec: DoubleBracketSpec,
    theta: DoubleDerivation,
    w: NCElement,
    bound: int,
) -> Report:
    """Decide whether Θ(w) lies in A⊗AwA + AwA⊗A inside the slice of A⊗A
    where both tensor factors have length ≤ bound."""
    from .quiver import Quiver

    report = Report("ideal-preservation", params={"bound": bound})
    image = theta(w)
    max_total = max((p.length + q.length for (p, q) in image.terms), default=0)
    if max_total > 2 * bound or w.max_length() > bound:
        raise ValueError("length bound too small for the derivation image")
    host = Quiver(vertices=spec.vertices, arrows=spec.generators)
    words = all_words(host, bound)
    reducer = RowReducer(lambda k: (k[0].sort_key(), k[1].sort_key()))
    w_len = w.max_length()
    for p in words:
        for q in words:
            if p.length + w_len + q.length > bound:
                continue
            mid = NCElement.from_word(p) * w * NCElement.from_word(q)
            if mid.is_zero():
                continue
            for u in words:
                reducer.add({(u, m): c for m, c in mid.terms.items()})
                reducer.add({(m, u): c for m, c in mid.terms.items()})
    member = reducer.contains(dict(image.terms))
    witness = [] if member else [str(image)]
    report.add("derivation image lies in the relation bi-ideal slice", member, witness)
    return report
