"""Degree-truncated noncommutative Hamiltonian reduction A/AwA.

For a relation element w = Σ e_i w e_i (optionally deformed by r ∈ S) the
two-sided ideal slice up to a length bound D is built by exact rational
elimination on word coordinates; the quotient gets a canonical normal-form
basis, a cyclic quotient, and the descended Lie bracket on necklace classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dbracket import DoubleBracketSpec, induced_loday, random_word
from .linalg import RowReducer
from .ncalg import (
    CyclicElement,
    NCElement,
    Word,
    idword,
    rotations,
    to_cyclic,
)
from .quiver import Quiver
from .report import Report


class TruncationError(ValueError):
    """An operation would need words longer than the configured bound."""


def _word_sort(w: Word):
    return w.sort_key()


def all_words(q: Quiver, max_length: int) -> list[Word]:
    """All composable words over the quiver's arrows up to a length bound."""
    out: list[Word] = [idword(v) for v in q.vertices]
    layer: list[Word] = list(out)
    for _ in range(max_length):
        nxt: list[Word] = []
        for w in layer:
            for g in q.arrows:
                if g.target == w.source:
                    nxt.append(Word(w.gens + (g,)))
        out.extend(nxt)
        layer = nxt
    return list(dict.fromkeys(out))


@dataclass
class TruncatedQuotient:
    host: Quiver
    w: NCElement
    bound: int
    r: dict[str, Fraction] | None
    spec: DoubleBracketSpec | None
    reducer: RowReducer
    cyclic_reducer: RowReducer
    basis: list[Word]

    def dimension_table(self) -> dict[tuple[int, str, str], int]:
        table: dict[tuple[int, str, str], int] = {}
        for word in self.basis:
            key = (word.length, word.source, word.target)
            table[key] = table.get(key, 0) + 1
        return table

    def normal_form(self, x: NCElement) -> NCElement:
        """Canonical representative of x modulo the ideal slice."""
        if x.max_length() > self.bound:
            raise TruncationError(
                f"element has words longer than the bound {self.bound}"
            )
        return NCElement(self.reducer.reduce(dict(x.terms)))

    def cyclic_reduce(self, x: NCElement) -> NCElement:
        """Canonical representative of the class of x in the cyclic quotient
        of the truncated reduction (modulo ideal, idempotents, rotations)."""
        if x.max_length() > self.bound:
            raise TruncationError(
                f"element has words longer than the bound {self.bound}"
            )
        closed = NCElement(
            {w: c for w, c in x.terms.items() if w.closed}
        )
        return NCElement(self.cyclic_reducer.reduce(dict(closed.terms)))

    def induced_lie(self, c1: CyclicElement, c2: CyclicElement) -> CyclicElement:
        """Bracket of lifts, projected back to the cyclic quotient."""
        if self.spec is None:
            raise ValueError("quotient carries no bracket data")
        x, y = c1.lift(), c2.lift()
        if x.max_length() + y.max_length() - 2 > self.bound:
            raise TruncationError(
                "bracket could exceed the length bound; refusing to truncate silently"
            )
        br = induced_loday(self.spec, x, y)
        return to_cyclic(self.cyclic_reduce(br))


def reduce(
    host: Quiver,
    w: NCElement,
    bound: int,
    r: dict[str, Fraction] | None = None,
    spec: DoubleBracketSpec | None = None,
) -> TruncatedQuotient:
    """Build the truncated quotient of the path algebra by the two-sided ideal
    generated by w (or w − r with r ∈ S)."""
    parts = {i: w.project_vertex(i) for i in host.vertices}
    total = NCElement.zero()
    for p in parts.values():
        total = total + p
    if total != w:
        raise ValueError("relation element must decompose as a sum of e_i w e_i")
    if w.max_length() > bound:
        raise ValueError("length bound is smaller than the relation element")
    rel = w
    if r:
        for v, c in r.items():
            rel = rel - NCElement.from_word(idword(v), c)
    rel_len = rel.max_length()
    reducer = RowReducer(_word_sort)
    words = all_words(host, bound)
    if not rel.is_zero():
        for p in words:
            for q in words:
                if p.length + rel_len + q.length > bound:
                    continue
                row = NCElement.from_word(p) * rel * NCElement.from_word(q)
                if not row.is_zero():
                    reducer.add(dict(row.terms))
    basis = [word for word in words if word not in reducer.pivot_keys()]

    cyclic_reducer = RowReducer(_word_sort)
    for row in reducer.rows.values():
        cyclic_reducer.add(dict(row))
    for word in words:
        if word.length == 0:
            cyclic_reducer.add({word: Fraction(1)})
        elif word.closed:
            rots = list(rotations(word))
            if len(rots) > 1:
                rot, sgn = rots[1]
                row = {word: Fraction(1)}
                row[rot] = row.get(rot, Fraction(0)) - sgn
                row = {k: v for k, v in row.items() if v}
                if row:
                    cyclic_reducer.add(row)
    return TruncatedQuotient(
        host=host,
        w=w,
        bound=bound,
        r=r,
        spec=spec,
        reducer=reducer,
        cyclic_reducer=cyclic_reducer,
        basis=basis,
    )


def check_pr_morphism(
    q: TruncatedQuotient, samples: int = 100, seed: int = 0
) -> Report:
    """The projection to the reduction intertwines the Lie brackets:
    pr{x, y} = {pr x, pr y} on sampled closed words within truncation."""
    report = Report("pr-morphism", params={"samples": samples, "seed": seed})
    if q.spec is None:
        raise ValueError("quotient carries no bracket data")
    rng = random.Random(seed)
    max_len = max(1, (q.bound + 2) // 2)
    bad: list[str] = []
    tried = 0
    while tried < samples:
        wx = random_word(q.spec, rng, max_len, closed=True)
        wy = random_word(q.spec, rng, max_len, closed=True)
        if wx is None or wy is None:
            break
        tried += 1
        x, y = NCElement.from_word(wx), NCElement.from_word(wy)
        upstairs = q.cyclic_reduce(induced_loday(q.spec, x, y))
        downstairs = q.cyclic_reduce(
            induced_loday(q.spec, q.normal_form(x), q.normal_form(y))
        )
        if upstairs != downstairs:
            bad.append(f"({wx}, {wy}): pr{{x,y}} = {upstairs}, {{pr x, pr y}} = {downstairs}")
    report.add(f"bracket commutes with projection on {tried} pairs", not bad, bad[:5])
    return report
