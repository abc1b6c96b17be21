"""Bar and cobar constructions at bounded path length, shifted double
brackets, the Connes complex for reduced cyclic homology, and the induced Lie
bracket on degree-zero cyclic classes.

All algebras here are length-graded with zero internal differential, so every
complex splits into finite blocks indexed by (homological degree, total path
length) and all homology is computed by exact rational elimination.  A bar
word 𝔰a₁ t 𝔰a₂ t … t 𝔰a_k is stored as the tuple of its entries; a cobar
monomial is a composable tuple of bar words, one per desuspended letter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .dbracket import (
    DoubleBracketSpec,
    eval_double,
    project_loday_cyclic,
    triple_bracket,
)
from .extension import extend_double, zero_double_derivation
from .hamred import TruncatedQuotient, all_words
from .linalg import KernelSolver, RowReducer
from .ncalg import (
    CyclicElement,
    Gen,
    NCElement,
    TensorElement,
    Word,
    compose,
    genword,
    idword,
    sign_pow,
    to_cyclic,
)
from .quiver import Quiver
from .report import Report

BarKey = tuple  # tuple[Word, ...]
CobarKey = tuple  # tuple[BarKey, ...]


@dataclass(frozen=True)
class TruncatedAlgebra:
    """A length-graded algebra with a finite normal-form basis per length,
    together with its (descended) double bracket data."""

    name: str
    vertices: tuple[str, ...]
    bound: int
    basis: dict[int, tuple[Word, ...]]
    _mult: Callable[[Word, Word], NCElement]
    spec: DoubleBracketSpec | None = None
    _dbl: Callable[[Word, Word], TensorElement] | None = None
    _cyclic_reduce: Callable[[NCElement], NCElement] | None = None

    def mult(self, u: Word, v: Word) -> NCElement:
        return self._mult(u, v)

    def dbl(self, u: Word, v: Word) -> TensorElement:
        if self._dbl is None:
            raise ValueError(f"algebra {self.name} carries no double bracket data")
        return self._dbl(u, v)

    def cyclic_class(self, x: NCElement) -> CyclicElement:
        if self._cyclic_reduce is not None:
            x = self._cyclic_reduce(x)
        return to_cyclic(x)

    def dim(self, length: int) -> int:
        return len(self.basis.get(length, ()))

    def words(self, max_length: int | None = None) -> list[Word]:
        top = self.bound if max_length is None else min(max_length, self.bound)
        return [w for l in range(top + 1) for w in self.basis.get(l, ())]


def free_truncation(
    q: Quiver, bound: int, spec: DoubleBracketSpec | None = None
) -> TruncatedAlgebra:
    """The free path algebra truncated at a length bound."""
    basis: dict[int, list[Word]] = {}
    for w in all_words(q, bound):
        basis.setdefault(w.length, []).append(w)

    def mult(u: Word, v: Word) -> NCElement:
        w = compose(u, v)
        if w is None or w.length > bound:
            return NCElement.zero()
        return NCElement.from_word(w)

    dbl = None
    if spec is not None:
        def dbl(u: Word, v: Word) -> TensorElement:
            return eval_double(spec, NCElement.from_word(u), NCElement.from_word(v))

    return TruncatedAlgebra(
        name=f"free[{bound}]",
        vertices=q.vertices,
        bound=bound,
        basis={l: tuple(ws) for l, ws in basis.items()},
        _mult=mult,
        spec=spec,
        _dbl=dbl,
    )


def quotient_truncation(tq: TruncatedQuotient) -> TruncatedAlgebra:
    """A Hamiltonian reduction as a truncated algebra: basis = normal forms,
    multiplication and bracket components through normal forms."""
    basis: dict[int, list[Word]] = {}
    for w in tq.basis:
        basis.setdefault(w.length, []).append(w)

    def mult(u: Word, v: Word) -> NCElement:
        w = compose(u, v)
        if w is None or w.length > tq.bound:
            return NCElement.zero()
        return tq.normal_form(NCElement.from_word(w))

    dbl = None
    if tq.spec is not None:
        def dbl(u: Word, v: Word) -> TensorElement:
            def nf(w: Word) -> NCElement:
                return tq.normal_form(NCElement.from_word(w))

            raw = eval_double(tq.spec, NCElement.from_word(u), NCElement.from_word(v))
            return raw.map_factors(nf, nf)

    return TruncatedAlgebra(
        name=f"reduction[{tq.bound}]",
        vertices=tq.host.vertices,
        bound=tq.bound,
        basis={l: tuple(ws) for l, ws in basis.items()},
        _mult=mult,
        spec=tq.spec,
        _dbl=dbl,
        _cyclic_reduce=tq.cyclic_reduce,
    )


# ---------------------------------------------------------------------------
# gradings and key helpers

def bar_degree(X: BarKey) -> int:
    return sum(w.degree - 1 for w in X)


def letter_degree(X: BarKey) -> int:
    return bar_degree(X) + 1


def cobar_degree(K: CobarKey) -> int:
    return sum(letter_degree(X) for X in K)


def key_length(K: CobarKey) -> int:
    return sum(w.length for X in K for w in X)


def _bar_sort(X: BarKey) -> tuple:
    return tuple(w.sort_key() for w in X)


def _cobar_sort(K: CobarKey) -> tuple:
    return tuple(_bar_sort(X) for X in K)


def _bar_str(X: BarKey) -> str:
    return "(" + " | ".join(str(w) for w in X) + ")"


def _cobar_str(K: CobarKey) -> str:
    return " . ".join(_bar_str(X) for X in K)


def bar_words(
    alg: TruncatedAlgebra, total_length: int, max_weight: int | None = None
) -> list[BarKey]:
    """All composable bar words with non-idempotent entries of the given total
    path length."""
    out: list[BarKey] = []

    def extend(prefix: tuple, remaining: int) -> None:
        if prefix and remaining == 0:
            out.append(prefix)
        if max_weight is not None and len(prefix) >= max_weight:
            return
        for l in range(1, remaining + 1):
            for w in alg.basis.get(l, ()):
                if prefix and prefix[-1].source != w.target:
                    continue
                extend(prefix + (w,), remaining - l)

    extend((), total_length)
    return out


def cobar_basis(alg: TruncatedAlgebra, total_length: int) -> list[CobarKey]:
    """All cobar monomials of the given total path length (normalized: no
    idempotent bar entries)."""
    letters: dict[int, list[BarKey]] = {
        l: bar_words(alg, l) for l in range(1, total_length + 1)
    }
    out: list[CobarKey] = []

    def extend(prefix: CobarKey, remaining: int) -> None:
        if prefix and remaining == 0:
            out.append(prefix)
        for l in range(1, remaining + 1):
            for X in letters[l]:
                if prefix and prefix[-1][-1].source != X[0].target:
                    continue
                extend(prefix + (X,), remaining - l)

    extend((), total_length)
    return out


# ---------------------------------------------------------------------------
# differentials

def bar_b(alg: TruncatedAlgebra, X: BarKey) -> dict[BarKey, Fraction]:
    """The bar differential on one bar word: merge adjacent entries with the
    sign (−1)^{|𝔰a_{<i+1}|+1}; merged entries landing in S are projected out."""
    out: dict[BarKey, Fraction] = {}
    for i in range(len(X) - 1):
        s = sign_pow(sum(w.degree - 1 for w in X[: i + 1]) + 1)
        for w, c in alg.mult(X[i], X[i + 1]).terms.items():
            if w.length == 0:
                continue
            key = X[:i] + (w,) + X[i + 2 :]
            out[key] = out.get(key, Fraction(0)) + s * c
    return {k: v for k, v in out.items() if v}


def bar_differential(
    alg: TruncatedAlgebra, x: dict[BarKey, Fraction]
) -> dict[BarKey, Fraction]:
    out: dict[BarKey, Fraction] = {}
    for X, c in x.items():
        for key, ci in bar_b(alg, X).items():
            nc = out.get(key, Fraction(0)) + c * ci
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
    return out


def cobar_differential(
    alg: TruncatedAlgebra, x: dict[CobarKey, Fraction]
) -> dict[CobarKey, Fraction]:
    """The total cobar differential: the bar differential inside each letter
    with sign (−1)^{|𝔰⁻¹c_{<i}|+1}, plus deconcatenation of each letter with
    sign (−1)^{|𝔰⁻¹c_{<i}|+|𝔰⁻¹c_{i1}|}."""
    out: dict[CobarKey, Fraction] = {}

    def add(key: CobarKey, c: Fraction) -> None:
        if not c:
            return
        nc = out.get(key, Fraction(0)) + c
        if nc:
            out[key] = nc
        else:
            out.pop(key, None)

    for K, c in x.items():
        prefix_deg = 0
        for i, X in enumerate(K):
            s_inner = sign_pow(prefix_deg + 1)
            for merged, ci in bar_b(alg, X).items():
                add(K[:i] + (merged,) + K[i + 1 :], c * ci * s_inner)
            for j in range(1, len(X)):
                left, right = X[:j], X[j:]
                s_split = sign_pow(prefix_deg + letter_degree(left))
                add(K[:i] + (left, right) + K[i + 1 :], c * s_split)
            prefix_deg += letter_degree(X)
    return out


def check_square_zero(alg: TruncatedAlgebra, max_length: int) -> Report:
    """(bar d)² = 0 and (cobar d)² = 0 on the full truncated bases."""
    report = Report(
        "square-zero", params={"algebra": alg.name, "max_length": max_length}
    )
    bad_bar: list[str] = []
    n_bar = 0
    for l in range(1, max_length + 1):
        for X in bar_words(alg, l):
            n_bar += 1
            dd = bar_differential(alg, bar_differential(alg, {X: Fraction(1)}))
            if dd:
                bad_bar.append(_bar_str(X))
    report.add(
        f"bar differential squares to zero on {n_bar} words", not bad_bar, bad_bar[:5]
    )
    bad_cobar: list[str] = []
    n_cobar = 0
    for l in range(1, max_length + 1):
        for K in cobar_basis(alg, l):
            n_cobar += 1
            dd = cobar_differential(alg, cobar_differential(alg, {K: Fraction(1)}))
            if dd:
                bad_cobar.append(_cobar_str(K))
    report.add(
        f"cobar differential squares to zero on {n_cobar} monomials",
        not bad_cobar,
        bad_cobar[:5],
    )
    return report


# ---------------------------------------------------------------------------
# resolution check

def check_resolution(
    alg: TruncatedAlgebra, max_length: int, window: int | None = None
) -> Report:
    """Blockwise cohomology of the cobar-of-bar complex: the degree-0 part at
    each path length must have the algebra's dimension and every lower degree
    must vanish.  The differential preserves path length, so each computed
    block is fully represented and the answer is exact."""
    report = Report(
        "resolution", params={"algebra": alg.name, "max_length": max_length}
    )
    top = max_length if window is None else min(max_length, window)
    bad: list[str] = []
    for l in range(1, top + 1):
        by_degree: dict[int, list[CobarKey]] = {}
        for K in cobar_basis(alg, l):
            by_degree.setdefault(cobar_degree(K), []).append(K)
        degrees = sorted(by_degree)
        ranks: dict[int, int] = {}
        kernels: dict[int, int] = {}
        for m in degrees:
            solver = KernelSolver(out_sort=_cobar_sort, in_sort=_cobar_sort)
            for K in by_degree[m]:
                solver.feed(K, cobar_differential(alg, {K: Fraction(1)}))
            ranks[m] = solver.image_rank()
            kernels[m] = len(by_degree[m]) - ranks[m]
        for m in degrees:
            h = kernels[m] - ranks.get(m - 1, 0)
            want = alg.dim(l) if m == 0 else 0
            if h != want:
                bad.append(f"length {l}, degree {m}: H = {h}, expected {want}")
    report.add("counit is a quasi-isomorphism on all computed blocks", not bad, bad[:8])
    if max_length > top:
        report.add_indeterminate(
            "blocks beyond the window",
            f"path lengths {top + 1}..{max_length} not computed",
        )
    return report


# ---------------------------------------------------------------------------
# Connes complex / reduced cyclic homology

def _cyclic_tuples(alg: TruncatedAlgebra, n: int, total_length: int) -> list[tuple]:
    """Canonical representatives of cyclically-composable (n+1)-tuples of basis
    words (idempotent entries allowed) of the given total path length, modulo
    the signed cyclic rotation; torsion classes are dropped."""
    tuples: list[tuple] = []

    def extend(prefix: tuple, remaining: int) -> None:
        if len(prefix) == n + 1:
            if remaining == 0 and prefix[-1].source == prefix[0].target:
                tuples.append(prefix)
            return
        for l in range(0, remaining + 1):
            for w in alg.basis.get(l, ()):
                if prefix and prefix[-1].source != w.target:
                    continue
                extend(prefix + (w,), remaining - l)

    extend((), total_length)
    out: list[tuple] = []
    for t in tuples:
        rep, sgn = _tuple_class(t)
        if rep == t and sgn == 1:
            out.append(t)
    return out


def _tuple_class(t: tuple) -> tuple[tuple | None, int]:
    """Canonical representative and sign under τ(u₀,…,u_n) = (−1)^n (u_n, u₀, …);
    (None, 0) for rotation-torsion classes."""
    n = len(t) - 1
    tau_sign = sign_pow(n)
    seen: dict[tuple, int] = {}
    best: tuple | None = None
    best_key: tuple | None = None
    cur, sgn = t, 1
    for _ in range(n + 1):
        if cur in seen:
            if seen[cur] != sgn:
                return None, 0
        else:
            seen[cur] = sgn
            key = tuple(w.sort_key() for w in cur)
            if best_key is None or key < best_key:
                best, best_key = cur, key
        cur = (cur[-1],) + cur[:-1]
        sgn *= tau_sign
    return best, seen[best]


def _tuple_boundary(alg: TruncatedAlgebra, t: tuple) -> dict[tuple, Fraction]:
    """The cyclic Hochschild boundary, projected to canonical tuple classes."""
    n = len(t) - 1
    out: dict[tuple, Fraction] = {}
    if n == 0:
        return out

    def add(parts: tuple, c: Fraction) -> None:
        rep, sgn = _tuple_class(parts)
        if rep is None or not c:
            return
        nc = out.get(rep, Fraction(0)) + sgn * c
        if nc:
            out[rep] = nc
        else:
            out.pop(rep, None)

    for i in range(n):
        for w, c in alg.mult(t[i], t[i + 1]).terms.items():
            add(t[:i] + (w,) + t[i + 2 :], sign_pow(i) * c)
    for w, c in alg.mult(t[n], t[0]).terms.items():
        add((w,) + t[1:n], sign_pow(n) * c)
    return out


def _tuple_sort(t: tuple) -> tuple:
    return tuple(w.sort_key() for w in t)


def connes_homology(
    alg: TruncatedAlgebra, max_length: int, window: tuple[int, int] = (0, 3)
) -> dict[tuple[int, int], int]:
    """Reduced cyclic homology dimensions per (homological degree n, path
    length ≥ 1): homology of the complex of cyclic word tuples modulo the
    signed cyclic operator.  Positive-length blocks carry no contribution from
    the vertex subalgebra, so they compute the reduced theory directly, and
    each block is finite and exact."""
    n0, n1 = window
    table: dict[tuple[int, int], int] = {}
    for l in range(1, max_length + 1):
        ranks: dict[int, int] = {}
        kernels: dict[int, int] = {}
        for n in range(max(n0 - 1, 0), n1 + 2):
            reps = _cyclic_tuples(alg, n, l)
            solver = KernelSolver(out_sort=_tuple_sort, in_sort=_tuple_sort)
            for t in reps:
                solver.feed(t, _tuple_boundary(alg, t))
            ranks[n] = solver.image_rank()
            kernels[n] = len(reps) - ranks[n]
        for n in range(n0, n1 + 1):
            table[(n, l)] = kernels.get(n, 0) - ranks.get(n + 1, 0)
    return table


def hc0_basis(alg: TruncatedAlgebra, max_length: int) -> dict[int, list[CyclicElement]]:
    """Representatives of the degree-zero reduced cyclic classes per length:
    necklace classes of closed words modulo the image of the first boundary."""
    out: dict[int, list[CyclicElement]] = {}
    for l in range(1, max_length + 1):
        boundaries = RowReducer(lambda w: w.sort_key())
        for t in _cyclic_tuples(alg, 1, l):
            row: dict[Word, Fraction] = {}
            for (w,), c in _tuple_boundary(alg, t).items():
                nc = row.get(w, Fraction(0)) + c
                if nc:
                    row[w] = nc
                else:
                    row.pop(w, None)
            if row:
                boundaries.add(row)
        span = RowReducer(lambda w: w.sort_key())
        reps: list[CyclicElement] = []
        for (w,) in _cyclic_tuples(alg, 0, l):
            res = boundaries.reduce({w: Fraction(1)})
            if res and span.add(res):
                reps.append(CyclicElement({w: Fraction(1)}))
        out[l] = reps
    return out


# ---------------------------------------------------------------------------
# the shifted double bracket on 𝔰-letters

S_PREFIX = "s"


def _s_name(w: Word) -> str:
    if w.length == 0:
        return f"{S_PREFIX}(e@{w.vertex})"
    return f"{S_PREFIX}({'.'.join(g.name for g in w.gens)})"


@dataclass
class ShiftedAlgebra:
    """The shift of a truncated algebra: one letter 𝔰w per basis word
    (idempotents included), of degree |w| − d, carrying the conjugated double
    bracket and the shifted multiplication 𝔰u ∗ 𝔰v = (−1)^{d|u|+d} 𝔰(uv)."""

    base: TruncatedAlgebra
    d: int
    spec: DoubleBracketSpec
    letters: dict[Word, Gen]
    unshift: dict[str, Word]

    def letter(self, w: Word) -> Gen:
        return self.letters[w]


def shift_bracket(
    alg: TruncatedAlgebra, d: int = 1, max_len: int | None = None
) -> ShiftedAlgebra:
    """Transport the double bracket to the d-fold shift:
    ⟦𝔰u, 𝔰v⟧ = Σ (−1)^{d(|u|−d) + d|p|} 𝔰p ⊗ 𝔰q over the terms p ⊗ q of
    ⟦u, v⟧.  The two Koszul exponents come from commuting the desuspensions
    past the arguments and the suspensions past the first output factor; the
    bracket degree does not change."""
    if alg.spec is None:
        raise ValueError("shift needs an algebra with double bracket data")
    n = alg.spec.degree
    words = alg.words(max_len)
    letters = {
        w: Gen(_s_name(w), source=w.source, target=w.target, degree=w.degree - d)
        for w in words
    }
    top = max((w.length for w in words), default=0)
    table: dict[tuple[str, str], TensorElement] = {}
    for u in words:
        for v in words:
            if u.length == 0 or v.length == 0:
                continue
            if u.length + v.length > top + 2:
                # bracket components would leave the letter alphabet
                continue
            val = alg.dbl(u, v)
            if val.is_zero():
                continue
            terms: dict[tuple[Word, Word], Fraction] = {}
            for (p, q), c in val.terms.items():
                s = sign_pow(d * (u.degree - d) + d * p.degree)
                key = (genword(letters[p]), genword(letters[q]))
                terms[key] = terms.get(key, Fraction(0)) + s * c
            entry = TensorElement(terms)
            if not entry.is_zero():
                table[(letters[u].name, letters[v].name)] = entry
    spec = DoubleBracketSpec(
        degree=n,
        vertices=alg.vertices,
        generators=tuple(letters.values()),
        table=table,
    )
    return ShiftedAlgebra(
        base=alg,
        d=d,
        spec=spec,
        letters=letters,
        unshift={g.name: w for w, g in letters.items()},
    )


def shifted_mult(sh: ShiftedAlgebra, u: Word, v: Word) -> NCElement:
    """𝔰u ∗ 𝔰v = (−1)^{d|u|+d} 𝔰(uv) as an element over 𝔰-letters."""
    s = sign_pow(sh.d * u.degree + sh.d)
    out = NCElement.zero()
    for w, c in sh.base.mult(u, v).terms.items():
        out = out + NCElement.from_word(genword(sh.letter(w)), s * c)
    return out


def check_shift_invariants(sh: ShiftedAlgebra, samples: int = 30, seed: int = 0) -> Report:
    """Double Jacobi on 𝔰-letter triples, and the twisted Leibniz identity:
    relative to the ordinary graded Leibniz rule for a degree-n bracket over
    the shifted multiplication, both terms acquire the twist coming from
    commuting the suspensions past the product:

        ⟦𝔰u, 𝔰v ∗ 𝔰w⟧ = (−1)^{d(|u|+n+d)} (id ⊗ ∗)(⟦𝔰u, 𝔰v⟧ ⊗ 𝔰w)
                        + (−1)^{|v|(|u|+n+d)} (∗ ⊗ id)(𝔰v ⊗ ⟦𝔰u, 𝔰w⟧)."""
    report = Report(
        "shift-bracket", params={"d": sh.d, "samples": samples, "seed": seed}
    )
    n = sh.spec.degree
    d = sh.d
    rng = random.Random(seed)
    words = [w for w in sh.letters if w.length >= 1]
    if not words:
        raise ValueError("shifted algebra has no positive-length words")
    top = max(w.length for w in words)

    bad_j: list[str] = []
    for _ in range(samples):
        u, v, w = (rng.choice(words) for _ in range(3))
        if u.length + v.length + w.length > top + 2:
            continue
        t = triple_bracket(
            sh.spec,
            NCElement.generator(sh.letter(u)),
            NCElement.generator(sh.letter(v)),
            NCElement.generator(sh.letter(w)),
        )
        if not t.is_zero():
            bad_j.append(f"({u}, {v}, {w})")
    report.add("double Jacobi on sampled letter triples", not bad_j, bad_j[:5])

    bad_l: list[str] = []
    for _ in range(samples):
        u, v, w = (rng.choice(words) for _ in range(3))
        if v.length + w.length > top or u.length + v.length + w.length > top + 2:
            continue
        su = NCElement.generator(sh.letter(u))
        lhs = TensorElement.zero()
        for m, cm in shifted_mult(sh, v, w).terms.items():
            lhs = lhs + cm * eval_double(sh.spec, su, NCElement.from_word(m))
        rhs = TensorElement.zero()
        s1 = sign_pow(d * (u.degree + n + d))
        for (P, Q), c in eval_double(
            sh.spec, su, NCElement.generator(sh.letter(v))
        ).terms.items():
            q = sh.unshift[Q.gens[0].name]
            rhs = rhs + TensorElement.of(
                NCElement.from_word(P, c * s1 * sign_pow(d * P.degree)),
                shifted_mult(sh, q, w),
            )
        s2 = sign_pow(v.degree * (u.degree + n + d))
        for (P, Q), c in eval_double(
            sh.spec, su, NCElement.generator(sh.letter(w))
        ).terms.items():
            p = sh.unshift[P.gens[0].name]
            rhs = rhs + TensorElement.of(
                shifted_mult(sh, v, p).scale(c * s2), NCElement.from_word(Q)
            )
        if lhs != rhs:
            bad_l.append(f"({u}, {v}, {w})")
    report.add("twisted Leibniz over the shifted multiplication", not bad_l, bad_l[:5])
    return report


# ---------------------------------------------------------------------------
# bar model: 𝔰-letters separated by t, with the separator extension

@dataclass
class BarModel:
    """The shifted letters together with the square-zero separator extension:
    bar words live as strictly alternating words 𝔰x₁ t 𝔰x₂ t … t 𝔰x_k over
    this algebra, and the extended double bracket pairs 𝔰-letters only (the
    separator brackets trivially against them)."""

    shifted: ShiftedAlgebra
    spec: DoubleBracketSpec
    t_letters: dict[str, Gen]
    _t_names: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_t_names", frozenset(g.name for g in self.t_letters.values())
        )

    @property
    def degree(self) -> int:
        return self.spec.degree

    def bar_to_word(self, X: BarKey) -> Word:
        gens: list[Gen] = []
        for i, w in enumerate(X):
            if i:
                gens.append(self.t_letters[w.target])
            gens.append(self.shifted.letter(w))
        return Word(tuple(gens))

    def word_to_items(self, w: Word) -> list[tuple[str, object]]:
        """An alternating word as a list of ("s", base word) / ("t", vertex)."""
        items: list[tuple[str, object]] = []
        for g in w.gens:
            if g.name in self._t_names:
                items.append(("t", g.source))
            else:
                items.append(("s", self.shifted.unshift[g.name]))
        return items

    def items_to_word(self, items: list[tuple[str, object]]) -> Word:
        gens: list[Gen] = []
        for tag, payload in items:
            if tag == "t":
                gens.append(self.t_letters[payload])
            else:
                gens.append(self.shifted.letter(payload))
        return Word(tuple(gens))


def bar_model(alg: TruncatedAlgebra, max_len: int | None = None) -> BarModel:
    """Shift by one and adjoin the separator with the trivial-derivation
    extension (the separator still brackets against itself)."""
    sh = shift_bracket(alg, d=1, max_len=max_len)
    extended = extend_double(sh.spec, zero_double_derivation(), check=False)
    gens = extended.generator_map()
    t_letters = {}
    for v in sh.spec.vertices:
        name = "t" if len(sh.spec.vertices) == 1 else f"t_{v}"
        t_letters[v] = gens[name]
    return BarModel(shifted=sh, spec=extended, t_letters=t_letters)


def bar_word_b(bm: BarModel, x: NCElement) -> NCElement:
    """The bar differential transported to alternating words: remove each
    separator and multiply its neighbors with the shifted multiplication, with
    the sign (−1)^{|𝔰a_{<i+1}|+1}.  Letters on idempotents are kept, so this
    is the full (unnormalized) differential."""
    sh = bm.shifted
    out = NCElement.zero()
    for w, c in x.terms.items():
        items = bm.word_to_items(w)
        for k, (tag, _) in enumerate(items):
            if tag != "t":
                continue
            if (
                k == 0
                or k == len(items) - 1
                or items[k - 1][0] != "s"
                or items[k + 1][0] != "s"
            ):
                raise ValueError(f"word {w} is not strictly alternating")
            prefix = sum(
                bw.degree - 1 for t2, bw in items[:k] if t2 == "s"
            )
            s = sign_pow(prefix + 1)
            merged = shifted_mult(sh, items[k - 1][1], items[k + 1][1])
            for mw, mc in merged.terms.items():
                new_items = (
                    items[: k - 1]
                    + [("s", sh.unshift[mw.gens[0].name])]
                    + items[k + 2 :]
                )
                out = out + NCElement.from_word(
                    bm.items_to_word(new_items), c * s * mc
                )
    return out


def check_bar_compatibility(
    bm: BarModel, samples: int = 30, seed: int = 0, max_weight: int = 3
) -> Report:
    """The bar differential is a derivation of the extended double bracket:
    for a single-letter first argument (whose own differential vanishes),

        b ⟦𝔰x, Y⟧ = (−1)^{|𝔰x|+n} ⟦𝔰x, bY⟧,

    with b acting on tensors through both factors with the Koszul prefix
    sign."""
    report = Report(
        "bar-compatibility",
        params={"samples": samples, "seed": seed, "max_weight": max_weight},
    )
    sh = bm.shifted
    n = bm.degree
    rng = random.Random(seed)
    words = [w for w in sh.letters if w.length >= 1]
    top = max(w.length for w in words)
    bad: list[str] = []
    tried = 0
    for _ in range(samples):
        weight = rng.randint(2, max_weight)
        budget = max(1, (top - 1) // weight)
        pool = [w for w in words if w.length <= budget]
        entries: list[Word] = []
        for _ in range(weight):
            cands = (
                pool
                if not entries
                else [w for w in pool if w.target == entries[-1].source]
            )
            if not cands:
                break
            entries.append(rng.choice(cands))
        if len(entries) < 2:
            continue
        used = sum(e.length for e in entries)
        xs = [w for w in words if w.length <= top - used]
        if not xs:
            continue
        x = rng.choice(xs)
        Y = tuple(entries)
        tried += 1
        sx = NCElement.generator(sh.letter(x))
        yw = NCElement.from_word(bm.bar_to_word(Y))
        br = eval_double(bm.spec, sx, yw)
        lhs = TensorElement.zero()
        for (p, q), c in br.terms.items():
            lhs = lhs + TensorElement.of(
                bar_word_b(bm, NCElement.from_word(p)), NCElement.from_word(q)
            ).scale(c)
            lhs = lhs + TensorElement.of(
                NCElement.from_word(p), bar_word_b(bm, NCElement.from_word(q))
            ).scale(c * sign_pow(p.degree))
        rhs = eval_double(bm.spec, sx, bar_word_b(bm, yw)).scale(
            sign_pow(sh.letter(x).degree + n)
        )
        if lhs != rhs:
            bad.append(f"(s{x}, {_bar_str(Y)})")
    report.add(
        f"differential is a bracket derivation on {tried} sampled pairs",
        not bad,
        bad[:5],
    )
    return report


# ---------------------------------------------------------------------------
# the bracket on cobar letters and the Lie bracket on degree-zero classes

XI_PREFIX = "x"


def _xi_name(X: BarKey) -> str:
    return f"{XI_PREFIX}[" + ";".join(str(w) for w in X) + "]"


@dataclass
class CobarBracket:
    """The double bracket transported to weight-one cobar letters.  The two
    suspension transports cancel against the shift signs exactly, so the
    letter table is the base table with components re-wrapped: a component
    word becomes a weight-one letter and an idempotent component becomes the
    matching unit of the cobar path algebra."""

    alg: TruncatedAlgebra
    spec: DoubleBracketSpec
    letters: dict[Word, Gen]
    letters_inv: dict[str, Word]

    def lift(self, c: CyclicElement, coarse: bool = False) -> CyclicElement:
        """A degree-zero cobar representative of a necklace class: one
        weight-one letter per generator of each word, or one per whole word
        when ``coarse`` (a coarser, homologous choice)."""
        out: dict[Word, Fraction] = {}
        for w, coeff in c.items():
            if coarse:
                key = Word((self.letters[w],))
            else:
                key = Word(tuple(self.letters[genword(g)] for g in w.gens))
            out[key] = out.get(key, Fraction(0)) + coeff
        return CyclicElement(out)

    def concatenate(self, c: CyclicElement) -> CyclicElement:
        """The inverse identification: multiply out the letters of each cobar
        necklace and take the class in the base algebra."""
        total = NCElement.zero()
        for w, coeff in c.items():
            acc = NCElement.from_word(idword(w.target))
            for g in w.gens:
                acc = acc * NCElement.from_word(self.letters_inv[g.name])
            total = total + acc.scale(coeff)
        return self.alg.cyclic_class(total)

    def bracket(self, c1: CyclicElement, c2: CyclicElement) -> CyclicElement:
        """The Lie bracket of two degree-zero classes, computed on cobar
        representatives and read back as a necklace class."""
        lifted = project_loday_cyclic(self.spec, self.lift(c1), self.lift(c2))
        return self.concatenate(lifted)


def cobar_bracket(alg: TruncatedAlgebra) -> CobarBracket:
    if alg.spec is None:
        raise ValueError("cobar bracket needs an algebra with double bracket data")
    n = alg.spec.degree
    words = [w for w in alg.words() if w.length >= 1]
    letters = {
        w: Gen(_xi_name((w,)), source=w.source, target=w.target, degree=w.degree)
        for w in words
    }
    top = max((w.length for w in words), default=0)
    table: dict[tuple[str, str], TensorElement] = {}
    for u in words:
        for v in words:
            if u.length + v.length > top + 2:
                # bracket components would leave the letter alphabet
                continue
            val = alg.dbl(u, v)
            if val.is_zero():
                continue
            terms: dict[tuple[Word, Word], Fraction] = {}
            for (p, q), c in val.terms.items():
                wp = Word((letters[p],)) if p.length else idword(p.vertex)
                wq = Word((letters[q],)) if q.length else idword(q.vertex)
                terms[(wp, wq)] = terms.get((wp, wq), Fraction(0)) + c
            entry = TensorElement(terms)
            if not entry.is_zero():
                table[(letters[u].name, letters[v].name)] = entry
    spec = DoubleBracketSpec(
        degree=n,
        vertices=alg.vertices,
        generators=tuple(letters.values()),
        table=table,
    )
    return CobarBracket(
        alg=alg,
        spec=spec,
        letters=letters,
        letters_inv={g.name: w for w, g in letters.items()},
    )


def hc_lie_bracket(
    alg: TruncatedAlgebra, c1: CyclicElement, c2: CyclicElement
) -> CyclicElement:
    """The Lie bracket on degree-zero reduced cyclic classes, through cobar
    representatives."""
    return cobar_bracket(alg).bracket(c1, c2)


def check_hc_bracket(
    alg: TruncatedAlgebra,
    oracle: Callable[[CyclicElement, CyclicElement], CyclicElement] | None = None,
    samples: int = 50,
    seed: int = 0,
    max_len: int | None = None,
) -> Report:
    """Antisymmetry, Jacobi, representative independence (coarse versus fine
    lifts) and, when an oracle bracket is supplied, agreement with it on
    sampled degree-zero classes."""
    report = Report(
        "hc-bracket", params={"algebra": alg.name, "samples": samples, "seed": seed}
    )
    cb = cobar_bracket(alg)
    rng = random.Random(seed)
    top = max_len if max_len is not None else max(1, alg.bound // 2)
    classes: list[CyclicElement] = []
    seen = set()
    for w in alg.words(top):
        if w.length < 1 or not w.closed:
            continue
        c = alg.cyclic_class(NCElement.from_word(w))
        if not c.is_zero() and c not in seen:
            seen.add(c)
            classes.append(c)
    if not classes:
        report.add("no nonzero degree-zero classes: identities hold vacuously", True)
        return report

    def length_of(c: CyclicElement) -> int:
        return max(w.length for w, _ in c.items())

    bad_anti: list[str] = []
    bad_rep: list[str] = []
    bad_orc: list[str] = []
    tried = 0
    for _ in range(samples):
        x, y = rng.choice(classes), rng.choice(classes)
        if length_of(x) + length_of(y) > alg.bound:
            continue
        tried += 1
        b1 = cb.bracket(x, y)
        b2 = cb.bracket(y, x)
        if b1 + b2 != CyclicElement.zero():
            bad_anti.append(f"({x}, {y})")
        coarse = cb.concatenate(
            project_loday_cyclic(cb.spec, cb.lift(x, coarse=True), cb.lift(y))
        )
        if coarse != b1:
            bad_rep.append(f"({x}, {y})")
        if oracle is not None:
            want = oracle(x, y)
            if want != b1:
                bad_orc.append(f"({x}, {y}): got {b1}, oracle {want}")
    report.add(f"antisymmetry on {tried} sampled class pairs", not bad_anti, bad_anti[:5])
    report.add(
        "bracket is independent of the cobar representative", not bad_rep, bad_rep[:5]
    )
    if oracle is not None:
        report.add("agreement with the oracle bracket", not bad_orc, bad_orc[:5])

    bad_jac: list[str] = []
    tried_j = 0
    for _ in range(samples):
        x, y, z = (rng.choice(classes) for _ in range(3))
        if length_of(x) + length_of(y) + length_of(z) > alg.bound:
            continue
        tried_j += 1
        j = (
            cb.bracket(x, cb.bracket(y, z))
            + cb.bracket(y, cb.bracket(z, x))
            + cb.bracket(z, cb.bracket(x, y))
        )
        if j != CyclicElement.zero():
            bad_jac.append(f"({x}, {y}, {z})")
    report.add(f"Jacobi on {tried_j} sampled class triples", not bad_jac, bad_jac[:5])
    return report
