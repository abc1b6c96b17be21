"""Exact graded path-algebra arithmetic over the rationals.

The base ring is S = ⊕ Q e_i, one orthogonal idempotent per vertex.  Words are
composable sequences of generators read right to left: in a word g1 g2 ... gk
the generator gk acts first, composability means s(g_i) = t(g_{i+1}), and the
product x·y is "x after y" (nonzero only when s(x) = t(y)).  All coefficients
are arbitrary-precision rationals; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


Scalar = Fraction | int


def _frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def koszul_sign(degrees: list[int], perm: list[int]) -> int:
    """Sign of rearranging homogeneous factors: position j of the output is
    filled with input factor perm[j].  Every signed formula in this package
    routes through this one routine.
    """
    sign = 1
    for j in range(len(perm)):
        for k in range(j + 1, len(perm)):
            if perm[j] > perm[k] and degrees[perm[j]] % 2 and degrees[perm[k]] % 2:
                sign = -sign
    return sign


def sign_pow(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True)
class Gen:
    """A generator of a path algebra: an arrow (or formal letter) with a
    source vertex, a target vertex and a cohomological degree."""

    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True)
class Word:
    """A composable path.  The empty word is the idempotent at ``vertex``."""

    gens: tuple[Gen, ...]
    vertex: str | None = None

    def __post_init__(self) -> None:
        if not self.gens and self.vertex is None:
            raise ValueError("empty word needs a basepoint vertex")
        for i in range(len(self.gens) - 1):
            if self.gens[i].source != self.gens[i + 1].target:
                raise ValueError(
                    f"non-composable word: {self.gens[i].name} after {self.gens[i+1].name}"
                )

    @property
    def source(self) -> str:
        return self.gens[-1].source if self.gens else self.vertex  # type: ignore[return-value]

    @property
    def target(self) -> str:
        return self.gens[0].target if self.gens else self.vertex  # type: ignore[return-value]

    @property
    def degree(self) -> int:
        return sum(g.degree for g in self.gens)

    @property
    def length(self) -> int:
        return len(self.gens)

    @property
    def closed(self) -> bool:
        return self.source == self.target

    def sort_key(self) -> tuple:
        return (self.length, tuple(g.name for g in self.gens), self.vertex or "")

    def __str__(self) -> str:
        if not self.gens:
            return f"e({self.vertex})"
        return ".".join(g.name for g in self.gens)


def idword(vertex: str) -> Word:
    return Word((), vertex)


def genword(g: Gen) -> Word:
    return Word((g,))


def compose(u: Word, v: Word) -> Word | None:
    """Concatenation u·v (u after v); None when the endpoints do not match."""
    if u.source != v.target:
        return None
    if not u.gens:
        return v
    if not v.gens:
        return u
    return Word(u.gens + v.gens)


class NCElement:
    """A finite rational linear combination of path words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, Fraction] | None = None):
        self.terms: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[w] = _frac(c)

    @staticmethod
    def zero() -> "NCElement":
        return NCElement()

    @staticmethod
    def from_word(w: Word, c: Scalar = 1) -> "NCElement":
        return NCElement({w: _frac(c)})

    @staticmethod
    def idempotent(vertex: str) -> "NCElement":
        return NCElement.from_word(idword(vertex))

    @staticmethod
    def generator(g: Gen) -> "NCElement":
        return NCElement.from_word(genword(g))

    @staticmethod
    def unit(vertices: Iterable[str]) -> "NCElement":
        return NCElement({idword(v): Fraction(1) for v in vertices})

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({w.degree for w in self.terms}) <= 1

    @property
    def degree(self) -> int:
        degs = {w.degree for w in self.terms}
        if len(degs) > 1:
            raise ValueError("degree of a non-homogeneous element")
        return degs.pop() if degs else 0

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.terms.items())

    def __add__(self, other: "NCElement") -> "NCElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return NCElement(out)

    def __sub__(self, other: "NCElement") -> "NCElement":
        return self + (-other)

    def __neg__(self) -> "NCElement":
        return NCElement({w: -c for w, c in self.terms.items()})

    def scale(self, c: Scalar) -> "NCElement":
        c = _frac(c)
        return NCElement({w: c * x for w, x in self.terms.items()})

    def __rmul__(self, c: Scalar) -> "NCElement":
        return self.scale(c)

    def __mul__(self, other: "NCElement") -> "NCElement":
        out: dict[Word, Fraction] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = compose(u, v)
                if w is not None:
                    out[w] = out.get(w, Fraction(0)) + cu * cv
        return NCElement(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def project_vertex(self, vertex: str) -> "NCElement":
        """e_i · x · e_i : the block of closed words based at ``vertex``."""
        return NCElement(
            {w: c for w, c in self.terms.items() if w.source == vertex and w.target == vertex}
        )

    def max_length(self) -> int:
        return max((w.length for w in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=Word.sort_key):
            c = self.terms[w]
            parts.append(f"{c}*{w}" if c != 1 else str(w))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCElement({self})"


class TensorElement:
    """A rational combination of word pairs u ⊗ v (tensor over Q)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Word, Word], Fraction] | None = None):
        self.terms: dict[tuple[Word, Word], Fraction] = {}
        if terms:
            for p, c in terms.items():
                if c:
                    self.terms[p] = _frac(c)

    @staticmethod
    def zero() -> "TensorElement":
        return TensorElement()

    @staticmethod
    def from_pair(u: Word, v: Word, c: Scalar = 1) -> "TensorElement":
        return TensorElement({(u, v): _frac(c)})

    @staticmethod
    def of(x: NCElement, y: NCElement) -> "TensorElement":
        out: dict[tuple[Word, Word], Fraction] = {}
        for u, cu in x.terms.items():
            for v, cv in y.terms.items():
                out[(u, v)] = out.get((u, v), Fraction(0)) + cu * cv
        return TensorElement(out)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[tuple[Word, Word], Fraction]]:
        return iter(self.terms.items())

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, Fraction(0)) + c
        return TensorElement(out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __neg__(self) -> "TensorElement":
        return TensorElement({p: -c for p, c in self.terms.items()})

    def scale(self, c: Scalar) -> "TensorElement":
        c = _frac(c)
        return TensorElement({p: c * x for p, x in self.terms.items()})

    def __rmul__(self, c: Scalar) -> "TensorElement":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def lmul(self, x: NCElement) -> "TensorElement":
        """Outer left action: x · (u ⊗ v) = (x u) ⊗ v."""
        out: dict[tuple[Word, Word], Fraction] = {}
        for (u, v), c in self.terms.items():
            for wx, cx in x.terms.items():
                w = compose(wx, u)
                if w is not None:
                    out[(w, v)] = out.get((w, v), Fraction(0)) + c * cx
        return TensorElement(out)

    def rmul(self, y: NCElement) -> "TensorElement":
        """Outer right action: (u ⊗ v) · y = u ⊗ (v y)."""
        out: dict[tuple[Word, Word], Fraction] = {}
        for (u, v), c in self.terms.items():
            for wy, cy in y.terms.items():
                w = compose(v, wy)
                if w is not None:
                    out[(u, w)] = out.get((u, w), Fraction(0)) + c * cy
        return TensorElement(out)

    def tau(self) -> "TensorElement":
        """Koszul-signed factor swap: u ⊗ v ↦ (−1)^{|u||v|} v ⊗ u."""
        out: dict[tuple[Word, Word], Fraction] = {}
        for (u, v), c in self.terms.items():
            s = koszul_sign([u.degree, v.degree], [1, 0])
            out[(v, u)] = out.get((v, u), Fraction(0)) + s * c
        return TensorElement(out)

    def mult(self) -> NCElement:
        """Multiplication map m(u ⊗ v) = u v."""
        out: dict[Word, Fraction] = {}
        for (u, v), c in self.terms.items():
            w = compose(u, v)
            if w is not None:
                out[w] = out.get(w, Fraction(0)) + c
        return NCElement(out)

    def flip_mult(self) -> NCElement:
        """m ∘ τ with the Koszul swap sign."""
        return self.tau().mult()

    def map_factors(self, f, g) -> "TensorElement":
        """Apply word-to-element maps to the two factors (no extra signs)."""
        out = TensorElement.zero()
        for (u, v), c in self.terms.items():
            out = out + c * TensorElement.of(f(u), g(v))
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (u, v) in sorted(self.terms, key=lambda p: (p[0].sort_key(), p[1].sort_key())):
            c = self.terms[(u, v)]
            body = f"{u} # {v}"
            parts.append(body if c == 1 else f"{c}*({body})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TensorElement({self})"


class Tensor3:
    """A rational combination of word triples, the codomain of triple brackets."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Word, Word, Word], Fraction] | None = None):
        self.terms: dict[tuple[Word, Word, Word], Fraction] = {}
        if terms:
            for t, c in terms.items():
                if c:
                    self.terms[t] = _frac(c)

    @staticmethod
    def zero() -> "Tensor3":
        return Tensor3()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Tensor3") -> "Tensor3":
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, Fraction(0)) + c
        return Tensor3(out)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "Tensor3":
        c = _frac(c)
        return Tensor3({t: c * x for t, x in self.terms.items()})

    def __rmul__(self, c: Scalar) -> "Tensor3":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.terms == other.terms

    def permute(self, perm: list[int]) -> "Tensor3":
        """Signed permutation action: output slot j holds input factor perm[j]."""
        out: dict[tuple[Word, Word, Word], Fraction] = {}
        for t, c in self.terms.items():
            degs = [w.degree for w in t]
            s = koszul_sign(degs, perm)
            nt = (t[perm[0]], t[perm[1]], t[perm[2]])
            out[nt] = out.get(nt, Fraction(0)) + s * c
        return Tensor3(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda t: tuple(w.sort_key() for w in t)):
            c = self.terms[t]
            body = " # ".join(str(w) for w in t)
            parts.append(body if c == 1 else f"{c}*({body})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Tensor3({self})"


def inner_act(left: NCElement, tensor: TensorElement, right: NCElement) -> TensorElement:
    """Inner bimodule action x ∗ (u ⊗ v) ∗ y = (u y) ⊗ (x v)."""
    out: dict[tuple[Word, Word], Fraction] = {}
    for (u, v), c in tensor.terms.items():
        for wy, cy in right.terms.items():
            uy = compose(u, wy)
            if uy is None:
                continue
            for wx, cx in left.terms.items():
                xv = compose(wx, v)
                if xv is None:
                    continue
                p = (uy, xv)
                out[p] = out.get(p, Fraction(0)) + c * cx * cy
    return TensorElement(out)


class CyclicElement:
    """An element of the cyclic quotient A/(S + [A,A]): a rational combination
    of necklaces, closed words modulo signed rotation."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, Fraction] | None = None, canonical: bool = False):
        self.terms: dict[Word, Fraction] = {}
        if terms:
            if canonical:
                for w, c in terms.items():
                    if c:
                        self.terms[w] = _frac(c)
            else:
                for w, c in terms.items():
                    rep, sgn = necklace_class(w)
                    if rep is None or not c:
                        continue
                    nc = self.terms.get(rep, Fraction(0)) + sgn * _frac(c)
                    if nc:
                        self.terms[rep] = nc
                    else:
                        self.terms.pop(rep, None)

    @staticmethod
    def zero() -> "CyclicElement":
        return CyclicElement()

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.terms.items())

    def __add__(self, other: "CyclicElement") -> "CyclicElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            nc = out.get(w, Fraction(0)) + c
            if nc:
                out[w] = nc
            else:
                out.pop(w, None)
        return CyclicElement(out, canonical=True)

    def __sub__(self, other: "CyclicElement") -> "CyclicElement":
        return self + (-other)

    def __neg__(self) -> "CyclicElement":
        return CyclicElement({w: -c for w, c in self.terms.items()}, canonical=True)

    def scale(self, c: Scalar) -> "CyclicElement":
        c = _frac(c)
        return CyclicElement({w: c * x for w, x in self.terms.items()} if c else {}, canonical=True)

    def __rmul__(self, c: Scalar) -> "CyclicElement":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclicElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def lift(self) -> NCElement:
        """The canonical representative combination of words."""
        return NCElement(dict(self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=Word.sort_key):
            c = self.terms[w]
            parts.append(f"[{w}]" if c == 1 else f"{c}*[{w}]")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CyclicElement({self})"


def rotations(w: Word) -> Iterator[tuple[Word, int]]:
    """All rotations of a closed word with their Koszul rotation signs."""
    cur, sgn = w, 1
    for _ in range(max(w.length, 1)):
        yield cur, sgn
        if cur.length <= 1:
            return
        head, rest = cur.gens[0], cur.gens[1:]
        sgn *= sign_pow(head.degree * sum(g.degree for g in rest))
        cur = Word(rest + (head,))


def necklace_class(w: Word) -> tuple[Word | None, int]:
    """Canonical necklace representative and sign; (None, 0) when the class is
    zero (open words, idempotents, or rotation-torsion over Q)."""
    if w.length == 0 or not w.closed:
        return None, 0
    seen: dict[Word, int] = {}
    best: Word | None = None
    best_sign = 1
    for rot, sgn in rotations(w):
        if rot in seen:
            if seen[rot] != sgn:
                return None, 0
            continue
        seen[rot] = sgn
        if best is None or rot.sort_key() < best.sort_key():
            best, best_sign = rot, sgn
    return best, best_sign


def to_cyclic(x: NCElement) -> CyclicElement:
    """Projection A → A/(S + [A,A])."""
    return CyclicElement(dict(x.terms))
