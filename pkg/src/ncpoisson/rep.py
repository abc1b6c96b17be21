"""Representation schemes of path algebras at a dimension vector.

Every generator g becomes a matrix of commuting indeterminates g_{ij}
(i a row index at the target vertex, j a column index at the source vertex);
words expand by matrix composition.  A double bracket on the algebra induces
a Poisson bracket on the polynomial ring via

    {a_{ij}, b_{uv}} = {{a,b}}'_{uj} · {{a,b}}''_{iv},

the trace map sends necklaces to invariant polynomials and intertwines the
Lie and Poisson brackets, and the moment element becomes a classical moment
map whose entries generate the reduction ideal.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .dbracket import DoubleBracketSpec, eval_double, induced_loday, random_word
from .linalg import RowReducer
from .ncalg import CyclicElement, Gen, NCElement, Word, idword
from .report import Report

Var = tuple[str, int, int]
Monomial = tuple[Var, ...]


class PolyElement:
    """A polynomial with rational coefficients in commuting matrix-coefficient
    indeterminates.  Only the degree-0 (ordinary commutative) case is
    supported; graded signs never arise here."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @staticmethod
    def zero() -> "PolyElement":
        return PolyElement()

    @staticmethod
    def constant(c) -> "PolyElement":
        return PolyElement({(): Fraction(c)})

    @staticmethod
    def variable(v: Var) -> "PolyElement":
        return PolyElement({(v,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolyElement") -> "PolyElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return PolyElement(out)

    def __sub__(self, other: "PolyElement") -> "PolyElement":
        return self + (-other)

    def __neg__(self) -> "PolyElement":
        return PolyElement({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "PolyElement":
        c = Fraction(c)
        return PolyElement({m: c * x for m, x in self.terms.items()})

    def __rmul__(self, c) -> "PolyElement":
        return self.scale(c)

    def __mul__(self, other: "PolyElement") -> "PolyElement":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return PolyElement(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def partial(self, v: Var) -> "PolyElement":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            k = m.count(v)
            if not k:
                continue
            rest = list(m)
            rest.remove(v)
            rm = tuple(rest)
            out[rm] = out.get(rm, Fraction(0)) + k * c
        return PolyElement(out)

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v in m}

    def total_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            body = "*".join(f"{n}[{i},{j}]" for (n, i, j) in m) or "1"
            parts.append(body if c == 1 and m else f"{c}*{body}" if m else str(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyElement({self})"


Matrix = list


@dataclass(frozen=True)
class RepScheme:
    """Matrix-coefficient data at a dimension vector: d_v matrix rows/columns
    per vertex, one indeterminate g_{ij} per generator entry."""

    vertices: tuple[str, ...]
    generators: tuple[Gen, ...]
    dims: dict[str, int]

    def __post_init__(self) -> None:
        for g in self.generators:
            if g.degree != 0:
                raise ValueError("representation schemes support degree-0 generators only")
        for v in self.vertices:
            if self.dims.get(v, -1) < 0:
                raise ValueError(f"missing or negative dimension for vertex {v}")

    def gen_matrix(self, g: Gen) -> Matrix:
        rows, cols = self.dims[g.target], self.dims[g.source]
        return [
            [PolyElement.variable((g.name, i + 1, j + 1)) for j in range(cols)]
            for i in range(rows)
        ]

    def identity(self, vertex: str) -> Matrix:
        d = self.dims[vertex]
        return [
            [PolyElement.constant(1) if i == j else PolyElement.zero() for j in range(d)]
            for i in range(d)
        ]


def rep_scheme(spec: DoubleBracketSpec, dims: dict[str, int] | int) -> RepScheme:
    if isinstance(dims, int):
        dims = {v: dims for v in spec.vertices}
    return RepScheme(vertices=spec.vertices, generators=spec.generators, dims=dims)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[PolyElement.zero() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            if a[i][k].is_zero():
                continue
            for j in range(cols):
                out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def matrix_coefficients(scheme: RepScheme, w: Word) -> Matrix:
    """The matrix of a word: generator matrices composed in order, vertex
    idempotents as identity blocks."""
    if w.length == 0:
        return scheme.identity(w.vertex)
    out = scheme.gen_matrix(w.gens[0])
    for g in w.gens[1:]:
        out = _mat_mul(out, scheme.gen_matrix(g))
    return out


def coefficient(scheme: RepScheme, x: NCElement, i: int, j: int) -> PolyElement:
    """The (i,j) matrix entry of an element whose words share endpoints
    (1-based indices)."""
    out = PolyElement.zero()
    for w, c in x.terms.items():
        out = out + matrix_coefficients(scheme, w)[i - 1][j - 1].scale(c)
    return out


def trace(scheme: RepScheme, x: NCElement | CyclicElement) -> PolyElement:
    """Tr(x) = Σ_i x_{ii}, summed over closed words; open words trace to 0."""
    if isinstance(x, CyclicElement):
        x = x.lift()
    out = PolyElement.zero()
    for w, c in x.terms.items():
        if not w.closed:
            continue
        m = matrix_coefficients(scheme, w)
        for i in range(len(m)):
            out = out + m[i][i].scale(c)
    return out


def coordinate_bracket(
    spec: DoubleBracketSpec, scheme: RepScheme, a: Gen, i: int, j: int, b: Gen, u: int, v: int
) -> PolyElement:
    """{a_{ij}, b_{uv}} = {{a,b}}'_{uj} {{a,b}}''_{iv} (1-based indices)."""
    val = eval_double(spec, NCElement.generator(a), NCElement.generator(b))
    out = PolyElement.zero()
    for (p, q), c in val.terms.items():
        mp = matrix_coefficients(scheme, p)
        mq = matrix_coefficients(scheme, q)
        out = out + (mp[u - 1][j - 1] * mq[i - 1][v - 1]).scale(c)
    return out


def induced_poisson(
    spec: DoubleBracketSpec, scheme: RepScheme, f: PolyElement, g: PolyElement
) -> PolyElement:
    """The Poisson bracket on the representation scheme: generator-coordinate
    values extended as a biderivation."""
    gens = spec.generator_map()
    out = PolyElement.zero()
    for x in sorted(f.variables()):
        dfx = f.partial(x)
        if dfx.is_zero():
            continue
        for y in sorted(g.variables()):
            dgy = g.partial(y)
            if dgy.is_zero():
                continue
            base = coordinate_bracket(
                spec, scheme, gens[x[0]], x[1], x[2], gens[y[0]], y[1], y[2]
            )
            if not base.is_zero():
                out = out + dfx * dgy * base
    return out


def moment_matrix(scheme: RepScheme, w: NCElement) -> dict[str, Matrix]:
    """The classical moment map per vertex: μ(ε^{(v)}_{jk}) = (w_v)_{kj},
    returned as the matrix μ_v with μ_v[j][k] = (w_v)_{kj}."""
    out: dict[str, Matrix] = {}
    for v in scheme.vertices:
        d = scheme.dims[v]
        wv = NCElement(
            {word: c for word, c in w.terms.items() if word.source == v and word.target == v}
        )
        mat = [[PolyElement.zero() for _ in range(d)] for _ in range(d)]
        for word, c in wv.terms.items():
            m = matrix_coefficients(scheme, word)
            for j in range(d):
                for k in range(d):
                    mat[j][k] = mat[j][k] + m[k][j].scale(c)
        out[v] = mat
    return out


def check_poisson_axioms(
    spec: DoubleBracketSpec,
    scheme: RepScheme,
    exhaustive: bool = True,
    samples: int = 50,
    seed: int = 0,
) -> Report:
    """Antisymmetry and Jacobi of the induced bracket on generator
    coordinates: exhaustive over coordinate triples, or sampled."""
    report = Report(
        "rep-poisson-axioms",
        params={"dims": dict(scheme.dims), "exhaustive": exhaustive, "samples": samples},
    )
    coords: list[Var] = []
    for g in scheme.generators:
        for i in range(1, scheme.dims[g.target] + 1):
            for j in range(1, scheme.dims[g.source] + 1):
                coords.append((g.name, i, j))
    polys = {v: PolyElement.variable(v) for v in coords}

    def br(x: Var, y: Var) -> PolyElement:
        return induced_poisson(spec, scheme, polys[x], polys[y])

    bad_anti: list[str] = []
    for x, y in itertools.combinations_with_replacement(coords, 2):
        if not (br(x, y) + br(y, x)).is_zero():
            bad_anti.append(f"({x}, {y})")
    report.add("antisymmetry on coordinate pairs", not bad_anti, bad_anti[:5])

    if exhaustive:
        triples = itertools.combinations_with_replacement(coords, 3)
    else:
        rng = random.Random(seed)
        triples = [tuple(rng.choice(coords) for _ in range(3)) for _ in range(samples)]
    bad_jac: list[str] = []
    for x, y, z in triples:
        jac = (
            induced_poisson(spec, scheme, polys[x], br(y, z))
            + induced_poisson(spec, scheme, polys[y], br(z, x))
            + induced_poisson(spec, scheme, polys[z], br(x, y))
        )
        if not jac.is_zero():
            bad_jac.append(f"({x}, {y}, {z})")
    report.add("Jacobi identity on coordinate triples", not bad_jac, bad_jac[:5])
    return report


def check_trace_lie_morphism(
    spec: DoubleBracketSpec,
    scheme: RepScheme,
    samples: int = 100,
    seed: int = 0,
    max_length: int = 4,
) -> Report:
    """Tr{x,y} = {Tr x, Tr y} on sampled pairs of closed words."""
    report = Report(
        "trace-lie-morphism", params={"samples": samples, "seed": seed, "max_length": max_length}
    )
    rng = random.Random(seed)
    bad: list[str] = []
    tried = 0
    while tried < samples:
        wx = random_word(spec, rng, max_length, closed=True)
        wy = random_word(spec, rng, max_length, closed=True)
        if wx is None or wy is None:
            break
        tried += 1
        x, y = NCElement.from_word(wx), NCElement.from_word(wy)
        lhs = trace(scheme, induced_loday(spec, x, y))
        rhs = induced_poisson(spec, scheme, trace(scheme, x), trace(scheme, y))
        if lhs != rhs:
            bad.append(f"({wx}, {wy})")
    report.add(f"trace intertwines brackets on {tried} pairs", not bad, bad[:5])
    return report


def check_cube(
    spec: DoubleBracketSpec,
    w: NCElement,
    theta,
    dims: dict[str, int] | int,
    bound: int = 4,
    samples: int = 40,
    seed: int = 0,
) -> Report:
    """The commuting cube over a Hamiltonian algebra with a Poisson
    derivation: the three directions are extension by t, reduction modulo the
    moment element, and trace to the representation scheme.  Each of the six
    faces is checked as an exact identity of canonical representatives or
    polynomial cosets on seeded samples, inside the configured truncation."""
    from .extension import extend_double
    from .hamred import reduce as ham_reduce
    from .quiver import Quiver

    report = Report(
        "commutative-cube",
        params={"dims": dims if isinstance(dims, int) else dict(dims), "bound": bound,
                "samples": samples, "seed": seed},
    )
    ext = extend_double(spec, theta, check=False)
    base_scheme = rep_scheme(spec, dims)
    ext_scheme = rep_scheme(ext, dims)
    base_q = ham_reduce(Quiver(vertices=spec.vertices, arrows=spec.generators), w, bound, spec=spec)
    ext_q = ham_reduce(Quiver(vertices=ext.vertices, arrows=ext.generators), w, bound, spec=ext)

    all_vars = [
        (g.name, i + 1, j + 1)
        for g in ext.generators
        for i in range(ext_scheme.dims[g.target])
        for j in range(ext_scheme.dims[g.source])
    ]
    base_vars = [v for v in all_vars if v[0] in {g.name for g in spec.generators}]
    mu_entries = [
        e for mat in moment_matrix(base_scheme, w).values() for row in mat for e in row
        if not e.is_zero()
    ]
    ideal_base = PolyIdealSlice(mu_entries, base_vars, bound)
    ideal_ext = PolyIdealSlice(mu_entries, all_vars, bound)

    rng = random.Random(seed)
    max_len = max(1, min(4, bound))
    base_samples: list[NCElement] = []
    ext_samples: list[NCElement] = []
    for _ in range(samples):
        wb = random_word(spec, rng, max_len, closed=True)
        we = random_word(ext, rng, max_len, closed=True)
        if wb is not None:
            base_samples.append(NCElement.from_word(wb))
        if we is not None:
            ext_samples.append(NCElement.from_word(we))

    def face(name: str, pairs) -> None:
        bad = [witness for ok, witness in pairs if not ok]
        report.add(name, not bad, bad[:3])

    face(
        "extension then reduction equals reduction then extension",
        [
            (
                ext_q.cyclic_reduce(x) == ext_q.cyclic_reduce(base_q.cyclic_reduce(x)),
                str(x),
            )
            for x in base_samples
        ],
    )
    face(
        "polynomial inclusion commutes with the moment-ideal quotients",
        [
            (
                ideal_ext.reduce(trace(base_scheme, x))
                == ideal_ext.reduce(ideal_base.reduce(trace(base_scheme, x))),
                str(x),
            )
            for x in base_samples
        ],
    )
    face(
        "trace commutes with the extension inclusion",
        [
            (trace(ext_scheme, x) == trace(base_scheme, x), str(x))
            for x in base_samples
        ],
    )
    face(
        "trace descends along the base reduction",
        [
            (
                ideal_base.reduce(trace(base_scheme, x))
                == ideal_base.reduce(trace(base_scheme, base_q.cyclic_reduce(x))),
                str(x),
            )
            for x in base_samples
        ],
    )
    face(
        "trace descends along the extended reduction",
        [
            (
                ideal_ext.reduce(trace(ext_scheme, x))
                == ideal_ext.reduce(trace(ext_scheme, ext_q.cyclic_reduce(x))),
                str(x),
            )
            for x in ext_samples
        ],
    )
    face(
        "reduced traces commute with the extension inclusion",
        [
            (
                ideal_ext.reduce(trace(ext_scheme, ext_q.cyclic_reduce(base_q.cyclic_reduce(x))))
                == ideal_ext.reduce(ideal_base.reduce(trace(base_scheme, base_q.cyclic_reduce(x)))),
                str(x),
            )
            for x in base_samples
        ],
    )
    return report


class PolyIdealSlice:
    """Membership in the ideal generated by given polynomials, decided inside
    the total-degree ≤ bound slice by exact elimination."""

    def __init__(self, gens: list[PolyElement], variables: list[Var], bound: int):
        self.bound = bound
        self.red = RowReducer()
        monos: list[Monomial] = [()]
        seen = {()}
        frontier = [()]
        for _ in range(bound):
            nxt = []
            for m in frontier:
                for v in variables:
                    nm = tuple(sorted(m + (v,)))
                    if nm not in seen:
                        seen.add(nm)
                        nxt.append(nm)
            monos.extend(nxt)
            frontier = nxt
        for g in gens:
            gd = g.total_degree()
            for m in monos:
                if len(m) + gd > bound:
                    continue
                row = PolyElement({m: Fraction(1)}) * g
                if not row.is_zero():
                    self.red.add(dict(row.terms))

    def reduce(self, p: PolyElement) -> PolyElement:
        if p.total_degree() > self.bound:
            raise ValueError("polynomial exceeds the ideal slice bound")
        return PolyElement(self.red.reduce(dict(p.terms)))

    def contains(self, p: PolyElement) -> bool:
        return self.reduce(p).is_zero()
