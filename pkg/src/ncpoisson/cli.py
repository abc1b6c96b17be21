"""Command-line front end: parse quiver documents, dispatch verification
suites, emit human-readable and JSON reports.

Exit codes: 0 when every check passes (INDETERMINATE truncation notices do
not fail a run), 1 when any check FAILs, 2 on malformed input.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction

import click

from . import __version__
from .cotangent import build_cotangent, check_canonical_bivector
from .dbracket import (
    DoubleBracketSpec,
    check_antisymmetry,
    check_double_jacobi,
    check_moment,
    check_necklace_oracle,
)
from .exprs import ExprError, parse_expression, parse_nc
from .extension import (
    DoubleDerivation,
    check_double_poisson_derivation,
    check_extension_diagram,
    extend_double,
    inner_double_derivation,
    zero_double_derivation,
)
from .hamred import check_pr_morphism
from .hamred import reduce as ham_reduce
from .ncalg import NCElement, TensorElement
from .quiver import (
    Quiver,
    QuiverDocument,
    QuiverError,
    double,
    parse_quiver_document,
    standard_bracket,
    standard_moment,
)
from .rep import (
    check_poisson_axioms,
    check_trace_lie_morphism,
    rep_scheme,
)
from .report import FAIL, Report
from .barcobar import (
    check_hc_bracket,
    check_resolution,
    check_square_zero,
    connes_homology,
    free_truncation,
    quotient_truncation,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_document(path: str) -> QuiverDocument:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        _fail(str(exc))
    try:
        return parse_quiver_document(text)
    except QuiverError as exc:
        _fail(f"{path}: {exc}")


def _doubled(doc: QuiverDocument) -> Quiver:
    q = doc.quiver
    return q if q.is_doubled else double(q)


def _build_spec(doc: QuiverDocument) -> tuple[Quiver, DoubleBracketSpec]:
    """The bracket carried by a document: its explicit table if present,
    otherwise the canonical bracket of the (doubled) quiver."""
    if doc.bracket is not None:
        q = doc.quiver
        symbols = q.generator_map()
        vertices = set(q.vertices)
        table: dict[tuple[str, str], TensorElement] = {}
        for (g, h), text in doc.bracket.items():
            if g not in symbols or h not in symbols:
                _fail(f"bracket entry ({g}, {h}) references an unknown generator")
            try:
                val = parse_expression(text, symbols, vertices)
            except ExprError as exc:
                _fail(f"bracket entry ({g}, {h}): {exc}")
            if isinstance(val, NCElement):
                _fail(f"bracket entry ({g}, {h}) must be a tensor expression x # y")
            table[(g, h)] = val
        try:
            return q, DoubleBracketSpec(
                degree=0, vertices=q.vertices, generators=q.arrows, table=table
            )
        except ValueError as exc:
            _fail(str(exc))
    qbar = _doubled(doc)
    return qbar, standard_bracket(qbar)


def _moment_element(doc: QuiverDocument, qbar: Quiver) -> NCElement | None:
    if doc.moment is not None:
        try:
            return parse_nc(doc.moment, qbar.generator_map(), set(qbar.vertices))
        except ExprError as exc:
            _fail(f"moment element: {exc}")
    if qbar.is_doubled and doc.bracket is None:
        return standard_moment(qbar)
    return None


def _derivation(doc: QuiverDocument, spec: DoubleBracketSpec) -> DoubleDerivation:
    if doc.derivation is None:
        return zero_double_derivation()
    symbols = spec.generator_map()
    vertices = set(spec.vertices)
    table: dict[str, TensorElement] = {}
    for name, text in doc.derivation.items():
        if name not in symbols:
            _fail(f"derivation table references an unknown generator {name}")
        try:
            val = parse_expression(text, symbols, vertices)
        except ExprError as exc:
            _fail(f"derivation entry {name}: {exc}")
        if isinstance(val, NCElement):
            _fail(f"derivation entry {name} must be a tensor expression x # y")
        table[name] = val
    theta = DoubleDerivation(degree=0, table=table)
    try:
        theta.validate(spec)
    except ValueError as exc:
        _fail(str(exc))
    return theta


def _emit(reports: list[Report], json_path: str | None, extra: dict | None = None) -> None:
    for rep in reports:
        click.echo(rep.render())
    if json_path:
        payload: dict = {"reports": [rep.to_dict() for rep in reports]}
        if extra:
            payload.update(extra)
        with open(json_path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    failed = any(c.status == FAIL for rep in reports for c in rep.checks)
    sys.exit(1 if failed else 0)


def _timed(rep: Report, started: float) -> Report:
    rep.seconds = round(time.time() - started, 3)
    return rep


_json_opt = click.option(
    "--json", "json_path", type=click.Path(), default=None, help="Also write the report as JSON."
)
_seed_opt = click.option("--seed", default=0, show_default=True, help="Random seed.")
_samples_opt = click.option(
    "--samples", default=100, show_default=True, help="Number of sampled instances."
)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Exact verification suites for noncommutative Poisson structures on
    quiver path algebras."""


@main.command("verify-dpoisson")
@click.argument("document", type=click.Path())
@_samples_opt
@_seed_opt
@_json_opt
def verify_dpoisson(document: str, samples: int, seed: int, json_path: str | None) -> None:
    """Antisymmetry, double Jacobi and (when available) the moment identity
    for the bracket carried by a quiver document."""
    doc = _load_document(document)
    q, spec = _build_spec(doc)
    reports = []
    t0 = time.time()
    reports.append(_timed(check_double_jacobi(spec, samples=samples, seed=seed), t0))
    t0 = time.time()
    reports.append(_timed(check_antisymmetry(spec, samples=samples, seed=seed), t0))
    w = _moment_element(doc, q)
    if w is not None:
        t0 = time.time()
        reports.append(_timed(check_moment(spec, w), t0))
    _emit(reports, json_path)


@main.command()
@click.argument("document", type=click.Path())
@_samples_opt
@_seed_opt
@click.option("--max-length", default=4, show_default=True, help="Maximum sampled word length.")
@_json_opt
def necklace(
    document: str, samples: int, seed: int, max_length: int, json_path: str | None
) -> None:
    """The closed necklace-bracket formula against the Leibniz expansion."""
    doc = _load_document(document)
    if doc.bracket is not None:
        _fail("the necklace formula applies to the canonical bracket only")
    qbar = _doubled(doc)
    spec = standard_bracket(qbar)
    t0 = time.time()
    rep = _timed(
        check_necklace_oracle(qbar, spec, samples=samples, seed=seed, max_length=max_length),
        t0,
    )
    _emit([rep], json_path)


@main.command("mc-check")
@click.argument("document", type=click.Path())
@click.option("--shift", default=1, show_default=True, help="Cotangent degree shift.")
@_json_opt
def mc_check_cmd(document: str, shift: int, json_path: str | None) -> None:
    """Flatness of the canonical cotangent bivector and the round trip back
    to the canonical bracket."""
    doc = _load_document(document)
    qbar = _doubled(doc)
    cot = build_cotangent(qbar, shift=shift)
    t0 = time.time()
    rep = _timed(check_canonical_bivector(cot), t0)
    _emit([rep], json_path)


@main.command()
@click.argument("document", type=click.Path())
@click.option("--truncate", default=6, show_default=True, help="Path-length bound.")
@_samples_opt
@_seed_opt
@_json_opt
def reduce(
    document: str, truncate: int, samples: int, seed: int, json_path: str | None
) -> None:
    """Truncated Hamiltonian reduction by the document's moment element:
    dimension table and the bracket/projection compatibility check."""
    doc = _load_document(document)
    qbar, spec = _build_spec(doc)
    w = _moment_element(doc, qbar)
    if w is None:
        _fail("document carries no moment element and the canonical one is unavailable")
    try:
        tq = ham_reduce(qbar, w, bound=truncate, spec=spec)
    except ValueError as exc:
        _fail(str(exc))
    dims: dict[int, int] = {}
    for word in tq.basis:
        dims[word.length] = dims.get(word.length, 0) + 1
    for length in sorted(dims):
        click.echo(f"dim(length {length}) = {dims[length]}")
    t0 = time.time()
    rep = _timed(check_pr_morphism(tq, samples=samples, seed=seed), t0)
    rep.params["truncate"] = truncate
    _emit([rep], json_path, extra={"dimensions": {str(k): v for k, v in dims.items()}})


@main.command()
@click.argument("document", type=click.Path())
@click.option(
    "--inner", is_flag=True, help="Use the inner derivation x -> x(x)1 - 1(x)x."
)
@_samples_opt
@_seed_opt
@_json_opt
def extend(
    document: str, inner: bool, samples: int, seed: int, json_path: str | None
) -> None:
    """Extend the bracket by one variable t along the document's derivation
    (default zero) and verify the extension identities."""
    doc = _load_document(document)
    q, spec = _build_spec(doc)
    theta = inner_double_derivation(spec) if inner else _derivation(doc, spec)
    reports = []
    t0 = time.time()
    reports.append(
        _timed(check_double_poisson_derivation(spec, theta, samples=samples, seed=seed), t0)
    )
    extended = extend_double(spec, theta, check=False)
    t0 = time.time()
    jac = _timed(check_double_jacobi(extended, samples=samples, seed=seed), t0)
    jac.suite = "extended-double-jacobi"
    reports.append(jac)
    t0 = time.time()
    reports.append(_timed(check_extension_diagram(spec, theta, samples=samples, seed=seed), t0))
    _emit(reports, json_path)


@main.command()
@click.argument("document", type=click.Path())
@click.option("--dim", required=True, type=int, help="Dimension at every vertex.")
@click.option(
    "--check",
    "which",
    type=click.Choice(["axioms", "trace", "all"]),
    default="all",
    show_default=True,
)
@_samples_opt
@_seed_opt
@_json_opt
def rep(
    document: str,
    dim: int,
    which: str,
    samples: int,
    seed: int,
    json_path: str | None,
) -> None:
    """Induced Poisson structure on the representation scheme: bracket axioms
    and the trace Lie morphism."""
    doc = _load_document(document)
    q, spec = _build_spec(doc)
    scheme = rep_scheme(spec, dim)
    reports = []
    if which in ("axioms", "all"):
        t0 = time.time()
        reports.append(
            _timed(
                check_poisson_axioms(
                    spec, scheme, exhaustive=dim <= 2, samples=samples, seed=seed
                ),
                t0,
            )
        )
    if which in ("trace", "all"):
        t0 = time.time()
        reports.append(
            _timed(check_trace_lie_morphism(spec, scheme, samples=samples, seed=seed), t0)
        )
    _emit(reports, json_path)


def _parse_window(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        _fail(f"window must be 'n0:n1', got {text!r}")
    try:
        n0, n1 = int(parts[0]), int(parts[1])
    except ValueError:
        _fail(f"window must be 'n0:n1', got {text!r}")
    if n0 > n1:
        _fail("window lower bound exceeds upper bound")
    return n0, n1


@main.command("cyclic-homology")
@click.argument("document", type=click.Path())
@click.option("--lengths", default=6, show_default=True, help="Maximum path length.")
@click.option(
    "--window", default="0:3", show_default=True, help="Homological degree range n0:n1."
)
@click.option(
    "--quotient",
    is_flag=True,
    help="Compute for the Hamiltonian reduction rather than the free algebra.",
)
@click.option("--truncate", default=4, show_default=True, help="Bound for --quotient.")
@click.option(
    "--check-complex",
    is_flag=True,
    help="Also verify square-zero and the resolution on the same algebra.",
)
@_json_opt
def cyclic_homology(
    document: str,
    lengths: int,
    window: str,
    quotient: bool,
    truncate: int,
    check_complex: bool,
    json_path: str | None,
) -> None:
    """Reduced cyclic homology dimensions per (degree, path length)."""
    doc = _load_document(document)
    n0, n1 = _parse_window(window)
    if quotient:
        qbar = _doubled(doc)
        spec = standard_bracket(qbar)
        w = _moment_element(doc, qbar)
        if w is None:
            _fail("--quotient needs a moment element")
        alg = quotient_truncation(ham_reduce(qbar, w, bound=max(truncate, lengths), spec=spec))
    else:
        alg = free_truncation(doc.quiver, bound=lengths)
    table = connes_homology(alg, lengths, window=(n0, n1))
    for (n, l) in sorted(table):
        click.echo(f"HC[{n}] at length {l}: {table[(n, l)]}")
    reports: list[Report] = []
    if check_complex:
        t0 = time.time()
        reports.append(_timed(check_square_zero(alg, min(lengths, 4)), t0))
        t0 = time.time()
        reports.append(_timed(check_resolution(alg, lengths, window=min(lengths, 4)), t0))
    extra = {"table": {f"{n},{l}": v for (n, l), v in sorted(table.items())}}
    _emit(reports, json_path, extra=extra)


@main.command("hc-bracket")
@click.argument("document", type=click.Path())
@click.option("--truncate", default=4, show_default=True, help="Path-length bound.")
@click.option(
    "--quotient",
    is_flag=True,
    help="Work on the Hamiltonian reduction rather than the free algebra.",
)
@_samples_opt
@_seed_opt
@_json_opt
def hc_bracket(
    document: str,
    truncate: int,
    quotient: bool,
    samples: int,
    seed: int,
    json_path: str | None,
) -> None:
    """The Lie bracket on degree-zero reduced cyclic classes, via the cobar
    lift, checked against the direct necklace/Loday brackets."""
    doc = _load_document(document)
    qbar = _doubled(doc)
    spec = standard_bracket(qbar)
    reports = []
    if quotient:
        w = _moment_element(doc, qbar)
        if w is None:
            _fail("--quotient needs a moment element")
        tq = ham_reduce(qbar, w, bound=truncate, spec=spec)
        alg = quotient_truncation(tq)
        oracle = tq.induced_lie
        t0 = time.time()
        reports.append(_timed(check_pr_morphism(tq, samples=samples, seed=seed), t0))
    else:
        alg = free_truncation(qbar, bound=truncate, spec=spec)

        def oracle(c1, c2):
            from .dbracket import necklace_bracket

            return necklace_bracket(qbar, c1, c2)

    t0 = time.time()
    reports.append(
        _timed(check_hc_bracket(alg, oracle=oracle, samples=samples, seed=seed), t0)
    )
    _emit(reports, json_path)


if __name__ == "__main__":
    main()
