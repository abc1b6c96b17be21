"""Sparse exact linear algebra over the rationals.

Vectors are dicts mapping hashable basis keys to nonzero Fractions.  A
RowReducer maintains a set of mutually independent rows in echelon form with
respect to a total order on keys; it answers membership questions and
computes canonical residuals (normal forms modulo the row span).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable

Vec = dict


def vec_add(x: Vec, y: Vec, c: Fraction = Fraction(1)) -> Vec:
    out = dict(x)
    for k, v in y.items():
        nv = out.get(k, Fraction(0)) + c * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_scale(x: Vec, c: Fraction) -> Vec:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


class RowReducer:
    """Incremental Gaussian elimination.  Each stored row has its largest key
    (under ``key_sort``) as pivot, so reduction strictly shrinks vectors and
    residuals are canonical coset representatives."""

    def __init__(self, key_sort: Callable[[Hashable], object] = None):
        self.key_sort = key_sort or (lambda k: k)
        self.rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivot_keys(self) -> set:
        return set(self.rows)

    def reduce(self, vec: Vec) -> Vec:
        vec = {k: v for k, v in vec.items() if v}
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec
            k = max(hits, key=self.key_sort)
            vec = vec_add(vec, self.rows[k], -vec[k])

    def add(self, vec: Vec) -> Vec:
        """Reduce and, if independent, install the residual as a new row.
        Returns the residual (empty when vec was already in the span)."""
        res = self.reduce(vec)
        if res:
            pivot = max(res, key=self.key_sort)
            inv = Fraction(1) / res[pivot]
            self.rows[pivot] = vec_scale(res, inv)
        return res

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)


def rank_of(vectors: Iterable[Vec], key_sort=None) -> int:
    red = RowReducer(key_sort)
    for v in vectors:
        red.add(v)
    return red.rank


class KernelSolver:
    """Kernel and image of a linear map given column by column.

    Columns are fed as (tag, image_vector); augmented elimination over keys
    ("out", k) > ("in", tag) yields kernel combinations in the tags and an
    image row space for membership tests."""

    def __init__(self, out_sort=None, in_sort=None):
        out_sort = out_sort or (lambda k: k)
        in_sort = in_sort or (lambda k: k)

        def key_sort(key):
            side, k = key
            return (1, out_sort(k)) if side == "out" else (0, in_sort(k))

        self.red = RowReducer(key_sort)
        self.kernel: list[Vec] = []
        self.image = RowReducer(out_sort)

    def feed(self, tag, image_vec: Vec) -> None:
        aug = {("out", k): v for k, v in image_vec.items()}
        aug[("in", tag)] = Fraction(1)
        res = self.red.add(aug)
        if res and all(side == "in" for side, _ in res):
            self.kernel.append({k: v for (_, k), v in res.items()})
        self.image.add(image_vec)

    def image_rank(self) -> int:
        return self.image.rank

    def in_image(self, vec: Vec) -> bool:
        return self.image.contains(vec)
