"""Affine cells of Hess(X_lambda, h): enumeration, dimensions, Betti numbers.

A cell is indexed by a permutation w whose tableau R(w) is h-strict.  Its
dimension is the number of Hessenberg inversions of R(w): pairs (k,l) with
k > l such that k sits strictly below l in the same column or anywhere in a
column strictly to the left, and k <= h(r) whenever r is the entry directly
to the right of l (no condition when l ends its row).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .combinatorics import (
    Composition,
    HessenbergFunction,
    Permutation,
    Tableau,
    is_h_strict,
    permutation_of_tableau,
    standardize,
    tableau_of,
)


@dataclass(frozen=True)
class InversionSet:
    """A set of Hessenberg inversions, also bucketed by the larger index k."""

    pairs: frozenset[tuple[int, int]]

    def __init__(self, pairs):
        pairs = frozenset(pairs)
        if any(k <= l for k, l in pairs):
            raise ValueError("inversion pairs must have the larger index first")
        object.__setattr__(self, "pairs", pairs)

    @property
    def by_k(self) -> dict[int, tuple[int, ...]]:
        buckets: dict[int, list[int]] = {}
        for k, l in self.pairs:
            buckets.setdefault(k, []).append(l)
        return {k: tuple(sorted(ls)) for k, ls in sorted(buckets.items())}

    def level(self, k: int) -> tuple[int, ...]:
        """The l's with (k,l) present, sorted (the set inv^k)."""
        return tuple(sorted(l for kk, l in self.pairs if kk == k))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __le__(self, other: "InversionSet") -> bool:
        return self.pairs <= other.pairs

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def _tableau_inversions(t: Tableau, h: HessenbergFunction) -> frozenset[tuple[int, int]]:
    pairs = []
    hv = h.values
    pos = t.index
    for l in range(1, t.n + 1):
        rl, cl = pos[l]
        r = t.right_neighbor(l)
        bound = t.n if r is None else hv[r - 1]
        for k in range(l + 1, bound + 1):
            rk, ck = pos[k]
            if ck < cl or (ck == cl and rk > rl):
                pairs.append((k, l))
    return frozenset(pairs)


def hessenberg_inversions(
    w: Permutation, lam: Composition, h: HessenbergFunction
) -> InversionSet:
    """inv_{lambda,h}(w), computed from the tableau R(w)."""
    if not (w.n == lam.n == h.n):
        raise ValueError(f"size mismatch: |w|={w.n}, n(lambda)={lam.n}, n(h)={h.n}")
    return InversionSet(_tableau_inversions(tableau_of(w, lam), h))


def springer_inversions(w: Permutation, lam: Composition) -> InversionSet:
    """inv_lambda(w): the Hessenberg inversions for h = (0,1,...,n-1)."""
    return hessenberg_inversions(w, lam, HessenbergFunction.springer(lam.n))


@dataclass(frozen=True)
class CellDescriptor:
    """One affine cell of the paving: C_w meets Hess(X_lambda,h) in C^dim."""

    w: Permutation
    tableau: Tableau
    hess_inv: InversionSet
    springer_inv: InversionSet
    dim: int


def iter_fillings(
    lam: Composition, h: HessenbergFunction, max_dim: int | None = None
) -> Iterator[tuple[list[list[int]], int]]:
    """Backtracking enumeration of RS_h(lambda) with the inversion count.

    Values are placed in decreasing order, each at the current end of some
    row; the value placed must be <= h(r) for its already-placed right
    neighbor r.  The Hessenberg inversion count is accumulated incrementally:
    when l is placed, its partners k > l sit in already-filled boxes either
    strictly below in the same column or anywhere in a column to the left.
    Branches whose partial count exceeds `max_dim` are pruned.

    Yields (rows, dim); the rows list is reused, copy if kept.
    """
    parts = lam.parts
    n = lam.n
    if n != h.n:
        raise ValueError(f"size mismatch: n(lambda)={lam.n}, n(h)={h.n}")
    if n == 0:
        return
    hv = h.values
    grid = [[0] * p for p in parts]
    rem = list(parts)
    nrows = len(parts)

    def place(v: int, dim: int) -> Iterator[tuple[list[list[int]], int]]:
        if v == 0:
            yield grid, dim
            return
        for i in range(nrows):
            c = rem[i]
            if c == 0:
                continue
            row = grid[i]
            if c < parts[i]:
                bound = hv[row[c] - 1]
                if v > bound:
                    continue
            else:
                bound = n
            # partners already placed: same column strictly below, or any
            # column strictly left, with k <= h(r)
            gained = 0
            for i2 in range(nrows):
                row2 = grid[i2]
                hi = min(c if i2 <= i else c + 1, parts[i2] + 1)
                for c2 in range(rem[i2] + 1, hi):
                    k = row2[c2 - 1]
                    if k and k <= bound:
                        gained += 1
            d = dim + gained
            if max_dim is not None and d > max_dim:
                continue
            row[c - 1] = v
            rem[i] = c - 1
            yield from place(v - 1, d)
            row[c - 1] = 0
            rem[i] = c

    yield from place(n, 0)


def enumerate_cells(lam: Composition, h: HessenbergFunction) -> list[CellDescriptor]:
    """All affine cells of Hess(X_lambda, h), sorted by the one-line word of w.

    An empty list signals that the variety is empty.
    """
    springer_h = HessenbergFunction.springer(lam.n)
    cells = []
    for rows, dim in iter_fillings(lam, h):
        t = Tableau([list(r) for r in rows], lam)
        w = permutation_of_tableau(t)
        hess = InversionSet(_tableau_inversions(t, h))
        assert len(hess) == dim
        spr = InversionSet(_tableau_inversions(t, springer_h))
        cells.append(CellDescriptor(w, t, hess, spr, dim))
    cells.sort(key=lambda c: c.w.word)
    return cells


@dataclass(frozen=True)
class PoincareData:
    """Cell-dimension histogram; coeffs[k] = number of cells of dimension k."""

    coeffs: tuple[int, ...]

    @property
    def total_cells(self) -> int:
        return sum(self.coeffs)

    @property
    def betti_even(self) -> tuple[int, ...]:
        """Ranks of the compactly-supported cohomology in even degrees 2k."""
        return self.coeffs

    def evaluate(self, q: int) -> int:
        """Point count over F_q predicted by the paving."""
        return sum(c * q**k for k, c in enumerate(self.coeffs))


def dimension_histogram(lam: Composition, h: HessenbergFunction) -> list[int]:
    hist: list[int] = []
    for _, dim in iter_fillings(lam, h):
        if dim >= len(hist):
            hist.extend([0] * (dim + 1 - len(hist)))
        hist[dim] += 1
    return hist


def poincare(lam: Composition, h: HessenbergFunction) -> PoincareData:
    return PoincareData(tuple(dimension_histogram(lam, h)))


def betti_numbers(lam: Composition, h: HessenbergFunction) -> tuple[int, ...]:
    """Ranks of H_c^{2k}; odd-degree cohomology vanishes for an affine paving."""
    return poincare(lam, h).betti_even


def r0_tableau(lam: Composition, h: HessenbergFunction) -> Tableau | None:
    """The greedy zero-cell tableau R_0, or None if the variety is empty.

    Columns are filled right to left, each top to bottom, always choosing the
    largest unused value that keeps the pair with the already-filled right
    neighbor h-strict.  When it exists, R_0 is the unique element of
    RS_h(lambda) with no Hessenberg inversions.
    """
    if lam.n != h.n:
        raise ValueError(f"size mismatch: n(lambda)={lam.n}, n(h)={h.n}")
    grid = [[0] * p for p in lam.parts]
    available = set(range(1, lam.n + 1))
    for col in range(lam.num_cols, 0, -1):
        for row in lam.column_rows(col):
            if col < lam.parts[row - 1]:
                bound = h(grid[row - 1][col])
            else:
                bound = lam.n
            candidates = [v for v in available if v <= bound]
            if not candidates:
                return None
            v = max(candidates)
            grid[row - 1][col - 1] = v
            available.remove(v)
    return Tableau(grid, lam)


def zero_dim_cells(lam: Composition, h: HessenbergFunction) -> list[Tableau]:
    """All tableaux of cells of dimension zero (pruned enumeration)."""
    return [
        Tableau([list(r) for r in rows], lam)
        for rows, _ in iter_fillings(lam, h, max_dim=0)
    ]


@dataclass(frozen=True)
class InversionProfile:
    """d_R(i,j): Hessenberg inversions counted by the columns of k and l."""

    d: dict[tuple[int, int], int]

    def __call__(self, i: int, j: int) -> int:
        return self.d.get((i, j), 0)

    @property
    def total(self) -> int:
        return sum(self.d.values())

    def dominates(self, other: "InversionProfile") -> bool:
        keys = set(self.d) | set(other.d)
        return all(self(i, j) >= other(i, j) for i, j in keys)


def _grid_profile(
    positions: dict[int, tuple[int, int]],
    right_of: dict[int, int | None],
    h: HessenbergFunction,
    num_cols: int,
) -> InversionProfile:
    d = {(i, j): 0 for i in range(1, num_cols + 1) for j in range(i, num_cols + 1)}
    for l, (rl, cl) in positions.items():
        r = right_of[l]
        bound = h.n if r is None else h(r)
        for k, (rk, ck) in positions.items():
            if k > l and k <= bound and (ck < cl or (ck == cl and rk > rl)):
                d[(ck, cl)] += 1
    return InversionProfile(d)


def inversion_profile(t: Tableau, lam: Composition, h: HessenbergFunction) -> InversionProfile:
    """The profile d_R of an h-strict tableau R."""
    if not is_h_strict(t, h):
        raise ValueError("tableau is not h-strict")
    right = {v: t.right_neighbor(v) for v in range(1, t.n + 1)}
    return _grid_profile(dict(t.index), right, h, t.shape.num_cols)


@dataclass(frozen=True)
class SortStep:
    """One state of the column bubble-sort: a grid snapshot plus its profile.

    Swapping rows of unequal length can move boxes (blanks count as
    +infinity), so the snapshot is a padded grid with None holes; `tableau`
    gives a Tableau whenever the rows are contiguous.
    """

    grid: tuple[tuple[int | None, ...], ...]
    profile: InversionProfile

    @property
    def tableau(self) -> Tableau | None:
        rows = []
        for row in self.grid:
            vals = [v for v in row if v is not None]
            if any(v is not None for v in row[len(vals):]):
                return None
            rows.append(vals)
        try:
            return Tableau(rows)
        except ValueError:
            return None


def column_sort_trace(
    t: Tableau, i: int, j: int, h: HessenbergFunction
) -> list[SortStep]:
    """Trace of the three-column sorting process for columns i, j, j+1.

    For i == j only columns i and i+1 take part.  Each swap exchanges two
    vertically adjacent entries of the column being sorted together with the
    same-row entries of the other participating columns; every intermediate
    state stays h-strict in the touched columns and d(i,j) never decreases.
    The first step is the starting tableau, then one step per swap.
    """
    if not is_h_strict(t, h):
        raise ValueError("tableau is not h-strict")
    m = t.shape.num_cols
    if not (1 <= i <= j < m or (i == j and 1 <= i <= m)):
        raise ValueError(f"invalid column indices i={i}, j={j} for {m} columns")

    width = m
    grid: list[list[int | None]] = [
        list(row) + [None] * (width - len(row)) for row in t.rows
    ]

    def profile_of(g: list[list[int | None]]) -> InversionProfile:
        pos: dict[int, tuple[int, int]] = {}
        right: dict[int, int | None] = {}
        for ri, row in enumerate(g, start=1):
            for ci, v in enumerate(row, start=1):
                if v is not None:
                    pos[v] = (ri, ci)
                    right[v] = row[ci] if ci < width else None
        return _grid_profile(pos, right, h, width)

    steps = [SortStep(tuple(tuple(r) for r in grid), profile_of(grid))]

    def sort_column(col: int, companions: tuple[int, ...]) -> None:
        # bubble sort `col` top-to-bottom; blanks are +infinity
        def val(r: int) -> float:
            v = grid[r][col - 1]
            return float("inf") if v is None else v

        swapped = True
        while swapped:
            swapped = False
            for r in range(len(grid) - 1):
                if val(r) > val(r + 1):
                    for c in (col,) + companions:
                        grid[r][c - 1], grid[r + 1][c - 1] = (
                            grid[r + 1][c - 1],
                            grid[r][c - 1],
                        )
                    steps.append(
                        SortStep(tuple(tuple(x) for x in grid), profile_of(grid))
                    )
                    swapped = True

    if i == j:
        extra = (i + 1,) if i + 1 <= width else ()
        sort_column(i, extra)
        if i + 1 <= width:
            sort_column(i + 1, ())
    else:
        cols = tuple(c for c in (j, j + 1) if c <= width)
        sort_column(i, cols)
        sort_column(j, (j + 1,) if j + 1 <= width else ())
        if j + 1 <= width:
            sort_column(j + 1, ())
    return steps


def maximal_cells_are_standard(
    lam: Composition, h: HessenbergFunction
) -> tuple[bool, Tableau | None]:
    """Check that every maximal-dimension cell has a standard tableau.

    Returns (ok, witness) where witness is a failing tableau if any.
    """
    best: list[Tableau] = []
    best_dim = -1
    for rows, dim in iter_fillings(lam, h):
        if dim > best_dim:
            best_dim = dim
            best = [Tableau([list(r) for r in rows], lam)]
        elif dim == best_dim:
            best.append(Tableau([list(r) for r in rows], lam))
    for t in best:
        if any(
            any(a > b for a, b in zip(colvals, colvals[1:]))
            for colvals in _columns(t)
        ):
            return False, t
    return True, None


def _columns(t: Tableau) -> list[list[int]]:
    return [
        [t.entry(r, c) for r in t.shape.column_rows(c)]
        for c in range(1, t.shape.num_cols + 1)
    ]


def is_standard_columns(t: Tableau) -> bool:
    """True iff every column increases from top to bottom."""
    return all(all(a < b for a, b in zip(col, col[1:])) for col in _columns(t))
