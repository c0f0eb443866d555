"""Brute-force verification over small prime fields.

Counts points of Schubert cells and of the whole variety over F_q and
compares against the q^dim predictions of the paving; also checks the
generic-flag parametrization and the unipotent factorization structure by
exhaustive enumeration.

The heavy counting runs on numpy: for a point uwE_ of the Schubert cell
C_w, the membership condition X(V_i) in V_{h(i)} is equivalent to
(uw)^{-1} X (uw) having zero entries below row h(j) in column j, so one
batch conjugation per w answers every h at once.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import log2

import numpy as np

from .combinatorics import (
    Composition,
    HessenbergFunction,
    Permutation,
    base_filling,
)
from .domains import PrimeFieldDomain, _is_prime
from .exactla import (
    ExactMatrix,
    Flag,
    UnipotentPattern,
    bk_generator,
    bruhat_canonical_form,
    factor_unipotent,
    nilpotent_matrix,
    verify_flag_membership,
)
from .paving import enumerate_cells, springer_inversions


class BudgetExceededError(Exception):
    """Raised when an enumeration would exceed the work budget."""


@dataclass(frozen=True)
class FieldSpec:
    """A prime field size small enough for exhaustive enumeration."""

    q: int

    def __post_init__(self):
        if not _is_prime(self.q) or self.q > 16:
            raise ValueError(f"q must be a prime <= 16, got {self.q}")


@dataclass
class CountReport:
    """Per-cell and total point counts over F_q versus the paving prediction."""

    q: int
    per_cell: dict[tuple[int, ...], int]
    total: int
    predicted: int
    match: bool
    expected_per_cell: dict[tuple[int, ...], int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "total": self.total,
            "predicted": self.predicted,
            "match": self.match,
            "per_cell": [
                {
                    "w": list(w),
                    "count": c,
                    "expected": self.expected_per_cell.get(w, 0),
                }
                for w, c in sorted(self.per_cell.items())
                if c or self.expected_per_cell.get(w, 0)
            ],
        }


def _check_budget(bits: float, budget_bits: int) -> None:
    if bits > budget_bits:
        raise BudgetExceededError(
            f"enumeration needs {bits:.1f} bits of work, budget is {budget_bits}"
        )


def _free_positions(w: Permutation) -> list[tuple[int, int]]:
    return UnipotentPattern.schubert(w).positions_sorted()


def _batch_u(free: list[tuple[int, int]], n: int, q: int) -> np.ndarray:
    """All q^f matrices of U^w(F_q) as an (N, n, n) array, row-major order."""
    f = len(free)
    big = q**f
    u = np.broadcast_to(np.eye(n, dtype=np.int64), (big, n, n)).copy()
    idx = np.arange(big)
    for p, (a, b) in enumerate(free):
        u[:, a - 1, b - 1] = (idx // q ** (f - 1 - p)) % q
    return u


def _batch_unipotent_inverse(u: np.ndarray, q: int) -> np.ndarray:
    n = u.shape[-1]
    ident = np.eye(n, dtype=np.int64)
    nilp = (u - ident) % q
    acc = np.broadcast_to(ident, u.shape).copy()
    term = acc
    for _ in range(n - 1):
        term = (-(term @ nilp)) % q
        acc = (acc + term) % q
    return acc


def _m_vectors(w: Permutation, x: np.ndarray, q: int) -> np.ndarray:
    """For every u in U^w(F_q): lowest nonzero row of each column of
    (uW)^{-1} X (uW) mod q, as an (N, n) array (0 for a zero column).

    Membership of uwE_ in Hess(X, h) is exactly m <= h.values pointwise.
    """
    n = w.n
    free = _free_positions(w)
    u = _batch_u(free, n, q)
    uinv = _batch_unipotent_inverse(u, q)
    wmat = np.zeros((n, n), dtype=np.int64)
    for j in range(1, n + 1):
        wmat[w(j) - 1, j - 1] = 1
    a = (wmat.T @ uinv @ (x % q) @ u @ wmat) % q
    rows = np.arange(1, n + 1).reshape(1, n, 1)
    return np.max(np.where(a != 0, rows, 0), axis=1)


def cell_point_count(
    w: Permutation,
    lam: Composition,
    h: HessenbergFunction,
    q: int,
    budget_bits: int = 24,
) -> int:
    """|{u in U^w(F_q) : uwE_ in Hess(X_lambda, h)}| by brute force."""
    FieldSpec(q)
    _check_budget(w.length() * log2(q), budget_bits)
    x = _np_matrix(nilpotent_matrix(lam))
    m = _m_vectors(w, x, q)
    return int(np.all(m <= np.array(h.values), axis=1).sum())


def _np_matrix(m: ExactMatrix) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in m.rows], dtype=np.int64)


def variety_point_counts(
    lam: Composition,
    hs: list[HessenbergFunction],
    q: int,
    budget_bits: int = 24,
    workers: int = 1,
    x: np.ndarray | None = None,
) -> list[CountReport]:
    """CountReports for several h at once; each cell is enumerated once.

    The optional x overrides X_lambda (used by the conjugation check); the
    predictions still come from the lambda paving.
    """
    FieldSpec(q)
    n = lam.n
    total_points = 1
    for i in range(1, n + 1):
        total_points *= (q**i - 1) // (q - 1)
    _check_budget(log2(total_points), budget_bits)
    if x is None:
        x = _np_matrix(nilpotent_matrix(lam))
    hv = np.array([h.values for h in hs])
    perms = sorted(itertools.permutations(range(1, n + 1)))

    def count_one(word: tuple[int, ...]) -> tuple[tuple[int, ...], list[int]]:
        m = _m_vectors(Permutation(word), x, q)
        ok = np.all(m[:, None, :] <= hv[None, :, :], axis=2)
        return word, [int(c) for c in ok.sum(axis=0)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(count_one, perms))
    else:
        results = [count_one(word) for word in perms]

    reports = []
    for hi, h in enumerate(hs):
        expected = {c.w.word: q**c.dim for c in enumerate_cells(lam, h)}
        per_cell = {word: counts[hi] for word, counts in results}
        total = sum(per_cell.values())
        predicted = sum(expected.values())
        match = total == predicted and all(
            per_cell[word] == expected.get(word, 0) for word in per_cell
        )
        reports.append(CountReport(q, per_cell, total, predicted, match, expected))
    return reports


def variety_point_count(
    lam: Composition,
    h: HessenbergFunction,
    q: int,
    budget_bits: int = 24,
    workers: int = 1,
) -> CountReport:
    """Brute-force count of |Hess(X_lambda, h)(F_q)| versus the paving."""
    return variety_point_counts(lam, [h], q, budget_bits, workers)[0]


def _springer_points(
    w: Permutation, lam: Composition, q: int
) -> list[ExactMatrix]:
    """All u in U^w(F_q) with uwE_ in the Springer fiber of X_lambda, exact."""
    dom = PrimeFieldDomain(q)
    n = w.n
    x = nilpotent_matrix(lam, dom)
    h = HessenbergFunction.springer(n)
    wmat = ExactMatrix.permutation(dom, w)
    free = _free_positions(w)
    points = []
    for vals in itertools.product(range(q), repeat=len(free)):
        u = ExactMatrix.identity(dom, n)
        for (a, b), v in zip(free, vals):
            u = u.with_entry(a, b, dom.from_int(v))
        flag = Flag.from_matrix(u @ wmat)
        if verify_flag_membership(flag, x, h):
            points.append(u)
    return points


def _canonical_key(m: ExactMatrix) -> tuple:
    w, u = bruhat_canonical_form(m)
    return (w.word,) + tuple(
        u.entry(a, b).v for a, b in _free_positions(w)
    )


def dw_equals_cell(
    w: Permutation, lam: Composition, q: int, budget_bits: int = 24
) -> bool:
    """Set equality of the generic-flag image and the brute-force cell.

    Enumerates every coordinate tuple over F_q, canonicalizes the resulting
    flags, and compares with {u : uwE_ in Springer fiber}; also asserts the
    parametrization is injective (q^{d_w} distinct flags).
    """
    FieldSpec(q)
    dom = PrimeFieldDomain(q)
    n = w.n
    spr = springer_inversions(w, lam)
    _check_budget(max(len(spr), w.length()) * log2(q), budget_bits)
    keys: list[tuple[int, tuple[int, ...]]] = []
    for k in range(2, n + 1):
        keys.extend((k, l) for l in spr.level(k))
    dw_keys = set()
    for vals in itertools.product(range(q), repeat=len(keys)):
        coords: dict[int, dict] = {k: {} for k in range(2, n + 1)}
        for (k, l), v in zip(keys, vals):
            coords[k][(w(k), w(l))] = dom.from_int(v)
        prod = ExactMatrix.permutation(dom, w)
        for k in range(2, n + 1):
            prod = bk_generator(w, lam, k, coords[k], dom) @ prod
        flag_matrix = ExactMatrix(
            dom, tuple(zip(*(prod.column(j) for j in range(1, n + 1))))
        )
        dw_keys.add(_canonical_key(flag_matrix))
    if len(dw_keys) != q ** len(spr):
        return False
    wmat = ExactMatrix.permutation(dom, w)
    cell_keys = {
        _canonical_key(u @ wmat) for u in _springer_points(w, lam, q)
    }
    return dw_keys == cell_keys


def zeros_structure_check(
    w: Permutation, lam: Composition, q: int, budget_bits: int = 24
) -> bool:
    """For every Springer-fiber point of C_w, the U_i factor of uw = u_i v u_0 y
    vanishes outside the columns that end a row of the base filling."""
    FieldSpec(q)
    _check_budget(w.length() * log2(q), budget_bits)
    i = w(w.n)
    end_cols = {row[-1] for row in base_filling(lam).rows}
    for u in _springer_points(w, lam, q):
        u_i, _ = factor_unipotent(u, w)
        for j in range(i + 1, w.n + 1):
            if j not in end_cols and u_i.entry(i, j):
                return False
    return True


def _random_gl(n: int, q: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, q, size=(n, n), dtype=np.int64)
        if _det_mod(g, q):
            return g


def _det_mod(g: np.ndarray, q: int) -> int:
    m = [[int(x) % q for x in row] for row in g]
    n = len(m)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col] % q
        inv = pow(m[col][col], -1, q)
        for r in range(col + 1, n):
            c = m[r][col] * inv % q
            if c:
                m[r] = [(x - c * y) % q for x, y in zip(m[r], m[col])]
    return det % q


def _inverse_mod(g: np.ndarray, q: int) -> np.ndarray:
    n = g.shape[0]
    aug = [[int(x) % q for x in row] + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(g)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, q)
        aug[col] = [x * inv % q for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(x - c * y) % q for x, y in zip(aug[r], aug[col])]
    return np.array([row[n:] for row in aug], dtype=np.int64)


def conjugation_invariance(
    lam: Composition,
    h: HessenbergFunction,
    q: int,
    trials: int = 10,
    seed: int = 0,
    budget_bits: int = 24,
) -> bool:
    """Point counts of Hess(g^{-1} X g, h) agree with Hess(X, h) for random g."""
    if lam.n > 4:
        raise ValueError("full-variety conjugation check is limited to n <= 4")
    baseline = variety_point_count(lam, h, q, budget_bits).total
    rng = np.random.default_rng(seed)
    x = _np_matrix(nilpotent_matrix(lam))
    for _ in range(trials):
        g = _random_gl(lam.n, q, rng)
        xc = (_inverse_mod(g, q) @ x @ g) % q
        report = variety_point_counts(lam, [h], q, budget_bits, x=xc)[0]
        if report.total != baseline:
            return False
    return True
