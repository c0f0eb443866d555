"""Exact matrices, the nilpotent matrix X_lambda, B_k(w) generators, generic
flags with symbolic coordinates, and Bruhat/unipotent factorizations.

All arithmetic is exact over a pluggable scalar domain (rationals, a prime
field, or multivariate polynomials).  Matrices, vectors, and flags are
immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .combinatorics import (
    Composition,
    HessenbergFunction,
    Permutation,
    Tableau,
    base_filling,
    factorize,
    is_row_strict,
    tableau_of,
)
from .domains import (
    GF,
    POLYNOMIALS,
    RATIONALS,
    Domain,
    Poly,
    PolynomialDomain,
    PrimeFieldDomain,
)
from .paving import InversionSet, hessenberg_inversions, springer_inversions

Vector = tuple


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable n x n matrix over an exact scalar domain."""

    domain: Domain
    rows: tuple[tuple, ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, domain: Domain, rows: Sequence[Sequence]) -> "ExactMatrix":
        return cls(domain, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, domain: Domain, n: int) -> "ExactMatrix":
        one, zero = domain.one(), domain.zero()
        return cls(domain, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @classmethod
    def zero(cls, domain: Domain, n: int) -> "ExactMatrix":
        z = domain.zero()
        return cls(domain, tuple(tuple(z for _ in range(n)) for _ in range(n)))

    @classmethod
    def permutation(cls, domain: Domain, w: Permutation) -> "ExactMatrix":
        """Matrix W with W e_j = e_{w(j)}, i.e. W[w(j), j] = 1."""
        one, zero = domain.one(), domain.zero()
        n = w.n
        return cls(domain, tuple(
            tuple(one if w(j + 1) == i + 1 else zero for j in range(n))
            for i in range(n)
        ))

    def entry(self, i: int, j: int):
        """1-based access."""
        return self.rows[i - 1][j - 1]

    def with_entry(self, i: int, j: int, value) -> "ExactMatrix":
        rows = [list(r) for r in self.rows]
        rows[i - 1][j - 1] = value
        return ExactMatrix.from_rows(self.domain, rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.domain != other.domain:
            raise ValueError("domain mismatch")
        n = self.n
        ocols = list(zip(*other.rows))
        zero = self.domain.zero()
        rows = []
        for r in self.rows:
            row = []
            for c in ocols:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return ExactMatrix(self.domain, tuple(rows))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.domain, tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.domain, tuple(
            tuple(a - b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.rows, other.rows)
        ))

    def apply(self, v: Vector) -> Vector:
        zero = self.domain.zero()
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> Vector:
        """1-based column."""
        return tuple(r[j - 1] for r in self.rows)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.domain, tuple(zip(*self.rows)))

    def is_zero(self) -> bool:
        return not any(any(x for x in r) for r in self.rows)

    def is_upper_unitriangular(self) -> bool:
        one = self.domain.one()
        for i in range(self.n):
            if self.rows[i][i] != one:
                return False
            if any(self.rows[i][j] for j in range(i)):
                return False
        return True

    def inverse(self) -> "ExactMatrix":
        """Gauss-Jordan inverse; the domain must be a field."""
        if not self.domain.is_field():
            return self._unipotent_inverse()
        n = self.n
        dom = self.domain
        aug = [list(r) + list(ir) for r, ir in zip(self.rows, ExactMatrix.identity(dom, n).rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv_p = dom.div(dom.one(), aug[col][col])
            aug[col] = [x * inv_p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    c = aug[r][col]
                    aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
        return ExactMatrix.from_rows(dom, [row[n:] for row in aug])

    def _unipotent_inverse(self) -> "ExactMatrix":
        """Inverse via the Neumann series; requires I - self nilpotent."""
        n = self.n
        ident = ExactMatrix.identity(self.domain, n)
        nilp = self - ident
        acc, term = ident, ident
        for _ in range(n - 1):
            term = ExactMatrix.zero(self.domain, n) - (term @ nilp)
            acc = acc + term
        if not (self @ acc == ident):
            raise ValueError("matrix is not unipotent and domain is not a field")
        return acc

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def nilpotent_matrix(lam: Composition, domain: Domain = RATIONALS) -> ExactMatrix:
    """X_lambda: one at (l, r) for each pair l|r horizontally adjacent in R(e).

    Nilpotent, with Jordan type the partition of lambda.
    """
    base = base_filling(lam)
    m = ExactMatrix.zero(domain, lam.n)
    one = domain.one()
    for row in base.rows:
        for l, r in zip(row, row[1:]):
            m = m.with_entry(l, r, one)
    return m


def hessenberg_space_contains(m: ExactMatrix, h: HessenbergFunction) -> bool:
    """True iff M lies in H(h) = Span{E_ij | i <= h(j)}."""
    if m.n != h.n:
        raise ValueError(f"size mismatch: n(M)={m.n}, n(h)={h.n}")
    return all(
        not m.rows[i - 1][j - 1]
        for j in range(1, m.n + 1)
        for i in range(h(j) + 1, m.n + 1)
    )


@dataclass(frozen=True)
class UnipotentPattern:
    """Allowed off-diagonal positions of a unipotent subgroup of U."""

    n: int
    free_positions: frozenset[tuple[int, int]]

    def __post_init__(self):
        if any(not (1 <= a < b <= self.n) for a, b in self.free_positions):
            raise ValueError("free positions must satisfy 1 <= row < col <= n")

    @classmethod
    def schubert(cls, w: Permutation) -> "UnipotentPattern":
        """U^w = U cap wUw^{-1}; (a,b) free iff a < b and w^{-1}(a) > w^{-1}(b).

        The free positions biject with inv(w), so |free| = l(w).
        """
        winv = w.inverse()
        free = frozenset(
            (a, b)
            for a in range(1, w.n + 1)
            for b in range(a + 1, w.n + 1)
            if winv(a) > winv(b)
        )
        return cls(w.n, free)

    @classmethod
    def row(cls, i: int, n: int) -> "UnipotentPattern":
        """U_i: the i-th row of U."""
        return cls(n, frozenset((i, j) for j in range(i + 1, n + 1)))

    @classmethod
    def top_left_block(cls, n: int) -> "UnipotentPattern":
        """U_0: the unipotent group of the top-left (n-1) block."""
        return cls(n, frozenset(
            (a, b) for a in range(1, n) for b in range(a + 1, n)
        ))

    def contains(self, m: ExactMatrix) -> bool:
        if m.n != self.n or not m.is_upper_unitriangular():
            return False
        return all(
            (i + 1, j + 1) in self.free_positions
            for i in range(m.n)
            for j in range(i + 1, m.n)
            if m.rows[i][j]
        )

    def positions_sorted(self) -> list[tuple[int, int]]:
        return sorted(self.free_positions)


def _left_steps(base: Tableau, value: int, m: int) -> int | None:
    """Value m boxes to the left of `value` in the base filling, or None."""
    r, c = base.position(value)
    return base.entry(r, c - m) if c - m >= 1 else None


def bk_generator(
    w: Permutation,
    lam: Composition,
    k: int,
    coords: Mapping[tuple[int, int], object],
    domain: Domain = POLYNOMIALS,
) -> ExactMatrix:
    """The element of B_k(w) with the given coordinates.

    coords must be keyed by exactly the pairs (w(k), w(l)) for
    (k,l) in inv_lambda^k(w).  The matrix acts by
    g_k e_{w(j)} = e_{w(j)} + x_{w(k)w(l)} X^m e_{w(k)} whenever
    e_{w(j)} = X^m e_{w(l)}, and fixes all other basis vectors.
    """
    if not (2 <= k <= w.n):
        raise ValueError(f"k must be in 2..{w.n}, got {k}")
    level = springer_inversions(w, lam).level(k)
    expected = {(w(k), w(l)) for l in level}
    if set(coords) != expected:
        raise ValueError(
            f"coordinate keys {sorted(coords)} do not match inv^"
            f"{k} keys {sorted(expected)}"
        )
    base = base_filling(lam)
    g = ExactMatrix.identity(domain, w.n)
    for l in level:
        x = coords[(w(k), w(l))]
        m = 0
        while True:
            src = _left_steps(base, w(l), m)
            if src is None:
                break
            tgt = _left_steps(base, w(k), m)
            if tgt is not None:
                g = g.with_entry(tgt, src, g.entry(tgt, src) + x)
            m += 1
    return g


def generic_coordinates(w: Permutation, lam: Composition, k: int) -> dict[tuple[int, int], Poly]:
    """Fresh polynomial variables x_{w(k)w(l)} for level k."""
    return {
        (w(k), w(l)): Poly.var(w(k), w(l))
        for l in springer_inversions(w, lam).level(k)
    }


@dataclass(frozen=True)
class Flag:
    """A full flag (v_1 | v_2 | ... | v_n); column k spans grow the flag."""

    domain: Domain
    columns: tuple[Vector, ...]

    @property
    def n(self) -> int:
        return len(self.columns)

    @classmethod
    def standard(cls, domain: Domain, n: int) -> "Flag":
        ident = ExactMatrix.identity(domain, n)
        return cls(domain, tuple(ident.column(j) for j in range(1, n + 1)))

    @classmethod
    def from_matrix(cls, m: ExactMatrix) -> "Flag":
        return cls(m.domain, tuple(m.column(j) for j in range(1, m.n + 1)))

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.domain, tuple(zip(*self.columns)))


def generic_flag_stages(w: Permutation, lam: Composition) -> list[Flag]:
    """The flags D_w^1, ..., D_w^n = generic points of g_k...g_2 wE_.

    Stage k has columns g_k g_{k-1} ... g_2 e_{w(j)}.
    """
    if not is_row_strict(tableau_of(w, lam)):
        raise ValueError("R(w) is not row-strict")
    n = w.n
    prod = ExactMatrix.identity(POLYNOMIALS, n)
    stages = []
    stages.append(Flag(POLYNOMIALS, tuple(prod.column(w(j)) for j in range(1, n + 1))))
    for k in range(2, n + 1):
        g = bk_generator(w, lam, k, generic_coordinates(w, lam, k), POLYNOMIALS)
        prod = g @ prod
        stages.append(Flag(POLYNOMIALS, tuple(prod.column(w(j)) for j in range(1, n + 1))))
    return stages


def generic_flag(w: Permutation, lam: Composition) -> Flag:
    """The generic point of D_w = B_n(w)...B_2(w) wE_, over the polynomial ring.

    Parametrizes D_w as affine space of dimension |inv_lambda(w)|.
    """
    return generic_flag_stages(w, lam)[-1]


def _first_nonzero(v: Sequence) -> int | None:
    for i, x in enumerate(v):
        if x:
            return i
    return None


def _reduce_against(v: list, basis: list[tuple[int, Vector]]) -> list:
    """Cross-multiplication reduction (division-free, exact in any domain)."""
    for piv, b in basis:
        if v[piv]:
            lead = b[piv]
            c = v[piv]
            v = [lead * x - c * y for x, y in zip(v, b)]
    return v


def verify_flag_membership(
    flag: Flag, x: ExactMatrix, h: HessenbergFunction
) -> bool:
    """True iff X(V_i) is contained in V_{h(i)} for every i.

    The span tests use exact division-free elimination; over the polynomial
    domain a nonzero residual means the condition fails for some coordinate
    values, so a True answer quantifies over all values (the flags produced
    by generic_flag have unit determinant).
    """
    if flag.domain != x.domain:
        raise ValueError("domain mismatch between flag and matrix")
    if flag.n != h.n:
        raise ValueError(f"size mismatch: n(flag)={flag.n}, n(h)={h.n}")
    basis: list[tuple[int, Vector]] = []
    added = 0
    for i in range(1, flag.n + 1):
        while added < h(i):
            col = _reduce_against(list(flag.columns[added]), basis)
            piv = _first_nonzero(col)
            if piv is None:
                raise ValueError("singular flag matrix")
            basis.append((piv, tuple(col)))
            added += 1
        target = _reduce_against(list(x.apply(flag.columns[i - 1])), basis)
        if any(target):
            return False
    return True


def hess_zero_coordinates(
    w: Permutation, lam: Composition, h: HessenbergFunction
) -> set[tuple[int, int]]:
    """Coordinates set to zero when cutting D_w down to Hess(X_lambda, h).

    Keys (w(k), w(l)) for (k,l) in inv_lambda(w) minus inv_{lambda,h}(w).
    """
    if not is_row_strict(tableau_of(w, lam)):
        raise ValueError("R(w) is not row-strict")
    hess = hessenberg_inversions(w, lam, h)
    spr = springer_inversions(w, lam)
    return {(w(k), w(l)) for (k, l) in spr.pairs - hess.pairs}


def difference_residual(w: Permutation, lam: Composition, l: int) -> Vector:
    """v_l - X v_r - sum over (t,l) inversions of x_{w(t)w(l)} v_t.

    Identically zero for every generic flag; `l` must not end its row.
    """
    tab = tableau_of(w, lam)
    r = tab.right_neighbor(l)
    if r is None:
        raise ValueError(f"{l} labels a box at the end of its row")
    flag = generic_flag(w, lam)
    x = nilpotent_matrix(lam, POLYNOMIALS)
    residual = list(flag.columns[l - 1])
    for idx, val in enumerate(x.apply(flag.columns[r - 1])):
        residual[idx] = residual[idx] - val
    for t, ll in springer_inversions(w, lam).sorted_pairs():
        if ll == l:
            coeff = Poly.var(w(t), w(l))
            for idx, val in enumerate(flag.columns[t - 1]):
                residual[idx] = residual[idx] - coeff * val
    return tuple(residual)


def bruhat_canonical_form(g: ExactMatrix) -> tuple[Permutation, ExactMatrix]:
    """Unique (w, u) with u in U^w and uwB = gB, for invertible g over a field.

    Columns are processed left to right; each pivot is the bottom-most
    nonzero entry of its column, which determines w; clearing to the right
    of each pivot leaves the residual factor in U^w.
    """
    dom = g.domain
    if not dom.is_field():
        raise ValueError("bruhat_canonical_form requires a field domain")
    n = g.n
    cols = [list(g.column(j)) for j in range(1, n + 1)]
    word = [0] * n
    for j in range(n):
        r = next((r for r in range(n - 1, -1, -1) if cols[j][r]), None)
        if r is None:
            raise ValueError("matrix is singular")
        word[j] = r + 1
        inv_p = dom.div(dom.one(), cols[j][r])
        cols[j] = [x * inv_p for x in cols[j]]
        for j2 in range(j + 1, n):
            c = cols[j2][r]
            if c:
                cols[j2] = [x - c * y for x, y in zip(cols[j2], cols[j])]
    w = Permutation(word)
    u = ExactMatrix.zero(dom, n)
    for j in range(n):
        for i in range(n):
            if cols[j][i] != dom.zero():
                u = u.with_entry(i + 1, word[j], cols[j][i])
    assert UnipotentPattern.schubert(w).contains(u)
    return w, u


def factor_unipotent(
    u: ExactMatrix, w: Permutation
) -> tuple[ExactMatrix, ExactMatrix]:
    """Factor uw = u_i v u_0 y with u_i in U_i (i = w(n)) and u_0 in U^y.

    Returns (u_i, u_0); v and y come from factorize(w).
    """
    if not UnipotentPattern.schubert(w).contains(u):
        raise ValueError("u does not lie in the U^w pattern")
    dom = u.domain
    n = u.n
    i = w(n)
    v, y = factorize(w)
    m = u @ ExactMatrix.permutation(dom, w)
    m_inv = ExactMatrix.permutation(dom, w).transpose() @ u._unipotent_inverse()
    t = m_inv.rows[n - 1]
    u_i = ExactMatrix.identity(dom, n)
    for j in range(i + 1, n + 1):
        if t[j - 1]:
            u_i = u_i.with_entry(i, j, dom.zero() - t[j - 1])
    rest = u_i._unipotent_inverse() @ m
    u0 = (
        ExactMatrix.permutation(dom, v).transpose()
        @ rest
        @ ExactMatrix.permutation(dom, y).transpose()
    )
    if not UnipotentPattern.schubert(y).contains(u0):
        raise ValueError("factorization failed: u_0 not in U^y")
    return u_i, u0


def bn_split(
    g_n: ExactMatrix, w: Permutation, lam: Composition
) -> tuple[ExactMatrix, ExactMatrix]:
    """Split g_n in B_n(w) as u_i b_n with u_i in U_i and b_n in v U_0 v^{-1}.

    u_i carries the i-th row of g_n (i = w(n)); the product recovers g_n.
    """
    dom = g_n.domain
    n = w.n
    i = w(n)
    level = springer_inversions(w, lam).level(n)
    coords = {(i, w(l)): g_n.entry(i, w(l)) for l in level}
    if bk_generator(w, lam, n, coords, dom) != g_n:
        raise ValueError("input is not an element of B_n(w)")
    u_i = ExactMatrix.identity(dom, n)
    for l in level:
        u_i = u_i.with_entry(i, w(l), coords[(i, w(l))])
    b_n = u_i._unipotent_inverse() @ g_n
    v, _ = factorize(w)
    vmat = ExactMatrix.permutation(dom, v)
    conj = vmat.transpose() @ b_n @ vmat
    if not UnipotentPattern.top_left_block(n).contains(conj):
        raise ValueError("split failed: b_n not in v U_0 v^{-1}")
    return u_i, b_n


def project_cell(flag: Flag) -> Flag:
    """The inductive projection C_w -> C_y: uwE = u_i v u_0 y E maps to u_0 y E'.

    Returns a flag in C^{n-1}; the flag matrix must be invertible over a
    field domain.
    """
    m = flag.matrix()
    w, u = bruhat_canonical_form(m)
    _, u0 = factor_unipotent(u, w)
    _, y = factorize(w)
    dom = flag.domain
    full = u0 @ ExactMatrix.permutation(dom, y)
    block = ExactMatrix.from_rows(
        dom, [row[: flag.n - 1] for row in full.rows[: flag.n - 1]]
    )
    return Flag.from_matrix(block)


def conjugate(g: ExactMatrix, x: ExactMatrix) -> ExactMatrix:
    """g^{-1} X g over a field domain."""
    return g.inverse() @ x @ g


def matrix_to_json(m: ExactMatrix) -> dict:
    """Exchange format: dense row-major; polynomials as monomial lists."""
    entries = []
    for row in m.rows:
        out_row = []
        for x in row:
            if isinstance(x, Poly):
                out_row.append(x.monomial_list())
            elif isinstance(x, GF):
                out_row.append(x.v)
            elif isinstance(x, Fraction):
                out_row.append(str(x) if x.denominator != 1 else x.numerator)
            else:
                out_row.append(x)
        entries.append(out_row)
    return {"n": m.n, "domain": m.domain.kind, "entries": entries}
