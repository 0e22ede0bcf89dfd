"""Exact integer and rational linear algebra.

Everything here works on Python ints and fractions.Fraction, so there is no
overflow and no rounding. Matrices are small (rank <= 24) and dense.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class SingularMatrix(ValueError):
    pass


class ShapeError(ValueError):
    pass


class IntMatrix:
    """Immutable dense integer matrix stored as a tuple of row tuples."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ShapeError("ragged rows")
            if cols is not None and cols != width:
                raise ShapeError("column count mismatch")
        else:
            width = cols or 0
        self._rows = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.rows

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self._rows == other._rows and self.cols == other.cols
        return NotImplemented

    def __hash__(self):
        return hash((self._rows, self.cols))

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    @property
    def T(self) -> "IntMatrix":
        if not self.rows:
            return IntMatrix([()] * self.cols, cols=0)
        return IntMatrix(zip(*self._rows), cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = list(zip(*other._rows)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
            cols=other.cols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ShapeError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ShapeError("det of non-square matrix")
        return bareiss_det(self.tolist())


class RatVector(tuple):
    """Tuple of Fractions; Fraction already keeps lowest terms with positive denominators."""

    def __new__(cls, entries: Iterable = ()):
        return super().__new__(cls, (Fraction(x) for x in entries))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self)

    def to_ints(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError("vector has non-integral entries")
        return tuple(int(x) for x in self)

    def __repr__(self):
        return "RatVector(" + ", ".join(str(x) for x in self) + ")"


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_combine(rows, i, j, a, b, c, d):
    # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j), with ad - bc = +-1
    ri, rj = rows[i], rows[j]
    rows[i] = [a * x + b * y for x, y in zip(ri, rj)]
    rows[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(m) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns (h, u) with h = u @ m and det(u) = +-1. The nonzero rows of h come
    first, each pivot is positive and lies strictly right of the previous one,
    and entries above a pivot lie in [0, pivot).
    """
    m = as_matrix(m)
    nr, nc = m.rows, m.cols
    h = m.tolist()
    u = IntMatrix.identity(nr).tolist()
    r = 0
    for j in range(nc):
        if r == nr:
            break
        for i in range(r + 1, nr):
            if h[i][j] == 0:
                continue
            g, x, y = _ext_gcd(h[r][j], h[i][j])
            a, b = h[r][j] // g, h[i][j] // g
            # [[x, y], [-b, a]] has determinant x*a + y*b = 1
            _row_combine(h, r, i, x, y, -b, a)
            _row_combine(u, r, i, x, y, -b, a)
        if h[r][j] == 0:
            continue
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][j]
        for i in range(r):
            q = h[i][j] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return IntMatrix(h, cols=nc), IntMatrix(u, cols=nr)


def is_hnf(h) -> bool:
    h = as_matrix(h)
    last = -1
    seen_zero = False
    for i in range(h.rows):
        row = h.row(i)
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            seen_zero = True
            continue
        if seen_zero or piv <= last or row[piv] <= 0:
            return False
        for k in range(i):
            if not 0 <= h[k, piv] < row[piv]:
                return False
        last = piv
    return True


def snf(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form d = u @ m @ v with d_1 | d_2 | ... and u, v unimodular.

    Pivots are chosen as the nonzero entry of least absolute value in the
    remaining block, which keeps intermediate entries small.
    """
    m = as_matrix(m)
    nr, nc = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(nr).tolist()
    vt = IntMatrix.identity(nc).tolist()  # rows of vt are columns of v

    def col_op(i, j, q):
        # column j -= q * column i
        for row in a:
            row[j] -= q * row[i]
        vt[j] = [x - q * y for x, y in zip(vt[j], vt[i])]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        vt[i], vt[j] = vt[j], vt[i]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    col_op(t, j, q)
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                # fold the offending row into the pivot row, then re-reduce
                i = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                u[t] = [x + y for x, y in zip(u[t], u[i])]
                dirty = True
            # move the smallest remaining entry of row/column t into the pivot slot
            cand = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            _, ci, cj = min(cand)
            if ci != t:
                a[t], a[ci] = a[ci], a[t]
                u[t], u[ci] = u[ci], u[t]
            elif cj != t:
                swap_cols(t, cj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    v = IntMatrix(vt, cols=nc).T if nc else IntMatrix([[]] * 0, cols=0)
    return IntMatrix(a, cols=nc), IntMatrix(u, cols=nr), v


def invariant_factors(m) -> tuple[int, ...]:
    d, _, _ = snf(m)
    return tuple(d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i] != 0)


def integer_kernel(m) -> IntMatrix:
    """Rows form a saturated Z-basis of {x in Z^cols : m x = 0}, in HNF."""
    m = as_matrix(m)
    if m.rows == 0:
        return IntMatrix.identity(m.cols)
    h, u = hnf(m.T)
    rank = sum(1 for i in range(h.rows) if any(h.row(i)))
    basis = [u.row(i) for i in range(rank, u.rows)]
    if not basis:
        return IntMatrix([], cols=m.cols)
    kh, _ = hnf(basis)
    return IntMatrix([r for r in kh if any(r)], cols=m.cols)


def rank(m) -> int:
    h, _ = hnf(m)
    return sum(1 for r in h if any(r))


def solve_exact(a, b: Sequence) -> RatVector:
    """Solve a x = b over Q for square nonsingular integer a."""
    a = as_matrix(a)
    n = a.rows
    if a.cols != n or len(b) != n:
        raise ShapeError("solve_exact needs a square system")
    aug = [[Fraction(x) for x in a.row(i)] + [Fraction(b[i])] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        aug[k] = [x / pk for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return RatVector(row[n] for row in aug)


def rational_inverse(a) -> list[list[Fraction]]:
    """Exact inverse of a square nonsingular integer matrix."""
    a = as_matrix(a)
    n = a.rows
    if a.cols != n:
        raise ShapeError("inverse of non-square matrix")
    aug = [[Fraction(x) for x in a.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        if pk != 1:
            aug[k] = [x / pk for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y if y else x for x, y in zip(aug[i], aug[k])]
    return [row[n:] for row in aug]


def vector_gcd(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def charpoly(m) -> list[int]:
    """Coefficients c_0..c_n of det(x I - m), lowest degree first (Faddeev-LeVerrier).

    For an integer matrix every intermediate matrix is integral and each trace is
    divisible by its step number, so the recursion stays in exact integers.
    """
    m = as_matrix(m)
    n = m.rows
    if n != m.cols:
        raise ShapeError("characteristic polynomial needs a square matrix")
    a = m.tolist()
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # mk <- a @ mk + c_{n-k+1} I
        mcols = list(zip(*mk))
        prod = [[sum(x * y for x, y in zip(row, c)) for c in mcols] for row in a]
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        mk = prod
        tr = sum(sum(x * y for x, y in zip(a[i], (mk[t][i] for t in range(n)))) for i in range(n))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("characteristic polynomial not integral")
        coeffs[n - k] = q
    return coeffs
