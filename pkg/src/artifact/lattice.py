"""Integral symmetric bilinear forms and the invariants used for monodromy orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm
from typing import Sequence

from .exactnum import (
    IntMatrix,
    RatVector,
    as_matrix,
    charpoly,
    hnf,
    integer_kernel,
    rational_inverse,
    vector_gcd,
)


class LatticeError(ValueError):
    pass


class LatticeMismatch(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class IsotropicKernel(LatticeError):
    pass


class NonIntegralGlue(LatticeError):
    pass


class OddGlue(LatticeError):
    pass


@dataclass(frozen=True, eq=False)
class Lattice:
    gram: IntMatrix
    label: str = ""

    def __post_init__(self):
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if g.rows != g.cols:
            raise LatticeError("Gram matrix must be square")
        if g != g.T:
            raise LatticeError("Gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return self.gram.rows

    def det(self) -> int:
        return self.gram.det()

    def vector(self, coords: Sequence[int]) -> "LatticeVector":
        return LatticeVector(self, tuple(int(c) for c in coords))

    def basis_vector(self, i: int) -> "LatticeVector":
        return self.vector([int(i == j) for j in range(self.rank)])

    def basis(self) -> list["LatticeVector"]:
        return [self.basis_vector(i) for i in range(self.rank)]

    def zero(self) -> "LatticeVector":
        return self.vector([0] * self.rank)

    def form(self, x: Sequence, y: Sequence):
        """Bilinear form on raw (possibly rational) coordinate vectors."""
        gy = [sum(g * b for g, b in zip(row, y)) for row in self.gram]
        return sum(a * b for a, b in zip(x, gy))

    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    def signature(self) -> tuple[int, int]:
        return signature(self.gram)

    def change_basis(self, u) -> "Lattice":
        """Lattice with basis rows of u (unimodular) expressed in the old basis."""
        u = as_matrix(u)
        if abs(u.det()) != 1:
            raise LatticeError("basis change must be unimodular")
        return Lattice(u @ self.gram @ u.T, self.label)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, label={self.label!r})"


@dataclass(frozen=True)
class LatticeVector:
    lattice: Lattice = field(compare=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.lattice.rank:
            raise LatticeError(f"expected {self.lattice.rank} coordinates, got {len(self.coords)}")

    def _check(self, other: "LatticeVector"):
        if other.lattice is not self.lattice:
            raise LatticeMismatch("vectors live in different lattices")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True, eq=False)
class Sublattice:
    ambient: Lattice
    basis: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "basis", as_matrix(self.basis))
        if self.basis.rows and self.basis.cols != self.ambient.rank:
            raise LatticeError("basis rows must use ambient coordinates")

    @property
    def rank(self) -> int:
        return self.basis.rows

    @property
    def induced_gram(self) -> IntMatrix:
        b = self.basis
        return b @ self.ambient.gram @ b.T

    def lattice(self, label: str = "") -> Lattice:
        return Lattice(self.induced_gram, label)

    def to_ambient(self, coords: Sequence[int]) -> LatticeVector:
        return self.ambient.vector(self.basis.T.apply(coords))

    @cached_property
    def _solver(self) -> tuple[list[int], list[list[int]], int]:
        # pivot columns of the echelon form pick out an invertible square block of the basis;
        # its inverse is kept as integer numerators over one common denominator
        h, _ = hnf(self.basis)
        pivots = [next(j for j, x in enumerate(r) if x) for r in h if any(r)]
        block = IntMatrix([[self.basis[i, j] for i in range(self.rank)] for j in pivots])
        inv = rational_inverse(block)
        den = lcm(1, *(x.denominator for row in inv for x in row))
        return pivots, [[int(x * den) for x in row] for row in inv], den

    def coordinates(self, x: LatticeVector | Sequence) -> RatVector:
        """Coordinates of an ambient vector in this basis (rational if x is outside the integral span)."""
        vec = x.coords if isinstance(x, LatticeVector) else tuple(x)
        vden = lcm(1, *(Fraction(t).denominator for t in vec))
        ivec = [int(Fraction(t) * vden) for t in vec]
        pivots, inv, den = self._solver
        rhs = [ivec[j] for j in pivots]
        num = [sum(a * b for a, b in zip(row, rhs)) for row in inv]
        # back-substitution in integers: den * ivec must equal num @ basis
        b = self.basis
        for j in range(b.cols):
            if sum(n * b[i, j] for i, n in enumerate(num) if n) != den * ivec[j]:
                raise LatticeError("vector is not in the rational span of the sublattice")
        return RatVector(Fraction(n, den * vden) for n in num)


def pairing(x: LatticeVector, y: LatticeVector) -> int:
    if x.lattice is not y.lattice:
        raise LatticeMismatch("vectors live in different lattices")
    return x.lattice.form(x.coords, y.coords)


def square(x: LatticeVector) -> int:
    return pairing(x, x)


def divisibility(x: LatticeVector) -> int:
    """Positive generator of the ideal {<x, y> : y in L}."""
    if x.is_zero():
        raise ZeroVector("divisibility of the zero vector")
    g = vector_gcd(x.lattice.gram.apply(x.coords))
    if g == 0:
        raise IsotropicKernel("vector lies in the kernel of the form")
    return g


def primitive_part(x: LatticeVector) -> tuple[int, LatticeVector]:
    m = vector_gcd(x.coords)
    if m == 0:
        raise ZeroVector("primitive part of the zero vector")
    return m, LatticeVector(x.lattice, tuple(c // m for c in x.coords))


def orth_complement(l: Lattice, s: Sequence[LatticeVector]) -> Sublattice:
    """Saturated sublattice of vectors orthogonal to every element of s."""
    for x in s:
        if x.lattice is not l:
            raise LatticeMismatch("vector not in this lattice")
    if not s:
        return Sublattice(l, IntMatrix.identity(l.rank))
    functionals = IntMatrix([l.gram.apply(x.coords) for x in s], cols=l.rank)
    return Sublattice(l, integer_kernel(functionals))


@dataclass(frozen=True, eq=False)
class Overlattice(Lattice):
    """Lattice together with its basis written rationally in the coordinates of `base`."""

    base: Lattice | None = None
    base_basis: tuple[RatVector, ...] = ()
    index: int = 1

    @cached_property
    def _inverse(self) -> tuple[list[list[int]], int]:
        den = lcm(1, *(x.denominator for row in self.base_basis for x in row))
        scaled = IntMatrix([[int(b[j] * den) for b in self.base_basis] for j in range(len(self.base_basis))])
        inv = rational_inverse(scaled)
        d2 = lcm(1, *(x.denominator for row in inv for x in row))
        return [[int(x * den * d2) for x in row] for row in inv], d2

    def from_base(self, coords: Sequence) -> RatVector:
        """Coordinates in this lattice of a (rational) vector given in base coordinates."""
        cden = lcm(1, *(Fraction(t).denominator for t in coords))
        ic = [int(Fraction(t) * cden) for t in coords]
        inv, d2 = self._inverse
        return RatVector(Fraction(sum(a * b for a, b in zip(row, ic) if a), d2 * cden) for row in inv)

    def to_base(self, coords: Sequence) -> RatVector:
        n = len(self.base_basis)
        return RatVector(sum(Fraction(coords[i]) * self.base_basis[i][j] for i in range(n)) for j in range(n))


def overlattice(l: Lattice, glue: Sequence[Sequence], label: str = "") -> Overlattice:
    """Even overlattice generated by l and rational glue vectors (in l's coordinates)."""
    glue = [RatVector(g) for g in glue]
    n = l.rank
    for g in glue:
        if len(g) != n:
            raise LatticeError("glue vector has wrong length")
        for i in range(n):
            if l.form(g, [int(i == j) for j in range(n)]).denominator != 1:
                raise NonIntegralGlue(f"glue {tuple(map(str, g))} pairs non-integrally with basis vector {i}")
    for a, g in enumerate(glue):
        for b, h in enumerate(glue):
            val = l.form(g, h)
            if val.denominator != 1:
                raise NonIntegralGlue(f"glue vectors {a} and {b} pair non-integrally")
            if a == b and val % 2 != 0:
                raise OddGlue(f"glue vector {a} has odd square {val}")
    den = lcm(1, *(x.denominator for g in glue for x in g))
    gens = [[den * int(i == j) for j in range(n)] for i in range(n)]
    gens += [[int(den * x) for x in g] for g in glue]
    h, _ = hnf(gens)
    rows = IntMatrix([r for r in h if any(r)], cols=n)
    basis = tuple(RatVector(Fraction(x, den) for x in r) for r in rows)
    scaled = rows @ l.gram @ rows.T
    d2 = den * den
    if any(x % d2 for r in scaled for x in r):
        raise NonIntegralGlue("non-integral pairing in overlattice")
    gram = IntMatrix([[x // d2 for x in r] for r in scaled], cols=n)
    old = l.det()
    new = gram.det()
    if new == 0 or old % new:
        raise LatticeError("overlattice determinant does not divide the original")
    index = isqrt(old // new)
    if index * index * new != old:
        raise LatticeError("determinant ratio is not a square")
    result = Overlattice(gram, label or l.label, base=l, base_basis=basis, index=index)
    if not result.is_even():
        raise OddGlue("overlattice is not even")
    return result


def direct_sum(a: Lattice, b: Lattice, label: str = "") -> Lattice:
    n, m = a.rank, b.rank
    rows = [list(a.gram.row(i)) + [0] * m for i in range(n)]
    rows += [[0] * n + list(b.gram.row(i)) for i in range(m)]
    return Lattice(IntMatrix(rows, cols=n + m), label or f"{a.label}+{b.label}")


def direct_sum_all(parts: Sequence[Lattice], label: str = "") -> Lattice:
    out = parts[0]
    for p in parts[1:]:
        out = direct_sum(out, p)
    return Lattice(out.gram, label or out.label)


def diagonal(*entries: int, label: str = "") -> Lattice:
    return Lattice(IntMatrix.diag(list(entries)), label or f"<{','.join(map(str, entries))}>")


def hyperbolic_plane(label: str = "U") -> Lattice:
    return Lattice(IntMatrix([[0, 1], [1, 0]]), label)


# E8 Dynkin diagram: nodes 0-1-2-3-4-5-6 form a chain and node 7 hangs off node 4.
E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7))


def e8_negative(label: str = "E8(-1)") -> Lattice:
    """Negated Cartan matrix of E8 in the node order of E8_EDGES."""
    g = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in E8_EDGES:
        g[i][j] = g[j][i] = 1
    return Lattice(IntMatrix(g), label)


def _sign_changes(coeffs: Sequence[int]) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature(gram) -> tuple[int, int]:
    """(positive, negative) inertia indices.

    A symmetric matrix has only real eigenvalues, so Descartes' rule of signs
    on the characteristic polynomial counts positive roots exactly.
    """
    p = charpoly(gram)
    pos = _sign_changes(p)
    neg = _sign_changes([c * (-1) ** k for k, c in enumerate(p)])
    return pos, neg


def gcd_pairings(x: LatticeVector, ys: Sequence[LatticeVector]) -> int:
    g = 0
    for y in ys:
        g = gcd(g, pairing(x, y))
    return g
