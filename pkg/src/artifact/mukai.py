"""Mukai vectors on a degree-2 K3 surface of Picard rank one, and the lattice Gamma_v.

The algebraic Mukai lattice is Z^3 with coordinates (r, a, s) standing for
r + a*h + s*pt, where h^2 = 2. The full Mukai lattice is modelled as
U ⊕ U^3 ⊕ E8(-1)^2 with h = u1 + w1 in the second hyperbolic plane.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import IntMatrix, RatVector, integer_kernel, vector_gcd
from .lattice import (
    Lattice,
    LatticeError,
    LatticeVector,
    Overlattice,
    Sublattice,
    ZeroVector,
    diagonal,
    direct_sum,
    direct_sum_all,
    divisibility,
    e8_negative,
    hyperbolic_plane,
    orth_complement,
    overlattice,
    primitive_part,
)

SIGMA_SQUARE = -6


class InvalidVector(ValueError):
    pass


class NotInGamma(ValueError):
    pass


class NonIntegralSquare(ArithmeticError):
    pass


class NonPositive(ValueError):
    pass


@dataclass(frozen=True)
class MukaiVector:
    r: int
    a: int
    s: int

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.a + other.a, self.s + other.s)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.a - other.a, self.s - other.s)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, -self.a, -self.s)

    def __mul__(self, k: int) -> "MukaiVector":
        return MukaiVector(k * self.r, k * self.a, k * self.s)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.r
        yield self.a
        yield self.s

    def dual(self) -> "MukaiVector":
        return MukaiVector(self.r, -self.a, self.s)

    def square(self) -> int:
        return mukai_pairing(self, self)

    def is_zero(self) -> bool:
        return self.r == 0 and self.a == 0 and self.s == 0

    def divisor(self) -> int:
        """gcd of the coordinates (the largest m with self/m integral)."""
        return vector_gcd(self)

    def __str__(self):
        return f"({self.r},{self.a}h,{self.s})"


ALGEBRAIC_GRAM = IntMatrix([[0, 0, -1], [0, 2, 0], [-1, 0, 0]])


def mukai_pairing(x: MukaiVector, y: MukaiVector) -> int:
    return 2 * x.a * y.a - x.r * y.s - y.r * x.s


def is_mukai_vector(x: MukaiVector) -> bool:
    # Pic = Z.h with h ample, so an effective first Chern class means a > 0
    if x.r > 0:
        return True
    if x.r == 0 and x.a > 0:
        return True
    return x.r == 0 and x.a == 0 and x.s > 0


V1 = MukaiVector(0, 2, 4)
V2 = MukaiVector(0, 2, 2)
VECTORS = {"v1": V1, "v2": V2}


def vperp_alg(v: MukaiVector) -> tuple[Lattice, tuple[MukaiVector, MukaiVector]]:
    """Orthogonal complement of v inside the rank-3 algebraic lattice.

    The basis is the row HNF of the kernel, which gives e = (1,h,0), f = (0,0,1)
    for v1 and e = (2,h,0), f = (0,0,1) for v2.
    """
    if v.is_zero():
        raise ZeroVector("v must be nonzero")
    functional = IntMatrix([ALGEBRAIC_GRAM.apply(tuple(v))])
    k = integer_kernel(functional)
    basis = tuple(MukaiVector(*row) for row in k)
    gram = IntMatrix([[mukai_pairing(x, y) for y in basis] for x in basis])
    return Lattice(gram, f"{v}^perp alg"), basis  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class AmbientModel:
    lattice: Lattice
    h_embed: LatticeVector

    def embed(self, x: MukaiVector) -> LatticeVector:
        c = [0] * self.lattice.rank
        c[0], c[1] = x.r, x.s
        c[2] = c[3] = x.a
        return self.lattice.vector(c)


@lru_cache(maxsize=None)
def ambient_model() -> AmbientModel:
    """U_{04} ⊕ U_1 ⊕ U_2 ⊕ U_3 ⊕ E8(-1)^2 with coordinates (u0, w0, u1, w1, ...).

    U_{04} holds H^0 ⊕ H^4 with Gram [[0,-1],[-1,0]] so that the Mukai sign
    convention <(r,0,s),(r',0,s')> = -(rs' + r's) holds on the nose.
    """
    u04 = Lattice(IntMatrix([[0, -1], [-1, 0]]), "U04")
    parts = [u04, hyperbolic_plane("U1"), hyperbolic_plane("U2"), hyperbolic_plane("U3"),
             e8_negative(), e8_negative()]
    lat = direct_sum_all(parts, "Mukai lattice")
    h = lat.vector([0, 0, 1, 1] + [0] * 20)
    return AmbientModel(lat, h)


def vperp_full(model: AmbientModel, v: MukaiVector) -> Sublattice:
    if v.is_zero():
        raise ZeroVector("v must be nonzero")
    return orth_complement(model.lattice, [model.embed(v)])


class Factoriality(enum.Enum):
    LOCALLY_FACTORIAL = "LocallyFactorial"
    TWO_FACTORIAL = "TwoFactorial"


def factoriality(w: MukaiVector) -> Factoriality:
    """Parity test on <gamma, w> over the algebraic basis, for v = 2w with w^2 = 2."""
    if w.divisor() != 1:
        raise InvalidVector(f"{w} is not primitive")
    if w.square() != 2:
        raise InvalidVector(f"{w} has square {w.square()}, expected 2")
    basis = (MukaiVector(1, 0, 0), MukaiVector(0, 1, 0), MukaiVector(0, 0, 1))
    g = vector_gcd(mukai_pairing(b, w) for b in basis)
    return Factoriality.TWO_FACTORIAL if g == 1 else Factoriality.LOCALLY_FACTORIAL


def half_vector(v: MukaiVector) -> MukaiVector:
    if v.r % 2 or v.a % 2 or v.s % 2:
        raise InvalidVector(f"{v} is not divisible by 2")
    return MukaiVector(v.r // 2, v.a // 2, v.s // 2)


def _check_ogrady_regime(v: MukaiVector) -> MukaiVector:
    w = half_vector(v)
    if w.divisor() != 1 or w.square() != 2:
        raise InvalidVector(f"{v} is not of the form 2w with w primitive of square 2")
    return w


@dataclass(frozen=True, eq=False)
class GammaLattice:
    """Gamma_v with the data needed to move classes in and out of it."""

    v: MukaiVector
    model: AmbientModel
    vperp: Sublattice
    base: Lattice  # vperp ⊕ <-6>, sigma is the last coordinate
    lattice: Overlattice
    glue: tuple[RatVector, ...]
    glue_mode: str

    @property
    def index(self) -> int:
        return self.lattice.index

    def base_coords(self, x: MukaiVector, sigma_coeff) -> RatVector:
        """Coordinates in vperp ⊕ Z.sigma of x + sigma_coeff * sigma, with x in v^perp ⊗ Q."""
        amb = self.model.embed(x)
        c = self.vperp.coordinates(amb)
        return RatVector(list(c) + [Fraction(sigma_coeff)])

    def coords(self, x: MukaiVector, sigma_coeff) -> RatVector:
        return self.lattice.from_base(self.base_coords(x, sigma_coeff))

    def vector(self, coords) -> LatticeVector:
        return self.lattice.vector(coords)


def _algebraic_span(model: AmbientModel, vperp: Sublattice, v: MukaiVector) -> list[tuple[int, ...]]:
    _, (e, f) = vperp_alg(v)
    return [vperp.coordinates(model.embed(x)).to_ints() for x in (e, f)]


def _mod2_glue_candidates(gram: IntMatrix, gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """F2-basis of combinations b of gens with <b, gram> even, excluding those in 2L."""
    n = gram.rows
    # functional of each generator on the basis, reduced mod 2
    rows = [[sum(g[k] * gram[k, j] for k in range(n)) % 2 for j in range(n)] for g in gens]
    sols = _f2_left_kernel(rows)
    out = []
    for c in sols:
        b = tuple(sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(n))
        if any(x % 2 for x in b):
            out.append(b)
    return out


def _f2_left_kernel(rows: list[list[int]]) -> list[list[int]]:
    m = len(rows)
    n = len(rows[0]) if rows else 0
    # augment with identity to track combinations
    aug = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    piv_row = 0
    for col in range(n):
        p = next((i for i in range(piv_row, m) if aug[i][col]), None)
        if p is None:
            continue
        aug[piv_row], aug[p] = aug[p], aug[piv_row]
        for i in range(m):
            if i != piv_row and aug[i][col]:
                aug[i] = [(x + y) % 2 for x, y in zip(aug[i], aug[piv_row])]
        piv_row += 1
    return [r[n:] for r in aug[piv_row:]]


@lru_cache(maxsize=None)
def gamma_v(v: MukaiVector, glue_mode: str = "algebraic") -> GammaLattice:
    """Overlattice of v^perp ⊕ Z.sigma glued along (beta/2, sigma/2).

    glue_mode "algebraic" takes beta in the span of the algebraic classes of
    v^perp; "full" allows any beta in v^perp. In both cases beta must pair
    evenly with all of v^perp and beta/2 must not lie in v^perp.
    """
    _check_ogrady_regime(v)
    model = ambient_model()
    vp = vperp_full(model, v)
    vl = vp.lattice(f"{v}^perp")
    base = direct_sum(vl, diagonal(SIGMA_SQUARE, label="sigma"), f"{v}^perp+sigma")
    n = vl.rank
    if glue_mode == "algebraic":
        gens = _algebraic_span(model, vp, v)
    elif glue_mode == "full":
        gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        raise ValueError(f"unknown glue mode {glue_mode!r}")
    betas = _mod2_glue_candidates(vl.gram, gens)
    glue = tuple(RatVector([Fraction(b, 2) for b in beta] + [Fraction(1, 2)]) for beta in betas)
    try:
        lat = overlattice(base, glue, label=f"Gamma_{v}")
    except LatticeError as exc:  # pragma: no cover - would be an internal inconsistency
        raise AssertionError(f"Gamma_v glue failed: {exc}") from exc
    return GammaLattice(v, model, vp, base, lat, glue, glue_mode)


@dataclass(frozen=True)
class GammaClass:
    """The class beta2/2 + (m2/2).sigma of Gamma_v, stored with numerators over 2."""

    v: MukaiVector
    beta2: MukaiVector
    m2: int
    glue_mode: str = "algebraic"

    @classmethod
    def from_class(cls, v: MukaiVector, x: MukaiVector, sigma_coeff, glue_mode: str = "algebraic") -> "GammaClass":
        """Build from an integral algebraic class x and a sigma coefficient (integer or half-integer)."""
        k = Fraction(sigma_coeff) * 2
        if k.denominator != 1:
            raise NotInGamma("sigma coefficient must be a multiple of 1/2")
        return cls(v, 2 * x, int(k), glue_mode)

    @property
    def x(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(c, 2) for c in self.beta2)  # type: ignore[return-value]

    @property
    def sigma_coeff(self) -> Fraction:
        return Fraction(self.m2, 2)

    def gamma(self) -> GammaLattice:
        return gamma_v(self.v, self.glue_mode)

    def coords(self) -> tuple[int, ...]:
        check_membership(self)
        return self._raw_coords().to_ints()

    def _raw_coords(self) -> RatVector:
        g = self.gamma()
        half = MukaiVector(*self.beta2)
        base = g.base_coords(half, 0)
        base = RatVector([c / 2 for c in base[:-1]] + [self.sigma_coeff])
        return g.lattice.from_base(base)

    def vector(self) -> LatticeVector:
        return self.gamma().vector(self.coords())

    def is_zero(self) -> bool:
        return self.beta2.is_zero() and self.m2 == 0

    def __str__(self):
        xs = ",".join(_fmt(c) for c in self.x)
        return f"(x=({xs}), sigma={_fmt(self.sigma_coeff)})"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def membership_violation(c: GammaClass) -> str | None:
    """Name of the first violated membership condition, or None if c lies in Gamma_v."""
    b = c.beta2
    if mukai_pairing(b, c.v) != 0:
        return f"beta is not orthogonal to v: <beta, v> = {Fraction(mukai_pairing(b, c.v), 2)}"
    g = c.gamma()
    vl = g.vperp.lattice()
    bc = g.vperp.coordinates(g.model.embed(b)).to_ints()
    pair = vl.gram.apply(bc)
    if any(p % 2 for p in pair):
        return "beta pairs oddly with v^perp (2x must pair evenly)"
    integral_x = all(t % 2 == 0 for t in b)
    if (c.m2 % 2 == 0) != integral_x:
        return "sigma coefficient parity does not match integrality of beta/2"
    if not c._raw_coords().is_integral():
        return "class is not in the glue group of Gamma_v"
    return None


def check_membership(c: GammaClass) -> None:
    msg = membership_violation(c)
    if msg is not None:
        raise NotInGamma(msg)


def bbf_square(c: GammaClass) -> int:
    check_membership(c)
    q = Fraction(mukai_pairing(c.beta2, c.beta2), 4) + Fraction(c.m2 * c.m2 * SIGMA_SQUARE, 4)
    if q.denominator != 1:
        raise NonIntegralSquare(f"square {q} is not an integer")
    lat = c.gamma().lattice
    vec = c.coords()
    if lat.form(vec, vec) != q:  # pragma: no cover - internal consistency
        raise NonIntegralSquare("lattice and closed-form squares disagree")
    return int(q)


def gamma_divisibility(c: GammaClass) -> int:
    if c.is_zero():
        raise ZeroVector("zero class")
    return divisibility(c.vector())


def add_sigma(c: GammaClass, k: int) -> GammaClass:
    """Shift the sigma coefficient by k whole copies of sigma."""
    out = GammaClass(c.v, c.beta2, c.m2 + 2 * k, c.glue_mode)
    check_membership(out)
    return out


@dataclass(frozen=True)
class ComponentKey:
    d: int
    l: int
    primitive_d: int
    primitive_l: int
    multiple: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.d, self.l, self.primitive_d, self.primitive_l, self.multiple)

    @property
    def component(self) -> tuple[int, int]:
        return (self.primitive_d, self.primitive_l)


def lattice_component_key(x: LatticeVector) -> ComponentKey:
    if x.is_zero():
        raise ZeroVector("zero class")
    d = x.lattice.form(x.coords, x.coords)
    if d <= 0:
        raise NonPositive(f"square {d} is not positive")
    m, x0 = primitive_part(x)
    return ComponentKey(d, divisibility(x), x.lattice.form(x0.coords, x0.coords), divisibility(x0), m)


def component_key(c: GammaClass) -> ComponentKey:
    if c.is_zero():
        raise ZeroVector("zero class")
    q = bbf_square(c)
    if q <= 0:
        raise NonPositive(f"square {q} is not positive")
    return lattice_component_key(c.vector())


def sigma_class(v: MukaiVector, glue_mode: str = "algebraic") -> GammaClass:
    return GammaClass(v, MukaiVector(0, 0, 0), 2, glue_mode)


def class_from_generators(v: MukaiVector, a: int, b: int) -> MukaiVector:
    """a*e + b*f for the algebraic basis (e, f) of v^perp."""
    _, (e, f) = vperp_alg(v)
    return a * e + b * f
