"""Graded intersection rings given by explicit structure constants, plus GRR bookkeeping.

A ring is a finite Q-basis with degrees, a unit in degree 0, a point class in
top degree and a symmetric product table. Pairs missing from the table multiply
to zero; when such a pair is actually hit with nonzero coefficients an
UndeclaredProduct warning names it, unless the ring says its remaining
products are zero on purpose.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .mukai import MukaiVector

Coeff = Fraction | int


class RingError(ValueError):
    pass


class RingMismatch(RingError):
    pass


class InhomogeneousInput(RingError):
    pass


class MissingPullbackImages(RingError):
    pass


class UndeclaredProduct(UserWarning):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.replace(" ", ""))
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use integers or 'p/q' strings")
    return Fraction(x)


@dataclass(eq=False)
class IntersectionRing:
    name: str
    dim: int
    basis: tuple[tuple[str, int], ...]
    point: str
    products: dict = field(default_factory=dict)
    citations: dict = field(default_factory=dict)
    others_zero: str | None = None

    def __post_init__(self):
        self.basis = tuple((str(n), int(d)) for n, d in self.basis)
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise RingError(f"{self.name}: duplicate basis names")
        self.index = {n: i for i, n in enumerate(names)}
        self.degrees = tuple(d for _, d in self.basis)
        units = [i for i, d in enumerate(self.degrees) if d == 0]
        if len(units) != 1:
            raise RingError(f"{self.name}: need exactly one degree-0 basis element")
        self.unit = units[0]
        if self.point not in self.index or self.degrees[self.index[self.point]] != self.dim:
            raise RingError(f"{self.name}: point class must be a basis element of degree {self.dim}")
        if any(d < 0 or d > self.dim for d in self.degrees):
            raise RingError(f"{self.name}: basis degrees must lie in 0..{self.dim}")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        cites: dict[tuple[int, int], str] = {}
        for (a, b), val in dict(self.products).items():
            i, j = self._idx(a), self._idx(b)
            key = (min(i, j), max(i, j))
            vec = {self._idx(k): _frac(c) for k, c in dict(val).items() if _frac(c) != 0}
            target = self.degrees[i] + self.degrees[j]
            for k in vec:
                if self.degrees[k] != target:
                    raise RingError(
                        f"{self.name}: product {a}*{b} has degree {target} but lists {self.basis[k][0]}"
                    )
            if key in table and table[key] != vec:
                raise RingError(f"{self.name}: conflicting entries for {a}*{b}")
            table[key] = vec
            c = self.citations.get((a, b)) or self.citations.get((b, a))
            if c:
                cites[key] = c
        self._table = table
        self._cites = cites

    def _idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise RingError(f"{self.name}: unknown basis element {name!r}") from None

    @property
    def size(self) -> int:
        return len(self.basis)

    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    def product_basis(self, i: int, j: int) -> dict[int, Fraction] | None:
        """Structure constants of e_i * e_j, or None when undeclared."""
        if i == self.unit:
            return {j: Fraction(1)}
        if j == self.unit:
            return {i: Fraction(1)}
        if self.degrees[i] + self.degrees[j] > self.dim:
            return {}
        return self._table.get((min(i, j), max(i, j)))

    def undeclared_pairs(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.size):
            for j in range(i, self.size):
                if self.product_basis(i, j) is None:
                    out.append((self.basis[i][0], self.basis[j][0]))
        return out

    def citation(self, a: str, b: str) -> str | None:
        i, j = self._idx(a), self._idx(b)
        return self._cites.get((min(i, j), max(i, j)))

    # class constructors

    def zero(self) -> "GradedClass":
        return GradedClass(self, (Fraction(0),) * self.size)

    def one(self) -> "GradedClass":
        return self.basis_class(self.basis[self.unit][0])

    def basis_class(self, name: str, coeff: Coeff = 1) -> "GradedClass":
        c = [Fraction(0)] * self.size
        c[self._idx(name)] = _frac(coeff)
        return GradedClass(self, tuple(c))

    def cls(self, terms: Mapping[str, Coeff] | None = None, **kw) -> "GradedClass":
        c = [Fraction(0)] * self.size
        for k, v in {**(terms or {}), **kw}.items():
            c[self._idx(str(k))] += _frac(v)
        return GradedClass(self, tuple(c))

    def pointclass(self, n: Coeff = 1) -> "GradedClass":
        return self.basis_class(self.point, n)

    def __repr__(self):
        return f"IntersectionRing({self.name!r}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class GradedClass:
    ring: IntersectionRing
    coeffs: tuple[Fraction, ...]

    def _same(self, other: "GradedClass"):
        if other.ring is not self.ring:
            raise RingMismatch(f"classes live in {self.ring.name} and {other.ring.name}")

    def __add__(self, other: "GradedClass") -> "GradedClass":
        self._same(other)
        return GradedClass(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "GradedClass") -> "GradedClass":
        self._same(other)
        return GradedClass(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "GradedClass":
        return GradedClass(self.ring, tuple(-a for a in self.coeffs))

    def scale(self, k: Coeff) -> "GradedClass":
        k = _frac(k)
        return GradedClass(self.ring, tuple(k * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, k):
        return self.scale(k)

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return other.ring is self.ring and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __getitem__(self, name: str) -> Fraction:
        return self.coeffs[self.ring._idx(name)]

    def terms(self) -> dict[str, Fraction]:
        return {n: c for (n, _), c in zip(self.ring.basis, self.coeffs) if c != 0}

    def component(self, k: int) -> "GradedClass":
        return GradedClass(
            self.ring, tuple(c if d == k else Fraction(0) for c, d in zip(self.coeffs, self.ring.degrees))
        )

    def degrees_present(self) -> set[int]:
        return {d for c, d in zip(self.coeffs, self.ring.degrees) if c != 0}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def constant(self) -> Fraction:
        return self.coeffs[self.ring.unit]

    def slots(self) -> list[str]:
        """Degree-by-degree rendering; the top slot is written as its integral."""
        out = []
        for k in range(self.ring.dim + 1):
            part = self.component(k)
            if k == self.ring.dim:
                out.append(fmt(integrate(part)))
            elif k == 0:
                out.append(fmt(part.constant()))
            else:
                out.append(format_terms(part.terms()))
        return out

    def __str__(self):
        return "(" + ", ".join(self.slots()) + ")"

    def __repr__(self):
        return f"GradedClass({self.ring.name}, {self.terms()})"


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_terms(terms: Mapping[str, Fraction]) -> str:
    if not terms:
        return "0"
    parts = []
    for name, c in terms.items():
        if c == 1:
            parts.append(f"+{name}")
        elif c == -1:
            parts.append(f"-{name}")
        else:
            s = fmt(c)
            parts.append(("" if s.startswith("-") else "+") + f"{s}*{name}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def mul(x: GradedClass, y: GradedClass) -> GradedClass:
    x._same(y)
    ring = x.ring
    out = [Fraction(0)] * ring.size
    missing = set()
    xs = [(i, c) for i, c in enumerate(x.coeffs) if c]
    ys = [(j, c) for j, c in enumerate(y.coeffs) if c]
    for i, a in xs:
        for j, b in ys:
            prod = ring.product_basis(i, j)
            if prod is None:
                missing.add((min(i, j), max(i, j)))
                continue
            for k, s in prod.items():
                out[k] += a * b * s
    if missing and ring.others_zero is None:
        names = ", ".join(f"{ring.basis[i][0]}*{ring.basis[j][0]}" for i, j in sorted(missing))
        warnings.warn(f"{ring.name}: undeclared products treated as 0: {names}", UndeclaredProduct, stacklevel=2)
    return GradedClass(ring, tuple(out))


def power(x: GradedClass, n: int) -> GradedClass:
    out = x.ring.one()
    for _ in range(n):
        out = mul(out, x)
    return out


def integrate(x: GradedClass) -> Fraction:
    return x.coeffs[x.ring.index[x.ring.point]]


def _check_degree(c: GradedClass, k: int, what: str):
    if c.degrees_present() - {k}:
        raise InhomogeneousInput(f"{what} must be homogeneous of degree {k}")


def ch_line(c1: GradedClass) -> GradedClass:
    """exp(c1) truncated at the ring dimension."""
    _check_degree(c1, 1, "c1")
    out = c1.ring.zero()
    term = c1.ring.one()
    for k in range(c1.ring.dim + 1):
        out = out + term.scale(Fraction(1, factorial(k)))
        term = mul(term, c1)
    return out


# x / (1 - e^{-x}) = sum B_k^+ x^k / k!, coefficients up to degree 3 are all we need
TODD_SERIES = (Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0))


def todd_line(c1: GradedClass) -> GradedClass:
    """Todd class of a line bundle with first Chern class c1."""
    _check_degree(c1, 1, "c1")
    if c1.ring.dim >= len(TODD_SERIES):
        raise RingError("todd_line supports dimension <= 3")
    out = c1.ring.zero()
    term = c1.ring.one()
    for k in range(c1.ring.dim + 1):
        out = out + term.scale(TODD_SERIES[k])
        term = mul(term, c1)
    return out


def inverse(x: GradedClass) -> GradedClass:
    """Multiplicative inverse of a class with constant term 1 (geometric series)."""
    if x.constant() != 1:
        raise RingError("only classes with constant term 1 are inverted")
    n = x - x.ring.one()
    out = x.ring.one()
    term = x.ring.one()
    for _ in range(x.ring.dim):
        term = mul(term, -n)
        out = out + term
    return out


def curve_ring(name: str = "C", point: str = "pt") -> IntersectionRing:
    return IntersectionRing(name, 1, (("1", 0), (point, 1)), point)


def todd_curve(g: int, ring: IntersectionRing | None = None) -> GradedClass:
    """(1, (1-g) pt) on a genus-g curve."""
    ring = ring or curve_ring()
    if ring.dim != 1:
        raise RingError("todd_curve needs a curve ring")
    return ring.one() + ring.pointclass(1 - g)


class ToddMode(enum.Enum):
    STANDARD = "standard"
    PAPER_FAITHFUL = "paper"

    @classmethod
    def parse(cls, s) -> "ToddMode":
        if isinstance(s, ToddMode):
            return s
        key = str(s).lower().replace("-", "").replace("_", "")
        if key in ("standard", "classical"):
            return cls.STANDARD
        if key in ("paper", "paperfaithful", "faithful"):
            return cls.PAPER_FAITHFUL
        raise ValueError(f"unknown Todd mode {s!r}")


def todd_surface(c1: GradedClass, c2_integral: Coeff, mode: ToddMode | str = ToddMode.STANDARD) -> GradedClass:
    """(1, c1/2, t pt) with t = (c1^2 + c2)/12, or (c1^2 - c2)/12 in PAPER_FAITHFUL mode."""
    mode = ToddMode.parse(mode)
    ring = c1.ring
    if ring.dim != 2:
        raise RingError("todd_surface needs a surface ring")
    if not c1.is_zero():
        _check_degree(c1, 1, "c1")
    c1sq = integrate(mul(c1, c1))
    c2 = _frac(c2_integral)
    t = (c1sq + c2) / 12 if mode is ToddMode.STANDARD else (c1sq - c2) / 12
    return ring.one() + c1.scale(Fraction(1, 2)) + ring.pointclass(t)


@dataclass(eq=False)
class ProperMorphism:
    """Linear pushforward data between two rings.

    rel_dim = dim(source) - dim(target); closed embeddings have negative rel_dim.
    `pushforward` and `pullback` map basis names to classes; names left out map to 0.
    `factor_pullback` optionally records the images of the algebraic K3 classes
    1, h, pt under the projection to the surface factor of a product.
    """

    name: str
    source: IntersectionRing
    target: IntersectionRing
    pushforward: dict = field(default_factory=dict)
    rel_todd: GradedClass | None = None
    pullback: dict | None = None
    factor_pullback: dict | None = None
    rel_dim: int | None = None

    def __post_init__(self):
        expected = self.source.dim - self.target.dim
        if self.rel_dim is None:
            self.rel_dim = expected
        elif self.rel_dim != expected:
            raise RingError(f"{self.name}: rel_dim {self.rel_dim} but dimensions give {expected}")
        if self.rel_todd is None:
            self.rel_todd = self.source.one()
        if self.rel_todd.ring is not self.source:
            raise RingMismatch(f"{self.name}: relative Todd class must live on the source")
        self._push = self._table(self.pushforward, self.source, self.target, -self.rel_dim, "pushforward")
        self._pull = (
            self._table(self.pullback, self.target, self.source, 0, "pullback") if self.pullback is not None else None
        )
        if self.factor_pullback is not None:
            self.factor_pullback = {
                k: (v if isinstance(v, GradedClass) else self.source.cls(v)) for k, v in self.factor_pullback.items()
            }
            for k, v in self.factor_pullback.items():
                if v.ring is not self.source:
                    raise RingMismatch(f"{self.name}: factor pullback of {k} must live on the source")

    def _table(self, data, src, dst, shift, what):
        out = {}
        for name, img in dict(data).items():
            i = src._idx(str(name))
            if not isinstance(img, GradedClass):
                img = dst.cls(img)
            if img.ring is not dst:
                raise RingMismatch(f"{self.name}: {what} image of {name} lives in the wrong ring")
            want = src.degrees[i] + shift
            if img.degrees_present() - {want}:
                raise RingError(f"{self.name}: {what} of {name} must have degree {want}")
            out[i] = img
        return out

    def push(self, x: GradedClass) -> GradedClass:
        if x.ring is not self.source:
            raise RingMismatch(f"{self.name}: pushforward input must live on {self.source.name}")
        out = self.target.zero()
        for i, c in enumerate(x.coeffs):
            if c and i in self._push:
                out = out + self._push[i].scale(c)
        return out

    def pull(self, y: GradedClass) -> GradedClass:
        if self._pull is None:
            raise MissingPullbackImages(f"{self.name}: no pullback declared")
        if y.ring is not self.target:
            raise RingMismatch(f"{self.name}: pullback input must live on {self.target.name}")
        out = self.source.zero()
        for i, c in enumerate(y.coeffs):
            if c and i in self._pull:
                out = out + self._pull[i].scale(c)
        return out

    def pull_mukai(self, v: MukaiVector) -> GradedClass:
        """Pull back r + a h + s pt from the surface factor."""
        fp = self.factor_pullback
        if not fp or not {"1", "h", "pt"} <= set(fp):
            raise MissingPullbackImages(f"{self.name}: images of 1, h, pt under the surface projection are required")
        return fp["1"].scale(v.r) + fp["h"].scale(v.a) + fp["pt"].scale(v.s)


def grr_pushforward(f: ProperMorphism, chF: GradedClass, todd: GradedClass | None = None) -> GradedClass:
    """f_*(ch(F) td), with td the morphism's relative Todd class unless overridden."""
    td = f.rel_todd if todd is None else todd
    return f.push(mul(chF, td))


def family_degree(ch_family: GradedClass, mukai_dual: MukaiVector, proj: ProperMorphism) -> int:
    """Degree of lambda_E(alpha) on the base curve for a family on S x C.

    mukai_dual is the Mukai vector v(E) = (r, a, s) of the class paired with the
    family. On a K3 surface sqrt(td) = (1, 0, 1), so ch(E) = (r, a h, s - r);
    proj is the projection S x C -> C whose relative Todd class is the pullback of td(S).
    """
    if ch_family.ring is not proj.source:
        raise RingMismatch("family class must live on the source of the projection")
    chE = MukaiVector(mukai_dual.r, mukai_dual.a, mukai_dual.s - mukai_dual.r)
    pulled = proj.pull_mukai(chE)
    pushed = grr_pushforward(proj, mul(ch_family, pulled))
    if proj.target.dim != 1:
        raise RingError("family_degree needs a curve as base")
    val = integrate(pushed)
    if val.denominator != 1:
        raise RingError(f"non-integral degree {val}")
    return int(val)


def check_ring_axioms(ring: IntersectionRing) -> list[str]:
    """Commutativity is built in; report associativity failures over all basis triples."""
    problems = []
    basis = [ring.basis_class(n) for n in ring.names()]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UndeclaredProduct)
        for a in basis:
            for b in basis:
                ab = mul(a, b)
                if ab != mul(b, a):
                    problems.append(f"{a.terms()} * {b.terms()} not commutative")
                for c in basis:
                    if mul(ab, c) != mul(a, mul(b, c)):
                        problems.append(f"({a.terms()}*{b.terms()})*{c.terms()} not associative")
    return problems


def linear_combination(terms: Sequence[tuple[Coeff, GradedClass]]) -> GradedClass:
    out = None
    for k, c in terms:
        out = c.scale(k) if out is None else out + c.scale(k)
    if out is None:
        raise RingError("empty combination")
    return out


def compose(first: ProperMorphism, second: ProperMorphism, name: str | None = None) -> ProperMorphism:
    """second o first. Needs the pullback of `first` to transport Todd and factor data."""
    if first.target is not second.source:
        raise RingMismatch("morphisms do not compose")
    push = {n: second.push(first.push(first.source.basis_class(n))) for n in first.source.names()}
    td = mul(first.rel_todd, first.pull(second.rel_todd))
    fp = None
    if second.factor_pullback:
        fp = {k: first.pull(v) for k, v in second.factor_pullback.items()}
    return ProperMorphism(
        name or f"{second.name}.{first.name}", first.source, second.target, push, td, factor_pullback=fp
    )
