"""Brute-force oracles and the randomized property checks shared by the unit and acceptance suites."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

from artifact import exactnum as en
from artifact import interring as ir
from artifact import lattice as lt
from artifact import mukai as mk
from artifact import scenarios as sc


def leibniz_det(m) -> int:
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def minors_gcd(m, k: int) -> int:
    """gcd of all k x k minors (the k-th determinantal divisor)."""
    rows, cols = len(m), len(m[0])
    g = 0
    for ri in itertools.combinations(range(rows), k):
        for ci in itertools.combinations(range(cols), k):
            g = gcd(g, leibniz_det([[m[i][j] for j in ci] for i in ri]))
    return g


def brute_rank(m) -> int:
    rows, cols = len(m), len(m[0])
    for k in range(min(rows, cols), 0, -1):
        if minors_gcd(m, k):
            return k
    return 0


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -9, hi: int = 9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> list[list[int]]:
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
        if rng.random() < 0.2:
            u[i], u[j] = u[j], u[i]
    return u


def check_matrix(m) -> list[str]:
    """All exactnum invariants on one matrix, against brute-force oracles."""
    problems = []
    a = en.IntMatrix(m)
    rows, cols = a.rows, a.cols
    h, u = en.hnf(a)
    if u @ a != h or abs(u.det()) != 1 or not en.is_hnf(h):
        problems.append("hnf")
    d, p, q = en.snf(a)
    if p @ a @ q != d or abs(p.det()) != 1 or abs(q.det()) != 1:
        problems.append("snf transform")
    diag = [d[i, i] for i in range(min(rows, cols))]
    if any(d[i, j] for i in range(rows) for j in range(cols) if i != j):
        problems.append("snf not diagonal")
    nz = [x for x in diag if x]
    if any(x < 0 for x in diag) or any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
        problems.append("snf divisibility chain")
    r = brute_rank(m)
    if en.rank(a) != r or len(nz) != r:
        problems.append("rank")
    prod = 1
    for k in range(1, r + 1):
        prod *= diag[k - 1]
        if prod != minors_gcd(m, k):
            problems.append(f"determinantal divisor {k}")
    if rows == cols:
        if a.det() != leibniz_det(m):
            problems.append("det")
        cp = en.charpoly(a)
        for t in range(-3, 4):
            shifted = [[(t if i == j else 0) - m[i][j] for j in range(cols)] for i in range(rows)]
            if sum(c * t**k for k, c in enumerate(cp)) != leibniz_det(shifted):
                problems.append("charpoly")
                break
        if leibniz_det(m):
            b = [rng_b for rng_b in range(1, rows + 1)]
            x = en.solve_exact(a, b)
            if any(sum(Fraction(m[i][j]) * x[j] for j in range(cols)) != b[i] for i in range(rows)):
                problems.append("solve")
    ker = en.integer_kernel(a)
    if ker.rows != cols - r or any(any(v) for v in (a @ ker.T)):
        problems.append("kernel")
    elif cols <= 3:
        # saturation: every integral kernel vector in a box is an integral combination
        for x in itertools.product(range(-10, 11), repeat=cols):
            if any(sum(m[i][j] * x[j] for j in range(cols)) for i in range(rows)):
                continue
            if ker.rows == 0:
                if any(x):
                    problems.append("kernel misses vectors")
                continue
            sub = lt.Sublattice(lt.Lattice(en.IntMatrix.identity(cols)), ker)
            if not sub.coordinates(x).is_integral():
                problems.append("kernel not saturated")
                break
    return problems


def exactnum_suite(n: int = 220, seed: int = 1) -> tuple[int, list[str]]:
    rng = random.Random(seed)
    failures = []
    for i in range(n):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        if i % 5 == 0:  # force some rank deficiency
            base = random_matrix(rng, 1, cols)
            m = [[rng.randint(-2, 2) * x for x in base[0]] for _ in range(rows)]
        else:
            m = random_matrix(rng, rows, cols)
        for p in check_matrix(m):
            failures.append(f"{m}: {p}")
    return n, failures


def u_e8() -> lt.Lattice:
    return lt.direct_sum(lt.hyperbolic_plane(), lt.e8_negative(), "U+E8(-1)")


def divisibility_suite(n: int = 120, seed: int = 2) -> list[str]:
    """div via the gcd formula vs two oracles on the unimodular U+E8(-1).

    Unimodularity means the pairing map is onto the dual, so div(x) is the content of x.
    Independently, the gcd of pairings against an enumerated box of lattice vectors
    (a generating set) must agree and be attained as a combination.
    """
    rng = random.Random(seed)
    lat = u_e8()
    fails = []
    box = [lat.vector(list(c) + [0] * 8) for c in itertools.product(range(-4, 5), repeat=2)]
    box += lat.basis()
    for _ in range(n):
        c = [rng.randint(-4, 4) for _ in range(10)]
        if not any(c):
            continue
        x = lat.vector(c)
        d = lt.divisibility(x)
        if d != en.vector_gcd(c):
            fails.append(f"{c}: content")
        vals = [lt.pairing(x, y) for y in box]
        if en.vector_gcd(vals) != d or any(v % d for v in vals):
            fails.append(f"{c}: enumeration")
    return fails


def embed_suite(n: int = 500, seed: int = 3) -> list[str]:
    rng = random.Random(seed)
    model = mk.ambient_model()
    fails = []
    for _ in range(n):
        x = mk.MukaiVector(*(rng.randint(-20, 20) for _ in range(3)))
        y = mk.MukaiVector(*(rng.randint(-20, 20) for _ in range(3)))
        if mk.mukai_pairing(x, y) != lt.pairing(model.embed(x), model.embed(y)):
            fails.append(f"{x},{y}")
    return fails


def gamma_suite(n: int = 100, seed: int = 4) -> list[str]:
    """Evenness and integral squares on Gamma_v for both vectors and both glue choices."""
    rng = random.Random(seed)
    fails = []
    for v in (mk.V1, mk.V2):
        for mode in ("algebraic", "full"):
            g = mk.gamma_v(v, mode)
            lat = g.lattice
            if not lat.is_even() or lat.signature() != (3, 21):
                fails.append(f"{v} {mode}: even/signature")
            for b in lat.basis():
                q = lt.square(b)
                if not isinstance(q, int) or q % 2:
                    fails.append(f"{v} {mode}: basis square {q}")
            for _ in range(n):
                c = [rng.randint(-3, 3) for _ in range(lat.rank)]
                q = lat.form(c, c)
                if q % 2:
                    fails.append(f"{v} {mode}: odd square")
        # algebraic classes built from (e, f, sigma) and the half glue
        g = mk.gamma_v(v)
        for _ in range(n):
            a, b, k = rng.randint(-30, 30), rng.randint(-30, 30), rng.randint(-5, 5)
            c = mk.GammaClass.from_class(v, mk.class_from_generators(v, a, b), k)
            if mk.membership_violation(c) is None:
                q = mk.bbf_square(c)
                if q != mk.mukai_pairing(mk.MukaiVector(*c.beta2), mk.MukaiVector(*c.beta2)) // 4 - 6 * k * k:
                    fails.append(f"{v}: bbf closed form")
            else:
                fails.append(f"{v}: integral class rejected")
    return fails


def unimodular_suite(n: int = 50, seed: int = 5) -> list[str]:
    """component_key is unchanged when Gamma_v is rewritten in a random unimodular basis."""
    rng = random.Random(seed)
    classes = []
    for vname, (a, b) in (("v1", (-4, 52)), ("v2", (-2, 22))):
        v = mk.VECTORS[vname]
        x = mk.class_from_generators(v, a, b)
        base = mk.GammaClass.from_class(v, x, 0 if vname == "v1" else -2)
        classes += [base, mk.add_sigma(base, 1)]
    fails = []
    for _ in range(n):
        for c in classes:
            lat = c.gamma().lattice
            u = en.IntMatrix(random_unimodular(rng, lat.rank))
            new = lat.change_basis(u)
            uinv = en.rational_inverse(u)
            old = c.coords()
            coords = [sum(old[i] * uinv[i][j] for i in range(lat.rank)) for j in range(lat.rank)]
            if any(Fraction(t).denominator != 1 for t in coords):
                fails.append("non-integral coordinates after basis change")
                continue
            before = mk.component_key(c)
            after = mk.lattice_component_key(new.vector([int(t) for t in coords]))
            if before != after:
                fails.append(f"{c}: {before} vs {after}")
    return fails


def k3_ring() -> ir.IntersectionRing:
    return ir.IntersectionRing("S", 2, (("1", 0), ("h", 1), ("pt", 2)), "pt", {("h", "h"): {"pt": 2}})


def point_ring() -> ir.IntersectionRing:
    return ir.IntersectionRing("point", 0, (("1", 0),), "1")


def hrr_suite() -> list[str]:
    fails = []
    s = k3_ring()
    pt = point_ring()
    to_pt = ir.ProperMorphism("S->point", s, pt, {"pt": {"1": 1}})
    td = ir.todd_surface(s.zero(), 24, "standard")
    chi = ir.grr_pushforward(to_pt, s.one(), td).constant()
    if chi != 2:
        fails.append(f"chi(O_K3) = {chi}")
    for g in (0, 2, 5):
        c = ir.curve_ring(f"C{g}")
        to_pt = ir.ProperMorphism("C->point", c, pt, {"pt": {"1": 1}})
        for d in range(-6, 12):
            chi = ir.grr_pushforward(to_pt, ir.ch_line(c.pointclass(d)), ir.todd_curve(g, c)).constant()
            if chi != d + 1 - g:
                fails.append(f"g={g} d={d}: chi={chi}")
    return fails


def catalogued_rings() -> list[ir.IntersectionRing]:
    rings = [k3_ring(), point_ring(), ir.curve_ring()]
    for name in sc.SHIPPED:
        rings += list(sc.load_shipped(name).rings.values())
    return rings


def ring_axiom_suite() -> list[str]:
    fails = []
    for r in catalogued_rings():
        fails += [f"{r.name}: {p}" for p in ir.check_ring_axioms(r)]
    return fails
