from fractions import Fraction

import pytest

import oracles
from artifact import lattice as lt
from artifact.mukai import ambient_model


def test_divisibility_matches_enumeration_on_u_e8():
    assert oracles.divisibility_suite() == []


def test_e8_negative():
    e8 = lt.e8_negative()
    assert e8.det() == 1
    assert e8.is_even()
    assert e8.signature() == (0, 8)


def test_ambient_model_signature():
    lat = ambient_model().lattice
    assert lat.rank == 24
    assert lat.signature() == (4, 20)
    assert abs(lat.det()) == 1


def test_overlattice_index_two():
    base = lt.diagonal(2, 6)
    over = lt.overlattice(base, [[Fraction(1, 2), Fraction(1, 2)]])
    assert over.det() == 3
    assert over.index == 2
    assert over.is_even()
    assert over.to_base(over.from_base([Fraction(1, 2), Fraction(1, 2)])) == (Fraction(1, 2), Fraction(1, 2))


def test_overlattice_errors():
    with pytest.raises(lt.OddGlue):
        lt.overlattice(lt.diagonal(2, 2), [[Fraction(1, 2), Fraction(1, 2)]])
    with pytest.raises(lt.NonIntegralGlue):
        lt.overlattice(lt.diagonal(2), [[Fraction(1, 3)]])


def test_orth_complement_and_primitive_part():
    u = lt.hyperbolic_plane()
    x = u.vector([1, 1])
    perp = lt.orth_complement(u, [x])
    assert perp.basis.tolist() in ([[1, -1]], [[-1, 1]])
    assert perp.induced_gram.tolist() == [[-2]]
    m, x0 = lt.primitive_part(u.vector([4, 6]))
    assert (m, x0.coords) == (2, (2, 3))


def test_zero_and_mismatch_errors():
    u = lt.hyperbolic_plane()
    with pytest.raises(lt.ZeroVector):
        lt.divisibility(u.zero())
    with pytest.raises(lt.LatticeMismatch):
        lt.pairing(u.vector([1, 0]), lt.hyperbolic_plane().vector([1, 0]))
    with pytest.raises(lt.LatticeError):
        lt.Lattice([[0, 1], [2, 0]])


def test_sublattice_coordinates():
    lat = lt.Lattice([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    sub = lt.Sublattice(lat, [[1, 1, 0], [0, 0, 2]])
    assert sub.coordinates([2, 2, 2]) == (2, 1)
    assert sub.coordinates([1, 1, 1]) == (1, Fraction(1, 2))
    with pytest.raises(lt.LatticeError):
        sub.coordinates([1, 0, 0])


def test_change_basis_requires_unimodular():
    with pytest.raises(lt.LatticeError):
        lt.hyperbolic_plane().change_basis([[2, 0], [0, 1]])
