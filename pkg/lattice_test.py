import pytest

from errors import GeometryError
from lattice import Lattice


def test_scaled_standard_has_full_rank_and_index():
    even = Lattice.scaled_standard(2, range(6))
    unit = Lattice.scaled_standard(1, range(6))
    assert even.rank == 6
    assert even.determinant() == 64
    assert even.index_in(unit) == 64


def test_generators_with_dependencies():
    lattice = Lattice.from_generators([(2, 0, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0), (2, 2, 0, 0, 0, 0)])
    assert lattice.rank == 2
    assert lattice.contains((4, -2, 0, 0, 0, 0))
    assert not lattice.contains((1, 0, 0, 0, 0, 0))
    assert not lattice.contains((0, 0, 2, 0, 0, 0))


def test_zero_vectors_are_ignored():
    assert Lattice.from_generators([(0,) * 6]).rank == 0
    assert Lattice.from_generators([]).contains((0,) * 6)


def test_join_returns_self_when_nothing_is_new():
    even = Lattice.scaled_standard(2, range(6))
    assert even.join([(4, 0, 0, 0, 0, 2)]) is even
    joined = even.join([(1, 1, 0, 0, 0, 0)])
    assert joined.index_in(Lattice.scaled_standard(1, range(6))) == 32


def test_saturation_index():
    unit = Lattice.scaled_standard(1, range(6))
    assert Lattice.from_generators([(1, 1, 0, 0, 0, 0)]).saturation_index(unit) == 1
    assert Lattice.from_generators([(2, 2, 0, 0, 0, 0)]).saturation_index(unit) == 2
    assert Lattice.scaled_standard(2, [0, 1]).saturation_index(Lattice.scaled_standard(2, range(6))) == 1


def test_saturation_index_multiplies_invariant_factors():
    unit = Lattice.scaled_standard(1, range(6))
    # Smith form of [[2, 2, 0], [0, 2, 2]] is diag(2, 2)
    square = Lattice.from_generators([(2, 2, 0, 0, 0, 0), (0, 2, 2, 0, 0, 0)])
    assert square.saturation_index(unit) == 4
    mixed = Lattice.from_generators([(2, 0, 0, 0, 0, 0), (0, 6, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0)])
    assert mixed.saturation_index(unit) == 12
    assert Lattice.from_generators([]).saturation_index(unit) == 1


def test_index_requires_sublattice():
    even = Lattice.scaled_standard(2, range(6))
    unit = Lattice.scaled_standard(1, range(6))
    with pytest.raises(GeometryError):
        unit.index_in(even)
    with pytest.raises(GeometryError):
        Lattice.scaled_standard(2, [0]).determinant()
