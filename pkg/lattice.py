"""
Integer lattices in Z^n: Hermite basis, membership, index and Smith saturation
"""
import math
from dataclasses import dataclass
from typing import Tuple

from sympy import ZZ, Matrix, zeros
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from errors import GeometryError

Vector = Tuple[int, ...]


def _columns(matrix: Matrix) -> Tuple[Vector, ...]:
    return tuple(tuple(int(v) for v in matrix.col(j)) for j in range(matrix.cols))


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^dim, stored as the columns of its Hermite normal form."""
    basis: Tuple[Vector, ...]
    dim: int = 6

    @classmethod
    def from_generators(cls, vectors, dim: int = 6) -> "Lattice":
        """
        Lattice spanned by integer vectors.

        Args:
            vectors (iterable): Integer vectors of length dim
            dim (int): Ambient dimension

        Returns:
            Lattice: Spanned lattice (zero vectors are ignored)
        """
        columns = [tuple(int(x) for x in v) for v in vectors if any(v)]
        if not columns:
            return cls((), dim)
        # zero padding keeps every row in the elimination
        matrix = Matrix.hstack(Matrix(columns).T, zeros(dim, dim))
        reduced = hermite_normal_form(matrix)
        basis = tuple(c for c in _columns(reduced) if any(c))
        expected = Matrix(columns).rank()
        if len(basis) != expected:
            raise GeometryError(f"Hermite basis has {len(basis)} vectors, rank is {expected}")
        lattice = cls(basis, dim)
        if not all(lattice.contains(c) for c in columns):
            raise GeometryError("Hermite basis does not span its generators")
        return lattice

    @classmethod
    def scaled_standard(cls, factor: int, coordinates, dim: int = 6) -> "Lattice":
        """factor * Z^coordinates, e.g. 2 Z^6 or 2 Z on the twisted coordinates."""
        vectors = []
        for k in coordinates:
            v = [0] * dim
            v[k] = factor
            vectors.append(tuple(v))
        return cls.from_generators(vectors, dim)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        if not self.basis:
            return zeros(self.dim, 0)
        return Matrix(self.basis).T

    def coordinates(self, v):
        """Rational coordinates of v in the basis, or None when v is outside the span."""
        if not self.basis:
            return () if not any(v) else None
        try:
            solution, params = self.matrix().gauss_jordan_solve(Matrix(v))
        except ValueError:
            return None
        if params.shape[0]:
            raise GeometryError("lattice basis is not linearly independent")
        return tuple(solution)

    def contains(self, v) -> bool:
        coordinates = self.coordinates(v)
        return coordinates is not None and all(c.is_integer for c in coordinates)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def join(self, vectors) -> "Lattice":
        vectors = [tuple(v) for v in vectors]
        if all(self.contains(v) for v in vectors):
            return self
        return Lattice.from_generators(list(self.basis) + vectors, self.dim)

    def determinant(self) -> int:
        if self.rank != self.dim:
            raise GeometryError(f"determinant of a rank {self.rank} lattice in Z^{self.dim}")
        return abs(int(self.matrix().det()))

    def index_in(self, other: "Lattice") -> int:
        """[other : self] for full rank self contained in other."""
        if not other.contains_lattice(self):
            raise GeometryError("index requested for a lattice that is not a sublattice")
        quotient, remainder = divmod(self.determinant(), other.determinant())
        if remainder:
            raise GeometryError("determinant ratio is not an integer")
        return quotient

    def saturation_index(self, other: "Lattice") -> int:
        """
        Index of self in (span(self) intersected with other).

        Args:
            other (Lattice): Full rank lattice containing self

        Returns:
            int: Product of the invariant factors of the coordinates of self in a basis of other
        """
        if other.rank != other.dim:
            raise GeometryError("saturation is measured inside a full rank lattice")
        if not self.basis:
            return 1
        rows = []
        for v in self.basis:
            coordinates = other.coordinates(v)
            if coordinates is None or not all(c.is_integer for c in coordinates):
                raise GeometryError("saturation requested for a lattice that is not a sublattice")
            rows.append([int(c) for c in coordinates])
        smith = smith_normal_form(Matrix(rows), domain=ZZ)
        return math.prod(abs(int(smith[i, i])) for i in range(self.rank))
