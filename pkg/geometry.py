"""
Fixed loci of G on Y = E1 x E2 x E3, curve classes, Hodge numbers and trident points
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from errors import GeometryError
from group_core import GGroup, GroupElement, factor_bits

# A point z of E with 4z = 0, in quarter units (4x mod 4, 4y mod 4)
TorsionCoordinate = Tuple[int, int]
QUARTER = 4
BULK_EXPECTED = (3, 3)


class LocusKind(str, Enum):
    ALL = "all"
    EMPTY = "empty"
    CURVES = "curves"


def torsion_solutions(bits) -> Tuple[TorsionCoordinate, ...]:
    """The four solutions of 2z = delta for the half period with bits (bx, by)."""
    bx, by = bits
    return tuple(((bx + 2 * a) % QUARTER, (by + 2 * b) % QUARTER) for a in range(2) for b in range(2))


def move_coordinate(c: TorsionCoordinate, sign: int, bits) -> TorsionCoordinate:
    """z -> sign * z + delta on one factor, delta given by half-period bits."""
    return (sign * c[0] + 2 * bits[0]) % QUARTER, (sign * c[1] + 2 * bits[1]) % QUARTER


@dataclass(frozen=True)
class FixedComponent:
    element: GroupElement
    free_factor: int
    coords: Tuple[TorsionCoordinate, TorsionCoordinate]

    @property
    def twisted_factors(self) -> Tuple[int, int]:
        return tuple(i for i in range(3) if i != self.free_factor)

    @property
    def key(self):
        return self.free_factor, self.coords

    def render(self) -> str:
        parts = []
        for i in range(3):
            if i == self.free_factor:
                parts.append("*")
            else:
                x, y = self.coords[self.twisted_factors.index(i)]
                parts.append(f"{x}/4+{y}/4t")
        return f"{self.element.render()}:[{', '.join(parts)}]"


@dataclass(frozen=True)
class FixedLocus:
    kind: LocusKind
    components: Tuple[FixedComponent, ...] = ()


def fixed_locus(g: GroupElement) -> FixedLocus:
    """
    Fixed set of z -> twist * z + shift on Y.

    Args:
        g (GroupElement): Element of G

    Returns:
        FixedLocus: ALL for the identity, EMPTY when the untwisted factor is translated,
        otherwise the 16 curves E_free x {2z = delta on the twisted factors}
    """
    if g.is_identity:
        return FixedLocus(LocusKind.ALL)
    free = g.untwisted_factor()
    if free is None or factor_bits(g.shift, free) != (0, 0):
        return FixedLocus(LocusKind.EMPTY)
    twisted = [i for i in range(3) if i != free]
    first, second = (torsion_solutions(factor_bits(g.shift, i)) for i in twisted)
    components = tuple(FixedComponent(g, free, (c1, c2)) for c1 in first for c2 in second)
    return FixedLocus(LocusKind.CURVES, components)


def fixed_point_elements(G: GGroup) -> Tuple[GroupElement, ...]:
    return tuple(g for g in G.nontrivial() if fixed_locus(g).kind == LocusKind.CURVES)


def is_free(G: GGroup) -> bool:
    """G acts freely on Y when no nontrivial element has a fixed point."""
    return not fixed_point_elements(G)


def component_image(h: GroupElement, component: FixedComponent) -> FixedComponent:
    coords = tuple(
        move_coordinate(c, h.twist[i], factor_bits(h.shift, i))
        for c, i in zip(component.coords, component.twisted_factors)
    )
    return FixedComponent(component.element, component.free_factor, coords)


@dataclass(frozen=True)
class CurveClass:
    components: Tuple[FixedComponent, ...]
    stabilizer: Tuple[GroupElement, ...]
    genus: int

    @property
    def direction(self) -> int:
        return self.components[0].free_factor

    @property
    def orbit_size(self) -> int:
        return len(self.components)


def curve_classes(G: GGroup) -> Tuple[CurveClass, ...]:
    """
    G-orbits of the fixed curves, with the genus of each image curve in Y/G.

    Args:
        G (GGroup): Group generated from a catalog entry

    Returns:
        tuple: CurveClass values ordered by their first component
    """
    components = []
    owner = {}
    for g in fixed_point_elements(G):
        for component in fixed_locus(g).components:
            if component.key in owner and owner[component.key] != g:
                logging.error(f"Component {component.render()} claimed by {owner[component.key].render()}")
                raise GeometryError(f"two elements of {G.label} share the fixed curve {component.render()}")
            owner[component.key] = g
            components.append(component)

    classes = []
    seen = set()
    for component in components:
        if component in seen:
            continue
        orbit = {}
        stabilizer = []
        for h in G.elements:
            image = component_image(h, component)
            orbit[image] = None
            if image == component:
                stabilizer.append(h)
        seen.update(orbit)
        genus = 0 if any(h.twist[component.free_factor] == -1 for h in stabilizer) else 1
        classes.append(CurveClass(tuple(orbit), tuple(stabilizer), genus))
    return tuple(classes)


def bulk_hodge(G: GGroup) -> Tuple[int, int]:
    """
    Dimensions of the G-invariant (1,1) and (2,1) forms on Y.

    Translations act trivially; dz_i ^ dzbar_j and dz_i ^ dz_j ^ dzbar_k pick up
    the product of the twist signs of the factors involved.
    """
    signs = np.array(G.patterns)
    h11 = sum(1 for i, j in itertools.product(range(3), repeat=2)
              if (signs[:, i] * signs[:, j] == 1).all())
    h21 = sum(1 for (i, j), k in itertools.product(itertools.combinations(range(3), 2), range(3))
              if (signs[:, i] * signs[:, j] * signs[:, k] == 1).all())
    if G.is_catalog_group and (h11, h21) != BULK_EXPECTED:
        raise GeometryError(f"bulk Hodge numbers {(h11, h21)} of {G.label} differ from {BULK_EXPECTED}")
    return h11, h21


@dataclass(frozen=True)
class HodgeNumbers:
    h11: int
    h21: int

    @property
    def euler(self) -> int:
        return 2 * (self.h11 - self.h21)

    def as_tuple(self) -> Tuple[int, int]:
        return self.h11, self.h21


def hodge_numbers(G: GGroup, classes=None) -> HodgeNumbers:
    """
    Hodge numbers of a crepant resolution of Y/G.

    Args:
        G (GGroup): Group generated from a catalog entry
        classes (tuple): Precomputed curve_classes(G)

    Returns:
        HodgeNumbers: bulk + one divisor per curve class, bulk + genus sum
    """
    if classes is None:
        classes = curve_classes(G)
    bulk11, bulk21 = bulk_hodge(G)
    return HodgeNumbers(bulk11 + len(classes), bulk21 + sum(c.genus for c in classes))


def euler_characteristic(hodge: HodgeNumbers) -> int:
    return hodge.euler


def _move_point(h: GroupElement, point):
    return tuple(
        coordinate
        for i in range(3)
        for coordinate in move_coordinate((point[2 * i], point[2 * i + 1]), h.twist[i], factor_bits(h.shift, i))
    )


def trident_points(G: GGroup):
    """
    Points of Y fixed by elements of all three nontrivial twist patterns.

    Returns:
        list: One sorted representative per G-orbit
    """
    fixed = fixed_point_elements(G)
    points = set()
    for g, h in itertools.combinations(fixed, 2):
        if g.twist == h.twist:
            continue
        choices = []
        for i in range(3):
            constraints = {factor_bits(e.shift, i) for e in (g, h) if e.twist[i] == -1}
            if len(constraints) > 1:
                choices = None
                break
            bits = constraints.pop()
            choices.append(torsion_solutions(bits))
        if choices is None:
            continue
        for c1, c2, c3 in itertools.product(*choices):
            points.add(c1 + c2 + c3)

    representatives = []
    seen = set()
    for point in sorted(points):
        if point in seen:
            continue
        orbit = {_move_point(h, point) for h in G.elements}
        if not orbit <= points:
            raise GeometryError(f"orbit of trident point {point} leaves the trident set of {G.label}")
        seen |= orbit
        representatives.append(point)
    return representatives


def trident_and_resolution_count(G: GGroup) -> Tuple[int, int]:
    """
    Number of trident points of Y/G and the 4^t upper bound on local resolution choices.

    Args:
        G (GGroup): Group generated from a catalog entry

    Returns:
        tuple: (trident count, 4 ** trident count as an exact integer)
    """
    count = len(trident_points(G))
    return count, 4 ** count
