"""
Fundamental group of the resolved quotient: deck group pi of C^3 -> Y/G modulo its fixed-point subgroup N
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from catalog import Pi1Label
from errors import GeometryError
from geometry import fixed_point_elements
from group_core import GGroup, GroupElement
from lattice import Lattice

# Coordinates are doubled: half periods become the integer vector of shift bits and
# the period lattice Z^6 becomes 2 Z^6.
Sign6 = Tuple[int, int, int, int, int, int]
Vector6 = Tuple[int, int, int, int, int, int]
TRIVIAL_PATTERN: Sign6 = (1, 1, 1, 1, 1, 1)
ZERO_VECTOR: Vector6 = (0, 0, 0, 0, 0, 0)
WORD_ROUNDS = 200
MAX_WORD_LENGTH = 6


def expand_twist(twist) -> Sign6:
    return tuple(twist[k // 2] for k in range(6))


def twisted_coordinates(twist):
    return [k for k in range(6) if twist[k // 2] == -1]


def affine_compose(a, b):
    """(i, w)(i', w') = (i i', w + i w')"""
    (iota, w), (iota2, w2) = a, b
    return (tuple(p * q for p, q in zip(iota, iota2)),
            tuple(x + s * y for x, s, y in zip(w, iota, w2)))


def affine_inverse(a):
    iota, w = a
    return iota, tuple(-s * x for s, x in zip(iota, w))


def lift(g: GroupElement):
    """Affine lift z -> twist z + shift with the shift bits as the doubled translation."""
    return expand_twist(g.twist), tuple(g.shift)


@dataclass(frozen=True)
class CrystalGroup:
    """Group of affine maps {(i, reps[i] + v) : v in lattice} of C^3 in doubled coordinates."""
    reps: Dict[Sign6, Vector6]
    lattice: Lattice

    @property
    def pattern_count(self) -> int:
        return len(self.reps)

    def contains(self, element) -> bool:
        iota, w = element
        if iota not in self.reps:
            return False
        return self.lattice.contains(tuple(x - r for x, r in zip(w, self.reps[iota])))


def close_crystal_group(generators, base: Lattice) -> CrystalGroup:
    """
    Smallest group of affine maps containing the generators and the translations of base.

    Args:
        generators (list): (sign pattern, doubled translation) pairs
        base (Lattice): Translations known to lie in the group

    Returns:
        CrystalGroup: One representative per sign pattern plus the translation lattice
    """
    reps = {TRIVIAL_PATTERN: ZERO_VECTOR}
    lattice = base
    extra = []

    def absorb(element):
        iota, w = element
        if iota not in reps:
            reps[iota] = w
            return True
        extra.append(tuple(x - r for x, r in zip(w, reps[iota])))
        return False

    changed = False
    for element in generators:
        changed |= absorb(element)
    while True:
        for iota in list(reps):
            extra.extend(tuple(s * x for s, x in zip(iota, v)) for v in lattice.basis)
        for a, b in itertools.product(list(reps.items()), repeat=2):
            changed |= absorb(affine_compose(a, b))
        joined = lattice.join(extra)
        extra = []
        if joined is lattice and not changed:
            break
        lattice, changed = joined, False
    return CrystalGroup(dict(reps), lattice)


@dataclass(frozen=True)
class Pi1Result:
    label: Pi1Label
    n_rank: int
    quotient_order: int
    fixed_patterns: int
    notes: Tuple[str, ...] = ()


def fixed_point_subgroup(G: GGroup) -> CrystalGroup:
    """N: the subgroup of the deck group generated by all elements with a fixed point in C^3."""
    fixed = fixed_point_elements(G)
    coordinates = sorted({k for g in fixed for k in twisted_coordinates(g.twist)})
    # differences of lifts of one element fill 2Z on its twisted coordinates
    base = Lattice.scaled_standard(2, coordinates)
    return close_crystal_group([lift(g) for g in fixed], base)


def deck_group(G: GGroup) -> CrystalGroup:
    return close_crystal_group([lift(g) for g in G.elements], Lattice.scaled_standard(2, range(6)))


def check_saturation_by_words(G: GGroup, N: CrystalGroup, seed: int = 0, rounds: int = WORD_ROUNDS):
    """
    Random words in fixed-point lifts with trivial total pattern must translate by a vector of N.

    Args:
        G (GGroup): Group generated from a catalog entry
        N (CrystalGroup): Output of fixed_point_subgroup
        seed (int): numpy seed
        rounds (int): Number of random words
    """
    fixed = fixed_point_elements(G)
    if not fixed:
        return
    rng = np.random.default_rng(seed)
    for _ in range(rounds):
        length = int(rng.integers(1, MAX_WORD_LENGTH + 1))
        word = (TRIVIAL_PATTERN, ZERO_VECTOR)
        for _ in range(length):
            g = fixed[int(rng.integers(0, len(fixed)))]
            iota, w = lift(g)
            offset = [0] * 6
            for k in twisted_coordinates(g.twist):
                offset[k] = 2 * int(rng.integers(-1, 2))
            letter = (iota, tuple(x + o for x, o in zip(w, offset)))
            if rng.integers(0, 2):
                letter = affine_inverse(letter)
            word = affine_compose(word, letter)
        if not N.contains(word):
            logging.error(f"Word translation {word[1]} escapes L_N of {G.label}")
            raise GeometryError(f"fixed-point lattice of {G.label} is not saturated: {word} lies outside N")


def classify_pi1(G: GGroup, seed: int = 0) -> Pi1Result:
    """
    pi1 of the crepant resolution as pi / N.

    Args:
        G (GGroup): Group generated from a catalog entry
        seed (int): Seed of the random-word saturation check

    Returns:
        Pi1Result: Zero, A, B, C or D with the rank of L_N and |pi/N| when finite
    """
    if not fixed_point_elements(G):
        return Pi1Result(Pi1Label.B, 0, 0, 0, ("free action: pi1 is the deck group itself",))

    N = fixed_point_subgroup(G)
    pi = deck_group(G)
    check_saturation_by_words(G, N, seed)
    rank = N.lattice.rank
    if N.pattern_count and pi.pattern_count % N.pattern_count:
        raise GeometryError(f"pattern group of N does not divide that of pi for {G.label}")
    pattern_index = pi.pattern_count // N.pattern_count

    if rank == 6:
        order = N.lattice.index_in(pi.lattice) * pattern_index
        if order == 1:
            return Pi1Result(Pi1Label.ZERO, rank, order, N.pattern_count)
        if order == 2:
            return Pi1Result(Pi1Label.C, rank, order, N.pattern_count)
        if order == 4:
            generators = [lift(g) for g in G.generators]
            generators += [(TRIVIAL_PATTERN, tuple(2 if k == j else 0 for k in range(6))) for j in range(6)]
            if all(N.contains(affine_compose(x, x)) for x in generators):
                return Pi1Result(Pi1Label.D, rank, order, N.pattern_count, ("every generator squares into N",))
            raise GeometryError(f"pi/N of {G.label} is cyclic of order 4")
        raise GeometryError(f"pi/N of {G.label} has order {order}, outside 1, 2, 4")

    if rank == 4:
        saturation = N.lattice.saturation_index(pi.lattice)
        if saturation != 1:
            raise GeometryError(f"L_N of {G.label} has torsion index {saturation} in L_pi")
        if pattern_index != 2:
            raise GeometryError(f"rank 4 case {G.label} has top quotient of order {pattern_index}")
        return Pi1Result(Pi1Label.A, rank, 0, N.pattern_count, ("Z/2 extended by Z^2",))

    raise GeometryError(f"unclassifiable rank {rank} of L_N for {G.label}")
