"""
Normalizer of G in A^(3): its image L in L_max, the projection L0 and the named subgroups of Table 1
"""
import itertools
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

import numpy as np

from errors import NormalizerError
from group_core import (
    GGroup,
    IDENTITY_PERM,
    LMAX_IDENTITY,
    LmaxElement,
    PERMUTATIONS,
    PERM_INDEX,
    SBAR_BY_NAME,
    SBAR_ELEMENTS,
    SBAR_IDENTITY,
    SBAR_INDEX,
    ZERO_SHIFT,
    conjugate_by_lmax,
    exact_conjugate,
    lift_lmax,
    lmax_compose,
    perm_compose,
    perm_inverse,
    random_lmax,
    render_perm,
    shift_code,
    shift_from_code,
)

# Stabilizers of the nonzero vectors 1/2, tau/2, (1+tau)/2 of V
B1 = frozenset({SBAR_IDENTITY, SBAR_BY_NAME["t"]})
B2 = frozenset({SBAR_IDENTITY, SBAR_BY_NAME["r"]})
B3 = frozenset({SBAR_IDENTITY, SBAR_BY_NAME["s"]})
BOREL = {1: B1, 2: B2, 3: B3}

SLOT_GROUPS = {
    "1": frozenset({SBAR_IDENTITY}),
    "B_1": B1,
    "B_2": B2,
    "B_3": B3,
    "A_3": frozenset({SBAR_IDENTITY, SBAR_BY_NAME["st"], SBAR_BY_NAME["ts"]}),
    "S": frozenset(SBAR_ELEMENTS),
}

PERM_GROUPS = {
    "1": frozenset({IDENTITY_PERM}),
    "<(1 2)>": frozenset({IDENTITY_PERM, (1, 0, 2)}),
    "<(1 3)>": frozenset({IDENTITY_PERM, (2, 1, 0)}),
    "<(2 3)>": frozenset({IDENTITY_PERM, (0, 2, 1)}),
    "A_3": frozenset({IDENTITY_PERM, (1, 2, 0), (2, 0, 1)}),
    "S_3": frozenset(PERMUTATIONS),
}


class L0Tag(str, Enum):
    FULL = "full"
    BOREL_CUBE = "borelCube"
    BOREL_TILDE = "borelTilde"
    DIAGONAL = "diagonal"
    MIXED = "mixedPair"
    CASE41 = "case41"
    RAW = "raw"


@dataclass(frozen=True)
class LGroup:
    label: str
    elements: Tuple[LmaxElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def translation_kernel(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(l.eps for l in self.elements if l.perm == IDENTITY_PERM
                     and all(x == SBAR_IDENTITY for x in l.sbar))

    def __contains__(self, l) -> bool:
        return l in set(self.elements)


@dataclass(frozen=True)
class L0Descriptor:
    label: str
    elements: FrozenSet
    tag: L0Tag
    name: str
    generators: Tuple[str, ...]
    translation_kernel: Tuple[Tuple[int, ...], ...]
    l_order: int
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def translation_kernel_order(self) -> int:
        return len(self.translation_kernel)


def _sort_key(l: LmaxElement):
    return shift_code(l.eps), tuple(SBAR_INDEX[x] for x in l.sbar), PERM_INDEX[l.perm]


def compute_L(G: GGroup, verify_closure: bool = True) -> LGroup:
    """
    Enumerate L = {l in L_max : l g l^-1 in G for every generator g of G}.

    Args:
        G (GGroup): Group generated from a catalog entry
        verify_closure (bool): Regenerate L from a generating set and compare

    Returns:
        LGroup: Elements of L in lexicographic (eps_bar, sbar, perm) order
    """
    start = time.perf_counter()
    codes = G.codes
    elements = []
    for sbar in itertools.product(SBAR_ELEMENTS, repeat=3):
        for perm in PERMUTATIONS:
            base = LmaxElement(ZERO_SHIFT, sbar, perm)
            checks = []
            for g in G.generators:
                moved = conjugate_by_lmax(base, g)
                mask = 0
                for i in range(3):
                    if moved.twist[i] == -1:
                        mask |= 3 << (2 * i)
                checks.append((moved.code, mask))
            for eps_code in range(64):
                if all((code ^ (eps_code & mask)) in codes for code, mask in checks):
                    elements.append(LmaxElement(shift_from_code(eps_code), sbar, perm))

    if not elements:
        logging.error(f"Normalizer of {G.label} came out empty")
        raise NormalizerError(f"L for {G.label} is empty")

    elements.sort(key=_sort_key)
    L = LGroup(G.label, tuple(elements))
    if verify_closure:
        generated = set(generate_subgroup(small_generating_set(L.elements, lmax_compose, LMAX_IDENTITY),
                                          lmax_compose, LMAX_IDENTITY))
        if generated != set(elements):
            logging.error(f"L for {G.label} is not closed: |L| = {len(elements)}, |<L>| = {len(generated)}")
            raise NormalizerError(f"L for {G.label} is not closed under composition")
    logging.info(f"Computed L for {G.label}: order {L.order} in {time.perf_counter() - start:.2f}s")
    return L


def generate_subgroup(gens, compose, identity):
    """Closure of gens under right multiplication, starting from the identity."""
    elements = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for x in frontier:
            for y in gens:
                z = compose(x, y)
                if z not in elements:
                    elements.add(z)
                    next_frontier.append(z)
        frontier = next_frontier
    return elements


def small_generating_set(elements, compose, identity):
    """Greedy generating set: add the first element not yet generated until all are covered."""
    gens = []
    generated = {identity}
    for x in elements:
        if x in generated:
            continue
        gens.append(x)
        # extend the closure incrementally with the new generator
        frontier = [g for g in generated]
        new = set()
        while frontier:
            next_frontier = []
            for g in frontier:
                for y in gens:
                    z = compose(g, y)
                    if z not in generated and z not in new:
                        new.add(z)
                        next_frontier.append(z)
            frontier = next_frontier
            generated |= new
            new = set()
    return gens


# --- S^3 x| S_3 ---

def pair_compose(a, b):
    """(x, p)(x', p') = (x . p(x'), p p') on (sbar triple, perm) pairs."""
    sbar, perm = a
    sbar2, perm2 = b
    inverse = perm_inverse(perm)
    return tuple(sbar[i].compose(sbar2[inverse[i]]) for i in range(3)), perm_compose(perm, perm2)


PAIR_IDENTITY = ((SBAR_IDENTITY, SBAR_IDENTITY, SBAR_IDENTITY), IDENTITY_PERM)


def product_reference(slots, perms) -> frozenset:
    return frozenset((sbar, perm) for sbar in itertools.product(*slots) for perm in perms)


def borel_tilde(i: int) -> frozenset:
    """{b in B_i^3 : b1 b2 b3 = 1} x S_3, the closed reading of 'one identity and two elements of B_i'."""
    triples = [b for b in itertools.product(BOREL[i], repeat=3)
               if b[0].compose(b[1]).compose(b[2]) == SBAR_IDENTITY]
    return frozenset((b, perm) for b in triples for perm in PERMUTATIONS)


def diagonal_reference() -> frozenset:
    return frozenset(((x, x, x), perm) for x in SBAR_ELEMENTS for perm in PERMUTATIONS)


def case41_kernel() -> frozenset:
    """N = <(t,s,r), (s,r,t), (r,t,s)> inside S^3."""
    t, s, r = SBAR_BY_NAME["t"], SBAR_BY_NAME["s"], SBAR_BY_NAME["r"]
    gens = [((t, s, r), IDENTITY_PERM), ((s, r, t), IDENTITY_PERM), ((r, t, s), IDENTITY_PERM)]
    return frozenset(generate_subgroup(gens, pair_compose, PAIR_IDENTITY))


def _compress_slots(names) -> str:
    parts = []
    for name, run in itertools.groupby(names):
        count = len(list(run))
        parts.append(name if count == 1 else f"{name}^{count}")
    return "×".join(parts)


def product_name(slot_names, perm_name) -> str:
    if len(set(slot_names)) == 1:
        base = "S^3" if slot_names[0] == "S" else _compress_slots(slot_names)
        return base if perm_name == "1" else f"{base}⋊{perm_name}"
    base = _compress_slots(slot_names)
    return base if perm_name == "1" else f"({base})⋊{perm_name}"


def render_pair(pair) -> str:
    sbar, perm = pair
    words = ",".join(x.name for x in sbar)
    return f"({words})" if perm == IDENTITY_PERM else f"({words})·{render_perm(perm)}"


def _is_case41(L0) -> Optional[Tuple[str, ...]]:
    kernel = frozenset(pair for pair in L0 if pair[1] == IDENTITY_PERM)
    if kernel != case41_kernel():
        return None
    if {perm for _, perm in L0} != set(PERMUTATIONS) or len(L0) != 6 * len(kernel):
        return None
    for i in range(3):
        if len({sbar[i] for sbar, _ in kernel}) != len(kernel):
            return None
    if kernel == frozenset(pair for pair in diagonal_reference() if pair[1] == IDENTITY_PERM):
        return None
    return ("each projection N -> S is bijective", "N is not the diagonal copy of S")


def describe_L0(L: LGroup) -> L0Descriptor:
    """
    Project L to S^3 x| S_3 and match the image against the named reference subgroups.

    Args:
        L (LGroup): Output of compute_L

    Returns:
        L0Descriptor: Matched tag, rendered name and generators
    """
    L0 = frozenset(l.projection() for l in L.elements)
    gens = tuple(render_pair(p) for p in small_generating_set(
        sorted(L0, key=lambda p: (tuple(SBAR_INDEX[x] for x in p[0]), PERM_INDEX[p[1]])),
        pair_compose, PAIR_IDENTITY))
    common = dict(label=L.label, elements=L0, generators=gens,
                  translation_kernel=L.translation_kernel, l_order=L.order)

    if L0 == product_reference([SLOT_GROUPS["S"]] * 3, PERM_GROUPS["S_3"]):
        return L0Descriptor(tag=L0Tag.FULL, name="S^3⋊S_3", **common)
    for i, borel in BOREL.items():
        if L0 == product_reference([borel] * 3, PERM_GROUPS["S_3"]):
            return L0Descriptor(tag=L0Tag.BOREL_CUBE, name=f"B_{i}^3⋊S_3", **common)
    for i in BOREL:
        if L0 == borel_tilde(i):
            return L0Descriptor(tag=L0Tag.BOREL_TILDE, name=f"B~_{i}⋊S_3", **common)
    if L0 == diagonal_reference():
        return L0Descriptor(tag=L0Tag.DIAGONAL, name="S⋊S_3", **common)
    notes = _is_case41(L0)
    if notes:
        return L0Descriptor(tag=L0Tag.CASE41, name="N⋅S_3", notes=notes, **common)

    for slot_names in itertools.product(SLOT_GROUPS, repeat=3):
        size = int(np.prod([len(SLOT_GROUPS[n]) for n in slot_names]))
        for perm_name, perms in PERM_GROUPS.items():
            if size * len(perms) != len(L0):
                continue
            if L0 == product_reference([SLOT_GROUPS[n] for n in slot_names], perms):
                return L0Descriptor(tag=L0Tag.MIXED, name=product_name(slot_names, perm_name), **common)

    logging.warning(f"No reference subgroup matches L0 of {L.label} (order {len(L0)})")
    return L0Descriptor(tag=L0Tag.RAW, name=f"raw[{len(L0)}]", **common)


@dataclass(frozen=True)
class OracleReport:
    label: str
    checked: int
    agreed: int


def brute_force_normalizer_check(G: GGroup, sample_size: int, seed: int = 0, L: Optional[LGroup] = None):
    """
    Compare the descended conjugation with exact affine conjugation of integral lifts.

    Args:
        G (GGroup): Group to test
        sample_size (int): Number of random L_max elements
        seed (int): Seed of the numpy generator
        L (LGroup): When given, its generators are tested as well

    Returns:
        OracleReport: Number of elements checked and agreeing
    """
    if sample_size < 1:
        raise NormalizerError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    samples = [random_lmax(rng) for _ in range(sample_size)]
    if L is not None:
        samples.extend(small_generating_set(L.elements, lmax_compose, LMAX_IDENTITY))

    agreed = 0
    for l in samples:
        h = lift_lmax(l, rng)
        descended = [conjugate_by_lmax(l, g) for g in G.generators]
        exact = [exact_conjugate(h, g) for g in G.generators]
        if descended != exact:
            logging.error(f"Descended conjugation by {l.render()} disagrees with exact lift on {G.label}")
            raise NormalizerError(f"descended and exact conjugation disagree for {l.render()} on {G.label}")
        in_g_descended = all(g in G.elements for g in descended)
        in_g_exact = all(g in G.elements for g in exact)
        if in_g_descended != in_g_exact:
            raise NormalizerError(f"membership disagreement for {l.render()} on {G.label}")
        agreed += 1
    return OracleReport(G.label, len(samples), agreed)


def all_elements_check(G: GGroup, L: LGroup) -> bool:
    """Every element of L normalizes all of G, not only its generators."""
    members = set(G.elements)
    return all(conjugate_by_lmax(l, g) in members for l in L.elements for g in G.elements)
