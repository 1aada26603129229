"""
Exact group engine: essential groups G, the class group L_max and its integral lift H_max
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from catalog import BASE_FROM_BITS, CatalogEntry, FactorSymbol, Sign, parse_triple, render_triple
from errors import GroupError

# Shift coordinates are ordered (x1, t1, x2, t2, x3, t3); bit value 1 is the half period.
HalfShift = Tuple[int, int, int, int, int, int]
ZERO_SHIFT: HalfShift = (0, 0, 0, 0, 0, 0)

TWIST_PATTERNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
PATTERN_INDEX = {pattern: i for i, pattern in enumerate(TWIST_PATTERNS)}

# Permutations of the three factors, perm[i] = image of factor i
PERMUTATIONS = tuple(itertools.permutations(range(3)))
PERM_INDEX = {perm: i for i, perm in enumerate(PERMUTATIONS)}
IDENTITY_PERM = (0, 1, 2)


def perm_compose(p, q):
    """(p o q)(i) = p(q(i))"""
    return tuple(p[q[i]] for i in range(3))


def perm_inverse(p):
    inverse = [0, 0, 0]
    for i, image in enumerate(p):
        inverse[image] = i
    return tuple(inverse)


def render_perm(p) -> str:
    """Cycle notation with 1-based factor labels."""
    seen, cycles = set(), []
    for start in range(3):
        if start in seen or p[start] == start:
            continue
        cycle, i = [], start
        while i not in seen:
            seen.add(i)
            cycle.append(str(i + 1))
            i = p[i]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "id"


class SBar(NamedTuple):
    """Element of S = SL(2, F2) acting on (x, tau) bit pairs by column-vector action."""
    a: int
    b: int
    c: int
    d: int

    def compose(self, other: "SBar") -> "SBar":
        return SBar(
            (self.a * other.a + self.b * other.c) % 2,
            (self.a * other.b + self.b * other.d) % 2,
            (self.c * other.a + self.d * other.c) % 2,
            (self.c * other.b + self.d * other.d) % 2,
        )

    def inverse(self) -> "SBar":
        # det = 1 over F2
        return SBar(self.d, self.b, self.c, self.a)

    def act(self, x: int, y: int) -> Tuple[int, int]:
        return (self.a * x + self.b * y) % 2, (self.c * x + self.d * y) % 2

    @property
    def name(self) -> str:
        return SBAR_NAMES[SBAR_INDEX[self]]


SBAR_IDENTITY = SBar(1, 0, 0, 1)
SBAR_S = SBar(0, 1, 1, 0)
SBAR_T = SBar(1, 1, 0, 1)
SBAR_R = SBar(1, 0, 1, 1)
SBAR_ELEMENTS = (SBAR_IDENTITY, SBAR_S, SBAR_T, SBAR_R, SBAR_S.compose(SBAR_T), SBAR_T.compose(SBAR_S))
SBAR_NAMES = ("1", "s", "t", "r", "st", "ts")
SBAR_INDEX = {element: i for i, element in enumerate(SBAR_ELEMENTS)}
SBAR_BY_NAME = dict(zip(SBAR_NAMES, SBAR_ELEMENTS))

# Integer lifts of each SBar, fixed once so that oracle runs are deterministic
CANONICAL_LIFTS = {
    SBAR_IDENTITY: ((1, 0), (0, 1)),
    SBAR_S: ((0, 1), (-1, 0)),
    SBAR_T: ((1, 1), (0, 1)),
    SBAR_R: ((1, 0), (1, 1)),
    SBAR_ELEMENTS[4]: ((0, 1), (-1, -1)),
    SBAR_ELEMENTS[5]: ((-1, 1), (-1, 0)),
}


def shift_code(shift: HalfShift) -> int:
    return sum(bit << k for k, bit in enumerate(shift))


def shift_from_code(code: int) -> HalfShift:
    return tuple((code >> k) & 1 for k in range(6))


def factor_bits(shift: HalfShift, i: int) -> Tuple[int, int]:
    return shift[2 * i], shift[2 * i + 1]


def add_shifts(u: HalfShift, v: HalfShift) -> HalfShift:
    return tuple((p + q) % 2 for p, q in zip(u, v))


@dataclass(frozen=True, order=True)
class GroupElement:
    """z_i -> twist_i * z_i + shift_i on each factor."""
    twist: Tuple[int, int, int] = (1, 1, 1)
    shift: HalfShift = ZERO_SHIFT

    def __post_init__(self):
        if self.twist.count(-1) % 2:
            raise GroupError(f"twist {self.twist} has an odd number of sign changes")

    @property
    def code(self) -> int:
        return PATTERN_INDEX[self.twist] << 6 | shift_code(self.shift)

    @property
    def is_identity(self) -> bool:
        return self.twist == (1, 1, 1) and self.shift == ZERO_SHIFT

    @property
    def is_pure_shift(self) -> bool:
        return self.twist == (1, 1, 1)

    def untwisted_factor(self) -> Optional[int]:
        """Index of the factor with sign +1 for a twist; None for a pure shift."""
        if self.is_pure_shift:
            return None
        return self.twist.index(1)

    def render(self) -> str:
        symbols = []
        for i in range(3):
            base = BASE_FROM_BITS[factor_bits(self.shift, i)]
            sign = Sign.PLUS if self.twist[i] == 1 else Sign.MINUS
            symbols.append(FactorSymbol(base=base, sign=sign))
        return render_triple(symbols)


def element_from_code(code: int) -> GroupElement:
    return GroupElement(TWIST_PATTERNS[code >> 6], shift_from_code(code & 63))


IDENTITY = GroupElement()


def element_from_triple(triple) -> GroupElement:
    twist = tuple(-1 if symbol.sign == Sign.MINUS else 1 for symbol in triple)
    shift = tuple(bit for symbol in triple for bit in symbol.shift)
    return GroupElement(twist, shift)


def parse_group_element(text: str) -> GroupElement:
    """Inverse of GroupElement.render; unsigned triples are pure shifts."""
    return element_from_triple(parse_triple(text))


def generators_from_entry(entry: CatalogEntry):
    """Twist generators followed by shift generators of a catalog entry."""
    return [element_from_triple(t) for t in entry.twist_gens] + [element_from_triple(t) for t in entry.shift_gens]


def g_compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Product in G: signs multiply, half shifts add over F2."""
    twist = tuple(p * q for p, q in zip(a.twist, b.twist))
    return GroupElement(twist, add_shifts(a.shift, b.shift))


@dataclass(frozen=True)
class GGroup:
    generators: Tuple[GroupElement, ...]
    elements: Tuple[GroupElement, ...]
    label: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def rank(self) -> int:
        return self.order.bit_length() - 1 - 2

    @property
    def codes(self) -> frozenset:
        return frozenset(g.code for g in self.elements)

    @property
    def shift_subgroup(self) -> Tuple[GroupElement, ...]:
        return tuple(g for g in self.elements if g.is_pure_shift)

    @property
    def patterns(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple(sorted({g.twist for g in self.elements}, key=PATTERN_INDEX.get))

    @property
    def is_catalog_group(self) -> bool:
        return self.order >= 4 and len(self.patterns) == 4

    def nontrivial(self):
        return tuple(g for g in self.elements if not g.is_identity)

    def __contains__(self, g) -> bool:
        return g in self.elements


def generate_group(gens, label: str = "") -> GGroup:
    """
    Close a set of generators under composition.

    Args:
        gens (list): GroupElement generators
        label (str): Case label carried along for messages

    Returns:
        GGroup: The generated group
    """
    if not gens:
        raise GroupError("generate_group needs at least one generator")

    elements = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        next_frontier = []
        for g in frontier:
            for h in gens:
                product = g_compose(g, h)
                if product not in elements:
                    elements.add(product)
                    next_frontier.append(product)
        if len(elements) > 256:
            logging.error(f"Closure of {label or 'group'} exceeded 256 elements")
            raise GroupError(f"closure of {label or 'group'} exceeds 2^8 elements; element data is corrupted")
        frontier = next_frontier

    order = len(elements)
    if order & (order - 1):
        raise GroupError(f"generated order {order} of {label or 'group'} is not a power of 2")

    group = GGroup(tuple(gens), tuple(sorted(elements, key=lambda g: g.code)), label)
    if not group.is_catalog_group:
        logging.warning(f"Group {label or ''} of order {order} is not a valid catalog group")
    return group


def group_from_entry(entry: CatalogEntry) -> GGroup:
    return generate_group(generators_from_entry(entry), entry.label)


# --- L_max = (Z/2)^6 x| S^3 x| S_3 ---

@dataclass(frozen=True)
class LmaxElement:
    """Quarter-translation class eps_bar, mod-2 matrices sbar and factor permutation perm."""
    eps: HalfShift = ZERO_SHIFT
    sbar: Tuple[SBar, SBar, SBar] = (SBAR_IDENTITY, SBAR_IDENTITY, SBAR_IDENTITY)
    perm: Tuple[int, int, int] = IDENTITY_PERM

    @property
    def is_identity(self) -> bool:
        return self == LMAX_IDENTITY

    def projection(self):
        """Image in S^3 x| S_3 (the eps_bar part dropped)."""
        return self.sbar, self.perm

    def render(self) -> str:
        eps = "".join(map(str, self.eps))
        words = ",".join(x.name for x in self.sbar)
        return f"[{eps}|({words})|{render_perm(self.perm)}]"


LMAX_IDENTITY = LmaxElement()


def act_on_shift(sbar, perm, shift: HalfShift) -> HalfShift:
    """(g . v)_i = sbar_i v_{perm^-1(i)} for g = (sbar, perm)."""
    inverse = perm_inverse(perm)
    out = []
    for i in range(3):
        out.extend(sbar[i].act(*factor_bits(shift, inverse[i])))
    return tuple(out)


def lmax_compose(a: LmaxElement, b: LmaxElement) -> LmaxElement:
    """(eps, g)(eps', g') = (eps + g.eps', g g')."""
    inverse = perm_inverse(a.perm)
    sbar = tuple(a.sbar[i].compose(b.sbar[inverse[i]]) for i in range(3))
    eps = add_shifts(a.eps, act_on_shift(a.sbar, a.perm, b.eps))
    return LmaxElement(eps, sbar, perm_compose(a.perm, b.perm))


def lmax_inverse(a: LmaxElement) -> LmaxElement:
    perm = perm_inverse(a.perm)
    sbar = tuple(a.sbar[a.perm[i]].inverse() for i in range(3))
    eps = act_on_shift(sbar, perm, a.eps)
    return LmaxElement(eps, sbar, perm)


def lmax_elements():
    """All 82944 elements, lexicographic in (eps_bar, sbar indices, perm index)."""
    for eps_code in range(64):
        eps = shift_from_code(eps_code)
        for sbar in itertools.product(SBAR_ELEMENTS, repeat=3):
            for perm in PERMUTATIONS:
                yield LmaxElement(eps, sbar, perm)


def random_lmax(rng) -> LmaxElement:
    """Uniform element of L_max from a numpy Generator."""
    eps = tuple(int(bit) for bit in rng.integers(0, 2, size=6))
    sbar = tuple(SBAR_ELEMENTS[int(i)] for i in rng.integers(0, 6, size=3))
    perm = PERMUTATIONS[int(rng.integers(0, 6))]
    return LmaxElement(eps, sbar, perm)


def conjugate_by_lmax(l: LmaxElement, g: GroupElement) -> GroupElement:
    """
    Descended conjugation l g l^-1.

    Args:
        l (LmaxElement): Ambient class
        g (GroupElement): Element of G

    Returns:
        GroupElement: twist permuted by perm, shift moved by sbar and, on the
        factors twisted after conjugation, increased by the half point eps_bar_i
    """
    inverse = perm_inverse(l.perm)
    twist = tuple(g.twist[inverse[i]] for i in range(3))
    shift = list(act_on_shift(l.sbar, l.perm, g.shift))
    for i in range(3):
        if twist[i] == -1:
            shift[2 * i] ^= l.eps[2 * i]
            shift[2 * i + 1] ^= l.eps[2 * i + 1]
    return GroupElement(twist, tuple(shift))


# --- H_max = (Z/4)^6 x| Gamma^3 x| S_3, exact oracle ---

Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]


def mat_mul(m: Matrix2, n: Matrix2) -> Matrix2:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def mat_inverse(m: Matrix2) -> Matrix2:
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def real_action(gamma: Matrix2) -> Matrix2:
    """Matrix of gamma on (x, y) with z = x + y tau: the conjugate D gamma D, D = diag(1, -1)."""
    (a, b), (c, d) = gamma
    return (a, -b), (-c, d)


def reduce_mod2(gamma: Matrix2) -> SBar:
    return SBar(gamma[0][0] % 2, gamma[0][1] % 2, gamma[1][0] % 2, gamma[1][1] % 2)


@dataclass(frozen=True)
class HmaxElement:
    """Affine map v -> M v + eps of R^6, M = block permutation followed by D gamma_i D."""
    eps: Tuple[Fraction, ...]
    gamma: Tuple[Matrix2, Matrix2, Matrix2]
    perm: Tuple[int, int, int] = IDENTITY_PERM

    def linear(self, v):
        inverse = perm_inverse(self.perm)
        out = []
        for i in range(3):
            (p, q), (r, s) = real_action(self.gamma[i])
            x, y = v[2 * inverse[i]], v[2 * inverse[i] + 1]
            out.extend((p * x + q * y, r * x + s * y))
        return tuple(out)


def hmax_compose(a: HmaxElement, b: HmaxElement) -> HmaxElement:
    inverse = perm_inverse(a.perm)
    gamma = tuple(mat_mul(a.gamma[i], b.gamma[inverse[i]]) for i in range(3))
    eps = tuple((e + f) % 1 for e, f in zip(a.eps, a.linear(b.eps)))
    return HmaxElement(eps, gamma, perm_compose(a.perm, b.perm))


def hmax_project(h: HmaxElement) -> LmaxElement:
    """Reduce eps modulo half points and gamma modulo 2."""
    eps = tuple(int(e * 4) % 2 for e in h.eps)
    return LmaxElement(eps, tuple(reduce_mod2(g) for g in h.gamma), h.perm)


def lift_lmax(l: LmaxElement, rng=None) -> HmaxElement:
    """
    Canonical lift of an L_max class, optionally moved inside its class.

    Args:
        l (LmaxElement): Class to lift
        rng (numpy.random.Generator): When given, adds random half-point offsets
            and random signs -I to the canonical matrices

    Returns:
        HmaxElement: A lift projecting back onto l
    """
    eps = [Fraction(bit, 4) for bit in l.eps]
    gamma = [CANONICAL_LIFTS[x] for x in l.sbar]
    if rng is not None:
        eps = [(e + Fraction(int(rng.integers(0, 2)), 2)) % 1 for e in eps]
        gamma = [g if rng.integers(0, 2) else mat_mul(((-1, 0), (0, -1)), g) for g in gamma]
    return HmaxElement(tuple(eps), tuple(gamma), l.perm)


def exact_conjugate(h: HmaxElement, g: GroupElement) -> GroupElement:
    """
    Conjugate g by the affine map h, reducing the translation part mod 1.

    Args:
        h (HmaxElement): Integral lift
        g (GroupElement): Element of G

    Returns:
        GroupElement: h g h^-1 read back as twist and half shift
    """
    inverse = perm_inverse(h.perm)
    twist = tuple(g.twist[inverse[i]] for i in range(3))
    delta = tuple(Fraction(bit, 2) for bit in g.shift)
    moved = h.linear(delta)
    translation = []
    for k in range(6):
        value = h.eps[k] - twist[k // 2] * h.eps[k] + moved[k]
        translation.append(value % 1)
    shift = []
    for value in translation:
        doubled = value * 2
        if doubled.denominator != 1:
            raise GroupError(f"conjugate translation {value} is not a half period")
        shift.append(int(doubled))
    return GroupElement(twist, tuple(shift))
