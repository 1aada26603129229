"""
The S^3 x| S_3 representation on H^2(F_2^3, K) and the Picard ranks of Table 2
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from catalog import H21_THREE_LABELS
from errors import CohomologyError
from group_core import SBAR_BY_NAME, SBAR_ELEMENTS, SBar
from normalizer import PAIR_IDENTITY, pair_compose, small_generating_set

# Images of the basis (f1^, f2^) of H^1(F_2, K), columns = images
H1_GENERATORS = {
    "s": ((0, -1), (-1, 0)),
    "t": ((1, 1), (0, -1)),
    "r": ((-1, 0), (1, 1)),
}

# Fixed factorization of every SBar, and an independent one used to check well-definedness
WORDS = {"1": (), "s": ("s",), "t": ("t",), "r": ("s", "t", "s"), "st": ("s", "t"), "ts": ("t", "s")}
ALT_WORDS = {
    "1": ("s", "s"),
    "s": ("t", "r", "t"),
    "t": ("s", "r", "s"),
    "r": ("t", "s", "t"),
    "st": ("t", "s", "t", "s"),
    "ts": ("s", "t", "s", "t"),
}

# Kuenneth summands H^{1,1,0}, H^{1,0,1}, H^{0,1,1}: the two slots carrying degree 1
SUMMANDS = ((0, 1), (0, 2), (1, 2))
SUMMAND_NAMES = ("110", "101", "011")
DIMENSION = 12
SUPPORTED_PRIMES = (5, 7)


def basis_index(summand: int, i: int, j: int) -> int:
    return 4 * summand + 2 * i + j


BASIS = tuple((SUMMAND_NAMES[m], i + 1, j + 1) for m in range(3) for i in range(2) for j in range(2))


def _mat_mul(m, n):
    size = len(m)
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(size)) for j in range(size)) for i in range(size))


def _word_matrix(word):
    result = ((1, 0), (0, 1))
    for letter in word:
        result = _mat_mul(result, H1_GENERATORS[letter])
    return result


def check_word_table():
    """Both factorizations of each SBar must give the same matrix."""
    for name, word in WORDS.items():
        if _word_matrix(word) != _word_matrix(ALT_WORDS[name]):
            raise CohomologyError(f"words {word} and {ALT_WORDS[name]} for {name} give different matrices")
        product = SBAR_BY_NAME["1"]
        for letter in word:
            product = product.compose(SBAR_BY_NAME[letter])
        if product != SBAR_BY_NAME[name]:
            raise CohomologyError(f"word {word} does not reduce to {name} mod 2")


_H1_CACHE = {x: _word_matrix(WORDS[x.name]) for x in SBAR_ELEMENTS}


def rep_on_h1(element: SBar):
    """
    2x2 integer matrix of an SBar on H^1(F_2, K) in the basis (f1^, f2^).

    Args:
        element (SBar): Element of S

    Returns:
        tuple: Rows of the matrix, columns are images of f1^ and f2^
    """
    return _H1_CACHE[element]


def rep_on_h2(element, graded_signs: bool = False):
    """
    12x12 integer matrix of (sbar triple, perm) on H^2(F_2^3, K).

    Args:
        element (tuple): (sbar triple, perm) pair
        graded_signs (bool): Use the Koszul sign when a permutation reverses two degree-1 slots

    Returns:
        list: Rows of the matrix (columns are images of basis vectors)
    """
    sbar, perm = element
    matrix = [[0] * DIMENSION for _ in range(DIMENSION)]
    for m, (p, q) in enumerate(SUMMANDS):
        p2, q2 = perm[p], perm[q]
        swapped = p2 > q2
        target = SUMMANDS.index((min(p2, q2), max(p2, q2)))
        sign = -1 if (swapped and graded_signs) else 1
        for i in range(2):
            for j in range(2):
                column = basis_index(m, i, j)
                # after the permutation the class sits in slots (p2, q2)
                first, second = (j, i) if swapped else (i, j)
                low_slot, high_slot = (q2, p2) if swapped else (p2, q2)
                rho_low = rep_on_h1(sbar[low_slot])
                rho_high = rep_on_h1(sbar[high_slot])
                for k in range(2):
                    for l in range(2):
                        coefficient = rho_low[k][first] * rho_high[l][second]
                        if coefficient:
                            matrix[basis_index(target, k, l)][column] += sign * coefficient
    return matrix


def field_domain(field):
    if field in ("QQ", 0, None):
        return QQ
    if isinstance(field, int) and field > 3 and isprime(field):
        return GF(field)
    raise CohomologyError(f"unsupported field {field}; use QQ or a prime p > 3 such as {SUPPORTED_PRIMES}")


def _identity_minus(matrix):
    return [[matrix[i][j] - (1 if i == j else 0) for j in range(len(matrix))] for i in range(len(matrix))]


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class InvariantSpace:
    dimension: int
    basis: Tuple[Tuple[Fraction, ...], ...]
    field: str


def invariant_dimension(L0, field="QQ", method: str = "kernel", graded_signs: bool = False) -> InvariantSpace:
    """
    Dimension of the L0-invariants of H^2(F_2^3, K).

    Args:
        L0 (iterable): The subgroup as (sbar triple, perm) pairs
        field: "QQ" or a prime p > 3 (SUPPORTED_PRIMES are the ones reported)
        method (str): "kernel" intersects ker(rho(g) - 1) over generators,
            "projector" takes the rank of the averaging sum over all of L0
        graded_signs (bool): Use the signed permutation action

    Returns:
        InvariantSpace: Dimension and (over QQ, kernel method) a basis
    """
    elements = sorted(set(L0), key=lambda p: (tuple(x.name for x in p[0]), p[1]))
    if not elements:
        raise CohomologyError("L0 is empty")
    domain = field_domain(field)
    order = len(elements)
    if domain != QQ and order % field == 0:
        raise CohomologyError(f"characteristic {field} divides |L0| = {order}")
    field_name = "QQ" if domain == QQ else f"F{field}"

    if method == "projector":
        total = [[0] * DIMENSION for _ in range(DIMENSION)]
        for g in elements:
            matrix = rep_on_h2(g, graded_signs)
            for i in range(DIMENSION):
                row, source = total[i], matrix[i]
                for j in range(DIMENSION):
                    row[j] += source[j]
        # dividing by |L0| does not change the rank
        rank = DomainMatrix.from_list(total, domain).rank()
        return InvariantSpace(rank, (), field_name)
    if method != "kernel":
        raise CohomologyError(f"unknown method {method}")

    gens = small_generating_set(elements, pair_compose, PAIR_IDENTITY) or [PAIR_IDENTITY]
    rows = []
    for g in gens:
        rows.extend(_identity_minus(rep_on_h2(g, graded_signs)))
    stacked = DomainMatrix.from_list(rows, domain)
    dimension = DIMENSION - stacked.rank()
    basis = ()
    if domain == QQ and dimension:
        kernel = stacked.nullspace().to_list()
        basis = tuple(tuple(_to_fraction(v) for v in vector) for vector in kernel)
        if len(basis) != dimension:
            raise CohomologyError(f"nullspace size {len(basis)} differs from 12 - rank = {dimension}")
    return InvariantSpace(dimension, basis, field_name)


def summand_block(matrix, summand: str):
    """4x4 block of a 12x12 matrix on one Kuenneth summand."""
    offset = 4 * SUMMAND_NAMES.index(summand)
    return [row[offset:offset + 4] for row in matrix[offset:offset + 4]]


def block_invariants(element, summand: str = "110"):
    """
    Basis over QQ of the vectors of one summand fixed by a single permutation-free element.

    Args:
        element (tuple): (sbar triple, identity perm)
        summand (str): "110", "101" or "011"

    Returns:
        list: Coefficient vectors (l11, l12, l21, l22)
    """
    block = _identity_minus(summand_block(rep_on_h2(element), summand))
    kernel = DomainMatrix.from_list(block, QQ).nullspace().to_list()
    return [tuple(_to_fraction(v) for v in vector) for vector in kernel]


@dataclass(frozen=True)
class PicardReport:
    label: str
    rank_q: int
    dim_f5: int
    dim_f7: int
    basis: Tuple[Tuple[Fraction, ...], ...]
    projector_rank: int

    @property
    def consistent(self) -> bool:
        return self.rank_q == self.dim_f5 == self.dim_f7 == self.projector_rank

    def conclusion(self) -> str:
        return f"Pic ≅ Z^{self.rank_q} × (finite group of order 2^n 3^m)"


def picard_rank(label: str, L0, graded_signs: bool = False) -> PicardReport:
    """
    Rank of Pic of the moduli stack for one of the ten h21 = 3 cases.

    Args:
        label (str): Case label, must be one of H21_THREE_LABELS
        L0 (iterable): Computed L0 of the case
        graded_signs (bool): Use the signed permutation action

    Returns:
        PicardReport: Dimensions over QQ, F5 and F7
    """
    if label not in H21_THREE_LABELS:
        raise CohomologyError(f"Picard rank is only defined here for h21 = 3 cases, not {label}")
    over_q = invariant_dimension(L0, "QQ", graded_signs=graded_signs)
    over_5 = invariant_dimension(L0, 5, graded_signs=graded_signs)
    over_7 = invariant_dimension(L0, 7, graded_signs=graded_signs)
    projector = invariant_dimension(L0, "QQ", method="projector", graded_signs=graded_signs)
    report = PicardReport(label, over_q.dimension, over_5.dimension, over_7.dimension,
                          over_q.basis, projector.dimension)
    if not report.consistent:
        logging.error(f"Invariant dimensions disagree for {label}: {report}")
        raise CohomologyError(f"invariant dimensions over QQ/F5/F7/projector disagree for {label}")
    logging.info(f"Picard rank of ({label}) = {report.rank_q}")
    return report


check_word_table()
