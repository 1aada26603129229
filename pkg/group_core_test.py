import itertools
from fractions import Fraction

import numpy as np
import pytest

from catalog import entries_by_label, load_catalog
from errors import GroupError
from group_core import (
    IDENTITY,
    LMAX_IDENTITY,
    PERMUTATIONS,
    SBAR_BY_NAME,
    SBAR_ELEMENTS,
    GroupElement,
    LmaxElement,
    act_on_shift,
    conjugate_by_lmax,
    element_from_code,
    exact_conjugate,
    g_compose,
    generate_group,
    group_from_entry,
    hmax_compose,
    hmax_project,
    lift_lmax,
    lmax_compose,
    lmax_elements,
    lmax_inverse,
    parse_group_element,
    perm_compose,
    perm_inverse,
    random_lmax,
    render_perm,
)


@pytest.fixture(scope="module")
def catalog():
    return entries_by_label(load_catalog())


def test_sbar_is_sl2_f2():
    assert len(set(SBAR_ELEMENTS)) == 6
    for x, y in itertools.product(SBAR_ELEMENTS, repeat=2):
        assert x.compose(y) in SBAR_ELEMENTS
    for x in SBAR_ELEMENTS:
        assert x.compose(x.inverse()) == SBAR_BY_NAME["1"]
    st = SBAR_BY_NAME["st"]
    assert st.compose(st).compose(st) == SBAR_BY_NAME["1"]
    assert SBAR_BY_NAME["s"].compose(SBAR_BY_NAME["t"]).compose(SBAR_BY_NAME["s"]) == SBAR_BY_NAME["r"]


def test_borel_generators_fix_their_vector():
    assert SBAR_BY_NAME["t"].act(1, 0) == (1, 0)
    assert SBAR_BY_NAME["r"].act(0, 1) == (0, 1)
    assert SBAR_BY_NAME["s"].act(1, 1) == (1, 1)


def test_render_perm():
    assert render_perm((0, 1, 2)) == "id"
    assert render_perm((1, 0, 2)) == "(1 2)"
    assert render_perm((1, 2, 0)) == "(1 2 3)"
    for p, q in itertools.product(PERMUTATIONS, repeat=2):
        assert perm_compose(perm_compose(p, q), perm_inverse(q)) == p


def test_group_element_text_round_trip():
    g = parse_group_element("(t-,0+,1t-)")
    assert g.twist == (-1, 1, -1)
    assert g.shift == (0, 1, 0, 0, 1, 1)
    assert g.render() == "(t-,0+,1t-)"
    assert parse_group_element("(1,t,0)").is_pure_shift
    for code in (0, 65, 130, 255):
        assert element_from_code(code).code == code


def test_odd_twist_is_rejected():
    with pytest.raises(GroupError):
        GroupElement((1, 1, -1))


def test_case_01_has_order_4(catalog):
    G = group_from_entry(catalog["0-1"])
    assert G.order == 4
    assert G.rank == 0
    assert G.is_catalog_group
    assert [g.twist for g in G.elements] == [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]


def test_every_catalog_group_has_order_4_times_2_to_r(catalog):
    for label, entry in catalog.items():
        G = group_from_entry(entry)
        assert G.order == 4 * 2 ** entry.rank, label
        assert len(G.shift_subgroup) == 2 ** entry.rank, label


def test_shift_only_group_is_not_catalog_group():
    G = generate_group([parse_group_element("(t,t,t)")])
    assert G.order == 2
    assert not G.is_catalog_group


def test_generate_group_needs_generators():
    with pytest.raises(GroupError):
        generate_group([])


def test_lmax_group_laws():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b, c = (random_lmax(rng) for _ in range(3))
        assert lmax_compose(lmax_compose(a, b), c) == lmax_compose(a, lmax_compose(b, c))
        assert lmax_compose(a, lmax_inverse(a)) == LMAX_IDENTITY
        assert lmax_compose(lmax_inverse(a), a) == LMAX_IDENTITY


def test_lmax_enumeration_order():
    elements = lmax_elements()
    first = next(elements)
    assert first == LMAX_IDENTITY
    assert sum(1 for _ in elements) + 1 == 82944


def test_conjugation_is_an_action(catalog):
    rng = np.random.default_rng(11)
    G = group_from_entry(catalog["2-5"])
    for _ in range(100):
        a, b = random_lmax(rng), random_lmax(rng)
        for g in G.generators:
            assert conjugate_by_lmax(lmax_compose(a, b), g) == conjugate_by_lmax(a, conjugate_by_lmax(b, g))


def test_conjugation_respects_products(catalog):
    rng = np.random.default_rng(13)
    G = group_from_entry(catalog["1-6"])
    for _ in range(50):
        l = random_lmax(rng)
        for g, h in itertools.product(G.elements, repeat=2):
            assert conjugate_by_lmax(l, g_compose(g, h)) == g_compose(conjugate_by_lmax(l, g), conjugate_by_lmax(l, h))


def test_pure_quarter_translation_moves_twisted_shifts():
    l = LmaxElement((1, 0, 0, 0, 0, 0))
    g = parse_group_element("(0-,0+,0-)")
    assert conjugate_by_lmax(l, g).render() == "(1-,0+,0-)"
    assert conjugate_by_lmax(l, parse_group_element("(0+,0-,0-)")) == parse_group_element("(0+,0-,0-)")


def test_act_on_shift_moves_factor_data():
    shift = parse_group_element("(1,0,0)").shift
    identity = (SBAR_BY_NAME["1"],) * 3
    assert act_on_shift(identity, (1, 2, 0), shift) == parse_group_element("(0,1,0)").shift


def test_lift_projects_back():
    rng = np.random.default_rng(3)
    for _ in range(100):
        l = random_lmax(rng)
        assert hmax_project(lift_lmax(l)) == l
        assert hmax_project(lift_lmax(l, rng)) == l


def test_hmax_projection_is_a_homomorphism():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, b = random_lmax(rng), random_lmax(rng)
        product = hmax_compose(lift_lmax(a, rng), lift_lmax(b, rng))
        assert hmax_project(product) == lmax_compose(a, b)


def test_exact_conjugate_matches_descended(catalog):
    rng = np.random.default_rng(17)
    G = group_from_entry(catalog["3-5"])
    for _ in range(100):
        l = random_lmax(rng)
        h = lift_lmax(l, rng)
        for g in G.elements:
            assert exact_conjugate(h, g) == conjugate_by_lmax(l, g)


def test_exact_conjugate_of_identity():
    h = lift_lmax(LmaxElement((1, 1, 0, 1, 1, 0)))
    assert h.eps[0] == Fraction(1, 4)
    assert exact_conjugate(h, IDENTITY) == IDENTITY
