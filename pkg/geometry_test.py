import pytest

from catalog import Pi1Label, entries_by_label, load_catalog, relabel_factors
from geometry import (
    BULK_EXPECTED,
    LocusKind,
    bulk_hodge,
    curve_classes,
    euler_characteristic,
    fixed_locus,
    hodge_numbers,
    is_free,
    move_coordinate,
    torsion_solutions,
    trident_and_resolution_count,
)
from group_core import IDENTITY, g_compose, group_from_entry, parse_group_element

CATALOG = load_catalog()
LABELS = [entry.label for entry in CATALOG]


@pytest.fixture(scope="module")
def groups():
    return {entry.label: group_from_entry(entry) for entry in CATALOG}


@pytest.fixture(scope="module")
def classes(groups):
    return {label: curve_classes(G) for label, G in groups.items()}


def test_identity_fixes_everything():
    assert fixed_locus(IDENTITY).kind == LocusKind.ALL


def test_twist_fixes_sixteen_curves():
    g1 = parse_group_element("(0+,0-,0-)")
    locus = fixed_locus(g1)
    assert locus.kind == LocusKind.CURVES
    assert len(locus.components) == 16
    assert {c.free_factor for c in locus.components} == {0}
    assert len({c.coords for c in locus.components}) == 16


def test_translated_free_factor_is_free():
    moved = g_compose(parse_group_element("(0+,0-,0-)"), parse_group_element("(t,t,t)"))
    assert fixed_locus(moved).kind == LocusKind.EMPTY
    assert fixed_locus(parse_group_element("(t,t,t)")).kind == LocusKind.EMPTY


def test_torsion_set_is_stable_under_half_tau():
    for bits in ((0, 0), (1, 0), (0, 1), (1, 1)):
        solutions = set(torsion_solutions(bits))
        assert len(solutions) == 4
        assert {move_coordinate(c, 1, (0, 1)) for c in solutions} == solutions
        assert {move_coordinate(c, -1, (0, 0)) for c in solutions} == solutions


def test_case_0_1_counts(groups, classes):
    assert len(classes["0-1"]) == 48
    assert all(c.genus == 0 for c in classes["0-1"])
    assert sorted(sum(1 for c in classes["0-1"] if c.direction == i) for i in range(3)) == [16, 16, 16]
    tridents, choices = trident_and_resolution_count(groups["0-1"])
    assert tridents == 64
    assert choices == 340282366920938463463374607431768211456


def test_free_case_has_no_curves(groups, classes):
    assert classes["0-4"] == ()
    assert trident_and_resolution_count(groups["0-4"]) == (0, 1)


def test_case_1_6_genus(classes):
    assert len(classes["1-6"]) == 28
    assert sum(c.genus for c in classes["1-6"]) == 4


@pytest.mark.parametrize("label", LABELS)
def test_bulk_is_three_three(groups, label):
    assert bulk_hodge(groups[label]) == BULK_EXPECTED


@pytest.mark.parametrize("label", LABELS)
def test_hodge_numbers_match_catalog(groups, classes, label):
    entry = entries_by_label(CATALOG)[label]
    hodge = hodge_numbers(groups[label], classes[label])
    assert hodge.as_tuple() == tuple(entry.expected_hodge)
    assert euler_characteristic(hodge) == 2 * (hodge.h11 - hodge.h21)


@pytest.mark.parametrize("label", LABELS)
def test_free_iff_b_iff_bulk_only(groups, label):
    entry = entries_by_label(CATALOG)[label]
    free = is_free(groups[label])
    assert free == (entry.expected_pi1 == Pi1Label.B)
    assert free == (tuple(entry.expected_hodge) == BULK_EXPECTED)


def test_relabeling_factors_keeps_counts(classes):
    entry = entries_by_label(CATALOG)["1-6"]
    for perm in ((1, 2, 0), (1, 0, 2)):
        moved = curve_classes(group_from_entry(relabel_factors(entry, perm)))
        assert len(moved) == len(classes["1-6"])
        assert sum(c.genus for c in moved) == sum(c.genus for c in classes["1-6"])


def test_orbit_sizes_divide_group_order(groups, classes):
    for label in ("1-6", "2-9", "4-1"):
        for c in classes[label]:
            assert groups[label].order == c.orbit_size * len(c.stabilizer)
