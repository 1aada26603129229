import pytest

from catalog import Pi1Label, load_catalog
from fundamental_group import (
    TRIVIAL_PATTERN,
    affine_compose,
    affine_inverse,
    classify_pi1,
    deck_group,
    fixed_point_subgroup,
    lift,
)
from group_core import group_from_entry, parse_group_element

CATALOG = load_catalog()


@pytest.fixture(scope="module")
def groups():
    return {entry.label: group_from_entry(entry) for entry in CATALOG}


def test_affine_inverse():
    a = lift(parse_group_element("(t+,0-,1-)"))
    identity = affine_compose(a, affine_inverse(a))
    assert identity == (TRIVIAL_PATTERN, (0,) * 6)


def test_deck_group_of_case_0_1(groups):
    pi = deck_group(groups["0-1"])
    assert pi.pattern_count == 4
    assert pi.lattice.determinant() == 64
    assert pi.contains(lift(parse_group_element("(0-,0+,0-)")))


def test_fixed_point_subgroup_contains_its_generators(groups):
    N = fixed_point_subgroup(groups["2-5"])
    pi = deck_group(groups["2-5"])
    assert pi.lattice.contains_lattice(N.lattice)
    assert N.pattern_count <= pi.pattern_count


@pytest.mark.parametrize("entry", CATALOG, ids=[e.label for e in CATALOG])
def test_pi1_matches_catalog(groups, entry):
    result = classify_pi1(groups[entry.label])
    assert result.label == entry.expected_pi1


def test_labels_and_ranks(groups):
    assert classify_pi1(groups["0-1"]).quotient_order == 1
    assert classify_pi1(groups["1-1"]).quotient_order == 2
    assert classify_pi1(groups["2-5"]).quotient_order == 4
    assert classify_pi1(groups["0-3"]).n_rank == 4
    assert classify_pi1(groups["0-4"]).label == Pi1Label.B
