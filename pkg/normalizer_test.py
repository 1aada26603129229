import pytest

from catalog import H21_THREE_LABELS, entries_by_label, load_catalog
from errors import NormalizerError
from group_core import IDENTITY, LMAX_IDENTITY, generate_group, group_from_entry
from normalizer import (
    L0Tag,
    PAIR_IDENTITY,
    all_elements_check,
    borel_tilde,
    brute_force_normalizer_check,
    case41_kernel,
    compute_L,
    describe_L0,
    generate_subgroup,
    pair_compose,
    product_name,
)

TABLE1 = {
    "0-1": (L0Tag.FULL, "S^3⋊S_3"),
    "0-4": (L0Tag.BOREL_CUBE, "B_1^3⋊S_3"),
    "1-1": (L0Tag.BOREL_CUBE, "B_2^3⋊S_3"),
    "1-5": (L0Tag.BOREL_TILDE, "B~_2⋊S_3"),
    "1-11": (L0Tag.MIXED, "(B_2^2×B_1)⋊<(1 2)>"),
    "2-1": (L0Tag.DIAGONAL, "S⋊S_3"),
    "2-9": (L0Tag.BOREL_CUBE, "B_1^3⋊S_3"),
    "3-5": (L0Tag.BOREL_TILDE, "B~_1⋊S_3"),
    "4-1": (L0Tag.CASE41, "N⋅S_3"),
}


@pytest.fixture(scope="module")
def catalog():
    return entries_by_label(load_catalog())


@pytest.fixture(scope="module")
def computed(catalog):
    results = {}
    for label in H21_THREE_LABELS:
        G = group_from_entry(catalog[label])
        L = compute_L(G)
        results[label] = (G, L, describe_L0(L))
    return results


@pytest.mark.parametrize("label", sorted(TABLE1))
def test_table1_tags(computed, label):
    _, _, descriptor = computed[label]
    tag, name = TABLE1[label]
    assert descriptor.tag == tag
    assert descriptor.name == name


def test_case_2_12_matches_borel_cube(computed):
    # Table 1 lists B~_1 x| S_3; the catalog generators give the full Borel cube
    assert computed["2-12"][2].name == "B_1^3⋊S_3"


def test_orders(computed):
    assert computed["0-1"][1].order == 1296
    assert computed["0-1"][2].order == 1296
    assert computed["1-1"][2].order == 48
    assert computed["2-1"][2].order == 36
    assert computed["4-1"][2].order == 36
    for label, (_, L, descriptor) in computed.items():
        assert L.order == descriptor.order * descriptor.translation_kernel_order, label


def test_translation_kernels(computed):
    assert computed["0-1"][2].translation_kernel_order == 1
    assert computed["1-1"][2].translation_kernel_order == 1
    assert computed["2-9"][2].translation_kernel_order == 2
    assert computed["3-5"][2].translation_kernel_order == 2


def test_elements_are_sorted(computed):
    _, L, _ = computed["1-1"]
    assert L.elements[0] == LMAX_IDENTITY
    assert LMAX_IDENTITY in L


def test_generators_render_as_words(computed):
    descriptor = computed["1-1"][2]
    assert descriptor.generators
    assert all(g.startswith("(") for g in descriptor.generators)


def test_case41_notes(computed):
    descriptor = computed["4-1"][2]
    assert "each projection N -> S is bijective" in descriptor.notes
    assert len(case41_kernel()) == 6


def test_borel_tilde_is_a_group():
    tilde = borel_tilde(2)
    assert len(tilde) == 4 * 6
    assert frozenset(generate_subgroup(list(tilde), pair_compose, PAIR_IDENTITY)) == tilde


def test_product_name():
    assert product_name(("S", "S", "S"), "S_3") == "S^3⋊S_3"
    assert product_name(("B_2", "B_2", "B_1"), "<(1 2)>") == "(B_2^2×B_1)⋊<(1 2)>"
    assert product_name(("B_1", "1", "1"), "1") == "B_1×1^2"


def test_trivial_group_is_normalized_by_everything():
    G = generate_group([IDENTITY])
    L = compute_L(G, verify_closure=False)
    assert L.order == 82944


@pytest.mark.parametrize("label", ["0-1", "2-9", "4-1"])
def test_all_elements_normalize(computed, label):
    G, L, _ = computed[label]
    assert all_elements_check(G, L)


@pytest.mark.parametrize("label", ["0-1", "1-5", "3-5"])
def test_oracle_agrees(computed, label):
    G, L, _ = computed[label]
    report = brute_force_normalizer_check(G, 40, seed=1, L=L)
    assert report.agreed == report.checked
    assert report.checked >= 40


def test_oracle_rejects_empty_sample(computed):
    with pytest.raises(NormalizerError):
        brute_force_normalizer_check(computed["0-1"][0], 0)


@pytest.mark.slow
@pytest.mark.parametrize("label", [entry.label for entry in load_catalog()])
def test_oracle_sweep_over_catalog(catalog, label):
    G = group_from_entry(catalog[label])
    report = brute_force_normalizer_check(G, 100, seed=2, L=compute_L(G, verify_closure=False))
    assert report.checked >= 100
    assert report.agreed == report.checked
