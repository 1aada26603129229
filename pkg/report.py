"""
Report fragments for every task, golden table values and Markdown / JSON rendering
"""
import json
import logging
import time
from enum import Enum
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel

from catalog import H21_THREE_LABELS, CatalogEntry
from cohomology import picard_rank
from fundamental_group import classify_pi1
from geometry import curve_classes, hodge_numbers, is_free, trident_and_resolution_count
from group_core import GGroup, group_from_entry
from modular import modular_suite
from normalizer import L0Descriptor, compute_L, describe_L0
from toric import (
    charts_and_gluing,
    enumerate_crepant_triangulations,
    exceptional_divisor_count,
    flop_graph,
    render_triangle,
    singularity_presentation,
    symmetry_orbits,
)

SCHEMA = "cy3lab/1"
FLOAT_FORMAT = ".6e"
GOLDEN_TABLE2 = "golden/table2.md"


class Task(str, Enum):
    NORMALIZER = "normalizer"
    PICARD = "picard"
    HODGE = "hodge"
    PI1 = "pi1"
    TORIC = "toric"
    MODULAR = "modular"


CASE_TASKS = (Task.NORMALIZER, Task.PICARD, Task.HODGE, Task.PI1)

# Printed values of the case tables
TABLE1_EXPECTED = {
    "0-1": "S^3⋊S_3",
    "0-4": "B_1^3⋊S_3",
    "1-1": "B_2^3⋊S_3",
    "1-5": "B~_2⋊S_3",
    "1-11": "(B_2^2×B_1)⋊<(1 2)>",
    "2-1": "S⋊S_3",
    "2-9": "B_1^3⋊S_3",
    "2-12": "(1×B_1^2)⋊<(2 3)>",
    "3-5": "B~_1⋊S_3",
    "4-1": "N⋅S_3",
}
KERNEL_EXPECTED = {"0-1": 1, "1-1": 1, "2-9": 8, "3-5": 8}
TABLE2_EXPECTED = dict(zip(H21_THREE_LABELS, (0, 1, 1, 1, 2, 1, 1, 3, 1, 1)))

# Printed values the computation does not reproduce, keyed by (table, label)
KNOWN_DEVIATIONS = {
    ("table1", "2-12"): "catalog generators give B_1^3⋊S_3, the printed row lists (1×B_1^2)⋊<(2 3)>",
    ("table2", "2-12"): "rank 1 follows from L0 = B_1^3⋊S_3, the same group as (0-4) and (2-9); printed value is 3",
    ("kernel", "2-9"): "pure quarter-translation part of L has order 2, the printed H column suggests 8",
    ("kernel", "3-5"): "pure quarter-translation part of L has order 2, the printed H column suggests 8",
}


class MatchState(str, Enum):
    YES = "yes"
    NO = "no"
    DEVIATION = "deviation"
    UNLISTED = "-"


def match_state(table: str, label: str, computed, expected) -> MatchState:
    if expected is None:
        return MatchState.UNLISTED
    if computed == expected:
        return MatchState.YES
    if (table, label) in KNOWN_DEVIATIONS:
        return MatchState.DEVIATION
    return MatchState.NO


class Fragment(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True, frozen=True)


class NormalizerFragment(Fragment):
    label: str = Field(..., description="Case label")
    l_order: int = Field(..., description="|L|")
    l0_order: int = Field(..., description="|L0|")
    l0_tag: str = Field(..., description="Structural tag of L0")
    l0_name: str = Field(..., description="Rendered name of L0")
    l0_generators: List[str] = Field(..., description="Generators of L0 as words in s, t, r and transpositions")
    translation_kernel_order: int = Field(..., description="Order of the pure eps_bar part of L")
    notes: List[str] = Field(default_factory=list)
    expected: Optional[str] = Field(None, description="Printed L0, when listed")
    expected_kernel_order: Optional[int] = Field(None, description="Kernel order implied by the printed H column")
    match: MatchState
    kernel_match: MatchState


class PicardFragment(Fragment):
    label: str
    rank_q: int
    dim_f5: int
    dim_f7: int
    invariant_basis: List[List[str]] = Field(..., description="Invariant vectors over QQ in the 12-dim basis")
    conclusion: str
    expected: int
    match: MatchState


class CurveClassFragment(Fragment):
    direction: int
    orbit_size: int
    genus: int


class HodgeFragment(Fragment):
    label: str
    free: bool
    curve_classes: List[CurveClassFragment]
    tridents: int
    resolution_choices_upper_bound: str = Field(..., description="4^tridents as a decimal string")
    h11: int
    h21: int
    euler: int
    expected: List[int]
    match: MatchState


class Pi1Fragment(Fragment):
    label: str
    pi1: str
    n_rank: int
    quotient_order: int
    notes: List[str] = Field(default_factory=list)
    expected: str
    match: MatchState


class CaseReport(Fragment):
    label: str
    normalizer: Optional[NormalizerFragment] = None
    picard: Optional[PicardFragment] = None
    hodge: Optional[HodgeFragment] = None
    pi1: Optional[Pi1Fragment] = None


class ChartFragment(Fragment):
    triangle: str
    generators: List[str]


class TriangulationFragment(Fragment):
    triangles: List[str]
    charts: List[ChartFragment]
    gluings: List[str]
    is_central: bool
    exceptional_divisors: int


class ToricFragment(Fragment):
    hilbert_basis: List[List[int]]
    relation: str
    triangulations: List[TriangulationFragment]
    flop_graph: List[List[int]]
    symmetry_orbits: List[List[int]]


class MetricChecks(Fragment):
    max_rel_error: float
    min_eigenvalue: float


class ModularFragment(Fragment):
    samples: int
    max_delta_residual: float
    max_section_residual: float
    max_potential_invariance_residual: float
    metric_checks: MetricChecks
    multiplier_orders: Dict[str, int] = Field(..., description="Histogram of multiplier orders")
    twelfth_powers: List[str] = Field(..., description="Observed values of eps^12")
    max_bare_modulus: float = Field(..., description="max |eta(gamma tau) / eta(tau)|, without automorphy factor")
    eta_oracle_residual: float
    threshold: float
    passed: bool


class Summary(Fragment):
    mismatches: List[str]
    deviations: List[str]
    passed: bool


class Report(Fragment):
    schema_version: str = Field(SCHEMA, alias="schema")
    config: Dict[str, Any]
    cases: List[CaseReport]
    toric: Optional[ToricFragment] = None
    modular: Optional[ModularFragment] = None
    summary: Summary


# --- fragment builders ---

def normalizer_fragment(G: GGroup):
    """
    Table 1 row of a case.

    Returns:
        tuple: (NormalizerFragment, L0Descriptor)
    """
    descriptor = describe_L0(compute_L(G))
    expected = TABLE1_EXPECTED.get(G.label)
    kernel = KERNEL_EXPECTED.get(G.label)
    fragment = NormalizerFragment(
        label=G.label,
        l_order=descriptor.l_order,
        l0_order=descriptor.order,
        l0_tag=descriptor.tag.value,
        l0_name=descriptor.name,
        l0_generators=list(descriptor.generators),
        translation_kernel_order=descriptor.translation_kernel_order,
        notes=list(descriptor.notes),
        expected=expected,
        expected_kernel_order=kernel,
        match=match_state("table1", G.label, descriptor.name, expected),
        kernel_match=match_state("kernel", G.label, descriptor.translation_kernel_order, kernel),
    )
    return fragment, descriptor


def picard_fragment(descriptor: L0Descriptor, graded_signs: bool = False) -> PicardFragment:
    result = picard_rank(descriptor.label, descriptor.elements, graded_signs)
    expected = TABLE2_EXPECTED[descriptor.label]
    return PicardFragment(
        label=descriptor.label,
        rank_q=result.rank_q,
        dim_f5=result.dim_f5,
        dim_f7=result.dim_f7,
        invariant_basis=[[str(x) for x in vector] for vector in result.basis],
        conclusion=result.conclusion(),
        expected=expected,
        match=match_state("table2", descriptor.label, result.rank_q, expected),
    )


def hodge_fragment(G: GGroup, entry: CatalogEntry) -> HodgeFragment:
    classes = curve_classes(G)
    hodge = hodge_numbers(G, classes)
    tridents, choices = trident_and_resolution_count(G)
    expected = list(entry.expected_hodge)
    return HodgeFragment(
        label=G.label,
        free=is_free(G),
        curve_classes=[CurveClassFragment(direction=c.direction + 1, orbit_size=c.orbit_size, genus=c.genus)
                       for c in classes],
        tridents=tridents,
        resolution_choices_upper_bound=str(choices),
        h11=hodge.h11,
        h21=hodge.h21,
        euler=hodge.euler,
        expected=expected,
        match=match_state("table3", G.label, list(hodge.as_tuple()), expected),
    )


def pi1_fragment(G: GGroup, entry: CatalogEntry, seed: int = 0) -> Pi1Fragment:
    result = classify_pi1(G, seed)
    return Pi1Fragment(
        label=G.label,
        pi1=result.label.value,
        n_rank=result.n_rank,
        quotient_order=result.quotient_order,
        notes=list(result.notes),
        expected=entry.expected_pi1.value,
        match=match_state("pi1", G.label, result.label, entry.expected_pi1),
    )


def case_report(entry: CatalogEntry, tasks, seed: int = 0, graded_signs: bool = False) -> CaseReport:
    """
    Run the requested per-case tasks on one catalog entry.

    Args:
        entry (CatalogEntry): Case to compute
        tasks (iterable): Task values; picard is skipped for cases with h21 != 3
        seed (int): Seed of the random-word check in the pi1 classification
        graded_signs (bool): Signed permutation action for the Picard computation

    Returns:
        CaseReport: One fragment per computed task
    """
    start = time.perf_counter()
    tasks = set(tasks)
    G = group_from_entry(entry)
    parts = {}
    wants_picard = Task.PICARD in tasks and entry.label in H21_THREE_LABELS
    if Task.NORMALIZER in tasks or wants_picard:
        fragment, descriptor = normalizer_fragment(G)
        if Task.NORMALIZER in tasks:
            parts["normalizer"] = fragment
        if wants_picard:
            parts["picard"] = picard_fragment(descriptor, graded_signs)
    if Task.HODGE in tasks:
        parts["hodge"] = hodge_fragment(G, entry)
    if Task.PI1 in tasks:
        parts["pi1"] = pi1_fragment(G, entry, seed)
    logging.info(f"Case ({entry.label}) done in {time.perf_counter() - start:.2f}s: {sorted(parts)}")
    return CaseReport(label=entry.label, **parts)


def toric_fragment() -> ToricFragment:
    presentation = singularity_presentation()
    triangulations = enumerate_crepant_triangulations()
    rendered = []
    for t in triangulations:
        charts, gluings = charts_and_gluing(t)
        rendered.append(TriangulationFragment(
            triangles=[render_triangle(tri) for tri in t.sorted_triangles()],
            charts=[ChartFragment(triangle=render_triangle(c.triangle), generators=list(c.monomials))
                    for c in charts],
            gluings=[f"{g.first}-{g.second}: ({g.unit_pair[0]})({g.unit_pair[1]}) = 1" for g in gluings],
            is_central=t.is_central,
            exceptional_divisors=exceptional_divisor_count(t),
        ))
    return ToricFragment(
        hilbert_basis=[list(m) for m in presentation.hilbert_basis],
        relation=presentation.relation,
        triangulations=rendered,
        flop_graph=[list(e) for e in flop_graph(triangulations)],
        symmetry_orbits=[list(o) for o in symmetry_orbits(triangulations)],
    )


def modular_fragment(samples: int, seed: int, tol: float, bound: int) -> ModularFragment:
    suite = modular_suite(samples, seed, tol, bound)
    return ModularFragment(
        samples=suite.samples,
        max_delta_residual=suite.max_delta_residual,
        max_section_residual=suite.max_section_residual,
        max_potential_invariance_residual=suite.max_potential_residual,
        metric_checks=MetricChecks(max_rel_error=suite.max_metric_error, min_eigenvalue=suite.min_eigenvalue),
        multiplier_orders={str(k): v for k, v in suite.multiplier_orders.items()},
        twelfth_powers=[f"{re}{'+' if im >= 0 else '-'}{abs(im)}i" for re, im in suite.twelfth_powers],
        max_bare_modulus=suite.max_bare_modulus,
        eta_oracle_residual=suite.eta_oracle_residual,
        threshold=suite.threshold,
        passed=suite.passed,
    )


def summarize(cases, modular: Optional[ModularFragment] = None) -> Summary:
    """Collect every failed golden comparison; documented deviations do not fail the run."""
    mismatches, deviations = [], []
    for case in cases:
        checks = []
        if case.normalizer:
            checks.append(("table1", case.normalizer.match))
            checks.append(("kernel", case.normalizer.kernel_match))
        if case.picard:
            checks.append(("table2", case.picard.match))
        if case.hodge:
            checks.append(("table3", case.hodge.match))
        if case.pi1:
            checks.append(("pi1", case.pi1.match))
        for table, state in checks:
            if state == MatchState.NO:
                mismatches.append(f"{table} ({case.label})")
            elif state == MatchState.DEVIATION:
                deviations.append(f"{table} ({case.label}): {KNOWN_DEVIATIONS[(table, case.label)]}")
    if modular is not None and not modular.passed:
        mismatches.append("modular residuals")
    return Summary(mismatches=mismatches, deviations=deviations, passed=not mismatches)


# --- rendering ---

def _format_numbers(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    if isinstance(value, int) and abs(value) >= 2 ** 53:
        return str(value)
    if isinstance(value, dict):
        return {k: _format_numbers(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_format_numbers(v) for v in value]
    return value


def to_json(report: Report) -> str:
    """Sorted keys, fixed float format: equal configs give identical text."""
    data = report.model_dump(by_alias=True, mode="json", exclude_none=True)
    return json.dumps(_format_numbers(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def table1_frame(cases) -> pd.DataFrame:
    rows = [{
        "label": c.label,
        "L0": c.normalizer.l0_name,
        "|L|": str(c.normalizer.l_order),
        "|L0|": str(c.normalizer.l0_order),
        "kernel": str(c.normalizer.translation_kernel_order),
        "expected": c.normalizer.expected or "-",
        "match": c.normalizer.match.value,
    } for c in cases if c.normalizer]
    return pd.DataFrame(rows)


def table2_frame(cases) -> pd.DataFrame:
    rows = [{
        "label": c.label,
        "rank Q": str(c.picard.rank_q),
        "dim F5": str(c.picard.dim_f5),
        "dim F7": str(c.picard.dim_f7),
        "expected": str(c.picard.expected),
        "match": c.picard.match.value,
    } for c in cases if c.picard]
    return pd.DataFrame(rows)


def table3_frame(cases) -> pd.DataFrame:
    frame = pd.DataFrame([{"label": c.label} for c in cases if c.hodge or c.pi1])
    if frame.empty:
        return frame
    by_label = {c.label: c for c in cases}

    def column(getter):
        return [getter(by_label[label]) for label in frame["label"]]

    frame["h11"] = column(lambda c: str(c.hodge.h11) if c.hodge else "-")
    frame["h21"] = column(lambda c: str(c.hodge.h21) if c.hodge else "-")
    frame["pi1"] = column(lambda c: c.pi1.pi1 if c.pi1 else "-")
    frame["expected"] = column(lambda c: " ".join(filter(None, [
        f"({c.hodge.expected[0]},{c.hodge.expected[1]})" if c.hodge else "",
        c.pi1.expected if c.pi1 else "",
    ])))
    frame["match"] = column(lambda c: "yes" if all(
        f.match == MatchState.YES for f in (c.hodge, c.pi1) if f) else "no")
    return frame


TABLES = (
    ("Table 1: normalizer image L0", table1_frame),
    ("Table 2: Picard ranks", table2_frame),
    ("Table 3: Hodge numbers and fundamental groups", table3_frame),
)


def markdown_table(frame: pd.DataFrame) -> str:
    return frame.to_markdown(index=False, tablefmt="github", disable_numparse=True)


def to_markdown(report: Report) -> str:
    """Every non-empty case table as a titled pipe table."""
    sections = []
    for title, build in TABLES:
        frame = build(report.cases)
        if not frame.empty:
            sections.append(f"## {title}\n\n{markdown_table(frame)}\n")
    return "\n".join(sections)


def markdown_cells(text: str):
    """Rows of stripped cell strings of every pipe table row, separator rows dropped."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("|"):
            continue
        cells = [cell.strip() for cell in line.strip("|").split("|")]
        if all(cell and set(cell) <= set("-:") for cell in cells):
            continue
        rows.append(cells)
    return rows
