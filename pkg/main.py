"""
Main entry point: regenerate the case tables and run the acceptance suite
"""
import itertools
import logging
import queue
import sys
import threading
import time
from enum import Enum
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from catalog import CATALOG_PATH, H21_THREE_LABELS, load_catalog
from cohomology import rep_on_h2
from errors import Cy3LabError, UsageError
from geometry import move_coordinate, torsion_solutions
from group_core import (
    PERMUTATIONS,
    SBAR_ELEMENTS,
    conjugate_by_lmax,
    g_compose,
    group_from_entry,
    lmax_compose,
    random_lmax,
)
from normalizer import brute_force_normalizer_check, compute_L, pair_compose
from report import (
    TABLE1_EXPECTED,
    TABLE2_EXPECTED,
    MatchState,
    Report,
    Task,
    case_report,
    modular_fragment,
    summarize,
    to_json,
    to_markdown,
    toric_fragment,
)

DEFAULT_TOL = 1e-15
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 20240101
DEFAULT_WORKERS = 4
DEFAULT_GAMMA_BOUND = 10
ORACLE_SAMPLES = 500
PROPERTY_SAMPLES = 200
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class OutputFormat(str, Enum):
    JSON = "json"
    MARKDOWN = "markdown"


class RunConfig(BaseModel):
    cases: List[str] = Field(default_factory=lambda: ["all"], description="Case labels or ['all']")
    tasks: List[Task] = Field(default_factory=lambda: list(Task), description="Tasks to run")
    tol: float = Field(DEFAULT_TOL, gt=0, description="Tolerance of the modular evaluations")
    samples: int = Field(DEFAULT_SAMPLES, ge=1, description="Random samples of the modular checks")
    seed: int = Field(DEFAULT_SEED, description="Seed of every random draw")
    out: Optional[Path] = Field(None, description="Report file, stdout when absent")
    fmt: OutputFormat = Field(OutputFormat.JSON, description="json or markdown")
    workers: int = Field(DEFAULT_WORKERS, ge=1, description="Case worker threads")
    catalog_path: Path = Field(CATALOG_PATH, description="Catalog file")
    gamma_bound: int = Field(DEFAULT_GAMMA_BOUND, ge=1, description="Bound on the entries of random gamma")
    graded_signs: bool = Field(False, description="Signed permutation action on H^2")

    @field_validator("cases", "tasks", mode="before")
    @classmethod
    def split_list(cls, value):
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        if not value:
            raise ValueError("empty list")
        return value

    def describe(self) -> dict:
        """The part of the configuration that determines the report content."""
        data = self.model_dump(mode="json", exclude={"out", "workers", "catalog_path"})
        data["catalog"] = self.catalog_path.name
        return data


def build_config(**options) -> RunConfig:
    try:
        return RunConfig(**options)
    except ValidationError as e:
        raise UsageError(f"invalid options: {e.errors()[0]['loc']} {e.errors()[0]['msg']}")


def resolve_cases(config: RunConfig, entries):
    """
    Catalog entries selected by the configuration, in catalog order.

    Args:
        config (RunConfig): Run configuration
        entries (list): Loaded catalog

    Returns:
        list: Selected CatalogEntry values
    """
    if config.cases == ["all"]:
        return list(entries)
    known = {entry.label for entry in entries}
    for label in config.cases:
        if label not in known:
            raise UsageError(f"unknown case label {label}")
        if Task.PICARD in config.tasks and label not in H21_THREE_LABELS:
            raise UsageError(f"picard requested for ({label}), which does not have h21 = 3")
    wanted = set(config.cases)
    return [entry for entry in entries if entry.label in wanted]


def _case_worker(jobs, results, errors, lock, tasks, config: RunConfig):
    while True:
        try:
            entry = jobs.get_nowait()
        except queue.Empty:
            return
        try:
            report = case_report(entry, tasks, config.seed, config.graded_signs)
        except Exception as e:
            logging.error(f"Case ({entry.label}) failed: {e}")
            with lock:
                errors[entry.label] = e
            continue
        with lock:
            results[entry.label] = report


def run_cases(entries, tasks, config: RunConfig):
    """
    Compute case reports on a pool of worker threads.

    Args:
        entries (list): Catalog entries to compute
        tasks (iterable): Per-case tasks
        config (RunConfig): Worker count, seed and sign convention

    Returns:
        list: CaseReport values in the order of entries
    """
    jobs = queue.Queue()
    for entry in entries:
        jobs.put(entry)
    results, errors = {}, {}
    results_lock = threading.Lock()

    threads = []
    for _ in range(min(config.workers, max(1, len(entries)))):
        thread = threading.Thread(
            target=_case_worker,
            args=(jobs, results, errors, results_lock, tasks, config),
            daemon=True
        )
        thread.start()
        threads.append(thread)
    for thread in threads:
        thread.join()

    for entry in entries:
        if entry.label in errors:
            raise errors[entry.label]
    return [results[entry.label] for entry in entries]


def run_report(config: RunConfig) -> Report:
    """
    Execute the requested tasks and assemble the report document.

    Args:
        config (RunConfig): Validated run configuration

    Returns:
        Report: Case fragments, toric and modular fragments and the summary
    """
    entries = resolve_cases(config, load_catalog(config.catalog_path))
    tasks = [t for t in config.tasks if t not in (Task.TORIC, Task.MODULAR)]
    cases = run_cases(entries, tasks, config) if tasks else []
    toric = toric_fragment() if Task.TORIC in config.tasks else None
    modular = None
    if Task.MODULAR in config.tasks:
        modular = modular_fragment(config.samples, config.seed, config.tol, config.gamma_bound)
    return Report(config=config.describe(), cases=cases, toric=toric, modular=modular,
                  summary=summarize(cases, modular))


def run_guarded(action) -> int:
    """Map failures onto exit codes: usage errors 2, everything else 3."""
    try:
        return action()
    except UsageError as e:
        logging.error(f"Usage error: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    except Cy3LabError as e:
        logging.error(f"Computation failed: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_INTERNAL
    except Exception as e:
        logging.exception(f"Unexpected failure: {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_INTERNAL


# --- acceptance suite ---

def oracle_case(entry, seed: int, samples: int = ORACLE_SAMPLES):
    """Exact conjugation check of one case on random L_max elements and the generators of L."""
    G = group_from_entry(entry)
    return brute_force_normalizer_check(G, samples, seed, L=compute_L(G))


class Verifier:
    """Runs the acceptance criteria, sharing case computations between them."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.entries = load_catalog(config.catalog_path)
        self._picard_cases = None
        self._table3_cases = None

    def picard_cases(self):
        if self._picard_cases is None:
            selected = [e for e in self.entries if e.label in H21_THREE_LABELS]
            self._picard_cases = run_cases(selected, [Task.NORMALIZER, Task.PICARD], self.config)
        return self._picard_cases

    def table3_cases(self):
        if self._table3_cases is None:
            self._table3_cases = run_cases(self.entries, [Task.HODGE, Task.PI1], self.config)
        return self._table3_cases

    def table1(self):
        cases = self.picard_cases()
        bad = [c.label for c in cases
               if MatchState.NO in (c.normalizer.match, c.normalizer.kernel_match)]
        found = {c.label for c in cases}
        if found != set(TABLE1_EXPECTED):
            bad.append(f"cases {sorted(set(TABLE1_EXPECTED) - found)} missing")
        return not bad, f"{len(cases)} cases, mismatches {bad}" if bad else f"{len(cases)} cases match"

    def table2(self):
        cases = self.picard_cases()
        ranks = tuple(c.picard.rank_q for c in cases)
        bad = [c.label for c in cases if c.picard.match == MatchState.NO]
        return not bad and len(ranks) == len(TABLE2_EXPECTED), f"ranks {ranks}"

    def torsion(self):
        cases = self.picard_cases()
        bad = [c.label for c in cases if not c.picard.rank_q == c.picard.dim_f5 == c.picard.dim_f7]
        return not bad, f"F5 and F7 dimensions differ for {bad}" if bad else "QQ = F5 = F7 for all cases"

    def hodge(self):
        bad = [f"({c.label}): computed ({c.hodge.h11},{c.hodge.h21}), catalog ({c.hodge.expected[0]},"
               f"{c.hodge.expected[1]})" for c in self.table3_cases() if c.hodge.match != MatchState.YES]
        return not bad, "; ".join(bad) if bad else f"{len(self.entries)} rows match"

    def pi1(self):
        bad = [f"({c.label}): computed {c.pi1.pi1}, catalog {c.pi1.expected}"
               for c in self.table3_cases() if c.pi1.match != MatchState.YES]
        return not bad, "; ".join(bad) if bad else f"{len(self.entries)} rows match"

    def counts(self):
        case = next(c for c in self.table3_cases() if c.label == "0-1")
        per_direction = [sum(1 for k in case.hodge.curve_classes if k.direction == d) for d in (1, 2, 3)]
        passed = (len(case.hodge.curve_classes) == 48 and per_direction == [16, 16, 16]
                  and case.hodge.tridents == 64 and case.hodge.resolution_choices_upper_bound == str(4 ** 64))
        return passed, f"{len(case.hodge.curve_classes)} classes, {case.hodge.tridents} tridents"

    def toric(self):
        fragment = toric_fragment()
        passed = (len(fragment.triangulations) == 4
                  and all(len(t.charts) == 4 for t in fragment.triangulations)
                  and fragment.flop_graph == [[0, 1], [0, 2], [0, 3]])
        return passed, f"{len(fragment.triangulations)} triangulations, flops {fragment.flop_graph}"

    def modular(self):
        c = self.config
        fragment = modular_fragment(c.samples, c.seed, c.tol, c.gamma_bound)
        return fragment.passed, (f"delta {fragment.max_delta_residual:.2e}, section {fragment.max_section_residual:.2e}, "
                                 f"potential {fragment.max_potential_invariance_residual:.2e}, "
                                 f"metric {fragment.metric_checks.max_rel_error:.2e}")

    def oracle(self):
        reports = [oracle_case(entry, self.config.seed) for entry in self.entries]
        checked = sum(r.checked for r in reports)
        agreed = sum(r.agreed for r in reports)
        return agreed == checked, f"{agreed}/{checked} conjugations agree, L generators included"

    def properties(self):
        rng = np.random.default_rng(self.config.seed)
        failures = []
        for entry in self.entries:
            G = group_from_entry(entry)
            for _ in range(PROPERTY_SAMPLES // 20):
                a, b = random_lmax(rng), random_lmax(rng)
                for g, h in itertools.product(G.generators, repeat=2):
                    if conjugate_by_lmax(a, g_compose(g, h)) != g_compose(conjugate_by_lmax(a, g),
                                                                         conjugate_by_lmax(a, h)):
                        failures.append(f"conjugation is not multiplicative on ({entry.label})")
                    if conjugate_by_lmax(lmax_compose(a, b), g) != conjugate_by_lmax(a, conjugate_by_lmax(b, g)):
                        failures.append(f"conjugation is not an action on ({entry.label})")
        for _ in range(PROPERTY_SAMPLES):
            a, b = [(tuple(SBAR_ELEMENTS[int(i)] for i in rng.integers(0, 6, size=3)),
                     PERMUTATIONS[int(rng.integers(0, 6))]) for _ in range(2)]
            product = np.array(rep_on_h2(a)) @ np.array(rep_on_h2(b))
            if not (product == np.array(rep_on_h2(pair_compose(a, b)))).all():
                failures.append("rep_on_h2 is not multiplicative")
        for bits in ((0, 0), (1, 0), (0, 1), (1, 1)):
            solutions = set(torsion_solutions(bits))
            if {move_coordinate(c, 1, (0, 1)) for c in solutions} != solutions:
                failures.append(f"torsion set of {bits} is not stable under tau/2")
        return not failures, failures[0] if failures else "all property checks hold"


CRITERIA = ("table1", "table2", "torsion", "hodge", "pi1", "counts", "toric", "modular", "oracle", "properties")


def verify_suite(config: RunConfig, criteria=CRITERIA) -> int:
    """
    Run the selected criteria in order, printing timing and outcome of each.

    Returns:
        int: Exit code of the first failure, 0 when everything passes
    """
    verifier = Verifier(config)
    code = EXIT_PASS
    for name in criteria:
        start = time.perf_counter()
        try:
            passed, detail = getattr(verifier, name)()
            failure = EXIT_MISMATCH
        except Cy3LabError as e:
            logging.error(f"Criterion {name} raised: {e}")
            passed, detail, failure = False, str(e), EXIT_INTERNAL
        elapsed = time.perf_counter() - start
        click.echo(f"[{'PASS' if passed else 'FAIL'}] {name:<10} {elapsed:8.2f}s  {detail}")
        if not passed and code == EXIT_PASS:
            code = failure
    return code


# --- command line ---

@click.group()
@click.option("--verbose", is_flag=True, help="Log at DEBUG level")
@click.option("--quiet", is_flag=True, help="Log warnings and errors only")
def cli(verbose, quiet):
    """Computational lab for quotients of products of three elliptic curves."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def _report(config: RunConfig) -> int:
    report = run_report(config)
    text = to_json(report) if config.fmt == OutputFormat.JSON else to_markdown(report)
    if config.out is not None:
        config.out.write_text(text, encoding="utf-8")
        logging.info(f"Report written to {config.out}")
    else:
        click.echo(text, nl=False)
    if not report.summary.passed:
        logging.warning(f"Golden mismatches: {report.summary.mismatches}")
        return EXIT_MISMATCH
    return EXIT_PASS


@cli.command()
@click.option("--cases", default="all", show_default=True, help="Comma separated labels, or all")
@click.option("--tasks", default=",".join(t.value for t in Task), show_default=True,
              help="Comma separated subset of " + ", ".join(t.value for t in Task))
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]), default="json",
              show_default=True)
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=CATALOG_PATH)
@click.option("--gamma-bound", type=int, default=DEFAULT_GAMMA_BOUND, show_default=True)
@click.option("--graded-signs", is_flag=True, help="Signed permutation action on H^2")
def report(**options):
    """Compute the requested tasks and write a JSON or Markdown report."""
    sys.exit(run_guarded(lambda: _report(build_config(**options))))


@cli.command()
@click.option("--criteria", default=",".join(CRITERIA), show_default=True, help="Comma separated criteria to run")
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--samples", type=int, default=DEFAULT_SAMPLES, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=CATALOG_PATH)
@click.option("--gamma-bound", type=int, default=DEFAULT_GAMMA_BOUND, show_default=True)
def verify(criteria, **options):
    """Run the acceptance suite with per-criterion timing."""
    def action():
        selected = [c.strip() for c in criteria.split(",") if c.strip()]
        unknown = [c for c in selected if c not in CRITERIA]
        if unknown or not selected:
            raise UsageError(f"unknown criteria {unknown}, choose from {', '.join(CRITERIA)}")
        return verify_suite(build_config(**options), selected)

    sys.exit(run_guarded(action))


if __name__ == "__main__":
    cli()
