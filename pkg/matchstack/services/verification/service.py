import json
from collections import defaultdict
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from matchstack.config.logging import instance_ctx, suite_ctx
from matchstack.config.setting import get_settings
from matchstack.model.common import CHILD_LABELS, DEFAULT_MAX_N, BoundVariant, SmallPropClass, Suite
from matchstack.services.bijection.model import ColoredTernaryTree
from matchstack.services.bijection.service import (
    children_match_sub_triangulations, enumerate_trees, from_tree, to_tree, tree_count, tree_to_json,
    validate_tree
)
from matchstack.services.bounds.golden import golden_power, golden_power_leq, rational_interval_leq
from matchstack.services.bounds.model import ChainDecomposition
from matchstack.services.bounds.service import (
    bound_verdicts, children_split_check, find_remainders, lemma_strip_step,
    map_threshold, onechild_gain, strip_remainders, theorem_certificate, variant_size,
    verify_main_lemma, verify_small_props, witness_bound
)
from matchstack.services.middleware import MatchstackError, UsageError
from matchstack.services.oracles.service import (
    count_groundstates, count_perfect_matchings, count_satisfying_by_class,
    count_satisfying_states, is_bipartite_without, iter_intersecting_sets
)
from matchstack.services.transfer.service import (
    combine_children, degeneracy, degeneracy_vector, degeneracy_vector_by_history, root_vector,
    root_vector_by_combination, satisfying_state_total
)
from matchstack.services.triangulation.service import (
    canonical_code, dual, enumerate_histories, from_history, history_to_json,
    is_cubic_bridgeless, random_history, sub_triangulation, validate
)
from matchstack.services.verification.model import (
    CheckOutcome, CheckRecord, CheckTally, Failure, SweepReport, Violation
)
from matchstack.utils.logger import Logger, LogTimer, log_execution_time
from matchstack.utils.utility import parallel_map

logger = Logger("matchstack.services.verification.service")

RecordSink = Callable[[CheckRecord], None]

# sweep grid for the exact-arithmetic self-check
LUCAS_MAX_EXPONENT = 1000
GRID_HALF_WIDTH = 55

class SweepRecorder:
    """Tallies check outcomes for one suite and keeps failures and whitelisted violations."""

    def __init__(self, suite: Suite, max_n: Optional[int], allow_below: Optional[int] = None,
                 sink: Optional[RecordSink] = None):
        self.suite = suite
        self.max_n = max_n
        self.allow_below = allow_below
        self.sink = sink
        self.tallies: Dict[str, CheckTally] = {}
        self.failures: List[Failure] = []
        self.violations: List[Violation] = []
        self.thresholds = []
        self.notes: List[str] = []

    def record(self, instance: Any, outcome: CheckOutcome) -> bool:
        tally = self.tallies.setdefault(outcome.check, CheckTally(name=outcome.check))
        tally.instance_count += 1
        whitelisted = (
            not outcome.passed
            and outcome.whitelistable
            and self.allow_below is not None
            and outcome.size is not None
            and outcome.size < self.allow_below
        )
        if outcome.passed or whitelisted:
            tally.pass_count += 1
        else:
            tally.fail_count += 1
            self.failures.append(Failure(
                instance=instance, check=outcome.check, expected=outcome.expected, got=outcome.got
            ))
        if whitelisted:
            tally.whitelisted_count += 1
            self.violations.append(Violation(instance=instance, check=outcome.check, size=outcome.size))
        if not outcome.passed:
            token = instance_ctx.set(json.dumps(instance, separators=(",", ":")))
            logger.log_check(
                self.suite.value, outcome.check, False,
                expected=outcome.expected, got=outcome.got, whitelisted=whitelisted
            )
            instance_ctx.reset(token)
        if self.sink is not None:
            self.sink(CheckRecord(
                suite=self.suite.value, check=outcome.check, instance=instance, passed=outcome.passed,
                expected=outcome.expected, got=outcome.got, whitelisted=whitelisted,
                psi=outcome.psi, bound=outcome.bound
            ))
        return outcome.passed or whitelisted

    def record_all(self, instance: Any, outcomes: Iterable[CheckOutcome]) -> None:
        for outcome in outcomes:
            self.record(instance, outcome)

    def check(self, instance: Any, name: str, passed: bool, expected: Any = None, got: Any = None,
              psi: Optional[int] = None, bound: Optional[int] = None) -> bool:
        return self.record(instance, CheckOutcome(name, bool(passed), expected, got, psi=psi, bound=bound))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def report(self, wall_time: float) -> SweepReport:
        checks = list(self.tallies.values())
        return SweepReport(
            suite=self.suite.value,
            max_n=self.max_n,
            instance_count=sum(t.instance_count for t in checks),
            pass_count=sum(t.pass_count for t in checks),
            fail_count=sum(t.fail_count for t in checks),
            failures=self.failures,
            wall_time=round(wall_time, 3),
            checks=checks,
            violations=self.violations,
            thresholds=self.thresholds,
            notes=self.notes,
        )

def _histories_up_to(max_n: int) -> Iterator[Tuple[int, ...]]:
    for n in range(max_n + 1):
        for h in enumerate_histories(n):
            yield h.choices

def _trees_up_to(max_n: int, smallest: int = 1) -> Iterator[ColoredTernaryTree]:
    for n in range(smallest, max_n + 1):
        yield from enumerate_trees(n)

def _guarded(fn: Callable[[], List[CheckOutcome]], check: str) -> List[CheckOutcome]:
    # an oracle self-check error is a failed check, not an aborted sweep
    try:
        return fn()
    except MatchstackError as me:
        return [CheckOutcome(check, False, None, me.message)]

# --- workers (module level so a process pool can pickle them) ---

def lemma1_instance(choices: Tuple[int, ...]) -> List[CheckOutcome]:
    tri = from_history(choices)

    def run() -> List[CheckOutcome]:
        vector = degeneracy_vector(tri)
        oracle = count_satisfying_by_class(tri)
        total = count_satisfying_states(tri)
        return [
            CheckOutcome("root-vector", vector.v == oracle.v, list(oracle.v), list(vector.v)),
            CheckOutcome("state-total", satisfying_state_total(vector) == total, total, satisfying_state_total(vector)),
        ]

    return _guarded(run, "root-vector")

def matching_instance(choices: Tuple[int, ...]) -> List[CheckOutcome]:
    tri = from_history(choices)

    def run() -> List[CheckOutcome]:
        d = degeneracy(degeneracy_vector(tri))
        g = dual(tri)
        matchings = count_perfect_matchings(g)
        sets = list(iter_intersecting_sets(tri))
        ground = count_groundstates(tri)
        return [
            CheckOutcome("dual-matchings", d == 2 * matchings, d, 2 * matchings),
            CheckOutcome("intersecting-sets", d == 2 * len(sets), d, 2 * len(sets)),
            CheckOutcome("groundstates", d == ground, d, ground),
            CheckOutcome("dual-size", g.vertex_count == 2 * tri.vertex_count - 4,
                         2 * tri.vertex_count - 4, g.vertex_count),
            CheckOutcome("cubic-bridgeless", is_cubic_bridgeless(g)),
            CheckOutcome("bipartition", all(is_bipartite_without(tri, s) for s in sets)),
        ]

    return _guarded(run, "dual-matchings")

def _bound_outcomes(vertex_count: int, d: int, variants: Iterable[BoundVariant]) -> List[CheckOutcome]:
    verdicts = bound_verdicts(vertex_count, d)
    return [
        CheckOutcome(variant.value, verdicts.get(variant), True, verdicts.get(variant),
                     size=variant_size(variant, vertex_count), whitelistable=True)
        for variant in variants
    ]

# --- suites ---

def _lemma1(recorder: SweepRecorder, max_n: int) -> None:
    histories = list(_histories_up_to(max_n))
    for choices, outcomes in zip(histories, parallel_map(lemma1_instance, histories)):
        recorder.record_all(list(choices), outcomes)

def _prop2(recorder: SweepRecorder, max_n: int) -> None:
    for choices in _histories_up_to(max_n):
        tri = from_history(choices)
        by_tree = degeneracy_vector(tri)
        by_history = degeneracy_vector_by_history(tri)
        recorder.check(list(choices), "history-path", by_tree.v == by_history.v, list(by_tree.v), list(by_history.v))
    for tree in _trees_up_to(max_n):
        by_rules = root_vector(tree)
        by_combination = root_vector_by_combination(tree)
        recorder.check(
            tree_to_json(tree), "rule-combination", by_rules.v == by_combination.v,
            list(by_combination.v), list(by_rules.v)
        )

def _tree_key(tree: ColoredTernaryTree) -> str:
    return json.dumps(tree_to_json(tree), sort_keys=True, separators=(",", ":"))

def _bijection(recorder: SweepRecorder, max_n: int) -> None:
    for tree in _trees_up_to(max_n):
        tri = from_tree(tree)
        validate(tri)
        back = to_tree(tri)
        validate_tree(back)
        recorder.check(tree_to_json(tree), "round-trip", _tree_key(back) == _tree_key(tree),
                       tree_to_json(tree), tree_to_json(back))
    for n in range(1, min(max_n, 6) + 1):
        trees = {_tree_key(t) for t in enumerate_trees(n)}
        recorder.check({"n": n}, "count-formula", len(trees) == tree_count(n), tree_count(n), len(trees))
        code_to_tree: Dict[Any, str] = {}
        tree_to_code: Dict[str, Any] = {}
        injective = True
        for h in enumerate_histories(n):
            tri = from_history(h)
            code, key = canonical_code(tri), _tree_key(to_tree(tri))
            if code_to_tree.setdefault(code, key) != key or tree_to_code.setdefault(key, code) != code:
                injective = False
            recorder.check(list(h.choices), "subtrees", children_match_sub_triangulations(tri))
            combined = combine_children(*(degeneracy_vector(sub_triangulation(tri, j)) for j in CHILD_LABELS))
            whole = degeneracy_vector(tri)
            recorder.check(list(h.choices), "sub-vectors", combined.v == whole.v, list(whole.v), list(combined.v))
        recorder.check({"n": n}, "image", set(tree_to_code) == trees, len(trees), len(tree_to_code))
        recorder.check({"n": n}, "injective", injective and len(code_to_tree) == len(trees),
                       len(trees), len(code_to_tree))

def _matching(recorder: SweepRecorder, max_n: int) -> None:
    settings = get_settings()
    histories = list(_histories_up_to(max_n))
    for n in (settings.matching_random_n, settings.transfer_random_n):
        histories.extend(
            random_history(n, settings.seed + i).choices for i in range(settings.matching_random_count)
        )
    for choices, outcomes in zip(histories, parallel_map(matching_instance, histories)):
        recorder.record_all(list(choices), outcomes)

def _remainders(recorder: SweepRecorder, max_n: int) -> None:
    for tree in _trees_up_to(max_n):
        instance = tree_to_json(tree)
        report = find_remainders(tree)
        generators = len(set(report.generators))
        recorder.check(instance, "distinct-generators", generators == len(report.remainders),
                       len(report.remainders), generators)
        stripped = strip_remainders(tree)
        left = find_remainders(stripped).remainders
        recorder.check(instance, "remainder-free", not left, [], [list(map(list, r)) for r in left])
        recorder.check(instance, "stripped-third", 3 * stripped.size >= tree.size,
                       f">= {tree.size}/3", stripped.size)
        full, reduced = root_vector(tree), root_vector(stripped)
        recorder.check(instance, "domination", full.dominates(reduced), list(full.v), list(reduced.v))

def _small_props(recorder: SweepRecorder, max_n: int) -> None:
    for size_class in SmallPropClass:
        for result in verify_small_props(size_class):
            recorder.check(result.instance, size_class.value, result.passed, f">= {result.bound}", result.psi,
                           psi=result.psi, bound=result.bound)

def _main_lemma(recorder: SweepRecorder, max_n: int) -> None:
    skipped = 0
    for tree in _trees_up_to(max_n, smallest=4):
        if find_remainders(tree).remainders:
            skipped += 1
            continue
        outcome = verify_main_lemma(tree)
        found = isinstance(outcome, ChainDecomposition)
        if found:
            value, subtree_size = outcome.psi, outcome.subtree_size
        else:
            value, subtree_size = outcome.candidates[-1].psi, outcome.candidates[-1].subtree_size
        recorder.check(
            tree_to_json(tree), "witness", found, "witness",
            outcome.length if found else outcome.model_dump(mode="json"),
            psi=value, bound=witness_bound(subtree_size)
        )
    recorder.note(f"{skipped} trees with a remainder were not candidates")

# grafted unique-child paths above each tree, labels bottom-up
GRAFT_LABELS: Tuple[Tuple[int, ...], ...] = ((1, 1, 1, 1), (1, 2, 3, 1), (2, 2, 2, 2, 2), (3, 1, 2, 3, 1))

def _strip(recorder: SweepRecorder, max_n: int) -> None:
    for tree in _trees_up_to(max_n):
        instance = tree_to_json(tree)
        for label in (1, 2, 3):
            recorder.check(instance, "lemma-strip", lemma_strip_step(tree, label), "gain >= 1", label)
        for labels in GRAFT_LABELS:
            recorder.check(instance, "onechild-gain", onechild_gain(tree, labels), "gain >= L-3", list(labels))
        split = children_split_check(tree)
        if split is not None:
            recorder.check(instance, "children-split", split)

def _bound_instances(max_n: int) -> Iterator[Tuple[Any, int, int, Optional[ColoredTernaryTree]]]:
    """(instance, |Delta|, degeneracy, tree) for the bare triangle, every tree up to max_n and the random sweep."""
    settings = get_settings()
    yield [], 3, 6, None
    for tree in _trees_up_to(max_n):
        yield tree_to_json(tree), tree.size + 3, degeneracy(root_vector(tree)), tree
    if settings.random_max_n < 1:
        logger.info("Random bound sweep skipped", random_max_n=settings.random_max_n)
        return
    rng = np.random.default_rng(settings.seed)
    for i in range(settings.random_count):
        n = int(rng.integers(1, settings.random_max_n + 1))
        h = random_history(n, settings.seed + i)
        tree = to_tree(from_history(h))
        yield history_to_json(h), n + 3, degeneracy(root_vector(tree)), tree

def _map_thresholds(recorder: SweepRecorder, records: Dict[BoundVariant, List[Tuple[int, bool]]]) -> None:
    for variant, pairs in records.items():
        report = map_threshold(variant.value, pairs)
        recorder.thresholds.append(report)
        logger.info("Bound threshold mapped", variant=variant.value, violating=report.violating_sizes,
                    threshold=report.threshold)

def _theorem(recorder: SweepRecorder, max_n: int) -> None:
    variants = (BoundVariant.THEOREM_36, BoundVariant.THEOREM_72)
    records: Dict[BoundVariant, List[Tuple[int, bool]]] = defaultdict(list)
    linear_misses = printed_misses = 0
    for instance, vertex_count, d, tree in _bound_instances(max_n):
        for outcome in _bound_outcomes(vertex_count, d, variants):
            records[BoundVariant(outcome.check)].append((outcome.size, outcome.passed))
            recorder.record(instance, outcome)
        if tree is None:
            continue
        cert = theorem_certificate(tree)
        recorder.check(instance, "certificate", cert.passed, True, cert.model_dump(mode="json", exclude={"witness"}))
        linear_misses += not cert.psi_linear
        printed_misses += not cert.printed_step
    _map_thresholds(recorder, records)
    recorder.note(
        f"Psi >= (|Delta|+3)/12 failed on {linear_misses} instances; "
        "the certificate's hard checks are the stripped size, the witness and the Psi/6 step"
    )
    recorder.note(f"the exponent step 2*sum(phi**e_s) >= 6*phi**(Psi/3) failed on {printed_misses} instances")
    recorder.note(
        "bounds are checked exactly on the tested instances only; "
        "the asymptotic statement is not a finite numeric check"
    )

def _corollary(recorder: SweepRecorder, max_n: int) -> None:
    variants = (BoundVariant.COROLLARY_72, BoundVariant.COROLLARY_144)
    records: Dict[BoundVariant, List[Tuple[int, bool]]] = defaultdict(list)
    for instance, vertex_count, d, tree in _bound_instances(max_n):
        for outcome in _bound_outcomes(vertex_count, d, variants):
            records[BoundVariant(outcome.check)].append((outcome.size, outcome.passed))
            recorder.record(instance, outcome)
    for choices in _histories_up_to(max_n):
        tri = from_history(choices)
        g = dual(tri)
        recorder.check(list(choices), "dual-size", g.vertex_count == 2 * tri.vertex_count - 4,
                       2 * tri.vertex_count - 4, g.vertex_count)
    _map_thresholds(recorder, records)
    recorder.note("constructed duals have |G| = 2|Delta| - 4 vertices; the relation 2|Delta| = |G| - 4 does not hold")
    recorder.note("matchings are taken as degeneracy / 2")

def _golden(recorder: SweepRecorder, max_n: int) -> None:
    for e in range(LUCAS_MAX_EXPONENT + 1):
        g = golden_power(e)
        l, f = g.l, g.f
        expected = 4 if e % 2 == 0 else -4
        recorder.check({"e": e}, "lucas-identity", l * l - 5 * f * f == expected, expected, l * l - 5 * f * f)
    undecided = 0
    for e in range(max_n + 1):
        center = golden_power(e).l
        for x in range(max(center - GRID_HALF_WIDTH, 0), center + GRID_HALF_WIDTH):
            oracle = rational_interval_leq(e, x)
            if oracle is None:
                undecided += 1
                oracle = rational_interval_leq(e, x, bits=1024)
            exact = golden_power_leq(e, x)
            recorder.check({"e": e, "x": x}, "interval-oracle", oracle is not None and exact == oracle, oracle, exact)
    if undecided:
        recorder.note(f"{undecided} grid points needed a 1024-bit bracket")

SUITES: Dict[Suite, Callable[[SweepRecorder, int], None]] = {
    Suite.LEMMA1: _lemma1,
    Suite.PROP2: _prop2,
    Suite.BIJECTION: _bijection,
    Suite.MATCHING: _matching,
    Suite.REMAINDERS: _remainders,
    Suite.SMALL_PROPS: _small_props,
    Suite.MAIN_LEMMA: _main_lemma,
    Suite.STRIP: _strip,
    Suite.THEOREM: _theorem,
    Suite.COROLLARY: _corollary,
    Suite.GOLDEN: _golden,
}

def _combine_reports(reports: List[SweepReport], max_n: Optional[int], wall_time: float) -> SweepReport:
    combined = SweepReport(suite=Suite.ALL.value, max_n=max_n, wall_time=round(wall_time, 3))
    for report in reports:
        combined.instance_count += report.instance_count
        combined.pass_count += report.pass_count
        combined.fail_count += report.fail_count
        combined.failures.extend(
            f.model_copy(update={"check": f"{report.suite}/{f.check}"}) for f in report.failures
        )
        combined.checks.extend(
            t.model_copy(update={"name": f"{report.suite}/{t.name}"}) for t in report.checks
        )
        combined.violations.extend(
            v.model_copy(update={"check": f"{report.suite}/{v.check}"}) for v in report.violations
        )
        combined.thresholds.extend(report.thresholds)
        combined.notes.extend(f"{report.suite}: {note}" for note in report.notes)
    return combined

@log_execution_time(logger)
def run_suite(suite: str, max_n: Optional[int] = None, allow_below: Optional[int] = None,
              sink: Optional[RecordSink] = None) -> SweepReport:
    """Run one verification suite, or every suite for `all`, and return its report."""
    try:
        suite = Suite(suite)
    except ValueError:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(s.value for s in Suite)}")
    if max_n is not None and max_n < 0:
        raise UsageError("--max-n must be nonnegative")

    if suite == Suite.ALL:
        with LogTimer(logger, "Verification sweep", suite=suite.value) as timer:
            reports = [run_suite(s, max_n, allow_below, sink) for s in SUITES]
        return _combine_reports(reports, max_n, timer.elapsed)

    size = DEFAULT_MAX_N[suite] if max_n is None else max_n
    token = suite_ctx.set(suite.value)
    try:
        recorder = SweepRecorder(suite, size, allow_below, sink)
        with LogTimer(logger, "Verification sweep", suite=suite.value, max_n=size) as timer:
            SUITES[suite](recorder, size)
        report = recorder.report(timer.elapsed)
        logger.info(
            "Sweep finished", suite=suite.value, instances=report.instance_count,
            failures=report.fail_count, whitelisted=len(report.violations)
        )
        return report
    finally:
        suite_ctx.reset(token)
