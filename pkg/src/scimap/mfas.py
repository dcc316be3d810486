"""Monte Carlo minimum feedback arc set on directed multigraphs.

One run samples an arc uniformly among all arcs currently lying on a
directed cycle, removes it, and repeats until the graph is acyclic.
Repeating the run t times and keeping the smallest removal set drives
the failure probability down geometrically; the reference model's bound
2^-t is reported alongside, clearly separated from any instance-specific
empirical rate measured by the calibration harness.

Removal support is restricted to on-cycle arcs: removing an arc that
lies on no cycle can never help and only inflates the solution.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Optional

GENERATOR_ID = "mt19937-sha256-split"

Bundle = tuple[str, str]


@dataclass
class Multigraph:
    """Directed multigraph: parallel arcs allowed, no loops, no weights."""

    nodes: set[str] = field(default_factory=set)
    bundles: dict[Bundle, int] = field(default_factory=dict)

    def add(self, u: str, v: str, multiplicity: int = 1) -> None:
        if u == v:
            raise ValueError(f"loops are not allowed: {u!r}")
        if multiplicity < 1:
            raise ValueError("multiplicity must be at least 1")
        self.nodes.update((u, v))
        self.bundles[(u, v)] = self.bundles.get((u, v), 0) + multiplicity

    def total_arcs(self) -> int:
        return sum(self.bundles.values())

    def copy(self) -> "Multigraph":
        return Multigraph(nodes=set(self.nodes), bundles=dict(self.bundles))

    @classmethod
    def from_lines(cls, lines) -> "Multigraph":
        """Parse the delimited format: one bundle per line, ``u v mult``
        (multiplicity defaults to 1); '#' starts a comment."""
        mg = cls()
        for lineno, line in enumerate(lines, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"line {lineno}: expected 'u v [multiplicity]'")
            mult = int(parts[2]) if len(parts) == 3 else 1
            mg.add(parts[0], parts[1], mult)
        return mg

    def to_lines(self) -> list[str]:
        return [f"{u} {v} {m}" for (u, v), m in sorted(self.bundles.items())]


def is_acyclic(mg: Multigraph) -> tuple[bool, Optional[list[str]]]:
    """Kahn's algorithm over the bundle digraph (multiplicities are
    irrelevant to cyclicity).  Returns a topological order when acyclic."""
    indegree = {node: 0 for node in mg.nodes}
    out: dict[str, list[str]] = {node: [] for node in mg.nodes}
    for (u, v), _ in mg.bundles.items():
        out[u].append(v)
        indegree[v] += 1
    ready = sorted(node for node, deg in indegree.items() if deg == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        changed = False
        for nxt in out[node]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
                changed = True
        if changed:
            ready.sort()
    if len(order) == len(mg.nodes):
        return True, order
    return False, None


def _strongly_connected_components(mg: Multigraph) -> dict[str, int]:
    """Iterative Tarjan; returns node -> component id."""
    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    component: dict[str, int] = {}
    counter = [0]
    comp_counter = [0]
    out: dict[str, list[str]] = {node: [] for node in mg.nodes}
    for (u, v) in mg.bundles:
        out[u].append(v)

    for root in sorted(mg.nodes):
        if root in index_of:
            continue
        work = [(root, 0)]
        while work:
            node, child = work[-1]
            if child == 0:
                index_of[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            for i in range(child, len(out[node])):
                nxt = out[node][i]
                if nxt not in index_of:
                    work[-1] = (node, i + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index_of[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index_of[node]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component[member] = comp_counter[0]
                    if member == node:
                        break
                comp_counter[0] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return component


def cycle_bundles(mg: Multigraph) -> list[tuple[Bundle, int]]:
    """Bundles currently lying on at least one directed cycle, sorted.

    An arc (u, v) with u != v sits on a cycle exactly when u and v share
    a strongly connected component.
    """
    component = _strongly_connected_components(mg)
    return sorted(((u, v), m) for (u, v), m in mg.bundles.items()
                  if component[u] == component[v])


@dataclass
class McSolution:
    removed: dict[Bundle, int]
    size: int
    witness_order: list[str]


def _derive_seed(*parts) -> int:
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def run_once(mg: Multigraph, seed: int, check_support: bool = False) -> McSolution:
    """One Monte Carlo run: break uniformly chosen on-cycle arcs until the
    graph is acyclic.  Deterministic given the seed.

    ``check_support`` re-verifies, independently of the sampler, that
    every removed arc lay on a cycle at its removal time.
    """
    rng = random.Random(seed)
    work = mg.copy()
    removed: dict[Bundle, int] = {}
    while True:
        candidates = cycle_bundles(work)
        if not candidates:
            break
        total = sum(m for _, m in candidates)
        pick = rng.randrange(total)
        for bundle, mult in candidates:
            if pick < mult:
                break
            pick -= mult
        if check_support:
            assert _reaches(work, bundle[1], bundle[0]), \
                f"sampled off-cycle arc {bundle}"
        removed[bundle] = removed.get(bundle, 0) + 1
        if work.bundles[bundle] == 1:
            del work.bundles[bundle]
        else:
            work.bundles[bundle] -= 1
    acyclic, order = is_acyclic(work)
    assert acyclic and order is not None
    return McSolution(removed=dict(sorted(removed.items())),
                      size=sum(removed.values()), witness_order=order)


def _reaches(mg: Multigraph, start: str, goal: str) -> bool:
    out: dict[str, list[str]] = {node: [] for node in mg.nodes}
    for (u, v) in mg.bundles:
        out[u].append(v)
    stack, seen = [start], set()
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(out[node])
    return False


def success_lower_bound(t: int) -> Fraction:
    """The reference model's success bound 1 - 2^-t, exactly."""
    if t < 1:
        raise ValueError("at least one run is required")
    return Fraction(2**t - 1, 2**t)


@dataclass
class ConfidenceReport:
    runs: int
    best_size: int
    reference_bound: Fraction
    seed: int
    generator: str = GENERATOR_ID
    # Filled only when the exhaustive oracle is feasible for the instance
    # (see the calibration harness); plain solves leave it unknown.
    empirical_success_rate: Optional[float] = None


def solve(mg: Multigraph, t: int, seed: int) -> tuple[McSolution, ConfidenceReport]:
    """Best of ``t`` independent runs under split seeds.

    Run i's seed depends only on (seed, i), so extending t keeps the
    earlier runs identical and the best size can only improve.
    """
    if t < 1:
        raise ValueError("at least one run is required")
    best: Optional[McSolution] = None
    for i in range(t):
        solution = run_once(mg, _derive_seed(seed, i))
        if best is None or solution.size < best.size:
            best = solution
    assert best is not None
    report = ConfidenceReport(runs=t, best_size=best.size,
                              reference_bound=success_lower_bound(t), seed=seed)
    return best, report


# Exhaustive oracle ---------------------------------------------------------

def brute_force_optimum(mg: Multigraph, cap: int = 20,
                        ) -> tuple[int, dict[Bundle, int]]:
    """Exact optimum by exhaustive search, for small instances only.

    Removing part of a bundle never breaks a cycle, so an optimal removal
    set empties whole bundles; the search walks bundle subsets in
    nondecreasing total multiplicity and the first acyclic residual wins.
    """
    total = mg.total_arcs()
    if total > cap:
        raise ValueError(f"instance has {total} arcs, above the cap of {cap}")
    acyclic, _ = is_acyclic(mg)
    if acyclic:
        return 0, {}
    bundles = sorted(mg.bundles.items())
    masks = sorted(range(1, 1 << len(bundles)),
                   key=lambda mask: (sum(bundles[i][1] for i in range(len(bundles))
                                         if mask >> i & 1), mask))
    for mask in masks:
        residual = Multigraph(nodes=set(mg.nodes),
                              bundles={b: m for i, (b, m) in enumerate(bundles)
                                       if not mask >> i & 1})
        if is_acyclic(residual)[0]:
            witness = {b: m for i, (b, m) in enumerate(bundles) if mask >> i & 1}
            return sum(witness.values()), witness
    raise AssertionError("unreachable: removing every arc is always acyclic")


# Calibration harness ---------------------------------------------------------

def wilson_interval(successes: int, n: int, confidence: float = 0.99,
                    ) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    margin = z * ((p * (1 - p) / n + z * z / (4 * n * n)) ** 0.5) / denom
    return max(0.0, center - margin), min(1.0, center + margin)


@dataclass
class TrialRecord:
    trial: int
    best_size: int
    first_success_run: Optional[int]  # 1-based run index, None if never
    successes: int


@dataclass
class CalibrationResult:
    optimum: int
    trials: int
    runs_per_trial: int
    records: list[TrialRecord]
    empirical_cumulative: list[float]   # index r-1: success within r runs
    theoretical_cumulative: list[Fraction]  # reference bound 1 - 2^-r
    per_run_success_rate: float
    wilson_low: float
    wilson_high: float
    confidence: float
    seed: int
    generator: str = GENERATOR_ID


def calibration_harness(mg: Multigraph, t: int, trials: int, seed: int,
                        confidence: float = 0.99) -> CalibrationResult:
    """Measure the solver against the exhaustive oracle.

    Each trial is an independent best-of-t solve; the harness records
    which runs attained the oracle optimum, the cumulative success curve,
    and the per-run empirical success rate with its Wilson interval.  The
    1 - 2^-t curve is emitted alongside as the reference model's bound,
    never asserted for the instance.
    """
    if t < 1 or trials < 1:
        raise ValueError("both t and trials must be at least 1")
    optimum, _ = brute_force_optimum(mg)
    records = []
    cumulative_hits = [0] * t
    run_successes = 0
    for j in range(trials):
        best_size: Optional[int] = None
        first_success: Optional[int] = None
        successes = 0
        for r in range(t):
            solution = run_once(mg, _derive_seed(seed, j, r))
            if best_size is None or solution.size < best_size:
                best_size = solution.size
            if solution.size == optimum:
                successes += 1
                if first_success is None:
                    first_success = r + 1
        for r in range(t):
            if first_success is not None and first_success <= r + 1:
                cumulative_hits[r] += 1
        run_successes += successes
        records.append(TrialRecord(trial=j, best_size=best_size,
                                   first_success_run=first_success,
                                   successes=successes))
    rate = run_successes / (trials * t)
    low, high = wilson_interval(run_successes, trials * t, confidence)
    return CalibrationResult(
        optimum=optimum, trials=trials, runs_per_trial=t, records=records,
        empirical_cumulative=[hits / trials for hits in cumulative_hits],
        theoretical_cumulative=[success_lower_bound(r + 1) for r in range(t)],
        per_run_success_rate=rate, wilson_low=low, wilson_high=high,
        confidence=confidence, seed=seed)


def triangle_example() -> Multigraph:
    """The three-party message cycle with bundle multiplicities 3, 1, 2;
    breaking the single-arc bundle is the unique optimal repair."""
    mg = Multigraph()
    mg.add("john", "ellen", 3)
    mg.add("ellen", "tim", 1)
    mg.add("tim", "john", 2)
    return mg
