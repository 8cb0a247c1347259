"""Potential descent from full Rota instances to fixed-block grid subproblems.

A Rota instance is a rank-n matroid on n^2 elements given as a disjoint
union of n bases B_1..B_n.  A double partition pairs a partition beta into
n disjoint bases with a partition tau into n disjoint transversals (sets
meeting every B_i exactly once), and carries the potential

    mu(beta, tau) = sum over ordered pairs i != j of |beta_i ∩ tau_j|.

mu = 0 forces beta_i = tau_i for all i, and then the grid with (i, j) entry
B_i ∩ tau_j solves the instance.  While mu > 0, one descent step picks a
block of k indices around a nonempty off-diagonal intersection, restricts
the matroid to the union S of the block's beta parts, solves the induced
n x k grid instance with rows I_i = B_i ∩ T ∩ S (T the union of the block's
tau parts), and regroups: the subgrid's columns replace the block's beta
parts, and the columns of a companion grid on B_i ∩ T replace the block's
tau parts.  Off-diagonal intersections inside the block drop to zero while
all other contributions are conserved, so mu strictly decreases and the
iteration terminates in at most mu(initial) steps -- unless a subproblem
comes back unsolvable, in which case that subproblem is itself a
counterexample to the fixed-block conjecture and is surfaced as a
first-class certificate, never an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

from .grid import (REQUIRED, Grid, GridInstance, SolveReport, solve,
                   validate_grid)
from .matroid import MatroidOracle, is_disjoint_union_of_bases


@dataclass(frozen=True)
class RotaInstance:
    """Rank-n matroid on n^2 elements with a distinguished basis partition."""

    matroid: MatroidOracle
    bases: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(frozenset(b) for b in self.bases))

    @property
    def n(self) -> int:
        return len(self.bases)

    def check(self) -> None:
        n = self.n
        if self.matroid.rank_total != n:
            raise ValueError(f"matroid rank {self.matroid.rank_total} != {n} bases")
        if self.matroid.ground.size != n * n:
            raise ValueError(f"ground set must have {n * n} elements")
        if not is_disjoint_union_of_bases(self.matroid, self.bases):
            raise ValueError("bases must be disjoint and cover the ground set")


@dataclass(frozen=True)
class DoublePartition:
    beta: tuple[frozenset[int], ...]
    tau: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(frozenset(b) for b in self.beta))
        object.__setattr__(self, "tau", tuple(frozenset(t) for t in self.tau))
        if len(self.beta) != len(self.tau):
            raise ValueError("beta and tau must have the same number of parts")


def is_transversal(inst: RotaInstance, elems) -> bool:
    """True iff `elems` holds exactly one element of every B_i."""
    s = frozenset(elems)
    return (len(s) == inst.n
            and all(len(s & b) == 1 for b in inst.bases))


def check_double_partition(inst: RotaInstance, dp: DoublePartition) -> None:
    """Raise unless beta is a basis partition and tau a transversal partition."""
    n = inst.n
    if len(dp.beta) != n:
        raise ValueError(f"expected {n} parts, got {len(dp.beta)}")
    if not is_disjoint_union_of_bases(inst.matroid, dp.beta):
        raise ValueError("beta is not a partition into disjoint bases")
    covered: set[int] = set()
    for j, t in enumerate(dp.tau):
        if covered & t:
            raise ValueError(f"tau_{j} overlaps an earlier transversal")
        covered |= t
        for i, b in enumerate(inst.bases):
            if len(t & b) != 1:
                raise ValueError(f"tau_{j} meets B_{i} in {len(t & b)} elements")
    if len(covered) != inst.matroid.ground.size:
        raise ValueError("tau does not cover the ground set")


def mu(dp: DoublePartition) -> int:
    """Potential: total off-diagonal intersection between beta and tau parts."""
    return sum(len(b & t)
               for i, b in enumerate(dp.beta)
               for j, t in enumerate(dp.tau) if i != j)


def initial_double_partition(inst: RotaInstance) -> DoublePartition:
    """beta_i = B_i; tau_j collects the j-th smallest element of every B_i."""
    ordered = [sorted(b) for b in inst.bases]
    n = inst.n
    tau = tuple(frozenset(row[j] for row in ordered) for j in range(n))
    return DoublePartition(inst.bases, tau)


def select_block(dp: DoublePartition, k: int, rule: str = "lex") -> tuple[int, ...]:
    """Indices of the beta/tau parts to regroup, as a sorted k-tuple.

    The block contains the first pair (i, j), i != j, with beta_i ∩ tau_j
    nonempty -- lexicographically first under rule "lex", largest
    intersection first (ties lexicographic) under rule "max" -- padded with
    the smallest indices outside {i, j}.
    """
    n = len(dp.beta)
    if k > n:
        raise ValueError(f"block size {k} exceeds {n} parts")
    if rule not in ("lex", "max"):
        raise ValueError(f"unknown block rule {rule!r}")
    best: tuple[int, int] | None = None
    best_size = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            size = len(dp.beta[i] & dp.tau[j])
            if size == 0:
                continue
            if rule == "lex":
                best = (i, j)
                break
            if size > best_size:
                best, best_size = (i, j), size
        if rule == "lex" and best is not None:
            break
    if best is None:
        raise ValueError("mu is zero: no off-diagonal intersection to fix")
    block = {best[0], best[1]}
    for idx in range(n):
        if len(block) == k:
            break
        block.add(idx)
    return tuple(sorted(block))


@dataclass(frozen=True)
class Subinstance:
    """A block's grid subproblem plus the index maps back to the parent."""

    instance: GridInstance
    parent_elements: tuple[int, ...]   # sub index -> parent index
    block: tuple[int, ...]
    span: frozenset[int]               # S: union of the block's beta parts
    trace_set: frozenset[int]          # T: union of the block's tau parts

    def to_parent(self, e: int) -> int:
        return self.parent_elements[e]


def build_subinstance(inst: RotaInstance, dp: DoublePartition,
                      block: Sequence[int]) -> Subinstance:
    """Restrict to the block's beta union and induce rows B_i ∩ T ∩ S."""
    block = tuple(sorted(block))
    span = frozenset().union(*(dp.beta[b] for b in block))
    trace = frozenset().union(*(dp.tau[b] for b in block))
    sub = inst.matroid.restrict(span)
    to_sub = {e: i for i, e in enumerate(sub.parent_elements)}
    rows = tuple(frozenset(to_sub[e] for e in (b & trace & span))
                 for b in inst.bases)
    grid_inst = GridInstance(sub, inst.n, len(block), rows, REQUIRED)
    return Subinstance(grid_inst, sub.parent_elements, block, span, trace)


def rebuild(inst: RotaInstance, dp: DoublePartition, sub: Subinstance,
            subgrid: Grid) -> DoublePartition:
    """Fold a solved block subgrid back into a double partition.

    The subgrid's columns become the block's new beta parts.  The new tau
    parts are the columns of the companion grid whose row i holds the k
    elements of B_i ∩ T, each row-i element of S keeping the column it has
    in the subgrid and the remaining elements filling vacant columns in
    increasing order.
    """
    if not validate_grid(sub.instance, subgrid):
        raise ValueError("subgrid does not solve the block subproblem")
    n = inst.n
    k = len(sub.block)
    new_beta = list(dp.beta)
    for j, b in enumerate(sub.block):
        new_beta[b] = frozenset(sub.to_parent(subgrid[i][j]) for i in range(n))

    companion: list[list[int]] = [[-1] * k for _ in range(n)]
    for i in range(n):
        tied = inst.bases[i] & sub.trace_set        # exactly k elements
        in_span = {e for e in tied if e in sub.span}
        sub_row = [sub.to_parent(e) for e in subgrid[i]]
        for e in in_span:
            companion[i][sub_row.index(e)] = e
        vacancies = [j for j in range(k) if companion[i][j] < 0]
        for j, e in zip(vacancies, sorted(tied - in_span)):
            companion[i][j] = e

    new_tau = list(dp.tau)
    for j, b in enumerate(sub.block):
        new_tau[b] = frozenset(companion[i][j] for i in range(n))
    return DoublePartition(tuple(new_beta), tuple(new_tau))


@dataclass(frozen=True)
class CounterexampleCertificate:
    """An unsolvable block subproblem: it satisfies every hypothesis of the
    fixed-block grid conjecture, so an exhausted search here refutes the
    conjecture and must be exported for independent replay."""

    matroid: MatroidOracle                 # the restricted oracle
    bases: tuple[frozenset[int], ...]      # its k disjoint bases (sub indices)
    rows: tuple[frozenset[int], ...]       # the row sets I_1..I_n (sub indices)
    report: SolveReport
    parent_elements: tuple[int, ...]

    @property
    def instance(self) -> GridInstance:
        n = len(self.rows)
        return GridInstance(self.matroid, n, len(self.bases), self.rows, REQUIRED)


@dataclass(frozen=True)
class DescentStep:
    block: tuple[int, ...]
    mu_before: int
    mu_after: int
    subinstance: Subinstance
    report: SolveReport


@dataclass(frozen=True)
class DescentTrace:
    steps: tuple[DescentStep, ...]
    grid: Grid | None
    certificate: CounterexampleCertificate | None
    direct_report: SolveReport | None = None   # set for the n <= 2 direct solve

    @property
    def succeeded(self) -> bool:
        return self.grid is not None

    def to_json(self) -> str:
        from .formats import serialize_grid_instance, serialize_matroid

        steps = []
        for s in self.steps:
            steps.append({
                "block": list(s.block),
                "mu_before": s.mu_before,
                "mu_after": s.mu_after,
                "subinstance": serialize_grid_instance(s.subinstance.instance,
                                                       matroid_path="inline"),
                "submatroid": serialize_matroid(s.subinstance.instance.matroid),
                "nodes": s.report.nodes,
                "millis": s.report.millis,
            })
        return json.dumps(steps, indent=2)


Solver = Callable[[GridInstance], SolveReport]


def _default_solver(instance: GridInstance) -> SolveReport:
    return solve(instance)


def descent_step(inst: RotaInstance, dp: DoublePartition, k: int = 3,
                 solver: Solver = _default_solver, block_rule: str = "lex"):
    """One potential-reducing step.

    Returns (new_dp, DescentStep) on success, or a CounterexampleCertificate
    when the block subproblem is unsolvable.
    """
    if inst.n < 3 or k < 3:
        raise ValueError("descent requires n >= 3 and block size k >= 3")
    mu_before = mu(dp)
    block = select_block(dp, k, block_rule)   # raises when mu is zero
    sub = build_subinstance(inst, dp, block)
    report = solver(sub.instance)
    if report.status != "SAT":
        beta_sub = tuple(
            frozenset(i for i, e in enumerate(sub.parent_elements)
                      if e in dp.beta[b])
            for b in block)
        return CounterexampleCertificate(
            matroid=sub.instance.matroid, bases=beta_sub,
            rows=sub.instance.rows, report=report,
            parent_elements=sub.parent_elements)
    new_dp = rebuild(inst, dp, sub, report.grid)
    mu_after = mu(new_dp)
    if mu_after >= mu_before:
        raise AssertionError(
            f"potential failed to decrease: {mu_before} -> {mu_after}")
    return new_dp, DescentStep(block, mu_before, mu_after, sub, report)


def rota_solve(inst: RotaInstance, k: int = 3, solver: Solver = _default_solver,
               block_rule: str = "lex") -> DescentTrace:
    """Drive an instance to a full grid (rows = B_i, columns bases).

    For n <= 2 the grid is found by a direct search.  For n >= 3 the descent
    iterates from the canonical initial double partition until mu reaches
    zero; each step costs one n x k subsolve and the step count is bounded
    by the initial potential.  Any unsolvable subproblem stops the run and
    is returned as a certificate.
    """
    inst.check()
    n = inst.n
    if n <= 2:
        direct = GridInstance(inst.matroid, n, n, inst.bases, REQUIRED)
        report = solver(direct)
        if report.status == "SAT":
            return DescentTrace((), report.grid, None, direct_report=report)
        cert = CounterexampleCertificate(
            matroid=inst.matroid, bases=inst.bases, rows=inst.bases,
            report=report,
            parent_elements=tuple(range(inst.matroid.ground.size)))
        return DescentTrace((), None, cert, direct_report=report)
    if k > n:
        raise ValueError(f"block size {k} exceeds n = {n}")

    dp = initial_double_partition(inst)
    steps: list[DescentStep] = []
    while mu(dp) > 0:
        outcome = descent_step(inst, dp, k, solver, block_rule)
        if isinstance(outcome, CounterexampleCertificate):
            return DescentTrace(tuple(steps), None, outcome)
        dp, step = outcome
        steps.append(step)

    grid = grid_from_double_partition(inst, dp)
    return DescentTrace(tuple(steps), grid, None)


def grid_from_double_partition(inst: RotaInstance, dp: DoublePartition) -> Grid:
    """At mu = 0, entry (i, j) is the unique element of B_i ∩ tau_j."""
    if mu(dp) != 0:
        raise ValueError("grid extraction requires mu = 0")
    rows = []
    for b in inst.bases:
        row = []
        for t in dp.tau:
            cell = b & t
            if len(cell) != 1:
                raise ValueError("tau part is not a transversal")
            row.append(next(iter(cell)))
        rows.append(tuple(row))
    return tuple(rows)
