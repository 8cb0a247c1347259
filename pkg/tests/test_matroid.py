"""Oracle-level tests: ranks, axioms, restriction, testers.

Reference values are computed by routes independent of the package:
determinantal rank (nonzero minors) for vector matroids and DFS cycle
detection for graphic ones.
"""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotagrid import (BasesRep, GraphicRep, GroundSet, LinearRep,
                      MatroidOracle, enumerate_bases, find_exchange_violation,
                      is_disjoint_union_of_bases, rank_axiom_violations,
                      uniform_matroid, verify_basis_axioms)
from rotagrid.matroid import tester_for as make_tester

J_VECTORS = [(-2, 3, 0, 1), (0, 0, 1, 1), (0, 2, 0, 1), (1, 0, 3, 1),
             (1, 0, 0, 1), (0, 1, 2, 1), (0, 1, 0, 1), (4, 0, 0, 1)]


# --- independent reference implementations ---------------------------------

def det(rows):
    """Exact determinant by fraction-free expansion (reference only)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    sign = 1
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += sign * rows[0][j] * det(minor)
        sign = -sign
    return total


def minor_rank(vectors):
    """Rank as the largest size of a nonsingular square submatrix."""
    d = len(vectors[0])
    for size in range(min(d, len(vectors)), 0, -1):
        for cols in combinations(vectors, size):
            for dims in combinations(range(d), size):
                if det([[v[i] for i in dims] for v in cols]) != 0:
                    return size
    return 0


def has_cycle(vertices, edges):
    """DFS-free cycle test: repeatedly strip degree-<=1 endpoints."""
    edges = list(edges)
    changed = True
    while changed and edges:
        degree = {}
        for u, w in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[w] = degree.get(w, 0) + 1
        changed = False
        kept = []
        for u, w in edges:
            if u != w and (degree[u] == 1 or degree[w] == 1):
                changed = True
            else:
                kept.append((u, w))
        edges = kept
    return bool(edges)


# --- rank ------------------------------------------------------------------

def test_rank_uniform_capped(u24):
    assert u24.rank({0, 1, 2}) == 2


def test_rank_k4_triangle(k4):
    # edges 23, 24, 34 form a 3-cycle on vertices {2,3,4}
    assert k4.rank({3, 4, 5}) == 2


def test_rank_j_full_ground():
    j = MatroidOracle(LinearRep.from_columns(J_VECTORS))
    assert minor_rank(J_VECTORS) == 4
    assert j.rank(range(8)) == 4


def test_rank_rejects_out_of_range(k4):
    with pytest.raises(IndexError):
        k4.rank({0, 6})


def test_linear_rep_rejects_floats():
    with pytest.raises(TypeError):
        LinearRep.from_columns([(0.5, 1), (1, 0)])


# --- independence / bases ----------------------------------------------------

def test_independent_non_incident_pair(k4):
    assert k4.is_independent({0, 5})          # 12, 34


def test_parallel_copies_dependent(mcd):
    assert not mcd.is_independent({2, 6})     # 14, 14'


def test_independent_j_pair(oxley_j):
    assert oxley_j.is_independent({0, 1})     # (-2,3,0,1), (0,0,1,1)
    assert minor_rank([J_VECTORS[0], J_VECTORS[1]]) == 2


def test_is_basis_star_vs_triangle(k4):
    assert k4.is_basis({0, 1, 2})             # star at vertex 1
    assert not k4.is_basis({0, 1, 3})         # triangle 12, 13, 23


def test_uniform_every_subset_is_basis(u39):
    for c in combinations(range(9), 3):
        assert u39.is_basis(c)


# --- closure -----------------------------------------------------------------

def test_closure_of_empty_is_loops():
    looped = MatroidOracle(GraphicRep(3, ((0, 0), (0, 1), (1, 2), (2, 2))))
    assert looped.closure(()) == {0, 3}
    assert looped.loops() == {0, 3}


def test_closure_completes_triangle(k4):
    # 12, 23 span the triangle; 13 is the only other spanned edge
    assert k4.closure({0, 3}) == {0, 1, 3}


def test_closure_rank2_flat_is_everything(u24):
    assert u24.closure({0, 1}) == {0, 1, 2, 3}


# --- restriction -------------------------------------------------------------

def test_restrict_identity(k4):
    sub = k4.restrict(range(6))
    assert sub.parent_elements == tuple(range(6))
    for size in range(7):
        for c in combinations(range(6), size):
            assert sub.rank(c) == k4.rank(c)


def test_restrict_independent_set(k4):
    sub = k4.restrict({0, 1, 2})
    assert sub.rank_total == 3


def test_restrict_uniform_subset_sweep(u39):
    keep = [0, 2, 3, 5, 7, 8]
    sub = u39.restrict(keep)
    for size in range(7):
        for c in combinations(range(6), size):
            assert sub.rank(c) == min(len(c), 3)


def test_restrict_matches_parent_on_all_subsets(mcd):
    keep = sorted({0, 2, 4, 6, 8})
    sub = mcd.restrict(keep)
    for size in range(len(keep) + 1):
        for c in combinations(range(len(keep)), size):
            parent = [sub.parent_elements[e] for e in c]
            assert sub.rank(c) == mcd.rank(parent)


def test_restrict_linear_keeps_exactness(oxley_j):
    sub = oxley_j.restrict({0, 1, 4, 6})
    assert isinstance(sub.rep, LinearRep)
    assert sub.rank_total == minor_rank([J_VECTORS[i] for i in (0, 1, 4, 6)])


# --- basis-exchange checker ---------------------------------------------------

def test_exchange_accepts_u24(u24):
    assert verify_basis_axioms([set(c) for c in combinations(range(4), 2)])


def test_exchange_rejects_split_pair():
    assert not verify_basis_axioms([{0, 1}, {2, 3}])
    witness = find_exchange_violation([{0, 1}, {2, 3}])
    assert witness is not None


def test_exchange_accepts_k4_spanning_trees(k4):
    edges = k4.rep.edges
    trees = [set(c) for c in combinations(range(6), 3)
             if not has_cycle(4, [edges[e] for e in c])]
    assert len(trees) == 16           # Cayley: 4^2 spanning trees of K4
    assert verify_basis_axioms(trees)
    assert enumerate_bases(k4) == frozenset(frozenset(t) for t in trees)


def test_exchange_rejects_empty_family():
    with pytest.raises(ValueError):
        verify_basis_axioms([])


def test_exchange_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        verify_basis_axioms([{0, 1}, {2}])


# --- disjoint union of bases --------------------------------------------------

def test_disjoint_union_two_trees(k4):
    assert is_disjoint_union_of_bases(k4, [{0, 3, 5}, {1, 2, 4}])


def test_disjoint_union_rejects_triangle(k4):
    assert not is_disjoint_union_of_bases(k4, [{0, 1, 2}, {3, 4, 5}])


def test_disjoint_union_uniform(u39):
    assert is_disjoint_union_of_bases(
        u39, [{0, 1, 2}, {3, 4, 5}, {6, 7, 8}])


def test_disjoint_union_rejects_overlap(u39):
    assert not is_disjoint_union_of_bases(
        u39, [{0, 1, 2}, {2, 4, 5}, {6, 7, 8}])


# --- enumerate_bases -----------------------------------------------------------

def test_enumerate_u24(u24):
    assert len(enumerate_bases(u24)) == 6


def test_enumerate_j_matches_minor_sweep(oxley_j):
    by_minors = sum(
        1 for c in combinations(range(8), 4)
        if minor_rank([J_VECTORS[i] for i in c]) == 4)
    assert by_minors == 50
    assert len(enumerate_bases(oxley_j)) == 50


def test_enumerate_refuses_large_ground():
    big = uniform_matroid(2, 17)
    with pytest.raises(ValueError):
        enumerate_bases(big)


# --- axiom audits ---------------------------------------------------------------

def test_axioms_hold_for_core_matroids(k4, u24, u39, mcd, oxley_j):
    for oracle in (k4, u24, u39, mcd, oxley_j):
        assert rank_axiom_violations(oracle) == []


def test_axiom_audit_flags_non_matroid():
    broken = MatroidOracle(BasesRep.from_sets(2, [{0, 1}, {2, 3}]))
    assert rank_axiom_violations(broken) != []


def test_representation_equivalence(oxley_j):
    rebuilt = MatroidOracle(
        BasesRep.from_sets(4, enumerate_bases(oxley_j)), ground_size=8)
    for size in range(9):
        for c in combinations(range(8), size):
            assert rebuilt.rank(c) == oxley_j.rank(c)


# --- ground set / construction ---------------------------------------------------

def test_ground_set_labels():
    g = GroundSet(2, ("a", "b"))
    assert g.label(1) == "b"
    with pytest.raises(ValueError):
        GroundSet(3, ("a",))


def test_bases_rep_validates_cardinality():
    with pytest.raises(ValueError):
        BasesRep.from_sets(2, [{0, 1}, {2}])
    with pytest.raises(ValueError):
        BasesRep(2, frozenset())


# --- incremental testers agree with the rank oracle -------------------------------

graphic_reps = st.integers(2, 4).flatmap(
    lambda v: st.lists(
        st.tuples(st.integers(0, v - 1), st.integers(0, v - 1)),
        min_size=1, max_size=8,
    ).map(lambda edges: GraphicRep(v, tuple(edges))))


@given(graphic_reps, st.permutations(list(range(8))))
@settings(max_examples=150, deadline=None)
def test_tester_matches_oracle(rep, order):
    oracle = MatroidOracle(rep)
    m = oracle.ground.size
    tester = make_tester(oracle)
    current: list[int] = []
    for e in (x for x in order if x < m):
        expected = oracle.rank(current + [e]) == len(current) + 1
        assert tester.can_add(e) == expected
        if expected:
            tester.push(e)
            current.append(e)
    while current:
        tester.pop(current.pop())
        for e in range(m):
            if e in current:
                continue
            expected = oracle.rank(current + [e]) == len(current) + 1
            assert tester.can_add(e) == expected


@given(graphic_reps)
@settings(max_examples=100, deadline=None)
def test_graphic_rank_matches_cycle_stripping(rep):
    oracle = MatroidOracle(rep)
    m = oracle.ground.size
    for size in range(min(m, 5) + 1):
        for c in combinations(range(m), size):
            sub = [rep.edges[e] for e in c]
            # rank = |A| - independent cycles; build greedily as a check
            independent: list[tuple[int, int]] = []
            for edge in sub:
                if not has_cycle(rep.vertices, independent + [edge]):
                    independent.append(edge)
            assert oracle.rank(c) == len(independent)


@given(st.integers(0, 4), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_uniform_rank_formula(r, m):
    if r > m:
        r = m
    if r == 0:
        return
    oracle = uniform_matroid(r, m)
    for size in range(m + 1):
        subset = set(range(size))
        assert oracle.rank(subset) == min(size, r)
