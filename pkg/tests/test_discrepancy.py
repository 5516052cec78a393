import itertools
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgraph.discrepancy import (
    Cycle,
    DiscrepancyProfile,
    NotLogTerminalError,
    NotNegativeDefiniteError,
    PairClass,
    adjunction_rhs,
    classify_pair,
    cycle_numbers,
    discrepancies,
    fundamental_cycle,
    rationality_check,
)
from resgraph.graph import ResolutionGraph, intersection_matrix
from resgraph.linalg import is_negative_definite, solve_linear_system

from conftest import chain, star

F = Fraction


def test_minus_two_chain_is_canonical():
    for n in range(1, 7):
        profile = discrepancies(chain([-2] * n))
        assert profile.values == [0] * n
        assert profile.index == 1
        assert classify_pair(profile) is PairClass.CANONICAL


def test_index4_graph(example51):
    profile = discrepancies(example51)
    assert profile.values == [F(1, 2), F(1, 4), F(1, 4), F(1, 2)]
    assert profile.index == 4
    assert classify_pair(profile) is PairClass.LOG_TERMINAL_NOT_CANONICAL
    assert profile.scaled() == {"C1": 2, "C2": 1, "C3": 1, "C4": 2}


def test_index9_graph(example52):
    profile = discrepancies(example52)
    assert profile.values == [F(2, 3), F(1, 3), F(4, 9), F(2, 9), F(5, 9)]
    assert profile.index == 9
    assert profile.is_log_terminal


def test_single_minus_five():
    profile = discrepancies(ResolutionGraph.build([("C1", -5)]))
    assert profile.values == [F(3, 5)]
    assert profile.index == 5


def test_pair_class_boundaries():
    assert classify_pair(DiscrepancyProfile({"C1": F(0)}, 1)) is PairClass.CANONICAL
    assert classify_pair(DiscrepancyProfile({"C1": F(1)}, 1)) is PairClass.NOT_LOG_TERMINAL
    assert classify_pair(DiscrepancyProfile({"C1": F(-1, 2), "C2": F(1, 3)}, 6)) is PairClass.LOG_TERMINAL_NOT_CANONICAL


def test_boundary_enters_the_right_hand_side():
    g = ResolutionGraph.build([("C1", -2)], boundary={"C1": 1})
    assert adjunction_rhs(g) == [-1]
    assert discrepancies(g).values == [F(1, 2)]


def test_not_log_terminal_is_flagged_numerical_only():
    # a -2 star with four leaves is the affine D4 diagram, which is not definite;
    # make the center -3 to get a definite but non log terminal configuration
    g = star(-3, [-2, -2, -2, -2])
    profile = discrepancies(g)
    assert not profile.is_log_terminal
    assert profile.numerical_only
    assert classify_pair(profile) is PairClass.NOT_LOG_TERMINAL


def test_not_negative_definite_refused():
    with pytest.raises(NotNegativeDefiniteError):
        discrepancies(star(-2, [-2, -2, -2, -2]))
    with pytest.raises(NotNegativeDefiniteError):
        discrepancies(ResolutionGraph.build([("C1", 0)]))
    with pytest.raises(NotNegativeDefiniteError):
        fundamental_cycle(star(-2, [-2, -2, -2, -2]))


def test_graph_with_a_cycle_uses_the_general_solver():
    g = ResolutionGraph.build([("A", -3), ("B", -3), ("C", -3)], [("A", "B"), ("B", "C"), ("A", "C")])
    profile = discrepancies(g)
    assert profile.values == [F(1, 1)] * 3
    assert profile.numerical_only


# -- random trees ------------------------------------------------------------


@st.composite
def weighted_trees(draw, max_n=8, min_weight=-6, boundary=True, forest=False):
    n = draw(st.integers(min_value=1, max_value=max_n))
    parents = [draw(st.integers(min_value=0, max_value=k - 1)) for k in range(1, n)]
    weights = draw(st.lists(st.integers(min_value=min_weight, max_value=-1), min_size=n, max_size=n))
    ids = [f"C{k + 1}" for k in range(n)]
    edges = [(ids[p], ids[k + 1]) for k, p in enumerate(parents)]
    if forest:
        edges = [e for e in edges if draw(st.booleans())]
    bd = {}
    if boundary:
        bd = draw(st.dictionaries(st.sampled_from(ids), st.integers(min_value=0, max_value=2), max_size=2))
    return ResolutionGraph.build(zip(ids, weights), edges, bd)


@settings(max_examples=300)
@given(weighted_trees())
def test_tree_solver_agrees_with_dense_elimination(g):
    m = intersection_matrix(g)
    if not is_negative_definite(m):
        with pytest.raises(NotNegativeDefiniteError):
            discrepancies(g)
        return
    profile = discrepancies(g)
    assert profile.values == solve_linear_system(m, adjunction_rhs(g))


@settings(max_examples=300)
@given(weighted_trees(forest=True))
def test_forest_solver_agrees_with_dense_elimination(g):
    m = intersection_matrix(g)
    if not is_negative_definite(m):
        with pytest.raises(NotNegativeDefiniteError):
            discrepancies(g)
        return
    profile = discrepancies(g)
    dense = solve_linear_system(m, adjunction_rhs(g))
    assert profile.values == dense
    assert profile.index == lcm(*(a.denominator for a in dense))


@settings(max_examples=300)
@given(weighted_trees())
def test_index_is_least_clearing_integer(g):
    try:
        profile = discrepancies(g)
    except NotNegativeDefiniteError:
        return
    r = profile.index
    assert all((a * r).denominator == 1 for a in profile.values)
    # r is minimal iff no r/q (q prime) clears every denominator
    primes = [q for q in range(2, r + 1) if r % q == 0 and all(q % k for k in range(2, int(q**0.5) + 1))]
    for q in primes:
        assert any((a * (r // q)).denominator != 1 for a in profile.values)


@settings(max_examples=200)
@given(weighted_trees(boundary=False, min_weight=-5), st.randoms(use_true_random=False))
def test_fundamental_cycle_does_not_depend_on_vertex_order(g, rnd):
    if not is_negative_definite(intersection_matrix(g)):
        return
    z = fundamental_cycle(g)
    order = list(g.vertices)
    rnd.shuffle(order)
    shuffled = ResolutionGraph(tuple(order), g.edges)
    assert fundamental_cycle(shuffled).multiplicities == z.multiplicities


def brute_force_fundamental_cycle(g, bound=4):
    """Smallest Z >= sum C_j with Z.C_i <= 0 everywhere, by exhaustive search."""
    m = intersection_matrix(g)
    n = len(m)
    good = []
    for z in itertools.product(range(1, bound + 1), repeat=n):
        if all(sum(m[i][j] * z[j] for j in range(n)) <= 0 for i in range(n)):
            good.append(z)
    assert good, "search box too small"
    low = tuple(min(z[i] for z in good) for i in range(n))
    assert low in good  # anti-nef cycles are closed under minimum
    return low


def test_fundamental_cycle_index4_graph(example51):
    z = fundamental_cycle(example51)
    assert z.as_tuple(example51) == (2, 1, 1, 1) == brute_force_fundamental_cycle(example51)
    nums = cycle_numbers(example51, z)
    assert (nums.z_squared, nums.z_dot_k, nums.p_a) == (-3, 1, 0)


def test_fundamental_cycle_index9_graph(example52):
    z = fundamental_cycle(example52)
    assert z.as_tuple(example52) == (2, 1, 2, 1, 1) == brute_force_fundamental_cycle(example52)
    nums = cycle_numbers(example52, z)
    # the multiplicity of this rational singularity is -Z^2 = 3
    assert (nums.z_squared, nums.z_dot_k, nums.p_a) == (-3, 1, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_single_vertex_cycle(n):
    g = ResolutionGraph.build([("C1", -n)])
    z = fundamental_cycle(g)
    assert z.multiplicities == {"C1": 1}
    assert cycle_numbers(g, z).z_squared == -n


def test_cycle_numbers_small():
    assert tuple(cycle_numbers(ResolutionGraph.build([("C1", -2)]), Cycle({"C1": 1}))) == (-2, 0, 0)
    assert tuple(cycle_numbers(ResolutionGraph.build([("C1", -3)]), Cycle({"C1": 1}))) == (-3, 1, 0)
    with pytest.raises(ValueError):
        cycle_numbers(ResolutionGraph.build([("C1", -3)]), Cycle({"X": 1}))


def test_rationality_check_examples(example51):
    a2 = rationality_check(chain([-2, -2]))
    assert a2.holds and a2.multiplicity == 2
    assert rationality_check(example51).multiplicity == 3
    single = rationality_check(ResolutionGraph.build([("C1", -2)]))
    assert bool(single) and single.multiplicity == 2


def test_rationality_check_refuses_non_log_terminal():
    with pytest.raises(NotLogTerminalError):
        rationality_check(star(-3, [-2, -2, -2, -2]))


def test_fundamental_cycle_warns_on_boundary():
    g = ResolutionGraph.build([("C1", -2)], boundary={"C1": 1})
    with pytest.warns(UserWarning):
        fundamental_cycle(g)


# -- structural relations at a fork ----------------------------------------------


def fork(center, arms):
    """Center C1 with arms given as weight lists, listed from the center outwards."""
    vertices = [("C1", center)]
    edges = []
    for arm in arms:
        prev = "C1"
        for w in arm:
            vid = f"C{len(vertices) + 1}"
            vertices.append((vid, w))
            edges.append((prev, vid))
            prev = vid
    return ResolutionGraph.build(vertices, edges)


@pytest.mark.parametrize("center", [-2, -3, -4])
@pytest.mark.parametrize("third", [[-2], [-3], [-2, -2, -2], [-4, -2], [-5]])
def test_d_type_relation(center, third):
    g = fork(center, [[-2], [-2], third])
    a = discrepancies(g)
    assert a["C2"] == a["C3"] == a["C1"] / 2


@pytest.mark.parametrize("center", [-2, -3])
@pytest.mark.parametrize("third", [[-2], [-2, -2], [-3], [-2, -3]])
def test_e_type_relation_with_two_chain(center, third):
    g = fork(center, [[-2], [-2, -2], third])
    a = discrepancies(g)
    assert a["C2"] == a["C1"] / 2
    assert a["C3"] == 2 * a["C1"] / 3


@pytest.mark.parametrize("center", [-2, -3])
def test_e_type_relation_with_minus_three_leaf(center):
    g = fork(center, [[-2], [-3], [-2]])
    a = discrepancies(g)
    assert a["C3"] == (a["C1"] + 1) / 3


def test_relations_on_index9_graph(example52):
    a = discrepancies(example52)
    assert a["C2"] == a["C1"] / 2
    assert a["C3"] == 2 * a["C1"] / 3
    assert a["C5"] == (a["C1"] + 1) / 3
