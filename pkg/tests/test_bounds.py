"""Ordering bound: exact search vs brute force, prescribed orderings,
the running-union identity, and the min-max placement search."""

import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from conftest import golden_grid
from pda_workbench.bounds import (
    BoundCertificate,
    bipartite_ordering,
    corollary1_value,
    eval_ordering,
    partition_ordering,
    theorem1_exact,
    theorem1_greedy,
    theorem3_search,
)
from pda_workbench.constructions import bipartite_pda, partition_pda
from pda_workbench.core import StarPattern, pda_params, to_star_pattern


def pattern_of(name):
    return to_star_pattern(golden_grid(name))


def brute_force_max(pattern):
    """Max nested-intersection sum over every full ordering.

    Permutations come out lexicographically and the maximum is kept only
    on strict improvement, so the returned ordering is the lex-least
    maximizer -- the same tie-break theorem1_exact promises.
    """
    full = (1 << pattern.f) - 1
    best, best_order = -1, None
    for perm in itertools.permutations(range(1, pattern.k + 1)):
        inter, total = full, 0
        for u in perm:
            inter &= pattern.masks[u - 1]
            if not inter:
                break
            total += inter.bit_count()
        if total > best:
            best, best_order = total, perm
    return best, best_order


# ---------------------------------------------------------------------------
# the low-memory 6-user placement: value 11, chain 3+3+2+2+1
# ---------------------------------------------------------------------------


def test_prescribed_ordering_reaches_11():
    cert = eval_ordering(pattern_of("GRID_K6_F4_Z1"), (1, 5, 2, 6, 3, 4))
    assert cert.value == 11
    assert cert.step_sizes == (3, 3, 2, 2, 1, 0)
    assert cert.method == "prescribed" and not cert.exact
    assert cert.rate_bound == Fraction(11, 4)


def test_exact_search_finds_11_with_lex_least_witness():
    cert = theorem1_exact(pattern_of("GRID_K6_F4_Z1"))
    assert cert.value == 11
    assert cert.witness == (1, 5, 2, 6, 3, 4)
    assert cert.step_sizes == (3, 3, 2, 2, 1, 0)
    assert cert.method == "exact" and cert.exact


def test_greedy_reaches_11_here():
    assert theorem1_greedy(pattern_of("GRID_K6_F4_Z1")).value == 11


def test_partial_orderings_are_allowed():
    pat = pattern_of("GRID_K6_F4_Z1")
    assert eval_ordering(pat, (5,)).step_sizes == (3,)
    assert eval_ordering(pat, (4, 1)).value == 5


# ---------------------------------------------------------------------------
# exact search vs brute force
# ---------------------------------------------------------------------------


def random_pattern(rng, k_max=6):
    f = rng.randint(1, 8)
    k = rng.randint(2, k_max)
    return StarPattern(f, tuple(rng.randint(0, (1 << f) - 1) for _ in range(k)))


def test_exact_matches_brute_force_values_and_witnesses():
    rng = random.Random(1302)
    for _ in range(150):
        pat = random_pattern(rng, k_max=6)
        value, order = brute_force_max(pat)
        cert = theorem1_exact(pat)
        assert cert.value == value
        assert cert.witness == order
        assert cert.exact and cert.method == "exact"


def test_exact_matches_brute_force_at_seven_users():
    rng = random.Random(77)
    for _ in range(40):
        f = rng.randint(2, 7)
        pat = StarPattern(f, tuple(rng.randint(0, (1 << f) - 1) for _ in range(7)))
        assert theorem1_exact(pat).value == brute_force_max(pat)[0]


def test_greedy_never_beats_exact_and_prescribed_never_beats_greedy_is_false():
    # Greedy is a lower bound on exact; arbitrary prescribed orderings can
    # land anywhere at or below exact.
    rng = random.Random(5)
    for _ in range(60):
        pat = random_pattern(rng)
        exact = theorem1_exact(pat).value
        assert theorem1_greedy(pat).value <= exact
        order = list(range(1, pat.k + 1))
        rng.shuffle(order)
        assert eval_ordering(pat, order).value <= exact


def test_budget_exhaustion_degrades_honestly():
    rng = random.Random(9)
    pat = StarPattern(10, tuple(rng.randint(0, (1 << 10) - 1) for _ in range(10)))
    cert = theorem1_exact(pat, budget=3)
    assert not cert.exact and cert.method == "branch_bound"
    # the incumbent is never worse than the identity ordering it was seeded with
    assert cert.value >= eval_ordering(pat, range(1, 11)).value
    assert cert.value == sum(cert.step_sizes)
    assert theorem1_exact(pat).value >= cert.value


# ---------------------------------------------------------------------------
# certificate plumbing
# ---------------------------------------------------------------------------


def test_certificate_consistency_is_enforced():
    with pytest.raises(ValueError, match="disagrees"):
        BoundCertificate(5, 4, (1, 2), (2, 2), "prescribed", False)
    with pytest.raises(ValueError, match="non-increasing"):
        BoundCertificate(5, 4, (1, 2), (2, 3), "prescribed", False)
    with pytest.raises(ValueError, match="repeats"):
        BoundCertificate(4, 4, (1, 1), (2, 2), "prescribed", False)


def test_certificate_as_dict_shape():
    d = theorem1_exact(pattern_of("GRID_K4_F6_Z3")).as_dict()
    assert d == {
        "value": 4,
        "rate_bound": {"num": 2, "den": 3},
        "witness": [1, 2, 3, 4],
        "step_sizes": [3, 1, 0, 0],
        "method": "exact",
        "exact": True,
    }


def test_bad_orderings_rejected():
    pat = pattern_of("GRID_K4_F6_Z3")
    with pytest.raises(ValueError, match="repeats"):
        eval_ordering(pat, (1, 1))
    with pytest.raises(ValueError, match="outside"):
        eval_ordering(pat, (0,))
    with pytest.raises(ValueError, match="outside"):
        eval_ordering(pat, (5,))


# ---------------------------------------------------------------------------
# running-union identity
# ---------------------------------------------------------------------------


def test_union_sum_on_reference_placements():
    assert corollary1_value(pattern_of("GRID_K4_F6_Z3"), (1, 2, 3, 4)) == 20
    assert corollary1_value(pattern_of("GRID_K6_F4_Z1"), (1, 5, 2, 6, 3, 4)) == 13


def test_union_sum_requires_full_ordering():
    with pytest.raises(ValueError, match="full-length"):
        corollary1_value(pattern_of("GRID_K4_F6_Z3"), (1, 2))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.data())
def test_union_and_intersection_sums_are_complementary(data):
    f = data.draw(st.integers(1, 8))
    k = data.draw(st.integers(1, 6))
    pat = StarPattern(
        f, tuple(data.draw(st.integers(0, (1 << f) - 1)) for _ in range(k))
    )
    order = tuple(data.draw(st.permutations(list(range(1, k + 1)))))
    union_sum = corollary1_value(pat, order)
    assert eval_ordering(pat, order).value == k * f - union_sum


# ---------------------------------------------------------------------------
# prescribed orderings for the construction families
# ---------------------------------------------------------------------------


def test_partition_ordering_shape_and_value():
    order = partition_ordering(3, 2)
    assert order == (3, 6, 7, 8, 9, 1, 2, 4, 5)
    cert = eval_ordering(to_star_pattern(partition_pda(3, 2)), order)
    assert cert.value == 15
    assert cert.step_sizes == (6, 4, 3, 2, 0, 0, 0, 0, 0)


def test_partition_ordering_value_at_q3_m3():
    pat = to_star_pattern(partition_pda(3, 3))
    assert eval_ordering(pat, partition_ordering(3, 3)).value == 47


@pytest.mark.parametrize("m", range(2, 7))
def test_partition_ordering_is_tight_at_q2(m):
    grid = partition_pda(2, m)
    cert = eval_ordering(to_star_pattern(grid), partition_ordering(2, m))
    assert cert.value == 2 ** m == pda_params(grid).s


def test_partition_ordering_is_a_permutation():
    for q, m in [(2, 4), (3, 2), (4, 3), (5, 2)]:
        order = partition_ordering(q, m)
        assert sorted(order) == list(range(1, (m + 1) * q + 1))


def test_bipartite_ordering_shape_and_value():
    order = bipartite_ordering(5, 2, 1)
    assert order == (1, 5, 2, 8, 6, 3, 10, 9, 7, 4)
    cert = eval_ordering(to_star_pattern(bipartite_pda(5, 2, 1)), order)
    assert cert.value == 10
    assert cert.step_sizes == (3, 2, 2, 1, 1, 1, 0, 0, 0, 0)


@pytest.mark.parametrize(
    "m,a,b",
    [(m, a, b) for m in range(3, 8) for a in range(1, m) for b in range(1, m - a)],
)
def test_bipartite_ordering_is_tight(m, a, b):
    grid = bipartite_pda(m, a, b)
    order = bipartite_ordering(m, a, b)
    assert sorted(order) == list(range(1, comb(m, a) + 1))
    value = eval_ordering(to_star_pattern(grid), order).value
    assert value == comb(m, a + b) == pda_params(grid).s


# ---------------------------------------------------------------------------
# min-max placement search
# ---------------------------------------------------------------------------


def test_min_max_on_the_half_memory_shape():
    rep = theorem3_search(4, 6, 3, mode="canonical")
    assert rep.best_value == 4
    assert rep.rate_bound == Fraction(2, 3)
    assert rep.exhaustive and rep.mode == "canonical"
    # the winning placement really attains 4 and is Z-uniform
    assert theorem1_exact(rep.best_pattern).value == 4
    assert rep.best_pattern.uniform_z() == 3


@pytest.mark.parametrize(
    "k,f,z",
    [(2, 2, 1), (2, 3, 1), (3, 3, 2), (3, 4, 2), (4, 4, 2), (2, 4, 2)],
)
def test_canonical_and_exhaustive_modes_agree(k, f, z):
    a = theorem3_search(k, f, z, mode="exhaustive")
    b = theorem3_search(k, f, z, mode="canonical")
    assert a.best_value == b.best_value
    assert a.exhaustive and b.exhaustive
    assert b.dedup_hits >= 0 and b.nodes_explored <= a.nodes_explored


def test_min_max_edge_cases():
    assert theorem3_search(3, 3, 3).best_value == 0  # everything cached
    # nothing cached: every ordering keeps the full row set alive
    assert theorem3_search(2, 3, 0).best_value == 6


def test_min_max_budget_truncates_honestly():
    rep = theorem3_search(4, 6, 3, mode="canonical", budget=5)
    assert not rep.exhaustive
    assert rep.best_value >= 4  # partial minimum can only overshoot


def test_search_report_as_dict_shape():
    d = theorem3_search(2, 2, 1).as_dict()
    assert d["best_value"] == 1
    assert d["rate_bound"] == {"num": 1, "den": 2}
    assert d["witness_uncached_sets"] == [[1], [2]]
    assert d["exhaustive"] is True
    assert set(d) == {
        "k", "f", "z", "best_value", "rate_bound", "witness_uncached_sets",
        "nodes_explored", "dedup_hits", "exhaustive", "mode",
    }


def test_search_rejects_bad_arguments():
    with pytest.raises(ValueError):
        theorem3_search(0, 2, 1)
    with pytest.raises(ValueError):
        theorem3_search(2, 2, 3)
    with pytest.raises(ValueError):
        theorem3_search(2, 2, 1, mode="sideways")
