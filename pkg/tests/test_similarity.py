from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import q
from cantorsurj.points import Point
from cantorsurj.similarity import (
    MAX_TYPE_LEAVES,
    TreeType,
    canonical_coloring,
    enumerate_types,
    is_strongly_diagonal,
    meet_closure,
    scan_types,
    search_tuple_of_type,
    similarity_type,
    tangent_number,
    tangent_table,
)
from cantorsurj.surjections import identity


def zigzag(n):
    """Andre's convolution: 2 Z_{m+1} = sum_k C(m,k) Z_k Z_{m-k}."""
    z = [1, 1]
    while len(z) <= n:
        m = len(z) - 1
        z.append(sum(comb(m, k) * z[k] * z[m - k] for k in range(m + 1)) // 2)
    return z[n]


def test_tangent_numbers():
    assert tangent_table(6) == (1, 2, 16, 272, 7936, 353792)
    for ell in range(1, 7):
        assert tangent_number(ell) == zigzag(2 * ell - 1)
    with pytest.raises(ValueError):
        tangent_number(0)


def test_type_counts():
    for ell in range(1, 5):
        assert len(enumerate_types(ell)) == tangent_number(ell)
    assert [t.levels for t in enumerate_types(2)] == [(1, 0, 2), (2, 0, 1)]


def test_tree_type_validation():
    TreeType((0,))
    TreeType((1, 0, 2))
    TreeType((2, 0, 1))
    for bad in ((0, 1, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (0, 1), (1, 0, 1)):
        with pytest.raises(ValueError):
            TreeType(bad)
    with pytest.raises(ValueError):
        TreeType(tuple(range(2 * MAX_TYPE_LEAVES + 1)))


def test_meet_closure():
    mc = meet_closure((q(0), q(1, 0)))
    assert mc.words == ((), (0,), (1, 0))
    assert [n.kind for n in mc.nodes] == ["meet", "stem", "stem"]
    root = mc.nodes[0]
    assert root.parent == -1 and root.level == 0
    # a stem that is also a pairwise meet keeps both roles
    both = meet_closure((q(0, 0), q(0), q(1, 0)))
    assert dict(zip(both.words, (n.kind for n in both.nodes)))[(0,)] == "both"
    with pytest.raises(ValueError):
        meet_closure((q(0), q(0)))


def test_strongly_diagonal():
    assert is_strongly_diagonal((q(0, 0, 0), q(0, 0, 1, 0)))
    assert not is_strongly_diagonal((q(0, 0), q(0)))  # comparable stems
    assert not is_strongly_diagonal((q(0, 0), q(0), q(1, 0)))
    assert not is_strongly_diagonal((q(0, 0), q(1, 0)))  # equal leaf levels


def test_similarity_type_goldens():
    pair = (q(0, 0, 0), q(0, 0, 1, 0))
    assert similarity_type(pair).levels == (1, 0, 2)
    # invariant under a common prefix shift and under level stretching
    assert similarity_type((q(1, 0, 0, 0), q(1, 0, 0, 1, 0))).levels == (1, 0, 2)
    assert similarity_type((q(0, 0, 0, 0), q(0, 0, 0, 1, 0))).levels == (1, 0, 2)
    swapped = (q(0, 0, 0, 0), q(0, 1, 0))  # lower point has the deeper stem
    assert similarity_type(swapped).levels == (2, 0, 1)
    with pytest.raises(ValueError):
        similarity_type((q(0, 0), q(0)))


def test_canonical_coloring():
    assert canonical_coloring((q(0, 0, 0), q(0, 0, 1, 0)), 2) == 0
    assert canonical_coloring((q(0, 0, 0, 0), q(0, 1, 0)), 2) == 1
    # non-diagonal tuples land in the catch-all class 0
    assert canonical_coloring((q(0, 0), q(0), q(1, 0)), 3) == 0
    with pytest.raises(ValueError):
        canonical_coloring((q(0),), 2)  # arity mismatch


@given(st.integers(0, 3), st.integers(1, 4), st.integers(0, 4))
def test_coloring_of_diagonal_pairs(shift, x, y):
    # two leaves under a common prefix, branching 0/1, leaf depths offset
    if x == y + 1:
        return  # equal leaf levels: not diagonal
    pre = [1] * shift
    a = q(*pre, 0, *([0] * x))
    b = q(*pre, 1, *([0] * y), 0)
    assert a < b
    want = 0 if len(a.stem) < len(b.stem) else 1
    assert canonical_coloring((a, b), 2) == want


def test_scan_identity_depth2():
    out = scan_types(identity(2), 3)
    assert out.complete
    assert out.deepest_full == 6
    assert sorted(out.witnesses) == list(range(16))
    for label, w in out.witnesses.items():
        assert is_strongly_diagonal(w.points)
        assert canonical_coloring(w.points, 3) == label
        assert all(p.stem and len(p.stem) <= w.depth for p in w.points)


def test_scan_targets_subset():
    out = scan_types(identity(2), 3, targets={0, 5})
    assert out.complete and sorted(out.witnesses) == [0, 5]


def test_scan_budget_exhaustion():
    out = scan_types(identity(2), 3, budget=50)
    assert not out.complete
    assert out.combos <= 50


def test_search_single_type():
    got = search_tuple_of_type(identity(2), TreeType((1, 0, 2)))
    assert got.found is not None and got.depth == 2
    assert similarity_type(got.found).levels == (1, 0, 2)
    assert not got.exhausted


def test_scan_base3():
    out = scan_types(identity(3), 2, budget=100_000)
    assert out.complete and sorted(out.witnesses) == [0, 1]
    for label, w in out.witnesses.items():
        assert all(p.base == 3 for p in w.points)
        assert canonical_coloring(w.points, 2) == label
