from fractions import Fraction

import pytest

from conftest import q
from cantorsurj.experiments import (
    ColoringSpec,
    QCopy,
    build_witness,
    epsilon_parameters,
    find_cell_within,
    lower_bound_coloring,
    omega_coloring,
    oscillation_search,
    perfect_tree,
    random_qcopy,
    realize_all_colors,
)
from cantorsurj.intervals import ClopenInterval, Filtering
from cantorsurj.points import Point, max_point, min_point
from cantorsurj.randgen import derive_rng
from cantorsurj.surjections import compose, from_filtering, identity, tuple_to_factor
from cantorsurj.surjections import BoundaryTuple


def test_epsilon_parameters():
    p = epsilon_parameters(2, Fraction(3, 10))
    assert (p.k, p.ell, p.t) == (2, 3, 16)
    assert epsilon_parameters(2, "0.3") == p  # strings go through Fraction
    assert (lambda r: (r.k, r.ell, r.t))(epsilon_parameters(2, 0.6)) == (1, 1, 1)
    coarse = epsilon_parameters(2, 1)
    assert (coarse.k, coarse.ell, coarse.t) == (1, 1, 1)
    wide = epsilon_parameters(3, Fraction(1, 2))
    assert (wide.k, wide.ell) == (2, 8) and wide.t == 1903757312
    for bad in (0, -1, Fraction(11, 10)):
        with pytest.raises(ValueError):
            epsilon_parameters(2, bad)


def test_find_cell_within_identity():
    e = identity(2)
    assert find_cell_within(e, ClopenInterval.whole(2)) == ()
    assert find_cell_within(e, ClopenInterval(min_point(2), q(0))) == (0,)
    assert find_cell_within(e, ClopenInterval(Point(2, (1,), 0), max_point(2))) == (1,)
    iv = ClopenInterval(Point(2, (0, 1, 1), 0), q(1, 0, 0))
    assert find_cell_within(e, iv, depth_bound=1) is None
    word = find_cell_within(e, iv, depth_bound=3)
    assert word is not None and ClopenInterval.of_node(_node(word)).lo >= iv.lo


def _node(word):
    from cantorsurj.points import Node

    return Node(2, word)


def test_qcopy_normalization():
    e = identity(2)
    # abutting pieces merge into one
    y = QCopy(e, (ClopenInterval(min_point(2), q(0, 0)), ClopenInterval(Point(2, (0, 1), 0), q(0))))
    assert len(y.pieces) == 1
    assert y.pieces[0] == ClopenInterval(min_point(2), q(0))
    assert len(QCopy.unrestricted(e).pieces) == 1
    with pytest.raises(ValueError):
        QCopy(identity(3), (ClopenInterval.whole(3),))
    with pytest.raises(ValueError):
        QCopy(e, ())


def test_qcopy_json_roundtrip():
    y = random_qcopy(derive_rng(3, "json"))
    assert QCopy.from_json(y.to_json()).to_json() == y.to_json()


def test_perfect_tree_flags():
    y = QCopy(identity(2), (ClopenInterval(min_point(2), q(0)),))
    rep = perfect_tree(y, 3)
    words = rep.words()
    assert () in words and (0,) in words and (1,) not in words
    assert (0, 1, 1) in words and len(words) == 8
    node = {n.word: n for n in rep.nodes}
    assert node[()].splitting is False and node[()].pending is False
    assert node[(0,)].splitting is True
    # the frontier cannot be settled yet: splitting may appear deeper
    assert node[(0, 1, 1)].splitting is None and node[(0, 1, 1)].pending


def test_omega_coloring_goldens():
    full = QCopy.unrestricted(identity(2))
    assert omega_coloring(full) == 0
    left = QCopy(identity(2), (ClopenInterval(min_point(2), q(0)),))
    assert omega_coloring(left) == 0


def test_build_witness_goldens():
    full = QCopy.unrestricted(identity(2))
    z0 = build_witness(full, 0)
    assert z0.color == 0 and len(z0.copy.pieces) == 1  # r=0 cut merges away
    z2 = build_witness(full, 2)
    assert z2.color == 2
    assert z2.cut_node == (0, 0, 0) and z2.keep_node == (1,)
    assert omega_coloring(z2.copy) == 2
    j = z2.to_json()
    assert j["color"] == 2 and j["target"] == 2


def test_witness_steering_random_copies():
    rng = derive_rng(7, "steer")
    for _ in range(8):
        y = random_qcopy(rng)
        assert omega_coloring(y) >= 0
        for r in (0, 1, 4):
            assert build_witness(y, r).color == r


def test_witness_cap_exhaustion():
    with pytest.raises(RuntimeError):
        build_witness(QCopy.unrestricted(identity(2)), 40, cap=6)


def test_lower_bound_coloring():
    assert lower_bound_coloring(identity(2), 1) == 0
    assert lower_bound_coloring(identity(2), 2) == 0  # nested fingerprint: catch-all


def test_realize_all_colors_identity():
    rep = realize_all_colors(identity(2), 2, 20)
    assert rep.complete and rep.colors == 16
    assert len(rep.realizations) == 16
    assert all(r.verified and r.witness is not None for r in rep.realizations)
    assert rep.to_json()["t"] == 16


def test_realize_all_colors_skewed():
    h = from_filtering(Filtering(2, ((q(0, 0),),)))
    rep = realize_all_colors(h, 2, 20)
    assert rep.complete and all(r.verified for r in rep.realizations)


def test_realize_reports_missing_when_starved():
    rep = realize_all_colors(identity(2), 2, 20, budget=10)
    assert not rep.complete
    assert len(rep.realizations) == 16  # one row per color regardless
    assert not any(r.verified for r in rep.realizations)


def test_coloring_spec_validation():
    ColoringSpec(2, 2, 16, "relabeled_types", relabel=tuple(range(16)))
    with pytest.raises(ValueError):
        ColoringSpec(2, 2, 16, "relabeled_types", relabel=(0, 1))  # arity
    with pytest.raises(ValueError):
        ColoringSpec(2, 2, 3, "relabeled_types", relabel=(0, 1, 5) + (0,) * 13)
    with pytest.raises(ValueError):
        ColoringSpec(2, 2, 4, "nonsense")


def test_coloring_spec_color_of():
    e = identity(2)
    spec = ColoringSpec(2, 2, 4, "table", table=(("00|0|10", 3),), constant=1)
    assert spec.color_of(e.fingerprint(2)) == 3
    assert spec.color_of((q(0, 0, 0), q(0, 0), q(1, 0))) == 1  # falls to default
    assert not spec.factors_through_types()
    assert ColoringSpec.from_json(spec.to_json()) == spec


def test_oscillation_exact_regime():
    spec = ColoringSpec(2, 2, 16, "relabeled_types", relabel=tuple(range(16)))
    rep = oscillation_search(spec, Fraction(3, 10))
    assert rep.regime == "exact" and rep.guaranteed
    assert rep.labels == tuple(range(16))
    for w in rep.witnesses:
        f = tuple_to_factor(identity(2), BoundaryTuple(2, 2, w.points))
        assert spec.color_of(compose(f, identity(2)).fingerprint(2)) == w.label


def test_oscillation_collapsing_relabel():
    spec = ColoringSpec(2, 2, 16, "relabeled_types", relabel=(3,) * 16)
    rep = oscillation_search(spec, Fraction(3, 10))
    assert rep.labels == (3,) and rep.guaranteed


def test_oscillation_constant():
    rep = oscillation_search(ColoringSpec(2, 2, 7, "constant", constant=5), Fraction(3, 10))
    assert rep.labels == (5,) and rep.guaranteed and rep.regime == "exact"


def test_oscillation_heuristic_deterministic():
    spec = ColoringSpec(2, 2, 4, "table", table=(("00|0|10", 3),), constant=1)
    a = oscillation_search(spec, Fraction(3, 10), budget=30_000, seed=11)
    b = oscillation_search(spec, Fraction(3, 10), budget=30_000, seed=11)
    assert a.regime == "heuristic" and not a.guaranteed
    assert a.to_json() == b.to_json()
    assert 1 in a.labels  # the default label shows up once tables run dry


def test_oscillation_depth_mismatch():
    with pytest.raises(ValueError):
        oscillation_search(ColoringSpec(2, 3, 16, "constant", constant=0), Fraction(3, 10))
