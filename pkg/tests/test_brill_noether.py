"""Brill-Noether rank on the lattice and the degeneration experiments."""

import itertools

import pytest

from tropbn import (
    BNQuery,
    CombinatorialType,
    DegenerationSpec,
    Divisor,
    TropicalCurve,
    bn_rank,
    run_closedness_experiment,
    run_usc_experiment,
    wdr_member,
)
from tropbn.brill_noether import bn_rank_detail


def rose(g):
    return TropicalCurve({"v": g}, [])


def circle():
    return TropicalCurve({"a": 0, "b": 0},
                         [("e1", ("a", "b"), 1), ("e2", ("a", "b"), 1)])


def k4():
    vs = ["a", "b", "c", "d"]
    edges = [(f"{u}{v}", (u, v), 1) for u, v in itertools.combinations(vs, 2)]
    return TropicalCurve({v: 0 for v in vs}, edges)


def dumbbell_type():
    return CombinatorialType(
        [("x", 0), ("y", 0)],
        [("l1", ("x", "x")), ("l2", ("y", "y")), ("br", ("x", "y"))])


def test_query_validation():
    with pytest.raises(ValueError):
        BNQuery(d=2, r=1, resolution=0)
    with pytest.raises(ValueError):
        BNQuery(d=2, r=-1)
    with pytest.raises(ValueError):
        BNQuery(d=-1, r=0)


def test_wdr_member_weighted_point():
    c = rose(3)
    D = Divisor(c, [("v", 4)])
    assert wdr_member(c, D, 0)
    assert wdr_member(c, D, 2)
    assert not wdr_member(c, D, 3)


def test_rank_zero_shortcut():
    res = bn_rank_detail(circle(), BNQuery(d=7, r=0, resolution=5))
    assert res.rho == 7
    assert res.counterexample is None


def test_degree_below_rank_target():
    assert bn_rank(circle(), BNQuery(d=1, r=2)) == -1


def test_rose_consistency():
    # on R_g every divisor is a multiple of v, so the answer is closed-form:
    # d - r when d >= r + min(r, g), otherwise -1
    for g in range(4):
        c = rose(g)
        for d in range(7):
            for r in range(4):
                expected = d - r if d >= r + min(r, g) else -1
                assert bn_rank(c, BNQuery(d=d, r=r)) == expected, (g, d, r)


def test_circle_values():
    c = circle()
    assert bn_rank(c, BNQuery(d=2, r=1, resolution=2)) == 1
    detail = bn_rank_detail(c, BNQuery(d=1, r=1, resolution=4))
    assert detail.rho == -1
    assert detail.resolution == 4
    assert detail.counterexample is not None
    assert detail.counterexample.degree() == 1


def test_k4_degree_three():
    c = k4()
    assert bn_rank(c, BNQuery(d=3, r=0, resolution=2)) == 3
    assert bn_rank(c, BNQuery(d=3, r=1, resolution=2)) == 1
    assert bn_rank(c, BNQuery(d=3, r=2, resolution=2)) == -1


def test_monotone_in_r():
    c = circle()
    vals = [bn_rank(c, BNQuery(d=3, r=r, resolution=2)) for r in range(3)]
    assert vals == sorted(vals, reverse=True)


def test_spec_validation():
    ct = dumbbell_type()
    with pytest.raises(ValueError, match="unknown contracted"):
        DegenerationSpec(ct, contracted=("zz",))
    with pytest.raises(ValueError, match="one step"):
        DegenerationSpec(ct, steps=0)
    with pytest.raises(ValueError, match="rate"):
        DegenerationSpec(ct, rate=1)
    with pytest.raises(ValueError, match="unknown edge"):
        DegenerationSpec(ct, base={"zz": 2})
    with pytest.raises(ValueError, match="positive"):
        DegenerationSpec(ct, base={"l1": 0})
    spec = DegenerationSpec(ct, contracted=("l1",))
    with pytest.raises(ValueError):
        spec.lengths_at(0)


def test_spec_family_geometry():
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, contracted=("l1",), steps=3,
                            base={"br": 2})
    assert spec.lengths_at(2) == [spec.rate ** 2, 1, 2]
    assert spec.limit_lengths() == [0, 1, 2]
    limit, beta = spec.limit()
    assert limit.weight("x") == 1
    assert "l1" not in limit.edges()


def test_closedness_on_dumbbell():
    # contracting one loop: the limit vertex picks up weight 1 and the
    # pattern 2x keeps rank 1 there
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, contracted=("l1",),
                            pattern=(("x", 2),), steps=4)
    report = run_closedness_experiment(spec, d=2, r=1)
    assert report["pass"] and not report["vacuous"]
    assert [s["rank"] for s in report["steps"]] == [1, 1, 1, 1]
    assert report["limit"]["weights"] == {"x": 1, "y": 0}
    assert report["limit"]["rank"] == 1
    with pytest.raises(ValueError, match="degree"):
        run_closedness_experiment(spec, d=3, r=1)


def test_closedness_without_contraction():
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, pattern=(("x", 2),), steps=2)
    report = run_closedness_experiment(spec, d=2, r=1)
    assert report["pass"]
    assert report["limit"]["lengths"] == {"l1": 1, "l2": 1, "br": 1}


def test_closedness_vacuous_run():
    # a single chip has rank 0 along the family, so nothing is claimed
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, contracted=("l1",),
                            pattern=(("x", 1),), steps=2)
    report = run_closedness_experiment(spec, d=1, r=1)
    assert report["vacuous"] and report["pass"]


def test_usc_circle_to_weighted_point():
    ct = CombinatorialType([("a", 0), ("b", 0)],
                           [("e1", ("a", "b")), ("e2", ("a", "b"))])
    spec = DegenerationSpec(ct, contracted=("e1", "e2"), steps=3)
    report = run_usc_experiment(spec, d=2, r=1, rho=1, resolution=3)
    assert report["premise"] and report["pass"]
    assert all(s["bn_rank"] == 1 for s in report["steps"])
    assert report["limit"]["bn_rank"] == 1
    assert report["limit"]["weights"] == {"a": 1}


def test_usc_two_loops_to_genus_two_point():
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, contracted=("l1", "l2", "br"), steps=3)
    report = run_usc_experiment(spec, d=2, r=1, rho=0, resolution=2)
    assert report["pass"] and report["premise"]
    assert all(s["bn_rank"] == 0 for s in report["steps"])
    # the limit is a weight-2 point where 2v has rank 1: the rank jumps up
    assert report["limit"]["weights"] == {"x": 2}
    assert report["limit"]["bn_rank"] == 1


def test_thread_count_does_not_change_results(monkeypatch):
    ct = dumbbell_type()
    spec = DegenerationSpec(ct, contracted=("l1",), steps=2)
    base = run_usc_experiment(spec, d=2, r=1, rho=0, resolution=2)
    single = bn_rank(k4(), BNQuery(d=3, r=1, resolution=2))
    monkeypatch.setenv("TROPBN_THREADS", "3")
    assert run_usc_experiment(spec, d=2, r=1, rho=0, resolution=2) == base
    assert bn_rank(k4(), BNQuery(d=3, r=1, resolution=2)) == single
    monkeypatch.setenv("TROPBN_THREADS", "not-a-number")
    assert bn_rank(k4(), BNQuery(d=3, r=1, resolution=2)) == single
