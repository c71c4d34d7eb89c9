import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatfuzz.fuzzy import (
    MembershipGrades,
    TriangularMf,
    Universe,
    build_partition,
    classify_max,
    fuzzify,
    membership,
    universe_from_data,
)


def test_universe_from_data():
    assert universe_from_data([68, 84, 75]) == Universe(68, 84)
    assert universe_from_data([23.34, 25.70, 24.0]) == Universe(23.34, 25.70)
    with pytest.raises(ValueError):
        universe_from_data([5, 5])
    with pytest.raises(ValueError):
        universe_from_data([5])


@pytest.mark.parametrize(
    "bounds, low, mid, high",
    [
        ((68, 84), (68, 68, 76), (68, 76, 84), (76, 84, 84)),
        ((23, 26), (23, 23, 24.5), (23, 24.5, 26), (24.5, 26, 26)),
        ((0, 2), (0, 0, 1), (0, 1, 2), (1, 2, 2)),
    ],
)
def test_build_partition(bounds, low, mid, high):
    p = build_partition(Universe(*bounds))
    assert p.low == TriangularMf(*low)
    assert p.mid == TriangularMf(*mid)
    assert p.high == TriangularMf(*high)


def test_triangle_validation():
    with pytest.raises(ValueError):
        TriangularMf(3, 2, 4)
    with pytest.raises(ValueError):
        TriangularMf(1, 1, 1)


def test_membership_examples():
    assert membership(76, TriangularMf(68, 76, 84)) == 1.0
    assert membership(70, TriangularMf(68, 68, 76)) == 0.75
    assert membership(90, TriangularMf(68, 76, 84)) == 0.0
    assert membership(60, TriangularMf(68, 68, 76)) == 0.0
    assert membership(90, TriangularMf(76, 84, 84)) == 0.0


def test_membership_vectorised_matches_scalar():
    mf = TriangularMf(23, 24.5, 26)
    xs = np.linspace(22, 27, 101)
    assert np.array_equal(membership(xs, mf), [membership(float(x), mf) for x in xs])


def test_fuzzify_examples():
    rh = build_partition(Universe(68, 84))
    assert fuzzify(70, rh) == MembershipGrades(0.75, 0.25, 0.0)
    assert fuzzify(76, rh) == MembershipGrades(0.0, 1.0, 0.0)
    assert fuzzify(84, rh) == MembershipGrades(0.0, 0.0, 1.0)


def test_fuzzify_clamps():
    rh = build_partition(Universe(68, 84))
    assert fuzzify(50, rh) == fuzzify(68, rh)
    assert fuzzify(99, rh) == fuzzify(84, rh)


def test_classify_max():
    assert classify_max(MembershipGrades(0.75, 0.25, 0)) == "low"
    assert classify_max(MembershipGrades(0.5, 0.5, 0)) == "low"
    assert classify_max(MembershipGrades(0, 0.5, 0.5)) == "mid"
    assert classify_max(MembershipGrades(0, 0, 1)) == "high"
    with pytest.raises(ValueError):
        classify_max(MembershipGrades(0, 0, 0))


universes = st.tuples(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3)).map(lambda p: Universe(p[0], p[0] + p[1]))


@settings(max_examples=200, deadline=None)
@given(universes, st.floats(0, 1))
def test_partition_of_unity(u, frac):
    p = build_partition(u)
    g = fuzzify(u.lo + frac * (u.hi - u.lo), p)
    assert sum(g.as_tuple()) == pytest.approx(1.0, abs=1e-12)
    assert all(0 <= v <= 1 for v in g.as_tuple())


@settings(max_examples=100, deadline=None)
@given(universes)
def test_shoulders(u):
    p = build_partition(u)
    assert fuzzify(u.lo, p).low == 1.0
    assert fuzzify(u.hi, p).high == 1.0


@settings(max_examples=100, deadline=None)
@given(st.floats(-100, 100), st.floats(0.1, 50), st.floats(0, 50), st.floats(0, 1))
def test_rising_edge_linear(a, rise, fall, frac):
    mf = TriangularMf(a, a + rise, a + rise + fall)
    x = a + frac * rise
    assert membership(x, mf) == pytest.approx((x - a) / rise, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.one_of(st.just(0.0), st.floats(1e-6, 1)), min_size=3, max_size=3).filter(lambda g: max(g) > 0),
    st.floats(1e-3, 1e3),
)
def test_classify_scale_invariant(g, k):
    assert classify_max(MembershipGrades(*g)) == classify_max(MembershipGrades(*(k * v for v in g)))
