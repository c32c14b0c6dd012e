"""Order comparisons, the lattice lower bound, and the half operator."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mec
from conftest import (
    H_WORKED_GLB,
    WORKED_GLB,
    WORKED_P,
    WORKED_Q,
    random_masses,
)


@st.composite
def mass_vectors(draw, max_n: int = 8) -> list[float]:
    n = draw(st.integers(1, max_n))
    weights = draw(
        st.lists(st.floats(1e-3, 1.0, allow_nan=False), min_size=n, max_size=n)
    )
    total = sum(weights)
    return [w / total for w in weights]


def prefix_sums(masses) -> list[float]:
    out, acc = [], 0.0
    for x in masses:
        acc += x
        out.append(acc)
    return out


class TestMajorizes:
    def test_reflexive(self):
        d = mec.make_distribution(WORKED_P)
        assert mec.majorizes(d, d)

    def test_uniform_below_point_mass(self):
        assert mec.majorizes([0.5, 0.5], [1.0])
        assert not mec.majorizes([1.0], [0.5, 0.5])

    def test_pads_shorter_input(self):
        assert mec.majorizes([0.6, 0.4], [0.6, 0.4, 0.0])
        assert mec.majorizes([0.6, 0.4, 0.0], [0.6, 0.4])

    def test_incomparable_pair(self):
        assert not mec.majorizes(WORKED_P, WORKED_Q)
        assert not mec.majorizes(WORKED_Q, WORKED_P)

    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=100, deadline=None)
    def test_agrees_with_plain_prefix_comparison(self, a, b):
        da = mec.make_distribution(a, renormalize=True)
        db = mec.make_distribution(b, renormalize=True)
        n = max(da.n, db.n)
        pa = prefix_sums(da.padded(n).masses)
        pb = prefix_sums(db.padded(n).masses)
        expected = all(x <= y + 1e-12 for x, y in zip(pa, pb))
        assert mec.majorizes(da, db) == expected


class TestGlb:
    def test_worked_pair_golden(self):
        z = mec.glb(WORKED_P, WORKED_Q)
        assert z.n == 6
        for got, want in zip(z.masses, WORKED_GLB):
            assert got == pytest.approx(want, abs=1e-12)

    def test_idempotent(self):
        z = mec.glb(WORKED_P, WORKED_P)
        for got, want in zip(z.masses, WORKED_P):
            assert got == pytest.approx(want, abs=1e-12)

    def test_returns_lower_input_when_comparable(self):
        low = [0.4, 0.3, 0.3]
        high = [0.8, 0.1, 0.1]
        assert mec.majorizes(low, high)
        z = mec.glb(low, high)
        for got, want in zip(z.masses, low):
            assert got == pytest.approx(want, abs=1e-12)

    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=100, deadline=None)
    def test_is_a_lower_bound_with_min_prefix_sums(self, a, b):
        da = mec.make_distribution(a, renormalize=True)
        db = mec.make_distribution(b, renormalize=True)
        z = mec.glb(da, db)
        assert mec.majorizes(z, da)
        assert mec.majorizes(z, db)
        n = max(da.n, db.n)
        assert z.n == n
        got = prefix_sums(z.masses)
        want = [
            min(x, y)
            for x, y in zip(
                prefix_sums(da.padded(n).masses), prefix_sums(db.padded(n).masses)
            )
        ]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, abs=1e-9)
        assert math.fsum(z.masses) == pytest.approx(1.0, abs=1e-9)
        assert all(z.masses[k] >= z.masses[k + 1] for k in range(n - 1))

    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=100, deadline=None)
    def test_suffix_sums_are_maxima(self, a, b):
        da = mec.make_distribution(a, renormalize=True)
        db = mec.make_distribution(b, renormalize=True)
        z = mec.glb(da, db)
        n = z.n
        pm = da.padded(n).masses
        qm = db.padded(n).masses
        for i in range(n):
            want = max(math.fsum(pm[i:]), math.fsum(qm[i:]))
            assert math.fsum(z.masses[i:]) == pytest.approx(want, abs=1e-9)

    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=60, deadline=None)
    def test_commutative(self, a, b):
        za = mec.glb(a, b)
        zb = mec.glb(b, a)
        for x, y in zip(za.masses, zb.masses):
            assert x == pytest.approx(y, abs=1e-12)

    @given(mass_vectors(), mass_vectors(), mass_vectors())
    @settings(max_examples=60, deadline=None)
    def test_associative_within_tolerance(self, a, b, c):
        left = mec.glb(mec.glb(a, b), c)
        right = mec.glb(a, mec.glb(b, c))
        assert left.n == right.n
        for x, y in zip(left.masses, right.masses):
            assert x == pytest.approx(y, abs=1e-12)

    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=100, deadline=None)
    def test_entropy_at_least_both_marginals(self, a, b):
        z = mec.glb(a, b)
        h = mec.shannon_entropy(z.masses)
        assert h >= mec.shannon_entropy(a) - 1e-9
        assert h >= mec.shannon_entropy(b) - 1e-9


class TestGlbMany:
    def test_single_input_returned(self):
        d = mec.make_distribution(WORKED_P)
        assert mec.glb_many([d]).masses == d.masses

    def test_two_inputs_reduce_to_glb(self):
        assert mec.glb_many([WORKED_P, WORKED_Q]).masses == mec.glb(
            WORKED_P, WORKED_Q
        ).masses

    def test_copies_are_idempotent(self):
        z = mec.glb_many([WORKED_P, WORKED_P, WORKED_P])
        for got, want in zip(z.masses, WORKED_P):
            assert got == pytest.approx(want, abs=1e-12)

    def test_rejects_empty_list(self):
        with pytest.raises(mec.EmptyError):
            mec.glb_many([])

    def test_fold_order_does_not_matter(self):
        rng = random.Random(5)
        for _ in range(20):
            ds = [random_masses(rng, rng.randint(1, 5)) for _ in range(4)]
            base = mec.glb_many(ds)
            shuffled = list(ds)
            rng.shuffle(shuffled)
            other = mec.glb_many(shuffled)
            for x, y in zip(base.masses, other.masses):
                assert x == pytest.approx(y, abs=1e-12)


class TestHalf:
    def test_point_mass(self):
        assert mec.half([1.0]).masses == (0.5, 0.5)

    def test_two_components(self):
        assert mec.half([0.6, 0.4]).masses == (0.3, 0.3, 0.2, 0.2)

    def test_duplicates_trailing_zeros(self):
        assert mec.half([1.0, 0.0]).masses == (0.5, 0.5, 0.0, 0.0)

    def test_adds_exactly_one_bit(self):
        assert mec.shannon_entropy(mec.half(WORKED_GLB).masses) == pytest.approx(
            H_WORKED_GLB + 1.0, abs=1e-12
        )

    def test_iterate_zero_is_identity(self):
        d = mec.make_distribution(WORKED_P)
        assert mec.half_iter(d, 0) is d

    def test_iterate_twice_on_point_mass(self):
        assert mec.half_iter([1.0], 2).masses == (0.25,) * 4

    def test_iterate_matches_composition(self):
        d = mec.make_distribution(WORKED_P)
        assert mec.half_iter(d, 2).masses == mec.half(mec.half(d)).masses

    def test_size_cap(self):
        with pytest.raises(mec.SizeCapError):
            mec.half_iter([0.5, 0.5], 3, cap=8)
        assert mec.half_iter([0.5, 0.5], 2, cap=8).n == 8

    def test_rejects_negative_iterations(self):
        with pytest.raises(ValueError):
            mec.half_iter([1.0], -1)


class TestHalfOrderInteraction:
    @given(mass_vectors(), mass_vectors())
    @settings(max_examples=100, deadline=None)
    def test_half_preserves_the_order(self, a, b):
        da = mec.make_distribution(a, renormalize=True)
        db = mec.make_distribution(b, renormalize=True)
        low, high = (da, db) if mec.majorizes(da, db) else (db, da)
        if not mec.majorizes(low, high):
            return  # incomparable pair; nothing to check
        assert mec.majorizes(mec.half(low), mec.half(high))

    @given(mass_vectors(), mass_vectors(), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_doubling_the_glb_stays_below_glb_of_doublings(self, a, b, i):
        da = mec.make_distribution(a, renormalize=True)
        db = mec.make_distribution(b, renormalize=True)
        lhs = mec.half_iter(mec.glb(da, db), i)
        rhs = mec.glb(mec.half_iter(da, i), mec.half_iter(db, i))
        assert mec.majorizes(lhs, rhs)

    @given(mass_vectors(), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_each_doubling_adds_one_bit(self, a, i):
        d = mec.make_distribution(a, renormalize=True)
        assert mec.shannon_entropy(mec.half_iter(d, i).masses) == pytest.approx(
            mec.shannon_entropy(d.masses) + i, abs=1e-9
        )
