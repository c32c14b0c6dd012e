"""Exhaustive vertex enumeration and the exact small-instance optimum."""

from __future__ import annotations

import math
import random

import pytest

import mec
from conftest import grid64_masses, random_masses


class TestEnumerateVertices:
    def test_single_cell(self):
        vertices = mec.enumerate_vertices([1.0], [1.0])
        assert len(vertices) == 1
        assert vertices[0].grid == ((1.0,),)
        assert vertices[0].support == ((0, 0),)

    def test_point_mass_column_forces_the_coupling(self):
        vertices = mec.enumerate_vertices([0.5, 0.5], [1.0])
        assert len(vertices) == 1
        assert vertices[0].grid == ((0.5,), (0.5,))

    def test_uniform_two_by_two_has_the_two_permutation_vertices(self):
        vertices = mec.enumerate_vertices([0.5, 0.5], [0.5, 0.5])
        grids = {v.grid for v in vertices}
        assert grids == {
            ((0.5, 0.0), (0.0, 0.5)),
            ((0.0, 0.5), (0.5, 0.0)),
        }

    def test_vertices_are_valid_couplings_with_tree_sized_support(self):
        rng = random.Random(163)
        for _ in range(20):
            n = rng.randint(1, 4)
            m = rng.randint(1, 4)
            p = random_masses(rng, n)
            q = random_masses(rng, m)
            vertices = mec.enumerate_vertices(p, q)
            assert vertices
            for v in vertices:
                ok, why = mec.is_valid_coupling(v.as_coupling(), p, q)
                assert ok, why
                assert len(v.support) <= n + m - 1

    def test_caller_order_is_respected_for_unsorted_marginals(self):
        p = [0.1, 0.6, 0.3]
        q = [0.2, 0.8]
        for v in mec.enumerate_vertices(p, q):
            for r in range(3):
                assert math.fsum(v.grid[r]) == pytest.approx(p[r], abs=1e-9)
            for c in range(2):
                col = math.fsum(v.grid[r][c] for r in range(3))
                assert col == pytest.approx(q[c], abs=1e-9)

    def test_enumeration_is_deterministic(self):
        p = [0.4, 0.35, 0.25]
        q = [0.5, 0.3, 0.2]
        assert mec.enumerate_vertices(p, q) == mec.enumerate_vertices(p, q)

    def test_cell_cap(self):
        p = random_masses(random.Random(1), 5)
        q = random_masses(random.Random(2), 5)
        with pytest.raises(mec.TooLargeError):
            mec.enumerate_vertices(p, q)

    def test_values_lists_support_cells(self):
        (v,) = mec.enumerate_vertices([0.5, 0.5], [1.0])
        assert v.values() == (0.5, 0.5)


class TestBruteForceMinEntropy:
    def test_identical_marginals_reach_their_own_entropy(self):
        res = mec.brute_force_min_entropy([0.5, 0.25, 0.25], [0.5, 0.25, 0.25])
        assert res.opt_value == pytest.approx(1.5, abs=1e-12)
        assert res.argmin.grid == (
            (0.5, 0.0, 0.0),
            (0.0, 0.25, 0.0),
            (0.0, 0.0, 0.25),
        )

    def test_forced_coupling_has_forced_entropy(self):
        res = mec.brute_force_min_entropy([0.5, 0.5], [1.0])
        assert res.opt_value == pytest.approx(1.0, abs=1e-12)

    def test_argmin_entropy_equals_the_reported_optimum(self):
        rng = random.Random(167)
        for _ in range(10):
            p = random_masses(rng, rng.randint(2, 4))
            q = random_masses(rng, rng.randint(2, 4))
            res = mec.brute_force_min_entropy(p, q)
            assert mec.shannon_entropy(res.argmin.values()) == pytest.approx(
                res.opt_value, abs=1e-12
            )

    def test_optimum_is_sandwiched_by_floor_and_greedy(self):
        rng = random.Random(173)
        for _ in range(40):
            n = rng.randint(1, 4)
            m = rng.randint(1, 4)
            p = grid64_masses(rng, n)
            q = grid64_masses(rng, m)
            opt = mec.brute_force_min_entropy(p, q).opt_value
            floor = mec.shannon_entropy(mec.glb(p, q).masses)
            assert opt >= floor - 1e-9
            for engine in (
                mec.min_entropy_coupling_dense,
                mec.min_entropy_coupling_sparse,
            ):
                h = mec.shannon_entropy(engine(p, q).values())
                assert opt <= h + 1e-9
                assert h <= opt + 1.0 + 1e-9

    def test_cell_cap_propagates(self):
        with pytest.raises(mec.TooLargeError):
            mec.brute_force_min_entropy([0.2] * 5, [0.2] * 5)
