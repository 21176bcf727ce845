from fractions import Fraction

import pytest
from hypothesis import given

import brute
from tourfvs.core import random_tournament, random_weights, transitive_tournament
from tourfvs.detect import random_family_free
from tourfvs.lp import (
    CoverModel,
    ModelError,
    build_fvs_model,
    check_certificate,
    is_basic,
    max_fractional_packing_lp,
    separate,
    simplex_solve,
    solve_fvs_lp,
    support_of,
)

F = Fraction


def assert_sound(sol, w, n):
    assert check_certificate(sol, w) == []
    assert is_basic(sol, n)
    for kind, idx in sol.basis:
        if kind == "slack":
            assert sol.primal[idx] == 0
        else:
            assert sol.row_activity(idx) == sol.rows[idx][1]


class TestSimplex:
    def test_single_row(self):
        sol = simplex_solve(CoverModel(3, (((0, 1, 2), F(1)),), (F(1),) * 3))
        assert sol.value == 1
        assert sorted(sol.primal) == [0, 0, 1]
        assert_sound(sol, (F(1),) * 3, 3)

    def test_no_rows(self):
        sol = simplex_solve(CoverModel(4, (), (F(2),) * 4))
        assert sol.value == 0 and sol.primal == (0,) * 4

    def test_cheapest_cover(self, three_cycle):
        w = (F(1), F(2), F(3))
        sol = simplex_solve(build_fvs_model(three_cycle, w))
        assert sol.value == 1 and sol.primal == (1, 0, 0)

    def test_rational_weights(self):
        w = (F(1, 3), F(5, 2), F(7, 4))
        sol = simplex_solve(CoverModel(3, (((0, 1), F(1)), ((1, 2), F(2))), w))
        assert sol.value == F(1, 3) + 2 * F(7, 4)
        assert_sound(sol, w, 3)

    def test_fractional_optimum(self):
        # odd cycle of pairs: x = 1/2 everywhere
        rows = tuple((((i, (i + 1) % 5)), F(1)) for i in range(5))
        sol = simplex_solve(CoverModel(5, rows, (F(1),) * 5))
        assert sol.value == F(5, 2)
        assert_sound(sol, (F(1),) * 5, 5)

    @pytest.mark.parametrize("rows,objective", [
        ((((), F(1)),), (F(1),)),
        ((((0, 3), F(1)),), (F(1),) * 3),
        ((((0, 0), F(1)),), (F(1),) * 3),
        ((((0,), F(0)),), (F(1),)),
        ((), (F(-1),)),
    ])
    def test_model_errors(self, rows, objective):
        with pytest.raises(ModelError):
            CoverModel(len(objective), rows, objective)


class TestModel:
    def test_transitive_is_empty(self):
        assert build_fvs_model(transitive_tournament(6)).rows == ()

    def test_three_cycle(self, three_cycle):
        assert build_fvs_model(three_cycle).rows == (((0, 1, 2), F(1)),)

    def test_paley7(self, paley7):
        rows = build_fvs_model(paley7, with_t7=True).rows
        assert [rhs for _, rhs in rows] == [F(1)] * 14 + [F(3)]
        assert rows[-1][0] == tuple(range(7))
        assert len(build_fvs_model(paley7, with_t7=False).rows) == 14


class TestSeparation:
    def test_three_cycle(self, three_cycle):
        assert separate(three_cycle, [F(1, 3)] * 3) is None
        assert separate(three_cycle, [F(0)] * 3) == ((0, 1, 2), F(1))

    def test_paley7_needs_t7_row(self, paley7):
        x = [F(2, 5)] * 7
        assert 3 * F(2, 5) >= 1 and 7 * F(2, 5) == F(14, 5)
        assert separate(paley7, x) == (tuple(range(7)), F(3))
        assert separate(paley7, x, with_t7=False) is None

    def test_triangles_before_t7(self, paley7):
        got = separate(paley7, [F(0)] * 7)
        assert got[1] == 1 and len(got[0]) == 3

    def test_length_mismatch(self, three_cycle):
        with pytest.raises(ValueError):
            separate(three_cycle, [F(0)])


class TestSolve:
    def test_transitive(self):
        assert solve_fvs_lp(transitive_tournament(5)).value == 0

    def test_three_cycle(self, three_cycle):
        assert solve_fvs_lp(three_cycle).value == 1

    def test_paley7(self, paley7):
        full = solve_fvs_lp(paley7, with_t7=True)
        assert full.value == 3
        assert all(3 * F(3, 7) >= 1 for _ in range(14))  # x = 3/7 is feasible
        # triangle-only: x = 1/3 and y = 1/6 on all 14 triangles certify 7/3
        assert solve_fvs_lp(paley7, with_t7=False).value == F(7, 3)
        assert_sound(full, (F(1),) * 7, 7)

    @pytest.mark.parametrize("seed", range(8))
    def test_lazy_equals_full(self, seed):
        n = 7 + seed % 4
        t, w = random_tournament(n, seed), random_weights(n, seed)
        lazy, full = solve_fvs_lp(t, w), solve_fvs_lp(t, w, lazy=False)
        assert lazy.value == full.value
        assert_sound(lazy, w, n)
        assert_sound(full, w, n)

    @given(brute.weighted_tournaments(max_n=8))
    def test_against_linprog(self, tw):
        t, w = tw
        for with_t7 in (False, True):
            sol = solve_fvs_lp(t, w, with_t7=with_t7)
            model = build_fvs_model(t, w, with_t7)
            assert abs(float(sol.value) - brute.linprog_value(t.n, model.rows, w)) < 1e-7
            assert_sound(sol, w, t.n)

    @given(brute.weighted_tournaments(max_n=8))
    def test_sandwich(self, tw):
        t, w = tw
        opt = brute.min_fvs(t, w)[0]
        tri = solve_fvs_lp(t, w, with_t7=False).value
        full = solve_fvs_lp(t, w).value
        assert tri <= full <= opt <= 3 * tri

    def test_weighted_paley7_certificate(self, paley7):
        w = [F(k + 1, 2) for k in range(7)]
        sol = solve_fvs_lp(paley7, w)
        assert_sound(sol, w, 7)


class TestIntegrality:
    @pytest.mark.parametrize("seed", range(12))
    def test_t5_free_basic_optimum_is_integral(self, seed):
        n = 5 + seed % 6
        t = random_family_free(n, seed, family=5)
        w = random_weights(n, seed)
        sol = max_fractional_packing_lp(t, w)
        assert all(x in (0, 1) for x in sol.primal)
        assert sol.value == brute.min_fvs(t, w)[0]


def test_support_of():
    assert support_of([F(0), F(1, 2), F(0), F(3)]) == (1, 3)
