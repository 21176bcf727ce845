import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

import brute
from tourfvs.core import (
    Tournament,
    induced,
    paley_tournament,
    random_tournament,
    relabel,
    transitive_tournament,
)
from tourfvs.detect import (
    LayerSequence,
    all_triangles,
    canonical_form,
    count_triangles,
    enumerate_family,
    family_members,
    find_t5_subtournament,
    find_t7_subtournament,
    find_transitive_subtournament,
    find_triangle,
    has_transitive_subtournament,
    in_t5,
    in_t7,
    is_t5_free,
    is_t7_free,
    is_transitive,
    layer_sequence,
    random_family_free,
    tournament_code,
    tournament_from_code,
    two_in_dominates,
)


def with_sink(t: Tournament) -> Tournament:
    n = t.n
    return Tournament([m | (1 << n) for m in t.out_masks] + [0])


class TestTransitivity:
    def test_examples(self, three_cycle, paley7):
        assert not is_transitive(three_cycle)
        assert is_transitive(transitive_tournament(5))
        assert not is_transitive(paley7)

    @given(brute.tournaments(max_n=8))
    def test_matches_topological_sort(self, t):
        assert is_transitive(t) == brute.acyclic(t, range(t.n))


class TestTriangles:
    def test_examples(self, three_cycle):
        assert find_triangle(transitive_tournament(6)) is None
        assert find_triangle(three_cycle) == (0, 1, 2)
        assert all_triangles(transitive_tournament(4)) == []
        assert all_triangles(three_cycle) == [(0, 1, 2)]

    def test_paley7(self, paley7):
        scan = brute.triangles(paley7)
        assert len(scan) == 14
        assert count_triangles(paley7) == 14
        assert find_triangle(paley7) == min(scan)

    @given(brute.tournaments(max_n=8))
    def test_all_triangles_lexicographic(self, t):
        assert all_triangles(t) == brute.triangles(t)
        assert count_triangles(t) == len(brute.triangles(t))

    @pytest.mark.parametrize("seed", range(10))
    def test_five_vertex_count(self, seed):
        t = random_tournament(5, seed)
        transitive_triples = sum(
            1 for q in itertools.combinations(range(5), 3) if brute.acyclic(t, q))
        assert count_triangles(t) == comb(5, 3) - transitive_triples

    def test_restricted_search(self, paley7):
        assert find_triangle(paley7, within=[0, 1, 2]) is None
        tri = find_triangle(paley7, within=[3, 4, 5, 6])
        assert tri is not None and set(tri) <= {3, 4, 5, 6}


class TestTransitiveSubtournaments:
    def test_small_k_always_present(self, paley7, three_cycle):
        for t in (paley7, three_cycle, Tournament([])):
            for k in (0, 1, 2):
                if k <= t.n:
                    assert has_transitive_subtournament(t, k)

    def test_examples(self, three_cycle, paley7):
        assert not has_transitive_subtournament(three_cycle, 3)
        assert not has_transitive_subtournament(paley7, 5)
        assert not has_transitive_subtournament(paley7, 4)
        assert brute.max_transitive(paley7) == 3

    @given(brute.tournaments(max_n=7), st.integers(0, 7))
    def test_witness(self, t, k):
        found = find_transitive_subtournament(t, k)
        assert (found is not None) == (brute.max_transitive(t) >= k)
        if found is not None:
            assert len(found) == k and brute.acyclic(t, found)


class TestFamilies:
    def test_transitive_not_in_t5(self):
        assert not in_t5(transitive_tournament(5))

    def test_paley7_in_t7(self, paley7):
        assert in_t7(paley7)
        assert find_t7_subtournament(paley7) == tuple(range(7))

    def test_paley7_minus_vertex_plus_sink(self, paley7):
        # the six remaining vertices have no transitive 4-subset, so a sink
        # lifts the largest transitive subset only to 4 and the result stays in T7
        sub, _ = induced(paley7, range(6))
        t = with_sink(sub)
        assert brute.max_transitive(t) == 4
        assert in_t7(t) is True

    def test_order7_with_transitive_five_not_in_t7(self, three_cycle):
        t = Tournament.from_arcs(7, [(u, v) for u in range(7) for v in range(u + 1, 7)
                                     if (u, v) not in {(0, 2)}] + [(2, 0)])
        assert brute.max_transitive(t) >= 5
        assert not in_t7(t)

    def test_wrong_order_rejected(self, paley7):
        with pytest.raises(ValueError):
            in_t5(paley7)
        with pytest.raises(ValueError):
            in_t7(paley_tournament(3))

    def test_small_tournaments_have_no_members(self):
        assert find_t7_subtournament(random_tournament(6, 2)) is None
        assert find_t5_subtournament(random_tournament(4, 2)) is None
        assert find_t7_subtournament(transitive_tournament(10)) is None

    @given(brute.tournaments(max_n=7))
    def test_free_matches_brute_force(self, t):
        assert is_t5_free(t) == (not brute.has_family_member(t, 5, 4))
        assert is_t7_free(t) == (not brute.has_family_member(t, 7, 5))

    @given(brute.tournaments(min_n=5, max_n=7))
    def test_witness_is_member(self, t):
        w = find_t5_subtournament(t)
        if w is not None:
            assert len(w) == 5
            assert not any(brute.acyclic(t, q) for q in itertools.combinations(w, 4))

    def test_exhaustive_membership_on_five(self):
        # every labelled tournament on 5 vertices
        for code in range(1 << 10):
            t = tournament_from_code(5, code)
            assert in_t5(t) == (brute.max_transitive(t) < 4)


class TestTwoInDomination:
    def test_empty_target(self, paley7):
        assert two_in_dominates(paley7, [0], []) == ()

    def test_single_dominator(self, paley7):
        beating = [v for v in range(7) if paley7.arc(v, 0)]
        assert two_in_dominates(paley7, [0], beating) == (0,)

    def test_overlap_rejected(self, paley7):
        with pytest.raises(ValueError):
            two_in_dominates(paley7, [0, 1], [1, 2])

    @given(brute.tournaments(min_n=1, max_n=8), st.data())
    def test_matches_brute_force(self, t, data):
        vs = list(range(t.n))
        z = data.draw(st.sets(st.sampled_from(vs), min_size=0, max_size=t.n))
        s = [v for v in vs if v not in z and data.draw(st.booleans())]
        got = two_in_dominates(t, z, s)

        def covers(zp):
            return all(any(t.arc(v, q) for q in zp) for v in s)

        options = [c for k in (0, 1, 2) for c in itertools.combinations(sorted(z), k) if covers(c)]
        if not options:
            assert got is None
        else:
            assert got is not None and covers(got) and set(got) <= z


class TestLayers:
    def test_three_cycle(self, three_cycle):
        seq = layer_sequence(three_cycle, 0)
        assert seq.layers == ((0,), (2,), (1,))
        assert seq.unreachable == ()
        assert seq.layer(2) == (2,)

    def test_transitive(self):
        seq = layer_sequence(transitive_tournament(3), 0)
        assert seq.layers == ((0,),) and seq.unreachable == (1, 2)

    def test_paley7(self, paley7):
        seq = layer_sequence(paley7, 0)
        into_zero = sorted(u for u in range(1, 7) if ((0 - u) % 7) in (1, 2, 4))
        assert into_zero == [3, 5, 6]
        assert seq.layers == ((0,), (3, 5, 6), (1, 2, 4))

    @given(brute.tournaments(min_n=1, max_n=8), st.data())
    def test_layers_are_reverse_distances(self, t, data):
        z = data.draw(st.integers(0, t.n - 1))
        seq = layer_sequence(t, z)
        dist = {z: 0}
        frontier = [z]
        while frontier:
            nxt = []
            for u in frontier:
                for v in range(t.n):
                    if v not in dist and t.arc(v, u):
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for i, layer in enumerate(seq.layers):
            assert all(dist[v] == i for v in layer)
        assert set(seq.unreachable) == set(range(t.n)) - set(dist)
        assert isinstance(seq, LayerSequence)


class TestCanonical:
    def test_three_cycle_relabelings(self, three_cycle):
        codes = {canonical_form(relabel(three_cycle, p)) for p in itertools.permutations(range(3))}
        assert len(codes) == 1

    def test_cycle_vs_transitive(self, three_cycle):
        assert canonical_form(three_cycle) != canonical_form(transitive_tournament(3))

    def test_paley7_relabelings(self, paley7):
        a = relabel(paley7, [3, 1, 4, 0, 6, 5, 2])
        b = relabel(paley7, [6, 2, 0, 5, 1, 3, 4])
        assert canonical_form(a) == canonical_form(b) == canonical_form(paley7)

    def test_code_round_trip(self, paley7):
        assert tournament_from_code(7, tournament_code(paley7)) == paley7
        assert canonical_form(paley7).tournament().n == 7

    @given(brute.tournaments(max_n=6), st.randoms())
    def test_invariant_under_relabeling(self, t, rnd):
        perm = list(range(t.n))
        rnd.shuffle(perm)
        assert canonical_form(relabel(t, perm)) == canonical_form(t)

    def test_canonical_is_minimal_code(self):
        t = random_tournament(5, 11)
        codes = [tournament_code(relabel(t, p)) for p in itertools.permutations(range(5))]
        assert canonical_form(t).code == min(codes)

    def test_class_counts_on_five(self):
        # 12 isomorphism classes of 5-vertex tournaments
        forms = {canonical_form(tournament_from_code(5, c)) for c in range(1 << 10)}
        assert len(forms) == 12


class TestEnumeration:
    def test_counts(self):
        assert enumerate_family(5, 4) == 3
        assert enumerate_family(6, 4) == 1

    def test_members_are_free_and_distinct(self):
        reps = family_members(5, 4)
        assert len({canonical_form(t) for t in reps}) == 3
        for t in reps:
            assert brute.max_transitive(t) == 3

    def test_st6_is_paley7_minus_vertex(self, paley7):
        (st6,) = family_members(6, 4)
        sub, _ = induced(paley7, range(6))
        assert canonical_form(st6) == canonical_form(sub)

    def test_all_classes(self):
        # forbidding a transitive subset larger than the order keeps every tournament
        assert [enumerate_family(k, k + 1) for k in range(1, 8)] == [1, 1, 2, 4, 12, 56, 456]

    def test_order_cap(self):
        with pytest.raises(ValueError):
            enumerate_family(8, 5)


class TestFamilyFreeGenerator:
    @pytest.mark.parametrize("family,n", [(5, 8), (5, 11), (7, 9)])
    def test_output_is_free(self, family, n):
        for seed in range(3):
            t = random_family_free(n, seed, family)
            assert t.n == n
            free = is_t5_free(t) if family == 5 else is_t7_free(t)
            assert free

    def test_deterministic(self):
        assert random_family_free(9, 4, 5) == random_family_free(9, 4, 5)
