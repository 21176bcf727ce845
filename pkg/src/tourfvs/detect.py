"""Forbidden-subtournament detection, distance layers and small-order enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Optional

import numpy as np

from .core import (
    SplitMix64,
    Tournament,
    VertexSet,
    in_neighbours_mask,
    mask_of,
    members,
)

MAX_CANONICAL_ORDER = 8
MAX_ENUMERATION_ORDER = 7


def _transitive_mask(t: Tournament, mask: int) -> bool:
    # transitive iff the out-degrees inside the subset are pairwise distinct
    seen = 0
    outs = t.out_masks
    m = mask
    while m:
        low = m & -m
        d = (outs[low.bit_length() - 1] & mask).bit_count()
        if (seen >> d) & 1:
            return False
        seen |= 1 << d
        m ^= low
    return True


def is_transitive(t: Tournament) -> bool:
    """True iff ``t`` has no directed cycle (out-degrees pairwise distinct)."""
    return _transitive_mask(t, (1 << t.n) - 1)


def is_transitive_subset(t: Tournament, s: Iterable[int]) -> bool:
    return _transitive_mask(t, mask_of(s))


def _triangles(t: Tournament, first_only: bool, within: int = -1):
    outs, ins = t.out_masks, t.in_masks
    found = []
    for a in members(within & ((1 << t.n) - 1)):
        for b in members(within & ~((1 << (a + 1)) - 1) & ((1 << t.n) - 1)):
            above = within & ~((1 << (b + 1)) - 1)
            if (outs[a] >> b) & 1:
                cand = outs[b] & ins[a] & above
            else:
                cand = outs[a] & ins[b] & above
            for c in members(cand):
                found.append((a, b, c))
                if first_only:
                    return found
    return found


def find_triangle(t: Tournament, within: Optional[Iterable[int]] = None) -> Optional[VertexSet]:
    """Lexicographically first directed triangle, or None if ``t`` is transitive.

    ``within`` restricts the search to a vertex subset.
    """
    tri = _triangles(t, True, -1 if within is None else mask_of(within))
    return tri[0] if tri else None


def find_triangle_mask(t: Tournament, within: int) -> Optional[VertexSet]:
    tri = _triangles(t, True, within)
    return tri[0] if tri else None


def all_triangles(t: Tournament) -> list[VertexSet]:
    """Vertex sets of all directed triangles, in lexicographic order."""
    return _triangles(t, first_only=False)


def count_triangles(t: Tournament) -> int:
    """Triangle count from the score sequence: C(n,3) - sum C(d_out, 2)."""
    return comb(t.n, 3) - sum(comb(t.out_degree(u), 2) for u in range(t.n))


def find_transitive_subtournament(t: Tournament, k: int) -> Optional[VertexSet]:
    """Lexicographically first k-subset inducing a transitive subtournament."""
    if k < 0:
        raise ValueError(f"k={k} is negative")
    for combo in itertools.combinations(range(t.n), k):
        if _transitive_mask(t, mask_of(combo)):
            return combo
    return None


def has_transitive_subtournament(t: Tournament, k: int) -> bool:
    return find_transitive_subtournament(t, k) is not None


def _free_of_transitive(t: Tournament, mask: int, k: int) -> bool:
    vs = members(mask)
    for combo in itertools.combinations(vs, k):
        if _transitive_mask(t, mask_of(combo)):
            return False
    return True


def in_t5(t: Tournament) -> bool:
    """Membership in the 5-vertex family: no transitive subtournament on 4 vertices."""
    if t.n != 5:
        raise ValueError(f"in_t5 needs a 5-vertex tournament, got n={t.n}")
    return _free_of_transitive(t, (1 << 5) - 1, 4)


def in_t7(t: Tournament) -> bool:
    """Membership in the 7-vertex family: no transitive subtournament on 5 vertices."""
    if t.n != 7:
        raise ValueError(f"in_t7 needs a 7-vertex tournament, got n={t.n}")
    return _free_of_transitive(t, (1 << 7) - 1, 5)


def _find_family_subset(t: Tournament, order: int, forbidden: int) -> Optional[VertexSet]:
    if t.n < order:
        return None
    # Cache which forbidden-size subsets are transitive; each is shared by
    # many candidate supersets.
    transitive = {}

    def trans(m):
        r = transitive.get(m)
        if r is None:
            r = transitive[m] = _transitive_mask(t, m)
        return r

    for combo in itertools.combinations(range(t.n), order):
        ok = True
        for sub in itertools.combinations(combo, forbidden):
            if trans(mask_of(sub)):
                ok = False
                break
        if ok:
            return combo
    return None


def find_t5_subtournament(t: Tournament) -> Optional[VertexSet]:
    """Lexicographically first 5-subset inducing a member of the 5-vertex family."""
    return _find_family_subset(t, 5, 4)


def find_t7_subtournament(t: Tournament) -> Optional[VertexSet]:
    """Lexicographically first 7-subset inducing a member of the 7-vertex family."""
    return _find_family_subset(t, 7, 5)


def is_t5_free(t: Tournament) -> bool:
    return find_t5_subtournament(t) is None


def is_t7_free(t: Tournament) -> bool:
    return find_t7_subtournament(t) is None


def two_in_dominates(t: Tournament, z_set: Iterable[int], s: Iterable[int]) -> Optional[VertexSet]:
    """Find Z' within ``z_set``, |Z'| <= 2, such that every vertex of ``s`` has an arc into Z'.

    Returns the smallest such set, lexicographically first among equal sizes,
    or None.  ``z_set`` and ``s`` must be disjoint.
    """
    zs = members(mask_of(z_set))
    smask = mask_of(s)
    if mask_of(zs) & smask:
        raise ValueError("z_set and s must be disjoint")
    if not smask:
        return ()
    ins = t.in_masks
    for z in zs:
        if smask & ~ins[z] == 0:
            return (z,)
    for a, b in itertools.combinations(zs, 2):
        if smask & ~(ins[a] | ins[b]) == 0:
            return (a, b)
    return None


@dataclass(frozen=True)
class LayerSequence:
    """Distance layers towards a root: ``layers[l]`` holds vertices whose
    shortest path to ``z`` has length l."""

    z: int
    layers: tuple[VertexSet, ...]
    unreachable: VertexSet

    def layer(self, index: int) -> VertexSet:
        """1-based access, V_index(z); empty beyond the last layer."""
        if index < 1:
            raise ValueError("layers are 1-based")
        return self.layers[index - 1] if index <= len(self.layers) else ()


def layer_sequence(t: Tournament, z: int) -> LayerSequence:
    if not 0 <= z < t.n:
        raise ValueError(f"vertex {z} out of range")
    seen = 1 << z
    current = 1 << z
    layers = [(z,)]
    while True:
        nxt = in_neighbours_mask(t, current) & ~seen
        if not nxt:
            break
        layers.append(members(nxt))
        seen |= nxt
        current = nxt
    rest = ((1 << t.n) - 1) & ~seen
    return LayerSequence(z, tuple(layers), members(rest))


# -- canonical forms and enumeration ----------------------------------------

def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def tournament_code(t: Tournament) -> int:
    """Arc-table bitstring over pairs (i<j) in lexicographic order, first pair
    most significant; bit is 1 iff i->j."""
    code = 0
    for i, j in _pairs(t.n):
        code = (code << 1) | int(t.arc(i, j))
    return code


def tournament_from_code(n: int, code: int) -> Tournament:
    pairs = _pairs(n)
    masks = [0] * n
    for k, (i, j) in enumerate(pairs):
        if (code >> (len(pairs) - 1 - k)) & 1:
            masks[i] |= 1 << j
        else:
            masks[j] |= 1 << i
    return Tournament(masks)


@lru_cache(maxsize=None)
def _relabel_tables(n: int):
    pairs = _pairs(n)
    index = {p: k for k, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    perms = np.array(perms, dtype=np.int64).reshape(len(perms), n)
    npairs = len(pairs)
    src = np.zeros((len(perms), npairs), dtype=np.int64)
    flip = np.zeros((len(perms), npairs), dtype=np.uint8)
    for k, (i, j) in enumerate(pairs):
        pi, pj = perms[:, i], perms[:, j]
        lo, hi = np.minimum(pi, pj), np.maximum(pi, pj)
        src[:, k] = [index[(a, b)] for a, b in zip(lo.tolist(), hi.tolist())]
        flip[:, k] = pi > pj
    place = (np.int64(1) << np.arange(npairs - 1, -1, -1, dtype=np.int64)) if npairs else np.zeros(0, np.int64)
    return src, flip, place


def relabelled_codes(n: int, code: int) -> np.ndarray:
    """Codes of all n! relabellings of the tournament with the given code."""
    src, flip, place = _relabel_tables(n)
    npairs = n * (n - 1) // 2
    bits = np.array([(code >> (npairs - 1 - k)) & 1 for k in range(npairs)], dtype=np.uint8)
    return ((bits[src] ^ flip).astype(np.int64) @ place) if npairs else np.zeros(1, np.int64)


@dataclass(frozen=True, order=True)
class CanonicalForm:
    order: int
    code: int

    @property
    def bits(self) -> str:
        npairs = self.order * (self.order - 1) // 2
        return format(self.code, f"0{npairs}b") if npairs else ""

    def tournament(self) -> Tournament:
        return tournament_from_code(self.order, self.code)


def canonical_form(t: Tournament) -> CanonicalForm:
    """Minimal arc code over all vertex permutations (isomorphism invariant)."""
    if t.n > MAX_CANONICAL_ORDER:
        raise ValueError(f"canonical_form supports n <= {MAX_CANONICAL_ORDER}, got {t.n}")
    return CanonicalForm(t.n, int(relabelled_codes(t.n, tournament_code(t)).min()))


def _labelled_survivors(order: int, forbidden: int) -> np.ndarray:
    """Codes of labelled order-vertex tournaments without a transitive
    ``forbidden``-subtournament, ascending."""
    npairs = order * (order - 1) // 2
    codes = np.arange(1 << npairs, dtype=np.uint32)
    if forbidden > order:
        return codes
    pairs = _pairs(order)
    bit = {}
    for k, (i, j) in enumerate(pairs):
        b = ((codes >> np.uint32(npairs - 1 - k)) & np.uint32(1)).astype(np.uint8)
        bit[(i, j)] = b
        bit[(j, i)] = 1 - b
    keep = np.ones(len(codes), dtype=bool)
    target = comb(forbidden, 3)
    for sub in itertools.combinations(range(order), forbidden):
        # transitive iff no cyclic triple iff sum C(d,2) == C(k,3)
        pairs_sum = np.zeros(len(codes), dtype=np.int32)
        for u in sub:
            d = np.zeros(len(codes), dtype=np.uint8)
            for v in sub:
                if v != u:
                    d += bit[(u, v)]
            pairs_sum += (d.astype(np.int32) * (d.astype(np.int32) - 1)) // 2
        keep &= pairs_sum != target
    return codes[keep]


def family_members(order: int, forbidden_transitive: int) -> list[Tournament]:
    """Canonical representatives of the isomorphism classes of ``order``-vertex
    tournaments with no transitive subtournament on ``forbidden_transitive``
    vertices, sorted by canonical code.

    All 2^(order(order-1)/2) labelled tournaments are filtered; survivors are
    grouped into classes by marking every relabelling of each new one.
    """
    if not 0 <= order <= MAX_ENUMERATION_ORDER:
        raise ValueError(f"enumeration supports order <= {MAX_ENUMERATION_ORDER}, got {order}")
    if forbidden_transitive < 0:
        raise ValueError("forbidden_transitive must be non-negative")
    if order <= 1:
        return [Tournament([0] * order)] if forbidden_transitive > order else []
    survivors = _labelled_survivors(order, forbidden_transitive)
    visited = np.zeros(1 << (order * (order - 1) // 2), dtype=bool)
    canon = []
    for c in survivors.tolist():
        if visited[c]:
            continue
        orbit = relabelled_codes(order, c)
        visited[orbit] = True
        canon.append(int(orbit.min()))
    return [tournament_from_code(order, c) for c in sorted(canon)]


def enumerate_family(order: int, forbidden_transitive: int) -> int:
    """Number of isomorphism classes counted by :func:`family_members`."""
    return len(family_members(order, forbidden_transitive))


# -- family-free instance generation -------------------------------------------

_FAMILIES = {5: 4, 7: 5}  # family order -> forbidden transitive order


def random_family_free(n: int, seed: int, family: int = 7, flip: float = 0.3,
                       attempts: int = 200) -> Tournament:
    """Random tournament with no subtournament from the 5- or 7-vertex family.

    Vertices are added one at a time.  Arcs to earlier vertices follow the
    order 0->1->2... except that each is reversed with probability ``flip``;
    a draw creating a family member through the new vertex is rejected and
    redrawn.  If ``attempts`` draws all fail the new vertex is tried as a
    sink, then as a source; RuntimeError if neither avoids the family.
    """
    if family not in _FAMILIES:
        raise ValueError("family must be 5 or 7")
    forbidden = _FAMILIES[family]
    rng = SplitMix64(seed)
    threshold = int(flip * (1 << 64))
    masks: list[int] = []
    for v in range(n):
        for _ in range(attempts):
            into = 0  # earlier vertices u with v->u
            for u in range(v):
                if rng.next() < threshold:
                    into |= 1 << u
            t = _extend(masks, into)
            if not _creates_member(t, v, family, forbidden):
                break
        else:
            for into in (0, (1 << v) - 1):
                t = _extend(masks, into)
                if not _creates_member(t, v, family, forbidden):
                    break
            else:
                raise RuntimeError(f"cannot extend to vertex {v} without creating a family member")
        masks = list(t.out_masks)
    return Tournament(masks)


def _extend(masks: list[int], into: int) -> Tournament:
    v = len(masks)
    new = [m | (1 << v) if not (into >> u) & 1 else m for u, m in enumerate(masks)]
    new.append(into)
    return Tournament(new)


def _creates_member(t: Tournament, v: int, order: int, forbidden: int) -> bool:
    for rest in itertools.combinations(range(v), order - 1):
        if _free_of_transitive(t, mask_of(rest) | (1 << v), forbidden):
            return True
    return False
