"""Tournament representation, generators and basic graph queries.

Vertices are dense 0-based integers.  Arcs are stored as one out-neighbour
bitmask per vertex, so set operations on vertex sets are plain integer ops.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

VertexSet = tuple  # sorted tuple of distinct vertex ids

_MASK64 = (1 << 64) - 1


class TournamentError(ValueError):
    """Raised when an arc table does not describe a tournament."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> tuple[int, ...]:
    """Sorted vertex ids of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Tournament:
    """An orientation of the complete graph on ``n`` vertices.

    Instances are immutable.  ``arc(u, v)`` is true iff the arc u->v is
    present.  Use :meth:`from_matrix`, :meth:`from_out_masks` or one of the
    generators in this module to build one; every constructor validates
    antisymmetry and completeness.
    """

    __slots__ = ("_n", "_out", "_in", "_hash")

    def __init__(self, out_masks: Sequence[int]):
        n = len(out_masks)
        full = (1 << n) - 1
        out = tuple(int(m) for m in out_masks)
        inn = [0] * n
        for u, m in enumerate(out):
            if m & ~full or (m >> u) & 1:
                raise TournamentError(f"vertex {u}: arcs outside [0, {n}) or a loop")
            for v in members(m):
                inn[v] |= 1 << u
        for u in range(n):
            if out[u] & inn[u]:
                v = members(out[u] & inn[u])[0]
                raise TournamentError(f"both arcs {u}->{v} and {v}->{u} present")
            if (out[u] | inn[u]) != full ^ (1 << u):
                v = members(full ^ (1 << u) ^ (out[u] | inn[u]))[0]
                raise TournamentError(f"no arc between {u} and {v}")
        self._n = n
        self._out = out
        self._in = tuple(inn)
        self._hash = None

    @classmethod
    def from_out_masks(cls, out_masks: Sequence[int]) -> "Tournament":
        return cls(out_masks)

    @classmethod
    def from_matrix(cls, matrix) -> "Tournament":
        """Build from an n x n 0/1 (or boolean) table, ``matrix[u][v]`` true iff u->v."""
        rows = [list(r) for r in matrix]
        n = len(rows)
        masks = []
        for u, row in enumerate(rows):
            if len(row) != n:
                raise TournamentError(f"row {u} has length {len(row)}, expected {n}")
            masks.append(mask_of(v for v, a in enumerate(row) if a))
        return cls(masks)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        masks = [0] * n
        for u, v in arcs:
            masks[u] |= 1 << v
        return cls(masks)

    @property
    def n(self) -> int:
        return self._n

    @property
    def out_masks(self) -> tuple[int, ...]:
        return self._out

    @property
    def in_masks(self) -> tuple[int, ...]:
        return self._in

    def __len__(self) -> int:
        return self._n

    def arc(self, u: int, v: int) -> bool:
        return bool((self._out[u] >> v) & 1)

    def out_degree(self, u: int) -> int:
        return self._out[u].bit_count()

    def in_degree(self, u: int) -> int:
        return self._in[u].bit_count()

    def matrix(self) -> list[list[bool]]:
        return [[self.arc(u, v) for v in range(self._n)] for u in range(self._n)]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self._n) for v in members(self._out[u])]

    def __eq__(self, other) -> bool:
        return isinstance(other, Tournament) and self._out == other._out

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._out)
        return self._hash

    def __repr__(self) -> str:
        return f"Tournament(n={self._n}, out_masks={list(self._out)})"


# -- weights ---------------------------------------------------------------

def as_weights(w, n: int) -> tuple[Fraction, ...]:
    """Validate and convert a weight vector to exact non-negative rationals.

    ``None`` means unit weights.  Floats are rejected since they cannot be
    represented exactly; pass ``Fraction`` or integer values (or strings
    such as ``"7/3"``).
    """
    if w is None:
        return (Fraction(1),) * n
    out = []
    for v, x in enumerate(w):
        if isinstance(x, float):
            raise TypeError(f"weight of vertex {v} is a float; use Fraction or int")
        x = Fraction(x)
        if x < 0:
            raise ValueError(f"weight of vertex {v} is negative: {x}")
        out.append(x)
    if len(out) != n:
        raise ValueError(f"expected {n} weights, got {len(out)}")
    return tuple(out)


def total_weight(w: Sequence[Fraction], vertices: Iterable[int]) -> Fraction:
    return sum((w[v] for v in vertices), Fraction(0))


# -- queries ---------------------------------------------------------------

def _check_subset(t: Tournament, s: Iterable[int]) -> int:
    m = 0
    for v in s:
        if not 0 <= v < t.n:
            raise ValueError(f"vertex {v} out of range for n={t.n}")
        m |= 1 << v
    return m


def in_neighbours_mask(t: Tournament, s_mask: int) -> int:
    """Bitmask of vertices outside ``s_mask`` with an arc into some member."""
    acc = 0
    m = s_mask
    ins = t.in_masks
    while m:
        low = m & -m
        acc |= ins[low.bit_length() - 1]
        m ^= low
    return acc & ~s_mask


def in_neighbours(t: Tournament, s: Iterable[int]) -> VertexSet:
    """Vertices outside ``s`` having an arc into some member of ``s``."""
    return members(in_neighbours_mask(t, _check_subset(t, s)))


def induced(t: Tournament, s: Iterable[int]) -> tuple[Tournament, tuple[int, ...]]:
    """Subtournament on ``s``, relabelled to 0..|s|-1.

    Returns the subtournament and the map from new ids to old ids (the
    sorted members of ``s``).
    """
    old = members(_check_subset(t, s))
    pos = {v: i for i, v in enumerate(old)}
    masks = []
    for v in old:
        m = 0
        for u in members(t.out_masks[v]):
            i = pos.get(u)
            if i is not None:
                m |= 1 << i
        masks.append(m)
    return Tournament(masks), old


def scc_decomposition(t: Tournament) -> list[VertexSet]:
    """Strongly connected components in topological order of the condensation.

    In a tournament the condensation is itself transitive, so the order is
    total: every arc between two components points from the earlier one to
    the later one.  Iterative Tarjan.
    """
    n = t.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[VertexSet] = []
    counter = 0
    outs = [members(m) for m in t.out_masks]
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(outs[v]):
                work[-1] = (v, i + 1)
                u = outs[v][i]
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                comps.append(tuple(sorted(comp)))
    # Tarjan emits sinks first.
    comps.reverse()
    return comps


def cyclic_vertices(t: Tournament) -> VertexSet:
    """Vertices lying on some directed triangle (members of SCCs of size >= 3)."""
    out = []
    for comp in scc_decomposition(t):
        if len(comp) >= 3:
            out.extend(comp)
    return tuple(sorted(out))


# -- generators ------------------------------------------------------------

def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream; seeds are reduced mod 2**64."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state, out = splitmix64(self.state)
        return out

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound


def random_tournament(n: int, seed: int) -> Tournament:
    """Uniform random tournament.

    Pairs (u, v), u < v, are visited in lexicographic order; each consumes
    one SplitMix64 output seeded with ``seed``, and u->v iff the output's
    top bit is set.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = SplitMix64(seed)
    masks = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.next() >> 63:
                masks[u] |= 1 << v
            else:
                masks[v] |= 1 << u
    return Tournament(masks)


def random_weights(n: int, seed: int, high: int = 10) -> tuple[Fraction, ...]:
    """Integer weights uniform in [0, high], from a SplitMix64 stream."""
    rng = SplitMix64(seed)
    return tuple(Fraction(rng.below(high + 1)) for _ in range(n))


def transitive_tournament(n: int) -> Tournament:
    """The order 0->1->...->n-1 (u->v iff u < v)."""
    full = (1 << n) - 1
    return Tournament([full & ~((1 << (u + 1)) - 1) for u in range(n)])


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def paley_tournament(q: int) -> Tournament:
    """Paley tournament: u->v iff v-u is a nonzero quadratic residue mod q."""
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q % 4 != 3:
        raise ValueError(f"{q} is not 3 mod 4; the residue relation is not antisymmetric")
    residues = {(x * x) % q for x in range(1, q)}
    return Tournament([mask_of((u + r) % q for r in residues) for u in range(q)])


def relabel(t: Tournament, perm: Sequence[int]) -> Tournament:
    """Tournament on the same vertex count with arc(i, j) = t.arc(perm[i], perm[j])."""
    n = t.n
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of range(n)")
    return Tournament([mask_of(j for j in range(n) if t.arc(perm[i], perm[j]))
                       for i in range(n)])


def disjoint_union_forward(a: Tournament, b: Tournament) -> Tournament:
    """a followed by b, with every arc from a's vertices to b's (b relabelled by +a.n)."""
    na, nb = a.n, b.n
    bmask = ((1 << nb) - 1) << na
    masks = [m | bmask for m in a.out_masks] + [m << na for m in b.out_masks]
    return Tournament(masks)
