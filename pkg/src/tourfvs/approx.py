"""Approximation algorithms for weighted feedback vertex set in tournaments.

The main entry point is :func:`seven_thirds_fvs`: iterative LP rounding at
threshold 3/7 until the residual has no 7-vertex-family subtournament,
followed by the layered construction of :func:`layers_fvs` on the residual.
:func:`three_approx` is the local-ratio baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (
    Tournament,
    as_weights,
    cyclic_vertices,
    in_neighbours_mask,
    induced,
    mask_of,
    members,
    total_weight,
)
from .detect import (
    _transitive_mask,
    find_t5_subtournament,
    find_t7_subtournament,
    find_triangle_mask,
)
from .lp import LpSolution, solve_fvs_lp

THRESHOLD = Fraction(3, 7)

ROUNDING = "rounding"
LAYERS_S = "layers_S"
LAYERS_PARITY = "layers_parity"
LAYERS_CDZ = "layers_cdz"
CDZ = "cdz"
BASELINE = "baseline"
EXACT = "exact"


class PreconditionError(ValueError):
    """Input violates an algorithm's documented precondition."""

    def __init__(self, message: str, witness: Optional[tuple[int, ...]] = None):
        super().__init__(message)
        self.witness = witness


class T5WitnessError(PreconditionError):
    pass


class T7WitnessError(PreconditionError):
    pass


class InvariantViolation(RuntimeError):
    """An internal guarantee failed.  Never repaired silently."""


class PivotNotFoundError(InvariantViolation):
    pass


class IntegralityError(InvariantViolation):
    pass


@dataclass(frozen=True)
class RoundingStep:
    """One pass of the rounding loop (ids are those of the input tournament)."""

    iteration: int
    lp_value: Fraction  # optimum on the tournament this pass rounded
    rounded: tuple[int, ...]
    pruned: tuple[int, ...]  # removed afterwards for lying on no triangle
    residual_value: Fraction  # optimum on what is left
    fvs_weight: Fraction  # cumulative weight of rounded vertices


@dataclass(frozen=True)
class RoundingOutcome:
    fvs: tuple[int, ...]
    weight: Fraction
    residual: Tournament
    residual_ids: tuple[int, ...]
    initial_value: Fraction  # LP optimum of the untouched input
    initial_pruned: tuple[int, ...]
    trace: tuple[RoundingStep, ...]
    final_solution: LpSolution  # LP solution on the residual (relabelled ids)


@dataclass(frozen=True)
class LayerDecomposition:
    """Layers U_1..U_2k, removed sets S_2..S_2k, pivots z_1, z_3, ...

    ``s_parts[j]`` is S_{2j+2} (so ``s_parts[0]``, for U_2, is always empty).
    ``restarts`` holds at most one decomposition of the vertices left over
    when the layer expansion stalled; it is built the same way on the
    subtournament they induce.  All ids are those of the tournament handed
    to :func:`layers_fvs`.
    """

    ground: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    s_parts: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]
    parity: str  # "even" keeps even layers (U_2, U_4, ...), "odd" the others
    restarts: tuple["LayerDecomposition", ...] = ()

    @property
    def l0(self) -> tuple[int, ...]:
        return tuple(sorted(v for layer in self.u[1::2] for v in layer))

    @property
    def l1(self) -> tuple[int, ...]:
        return tuple(sorted(v for layer in self.u[0::2] for v in layer))

    @property
    def s(self) -> tuple[int, ...]:
        return tuple(sorted(v for part in self.s_parts for v in part))

    def kept_layers(self) -> tuple[tuple[int, ...], ...]:
        return self.u[1::2] if self.parity == "even" else self.u[0::2]

    def relabelled(self, old: Sequence[int]) -> "LayerDecomposition":
        """Same decomposition with vertex v renamed old[v] (``old`` increasing)."""
        def m(vs):
            return tuple(old[v] for v in vs)
        return LayerDecomposition(m(self.ground), tuple(m(x) for x in self.u),
                                  tuple(m(x) for x in self.s_parts), m(self.pivots),
                                  self.parity, tuple(r.relabelled(old) for r in self.restarts))

    def passes(self) -> list["LayerDecomposition"]:
        """This decomposition followed by its restarts, depth first."""
        out = [self]
        for r in self.restarts:
            out.extend(r.passes())
        return out


@dataclass(frozen=True)
class FvsResult:
    fvs: tuple[int, ...]
    weight: Fraction
    stage_tags: dict = field(default_factory=dict)
    algorithm: str = ""
    trace: tuple[RoundingStep, ...] = ()
    layers: Optional[LayerDecomposition] = None
    stalls: int = 0
    lp_value: Optional[Fraction] = None


# -- checking ----------------------------------------------------------------

def verify_fvs(t: Tournament, s: Iterable[int]) -> bool:
    """True iff removing ``s`` leaves a transitive tournament.

    Computed twice, by out-degree distinctness of the remainder and by
    triangle search; disagreement raises :class:`InvariantViolation`.
    """
    smask = mask_of(s)
    if smask >> t.n:
        raise ValueError("vertex set has ids outside the tournament")
    rest = ((1 << t.n) - 1) & ~smask
    by_degrees = _transitive_mask(t, rest)
    by_triangles = find_triangle_mask(t, rest) is None
    if by_degrees != by_triangles:
        raise InvariantViolation("transitivity criteria disagree")
    return by_degrees


def _result(w, fvs, tags, algorithm, **extra) -> FvsResult:
    fvs = tuple(sorted(fvs))
    return FvsResult(fvs, total_weight(w, fvs), dict(sorted(tags.items())), algorithm, **extra)


# -- baseline ----------------------------------------------------------------

def three_approx(t: Tournament, w=None) -> FvsResult:
    """Local-ratio 3-approximation.

    While some triangle has three vertices of positive residual weight,
    subtract its minimum residual weight from all three.  The vertices whose
    residual weight reached zero hit every triangle; redundant ones are
    dropped in reverse order of reaching zero.
    """
    w = as_weights(w, t.n)
    res = list(w)
    zeroed = [v for v in range(t.n) if res[v] == 0]
    positive = mask_of(v for v in range(t.n) if res[v] > 0)
    while True:
        tri = find_triangle_mask(t, positive)
        if tri is None:
            break
        eps = min(res[v] for v in tri)
        for v in tri:
            res[v] -= eps
            if res[v] == 0:
                zeroed.append(v)
                positive &= ~(1 << v)
    chosen = set(zeroed)
    for v in reversed(zeroed):
        if verify_fvs(t, chosen - {v}):
            chosen.discard(v)
    return _result(w, chosen, {v: BASELINE for v in chosen}, "three-approx")


# -- exact solver on T5-free tournaments ---------------------------------------

def cdz_t5free_fvs(t: Tournament, w=None, check: bool = True) -> FvsResult:
    """Minimum-weight FVS of a tournament with no 5-vertex-family subtournament.

    The triangle covering polyhedron of such a tournament is integral, so a
    basic optimum of the triangle-only relaxation is a 0/1 vector; its
    support is returned.
    """
    w = as_weights(w, t.n)
    if check:
        witness = find_t5_subtournament(t)
        if witness is not None:
            raise T5WitnessError(f"tournament contains a 5-vertex-family subtournament on {witness}", witness)
    sol = solve_fvs_lp(t, w, with_t7=False)
    bad = [v for v, x in enumerate(sol.primal) if x not in (0, 1)]
    if bad:
        raise IntegralityError(f"basic optimum is fractional at {bad}: {[sol.primal[v] for v in bad]}")
    fvs = [v for v, x in enumerate(sol.primal) if x == 1]
    return _result(w, fvs, {v: CDZ for v in fvs}, "cdz", lp_value=sol.value)


# -- layers ------------------------------------------------------------------

def _weight_of_mask(w: Sequence[Fraction], mask: int) -> Fraction:
    return total_weight(w, members(mask))


def _layer_pass(t: Tournament, w: Sequence[Fraction], ground: int) -> LayerDecomposition:
    ins = t.in_masks

    def n_of(mask: int) -> int:
        return in_neighbours_mask(t, mask) & ground

    z1 = min(members(ground), key=lambda v: ((ins[v] & ground).bit_count(), v))
    u = [1 << z1, n_of(1 << z1)]
    s_parts = [0]
    pivots = [z1]
    remaining = ground & ~(u[0] | u[1])
    restarts = ()
    while remaining:
        odd = n_of(u[-1]) & remaining
        if not odd:
            # nothing left reaches the layers: lay out the rest separately
            restarts = (_layer_pass(t, w, remaining),)
            break
        remaining &= ~odd
        nxt = n_of(odd) & remaining
        remaining &= ~nxt
        half = _weight_of_mask(w, nxt) / 2
        pivot = next((z for z in members(odd) if _weight_of_mask(w, nxt & ins[z]) >= half), None)
        if pivot is None:
            raise PivotNotFoundError(
                f"no vertex of layer {members(odd)} is in-dominated by half the weight of {members(nxt)}")
        u += [odd, nxt & ins[pivot]]
        s_parts.append(nxt & ~ins[pivot])
        pivots.append(pivot)
    even_w = sum((_weight_of_mask(w, m) for m in u[1::2]), Fraction(0))
    odd_w = sum((_weight_of_mask(w, m) for m in u[0::2]), Fraction(0))
    return LayerDecomposition(
        ground=members(ground),
        u=tuple(members(m) for m in u),
        s_parts=tuple(members(m) for m in s_parts),
        pivots=tuple(pivots),
        parity="even" if even_w >= odd_w else "odd",
        restarts=restarts,
    )


def layers_fvs(t: Tournament, w=None, check: bool = True) -> tuple[FvsResult, LayerDecomposition]:
    """FVS of weight at most 7/9 of the total for a tournament with no
    7-vertex-family subtournament in which every vertex lies on a triangle.

    Layers are grown backwards from a minimum in-degree vertex; in each
    round the new odd layer is everything with an arc into the previous even
    layer, and of the vertices pointing into the odd layer only those
    in-dominating a chosen pivot (carrying at least half their weight) form
    the next even layer, the rest go to S.  The lighter parity class and S
    are taken whole, and each layer of the other class is solved exactly.
    """
    w = as_weights(w, t.n)
    if check:
        on_triangles = cyclic_vertices(t)
        if len(on_triangles) != t.n:
            lonely = tuple(sorted(set(range(t.n)) - set(on_triangles)))
            raise PreconditionError(f"vertices {lonely} lie on no directed triangle", lonely)
        witness = find_t7_subtournament(t)
        if witness is not None:
            raise T7WitnessError(f"tournament contains a 7-vertex-family subtournament on {witness}", witness)
    if t.n == 0:
        empty = LayerDecomposition((), (), (), (), "even")
        return _result(w, (), {}, "layers-only", layers=empty), empty

    decomposition = _layer_pass(t, w, (1 << t.n) - 1)
    tags: dict[int, str] = {}
    stalls = 0
    for part in decomposition.passes():
        stalls += len(part.restarts)
        for v in part.s:
            tags[v] = LAYERS_S
        dropped = part.l1 if part.parity == "even" else part.l0
        for v in dropped:
            tags[v] = LAYERS_PARITY
        for layer in part.kept_layers():
            if len(layer) < 3:
                continue
            sub, old = induced(t, layer)
            try:
                inner = cdz_t5free_fvs(sub, [w[v] for v in old])
            except T5WitnessError as exc:
                raise InvariantViolation(f"layer {layer} is not free of the 5-vertex family") from exc
            for v in inner.fvs:
                tags[old[v]] = LAYERS_CDZ
    result = _result(w, tags, tags, "layers-only", layers=decomposition, stalls=stalls)
    return result, decomposition


# -- iterative rounding --------------------------------------------------------

def _solve_on(t: Tournament, w: Sequence[Fraction], ids: Sequence[int]) -> tuple[Tournament, LpSolution]:
    sub, _ = induced(t, ids)
    return sub, solve_fvs_lp(sub, [w[v] for v in ids])


def _prune(t: Tournament, ids: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    sub, old = induced(t, ids)
    keep = tuple(old[i] for i in cyclic_vertices(sub))
    return keep, tuple(sorted(set(ids) - set(keep)))


def iterative_rounding(t: Tournament, w=None) -> RoundingOutcome:
    """First stage: round every vertex with LP value >= 3/7, re-solve, repeat.

    The relaxation carries triangle rows and 7-vertex-family rows.  Vertices
    on no triangle are dropped before the first solve and after every
    rounding.  On exit every residual LP value is below 3/7, so the
    residual has no 7-vertex-family subtournament.
    """
    w = as_weights(w, t.n)
    initial_value = solve_fvs_lp(t, w).value
    ids, initial_pruned = _prune(t, range(t.n))
    sub, sol = _solve_on(t, w, ids)
    fvs: list[int] = []
    trace = []
    iteration = 0
    while ids and any(x >= THRESHOLD for x in sol.primal):
        iteration += 1
        lp_value = sol.value
        rounded = tuple(ids[i] for i, x in enumerate(sol.primal) if x >= THRESHOLD)
        fvs.extend(rounded)
        gone = set(rounded)
        ids, pruned = _prune(t, [v for v in ids if v not in gone])
        sub, sol = _solve_on(t, w, ids)
        trace.append(RoundingStep(iteration, lp_value, rounded, pruned, sol.value, total_weight(w, fvs)))
    fvs_t = tuple(sorted(fvs))
    return RoundingOutcome(fvs_t, total_weight(w, fvs_t), sub, ids, initial_value,
                           initial_pruned, tuple(trace), sol)


def seven_thirds_fvs(t: Tournament, w=None) -> FvsResult:
    """Iterative rounding followed by :func:`layers_fvs` on the residual."""
    w = as_weights(w, t.n)
    stage1 = iterative_rounding(t, w)
    tags = {v: ROUNDING for v in stage1.fvs}
    layers = None
    stalls = 0
    if stage1.residual_ids:
        old = stage1.residual_ids
        inner, layers = layers_fvs(stage1.residual, [w[v] for v in old], check=False)
        layers = layers.relabelled(old)
        stalls = inner.stalls
        for v, tag in inner.stage_tags.items():
            tags[old[v]] = tag
    result = _result(w, tags, tags, "seven-thirds", trace=stage1.trace, layers=layers,
                     stalls=stalls, lp_value=stage1.initial_value)
    if not verify_fvs(t, result.fvs):
        raise InvariantViolation("output is not a feedback vertex set")
    return result
