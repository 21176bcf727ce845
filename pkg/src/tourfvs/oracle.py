"""Exact references used to audit the approximation algorithms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .approx import three_approx
from .core import Tournament, as_weights, members
from .detect import find_triangle_mask
from .lp import solve_fvs_lp

DEFAULT_CAP = 18


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: Fraction
    witness: tuple[int, ...]
    nodes_explored: int


def exact_min_fvs(t: Tournament, w=None, cap: int = DEFAULT_CAP) -> OracleResult:
    """Minimum-weight FVS by branching on triangles.

    Some vertex of any directed triangle must be deleted.  On the
    lexicographically first triangle among surviving vertices, branch i
    deletes its i-th vertex and keeps the earlier ones, so the branches are
    disjoint; a triangle whose vertices are all kept closes the branch.
    Branches whose deleted weight reaches the incumbent (initialised from
    the local-ratio solution) are pruned.
    """
    w = as_weights(w, t.n)
    if t.n > cap:
        raise SizeCapError(f"n={t.n} exceeds the oracle cap {cap}; pass cap= to override")
    start = three_approx(t, w)
    best = [start.weight, start.fvs]
    nodes = 0
    full = (1 << t.n) - 1

    def branch(deleted: int, kept: int, cost: Fraction) -> None:
        nonlocal nodes
        nodes += 1
        if cost >= best[0]:
            return
        tri = find_triangle_mask(t, full & ~deleted)
        if tri is None:
            best[0], best[1] = cost, members(deleted)
            return
        forced = kept
        for v in tri:
            if not (forced >> v) & 1:
                branch(deleted | (1 << v), forced, cost + w[v])
            forced |= 1 << v

    branch(0, 0, Fraction(0))
    return OracleResult(best[0], tuple(best[1]), nodes)


def max_fractional_packing(t: Tournament, w=None) -> Fraction:
    """Largest total value of a fractional triangle packing under vertex capacities ``w``."""
    return solve_fvs_lp(t, as_weights(w, t.n), with_t7=False).value
