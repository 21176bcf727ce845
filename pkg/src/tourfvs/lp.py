"""Exact rational LP for the triangle / 7-vertex-family covering relaxation.

Covering LPs ``min w.x  s.t.  x(R) >= b_R, x >= 0`` are solved through their
packing dual ``max b.y  s.t.  sum_{R ∋ v} y_R <= w_v, y >= 0``.  The dual has
the all-slack basis as a feasible start (w >= 0), so no phase one is needed.
The primal point is read off the simplex multipliers of the optimal dual
basis; the primal constraints tight at it (the basic dual columns) are
linearly independent, so it is a vertex of the covering polyhedron.

Rows of the covering LP are columns of the dual, so lazy row generation is
column generation with a warm start.  Bland's rule throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import Tournament, as_weights, mask_of
from .detect import _transitive_mask, all_triangles

ZERO = Fraction(0)
ONE = Fraction(1)
THREE = Fraction(3)


class ModelError(ValueError):
    """Malformed covering model."""


@dataclass(frozen=True)
class CoverModel:
    n: int
    rows: tuple[tuple[tuple[int, ...], Fraction], ...]
    objective: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.objective) != self.n:
            raise ModelError(f"objective has {len(self.objective)} entries, expected {self.n}")
        for v, c in enumerate(self.objective):
            if c < 0:
                raise ModelError(f"negative weight {c} on variable {v}")
        for i, (support, rhs) in enumerate(self.rows):
            if not support:
                raise ModelError(f"row {i} has empty support")
            if len(set(support)) != len(support) or not all(0 <= v < self.n for v in support):
                raise ModelError(f"row {i} support {support} is not a subset of [0, {self.n})")
            if rhs <= 0:
                raise ModelError(f"row {i} has non-positive rhs {rhs}")


@dataclass(frozen=True)
class LpSolution:
    """Optimal basic primal point, dual per row, common value.

    ``rows`` are the rows the solver actually held (all of them for a
    materialized model, the generated ones in lazy mode); rows never
    generated implicitly carry dual 0.  ``basis`` lists the basic dual
    columns: ``("slack", v)`` means x_v = 0 is tight, ``("row", i)`` means
    row i is tight.
    """

    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    value: Fraction
    rows: tuple[tuple[tuple[int, ...], Fraction], ...]
    basis: tuple[tuple[str, int], ...]
    pivots: int = 0

    def dual_load(self, v: int) -> Fraction:
        return sum((y for (support, _), y in zip(self.rows, self.dual) if v in support), ZERO)

    def row_activity(self, i: int) -> Fraction:
        return sum((self.primal[v] for v in self.rows[i][0]), ZERO)


class _DualTableau:
    """Integer-preserving tableau for max b.y s.t. A^T y + s = w.

    Every entry is stored as an integer over the common denominator
    ``self.den`` (the previous pivot element), and pivots use exact integer
    division (Edmonds' fraction-free Gauss-Jordan step).  Tableau rows are
    indexed by vertices; columns 0..n-1 are slacks, whose block holds
    den * B^-1, and columns n.. are covering rows.
    """

    def __init__(self, weights: Sequence[Fraction]):
        n = len(weights)
        self.n = n
        scale = math.lcm(*(Fraction(c).denominator for c in weights)) if n else 1
        self.scale = scale  # weights are scaled to integers once
        self.rows = [[int(i == v) for i in range(n)] for v in range(n)]
        self.rhs = [int(c * scale) for c in weights]
        self.obj = [0] * n  # den * reduced cost (c_j - z_j)
        self.den = 1
        self.basis = list(range(n))  # basis[i] = column basic in tableau row i
        self.row_data: list[tuple[tuple[int, ...], Fraction]] = []
        self.pivots = 0

    def multipliers(self) -> list[Fraction]:
        # reduced cost of slack v is -pi_v
        return [Fraction(-self.obj[v], self.den) for v in range(self.n)]

    def add_row(self, support: Sequence[int], rhs: Fraction) -> None:
        rhs = Fraction(rhs)
        if rhs.denominator != 1:
            raise ModelError("covering rows must have integer right-hand sides")
        for i, row in enumerate(self.rows):
            row.append(sum(row[v] for v in support))
        self.obj.append(int(rhs) * self.den + sum(self.obj[v] for v in support))
        self.row_data.append((tuple(support), rhs))

    def _pivot(self, r: int, j: int) -> None:
        p = self.rows[r][j]
        d = self.den
        prow = self.rows[r]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[j]
            if f:
                self.rows[i] = [(a * p - f * b) // d for a, b in zip(row, prow)]
                self.rhs[i] = (self.rhs[i] * p - f * prhs) // d
            elif p != d:
                self.rows[i] = [a * p // d for a in row]
                self.rhs[i] = self.rhs[i] * p // d
        f = self.obj[j]
        self.obj = [(a * p - f * b) // d for a, b in zip(self.obj, prow)]
        self.den = p
        self.basis[r] = j
        self.pivots += 1

    def optimize(self) -> None:
        while True:
            entering = next((j for j, dj in enumerate(self.obj) if dj > 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    # compare rhs_i / a with rhs_best / a_best, ties by basic column
                    lhs = self.rhs[i] * self.rows[best][entering]
                    rhs = self.rhs[best] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                # cannot happen: the covering primal is feasible
                raise ArithmeticError("dual unbounded; covering primal infeasible")
            self._pivot(best, entering)

    def solution(self) -> LpSolution:
        n = self.n
        primal = tuple(self.multipliers())
        dual = [ZERO] * len(self.row_data)
        for i, col in enumerate(self.basis):
            if col >= n:
                dual[col - n] = Fraction(self.rhs[i], self.den * self.scale)
        value = sum((b * y for (_, b), y in zip(self.row_data, dual)), ZERO)
        basis = tuple(("slack", c) if c < n else ("row", c - n) for c in self.basis)
        return LpSolution(primal, tuple(dual), value, tuple(self.row_data), basis, self.pivots)


def simplex_solve(model: CoverModel) -> LpSolution:
    """Optimal basic solution and optimal dual of a covering model, exactly."""
    tab = _DualTableau(model.objective)
    for support, rhs in model.rows:
        tab.add_row(support, rhs)
    tab.optimize()
    return tab.solution()


# -- the FVS relaxation -----------------------------------------------------

def t7_subsets(t: Tournament) -> list[tuple[int, ...]]:
    """All 7-subsets inducing a member of the 7-vertex family, lexicographic."""
    return [q for q in itertools.combinations(range(t.n), 7) if _is_t7_subset(t, q)]


def _is_t7_subset(t: Tournament, q: Sequence[int]) -> bool:
    for sub in itertools.combinations(q, 5):
        if _transitive_mask(t, mask_of(sub)):
            return False
    return True


def build_fvs_model(t: Tournament, w=None, with_t7: bool = True) -> CoverModel:
    """Materialize every triangle row (rhs 1) and, optionally, every 7-family row (rhs 3)."""
    w = as_weights(w, t.n)
    rows = [(tri, ONE) for tri in all_triangles(t)]
    if with_t7:
        rows += [(q, THREE) for q in t7_subsets(t)]
    return CoverModel(t.n, tuple(rows), w)


class Separator:
    """Separation oracle for the relaxation of one tournament.

    Triangles are listed once; 7-subsets are only tested for family
    membership when their current x-mass is below 3, and results are cached.
    """

    def __init__(self, t: Tournament, with_t7: bool = True):
        self.t = t
        self.with_t7 = with_t7
        self.triangles = all_triangles(t)
        self._t7_cache: dict[tuple[int, ...], bool] = {}

    def _in_t7(self, q):
        r = self._t7_cache.get(q)
        if r is None:
            r = self._t7_cache[q] = _is_t7_subset(self.t, q)
        return r

    def violated(self, x: Sequence[Fraction]):
        den = math.lcm(*(v.denominator for v in x)) if x else 1
        xi = [int(v * den) for v in x]
        for tri in self.triangles:
            if xi[tri[0]] + xi[tri[1]] + xi[tri[2]] < den:
                return tri, ONE
        if self.with_t7 and self.t.n >= 7:
            three = 3 * den
            for q in itertools.combinations(range(self.t.n), 7):
                if sum(xi[v] for v in q) < three and self._in_t7(q):
                    return q, THREE
        return None


def separate(t: Tournament, x: Sequence[Fraction], with_t7: bool = True):
    """First violated row of the relaxation at ``x`` or None.

    Triangle rows (rhs 1) are scanned before 7-family rows (rhs 3), each in
    lexicographic order.  Returns ``(support, rhs)``.
    """
    if len(x) != t.n:
        raise ValueError(f"x has length {len(x)}, expected {t.n}")
    return Separator(t, with_t7).violated([Fraction(v) for v in x])


def solve_fvs_lp(t: Tournament, w=None, with_t7: bool = True, lazy: bool = True) -> LpSolution:
    """Optimal basic solution of the full relaxation for ``t``.

    With ``lazy`` (default) rows are generated by :func:`separate` until
    none is violated; otherwise the model is materialized up front.
    """
    w = as_weights(w, t.n)
    if not lazy:
        return simplex_solve(build_fvs_model(t, w, with_t7))
    tab = _DualTableau(w)
    sep = Separator(t, with_t7)
    while True:
        tab.optimize()
        row = sep.violated(tab.multipliers())
        if row is None:
            return tab.solution()
        tab.add_row(*row)


def max_fractional_packing_lp(t: Tournament, w=None) -> LpSolution:
    return solve_fvs_lp(t, w, with_t7=False)


def check_certificate(sol: LpSolution, weights: Sequence[Fraction]) -> list[str]:
    """Exact optimality audit: feasibility both sides, strong duality,
    complementary slackness.  Returns a list of failures (empty when sound)."""
    problems = []
    for v, x in enumerate(sol.primal):
        if x < 0:
            problems.append(f"x[{v}] = {x} < 0")
    for i, (support, rhs) in enumerate(sol.rows):
        act = sol.row_activity(i)
        if act < rhs:
            problems.append(f"row {i} {support}: activity {act} < {rhs}")
        if sol.dual[i] < 0:
            problems.append(f"y[{i}] = {sol.dual[i]} < 0")
        if sol.dual[i] > 0 and act != rhs:
            problems.append(f"row {i} has positive dual but slack {act - rhs}")
    primal_value = sum((c * x for c, x in zip(weights, sol.primal)), ZERO)
    dual_value = sum((rhs * y for (_, rhs), y in zip(sol.rows, sol.dual)), ZERO)
    if primal_value != dual_value or dual_value != sol.value:
        problems.append(f"duality gap: primal {primal_value}, dual {dual_value}, reported {sol.value}")
    for v, c in enumerate(weights):
        load = sol.dual_load(v)
        if load > c:
            problems.append(f"dual load {load} exceeds weight {c} at vertex {v}")
        if sol.primal[v] > 0 and load != c:
            problems.append(f"x[{v}] > 0 but dual load {load} != weight {c}")
    return problems


def is_basic(sol: LpSolution, n: int) -> bool:
    """Check that the tight constraints named by the basis determine the
    primal point uniquely (rank n over the rationals)."""
    rows = []
    for kind, idx in sol.basis:
        if kind == "slack":
            rows.append([ONE if v == idx else ZERO for v in range(n)])
        else:
            support = set(sol.rows[idx][0])
            rows.append([ONE if v in support else ZERO for v in range(n)])
    return _rank(rows) == n


def _rank(rows: list[list[Fraction]]) -> int:
    m = [r[:] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def support_of(x: Iterable[Fraction]) -> tuple[int, ...]:
    return tuple(v for v, val in enumerate(x) if val)

