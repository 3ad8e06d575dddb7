"""Extremal structure of the unit ball of the free space over a finite space.

The norming polytope of a pair ``(p, q)`` is the set of 1-Lipschitz ``f``
vanishing at the base with ``f(p) - f(q) = d(p, q)``. It is a system of
difference constraints: ``f(v) - f(u) <= d(u, v)`` for every ordered pair,
plus ``f(q) - f(p) <= -d(p, q)``. The largest achievable ``f(v) - f(u)`` is
therefore a shortest-path distance in that constraint graph, which on a
metric collapses to ``min(d(u, v), d(u, p) - d(p, q) + d(q, v))``. Range
queries can be answered either that way (default) or by linear programming
through :func:`exactlp.functional_range`; the two are cross-checked in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactlp import LinearProgram, convex_weights, functional_range, solve
from .freespace import LipFunction, lip_norm, molecule_element, lipschitz_constraints
from .metric import FiniteMetricSpace, PointId, gap, segment

__all__ = [
    "NormingPolytope",
    "MoleculeClassification",
    "de_leeuw",
    "classify",
    "strongly_exposed_constant",
    "exposure_ratio",
    "oracle_extreme",
    "oracle_certificate",
    "exposing_functional",
    "exposing_margin",
    "d_pq",
    "molecule_face",
    "verify_dpq_on_segment",
    "verify_face_on_segment",
]

Pair = tuple[PointId, PointId]
METHODS = ("shortest_path", "lp")


def _distinct(p: PointId, q: PointId) -> None:
    if p == q:
        raise ValueError(f"need distinct points, got p = q = {p}")


def de_leeuw(f: LipFunction, x: PointId, y: PointId) -> Fraction:
    """Difference quotient ``(f(x) - f(y)) / d(x, y)``."""
    _distinct(x, y)
    return (f.values[x] - f.values[y]) / f.space.dist[x][y]


@dataclass(frozen=True)
class NormingPolytope:
    space: FiniteMetricSpace
    p: PointId
    q: PointId

    def __post_init__(self):
        _distinct(self.p, self.q)

    @property
    def columns(self) -> dict[PointId, int]:
        return {x: i for i, x in enumerate(self.space.non_base())}

    def constraints(self) -> tuple[list, list]:
        """``(ineq, eq)`` rows over one variable per non-base point."""
        M, col = self.space, self.columns
        width = len(col)
        ineq = lipschitz_constraints(M, col, width)
        r = [0] * width
        if self.p in col:
            r[col[self.p]] += 1
        if self.q in col:
            r[col[self.q]] -= 1
        return ineq, [(tuple(r), M.dist[self.p][self.q])]

    def canonical_member(self) -> LipFunction:
        return LipFunction.distance_to(self.space, self.q)

    def longest(self, u: PointId, v: PointId) -> Fraction:
        """``max f(v) - f(u)`` over the polytope."""
        d, p, q = self.space.dist, self.p, self.q
        return min(d[u][v], d[u][p] - d[p][q] + d[q][v])

    def potential(self, u: PointId) -> LipFunction:
        """Member maximizing ``f(v) - f(u)`` for every ``v`` at once."""
        M = self.space
        raw = [self.longest(u, v) for v in M.points()]
        shift = raw[M.base_index]
        return LipFunction(M, tuple(v - shift for v in raw))

    def contains(self, f: LipFunction) -> bool:
        return lip_norm(f) <= 1 and de_leeuw(f, self.p, self.q) == 1

    def quotient_range(self, x: PointId, y: PointId, method: str = "shortest_path") -> tuple[Fraction, Fraction]:
        """Exact ``(min, max)`` of ``de_leeuw(f, x, y)`` over the polytope."""
        _distinct(x, y)
        dxy = self.space.dist[x][y]
        if method == "shortest_path":
            return -self.longest(x, y) / dxy, self.longest(y, x) / dxy
        if method == "lp":
            col = self.columns
            obj = [Fraction(0)] * len(col)
            if x in col:
                obj[col[x]] += 1 / dxy
            if y in col:
                obj[col[y]] -= 1 / dxy
            ineq, eq = self.constraints()
            if not col:  # pragma: no cover - p != q forces a non-base point
                return Fraction(0), Fraction(0)
            return functional_range(obj, ineq, eq)
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


@dataclass(frozen=True)
class MoleculeClassification:
    pair: Pair
    segment: frozenset[PointId]
    is_extreme: bool
    is_preserved_extreme: bool
    is_denting: bool
    strongly_exposed_constant: Optional[Fraction]
    exposing_functional: Optional[LipFunction] = None
    oracle_extreme: Optional[bool] = None

    @property
    def is_strongly_exposed(self) -> bool:
        return self.strongly_exposed_constant is not None

    @property
    def is_exposed(self) -> bool:
        return self.exposing_functional is not None


def exposure_ratio(M: FiniteMetricSpace, x: PointId, p: PointId, q: PointId) -> Optional[Fraction]:
    """``min(d(x,p), d(x,q)) / gap(x; p, q)``, or None when the gap vanishes."""
    s = gap(M, x, p, q)
    if s == 0:
        return None
    return min(M.dist[x][p], M.dist[x][q]) / s


def strongly_exposed_constant(M: FiniteMetricSpace, p: PointId, q: PointId) -> Optional[Fraction]:
    """Least ``C`` with ``min(d(x,p), d(x,q)) <= C * gap(x; p, q)`` for all ``x``.

    None if some ``x`` other than ``p, q`` has zero gap. With no such ``x`` to
    quantify over (two-point spaces) the constant is 0.
    """
    _distinct(p, q)
    best = Fraction(0)
    for x in M.points():
        if x in (p, q):
            continue
        r = exposure_ratio(M, x, p, q)
        if r is None:
            return None
        best = max(best, r)
    return best


def _other_molecules(M: FiniteMetricSpace, p: PointId, q: PointId) -> list[tuple[Pair, tuple]]:
    return [((x, y), molecule_element(M, x, y).vector()) for x, y in M.ordered_pairs() if (x, y) != (p, q)]


def oracle_certificate(M: FiniteMetricSpace, p: PointId, q: PointId) -> Optional[dict[Pair, Fraction]]:
    """Convex weights writing ``u_pq`` through the other molecules, or None if it is a vertex."""
    _distinct(p, q)
    others = _other_molecules(M, p, q)
    w = convex_weights(molecule_element(M, p, q).vector(), [v for _, v in others])
    if w is None:
        return None
    return {pair: lam for (pair, _), lam in zip(others, w) if lam}


def oracle_extreme(M: FiniteMetricSpace, p: PointId, q: PointId) -> bool:
    """Vertex test of ``u_pq`` in the convex hull of all molecules (the unit ball)."""
    return oracle_certificate(M, p, q) is None


def d_pq(M: FiniteMetricSpace, p: PointId, q: PointId, method: str = "shortest_path") -> frozenset[Pair]:
    """Ordered pairs on which every norming function has quotient identically +1 or -1."""
    poly = NormingPolytope(M, p, q)
    out = set()
    for x, y in M.ordered_pairs():
        lo, hi = poly.quotient_range(x, y, method)
        if lo == hi and abs(lo) == 1:
            out.add((x, y))
    return frozenset(out)


def molecule_face(M: FiniteMetricSpace, p: PointId, q: PointId, method: str = "shortest_path") -> frozenset[Pair]:
    """Molecules ``u_xy`` normed by every norming function of ``(p, q)``."""
    poly = NormingPolytope(M, p, q)
    return frozenset((x, y) for x, y in M.ordered_pairs() if poly.quotient_range(x, y, method)[0] == 1)


def verify_dpq_on_segment(M: FiniteMetricSpace, p: PointId, q: PointId, method: str = "shortest_path") -> bool:
    """Both coordinates of every pair in ``d_pq`` have zero gap."""
    return all(gap(M, x, p, q) == 0 and gap(M, y, p, q) == 0 for x, y in d_pq(M, p, q, method))


def verify_face_on_segment(M: FiniteMetricSpace, p: PointId, q: PointId, method: str = "shortest_path") -> bool:
    """Every molecule of the face is supported on the segment ``[p, q]``."""
    seg = segment(M, p, q)
    return all(x in seg and y in seg for x, y in molecule_face(M, p, q, method))


def exposing_margin(f: LipFunction, p: PointId, q: PointId) -> Fraction:
    """``1 - max`` quotient over ordered pairs other than ``(p, q)``."""
    M = f.space
    return 1 - max((de_leeuw(f, x, y) for x, y in M.ordered_pairs() if (x, y) != (p, q)), default=Fraction(-1))


def exposing_functional(
    M: FiniteMetricSpace, p: PointId, q: PointId, method: str = "lp"
) -> Optional[LipFunction]:
    """A norming function of ``(p, q)`` with quotient below 1 on every other pair.

    ``method="lp"`` maximizes the margin ``s`` in ``Phi f(x, y) <= 1 - s``.
    ``method="shortest_path"`` averages the potentials of every point: each
    potential minimizes the quotient on the pairs starting at that point, so
    the average is strictly below 1 off the face and exposes ``u_pq`` exactly
    when the face is ``{(p, q)}``.
    """
    poly = NormingPolytope(M, p, q)
    if method == "shortest_path":
        if molecule_face(M, p, q) != {(p, q)}:
            return None
        n = M.n
        total = [Fraction(0)] * n
        for u in M.points():
            for v, val in enumerate(poly.potential(u).values):
                total[v] += val
        return LipFunction(M, tuple(v / n for v in total))
    if method != "lp":
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    col = poly.columns
    width = len(col) + 1
    ineq = []
    for x, y in M.ordered_pairs():
        if (x, y) == (p, q):
            continue
        r = [0] * width
        if x in col:
            r[col[x]] += 1
        if y in col:
            r[col[y]] -= 1
        r[-1] = M.dist[x][y]
        ineq.append((tuple(r), M.dist[x][y]))
    (eq_row, eq_rhs), = poly.constraints()[1]
    eq = [(tuple(eq_row) + (0,), eq_rhs)]
    obj = (0,) * len(col) + (1,)
    sol = solve(LinearProgram(obj, tuple(ineq), tuple(eq), width))
    if not sol.optimal:  # pragma: no cover - polytope nonempty, margin <= 2
        raise RuntimeError(f"margin LP returned {sol.status.value}")
    if sol.value <= 0:
        return None
    values = [Fraction(0)] * M.n
    for x, i in col.items():
        values[x] = sol.point[i]
    return LipFunction(M, tuple(values))


def classify(
    M: FiniteMetricSpace,
    p: PointId,
    q: PointId,
    run_oracle: bool = False,
    exposing_method: str = "lp",
) -> MoleculeClassification:
    """All extremality predicates for ``u_pq``.

    On a finite space every ultrafilter is principal, so preserved extremality
    and dentability both reduce to a positive gap at every other point, which
    is the same test as a trivial segment.
    """
    _distinct(p, q)
    seg = segment(M, p, q)
    extreme = seg == {p, q}
    return MoleculeClassification(
        pair=(p, q),
        segment=seg,
        is_extreme=extreme,
        is_preserved_extreme=all(gap(M, x, p, q) > 0 for x in M.points() if x not in (p, q)),
        is_denting=extreme,
        strongly_exposed_constant=strongly_exposed_constant(M, p, q),
        exposing_functional=exposing_functional(M, p, q, exposing_method),
        oracle_extreme=oracle_extreme(M, p, q) if run_oracle else None,
    )
