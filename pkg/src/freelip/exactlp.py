"""Exact rational linear programming.

Two-phase dense-tableau simplex with Bland's rule. Inputs and outputs are
:class:`fractions.Fraction`; when ``gmpy2`` is importable the tableau is
carried in ``mpq`` for speed, which is still exact.

Variables are free unless listed in ``LinearProgram.nonneg`` or bounded by a
constraint. Free variables are split as ``x = x+ - x-`` in standard form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

try:
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _num = Fraction

__all__ = [
    "LPError",
    "StructuralError",
    "Status",
    "LinearProgram",
    "LPSolution",
    "solve",
    "feasible",
    "in_convex_hull",
    "convex_weights",
    "functional_range",
]

Row = tuple[Fraction, ...]


class LPError(Exception):
    """Raised when an LP result cannot be used as requested."""


class StructuralError(LPError, ValueError):
    """Malformed LP: row lengths, variable indices or empty inputs."""


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass int or Fraction")
    return Fraction(int(v.numerator), int(v.denominator)) if hasattr(v, "numerator") else Fraction(v)


def _row(values) -> Row:
    return tuple(_frac(v) for v in values)


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` s.t. ``row . x <= rhs`` and ``row . x == rhs``."""

    objective: Row
    ineq_constraints: tuple[tuple[Row, Fraction], ...] = ()
    eq_constraints: tuple[tuple[Row, Fraction], ...] = ()
    num_vars: int = -1
    nonneg: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        obj = _row(self.objective)
        n = len(obj) if self.num_vars < 0 else self.num_vars
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "num_vars", n)
        if len(obj) != n:
            raise StructuralError(f"objective has length {len(obj)}, expected {n}")
        for name in ("ineq_constraints", "eq_constraints"):
            rows = []
            for k, (r, b) in enumerate(getattr(self, name)):
                r = _row(r)
                if len(r) != n:
                    raise StructuralError(f"{name}[{k}] has length {len(r)}, expected {n}")
                rows.append((r, _frac(b)))
            object.__setattr__(self, name, tuple(rows))
        nn = frozenset(self.nonneg)
        if any(not 0 <= i < n for i in nn):
            raise StructuralError("nonneg index out of range")
        object.__setattr__(self, "nonneg", nn)


@dataclass(frozen=True)
class LPSolution:
    status: Status
    value: Optional[Fraction] = None
    point: Optional[Row] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Standard-form tableau ``A z = b, z >= 0`` with an explicit basis."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int, cost: list, obj: list) -> None:
        prow = self.rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j, v in enumerate(prow):
                if v:
                    prow[j] = v * inv
            self.rhs[r] *= inv
        nz = [j for j, v in enumerate(prow) if v]
        br = self.rhs[r]
        for k, row in enumerate(self.rows):
            if k == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[k] -= f * br
        f = cost[c]
        if f:
            for j in nz:
                cost[j] -= f * prow[j]
            obj[0] -= f * br
        self.basis[r] = c

    def run(self, cost: list, obj: list, allowed: int) -> bool:
        """Maximize against reduced costs ``cost``; columns >= ``allowed`` never enter.

        ``obj[0]`` tracks the negated objective value. Returns False on unboundedness.
        """
        while True:
            c = next((j for j in range(allowed) if cost[j] > 0), None)
            if c is None:
                return True
            best = None
            for k, row in enumerate(self.rows):
                a = row[c]
                if a > 0:
                    key = (self.rhs[k] / a, self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return False
            self.pivot(best[1], c, cost, obj)


def _reduced(costs: list, tab: _Tableau) -> tuple[list, list]:
    red = list(costs)
    obj = [_num(0)]
    for k, b in enumerate(tab.basis):
        cb = costs[b]
        if cb:
            for j, v in enumerate(tab.rows[k]):
                if v:
                    red[j] -= cb * v
            obj[0] -= cb * tab.rhs[k]
    return red, obj


def solve(lp: LinearProgram) -> LPSolution:
    """Solve ``lp`` exactly; the returned point is a basic optimal solution."""
    n = lp.num_vars
    # column layout: one column per nonneg var, two per free var, then slacks
    cols: list[tuple[int, int]] = []
    for i in range(n):
        cols.append((i, 1))
        if i not in lp.nonneg:
            cols.append((i, -1))
    nx = len(cols)
    m_in = len(lp.ineq_constraints)
    width = nx + m_in
    rows, rhs, basis, needs_art = [], [], [], []
    for k, (r, b) in enumerate(lp.ineq_constraints):
        sign = -1 if b < 0 else 1
        row = [_num(sign * s * r[i]) for i, s in cols] + [_num(0)] * m_in
        row[nx + k] = _num(sign)
        rows.append(row)
        rhs.append(_num(sign * b))
        needs_art.append(sign < 0)
    for r, b in lp.eq_constraints:
        sign = -1 if b < 0 else 1
        rows.append([_num(sign * s * r[i]) for i, s in cols] + [_num(0)] * m_in)
        rhs.append(_num(sign * b))
        needs_art.append(True)
    n_art = sum(needs_art)
    for row in rows:
        row.extend([_num(0)] * n_art)
    a = width
    for k, need in enumerate(needs_art):
        if need:
            rows[k][a] = _num(1)
            basis.append(a)
            a += 1
        else:
            basis.append(nx + k)
    tab = _Tableau(rows, rhs, basis)

    if n_art:
        phase1 = [_num(0)] * width + [_num(-1)] * n_art
        cost, obj = _reduced(phase1, tab)
        tab.run(cost, obj, width + n_art)
        if obj[0] != 0:
            return LPSolution(Status.INFEASIBLE)
        # drive zero-valued artificials out of the basis; drop redundant rows
        k = 0
        while k < len(tab.rows):
            if tab.basis[k] >= width:
                c = next((j for j in range(width) if tab.rows[k][j]), None)
                if c is None:
                    del tab.rows[k], tab.rhs[k], tab.basis[k]
                    continue
                tab.pivot(k, c, [_num(0)] * (width + n_art), [_num(0)])
            k += 1
        for row in tab.rows:
            del row[width:]

    phase2 = [_num(s * lp.objective[i]) for i, s in cols] + [_num(0)] * m_in
    cost, obj = _reduced(phase2, tab)
    if not tab.run(cost, obj, width):
        return LPSolution(Status.UNBOUNDED)
    z = [_num(0)] * width
    for k, b in enumerate(tab.basis):
        z[b] = tab.rhs[k]
    x = [Fraction(0)] * n
    for (i, s), v in zip(cols, z):
        if v:
            x[i] += s * _frac(v)
    return LPSolution(Status.OPTIMAL, -_frac(obj[0]), tuple(x))


def _system(ineq, eq) -> tuple[int, tuple, tuple]:
    ineq = tuple((_row(r), _frac(b)) for r, b in ineq)
    eq = tuple((_row(r), _frac(b)) for r, b in eq)
    lengths = {len(r) for r, _ in ineq + eq}
    if len(lengths) > 1:
        raise StructuralError(f"inconsistent row lengths {sorted(lengths)}")
    return (lengths.pop() if lengths else 0), ineq, eq


def feasible(ineq: Sequence, eq: Sequence = (), nonneg=()) -> bool:
    """True iff the constraint system has a solution (phase one only)."""
    n, ineq, eq = _system(ineq, eq)
    lp = LinearProgram((0,) * n, ineq, eq, n, frozenset(nonneg))
    return solve(lp).status is not Status.INFEASIBLE


def convex_weights(target: Sequence, generators: Sequence[Sequence]) -> Optional[Row]:
    """Weights ``lam >= 0, sum(lam) = 1`` with ``sum(lam_i g_i) = target``, or None."""
    if not generators:
        raise StructuralError("generators must be nonempty")
    dim = len(target)
    if any(len(g) != dim for g in generators):
        raise StructuralError("generator dimension mismatch")
    k = len(generators)
    eq = [(tuple(g[i] for g in generators), target[i]) for i in range(dim)]
    eq.append(((1,) * k, 1))
    sol = solve(LinearProgram((0,) * k, (), tuple(eq), k, frozenset(range(k))))
    return sol.point if sol.optimal else None


def in_convex_hull(target: Sequence, generators: Sequence[Sequence]) -> bool:
    return convex_weights(target, generators) is not None


def functional_range(objective: Sequence, ineq: Sequence, eq: Sequence = ()) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of ``objective . x`` over the region; raises LPError if either is unattained."""
    n, ineq, eq = _system(ineq, eq)
    obj = _row(objective)
    if n and len(obj) != n:
        raise StructuralError("objective length does not match constraints")
    n = len(obj)
    hi = solve(LinearProgram(obj, ineq, eq, n))
    lo = solve(LinearProgram(tuple(-v for v in obj), ineq, eq, n))
    for sol in (hi, lo):
        if not sol.optimal:
            raise LPError(f"range undefined: LP is {sol.status.value}")
    return -lo.value, hi.value
