"""Finitely supported elements of the Lipschitz-free space over a finite space.

An element ``sum_x a_x delta(x)`` is stored as a sparse map from non-base
points to nonzero rationals. ``delta(base)`` is the zero vector, so base
coefficients are dropped on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .exactlp import LinearProgram, solve
from .metric import FiniteMetricSpace, PointId, diameter

__all__ = [
    "SpaceMismatchError",
    "BoundViolation",
    "FreeElement",
    "LipFunction",
    "Molecule",
    "delta",
    "pairing",
    "molecule_element",
    "lip_norm",
    "norm_dual",
    "norm_primal",
    "norm",
    "support",
    "in_subspace",
    "subspace_intersection",
    "weight_element",
    "product_function",
]


class SpaceMismatchError(ValueError):
    pass


class BoundViolation(RuntimeError):
    """An inequality that holds for every input was observed to fail."""


def _same_space(a: FiniteMetricSpace, b: FiniteMetricSpace) -> None:
    if a is not b and a != b:
        raise SpaceMismatchError("operands live on different metric spaces")


@dataclass(frozen=True, eq=False)
class FreeElement:
    space: FiniteMetricSpace
    coeffs: Mapping[PointId, Fraction]

    def __post_init__(self):
        clean: dict[PointId, Fraction] = {}
        for x, v in dict(self.coeffs).items():
            x = self.space.index(x)
            v = Fraction(v)
            if x == self.space.base_index:
                continue
            clean[x] = clean.get(x, Fraction(0)) + v
        clean = {x: clean[x] for x in sorted(clean) if clean[x] != 0}
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def zero(cls, space: FiniteMetricSpace) -> "FreeElement":
        return cls(space, {})

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.space == other.space and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __add__(self, other: "FreeElement") -> "FreeElement":
        _same_space(self.space, other.space)
        out = dict(self.coeffs)
        for x, v in other.coeffs.items():
            out[x] = out.get(x, Fraction(0)) + v
        return FreeElement(self.space, out)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.space, {x: -v for x, v in self.coeffs.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def __mul__(self, scalar) -> "FreeElement":
        s = Fraction(scalar)
        return FreeElement(self.space, {x: s * v for x, v in self.coeffs.items()})

    __rmul__ = __mul__

    def vector(self) -> tuple[Fraction, ...]:
        """Dense coefficients in ``space.non_base()`` order."""
        return tuple(self.coeffs.get(x, Fraction(0)) for x in self.space.non_base())

    def __repr__(self):
        labels = self.space.labels
        body = ", ".join(f"{labels[x]}: {v}" for x, v in self.coeffs.items())
        return f"FreeElement({{{body}}})"


@dataclass(frozen=True, eq=False)
class LipFunction:
    """A function on the points that vanishes at the base point."""

    space: FiniteMetricSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.space.n:
            raise ValueError(f"expected {self.space.n} values, got {len(vals)}")
        if vals[self.space.base_index] != 0:
            raise ValueError("a Lip_0 function must vanish at the base point")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, space: FiniteMetricSpace, values: Mapping) -> "LipFunction":
        """Missing points (typically the base) default to 0."""
        out = [Fraction(0)] * space.n
        for k, v in values.items():
            out[space.index(k)] = Fraction(v)
        return cls(space, tuple(out))

    @classmethod
    def zero(cls, space: FiniteMetricSpace) -> "LipFunction":
        return cls(space, (Fraction(0),) * space.n)

    @classmethod
    def indicator(cls, space: FiniteMetricSpace, x: PointId) -> "LipFunction":
        if x == space.base_index:
            raise ValueError("the indicator of the base point is not in Lip_0")
        return cls(space, tuple(Fraction(int(v == x)) for v in space.points()))

    @classmethod
    def distance_to(cls, space: FiniteMetricSpace, q: PointId) -> "LipFunction":
        """``x -> d(x, q) - d(base, q)``."""
        dq = space.dist[space.base_index][q]
        return cls(space, tuple(space.dist[x][q] - dq for x in space.points()))

    def __call__(self, x: PointId) -> Fraction:
        return self.values[x]

    def __eq__(self, other):
        if not isinstance(other, LipFunction):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __add__(self, other: "LipFunction") -> "LipFunction":
        _same_space(self.space, other.space)
        return LipFunction(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "LipFunction") -> "LipFunction":
        _same_space(self.space, other.space)
        return LipFunction(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, scalar) -> "LipFunction":
        s = Fraction(scalar)
        return LipFunction(self.space, tuple(s * v for v in self.values))

    __rmul__ = __mul__

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def __repr__(self):
        return "LipFunction(" + ", ".join(f"{l}={v}" for l, v in zip(self.space.labels, self.values)) + ")"


@dataclass(frozen=True)
class Molecule:
    p: PointId
    q: PointId

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("a molecule needs two distinct points")

    def element(self, space: FiniteMetricSpace) -> FreeElement:
        return molecule_element(space, self.p, self.q)


def delta(space: FiniteMetricSpace, x: PointId) -> FreeElement:
    return FreeElement(space, {x: 1})


def pairing(mu: FreeElement, f: LipFunction) -> Fraction:
    _same_space(mu.space, f.space)
    return sum((v * f.values[x] for x, v in mu.coeffs.items()), Fraction(0))


def molecule_element(M: FiniteMetricSpace, p: PointId, q: PointId) -> FreeElement:
    if p == q:
        raise ValueError("a molecule needs two distinct points")
    w = 1 / M.dist[p][q]
    return FreeElement(M, {p: w, q: -w})


def lip_norm(f: LipFunction) -> Fraction:
    M, v = f.space, f.values
    return max(((v[x] - v[y]) / M.dist[x][y] for x, y in M.ordered_pairs()), default=Fraction(0))


def lipschitz_constraints(M: FiniteMetricSpace, col: Mapping[PointId, int], width: int):
    """Rows ``f(x) - f(y) <= d(x, y)`` over all ordered pairs, base coordinate eliminated."""
    rows = []
    for x, y in M.ordered_pairs():
        r = [0] * width
        if x in col:
            r[col[x]] += 1
        if y in col:
            r[col[y]] -= 1
        rows.append((tuple(r), M.dist[x][y]))
    return rows


def norm_dual(mu: FreeElement) -> tuple[Fraction, LipFunction]:
    """``max <mu, f>`` over 1-Lipschitz ``f`` vanishing at the base, with a maximizer."""
    M = mu.space
    if M.n == 1 or not mu.coeffs:
        return Fraction(0), LipFunction.zero(M)
    nb = M.non_base()
    col = {x: i for i, x in enumerate(nb)}
    obj = tuple(mu.coeffs.get(x, Fraction(0)) for x in nb)
    sol = solve(LinearProgram(obj, tuple(lipschitz_constraints(M, col, len(nb))), (), len(nb)))
    if not sol.optimal:  # pragma: no cover - the Lipschitz ball is compact
        raise RuntimeError(f"dual norm LP returned {sol.status.value}")
    values = [Fraction(0)] * M.n
    for x, i in col.items():
        values[x] = sol.point[i]
    return sol.value, LipFunction(M, tuple(values))


def norm_primal(mu: FreeElement) -> tuple[Fraction, dict[tuple[PointId, PointId], Fraction]]:
    """Min-cost transport of ``mu`` with the base point absorbing any imbalance.

    Returns the optimal cost and a flow ``{(x, y): t}`` with ``t > 0``; the
    flow represents ``mu = sum t_xy (delta(x) - delta(y))``.
    """
    M = mu.space
    if not mu.coeffs:
        return Fraction(0), {}
    arcs = list(M.ordered_pairs())
    k = len(arcs)
    eq = []
    for x in M.non_base():
        r = [0] * k
        for j, (a, b) in enumerate(arcs):
            if a == x:
                r[j] += 1
            elif b == x:
                r[j] -= 1
        eq.append((tuple(r), mu.coeffs.get(x, Fraction(0))))
    obj = tuple(-M.dist[a][b] for a, b in arcs)
    sol = solve(LinearProgram(obj, (), tuple(eq), k, frozenset(range(k))))
    if not sol.optimal:  # pragma: no cover - base point makes every demand feasible
        raise RuntimeError(f"transport LP returned {sol.status.value}")
    flow = {arc: t for arc, t in zip(arcs, sol.point) if t}
    return -sol.value, flow


def norm(mu: FreeElement) -> Fraction:
    return norm_dual(mu)[0]


def support(mu: FreeElement) -> frozenset[PointId]:
    """Points carrying a nonzero coefficient; the base point is never reported."""
    return frozenset(mu.coeffs)


def _check_contains_base(M: FiniteMetricSpace, K: Iterable[PointId]) -> frozenset[PointId]:
    K = frozenset(K)
    if M.base_index not in K:
        raise ValueError("subspace index sets must contain the base point")
    return K


def in_subspace(mu: FreeElement, K: Iterable[PointId], method: str = "support") -> bool:
    """Whether ``mu`` lies in the free space over ``K``.

    ``method="support"`` tests ``support(mu) <= K``. ``method="annihilator"``
    tests that ``mu`` pairs to zero with every function vanishing on ``K``,
    using the indicators of points outside ``K``, which span those functions.
    """
    M = mu.space
    K = _check_contains_base(M, K)
    if method == "support":
        return support(mu) <= K
    if method == "annihilator":
        return all(pairing(mu, LipFunction.indicator(M, x)) == 0 for x in M.points() if x not in K)
    raise ValueError(f"unknown method {method!r}")


def subspace_intersection(
    M: FiniteMetricSpace, Ks: Sequence[Iterable[PointId]], check: Iterable[FreeElement] = ()
) -> frozenset[PointId]:
    """Intersection of index sets, self-checked on ``check`` plus every ``delta(x)``.

    For each checked element, membership in all ``F(K_i)`` must coincide with
    membership in ``F(intersection)``; both sides use the annihilator test.
    """
    Ks = [_check_contains_base(M, K) for K in Ks]
    if not Ks:
        raise ValueError("empty family of subsets")
    common = frozenset.intersection(*Ks)
    probes = [delta(M, x) for x in M.non_base()] + list(check)
    for mu in probes:
        everywhere = all(in_subspace(mu, K, "annihilator") for K in Ks)
        if everywhere != in_subspace(mu, common, "annihilator"):
            raise BoundViolation(f"intersection property fails for {mu!r}")
    return common


def weight_element(mu: FreeElement, g: LipFunction) -> FreeElement:
    """The element ``f -> <mu, f g>``, i.e. ``sum a_x g(x) delta(x)``."""
    _same_space(mu.space, g.space)
    return FreeElement(mu.space, {x: v * g.values[x] for x, v in mu.coeffs.items()})


def product_function(f: LipFunction, g: LipFunction) -> LipFunction:
    """Pointwise product, checked against the Leibniz-type Lipschitz bound."""
    _same_space(f.space, g.space)
    fg = LipFunction(f.space, tuple(a * b for a, b in zip(f.values, g.values)))
    lf, lg, lfg = lip_norm(f), lip_norm(g), lip_norm(fg)
    leibniz = lf * g.sup_norm() + lg * f.sup_norm()
    if not lfg <= leibniz <= 2 * diameter(f.space) * lf * lg:
        raise BoundViolation(f"product bound fails: {lfg} <= {leibniz} <= 2 diam {lf} {lg}")
    return fg
