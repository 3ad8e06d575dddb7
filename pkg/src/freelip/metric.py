"""Finite pointed metric spaces with exact rational distances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "MetricAxiomError",
    "FiniteMetricSpace",
    "validate",
    "gap",
    "segment",
    "diameter",
    "is_ultrametric",
    "shortest_path_closure",
    "gen_random",
    "gen_ultrametric",
    "random_tree_edges",
    "gen_tree",
    "from_graph",
]

Label = str
PointId = int


class MetricAxiomError(ValueError):
    """A metric axiom fails; ``witness`` holds the offending labels."""

    def __init__(self, axiom: str, witness: tuple, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        msg = f"{axiom} at {tuple(witness)}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("distances must be exact (int or Fraction), not float")
    return Fraction(v)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labelled points, a base point index and a rational distance matrix.

    Construction checks every metric axiom and raises :class:`MetricAxiomError`
    naming the first violation.
    """

    labels: tuple[Label, ...]
    base_index: int
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        dist = tuple(tuple(_as_fraction(v) for v in row) for row in self.dist)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)
        _check_axioms(labels, self.base_index, dist)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def base(self) -> PointId:
        return self.base_index

    def d(self, x: PointId, y: PointId) -> Fraction:
        return self.dist[x][y]

    def index(self, label: Union[Label, int]) -> PointId:
        if isinstance(label, int) and not isinstance(label, bool):
            if not 0 <= label < self.n:
                raise IndexError(f"point index {label} out of range")
            return label
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    def points(self) -> range:
        return range(self.n)

    def non_base(self) -> list[PointId]:
        return [x for x in range(self.n) if x != self.base_index]

    def ordered_pairs(self) -> Iterator[tuple[PointId, PointId]]:
        return permutations(range(self.n), 2)

    def rebase(self, label: Union[Label, int]) -> "FiniteMetricSpace":
        """Same points and distances with another base point.

        Changing the base point is an isometry of the free spaces that maps
        molecules to molecules, so extremality verdicts are unchanged.
        """
        return FiniteMetricSpace(self.labels, self.index(label), self.dist)


def _check_axioms(labels, base, dist) -> None:
    n = len(labels)
    if n < 1:
        raise MetricAxiomError("empty space", ())
    seen = {}
    for i, lab in enumerate(labels):
        if lab in seen:
            raise MetricAxiomError("duplicate label", (lab,))
        seen[lab] = i
    if not isinstance(base, int) or not 0 <= base < n:
        raise MetricAxiomError("base point out of range", (base,))
    if len(dist) != n or any(len(row) != n for row in dist):
        raise MetricAxiomError("distance matrix is not square", (n,), f"expected {n}x{n}")
    for i in range(n):
        for j in range(n):
            if dist[i][j] < 0:
                raise MetricAxiomError("negative distance", (labels[i], labels[j]))
    for i in range(n):
        if dist[i][i] != 0:
            raise MetricAxiomError("nonzero diagonal", (labels[i],))
    for i in range(n):
        for j in range(n):
            if i != j and dist[i][j] == 0:
                raise MetricAxiomError("zero off-diagonal distance", (labels[i], labels[j]))
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                raise MetricAxiomError("asymmetry", (labels[i], labels[j]))
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if dist[x][z] > dist[x][y] + dist[y][z]:
                    raise MetricAxiomError(
                        "triangle violation",
                        (labels[x], labels[y], labels[z]),
                        f"d({labels[x]},{labels[z]}) > d({labels[x]},{labels[y]}) + d({labels[y]},{labels[z]})",
                    )


def validate(labels: Sequence, base: Union[Label, int], matrix: Sequence[Sequence]) -> FiniteMetricSpace:
    labels = tuple(str(x) for x in labels)
    if isinstance(base, int) and not isinstance(base, bool):
        base_index = base
    elif str(base) in labels:
        base_index = labels.index(str(base))
    else:
        raise MetricAxiomError("unknown base point", (base,))
    return FiniteMetricSpace(labels, base_index, tuple(tuple(r) for r in matrix))


def _distinct(p: PointId, q: PointId) -> None:
    if p == q:
        raise ValueError(f"need distinct points, got p = q = {p}")


def gap(M: FiniteMetricSpace, x: PointId, p: PointId, q: PointId) -> Fraction:
    """Triangle slack ``d(p,x) + d(q,x) - d(p,q)``; zero exactly on the segment."""
    _distinct(p, q)
    d = M.dist
    return d[p][x] + d[q][x] - d[p][q]


def segment(M: FiniteMetricSpace, p: PointId, q: PointId) -> frozenset[PointId]:
    _distinct(p, q)
    return frozenset(x for x in M.points() if gap(M, x, p, q) == 0)


def diameter(M: FiniteMetricSpace) -> Fraction:
    return max((v for row in M.dist for v in row), default=Fraction(0))


def is_ultrametric(M: FiniteMetricSpace) -> bool:
    d, n = M.dist, M.n
    return all(d[x][y] <= max(d[x][z], d[y][z]) for x in range(n) for y in range(n) for z in range(n))


def shortest_path_closure(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Floyd-Warshall; ``None`` entries mean "no edge"."""
    n = len(matrix)
    d = [[None if v is None else Fraction(v) for v in row] for row in matrix]
    for i in range(n):
        d[i][i] = Fraction(0)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                if dk[j] is not None and (di[j] is None or dik + dk[j] < di[j]):
                    di[j] = dik + dk[j]
    return d


def _labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def gen_random(n: int, seed: int, scale: int = 10) -> FiniteMetricSpace:
    """Random integer weights in ``[1, scale]`` closed under shortest paths."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if scale < 1:
        raise ValueError("scale must be >= 1")
    rng = random.Random(seed)
    w = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = rng.randint(1, scale)
    return FiniteMetricSpace(_labels(n), 0, tuple(map(tuple, shortest_path_closure(w))))


def gen_ultrametric(n: int, seed: int) -> FiniteMetricSpace:
    """Distances are merge heights of a random binary merge tree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    dist = [[Fraction(0)] * n for _ in range(n)]
    clusters = [[i] for i in range(n)]
    level = Fraction(0)
    while len(clusters) > 1:
        a, b = sorted(rng.sample(range(len(clusters)), 2))
        level += Fraction(rng.randint(1, 4), rng.randint(1, 3))
        for x in clusters[a]:
            for y in clusters[b]:
                dist[x][y] = dist[y][x] = level
        clusters[a] = clusters[a] + clusters.pop(b)
    return FiniteMetricSpace(_labels(n), 0, tuple(map(tuple, dist)))


def random_tree_edges(n: int, seed: int) -> list[tuple[Label, Label, Fraction]]:
    """Random recursive tree on ``n`` vertices rooted at ``"0"``."""
    if n < 2:
        raise ValueError("a tree space needs n >= 2")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        parent = rng.randrange(v)
        edges.append((str(parent), str(v), Fraction(rng.randint(1, 6), rng.randint(1, 2))))
    return edges


def gen_tree(n: int, seed: int) -> FiniteMetricSpace:
    """Path-length metric on every vertex of a random weighted tree; base = root."""
    edges = random_tree_edges(n, seed)
    adj: dict[int, list[tuple[int, Fraction]]] = {v: [] for v in range(n)}
    for a, b, w in edges:
        adj[int(a)].append((int(b), w))
        adj[int(b)].append((int(a), w))
    dist = []
    for src in range(n):
        row = [None] * n
        row[src] = Fraction(0)
        stack = [src]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                if row[v] is None:
                    row[v] = row[u] + w
                    stack.append(v)
        dist.append(tuple(row))
    return FiniteMetricSpace(_labels(n), 0, tuple(dist))


def from_graph(edges: Iterable[tuple], base: Label) -> FiniteMetricSpace:
    """Shortest-path metric of a connected graph with positive rational weights."""
    labels: list[str] = []
    index: dict[str, int] = {}
    parsed = []
    for a, b, w in edges:
        a, b, w = str(a), str(b), _as_fraction(w)
        if w <= 0:
            raise ValueError(f"non-positive weight {w} on edge ({a}, {b})")
        if a == b:
            raise ValueError(f"self-loop at {a}")
        for lab in (a, b):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        parsed.append((index[a], index[b], w))
    base = str(base)
    if base not in index:
        if labels:
            raise ValueError(f"base point {base!r} is not a vertex of the graph")
        labels, index = [base], {base: 0}
    n = len(labels)
    w = [[None] * n for _ in range(n)]
    for i, j, c in parsed:
        if w[i][j] is None or c < w[i][j]:
            w[i][j] = w[j][i] = c
    d = shortest_path_closure(w)
    if any(v is None for row in d for v in row):
        raise ValueError("graph is disconnected")
    return FiniteMetricSpace(tuple(labels), index[base], tuple(map(tuple, d)))
