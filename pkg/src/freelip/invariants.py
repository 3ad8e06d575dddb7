"""Property checks run by ``freelip verify``.

Each check returns human-readable failure strings; an empty list means the
space passed. Random inputs come from a caller-supplied ``random.Random``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .extremal import (
    d_pq,
    de_leeuw,
    exposing_functional,
    exposure_ratio,
    molecule_face,
    oracle_extreme,
    strongly_exposed_constant,
    verify_dpq_on_segment,
    verify_face_on_segment,
)
from .freespace import (
    BoundViolation,
    FreeElement,
    LipFunction,
    delta,
    in_subspace,
    lip_norm,
    molecule_element,
    norm_dual,
    norm_primal,
    pairing,
    product_function,
    subspace_intersection,
    support,
    weight_element,
)
from .metric import FiniteMetricSpace, diameter, gap, is_ultrametric, segment

GENERATOR_KINDS = ("random", "ultrametric", "tree")


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 4))


def random_element(M: FiniteMetricSpace, rng: random.Random) -> FreeElement:
    pts = M.non_base()
    chosen = rng.sample(pts, rng.randint(0, len(pts))) if pts else []
    return FreeElement(M, {x: random_rational(rng) for x in chosen})


def random_function(M: FiniteMetricSpace, rng: random.Random) -> LipFunction:
    return LipFunction(M, tuple(Fraction(0) if x == M.base_index else random_rational(rng) for x in M.points()))


def random_subset(M: FiniteMetricSpace, rng: random.Random) -> frozenset[int]:
    return frozenset(x for x in M.points() if x == M.base_index or rng.random() < 0.5)


@dataclass
class SuiteResult:
    failures: list[str] = field(default_factory=list)
    pairs: int = 0
    extreme_pairs: int = 0
    max_constant: Optional[Fraction] = None

    def record_constant(self, c: Fraction) -> None:
        if self.max_constant is None or c > self.max_constant:
            self.max_constant = c


def check_pairs(M: FiniteMetricSpace, result: SuiteResult, oracle: bool = True, kind: Optional[str] = None) -> None:
    for p, q in M.ordered_pairs():
        tag = f"pair ({M.labels[p]},{M.labels[q]})"
        result.pairs += 1
        trivial = segment(M, p, q) == {p, q}
        result.extreme_pairs += trivial
        c = strongly_exposed_constant(M, p, q)
        if (c is not None) != trivial:
            result.failures.append(f"{tag}: strong exposure disagrees with segment criterion")
        if c is not None:
            x_star = None
            for x in M.points():
                if x in (p, q):
                    continue
                if min(M.dist[x][p], M.dist[x][q]) > c * gap(M, x, p, q):
                    result.failures.append(f"{tag}: inequality fails at C*={c}")
                if exposure_ratio(M, x, p, q) == c:
                    x_star = x
            if x_star is not None and c > 0:
                lower = c - Fraction(1, 1000)
                if min(M.dist[x_star][p], M.dist[x_star][q]) <= lower * gap(M, x_star, p, q):
                    result.failures.append(f"{tag}: C*={c} is not optimal")
            if kind in ("ultrametric", "tree"):
                result.record_constant(c)
        if kind == "ultrametric" and (not trivial or c is None or c > 1):
            result.failures.append(f"{tag}: ultrametric bound C <= 1 fails (C*={c})")
        if kind == "tree" and trivial and c > Fraction(1, 2):
            result.failures.append(f"{tag}: tree bound C <= 1/2 fails (C*={c})")
        ef = exposing_functional(M, p, q)
        if ef is not None:
            if lip_norm(ef) > 1 or de_leeuw(ef, p, q) != 1:
                result.failures.append(f"{tag}: exposing functional is not norming")
            if any(de_leeuw(ef, x, y) >= 1 for x, y in M.ordered_pairs() if (x, y) != (p, q)):
                result.failures.append(f"{tag}: exposing functional does not separate")
        if oracle:
            o = oracle_extreme(M, p, q)
            if o != trivial:
                result.failures.append(f"{tag}: oracle says {o}, segment criterion says {trivial}")
            if (ef is not None) != o:
                result.failures.append(f"{tag}: exposedness disagrees with oracle")
        dp = d_pq(M, p, q)
        if not {(p, q), (q, p)} <= dp or dp != {(y, x) for x, y in dp}:
            result.failures.append(f"{tag}: d_pq misses (p,q)/(q,p) or is not swap-closed")
        if not verify_dpq_on_segment(M, p, q):
            result.failures.append(f"{tag}: d_pq leaves the segment")
        if not verify_face_on_segment(M, p, q):
            result.failures.append(f"{tag}: face leaves the segment")
        if trivial and molecule_face(M, p, q) != {(p, q)}:
            result.failures.append(f"{tag}: trivial segment but face is larger than {{u_pq}}")


def check_norms(M: FiniteMetricSpace, rng: random.Random, trials: int, result: SuiteResult) -> None:
    for x in M.non_base():
        if norm_dual(delta(M, x))[0] != M.dist[x][M.base_index]:
            result.failures.append(f"||delta({M.labels[x]})|| != d(x, base)")
    for p, q in M.ordered_pairs():
        if norm_dual(molecule_element(M, p, q))[0] != 1:
            result.failures.append(f"||u_({M.labels[p]},{M.labels[q]})|| != 1")
    for _ in range(trials):
        mu = random_element(M, rng)
        dual, f = norm_dual(mu)
        primal, _ = norm_primal(mu)
        if dual != primal:
            result.failures.append(f"duality gap for {mu!r}: primal {primal}, dual {dual}")
        if lip_norm(f) > 1 or pairing(mu, f) != dual:
            result.failures.append(f"dual witness invalid for {mu!r}")


def check_algebra(M: FiniteMetricSpace, rng: random.Random, trials: int, result: SuiteResult) -> None:
    diam = diameter(M)
    for _ in range(trials):
        mu = random_element(M, rng)
        K1, K2 = random_subset(M, rng), random_subset(M, rng)
        both = in_subspace(mu, K1) and in_subspace(mu, K2)
        if both != in_subspace(mu, K1 & K2):
            result.failures.append(f"intersection property fails for {mu!r}")
        for K in (K1, K2):
            if in_subspace(mu, K, "annihilator") != (support(mu) <= K):
                result.failures.append(f"annihilator and support tests disagree for {mu!r}")
        f, g = random_function(M, rng), random_function(M, rng)
        try:
            subspace_intersection(M, [K1, K2], [mu])
            fg = product_function(f, g)
        except BoundViolation as e:
            result.failures.append(str(e))
            continue
        wg = weight_element(mu, g)
        if pairing(wg, f) != pairing(mu, fg):
            result.failures.append("weighted element pairing fails")
        if norm_dual(wg)[0] > 2 * diam * norm_dual(mu)[0] * lip_norm(g):
            result.failures.append("weighted element norm bound fails")


def check_space(
    M: FiniteMetricSpace,
    rng: random.Random,
    trials: int = 5,
    oracle: bool = True,
    kind: Optional[str] = None,
) -> SuiteResult:
    result = SuiteResult()
    if kind == "ultrametric" and not is_ultrametric(M):
        result.failures.append("generated space is not ultrametric")
    check_pairs(M, result, oracle, kind)
    check_norms(M, rng, trials, result)
    check_algebra(M, rng, trials, result)
    return result
