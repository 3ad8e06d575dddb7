import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freelip.exactlp import (
    LinearProgram,
    LPError,
    Status,
    StructuralError,
    convex_weights,
    feasible,
    functional_range,
    in_convex_hull,
    solve,
)


def satisfies(lp, x):
    ok_in = all(sum(a * v for a, v in zip(r, x)) <= b for r, b in lp.ineq_constraints)
    ok_eq = all(sum(a * v for a, v in zip(r, x)) == b for r, b in lp.eq_constraints)
    ok_nn = all(x[i] >= 0 for i in lp.nonneg)
    return ok_in and ok_eq and ok_nn


def test_single_bound():
    sol = solve(LinearProgram((1,), (((1,), F(3, 2)),)))
    assert sol.status is Status.OPTIMAL
    assert sol.value == F(3, 2) and sol.point == (F(3, 2),)


def test_contradictory_bounds():
    assert solve(LinearProgram((1,), (((1,), 1), ((-1,), -2)))).status is Status.INFEASIBLE


def test_colinear_norm_lp():
    # |f(a)| <= 1, |f(b)| <= 2, |f(b) - f(a)| <= 1
    rows = [((1, 0), 1), ((-1, 0), 1), ((0, 1), 2), ((0, -1), 2), ((-1, 1), 1), ((1, -1), 1)]
    sol = solve(LinearProgram((1, 1), rows))
    assert sol.value == 3 and sol.point == (1, 2)


def test_unbounded():
    assert solve(LinearProgram((1,), (((-1,), 0),))).status is Status.UNBOUNDED


def test_equality_only():
    sol = solve(LinearProgram((1, 1), (), (((1, -1), 1), ((1, 1), 5)), nonneg={0, 1}))
    assert sol.value == 5 and sol.point == (3, 2)


def test_redundant_equalities_dropped():
    sol = solve(LinearProgram((1, 0), (((1, 0), 4),), (((1, 1), 2), ((2, 2), 4))))
    assert sol.value == 4 and sol.point == (4, -2)


def test_structural_errors():
    with pytest.raises(StructuralError):
        LinearProgram((1, 2), (((1,), 1),))
    with pytest.raises(StructuralError):
        LinearProgram((1,), (), (), 2)
    with pytest.raises(StructuralError):
        LinearProgram((1,), nonneg={3})
    with pytest.raises(TypeError):
        LinearProgram((0.5,))
    with pytest.raises(StructuralError):
        feasible([((1, 0), 1), ((1,), 1)])


def test_feasible_examples():
    assert feasible([((1,), 1)])
    assert not feasible([((1,), 0), ((-1,), -1)])


def test_beale_cycling_example_terminates():
    # classic instance on which Dantzig's rule cycles; optimum -5/4 at (1, 0, 1, 0)
    c = (F(3, 4), -20, F(1, 2), -6)
    rows = [
        ((F(1, 4), -8, -1, 9), 0),
        ((F(1, 2), -12, F(-1, 2), 3), 0),
        ((0, 0, 1, 0), 1),
    ]
    sol = solve(LinearProgram(c, rows, nonneg={0, 1, 2, 3}))
    assert sol.value == F(5, 4)
    assert sol.point == (1, 0, 1, 0)


def test_degenerate_vertex():
    # many constraints through the optimum (0, 0)
    rows = [((1, k), 0) for k in range(-3, 4)] + [((-1, 0), 1)]
    sol = solve(LinearProgram((1, 0), rows))
    assert sol.value == 0


def test_convex_hull_examples():
    gens = [(0, 0), (2, 0), (0, 2)]
    assert in_convex_hull((0, 0), gens)
    assert in_convex_hull((1, 1), gens)
    assert not in_convex_hull((3, 3), gens)
    assert not in_convex_hull((-1, 0), gens)
    w = convex_weights((F(1, 2), F(1, 2)), gens)
    assert sum(w) == 1 and all(v >= 0 for v in w)
    assert tuple(sum(l * g[i] for l, g in zip(w, gens)) for i in range(2)) == (F(1, 2), F(1, 2))
    with pytest.raises(StructuralError):
        in_convex_hull((0,), [])
    with pytest.raises(StructuralError):
        in_convex_hull((0, 0), [(1,)])


def test_functional_range():
    assert functional_range((1,), [((1,), 1), ((-1,), 0)]) == (0, 1)
    with pytest.raises(LPError):
        functional_range((1,), [((1,), 1)])
    with pytest.raises(LPError):
        functional_range((1,), [((1,), 0), ((-1,), -1)])


def _random_bounded_lp(rng, n, m):
    """Box ``|x_i| <= B`` plus random rows; always feasible at 0 and bounded."""
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), rng.randint(1, 5)))
        e = [0] * n
        e[i] = -1
        rows.append((tuple(e), rng.randint(1, 5)))
    for _ in range(m):
        rows.append((tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)), rng.randint(0, 6)))
    c = tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n))
    return c, rows


@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 5))
@settings(max_examples=60, deadline=None)
def test_strong_duality_and_exactness(seed, n, m):
    rng = random.Random(seed)
    c, rows = _random_bounded_lp(rng, n, m)
    primal = solve(LinearProgram(c, rows))
    assert primal.optimal
    assert satisfies(LinearProgram(c, rows), primal.point)
    assert sum(a * b for a, b in zip(c, primal.point)) == primal.value
    # dual: min b.y s.t. A^T y = c, y >= 0  ==  -max(-b.y)
    k = len(rows)
    eq = [(tuple(rows[j][0][i] for j in range(k)), c[i]) for i in range(n)]
    dual = solve(LinearProgram(tuple(-rows[j][1] for j in range(k)), (), eq, k, frozenset(range(k))))
    assert dual.optimal
    assert -dual.value == primal.value


@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_matches_scipy(seed, n, m):
    linprog = pytest.importorskip("scipy.optimize").linprog
    rng = random.Random(seed)
    c, rows = _random_bounded_lp(rng, n, m)
    ours = solve(LinearProgram(c, rows))
    ref = linprog(
        [-float(v) for v in c],
        A_ub=[[float(v) for v in r] for r, _ in rows],
        b_ub=[float(b) for _, b in rows],
        bounds=[(None, None)] * n,
        method="highs",
    )
    assert ref.status == 0
    assert abs(float(ours.value) + ref.fun) < 1e-7


def test_determinism():
    rng = random.Random(5)
    c, rows = _random_bounded_lp(rng, 4, 6)
    lp = LinearProgram(c, rows)
    assert solve(lp) == solve(lp)
