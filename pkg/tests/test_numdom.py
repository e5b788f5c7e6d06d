import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datesafe.numdom import FALSE, Const, ProductState, Var, evaluate, holds, is_one_of, linearize
from datesafe.numdom.grid import Grid

x, y, z = Var("x"), Var("y"), Var("z")
VARS = ("x", "y", "z")


def test_lattice_constants():
    assert ProductState.bottom_state().is_bottom()
    assert not ProductState.top(["x"]).is_bottom()
    assert ProductState.top(["x"]).assume((x < 0) & (x > 0)).is_bottom()
    assert ProductState.top(["x"]).assume(FALSE).is_bottom()
    s = ProductState.top(["x"]).assume(x.eq(3))
    assert ProductState.bottom_state(["x"]).leq(s)
    assert not s.leq(ProductState.bottom_state(["x"]))


def test_linearize():
    assert linearize(2 * x - (y + 3)) == ({"x": 2, "y": -1}, -3)
    assert linearize(x * y) is None


def test_day_over_29_in_february():
    day, rm = Var("day"), Var("rm")
    s = ProductState.top(["day", "rm"]).assume((day >= 1) & (day <= 31))
    assert s.assume((day > 29) & rm.eq(2)).interval_of("day") == (30, 31)


def _month_step():
    m, rm = Var("m"), Var("rm")
    s = ProductState.top(["m", "rm", "yr", "ry"]).assume((m >= 1) & (m <= 12))
    return s.assign("rm", 1 + (m - 1 + 1) % 12)


def test_month_plus_one_lands_in_thirty_day_month():
    s = _month_step().assume(is_one_of(Var("rm"), [4, 6, 9, 11]))
    assert s.set_of("m") == frozenset({3, 5, 8, 10})


def test_month_plus_one_congruence():
    assert _month_step().grid.entails({"rm": 1, "m": -1}, 1, 12)


def test_year_carry_bounds():
    m, yr, ry = Var("m"), Var("yr"), Var("ry")
    s = _month_step().assign("ry", yr + (m - 1 + 1) // 12)
    assert s.entails(12 * yr + m <= 12 * ry + 11)
    assert s.entails(12 * ry <= 12 * yr + m + 1)


def test_assign_then_assume():
    v = Var("v")
    s = ProductState.top(["v", "x"]).assign("v", x + 1).assume(x.eq(5))
    assert s.interval_of("v") == (6, 6)


def test_join_of_constants():
    a = ProductState.top(["x"]).assume(x.eq(1))
    b = ProductState.top(["x"]).assume(x.eq(3))
    j = a.join(b)
    assert j.interval_of("x") == (1, 3)
    assert j.set_of("x") == frozenset({1, 3})
    assert j.cong_of("x") == (2, 1)
    assert a.leq(j) and b.leq(j) and not j.leq(a)


def test_project_eliminates():
    p = ProductState.top(["x", "y"]).assume(x.eq(y + 2) & (y >= 0) & (y <= 5)).project(["x"])
    assert p.interval_of("x") == (2, 7)
    assert "y" not in " ".join(p.render())


def test_rename_and_meet():
    s = ProductState.top(["x", "y"]).assume(x.eq(y + 1) & (y >= 0) & (y <= 3))
    r = s.rename({"x": "z"})
    assert r.entails(z.eq(y + 1))
    m = s.meet(ProductState.top(["x", "y"]).assume(y >= 3))
    assert m.constant("x") == 4


def test_set_widens_past_k():
    s = ProductState.top(["x"]).assume(is_one_of(x, [1, 5, 9, 13, 17]))
    assert s.set_of("x") is None
    assert s.interval_of("x") == (1, 17)
    assert s.cong_of("x") == (4, 1)


def test_render_congruence():
    s = ProductState.top(["x"]).assume_cong(x, 0, 4)
    assert "x =[4] 0" in s.render()


@pytest.mark.parametrize("a", range(-100, 101))
def test_floor_division_contract(a):
    for k in range(1, 13):
        q = evaluate(Const(a) // k, {})
        r = evaluate(Const(a) % k, {})
        assert a == q * k + r and 0 <= r < k
        assert (q, r) == divmod(a, k)
        s = ProductState.top(["x", "q", "r"]).assume(x.eq(a)).assign("q", x // k).assign("r", x % k)
        assert (s.constant("q"), s.constant("r")) == (q, r)


def test_floor_division_abstract():
    # every (a, a div k, a mod k) with a in a range is a member of the abstract result
    for k in (3, 4, 12):
        s = ProductState.top(["x", "q", "r"]).assume((x >= -30) & (x <= 30)).assign("q", x // k).assign("r", x % k)
        for a in range(-30, 31):
            assert s.member({"x": a, "q": a // k, "r": a % k})
        assert not s.member({"x": 5, "q": 5 // k, "r": 5 % k + 1})


# --- grid ---------------------------------------------------------------------


def test_grid_equality_fact():
    s = ProductState.top(["a", "b"]).assume(Var("a").eq(Var("b") + 2))
    assert s.entails(Var("a") - Var("b") <= 2) and s.entails(Var("a") - Var("b") >= 2)


# --- random soundness ---------------------------------------------------------

BOX = range(-3, 4)

var_names = st.sampled_from(VARS)


def _affine():
    return st.builds(
        lambda a, v, b, w, c: a * Var(v) + b * Var(w) + c,
        st.integers(-3, 3), var_names, st.integers(-2, 2), var_names, st.integers(-5, 5),
    )


exprs = st.one_of(
    _affine(),
    st.builds(lambda e, k: e % k, _affine(), st.integers(1, 12)),
    st.builds(lambda e, k: e // k, _affine(), st.integers(1, 12)),
    st.builds(lambda e, k: 1 + e % k, _affine(), st.integers(2, 12)),
)

OPS = ("<", "<=", ">", ">=", "==", "!=")

atoms = st.one_of(
    st.builds(lambda e, op, c: getattr(e, {"<": "__lt__", "<=": "__le__", ">": "__gt__", ">=": "__ge__", "==": "eq", "!=": "ne"}[op])(c), exprs, st.sampled_from(OPS), st.integers(-6, 6)),
    st.builds(lambda v, vals: is_one_of(Var(v), vals), var_names, st.lists(st.integers(-6, 12), min_size=1, max_size=6)),
)
conds = st.recursive(atoms, lambda c: st.one_of(st.builds(lambda a, b: a & b, c, c), st.builds(lambda a, b: a | b, c, c), st.builds(lambda a: ~a, c)), max_leaves=4)

ops = st.lists(
    st.one_of(
        st.tuples(st.just("assign"), var_names, exprs),
        st.tuples(st.just("assume"), conds),
        st.tuples(st.just("forget"), var_names),
    ),
    max_size=6,
)


def _run(prog):
    s = ProductState.top(VARS)
    envs = [dict(zip(VARS, p)) for p in itertools.product(BOX, repeat=3)]
    s = s.assume(conds_box())
    for op in prog:
        if op[0] == "assign":
            _, v, e = op
            s = s.assign(v, e)
            envs = [{**env, v: evaluate(e, env)} for env in envs]
        elif op[0] == "assume":
            s = s.assume(op[1])
            envs = [env for env in envs if holds(op[1], env)]
        else:
            s = s.forget(op[1])
            # the forgotten variable may now take any value; keep a few
            envs = [{**env, op[1]: k} for env in envs for k in (-7, 0, 7)]
    return s, envs


def conds_box():
    c = None
    for v in VARS:
        a = (Var(v) >= BOX[0]) & (Var(v) <= BOX[-1])
        c = a if c is None else c & a
    return c


@settings(max_examples=300)
@given(ops)
def test_soundness_against_enumeration(prog):
    s, envs = _run(prog)
    for env in envs:
        assert s.member(env), (env, s.render())


@settings(max_examples=150)
@given(ops)
def test_reduce_keeps_members(prog):
    s, envs = _run(prog)
    r = s.reduce()
    for env in envs:
        assert r.member(env)


@settings(max_examples=150)
@given(ops, conds)
def test_leq_is_gamma_monotone(prog, c):
    s, envs = _run(prog)
    t = s.assume(c)
    assert t.leq(s)
    for env in envs:
        if t.member(env):
            assert s.member(env)


@settings(max_examples=150)
@given(ops, ops)
def test_join_covers_both(p1, p2):
    s1, e1 = _run(p1)
    s2, e2 = _run(p2)
    j = s1.join(s2)
    assert s1.leq(j) and s2.leq(j)
    for env in e1 + e2:
        assert j.member(env)
