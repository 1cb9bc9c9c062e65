import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from qsigma import fps, qkernel
from qsigma.errors import ContextError, NotAUnitError, PreconditionError, WeightError
from qsigma.fps import EPS, Monomial

from strategies import CTX, ORDER, series


def test_rationals_are_exact_and_reduced():
    r = fps.as_rational("-6/4")
    assert (r.numerator, r.denominator) == (-3, 2)
    assert fps.format_rational(r) == "-3/2"
    assert fps.as_rational(mpq(1, 3)) * 3 == 1
    with pytest.raises(TypeError):
        fps.as_rational(0.5)


# -- contexts ------------------------------------------------------------------------
def test_minimal_context():
    ctx = fps.make_context({"q": 1}, 10)
    assert ctx.names == ("q",)
    assert ctx.order == 10


def test_context_with_dual_variable():
    ctx = fps.make_context({"q": 1, "c": 1, EPS: (0, 2)}, 20)
    assert ctx.names == ("q", "c", EPS)
    assert ctx.var(EPS).nilpotency == 2


def test_weight_zero_needs_nilpotency():
    with pytest.raises(ContextError):
        fps.make_context({"q": 1, "c": 0}, 10)


def test_duplicate_and_bad_order_rejected():
    with pytest.raises(ContextError):
        fps.make_context([("c", 1), ("c", 1)], 10)
    with pytest.raises(ContextError):
        fps.make_context({}, 0)


# -- constructors ---------------------------------------------------------------------
def test_constants(qctx):
    assert fps.constant(qctx, 0).terms == {}
    half = fps.constant(qctx, mpq(-1, 2))
    assert half.constant_term() == mpq(-1, 2)
    one = fps.constant(qctx, 1)
    q = fps.variable(qctx, "q")
    assert one * q == q


def test_variables(dual_ctx):
    e = fps.variable(dual_ctx, EPS)
    assert (e * e).terms == {}
    assert fps.coefficient(fps.variable(dual_ctx, "q"), {"q": 1}) == 1
    with pytest.raises(ContextError):
        fps.variable(dual_ctx, "w")


def test_add_sub(qctx):
    q = fps.variable(qctx, "q")
    a = 1 + 3 * q * q
    assert a + fps.zero(qctx) == a
    assert (a + (-a)).terms == {}
    assert (1 + q) + (1 - q) == fps.constant(qctx, 2)


def test_context_mismatch(qctx, dual_ctx):
    with pytest.raises(ContextError):
        fps.add(fps.variable(qctx, "q"), fps.variable(dual_ctx, "q"))


def test_mul_examples(qctx):
    q = fps.variable(qctx, "q")
    geom = sum((q ** k for k in range(qctx.order + 1)), fps.zero(qctx))
    assert (1 - q) * geom == fps.constant(qctx, 1)
    assert (1 - q) * (1 - q * q) == 1 - q - q ** 2 + q ** 3


def test_invert_examples(qctx, dual_ctx):
    q = fps.variable(qctx, "q")
    assert fps.invert(fps.constant(qctx, 1)) == fps.constant(qctx, 1)
    inv = fps.invert(1 - q)
    assert inv.q_coefficients() == [1] * (qctx.order + 1)
    e = fps.variable(dual_ctx, EPS)
    assert fps.invert(1 + e) == 1 - e
    with pytest.raises(NotAUnitError):
        fps.invert(q)


def test_substitute_q_power(qctx):
    q = fps.variable(qctx, "q")
    assert fps.substitute_q_power(1 + q, 2) == 1 + q * q
    d = qkernel.d_series(qctx)
    assert fps.substitute_q_power(d, 1) == d
    d2 = qkernel.d_series(qctx, 2)
    assert fps.equal_up_to(fps.substitute_q_power(d, 2), d2, qctx.order)
    with pytest.raises(ContextError):
        fps.substitute_q_power(fps.variable(CTX, "c"), 2)


def test_substitute_var():
    ctx = fps.make_context({"c": 1, "t": 1}, 8)
    c, t, q = (fps.variable(ctx, n) for n in ("c", "t", "q"))
    s = 1 + c + c * q + t * t
    assert fps.substitute_var(s, "c", 0) == 1 + t * t
    assert fps.substitute_var(s, "t", q * mpq(1, 2)) == 1 + c + c * q + q * q / 4
    with pytest.raises(WeightError):
        fps.substitute_var(s, "c", 1)


def test_coefficient(qctx):
    q = fps.variable(qctx, "q")
    assert fps.coefficient(1 + 2 * q ** 3, {"q": 3}) == 2
    assert fps.coefficient(fps.zero(qctx), Monomial.of(q=5)) == 0
    with pytest.raises(ContextError):
        fps.coefficient(q, {"w": 1})


def test_project_epsilon_examples(dual_ctx):
    z = fps.add_scalar(fps.variable(dual_ctx, EPS), 1)
    one = fps.constant(dual_ctx, 1)
    assert fps.project_epsilon(z * z) == (one, fps.constant(dual_ctx, 2))
    assert fps.project_epsilon(fps.invert(z)) == (one, fps.constant(dual_ctx, -1))
    with pytest.raises(ContextError):
        fps.project_epsilon(fps.constant(fps.make_context({}, 3), 1))


def _poly_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("K", [1, 3, 6])
def test_project_epsilon_product_rule(K):
    # oracle: -(q)_K * sum_k q^k/(1-q^k), with integer coefficient lists
    N = 12
    ctx = fps.make_context({EPS: (0, 2)}, N)
    q = fps.variable(ctx, "q")
    z = fps.add_scalar(fps.variable(ctx, EPS), 1)
    prod = fps.constant(ctx, 1)
    for k in range(1, K + 1):
        prod = prod * (1 - z * q ** k)
    f_eps = fps.project_epsilon(prod)[1]

    qk = [1] + [0] * N
    for k in range(1, K + 1):
        qk = _poly_mul(qk, [1] + [0] * (k - 1) + [-1], N)
    lam = [0] * (N + 1)
    for k in range(1, K + 1):
        for m in range(k, N + 1, k):
            lam[m] += 1
    want = [-x for x in _poly_mul(qk, lam, N)]
    assert f_eps.q_coefficients() == want


def test_equal_up_to_examples(qctx):
    q = fps.variable(qctx, "q")
    a = 1 + q
    assert fps.equal_up_to(a, a, qctx.order)
    rep = fps.equal_up_to(fps.constant(qctx, 1), 1 + q ** qctx.order, qctx.order)
    assert not rep.equal
    assert str(rep.monomial) == f"q^{qctx.order}"
    assert (rep.lhs, rep.rhs) == (0, 1)


def test_least_mismatch_is_graded_lex():
    ctx = fps.make_context({"c": 1}, 5)
    q, c = fps.variable(ctx, "q"), fps.variable(ctx, "c")
    rep = fps.equal_up_to(q * c + c ** 2 + q ** 2, fps.zero(ctx), 5)
    assert str(rep.monomial) == "c^2"
    rep = fps.equal_up_to(c ** 3 + q, fps.zero(ctx), 5)
    assert str(rep.monomial) == "q"


def test_truncation_drops_high_weight(qctx):
    q = fps.variable(qctx, "q")
    assert (q ** 7 * q ** 6).terms == {}


def test_compare_beyond_known_precision_is_refused(qctx):
    q = fps.variable(qctx, "q")
    low = fps.truncate(1 + q, 3)
    with pytest.raises(PreconditionError):
        fps.equal_up_to(low, 1 + q, 5)


# -- properties ------------------------------------------------------------------------
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == fps.zero(CTX)


@given(series(unit=True))
def test_invert_soundness(a):
    assert a * fps.invert(a) == fps.constant(CTX, 1)


@given(series(), series())
def test_epsilon_squared_vanishes(a, b):
    e = fps.variable(CTX, EPS)
    prod = (e * a) * (e * b)
    assert prod.terms == {}


@given(series(), series(), st.integers(1, ORDER - 1))
def test_truncation_monotonicity(a, b, M):
    low = fps.make_context({"c": 1, EPS: (0, 2)}, M)
    ra = fps.from_terms(low, {m: r for m, r in a.as_dict().items()
                              if m.get("q") + m.get("c") <= M})
    rb = fps.from_terms(low, {m: r for m, r in b.as_dict().items()
                              if m.get("q") + m.get("c") <= M})
    hi = fps.truncate(a * b, M)
    assert {m: r for m, r in hi.as_dict().items()} == (ra * rb).as_dict()


@given(series(), series(), st.builds(mpq, st.integers(-5, 5), st.integers(1, 5)))
def test_epsilon_linear_and_leibniz(a, b, r):
    a1, ae = fps.project_epsilon(a)
    b1, be = fps.project_epsilon(b)
    assert fps.project_epsilon(a + b * r)[1] == ae + be * r
    assert fps.project_epsilon(a * b)[1] == a1 * be + ae * b1


@given(series())
def test_projection_reassembles(a):
    f1, fe = fps.project_epsilon(a)
    assert f1 + fe * fps.variable(CTX, EPS) == a
