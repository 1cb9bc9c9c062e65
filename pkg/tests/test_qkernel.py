import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from qsigma import fps, qkernel
from qsigma.errors import BoundViolationError, PreconditionError, WeightError
from qsigma.qkernel import SumBound

N = 20


@pytest.fixture
def ctx():
    return fps.make_context({}, N)


def q_of(ctx):
    return fps.variable(ctx, "q")


def test_poch_examples(ctx):
    q = q_of(ctx)
    assert qkernel.poch(ctx, mpq(3, 7), 0) == fps.constant(ctx, 1)
    assert qkernel.poch(ctx, q, 2) == 1 - q - q ** 2 + q ** 3
    for p in range(1, 5):
        assert qkernel.poch(ctx, -1, p).constant_term() == 2


def test_poch_base_q2(ctx):
    q = q_of(ctx)
    assert qkernel.poch(ctx, q, 3, step=2) == (1 - q) * (1 - q ** 3) * (1 - q ** 5)


def test_poch_inf_examples():
    ctx = fps.make_context({}, 5)
    q = q_of(ctx)
    assert qkernel.poch_inf(ctx, 0) == fps.constant(ctx, 1)
    assert qkernel.poch_inf(ctx, q) == 1 - q - q ** 2 + q ** 5
    assert qkernel.poch_inf(ctx, -q).q_coefficients() == [1, 1, 1, 2, 2, 3]


def _pentagonal(n):
    out = [0] * (n + 1)
    k = 0
    while True:
        hit = False
        for m in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2):
            if m <= n:
                out[m] = (-1) ** k
                hit = True
        if not hit:
            return out
        k += 1


def test_euler_product_matches_pentagonal_numbers(ctx):
    assert qkernel.poch_inf(ctx, q_of(ctx)).q_coefficients() == _pentagonal(N)


def test_poch_int(ctx):
    a = fps.monomial(ctx, {"q": 1}, mpq(2, 3))
    assert qkernel.poch_int(ctx, a, 3) == qkernel.poch(ctx, a, 3)
    assert qkernel.poch_int(ctx, a, 0) == fps.constant(ctx, 1)
    q = q_of(ctx)
    got = qkernel.poch_int(ctx, q ** 2, -1)
    # dividing by q loses one order of precision
    assert fps.equal_up_to(got, fps.invert(1 - q), got.order)
    assert got.order == N - 1
    with pytest.raises(WeightError):
        qkernel.poch_int(ctx, 2 * q, -2)
    with pytest.raises(PreconditionError):
        qkernel.poch_int(ctx, q, -2)


def test_qsum_examples(ctx):
    q = q_of(ctx)
    geo = qkernel.qsum(ctx, lambda n: q ** n, SumBound(lambda n: n))
    assert geo == fps.invert(1 - q)
    sig = qkernel.qsum(
        ctx,
        lambda n: fps.shift(fps.invert(qkernel.poch(ctx, -q, n)), {"q": n * (n + 1) // 2}),
        SumBound(lambda n: n * (n + 1) // 2),
    )
    assert sig.q_coefficients(4) == [1, 1, -1, 2, -2]
    with pytest.raises(BoundViolationError):
        qkernel.qsum(ctx, lambda n: q ** n, SumBound(lambda n: n + 1))


def test_qsum_multi_double_sum():
    ctx = fps.make_context({"c": 1}, 10)
    q, c = q_of(ctx), fps.variable(ctx, "c")

    def term(idx):
        m, n = idx
        return c ** m * q ** (m + n + 1)

    got = qkernel.qsum_multi(ctx, term, SumBound(lambda i: i[0] + i[1] + 1, (0, 0)))
    want = fps.zero(ctx)
    for m in range(11):
        for n in range(11):
            if 2 * m + n + 1 <= 10:
                want = want + c ** m * q ** (m + n + 1)
    assert got == want


def test_qsum_multi_constant_only(ctx):
    got = qkernel.qsum_multi(ctx, lambda i: fps.constant(ctx, 5) if i == (0, 0) else fps.zero(ctx),
                             SumBound(lambda i: (N + 1) * (i[0] + i[1]), (0, 0)))
    assert got == fps.constant(ctx, 5)


def test_phi_examples():
    ctx = fps.make_context({"b": 1, "t": 1}, 10)
    q, b, t = (fps.variable(ctx, n) for n in ("q", "b", "t"))
    assert qkernel.phi(ctx, [b], [], 0) == fps.constant(ctx, 1)
    c = mpq(1, 3)
    got = qkernel.phi(ctx, [0, b], [c], t)
    want = fps.zero(ctx)
    for n in range(11):
        want = want + qkernel.poch(ctx, b, n) * t ** n * fps.invert(
            qkernel.poch(ctx, q, n) * qkernel.poch(ctx, c, n))
    assert got == want
    with pytest.raises(WeightError):
        qkernel.phi(ctx, [b], [], mpq(1, 2))


def test_s_and_d(ctx):
    assert qkernel.s_series(ctx).q_coefficients(5) == [1, 1, 1, 2, 2, 3]
    d = qkernel.d_series(ctx)
    assert d.q_coefficients(4) == [mpq(-1, 2), 1, 2, 2, 3]
    sigma0 = [sum(1 for k in range(1, n + 1) if n % k == 0) for n in range(1, N + 1)]
    assert d.q_coefficients()[1:] == sigma0
    assert qkernel.d_series(ctx, 2) == fps.substitute_q_power(d, 2)


def test_s_times_q_q2_is_euler_ratio(ctx):
    q = q_of(ctx)
    lhs = qkernel.s_series(ctx) * qkernel.poch_inf(ctx, q, 2)
    assert lhs == fps.constant(ctx, 1)


def _ramanujan_rho(ctx, a, b):
    q = q_of(ctx)
    acc = fps.zero(ctx)
    for n in range(N + 1):
        e = n * (n + 1) // 2
        if e > N:
            break
        t = q ** e * (a / b) ** n * (-1) ** n * fps.invert(qkernel.poch(ctx, -a * q, n))
        acc = acc + t
    return acc * (1 + 1 / b)


def test_rho3_at_c0_is_ramanujans_sum(ctx):
    a, b = mpq(1, 2), mpq(1, 3)
    assert qkernel.rho3(ctx, a, b, 0) == _ramanujan_rho(ctx, a, b)


def _pinf(ctx, x):
    return qkernel.poch_inf(ctx, x)


def test_three_variable_reciprocity(ctx):
    a, b, c = mpq(1, 2), mpq(1, 3), mpq(1, 5)
    q = q_of(ctx)
    lhs = qkernel.rho3(ctx, a, b, c) - qkernel.rho3(ctx, b, a, c)
    num = _pinf(ctx, c) * _pinf(ctx, a / b * q) * _pinf(ctx, b / a * q) * _pinf(ctx, q)
    den = _pinf(ctx, -c / a) * _pinf(ctx, -c / b) * _pinf(ctx, -a * q) * _pinf(ctx, -b * q)
    rhs = (1 / b - 1 / a) * num * fps.invert(den)
    assert fps.equal_up_to(lhs, rhs, N)
    assert qkernel.rho3(ctx, a, a, c) - qkernel.rho3(ctx, a, a, c) == fps.zero(ctx)


def test_four_variable_reciprocity(ctx):
    a, b, c, d = mpq(1, 2), mpq(1, 3), mpq(1, 7), mpq(1, 11)
    q = q_of(ctx)
    assert qkernel.rho4(ctx, a, b, c, 0) == qkernel.rho3(ctx, a, b, c)
    lhs = qkernel.rho4(ctx, a, b, c, d) - qkernel.rho4(ctx, b, a, c, d)
    num = (_pinf(ctx, c) * _pinf(ctx, d) * _pinf(ctx, a / b * q) * _pinf(ctx, b / a * q)
           * _pinf(ctx, c * d / (a * b)) * _pinf(ctx, q))
    den = (_pinf(ctx, -c / a) * _pinf(ctx, -d / a) * _pinf(ctx, -c / b) * _pinf(ctx, -d / b)
           * _pinf(ctx, -a * q) * _pinf(ctx, -b * q))
    rhs = (1 / b - 1 / a) * num * fps.invert(den)
    assert fps.equal_up_to(lhs, rhs, N)


# -- properties --------------------------------------------------------------------------
rationals = st.builds(mpq, st.integers(-12, 12), st.integers(1, 13))


@given(rationals, st.integers(0, 6), st.integers(0, 6))
def test_poch_splits(a, m, n):
    ctx = fps.make_context({}, 12)
    q = q_of(ctx)
    assert qkernel.poch(ctx, a, m + n) == qkernel.poch(ctx, a, m) * qkernel.poch(ctx, a * q ** m, n)


@given(rationals, st.integers(0, 8))
def test_poch_inf_splits(a, K):
    ctx = fps.make_context({}, 12)
    q = q_of(ctx)
    assert qkernel.poch_inf(ctx, a) == qkernel.poch(ctx, a, K) * qkernel.poch_inf(ctx, a * q ** K)


@given(rationals)
def test_q_binomial_theorem(a):
    ctx = fps.make_context({"z": 1}, 12)
    z = fps.variable(ctx, "z")
    lhs = qkernel.phi(ctx, [a], [], z)
    rhs = qkernel.poch_inf(ctx, a * z) * fps.invert(qkernel.poch_inf(ctx, z))
    assert lhs == rhs


def test_euler_formula():
    ctx = fps.make_context({"w": 1}, 14)
    q, w = q_of(ctx), fps.variable(ctx, "w")
    lhs = qkernel.qsum(ctx, lambda n: w ** n * q ** (n * (n - 1) // 2)
                       * fps.invert(qkernel.poch(ctx, q, n)), SumBound(lambda n: n))
    assert lhs == qkernel.poch_inf(ctx, -w)


@given(rationals.filter(lambda z: z != 0))
def test_jacobi_triple_product(z):
    ctx = fps.make_context({}, 16)
    q = q_of(ctx)
    lhs = fps.zero(ctx)
    for n in range(-6, 7):
        e = n * n
        if e <= 16:
            lhs = lhs + q ** e * z ** n
    rhs = (qkernel.poch_inf(ctx, q ** 2, 2) * qkernel.poch_inf(ctx, -z * q, 2)
           * qkernel.poch_inf(ctx, -q / z, 2))
    assert lhs == rhs


def test_lebesgue_identity():
    ctx = fps.make_context({"a": 1}, 14)
    q, a = q_of(ctx), fps.variable(ctx, "a")
    lhs = qkernel.qsum(ctx, lambda n: qkernel.poch(ctx, a, n) * q ** (n * (n + 1) // 2)
                       * fps.invert(qkernel.poch(ctx, q, n)), SumBound(lambda n: n * (n + 1) // 2))
    rhs = qkernel.s_series(ctx) * qkernel.poch_inf(ctx, a * q, 2)
    assert lhs == rhs
