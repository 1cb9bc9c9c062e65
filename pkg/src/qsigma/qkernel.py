"""q-series building blocks over :class:`~qsigma.fps.FormalSeries`.

Every function takes the context first and an optional ``order`` that caps
the working truncation (defaults to the context's order).  Infinite sums go
through :func:`qsum` / :func:`qsum_multi`, which require a :class:`SumBound`
certificate and check it on every term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import fps
from .errors import BoundViolationError, NotAUnitError, PreconditionError, WeightError
from .fps import FormalSeries, SeriesContext

MAX_SUM_TERMS = 100_000


@dataclass(frozen=True)
class SumBound:
    """Termination certificate for a truncated sum.

    ``lower(i)`` is a lower bound for the weight of every monomial in the
    i-th term (``i`` is an int, or a tuple for multi-sums).  It must be
    nondecreasing and unbounded in each index.
    """

    lower: Callable
    start: int | tuple[int, ...] = 0


def _as_series(ctx: SeriesContext, x) -> FormalSeries:
    if isinstance(x, FormalSeries):
        if x.ctx != ctx:
            fps._check_ctx(x, fps.zero(ctx))
        return x
    return fps.constant(ctx, x)


def _work(ctx: SeriesContext, order: int | None) -> int:
    return ctx.order if order is None else min(order, ctx.order)


def _unit_factor(f: FormalSeries, what: str) -> FormalSeries:
    if not f.terms.get(0, 0):
        raise NotAUnitError(f"{what} has zero constant term")
    return f


def poch(ctx: SeriesContext, a, n: int, step: int = 1, order: int | None = None) -> FormalSeries:
    """(a; q^step)_n = prod_{k<n} (1 - a q^{k step})."""
    if n < 0:
        raise PreconditionError("poch needs n >= 0; use poch_int for negative n")
    w = _work(ctx, order)
    a = _as_series(ctx, a)
    result = fps.constant(ctx, 1, w)
    for k in range(n):
        factor = fps.add_scalar(fps.neg(fps.shift(a, {fps.Q: k * step})), 1)
        result = fps.mul(result, factor, w)
    return fps.truncate(result, w)


def poch_inf(ctx: SeriesContext, a, step: int = 1, order: int | None = None) -> FormalSeries:
    """(a; q^step)_inf, stopping once further factors only touch weight > order."""
    w = _work(ctx, order)
    a = _as_series(ctx, a)
    result = fps.constant(ctx, 1, w)
    v = a.valuation
    if v is None:
        return result
    k = 0
    while v + k * step <= w:
        factor = fps.add_scalar(fps.neg(fps.shift(a, {fps.Q: k * step})), 1)
        result = fps.mul(result, factor, w)
        k += 1
    return fps.truncate(result, w)


def _q_divide(a: FormalSeries, k: int) -> FormalSeries:
    # a * q^{-k}; caller guarantees every monomial has q-exponent >= k
    ctx = a.ctx
    qs, qm, ws = ctx.shifts[0], ctx.masks[0], ctx.wshift
    out = {}
    for key, c in a.terms.items():
        if ((key >> qs) & qm) < k:
            raise WeightError(f"q^-{k} shift would produce a negative q-exponent")
        out[key - (k << qs) - (k << ws)] = c
    return FormalSeries(ctx, out, a.order - k)


def poch_int(ctx: SeriesContext, a, n: int, order: int | None = None) -> FormalSeries:
    """(a)_n for any integer n, with (a)_n = 1/prod_{k=1}^{|n|}(1 - a q^{-k}) for n < 0."""
    if n >= 0:
        return poch(ctx, a, n, order=order)
    w = _work(ctx, order)
    a = _as_series(ctx, a)
    den = fps.constant(ctx, 1, w)
    for k in range(1, -n + 1):
        factor = fps.add_scalar(fps.neg(_q_divide(a, k)), 1)
        _unit_factor(factor, f"factor 1 - a q^-{k}")
        den = fps.mul(den, factor, w)
    return fps.invert(den)


def _check_term(t: FormalSeries, lower: int, w: int, index) -> None:
    v = t.valuation
    if v is not None and v < lower:
        raise BoundViolationError(
            f"term {index} has weight-{v} monomial below declared bound {lower}"
        )
    if t.order < w:
        raise PreconditionError(
            f"term {index} known only through weight {t.order}, need {w}"
        )


def qsum(ctx: SeriesContext, term: Callable[[int], FormalSeries], bound: SumBound,
         order: int | None = None) -> FormalSeries:
    """Sum term(i) for i >= bound.start while bound.lower(i) <= order."""
    w = _work(ctx, order)
    acc = fps.zero(ctx, w)
    i = bound.start
    prev = None
    while True:
        lo = bound.lower(i)
        if prev is not None and lo < prev:
            raise BoundViolationError(f"sum bound decreases at index {i}")
        if lo > w:
            break
        t = _as_series(ctx, term(i))
        _check_term(t, lo, w, i)
        acc = fps.add(acc, fps.truncate(t, w))
        prev = lo
        i += 1
        if i - bound.start > MAX_SUM_TERMS:
            raise BoundViolationError("sum bound never exceeded the truncation order")
    return fps.FormalSeries(ctx, acc.terms, w)


def qsum_multi(ctx: SeriesContext, term: Callable[[tuple], FormalSeries], bound: SumBound,
               order: int | None = None) -> FormalSeries:
    """Multi-index analogue of :func:`qsum`; ``bound.start`` is a tuple."""
    w = _work(ctx, order)
    start = tuple(bound.start)
    dim = len(start)
    acc = [fps.zero(ctx, w)]
    count = [0]

    def walk(prefix: tuple):
        level = len(prefix)
        i = start[level]
        while True:
            idx = prefix + (i,) + start[level + 1:]
            lo = bound.lower(idx)
            if lo > w:
                return
            if level + 1 == dim:
                t = _as_series(ctx, term(idx))
                _check_term(t, lo, w, idx)
                acc[0] = fps.add(acc[0], fps.truncate(t, w))
                count[0] += 1
                if count[0] > MAX_SUM_TERMS:
                    raise BoundViolationError("multi-sum bound never exceeded the truncation order")
            else:
                walk(prefix + (i,))
            i += 1

    walk(())
    return fps.FormalSeries(ctx, acc[0].terms, w)


def phi(ctx: SeriesContext, numerators: Sequence, denominators: Sequence, argument,
        step: int = 1, order: int | None = None) -> FormalSeries:
    """Basic hypergeometric series sum_n prod(a_i)_n/((q)_n prod(b_j)_n) x^n in base q^step."""
    w = _work(ctx, order)
    nums = [_as_series(ctx, a) for a in numerators]
    dens = [_as_series(ctx, b) for b in denominators]
    x = _as_series(ctx, argument)
    v = x.valuation
    if v is None:
        return fps.constant(ctx, 1, w)
    if v < 1:
        raise WeightError("phi argument has a weight-0 term; use the numeric backend")

    def factor(a: FormalSeries, k: int) -> FormalSeries:
        return fps.add_scalar(fps.neg(fps.shift(a, {fps.Q: k * step})), 1)

    t = fps.constant(ctx, 1, w)
    acc = t
    n = 0
    while (n + 1) * v <= w:
        num = x
        for a in nums:
            num = fps.mul(num, factor(a, n), w)
        den = fps.add_scalar(fps.neg(fps.monomial(ctx, {fps.Q: (n + 1) * step}, 1, w)), 1)
        for b in dens:
            den = fps.mul(den, _unit_factor(factor(b, n), "phi denominator factor"), w)
        t = fps.mul(fps.mul(t, num, w), fps.invert(fps.truncate(den, w - (n + 1) * v)), w)
        n += 1
        _check_term(t, n * v, w, n)
        acc = fps.add(acc, t)
    return acc


def s_series(ctx: SeriesContext, order: int | None = None) -> FormalSeries:
    """S(q) = (-q; q)_inf."""
    return poch_inf(ctx, fps.monomial(ctx, {fps.Q: 1}, -1), order=order)


def d_series(ctx: SeriesContext, step: int = 1, order: int | None = None) -> FormalSeries:
    """D(q^step) = -1/2 + sum_{n>=1} q^{n step}/(1 - q^{n step})."""
    w = _work(ctx, order)

    def term(n):
        e = n * step
        return fps.FormalSeries(
            ctx, {ctx.key({fps.Q: e * j}): 1 for j in range(1, w // e + 1)}, w
        )

    total = qsum(ctx, term, SumBound(lambda n: n * step, 1), w)
    return fps.add_scalar(total, fps.mpq(-1, 2))


def _require_unit(x: FormalSeries, name: str) -> None:
    if not x.terms.get(0, 0):
        raise NotAUnitError(f"{name} must be a unit (nonzero constant term)")


def rho3(ctx: SeriesContext, a, b, c, order: int | None = None) -> FormalSeries:
    """(1 + 1/b) sum_n (c)_n (-1)^n q^{n(n+1)/2} a^n b^-n / ((-aq)_n (-c/b)_{n+1})."""
    w = _work(ctx, order)
    a, b, c = (_as_series(ctx, x) for x in (a, b, c))
    _require_unit(a, "a")
    _require_unit(b, "b")
    binv = fps.invert(b)
    ab = fps.mul(a, binv)
    aq = fps.neg(fps.shift(a, {fps.Q: 1}))
    cb = fps.neg(fps.mul(c, binv))
    state = {"num": fps.constant(ctx, 1, w), "den": fps.add_scalar(fps.neg(cb), 1),
             "abn": fps.constant(ctx, 1, w), "n": 0}
    _require_unit(state["den"], "1 + c/b")

    def term(n):
        # running products: (c)_n, (-aq)_n (-c/b)_{n+1}, (a/b)^n
        while state["n"] < n:
            k = state["n"]
            state["num"] = fps.mul(state["num"], fps.add_scalar(fps.neg(fps.shift(c, {fps.Q: k})), 1), w)
            fa = fps.add_scalar(fps.neg(fps.shift(aq, {fps.Q: k})), 1)
            fc = fps.add_scalar(fps.neg(fps.shift(cb, {fps.Q: k + 1})), 1)
            _require_unit(fa, "1 + a q^k")
            _require_unit(fc, "1 + c q^k / b")
            state["den"] = fps.mul(state["den"], fps.mul(fa, fc, w), w)
            state["abn"] = fps.mul(state["abn"], ab, w)
            state["n"] += 1
        e = n * (n + 1) // 2
        sign = -1 if n % 2 else 1
        t = fps.mul(state["num"], state["abn"], w - e)
        t = fps.mul(t, fps.invert(fps.truncate(state["den"], w - e)), w - e)
        return fps.shift(t, {fps.Q: e}, sign)

    s = qsum(ctx, term, SumBound(lambda n: n * (n + 1) // 2), w)
    return fps.mul(fps.add_scalar(binv, 1), s, w)


def rho4(ctx: SeriesContext, a, b, c, d, order: int | None = None) -> FormalSeries:
    """Four-variable analogue of :func:`rho3` with the extra factor (1 + c d q^{2n}/b)."""
    w = _work(ctx, order)
    a, b, c, d = (_as_series(ctx, x) for x in (a, b, c, d))
    _require_unit(a, "a")
    _require_unit(b, "b")
    binv = fps.invert(b)
    ab = fps.mul(a, binv)
    cd = fps.mul(c, d)
    cdab = fps.mul(cd, fps.invert(fps.mul(a, b)))
    cdb = fps.mul(cd, binv)
    aq = fps.neg(fps.shift(a, {fps.Q: 1}))

    def one_minus(x, k):
        return fps.add_scalar(fps.neg(fps.shift(x, {fps.Q: k})), 1)

    mcb = fps.neg(fps.mul(c, binv))
    mdb = fps.neg(fps.mul(d, binv))
    den0 = fps.mul(one_minus(mcb, 0), one_minus(mdb, 0), w)
    _require_unit(den0, "(1 + c/b)(1 + d/b)")
    state = {"num": fps.constant(ctx, 1, w), "den": den0, "abn": fps.constant(ctx, 1, w), "n": 0}

    def term(n):
        while state["n"] < n:
            k = state["n"]
            num = fps.mul(fps.mul(one_minus(d, k), one_minus(c, k), w), one_minus(cdab, k), w)
            den = fps.mul(fps.mul(one_minus(aq, k), one_minus(mcb, k + 1), w), one_minus(mdb, k + 1), w)
            _require_unit(den, "rho4 denominator factor")
            state["num"] = fps.mul(state["num"], num, w)
            state["den"] = fps.mul(state["den"], den, w)
            state["abn"] = fps.mul(state["abn"], ab, w)
            state["n"] += 1
        e = n * (n + 1) // 2
        sign = -1 if n % 2 else 1
        t = fps.mul(state["num"], state["abn"], w - e)
        t = fps.mul(t, fps.add_scalar(fps.shift(cdb, {fps.Q: 2 * n}), 1), w - e)
        t = fps.mul(t, fps.invert(fps.truncate(state["den"], w - e)), w - e)
        return fps.shift(t, {fps.Q: e}, sign)

    s = qsum(ctx, term, SumBound(lambda n: n * (n + 1) // 2), w)
    return fps.mul(fps.add_scalar(binv, 1), s, w)
