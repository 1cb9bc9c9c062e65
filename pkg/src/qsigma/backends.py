"""Two interchangeable evaluators for identity builders.

An identity side is written once as a function of a backend ``B``.  The
vocabulary is small: ``B.q``, ``B.qpow``, ``B.param``, ``B.poch``,
``B.pinf``, ``B.inv``, ``B.qsum``, ``B.scaled``, ``B.phi`` and ``B.eps_part``.
Values returned by the backend support ``+ - * /`` with each other and with
exact rationals.

* :class:`FormalBackend` produces truncated :class:`FormalSeries`.
* :class:`NumericBackend` produces ``mpfr`` values at a rational point.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from gmpy2 import mpfr

from . import fps, numeric, qkernel
from .errors import ContextError, NotAUnitError, PreconditionError
from .fps import EPS, Q, FormalSeries, SeriesContext
from .numeric import PointAssignment, TailPolicy


class Backend:
    kind = "abstract"

    def __init__(self):
        self.terms_evaluated = 0

    # subclasses implement the vocabulary below
    def const(self, r):
        raise NotImplementedError

    def prod(self, values: Sequence):
        r = self.const(1)
        for v in values:
            r = r * v
        return r

    def pinf_ratio(self, nums: Sequence, dens: Sequence, step: int = 1):
        """prod (n; q)_inf / prod (d; q)_inf."""
        top = self.prod([self.pinf(x, step) for x in nums])
        bot = self.prod([self.pinf(x, step) for x in dens])
        return top * self.inv(bot)

    def poch_ratio(self, nums: Sequence, dens: Sequence, n: int, step: int = 1):
        top = self.prod([self.poch(x, n, step) for x in nums])
        bot = self.prod([self.poch(x, n, step) for x in dens])
        return top * self.inv(bot)


def _series_key(x: FormalSeries):
    return tuple(sorted(x.terms.items()))


class FormalBackend(Backend):
    """Builds truncated formal series in one context.

    ``params`` maps parameter names to either a context variable name (for
    formal parameters) or an exact rational.  ``work`` is the current
    working truncation; :meth:`scaled` lowers it while computing a factor
    that will be multiplied by a high-valuation prefactor.
    """

    kind = "formal"

    def __init__(self, ctx: SeriesContext, params: Mapping[str, object]):
        super().__init__()
        self.ctx = ctx
        self.work = ctx.order
        self._params = {}
        for name, v in params.items():
            if isinstance(v, FormalSeries):
                self._params[name] = v
            elif isinstance(v, str) and v == "dual":
                self._params[name] = fps.add_scalar(fps.variable(ctx, EPS), 1)
            elif isinstance(v, str) and ctx.has(v):
                self._params[name] = fps.variable(ctx, v)
            else:
                self._params[name] = fps.constant(ctx, v)
        self.q = fps.variable(ctx, Q)
        self._poch_cache: dict = {}
        self._pinf_cache: dict = {}

    def const(self, r):
        return fps.constant(self.ctx, r)

    def param(self, name: str):
        try:
            return self._params[name]
        except KeyError:
            raise ContextError(f"parameter {name!r} not bound") from None

    def qpow(self, k: int):
        if k < 0:
            raise PreconditionError("negative q-power in formal backend")
        return fps.monomial(self.ctx, {Q: k})

    def _lift(self, x) -> FormalSeries:
        return x if isinstance(x, FormalSeries) else fps.constant(self.ctx, x)

    def poch(self, x, n: int, step: int = 1):
        x = self._lift(x)
        key = (_series_key(x), step, self.work)
        entry = self._poch_cache.get(key)
        if entry is None:
            entry = [fps.constant(self.ctx, 1, self.work)]
            self._poch_cache[key] = entry
        while len(entry) <= n:
            k = len(entry) - 1
            f = fps.add_scalar(fps.neg(fps.shift(x, {Q: k * step})), 1)
            entry.append(fps.mul(entry[-1], f, self.work))
        return entry[n]

    def pinf(self, x, step: int = 1):
        x = self._lift(x)
        key = (_series_key(x), step, self.work)
        r = self._pinf_cache.get(key)
        if r is None:
            r = qkernel.poch_inf(self.ctx, x, step, self.work)
            self._pinf_cache[key] = r
        return r

    def inv(self, x):
        x = self._lift(x)
        if not x.terms.get(0, 0):
            raise NotAUnitError("division by a series with zero constant term")
        return fps.invert(fps.truncate(x, self.work))

    def qsum(self, term: Callable[[int], FormalSeries], bound: Callable[[int], int],
             start: int = 0):
        def counted(n):
            self.terms_evaluated += 1
            return self._lift(term(n))

        return qkernel.qsum(self.ctx, counted, qkernel.SumBound(bound, start), self.work)

    def scaled(self, pref, thunk: Callable[[], FormalSeries]):
        """pref * thunk(), with thunk evaluated at reduced working order."""
        pref = self._lift(pref)
        v = pref.valuation
        if v is None or v > self.work:
            return fps.zero(self.ctx, self.work)
        saved = self.work
        self.work = saved - v
        try:
            inner = self._lift(thunk())
        finally:
            self.work = saved
        return fps.mul(pref, inner, saved)

    def phi(self, nums: Sequence, dens: Sequence, arg):
        self.terms_evaluated += 1
        return qkernel.phi(self.ctx, [self._lift(a) for a in nums],
                           [self._lift(b) for b in dens], self._lift(arg), order=self.work)

    def dual(self):
        return fps.add_scalar(fps.variable(self.ctx, EPS), 1)

    def eps_part(self, fn: Callable[[FormalSeries], FormalSeries]):
        """The value f'(1) of z -> fn(z), via z = 1 + eps."""
        f = self._lift(fn(self.dual()))
        return fps.project_epsilon(f)[1]


class NumericBackend(Backend):
    """Evaluates builders at a rational point with ``mpfr`` arithmetic.

    Callers must run inside :func:`qsigma.numeric.precision`.
    """

    kind = "numeric"

    def __init__(self, point: PointAssignment, bits: int = numeric.DEFAULT_PRECISION,
                 policy: TailPolicy | None = None):
        super().__init__()
        self.point = point
        self.bits = bits
        self.policy = policy or TailPolicy.for_precision(bits)
        self.scale = mpfr(1)
        self.q = numeric.to_bigfloat(point[Q])
        self._poch_cache: dict = {}
        self._pinf_cache: dict = {}

    def const(self, r):
        return numeric.to_bigfloat(r)

    def param(self, name: str):
        return numeric.to_bigfloat(self.point[name])

    def qpow(self, k: int):
        return self.q ** k

    def poch(self, x, n: int, step: int = 1):
        x = numeric.to_bigfloat(x)
        key = (x, step)
        entry = self._poch_cache.get(key)
        if entry is None:
            entry = [mpfr(1)]
            self._poch_cache[key] = entry
        base = self.q ** step
        while len(entry) <= n:
            k = len(entry) - 1
            entry.append(entry[-1] * (1 - x * base ** k))
        return entry[n]

    def pinf(self, x, step: int = 1):
        x = numeric.to_bigfloat(x)
        key = (x, step)
        r = self._pinf_cache.get(key)
        if r is None:
            r = numeric.eval_poch_inf_value(x, self.q, self.policy, step)
            self._pinf_cache[key] = r
        return r

    def inv(self, x):
        x = numeric.to_bigfloat(x)
        numeric.check_pole(x, self.bits)
        return 1 / x

    def qsum(self, term, bound=None, start: int = 0):
        def counted(n):
            self.terms_evaluated += 1
            return numeric.to_bigfloat(term(n))

        return numeric.eval_qsum(counted, self.policy, start, self.scale)[0]

    def scaled(self, pref, thunk):
        pref = numeric.to_bigfloat(pref)
        if pref == 0:
            return mpfr(0)
        saved = self.scale
        self.scale = saved * max(abs(pref), mpfr(2) ** (-self.bits))
        try:
            inner = numeric.to_bigfloat(thunk())
        finally:
            self.scale = saved
        return pref * inner

    def phi(self, nums, dens, arg):
        value, diag = numeric.eval_phi_value(nums, dens, arg, self.q, self.bits,
                                             self.policy, 1, self.scale)
        self.terms_evaluated += diag.terms
        return value

    def dual(self):
        return mpfr(1)

    def eps_part(self, fn):
        """Central difference of z -> fn(z) at z = 1 with step 2^(-P/3)."""
        h = mpfr(2) ** (-(self.bits // 3))
        return (numeric.to_bigfloat(fn(1 + h)) - numeric.to_bigfloat(fn(1 - h))) / (2 * h)
