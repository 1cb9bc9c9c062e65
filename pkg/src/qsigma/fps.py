"""Graded truncated multivariate formal power series over exact rationals.

A :class:`SeriesContext` fixes the alphabet: ``q`` (weight 1) plus any number
of parameters, each with a nonnegative integer weight and an optional
nilpotency bound.  Series are truncated by *total weight*: a monomial
``q^i c^j eps^k`` with weights ``(1, 1, 0)`` has weight ``i + j``.

Each :class:`FormalSeries` also records the weight ``order`` through which its
coefficients are known.  Products propagate precision the usual way for
power series, so a unit factor computed to a reduced order and multiplied by
a high-valuation monomial still yields a result exact to the full order.

Monomials are packed into Python integers: one bit field per variable with
``q`` most significant, and the total weight in the topmost field.  Integer
order on keys is therefore the weighted graded-lexicographic order, and
monomial multiplication is integer addition.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterable, Mapping, NamedTuple, Union

from gmpy2 import mpq

from .errors import ContextError, NotAUnitError, PreconditionError, WeightError

Rational = type(mpq())

Q = "q"
EPS = "eps"

Scalar = Union[int, Fraction, Rational]


def as_rational(x) -> Rational:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x.strip())
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(x) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers); never a decimal."""
    r = as_rational(x)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _scalar(x):
    # int stays int (fast path); everything else becomes mpq
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    return as_rational(x)


class Var(NamedTuple):
    name: str
    weight: int
    nilpotency: int | None  # None means unbounded


@dataclass(frozen=True)
class Monomial:
    """A monomial as ``((name, exponent), ...)`` with zero exponents omitted."""

    exponents: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, exps: Mapping[str, int] | "Monomial" | None = None, **kw) -> "Monomial":
        if isinstance(exps, Monomial):
            return exps
        items = dict(exps or {})
        items.update(kw)
        return cls(tuple((k, int(v)) for k, v in items.items() if v))

    def get(self, name: str) -> int:
        for k, v in self.exponents:
            if k == name:
                return v
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(k if v == 1 else f"{k}^{v}" for k, v in self.exponents)


class SeriesContext:
    """Alphabet, weights, nilpotency bounds and global truncation order."""

    def __init__(self, variables: Iterable[Var], truncation_order: int):
        variables = tuple(Var(*v) for v in variables)
        if truncation_order < 1:
            raise ContextError("truncation_order must be >= 1")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable name in {names}")
        if not variables or variables[0] != Var(Q, 1, None):
            raise ContextError("q must be the first variable, with weight 1 and no nilpotency")
        for v in variables:
            if v.weight < 0:
                raise ContextError(f"variable {v.name} has negative weight")
            if v.nilpotency is not None and v.nilpotency < 1:
                raise ContextError(f"variable {v.name} has nilpotency < 1")
            if v.weight == 0 and v.nilpotency is None:
                raise ContextError(
                    f"weight-0 variable {v.name} needs a finite nilpotency bound"
                )
        self.variables = variables
        self.order = truncation_order
        self._index = {v.name: i for i, v in enumerate(variables)}

        emax = []
        for v in variables:
            bounds = []
            if v.weight > 0:
                bounds.append(truncation_order // v.weight)
            if v.nilpotency is not None:
                bounds.append(v.nilpotency - 1)
            emax.append(min(bounds))
        self.max_exponent = tuple(emax)

        bits = [max(1, (2 * e).bit_length()) for e in emax]
        shifts = [0] * len(variables)
        pos = 0
        for i in reversed(range(len(variables))):
            shifts[i] = pos
            pos += bits[i]
        self.shifts = tuple(shifts)
        self.masks = tuple((1 << b) - 1 for b in bits)
        self.wshift = pos

        # nilpotency overflow: a field sum >= bound marks a vanishing product
        self.nil_fields = tuple(
            (shifts[i], self.masks[i], v.nilpotency)
            for i, v in enumerate(variables)
            if v.nilpotency is not None
        )
        fast = all(b & (b - 1) == 0 for _, _, b in self.nil_fields)
        self.nil_mask = (
            sum(b << s for s, _, b in self.nil_fields) if fast and self.nil_fields else 0
        )
        self.nil_generic = bool(self.nil_fields) and not fast

    # -- identity -----------------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SeriesContext):
            return NotImplemented
        return self.variables == other.variables and self.order == other.order

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        vs = ", ".join(
            f"{v.name}:{v.weight}" + (f"/nil{v.nilpotency}" if v.nilpotency else "")
            for v in self.variables
        )
        return f"SeriesContext([{vs}], N={self.order})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def has(self, name: str) -> bool:
        return name in self._index

    def var(self, name: str) -> Var:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise ContextError(f"unknown variable {name!r} (have {self.names})") from None

    def index(self, name: str) -> int:
        self.var(name)
        return self._index[name]

    # -- monomial keys ----------------------------------------------------------------
    def key(self, exps: Mapping[str, int] | Monomial) -> int:
        """Pack a monomial, validating names, nilpotency and weight."""
        if isinstance(exps, Monomial):
            exps = exps.as_dict()
        key = 0
        weight = 0
        for name, e in exps.items():
            v = self.var(name)
            if e < 0:
                raise ContextError(f"negative exponent for {name}")
            if v.nilpotency is not None and e >= v.nilpotency:
                raise ContextError(f"{name}^{e} violates nilpotency {v.nilpotency}")
            i = self._index[name]
            if e > self.max_exponent[i]:
                raise ContextError(f"{name}^{e} exceeds the truncation order")
            key += e << self.shifts[i]
            weight += e * v.weight
        if weight > self.order:
            raise ContextError(f"monomial weight {weight} exceeds truncation order {self.order}")
        return key + (weight << self.wshift)

    def exponents(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & m for s, m in zip(self.shifts, self.masks))

    def weight(self, key: int) -> int:
        return key >> self.wshift

    def monomial(self, key: int) -> Monomial:
        return Monomial(
            tuple((v.name, e) for v, e in zip(self.variables, self.exponents(key)) if e)
        )

    def format_key(self, key: int) -> str:
        return str(self.monomial(key))

    def with_order(self, truncation_order: int) -> "SeriesContext":
        return SeriesContext(self.variables, truncation_order)


def make_context(variables=None, truncation_order: int = 10) -> SeriesContext:
    """Build a validated context.

    ``variables`` is a mapping ``name -> weight`` or ``name -> (weight,
    nilpotency)``, or a sequence of ``(name, weight[, nilpotency])`` tuples.
    ``q`` is inserted first (weight 1, unbounded) when absent.
    """
    if variables is None:
        items = []
    elif isinstance(variables, Mapping):
        items = [(k,) + (tuple(v) if isinstance(v, (tuple, list)) else (v,)) for k, v in variables.items()]
    else:
        items = [tuple(v) for v in variables]
    seen = set()
    vs = []
    for it in items:
        name, weight, nil = (it + (None,))[:3] if len(it) < 3 else it
        if name in seen:
            raise ContextError(f"duplicate variable name {name!r}")
        seen.add(name)
        vs.append(Var(name, int(weight), None if nil is None else int(nil)))
    if Q in seen:
        qv = next(v for v in vs if v.name == Q)
        if qv != Var(Q, 1, None):
            raise ContextError("q must have weight 1 and unbounded nilpotency")
        vs.remove(qv)
    return SeriesContext([Var(Q, 1, None)] + vs, truncation_order)


class FormalSeries:
    """Sparse truncated series; treat instances as immutable.

    ``terms`` maps packed monomial keys to nonzero int/mpq coefficients and
    ``order`` is the weight through which the series is known exactly.
    """

    __slots__ = ("ctx", "terms", "order", "_sorted")

    def __init__(self, ctx: SeriesContext, terms: dict, order: int | None = None):
        self.ctx = ctx
        self.terms = terms
        self.order = ctx.order if order is None else min(order, ctx.order)
        self._sorted = None

    # -- inspection -----------------------------------------------------------------
    def sorted_lists(self):
        if self._sorted is None:
            keys = sorted(self.terms)
            self._sorted = (keys, [self.terms[k] for k in keys])
        return self._sorted

    @property
    def valuation(self) -> int | None:
        """Least weight of a nonzero term, or None for the zero series."""
        if not self.terms:
            return None
        return min(self.terms) >> self.ctx.wshift

    def _val_eff(self) -> int:
        v = self.valuation
        return self.order + 1 if v is None else min(v, self.order + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Rational:
        return as_rational(self.terms.get(0, 0))

    def variables_used(self) -> set[str]:
        used = set()
        for k in self.terms:
            for v, e in zip(self.ctx.variables, self.ctx.exponents(k)):
                if e:
                    used.add(v.name)
        return used

    def items(self):
        """(Monomial, Rational) pairs in graded-lex order."""
        keys, vals = self.sorted_lists()
        return [(self.ctx.monomial(k), as_rational(c)) for k, c in zip(keys, vals)]

    def as_dict(self) -> dict[Monomial, Rational]:
        return dict(self.items())

    def q_coefficients(self, upto: int | None = None) -> list[Rational]:
        """Dense list of q-coefficients for a series in q alone."""
        if self.variables_used() - {Q}:
            raise ContextError("q_coefficients needs a series in q alone")
        n = self.order if upto is None else upto
        if n > self.order:
            raise PreconditionError(f"series known only through q^{self.order}")
        out = [mpq(0)] * (n + 1)
        for k, c in self.terms.items():
            w = k >> self.ctx.wshift
            if w <= n:
                out[w] = as_rational(c)
        return out

    def __repr__(self):
        keys, vals = self.sorted_lists()
        parts = []
        for k, c in islice(zip(keys, vals), 12):
            m = self.ctx.format_key(k)
            cs = format_rational(c)
            parts.append(cs if m == "1" else (m if cs == "1" else f"{cs}*{m}"))
        if len(keys) > 12:
            parts.append("...")
        body = " + ".join(parts) if parts else "0"
        return f"FormalSeries({body} + O(weight {self.order + 1}))"

    # -- operators --------------------------------------------------------------------
    def _coerce(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return other
        return constant(self.ctx, other)

    def __add__(self, other):
        if isinstance(other, FormalSeries):
            return add(self, other)
        try:
            return add_scalar(self, other)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FormalSeries):
            return sub(self, other)
        try:
            return add_scalar(self, -_scalar(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return add_scalar(neg(self), other)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            return mul(self, other)
        try:
            return scale(self, other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return mul(self, invert(other))
        try:
            r = _scalar(other)
        except TypeError:
            return NotImplemented
        if r == 0:
            raise NotAUnitError("division by zero scalar")
        return scale(self, mpq(1) / r)

    def __rtruediv__(self, other):
        try:
            return scale(invert(self), other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        if self.ctx != other.ctx:
            return False
        n = min(self.order, other.order)
        a = truncate(self, n).terms
        b = truncate(other, n).terms
        return a == b

    __hash__ = None


# -- constructors ---------------------------------------------------------------------
def constant(ctx: SeriesContext, r, order: int | None = None) -> FormalSeries:
    r = _scalar(r)
    return FormalSeries(ctx, {0: r} if r else {}, order)


def zero(ctx: SeriesContext, order: int | None = None) -> FormalSeries:
    return FormalSeries(ctx, {}, order)


def variable(ctx: SeriesContext, name: str, order: int | None = None) -> FormalSeries:
    return monomial(ctx, {name: 1}, 1, order)


def monomial(ctx: SeriesContext, exps: Mapping[str, int] | Monomial, coeff=1,
             order: int | None = None) -> FormalSeries:
    """``coeff * m``; empty if the monomial is truncated away or nilpotent."""
    coeff = _scalar(coeff)
    n = ctx.order if order is None else min(order, ctx.order)
    if isinstance(exps, Monomial):
        exps = exps.as_dict()
    w = 0
    for name, e in exps.items():
        v = ctx.var(name)
        if v.nilpotency is not None and e >= v.nilpotency:
            return FormalSeries(ctx, {}, n)
        w += v.weight * e
    if w > n or not coeff:
        return FormalSeries(ctx, {}, n)
    return FormalSeries(ctx, {ctx.key(exps): coeff}, n)


def from_terms(ctx: SeriesContext, terms: Mapping, order: int | None = None) -> FormalSeries:
    """Build from ``{Monomial-or-mapping: coefficient}``, dropping truncated terms."""
    n = ctx.order if order is None else min(order, ctx.order)
    out = {}
    for m, c in terms.items():
        s = monomial(ctx, m, c, n)
        for k, v in s.terms.items():
            out[k] = out.get(k, 0) + v
    return FormalSeries(ctx, {k: v for k, v in out.items() if v}, n)


# -- arithmetic ------------------------------------------------------------------------
def _check_ctx(a: FormalSeries, b: FormalSeries) -> SeriesContext:
    if a.ctx is b.ctx or a.ctx == b.ctx:
        return a.ctx
    raise ContextError(f"context mismatch: {a.ctx!r} vs {b.ctx!r}")


def truncate(a: FormalSeries, order: int) -> FormalSeries:
    if order >= a.order:
        return a
    if order < 0:
        return FormalSeries(a.ctx, {}, order)
    lim = (order + 1) << a.ctx.wshift
    return FormalSeries(a.ctx, {k: c for k, c in a.terms.items() if k < lim}, order)


def add(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    ctx = _check_ctx(a, b)
    n = min(a.order, b.order)
    lim = (n + 1) << ctx.wshift
    out = {k: c for k, c in a.terms.items() if k < lim}
    for k, c in b.terms.items():
        if k < lim:
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return FormalSeries(ctx, out, n)


def neg(a: FormalSeries) -> FormalSeries:
    return FormalSeries(a.ctx, {k: -c for k, c in a.terms.items()}, a.order)


def sub(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return add(a, neg(b))


def add_scalar(a: FormalSeries, r) -> FormalSeries:
    r = _scalar(r)
    out = dict(a.terms)
    s = out.get(0, 0) + r
    if s:
        out[0] = s
    else:
        out.pop(0, None)
    return FormalSeries(a.ctx, out, a.order)


def scale(a: FormalSeries, r) -> FormalSeries:
    r = _scalar(r)
    if not r:
        return FormalSeries(a.ctx, {}, a.order)
    return FormalSeries(a.ctx, {k: c * r for k, c in a.terms.items()}, a.order)


def shift(a: FormalSeries, exps: Mapping[str, int], coeff=1) -> FormalSeries:
    """Multiply by ``coeff * monomial`` without a general convolution."""
    m = monomial(a.ctx, exps, coeff, a.ctx.order)
    w = sum(a.ctx.var(k).weight * e for k, e in exps.items())
    n = min(a.order + w, a.ctx.order)
    if not m.terms:
        return FormalSeries(a.ctx, {}, n)
    (mk, mc), = m.terms.items()
    ctx = a.ctx
    lim = (n + 1) << ctx.wshift
    out = {}
    for k, c in a.terms.items():
        kk = k + mk
        if kk >= lim or _nil_overflow(ctx, kk):
            continue
        out[kk] = c * mc if mc != 1 else c
    return FormalSeries(ctx, out, n)


def _nil_overflow(ctx: SeriesContext, k: int) -> bool:
    if ctx.nil_mask:
        return bool(k & ctx.nil_mask)
    if ctx.nil_generic:
        return any(((k >> s) & m) >= b for s, m, b in ctx.nil_fields)
    return False


def _convolve(ctx, ta, tb, acc, lim=None):
    """acc += ta * tb on raw term dicts; keys >= lim are dropped."""
    nil_mask = ctx.nil_mask
    generic = ctx.nil_generic
    get = acc.get
    for ka, ca in ta.items():
        for kb, cb in tb.items():
            k = ka + kb
            if lim is not None and k >= lim:
                continue
            if nil_mask:
                if k & nil_mask:
                    continue
            elif generic and _nil_overflow(ctx, k):
                continue
            acc[k] = get(k, 0) + ca * cb
    return acc


def mul(a: FormalSeries, b: FormalSeries, order: int | None = None) -> FormalSeries:
    """Truncated product; the result order follows the valuation rule."""
    ctx = _check_ctx(a, b)
    n = min(a._val_eff() + b.order, b._val_eff() + a.order, ctx.order)
    if order is not None:
        n = min(n, order)
    if not a.terms or not b.terms or n < 0:
        return FormalSeries(ctx, {}, n)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    bkeys, bvals = b.sorted_lists()
    ws = ctx.wshift
    nil_mask = ctx.nil_mask
    generic = ctx.nil_generic
    acc: dict = {}
    get = acc.get
    for ka, ca in a.terms.items():
        rem = n - (ka >> ws)
        if rem < 0:
            continue
        cut = bisect_left(bkeys, (rem + 1) << ws)
        if nil_mask:
            for kb, cb in zip(islice(bkeys, cut), bvals):
                k = ka + kb
                if k & nil_mask:
                    continue
                acc[k] = get(k, 0) + ca * cb
        elif generic:
            for kb, cb in zip(islice(bkeys, cut), bvals):
                k = ka + kb
                if _nil_overflow(ctx, k):
                    continue
                acc[k] = get(k, 0) + ca * cb
        else:
            for kb, cb in zip(islice(bkeys, cut), bvals):
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
    return FormalSeries(ctx, {k: c for k, c in acc.items() if c}, n)


def invert(a: FormalSeries) -> FormalSeries:
    """Multiplicative inverse of a unit (nonzero constant coefficient).

    Solves ``a * b = 1`` weight by weight: the weight-0 part (constant plus
    nilpotent terms) is inverted by a finite geometric series, then
    ``b_w = -a_0^{-1} * sum_{v>=1} a_v b_{w-v}``.
    """
    ctx = a.ctx
    c0 = a.terms.get(0, 0)
    if not c0:
        raise NotAUnitError(f"series with zero constant term is not invertible: {a!r}")
    n = a.order
    ws = ctx.wshift
    comps: dict[int, dict] = {}
    for k, c in a.terms.items():
        comps.setdefault(k >> ws, {})[k] = c

    inv_c0 = mpq(1) / c0
    if inv_c0.denominator == 1:
        inv_c0 = int(inv_c0)
    # weight-0 inverse: (c0 (1 + u))^{-1} = c0^{-1} sum (-u)^j, u nilpotent
    u = {k: -c * inv_c0 for k, c in comps.get(0, {}).items() if k != 0}
    inv0 = {0: inv_c0}
    if u:
        power_ = {0: 1}
        total = {0: 1}
        while True:
            power_ = {k: c for k, c in _convolve(ctx, power_, u, {}).items() if c}
            if not power_:
                break
            for k, c in power_.items():
                total[k] = total.get(k, 0) + c
        inv0 = {k: c * inv_c0 for k, c in total.items() if c}
    scalar0 = len(inv0) == 1

    bcomps: dict[int, dict] = {0: inv0}
    out = dict(inv0)
    avail = sorted(w for w in comps if w > 0)
    for w in range(1, n + 1):
        s: dict = {}
        for v in avail:
            if v > w:
                break
            bw = bcomps.get(w - v)
            if bw:
                _convolve(ctx, comps[v], bw, s)
        s = {k: c for k, c in s.items() if c}
        if not s:
            continue
        if scalar0:
            bw = {k: -c * inv_c0 for k, c in s.items()}
        else:
            bw = {k: -c for k, c in _convolve(ctx, inv0, s, {}).items() if c}
        if bw:
            bcomps[w] = bw
            out.update(bw)
    return FormalSeries(ctx, out, n)


def divide(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return mul(a, invert(b))


def power(a: FormalSeries, n: int) -> FormalSeries:
    if n < 0:
        return power(invert(a), -n)
    result = constant(a.ctx, 1, a.order)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


# -- substitutions -------------------------------------------------------------------
def substitute_q_power(a: FormalSeries, k: int) -> FormalSeries:
    """Replace q by q^k in a series involving q alone."""
    if k < 1:
        raise ContextError("q-power substitution needs k >= 1")
    other = a.variables_used() - {Q}
    if other:
        raise ContextError(f"substitute_q_power needs a series in q alone, found {sorted(other)}")
    ctx = a.ctx
    n = min(ctx.order, k * (a.order + 1) - 1)
    qs = ctx.shifts[0]
    ws = ctx.wshift
    out = {}
    for key, c in a.terms.items():
        e = (key >> ws) * k
        if e <= n:
            out[(e << ws) | (e << qs)] = c
    return FormalSeries(ctx, out, n)


def substitute_var(a: FormalSeries, name: str, replacement) -> FormalSeries:
    """Substitute a series for a variable; weights may not be lowered."""
    ctx = a.ctx
    var = ctx.var(name)
    if not isinstance(replacement, FormalSeries):
        replacement = constant(ctx, replacement)
    _check_ctx(a, replacement)
    if replacement.terms:
        v = replacement.valuation
        if v < var.weight:
            raise WeightError(
                f"substituting a weight-{v} series for weight-{var.weight} variable {name}"
            )
        if var.weight == 0 and 0 in replacement.terms:
            raise WeightError(f"replacement for nilpotent {name} must have no constant term")
    i = ctx.index(name)
    s, m, ws = ctx.shifts[i], ctx.masks[i], ctx.wshift
    groups: dict[int, dict] = {}
    for k, c in a.terms.items():
        e = (k >> s) & m
        rest = k - (e << s) - ((e * var.weight) << ws)
        groups.setdefault(e, {})[rest] = c
    result = FormalSeries(ctx, groups.pop(0, {}), a.order)
    if not replacement.terms:
        return result
    rpow = constant(ctx, 1, a.order)
    for e in range(1, max(groups, default=0) + 1):
        rpow = mul(rpow, replacement)
        if e in groups:
            part = FormalSeries(ctx, groups[e], a.order - e * var.weight)
            result = add(result, mul(part, rpow))
    return truncate(result, a.order)


# -- extraction and comparison -------------------------------------------------------
def coefficient(a: FormalSeries, m: Mapping[str, int] | Monomial) -> Rational:
    key = a.ctx.key(m)
    if (key >> a.ctx.wshift) > a.order:
        raise PreconditionError(f"coefficient of {Monomial.of(m)} beyond known order {a.order}")
    return as_rational(a.terms.get(key, 0))


def project_epsilon(a: FormalSeries, name: str = EPS) -> tuple[FormalSeries, FormalSeries]:
    """Split ``a = f1 + eps*f_eps`` for a nilpotency-2 variable ``eps``.

    ``f_eps`` is the value of the derivative operator f -> f'(1) when the
    series was built at ``z = 1 + eps``.
    """
    ctx = a.ctx
    if not ctx.has(name):
        raise ContextError(f"no {name!r} variable in context")
    var = ctx.var(name)
    if var.nilpotency != 2:
        raise ContextError(f"{name} must have nilpotency 2, has {var.nilpotency}")
    i = ctx.index(name)
    s, m = ctx.shifts[i], ctx.masks[i]
    wshift_part = var.weight << ctx.wshift
    f1, fe = {}, {}
    for k, c in a.terms.items():
        if (k >> s) & m:
            fe[k - (1 << s) - wshift_part] = c
        else:
            f1[k] = c
    return FormalSeries(ctx, f1, a.order), FormalSeries(ctx, fe, a.order - var.weight)


@dataclass(frozen=True)
class MatchReport:
    equal: bool
    order: int
    monomial: Monomial | None = None
    lhs: Rational | None = None
    rhs: Rational | None = None

    def __bool__(self):
        return self.equal


def equal_up_to(a: FormalSeries, b: FormalSeries, order: int) -> MatchReport:
    """Compare all coefficients of weight <= order; report the least mismatch."""
    ctx = _check_ctx(a, b)
    if order < 0 or order > ctx.order:
        raise ContextError(f"order {order} outside 0..{ctx.order}")
    if order > min(a.order, b.order):
        raise PreconditionError(
            f"cannot compare through weight {order}: operands known through "
            f"{a.order} and {b.order}"
        )
    lim = (order + 1) << ctx.wshift
    bad = [k for k in set(a.terms) | set(b.terms)
           if k < lim and a.terms.get(k, 0) != b.terms.get(k, 0)]
    if not bad:
        return MatchReport(True, order)
    k = min(bad)
    return MatchReport(False, order, ctx.monomial(k),
                       as_rational(a.terms.get(k, 0)), as_rational(b.terms.get(k, 0)))
