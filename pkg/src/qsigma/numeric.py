"""High-precision evaluation of q-expressions at rational points.

Values are ``gmpy2.mpfr`` at a caller-chosen binary precision.  Infinite sums
and products stop by a heuristic tail rule (:class:`TailPolicy`): a run of
``min_consecutive`` terms below the threshold, together with an observed term
ratio no larger than ``ratio_cap`` (the ratio is ignored once terms sit at
the rounding floor, where it carries no information).  Anything else runs into ``max_terms`` and
raises :class:`~qsigma.errors.ConvergenceError`, so a divergent sum is never
silently truncated.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import ContextError, ConvergenceError, DomainError, PoleError, PreconditionError
from .fps import EPS, FormalSeries, Q, Rational, as_rational, format_rational

BigFloat = type(mpfr(0))

DEFAULT_PRECISION = 256
# extra working bits for the point-evaluation entry points; results are rounded back to P
GUARD_BITS = 32


@contextmanager
def precision(bits: int):
    """Run the block with gmpy2 arithmetic at ``bits`` of precision."""
    if bits < 64:
        raise PreconditionError("precision must be at least 64 bits")
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def to_bigfloat(x) -> BigFloat:
    if isinstance(x, BigFloat):
        return x
    return mpfr(as_rational(x))


def format_bigfloat(x, digits: int = 6) -> str:
    """Scientific notation without going through a machine double."""
    x = mpfr(x)
    if x == 0:
        return "0"
    if not gmpy2.is_finite(x):
        return str(x)
    mant, exp, _ = x.digits(10, digits + 1)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"


def pole_threshold(bits: int) -> BigFloat:
    return mpfr(2) ** (-(bits // 2))


def residual_tolerance(bits: int) -> BigFloat:
    return mpfr(2) ** (-(bits // 2))


@dataclass(frozen=True)
class TailPolicy:
    tol_tail: BigFloat
    min_consecutive: int = 5
    ratio_cap: Rational = mpq(99, 100)
    max_terms: int = 10_000

    @classmethod
    def for_precision(cls, bits: int = DEFAULT_PRECISION, **kw) -> "TailPolicy":
        with precision(bits):
            tol = mpfr(2) ** (-(bits - 10))
        return cls(tol_tail=tol, **kw)


@dataclass
class SumDiagnostics:
    terms: int = 0
    last_ratio: BigFloat | None = None


@dataclass(frozen=True)
class PointAssignment:
    """Exact rational values for the variables of an expression, including q."""

    values: Mapping[str, Rational] = field(default_factory=dict)

    def __post_init__(self):
        vals = {k: as_rational(v) for k, v in self.values.items()}
        object.__setattr__(self, "values", vals)
        if Q in vals and not abs(vals[Q]) < 1:
            raise DomainError(f"|q| < 1 required, got q = {format_rational(vals[Q])}")

    def __getitem__(self, name: str) -> Rational:
        try:
            return self.values[name]
        except KeyError:
            raise ContextError(f"no value assigned to {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def as_strings(self) -> dict[str, str]:
        return {k: format_rational(v) for k, v in self.values.items()}


def check_pole(x: BigFloat, bits: int, what: str = "denominator factor") -> None:
    if abs(x) < pole_threshold(bits):
        raise PoleError(f"{what} vanishes at this point (|value| = {format_bigfloat(abs(x))})")


def eval_qsum(term: Callable[[int], BigFloat], policy: TailPolicy, start: int = 0,
              scale=1) -> tuple[BigFloat, SumDiagnostics]:
    """Sum term(n), n >= start, under the tail policy.

    ``scale`` bounds the magnitude of a factor the sum will later be
    multiplied by; the threshold is divided by it so the final absolute
    error stays near ``tol_tail``.
    """
    tol = policy.tol_tail / scale if scale else policy.tol_tail
    # below this, terms are rounding noise and their ratios carry no information
    noise = policy.tol_tail / 64
    total = mpfr(0)
    diag = SumDiagnostics()
    small = 0
    prev = None
    ratio = None
    n = start
    while True:
        t = term(n)
        total += t
        diag.terms += 1
        a = abs(t)
        if prev is not None:
            if prev == 0:
                ratio = mpfr(0) if a == 0 else mpfr("inf")
            else:
                ratio = a / prev
            diag.last_ratio = ratio
        if a < tol:
            small += 1
        else:
            small = 0
        if small >= policy.min_consecutive and ratio is not None and (
                ratio <= policy.ratio_cap or a <= noise):
            return total, diag
        if diag.terms >= policy.max_terms:
            raise ConvergenceError(
                f"sum not converged after {policy.max_terms} terms "
                f"(last |term| = {format_bigfloat(a)}, last ratio = "
                f"{format_bigfloat(ratio) if ratio is not None else 'n/a'})"
            )
        prev = a
        n += 1


def eval_poch(a, n: int, q, step: int = 1) -> BigFloat:
    """(a; q^step)_n as a finite product."""
    a, q = to_bigfloat(a), to_bigfloat(q)
    base = q ** step
    r = mpfr(1)
    x = a
    for _ in range(n):
        r *= 1 - x
        x *= base
    return r


def eval_poch_inf_value(a, q, policy: TailPolicy, step: int = 1) -> BigFloat:
    """(a; q^step)_inf under the tail policy applied to |factor - 1|."""
    a, q = to_bigfloat(a), to_bigfloat(q)
    if a == 0:
        return mpfr(1)
    base = q ** step
    if not abs(base) < 1:
        raise DomainError("infinite product needs |q| < 1")
    r = mpfr(1)
    x = a
    small = 0
    k = 0
    ratio_ok = abs(base) <= policy.ratio_cap
    while True:
        r *= 1 - x
        if abs(x) < policy.tol_tail:
            small += 1
            if small >= policy.min_consecutive and ratio_ok:
                return r
        else:
            small = 0
        k += 1
        if k >= policy.max_terms:
            raise ConvergenceError(f"infinite product not converged after {k} factors")
        x *= base


def eval_poch_inf(pt: PointAssignment, a, P: int = DEFAULT_PRECISION,
                  policy: TailPolicy | None = None, step: int = 1) -> BigFloat:
    """(a; q^step)_inf with q taken from the point."""
    policy = policy or TailPolicy.for_precision(P)
    with precision(P + GUARD_BITS):
        r = eval_poch_inf_value(a, pt[Q], policy, step)
    return mpfr(r, P)


def eval_phi_value(numerators: Sequence, denominators: Sequence, argument, q,
                   bits: int, policy: TailPolicy, step: int = 1, scale=1
                   ) -> tuple[BigFloat, SumDiagnostics]:
    nums = [to_bigfloat(a) for a in numerators]
    dens = [to_bigfloat(b) for b in denominators]
    x = to_bigfloat(argument)
    q = to_bigfloat(q)
    if x == 0:
        return mpfr(1), SumDiagnostics(1, None)
    if not abs(x) < 1:
        raise DomainError(f"phi argument must satisfy |x| < 1, got {format_bigfloat(x)}")
    base = q ** step
    state = {"n": 0, "t": mpfr(1), "qn": mpfr(1)}

    def term(n):
        while state["n"] < n:
            qn = state["qn"]
            num = x
            for a in nums:
                num *= 1 - a * qn
            den = 1 - qn * base
            for b in dens:
                f = 1 - b * qn
                check_pole(f, bits, "phi denominator factor")
                den *= f
            state["t"] = state["t"] * num / den
            state["qn"] = qn * base
            state["n"] += 1
        return state["t"]

    return eval_qsum(term, policy, 0, scale)


def eval_phi(pt: PointAssignment, numerators: Sequence, denominators: Sequence, argument,
             P: int = DEFAULT_PRECISION, policy: TailPolicy | None = None,
             step: int = 1) -> BigFloat:
    """Basic hypergeometric series at a point; pole and convergence guarded."""
    policy = policy or TailPolicy.for_precision(P)
    with precision(P + GUARD_BITS):
        r = eval_phi_value(numerators, denominators, argument, pt[Q], P, policy, step)[0]
    return mpfr(r, P)


def eval_formal_at(a: FormalSeries, pt: PointAssignment, P: int = DEFAULT_PRECISION) -> BigFloat:
    """Evaluate the truncated polynomial at a point (eps, if present, must be 0)."""
    ctx = a.ctx
    if ctx.has(EPS):
        if EPS not in pt:
            raise ContextError("eps must be assigned (to 0) for evaluation")
        if pt[EPS] != 0:
            raise PreconditionError("eps must be assigned 0")
    missing = [n for n in ctx.names if n not in pt]
    if missing:
        raise ContextError(f"unassigned variables: {missing}")
    with precision(P + GUARD_BITS):
        vals = [to_bigfloat(pt[n]) for n in ctx.names]
        powers: list[dict[int, BigFloat]] = [{0: mpfr(1)} for _ in vals]
        total = mpfr(0)
        for key in sorted(a.terms):
            term = to_bigfloat(a.terms[key])
            for i, e in enumerate(ctx.exponents(key)):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = vals[i] ** e
                    term *= cache[e]
            total += term
    return mpfr(total, P)

