"""The sigma family of q-series, a partition-counting oracle, and T(n).

The ``*_expr`` builders take a backend (see :mod:`qsigma.backends`) so the
same code serves the exact and the numeric evaluators; the ``*_series``
functions are their formal instantiations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import fps
from .backends import FormalBackend
from .errors import PreconditionError
from .fps import FormalSeries, SeriesContext


def tri(n: int) -> int:
    return n * (n + 1) // 2


# -- backend-generic builders ------------------------------------------------------------
def sigma_expr(B):
    """sum_n q^{n(n+1)/2} / (-q)_n."""
    mq = -B.q
    return B.qsum(lambda n: B.scaled(B.qpow(tri(n)), lambda: B.inv(B.poch(mq, n))), tri)


def sigma_star_expr(B):
    """2 sum_{n>=1} (-1)^n q^{n^2} / (q; q^2)_n."""
    def term(n):
        sign = -2 if n % 2 else 2
        return B.scaled(B.qpow(n * n) * sign, lambda: B.inv(B.poch(B.q, n, 2)))

    return B.qsum(term, lambda n: n * n, 1)


def sigma_c_expr(B, c):
    """sum_n q^{n(n+1)/2} / ((-q)_n (1 - c q^n))."""
    mq = -B.q
    return B.qsum(
        lambda n: B.scaled(B.qpow(tri(n)),
                           lambda: B.inv(B.poch(mq, n) * (1 - c * B.qpow(n)))),
        tri,
    )


def sigma_cd_expr(B, c, d):
    """sum_n (-cd)_n (1 - cd q^{2n}) q^{n(n+1)/2} / ((-q)_n (1 - c q^n)(1 - d q^n))."""
    mq = -B.q
    mcd = -(c * d)

    def term(n):
        qn = B.qpow(n)
        return B.scaled(
            B.qpow(tri(n)),
            lambda: B.poch(mcd, n) * (1 + mcd * B.qpow(2 * n))
            * B.inv(B.poch(mq, n) * (1 - c * qn) * (1 - d * qn)),
        )

    return B.qsum(term, tri)


# -- formal instantiations ------------------------------------------------------------
def sigma_series(ctx: SeriesContext) -> FormalSeries:
    return sigma_expr(FormalBackend(ctx, {}))


def sigma_star_series(ctx: SeriesContext) -> FormalSeries:
    return sigma_star_expr(FormalBackend(ctx, {}))


def sigma_c(ctx: SeriesContext, c) -> FormalSeries:
    B = FormalBackend(ctx, {})
    return sigma_c_expr(B, B._lift(c))


def sigma_cd(ctx: SeriesContext, c, d) -> FormalSeries:
    B = FormalBackend(ctx, {})
    return sigma_cd_expr(B, B._lift(c), B._lift(d))


# -- combinatorial oracle -------------------------------------------------------------
def _distinct_partitions(n: int, max_part: int):
    """Yield partitions of n into distinct parts <= max_part, parts decreasing."""
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _distinct_partitions(n - first, first - 1):
            yield (first,) + rest


def sigma_oracle_coeff(n: int) -> int:
    """Distinct-part partitions of n with even rank minus those with odd rank."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    total = 0
    for parts in _distinct_partitions(n, n):
        rank = (parts[0] - len(parts)) if parts else 0
        total += -1 if rank % 2 else 1
    return total


# -- coefficient tables ---------------------------------------------------------------
def _integer_coefficients(series: FormalSeries, upto: int) -> list[int]:
    out = []
    for i, c in enumerate(series.q_coefficients(upto)):
        if c.denominator != 1:
            raise AssertionError(f"non-integer coefficient {c} at q^{i}")
        out.append(int(c))
    return out


@lru_cache(maxsize=8)
def _sigma_table(upto: int) -> tuple[int, ...]:
    ctx = fps.make_context({}, max(upto, 1))
    return tuple(_integer_coefficients(sigma_series(ctx), upto))


@lru_cache(maxsize=8)
def _sigma_star_table(upto: int) -> tuple[int, ...]:
    ctx = fps.make_context({}, max(upto, 1))
    return tuple(_integer_coefficients(sigma_star_series(ctx), upto))


@dataclass(frozen=True)
class SigmaCoefficients:
    values: tuple[int, ...]
    star_values: tuple[int, ...]

    @classmethod
    def compute(cls, upto: int) -> "SigmaCoefficients":
        """s_0..s_upto and s*_1..s*_upto."""
        star = _sigma_star_table(upto)
        if star[0] != 0:
            raise AssertionError("sigma* must have zero constant term")
        return cls(_sigma_table(upto), star[1:])


def t_coefficient(n: int) -> int:
    """T(n) for n = 1 (mod 24): s_m when n = 24m+1, s*_m when n = 1-24m."""
    if n % 24 != 1:
        raise PreconditionError(f"T(n) needs n = 1 (mod 24), got {n}")
    if n > 0:
        m = (n - 1) // 24
        return _sigma_table(max(m, 1))[m]
    m = (1 - n) // 24
    return _sigma_star_table(max(m, 1))[m]
