"""Identity records, parameter declarations and seeded rational sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from gmpy2 import mpq

from ..fps import Rational

FORMAL = "formal"
NUMERIC = "numeric"

# parameter modes in the formal backend
MODE_FORMAL = "formal-weight-1"
MODE_RATIONAL = "rational-sample"
MODE_DUAL = "dual"
MODE_FIXED = "fixed"

MAX_DENOMINATOR = 13

Sampler = Callable[[random.Random], Rational]


def magnitude(lo, hi, signed: bool = True) -> Sampler:
    """Rationals p/k with k <= 13 and lo <= |p/k| <= hi (random sign if signed)."""
    lo, hi = mpq(lo), mpq(hi)

    def sample(rng: random.Random) -> Rational:
        for _ in range(10_000):
            den = rng.randint(1, MAX_DENOMINATOR)
            low = -((-lo.numerator * den) // lo.denominator)  # ceil(lo * den)
            high = (hi.numerator * den) // hi.denominator
            if low > high:
                continue
            x = mpq(rng.randint(low, high), den)
            if x == 0:
                continue
            if signed and rng.random() < 0.5:
                x = -x
            return x
        raise RuntimeError(f"no rational with denominator <= 13 in [{lo}, {hi}]")

    return sample


def fixed(value) -> Sampler:
    v = mpq(value)
    return lambda rng: v


@dataclass(frozen=True)
class ParameterSpec:
    """A free symbol of an identity.

    ``mode`` says how the formal backend treats it; ``sampler`` draws the
    value used in rational mode and by the numeric backend.
    """

    name: str
    mode: str
    sampler: Sampler | None = None
    domain: str = ""


@dataclass(frozen=True)
class Constraint:
    """An exact check on sampled values; evaluated once all names are assigned."""

    names: tuple[str, ...]
    predicate: Callable[..., bool]
    description: str

    def applies(self, values: Mapping[str, Rational]) -> bool:
        return all(n in values for n in self.names)

    def holds(self, values: Mapping[str, Rational]) -> bool:
        return bool(self.predicate(*(values[n] for n in self.names)))


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    title: str
    params: tuple[ParameterSpec, ...]
    backends: tuple[str, ...]
    lhs: Callable
    rhs: Callable
    default_order: int = 25
    default_precision: int = 256
    q_sampler: Sampler = field(default=magnitude(mpq(1, 13), mpq(1, 5)))
    constraints: tuple[Constraint, ...] = ()
    numeric_overrides: Mapping[str, Sampler] = field(default_factory=dict)

    def param(self, name: str) -> ParameterSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def numeric_sampler(self, name: str) -> Sampler | None:
        if name in self.numeric_overrides:
            return self.numeric_overrides[name]
        return self.param(name).sampler

    def with_rhs(self, rhs: Callable) -> "IdentityRecord":
        return replace(self, rhs=rhs)


def not_q_power(x: Rational, q: Rational, limit: int = 64) -> bool:
    """True unless x = q^-j for some 0 <= j <= limit (a vanishing factor 1 - x q^j)."""
    if q == 0:
        return x != 1
    v = mpq(x)
    for _ in range(limit + 1):
        if v == 1:
            return False
        v *= q
        if abs(v) < mpq(1, 10**30):
            return True
    return True


def perturb(record: IdentityRecord, order: int) -> IdentityRecord:
    """Copy of ``record`` whose right side gains an extra q^order."""
    base = record.rhs

    def rhs(B):
        return base(B) + B.qpow(order)

    return replace(record, rhs=rhs)
