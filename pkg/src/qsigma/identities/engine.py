"""Running identity records through the formal and numeric backends."""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

from gmpy2 import mpq

from .. import fps, numeric
from ..backends import FormalBackend, NumericBackend
from ..errors import DomainError, PreconditionError
from ..fps import EPS, Q, Rational, as_rational, format_rational
from ..numeric import PointAssignment
from .catalog import get_record, registry
from .records import (
    FORMAL,
    MODE_DUAL,
    MODE_FIXED,
    MODE_FORMAL,
    MODE_RATIONAL,
    NUMERIC,
    IdentityRecord,
)

PASS = "pass"
FAIL = "fail"
PRECONDITION = "precondition-error"

MAX_SAMPLE_ATTEMPTS = 1000
REPORT_KEYS = ("identity_id", "backend", "order", "precision", "params", "status",
               "first_mismatch", "residual", "terms_evaluated", "elapsed_ms")


@dataclass
class VerificationReport:
    identity_id: str
    backend: str
    order: int | None
    precision: int | None
    params: dict[str, str]
    status: str
    first_mismatch: dict[str, str] | None = None
    residual: str | None = None
    terms_evaluated: int = 0
    elapsed_ms: float = 0.0
    # human-readable reason for a precondition error; not part of the schema
    message: str = field(default="", compare=False)

    def __post_init__(self):
        if self.status == FAIL and self.first_mismatch is None and self.residual is None:
            raise ValueError("a failing report needs a mismatch witness or a residual")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in REPORT_KEYS}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: Mapping) -> "VerificationReport":
        return cls(**{k: d[k] for k in REPORT_KEYS})


def _resolve_record(identity) -> IdentityRecord:
    return identity if isinstance(identity, IdentityRecord) else get_record(identity)


def _check_constraints(record: IdentityRecord, values: Mapping[str, Rational]) -> None:
    for c in record.constraints:
        if c.applies(values) and not c.holds(values):
            shown = ", ".join(f"{n}={format_rational(values[n])}" for n in c.names)
            raise DomainError(f"{c.description} violated ({shown})")


def _parse_overrides(record: IdentityRecord, overrides: Mapping | None) -> dict[str, Rational]:
    out = {}
    for name, v in (overrides or {}).items():
        if name != Q and name not in record.param_names:
            raise DomainError(f"{record.id} has no parameter {name!r}")
        try:
            out[name] = as_rational(v)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"bad value for {name}: {exc}") from None
    return out


def sample_point(record: IdentityRecord, rng: random.Random, names,
                 fixed: Mapping[str, Rational], with_q: bool) -> dict[str, Rational]:
    """Draw values for ``names`` (and q) satisfying every applicable constraint.

    Values in ``fixed`` are kept; a violation involving only fixed values is
    reported as a domain error rather than resampled.
    """
    _check_constraints(record, fixed)
    misses: dict[str, int] = {}
    for _ in range(MAX_SAMPLE_ATTEMPTS):
        vals = dict(fixed)
        if with_q and Q not in vals:
            vals[Q] = record.q_sampler(rng)
        for n in names:
            if n not in vals:
                sampler = record.numeric_sampler(n)
                if sampler is None:
                    raise DomainError(f"{record.id}: parameter {n!r} has no sampler")
                vals[n] = sampler(rng)
        broken = [c.description for c in record.constraints
                  if c.applies(vals) and not c.holds(vals)]
        if not broken:
            return vals
        for desc in broken:
            misses[desc] = misses.get(desc, 0) + 1
    worst = max(misses, key=misses.get)
    raise DomainError(f"no admissible sample after {MAX_SAMPLE_ATTEMPTS} draws "
                      f"(most often violated: {worst})")


def _rng(record_id: str, backend: str, seed: int, index: int = 0) -> random.Random:
    return random.Random(f"{record_id}:{backend}:{seed}:{index}")


def _elapsed(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000.0, 3)


# -- formal ----------------------------------------------------------------------------
@dataclass
class FormalSetup:
    ctx: fps.SeriesContext
    bindings: dict[str, object]
    shown: dict[str, str]
    values: dict[str, Rational]


def formal_setup(record: IdentityRecord, order: int, seed: int = 0,
                 overrides: Mapping | None = None) -> FormalSetup:
    """Context and parameter bindings for one formal run."""
    fixed = _parse_overrides(record, overrides)
    if Q in fixed:
        raise DomainError("q is the series variable in the formal backend")
    formal, dual, rational = [], [], []
    for p in record.params:
        if p.name in fixed:
            if p.mode == MODE_DUAL:
                raise DomainError(f"{p.name} is the differentiation variable; it cannot be fixed")
            rational.append(p.name)
        elif p.mode == MODE_FORMAL:
            formal.append(p.name)
        elif p.mode == MODE_DUAL:
            dual.append(p.name)
        elif p.mode in (MODE_RATIONAL, MODE_FIXED):
            rational.append(p.name)
        else:
            raise ValueError(f"unknown parameter mode {p.mode!r}")
    values = sample_point(record, _rng(record.id, FORMAL, seed), rational, fixed, with_q=False)
    variables: dict[str, object] = {n: 1 for n in formal}
    if dual:
        variables[EPS] = (0, 2)
    ctx = fps.make_context(variables, order)
    bindings: dict[str, object] = {}
    shown: dict[str, str] = {}
    for p in record.params:
        if p.name in formal:
            bindings[p.name], shown[p.name] = p.name, "formal"
        elif p.name in dual:
            bindings[p.name], shown[p.name] = "dual", "dual"
        else:
            bindings[p.name] = values[p.name]
            shown[p.name] = format_rational(values[p.name])
    return FormalSetup(ctx, bindings, shown, values)


def build_formal(record: IdentityRecord, setup: FormalSetup, B: FormalBackend | None = None):
    """(lhs, rhs, backend) in the setup's context."""
    B = B or FormalBackend(setup.ctx, setup.bindings)
    lhs = B._lift(record.lhs(B))
    rhs = B._lift(record.rhs(B))
    return lhs, rhs, B


def verify_formal(identity, order: int | None = None, seed: int = 0,
                  params: Mapping | None = None) -> VerificationReport:
    """Exact comparison of both sides through total weight ``order``."""
    record = _resolve_record(identity)
    if FORMAL not in record.backends:
        raise ValueError(f"{record.id} has no formal backend")
    order = record.default_order if order is None else int(order)
    if order < 1:
        raise ValueError("order must be at least 1")
    t0 = time.perf_counter()
    shown = {n: format_rational(as_rational(v)) for n, v in (params or {}).items()
             if _is_rational_like(v)}
    B = None
    try:
        setup = formal_setup(record, order, seed, params)
        shown = setup.shown
        B = FormalBackend(setup.ctx, setup.bindings)
        lhs, rhs, _ = build_formal(record, setup, B)
        match = fps.equal_up_to(lhs, rhs, order)
    except PreconditionError as exc:
        return VerificationReport(record.id, FORMAL, order, None, shown, PRECONDITION,
                                  terms_evaluated=B.terms_evaluated if B else 0,
                                  elapsed_ms=_elapsed(t0), message=str(exc))
    mismatch = None
    if not match.equal:
        mismatch = {"monomial": str(match.monomial), "lhs": format_rational(match.lhs),
                    "rhs": format_rational(match.rhs)}
    return VerificationReport(record.id, FORMAL, order, None, shown,
                              PASS if match.equal else FAIL, mismatch, None,
                              B.terms_evaluated, _elapsed(t0))


def _is_rational_like(v) -> bool:
    try:
        as_rational(v)
        return True
    except (TypeError, ValueError):
        return False


# -- numeric ---------------------------------------------------------------------------
def numeric_point(record: IdentityRecord, seed: int, index: int,
                  overrides: Mapping | None = None) -> dict[str, Rational]:
    fixed = _parse_overrides(record, overrides)
    return sample_point(record, _rng(record.id, NUMERIC, seed, index),
                        record.param_names, fixed, with_q=True)


def evaluate_numeric(record: IdentityRecord, values: Mapping[str, Rational], bits: int,
                     lhs: Callable | None = None, rhs: Callable | None = None):
    """(lhs value, rhs value, terms) at a point; must run inside numeric.precision."""
    B = NumericBackend(PointAssignment(values), bits)
    a = numeric.to_bigfloat((lhs or record.lhs)(B))
    b = numeric.to_bigfloat((rhs or record.rhs)(B))
    return a, b, B.terms_evaluated


def _verify_point(record: IdentityRecord, bits: int, seed: int, index: int,
                  overrides: Mapping | None) -> VerificationReport:
    t0 = time.perf_counter()
    shown = {}
    terms = 0
    try:
        values = numeric_point(record, seed, index, overrides)
        shown = {k: format_rational(v) for k, v in values.items()}
        with numeric.precision(bits):
            a, b, terms = evaluate_numeric(record, values, bits)
            res = abs(a - b)
            ok = res < numeric.residual_tolerance(bits)
            res_s = numeric.format_bigfloat(res)
    except PreconditionError as exc:
        return VerificationReport(record.id, NUMERIC, None, bits, shown, PRECONDITION,
                                  terms_evaluated=terms, elapsed_ms=_elapsed(t0),
                                  message=str(exc))
    return VerificationReport(record.id, NUMERIC, None, bits, shown, PASS if ok else FAIL,
                              None, res_s, terms, _elapsed(t0))


def verify_numeric(identity, precision: int | None = None, seed: int = 0, samples: int = 3,
                   params: Mapping | None = None) -> list[VerificationReport]:
    """One report per seeded sample point; pass iff |lhs - rhs| < 2^(-P/2)."""
    record = _resolve_record(identity)
    if NUMERIC not in record.backends:
        raise ValueError(f"{record.id} has no numeric backend")
    bits = record.default_precision if precision is None else int(precision)
    if bits < 64:
        raise ValueError("precision must be at least 64 bits")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    return [_verify_point(record, bits, seed, i, params) for i in range(samples)]


# -- everything ------------------------------------------------------------------------
@dataclass
class Summary:
    reports: list[VerificationReport]

    @property
    def failures(self) -> list[VerificationReport]:
        return [r for r in self.reports if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, PRECONDITION: 0}
        for r in self.reports:
            out[r.status] += 1
        return out


def verify_all(order: int | None = None, precision: int | None = None, seed: int = 0,
               samples: int = 1, records=None) -> Summary:
    """Every record on every backend it supports, in id order.

    ``order`` overrides the per-record formal default only when given;
    a numeric entry folds its sample reports into the worst of them.
    """
    reports = []
    for rec in sorted(records if records is not None else registry(), key=lambda r: r.id):
        for backend in sorted(rec.backends):
            if backend == FORMAL:
                reports.append(verify_formal(rec, order, seed))
            else:
                reports.append(_worst(verify_numeric(rec, precision, seed, samples)))
    return Summary(reports)


_RANK = {PASS: 0, PRECONDITION: 1, FAIL: 2}


def _worst(reports: list[VerificationReport]) -> VerificationReport:
    worst = max(reports, key=lambda r: _RANK[r.status])
    worst.terms_evaluated = sum(r.terms_evaluated for r in reports)
    worst.elapsed_ms = round(sum(r.elapsed_ms for r in reports), 3)
    return worst


# -- cross-backend -----------------------------------------------------------------------
def formal_at_point(record: IdentityRecord, order: int, point: Mapping[str, Rational],
                    bits: int = 256):
    """Both sides as order-``order`` series, evaluated at ``point``.

    Formal parameters take their values from ``point``; eps is set to 0.
    """
    setup = formal_setup(record, order, overrides={
        n: v for n, v in point.items()
        if n != Q and record.param(n).mode not in (MODE_FORMAL, MODE_DUAL)})
    lhs, rhs, _ = build_formal(record, setup)
    vals = {n: point[n] for n in setup.ctx.names if n not in (EPS,)}
    if setup.ctx.has(EPS):
        vals[EPS] = 0
    pt = PointAssignment(vals)
    coef = max((abs(c) for s in (lhs, rhs) for c in s.terms.values()), default=0)
    return (numeric.eval_formal_at(lhs, pt, bits), numeric.eval_formal_at(rhs, pt, bits),
            as_rational(coef))


CROSS_Q = mpq(1, 10)
# values for formal parameters at the cross-check point, by position
_CROSS_FORMAL_VALUES = (mpq(1, 50), mpq(-1, 60), mpq(1, 70), mpq(-1, 90))


def cross_backend_point(record: IdentityRecord, seed: int = 0) -> dict[str, Rational]:
    """q = 1/10, rational parameters as in the formal run, formal ones small, z = 1.

    Formal parameters get magnitudes <= 1/50 so that every monomial of total
    weight w is bounded by 10^-w at the point.
    """
    setup = formal_setup(record, 1, seed)
    formal = iter(_CROSS_FORMAL_VALUES)
    point: dict[str, Rational] = {Q: CROSS_Q}
    for p in record.params:
        if p.mode == MODE_FORMAL:
            point[p.name] = next(formal)
        elif p.mode == MODE_DUAL:
            point[p.name] = mpq(1)
        else:
            point[p.name] = setup.values[p.name]
    return point


def cross_backend_bound(order: int, max_coefficient) -> Rational:
    """2 q^(N+1) / (1 - q) times the largest coefficient, at q = 1/10."""
    return 2 * CROSS_Q ** (order + 1) / (1 - CROSS_Q) * as_rational(max_coefficient)


def direct_at_point(record: IdentityRecord, point: Mapping[str, Rational], bits: int = 256):
    with numeric.precision(bits):
        a, b, _ = evaluate_numeric(record, point, bits)
    return a, b


__all__ = [
    "PASS", "FAIL", "PRECONDITION", "REPORT_KEYS", "VerificationReport", "Summary",
    "verify_formal", "verify_numeric", "verify_all", "numeric_point", "sample_point",
    "formal_setup", "build_formal", "evaluate_numeric", "formal_at_point", "direct_at_point",
    "cross_backend_point", "cross_backend_bound",
]
