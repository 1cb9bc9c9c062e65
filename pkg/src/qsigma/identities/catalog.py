"""The registry: one record per verified identity."""

from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from . import builders as bld
from .records import (
    FORMAL,
    MODE_DUAL,
    MODE_FORMAL,
    MODE_RATIONAL,
    NUMERIC,
    Constraint,
    IdentityRecord,
    ParameterSpec,
    magnitude,
    not_q_power,
)

P = ParameterSpec
BOTH = (FORMAL, NUMERIC)

small = magnitude(mpq(1, 13), mpq(1, 5))
moderate = magnitude(mpq(1, 13), mpq(1, 2))
medium = magnitude(mpq(1, 13), 2)
large = magnitude(2, 6)


def _abs_lt(name, other=None):
    """|name| < |other|, or |name| < 1 without ``other``."""
    if other is None:
        return Constraint((name,), lambda v: abs(v) < 1, f"|{name}| < 1")
    return Constraint((name, other), lambda v, w: abs(v) < abs(w), f"|{name}| < |{other}|")


def _no_pole(expr_desc, names_, fn):
    return Constraint(tuple(names_) + ("q",), lambda *v: not_q_power(fn(*v[:-1]), v[-1]),
                      f"{expr_desc} != q^-j")


def _distinct(x, y):
    return Constraint((x, y), lambda a, b: a != b, f"{x} != {y}")


def _nonzero(name):
    return Constraint((name,), lambda v: v != 0, f"{name} != 0")


_AGARWAL_POLES = (
    _no_pole("beta", ["beta"], lambda b: b),
    _no_pole("delta", ["delta"], lambda d: d),
    _no_pole("t", ["t"], lambda t: t),
    _no_pole("beta/(alpha t)", ["alpha", "beta", "t"], lambda a, b, t: b / (a * t)),
    _no_pole("alpha t/beta", ["alpha", "beta", "t"], lambda a, b, t: a * t / b),
    _no_pole("gamma q/beta", ["gamma", "beta", "q"], lambda g, b, q: g * q / b),
    _abs_lt("t"),
    Constraint(("gamma", "q", "beta"), lambda g, q, b: abs(g * q / b) < 1, "|gamma q/beta| < 1"),
    Constraint(("q", "alpha"), lambda q, a: abs(q / a) < 1, "|q/alpha| < 1"),
    _abs_lt("gamma"),
)


def _records() -> list[IdentityRecord]:
    R = []
    R.append(IdentityRecord(
        "qbin", "q-binomial theorem",
        (P("a", MODE_RATIONAL, medium, "any rational"),
         P("z", MODE_FORMAL, moderate, "|z| < 1")),
        BOTH, bld.qbin_lhs, bld.qbin_rhs,
        constraints=(_abs_lt("z"), _no_pole("z", ["z"], lambda z: z))))
    R.append(IdentityRecord(
        "heine", "Heine transformation of a 2phi1",
        (P("a", MODE_RATIONAL, medium, "any rational"),
         P("b", MODE_FORMAL, moderate, "|b| < 1"),
         P("c", MODE_FORMAL, medium, "c != q^-j"),
         P("t", MODE_FORMAL, moderate, "|t| < 1")),
        BOTH, bld.phi21_lhs, bld.heine_rhs,
        constraints=(_abs_lt("b"), _abs_lt("t"), _no_pole("c", ["c"], lambda c: c),
                     _no_pole("a t", ["a", "t"], lambda a, t: a * t))))
    R.append(IdentityRecord(
        "heine2", "second iterate of the Heine transformation",
        (P("a", MODE_RATIONAL, medium, "any rational"),
         P("b", MODE_RATIONAL, magnitude(mpq(1, 4), mpq(1, 2)), "b != 0"),
         P("c", MODE_FORMAL, small, "|c| < |b|, c != q^-j"),
         P("t", MODE_FORMAL, moderate, "|t| < 1")),
        BOTH, bld.phi21_lhs, bld.heine2_rhs,
        constraints=(_nonzero("b"), _abs_lt("t"), _abs_lt("c", "b"),
                     _no_pole("c", ["c"], lambda c: c),
                     _no_pole("b t", ["b", "t"], lambda b, t: b * t))))
    R.append(IdentityRecord(
        "fine1551", "Fine's transformation of sum t^n/(bq)_n",
        (P("b", MODE_RATIONAL, medium, "b != 1, bq != q^-j"),
         P("t", MODE_FORMAL, moderate, "|t| < 1")),
        (FORMAL,), bld.fine_lhs, bld.fine_rhs,
        constraints=(Constraint(("b",), lambda b: b != 1, "b != 1"), _abs_lt("t"),
                     _no_pole("b q", ["b", "q"], lambda b, q: b * q))))

    agarwal_params = (
        P("alpha", MODE_RATIONAL, large, "|q/alpha| < 1"),
        P("beta", MODE_RATIONAL, large, "beta != q^-j"),
        P("gamma", MODE_RATIONAL, small, "|gamma| < 1"),
        P("delta", MODE_RATIONAL, moderate, "delta != q^-j"),
        P("t", MODE_RATIONAL, small, "|t| < 1, t != q^-j"),
    )
    R.append(IdentityRecord(
        "agarwal", "Agarwal's transformation of a two-denominator series",
        agarwal_params, (NUMERIC,), bld.agarwal_lhs, bld.agarwal_rhs,
        constraints=_AGARWAL_POLES))
    adsy_params = agarwal_params + (
        P("e", MODE_RATIONAL, small, "|e| < 1"),
        P("f", MODE_RATIONAL, moderate, "f != q^-j"),
    )
    R.append(IdentityRecord(
        "adsy3", "three-denominator extension of Agarwal's transformation",
        adsy_params, (NUMERIC,), bld.three_denominator_lhs, bld.three_denominator_rhs,
        constraints=_AGARWAL_POLES + (_abs_lt("e"), _no_pole("f", ["f"], lambda f: f))))
    tiny = magnitude(mpq(1, 13), mpq(1, 8))
    nine_params = (
        P("alpha", MODE_RATIONAL, large, "|q/alpha| < 1"),
        P("beta", MODE_RATIONAL, large, "beta != q^-j"),
        P("gamma", MODE_RATIONAL, tiny, "|gamma| < 1"),
        P("delta", MODE_RATIONAL, moderate, "delta != q^-j"),
        P("e", MODE_RATIONAL, tiny, "|e| < 1"),
        P("f", MODE_RATIONAL, moderate, "f != q^-j"),
        P("g", MODE_RATIONAL, tiny, "|g| < 1"),
        P("h", MODE_RATIONAL, moderate, "h != q^-j"),
        P("t", MODE_RATIONAL, tiny, "|t| < 1, t != q^-j"),
    )
    R.append(IdentityRecord(
        "nineparam", "nine-parameter transformation with four denominators",
        nine_params, (NUMERIC,), bld.nineparam_lhs, bld.nineparam_rhs,
        q_sampler=magnitude(mpq(1, 13), mpq(1, 8)),
        constraints=_AGARWAL_POLES + (_abs_lt("e"), _abs_lt("g"),
                                      _no_pole("f", ["f"], lambda f: f),
                                      _no_pole("h", ["h"], lambda h: h))))

    R.append(IdentityRecord(
        "recip3", "three-variable reciprocity theorem",
        (P("a", MODE_RATIONAL, magnitude(mpq(1, 4), mpq(5, 6)), "|c| < |a| < 1"),
         P("b", MODE_RATIONAL, magnitude(mpq(1, 4), mpq(5, 6)), "|c| < |b| < 1"),
         P("c", MODE_FORMAL, magnitude(mpq(1, 13), mpq(1, 5)), "|c| < |a|, |b|")),
        BOTH, bld.recip3_lhs, bld.recip3_rhs,
        constraints=(_abs_lt("a"), _abs_lt("b"), _abs_lt("c", "a"), _abs_lt("c", "b"),
                     _nonzero("a"), _nonzero("b"), _distinct("a", "b"))))
    R.append(IdentityRecord(
        "recip4", "four-variable reciprocity theorem",
        (P("a", MODE_RATIONAL, magnitude(mpq(1, 4), mpq(5, 6)), "|c|, |d| < |a| < 1"),
         P("b", MODE_RATIONAL, magnitude(mpq(1, 4), mpq(5, 6)), "|c|, |d| < |b| < 1"),
         P("c", MODE_FORMAL, magnitude(mpq(1, 13), mpq(1, 5)), "|c| < |a|, |b|"),
         P("d", MODE_FORMAL, magnitude(mpq(1, 13), mpq(1, 5)), "|d| < |a|, |b|")),
        BOTH, bld.recip4_lhs, bld.recip4_rhs,
        constraints=(_abs_lt("a"), _abs_lt("b"), _abs_lt("c", "a"), _abs_lt("c", "b"),
                     _abs_lt("d", "a"), _abs_lt("d", "b"),
                     _nonzero("a"), _nonzero("b"), _distinct("a", "b"))))

    cfree = P("c", MODE_FORMAL, moderate, "|c| < 1")
    dfree = P("d", MODE_FORMAL, moderate, "|d| < 1")
    zdual = P("z", MODE_DUAL, None, "z = 1 + eps")
    R.append(IdentityRecord(
        "kang75", "(c)_n q^{n(n+1)/2}/((q)_n(-cq)_n) summation",
        (cfree,), (FORMAL,), bld.c_summation_lhs, bld.c_summation_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "rcq", "sigma(c,q) as the derivative at z=1 of the specialized three-variable reciprocity",
        (cfree, zdual), (FORMAL,), bld.sigma_c_lhs, bld.sigma_c_derivative_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "aftagar", "transformed series 2 sum (c)_n z^n q^{n(n+1)/2}/((zq)_n(-c)_{n+1})",
        (cfree, zdual), (FORMAL,), bld.rho3_special_lhs, bld.rho3_transformed_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "sigma1", "one-parameter representation of sigma(q)",
        (cfree,), BOTH, bld.sigma_lhs, bld.sigma_one_param_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "remark1", "sigma(c,q) via the triple product evaluation",
        (cfree, zdual), (FORMAL,), bld.sigma_c_lhs, bld.sigma_c_triple_product_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "lemma4heine", "summation of sum (c,d,-cd)_n (1+cdq^{2n}) q^{n(n+1)/2}/(-cq,-dq,q)_n",
        (cfree, dfree), (FORMAL,), bld.cd_summation_lhs, bld.cd_summation_rhs,
        constraints=(_abs_lt("c"), _abs_lt("d"))))
    cz_vals = magnitude(mpq(1, 13), mpq(1, 2))
    chu_params = tuple(P(n, MODE_RATIONAL, cz_vals, "nonzero, no vanishing denominators")
                       for n in "xybcd")
    R.append(IdentityRecord(
        "chuzhang", "five-parameter form of the four-variable reciprocity theorem",
        chu_params, BOTH, bld.five_param_lhs, bld.five_param_rhs,
        constraints=tuple(_nonzero(n) for n in "xybcd") + (
            _no_pole("b y", ["b", "y"], lambda b, y: b * y),
            _no_pole("d y", ["d", "y"], lambda d, y: d * y),
            _no_pole("c y q", ["c", "y", "q"], lambda c, y, q: c * y * q),
            _no_pole("b x", ["b", "x"], lambda b, x: b * x),
            _no_pole("c x", ["c", "x"], lambda c, x: c * x),
            _no_pole("d x", ["d", "x"], lambda d, x: d * x))))
    R.append(IdentityRecord(
        "bbt", "sigma(c,d,q) as the derivative at z=1 of the specialized four-variable reciprocity",
        (cfree, dfree, zdual), (FORMAL,), bld.sigma_cd_lhs, bld.sigma_cd_derivative_rhs,
        constraints=(_abs_lt("c"), _abs_lt("d"))))
    cd_small = magnitude(mpq(1, 13), mpq(1, 8))
    R.append(IdentityRecord(
        "bts2", "transformed series 2 sum (d,c,-cd/z)_n (1+cdq^{2n}) z^n q^{n(n+1)/2}/((zq)_n(-c,-d)_{n+1})",
        (P("c", MODE_FORMAL, cd_small, "|c| < 1"), P("d", MODE_FORMAL, cd_small, "|d| < 1"),
         P("z", MODE_DUAL, magnitude(mpq(6, 11), mpq(11, 6), signed=False), "1/2 < z < 2, z != 1")),
        BOTH, bld.rho4_special_lhs, bld.rho4_transformed_rhs, q_sampler=tiny,
        constraints=(_abs_lt("c"), _abs_lt("d"),
                     Constraint(("z",), lambda z: mpq(1, 2) < z < 2 and z != 1, "1/2 < z < 2, z != 1"),
                     Constraint(("c", "z"), lambda c, z: abs(c) < abs(z), "|c| < |z|"),
                     Constraint(("d", "z"), lambda d, z: abs(d) < abs(z), "|d| < |z|"))))
    R.append(IdentityRecord(
        "sigma2", "two-parameter representation of sigma(q)",
        (P("c", MODE_FORMAL, cd_small, "|c| < 1"),
         P("d", MODE_FORMAL, cd_small, "|d| < 1")),
        BOTH, bld.sigma_lhs, bld.sigma_two_param_rhs, default_order=14, q_sampler=tiny,
        constraints=(_abs_lt("c"), _abs_lt("d"))))
    R.append(IdentityRecord(
        "lambdad0", "correction term of the two-parameter representation at d = 0",
        (cfree,), (FORMAL,), bld.lambda_d0_lhs, bld.lambda_d0_rhs, constraints=(_abs_lt("c"),)))
    R.append(IdentityRecord(
        "remark2", "sigma(c,d,q) via the triple product evaluation",
        (cfree, dfree, zdual), (FORMAL,), bld.sigma_cd_lhs, bld.sigma_cd_triple_product_rhs, default_order=14,
        constraints=(_abs_lt("c"), _abs_lt("d"))))
    R.append(IdentityRecord(
        "rsi1", "sum of tails S(q) - (-q)_n", (), (FORMAL,), bld.tails_plus_lhs, bld.tails_plus_rhs))
    R.append(IdentityRecord(
        "rsi2", "sum of tails S(q) - 1/(q;q^2)_{n+1}", (), (FORMAL,), bld.tails_odd_lhs, bld.tails_odd_rhs))
    R.append(IdentityRecord(
        "euler", "Euler's product formula for (-w)_inf",
        (P("w", MODE_FORMAL, medium, "any w"),), (FORMAL,), bld.euler_lhs, bld.euler_rhs))
    R.append(IdentityRecord(
        "lebesgue", "Lebesgue's identity",
        (P("a", MODE_FORMAL, medium, "any a"),), (FORMAL,), bld.lebesgue_lhs, bld.lebesgue_rhs))
    R.append(IdentityRecord(
        "jtp", "Jacobi triple product",
        (P("z", MODE_RATIONAL, magnitude(mpq(1, 4), 4), "z != 0"),), (FORMAL,),
        bld.triple_product_lhs, bld.triple_product_rhs, constraints=(_nonzero("z"),)))
    return sorted(R, key=lambda r: r.id)


@lru_cache(maxsize=1)
def _registry() -> tuple[IdentityRecord, ...]:
    recs = tuple(_records())
    ids = [r.id for r in recs]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate identity ids")
    return recs


def registry() -> list[IdentityRecord]:
    """All identity records, ordered by id."""
    return list(_registry())


def get_record(identity_id: str) -> IdentityRecord:
    for r in _registry():
        if r.id == identity_id:
            return r
    raise KeyError(f"unknown identity {identity_id!r}")
