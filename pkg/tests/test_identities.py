import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsigma import fps
from qsigma.backends import FormalBackend, NumericBackend
from qsigma.identities import builders, engine, get_record, registry
from qsigma.identities import verify_all, verify_formal, verify_numeric
from qsigma.identities.records import FORMAL, NUMERIC, MODE_DUAL, perturb
from qsigma.numeric import PointAssignment, precision

EXPECTED_IDS = sorted("""
qbin heine heine2 fine1551 agarwal adsy3 nineparam recip3 recip4 kang75 rcq aftagar
sigma1 remark1 lemma4heine chuzhang bbt bts2 sigma2 lambdad0 remark2 rsi1 rsi2 euler
lebesgue jtp""".split())


def test_registry_has_exactly_the_expected_records():
    ids = [r.id for r in registry()]
    assert len(ids) == 26
    assert ids == EXPECTED_IDS
    assert len(set(ids)) == len(ids)


def test_records_declare_backends_and_defaults():
    for r in registry():
        assert r.backends and set(r.backends) <= {FORMAL, NUMERIC}
        assert r.default_precision >= 64
        want = 14 if r.id in ("sigma2", "remark2") else 25
        assert r.default_order == want
        assert [p.name for p in r.params if p.mode == MODE_DUAL] in ([], ["z"])


def test_numeric_only_records():
    numeric_only = {r.id for r in registry() if r.backends == (NUMERIC,)}
    assert numeric_only == {"agarwal", "adsy3", "nineparam"}


class _Recorder:
    def __init__(self, B):
        self.B = B
        self.seen = set()

    def __getattr__(self, name):
        return getattr(self.B, name)

    def param(self, name):
        self.seen.add(name)
        return self.B.param(name)


def _consumed(record):
    if FORMAL in record.backends:
        setup = engine.formal_setup(record, 3)
        B = _Recorder(FormalBackend(setup.ctx, setup.bindings))
    else:
        values = engine.numeric_point(record, 0, 0)
        B = _Recorder(NumericBackend(PointAssignment(values), 64))
    with precision(64):
        record.lhs(B)
        record.rhs(B)
    return B.seen


@pytest.mark.parametrize("record", registry(), ids=lambda r: r.id)
def test_builders_consume_declared_params(record):
    seen = _consumed(record)
    declared = set(record.param_names)
    assert seen <= declared
    # the differentiation variable may enter only through the eps operator
    assert declared - seen <= {"z"}


def test_sigma1_passes_at_25():
    rep = verify_formal("sigma1", 25)
    assert rep.passed
    assert rep.params == {"c": "formal"}


def test_perturbed_sigma1_fails_at_q25():
    rep = verify_formal(perturb(get_record("sigma1"), 25), 25)
    assert rep.status == "fail"
    assert rep.first_mismatch["monomial"] == "q^25"


def test_recip3_at_given_point():
    rep = verify_formal("recip3", 20, params={"a": "1/2", "b": "1/3"})
    assert rep.passed
    assert rep.params == {"a": "1/2", "b": "1/3", "c": "formal"}


def test_agarwal_numeric_passes():
    [rep] = verify_numeric("agarwal", 256, seed=0, samples=1)
    assert rep.passed
    assert rep.residual is not None


def test_domain_violation_is_reported():
    [rep] = verify_numeric("recip3", 256, samples=1, params={"a": "1/3", "c": "1/2"})
    assert rep.status == "precondition-error"
    assert "|c|" in rep.message


def test_unit_failure_is_reported_not_raised():
    rep = verify_formal("fine1551", 10, params={"b": "1"})
    assert rep.status == "precondition-error"


def test_formal_argument_with_constant_term_is_a_precondition_error():
    rep = verify_formal("qbin", 10, params={"z": "1/2"})
    assert rep.status == "precondition-error"


def test_dual_parameter_cannot_be_fixed():
    rep = verify_formal("rcq", 10, params={"z": "1/2"})
    assert rep.status == "precondition-error"


def test_unknown_parameter():
    rep = verify_formal("sigma1", 10, params={"w": "1/2"})
    assert rep.status == "precondition-error"


def test_wrong_backend_is_a_usage_error():
    with pytest.raises(ValueError):
        verify_formal("nineparam", 10)
    with pytest.raises(ValueError):
        verify_numeric("rsi1")


def test_report_schema():
    rep = verify_formal("euler", 8)
    d = json.loads(rep.to_json())
    assert list(d) == list(engine.REPORT_KEYS)
    assert engine.VerificationReport.from_dict(d) == rep


def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        engine.VerificationReport("x", FORMAL, 5, None, {}, "fail")


def _stable(rep):
    d = rep.to_dict()
    d.pop("elapsed_ms")
    return json.dumps(d)


def test_determinism():
    assert _stable(verify_formal("heine2", 10, seed=3)) == _stable(verify_formal("heine2", 10, seed=3))
    a = verify_numeric("qbin", 128, seed=5, samples=2)
    b = verify_numeric("qbin", 128, seed=5, samples=2)
    assert [_stable(r) for r in a] == [_stable(r) for r in b]


def test_report_reproduces_from_recorded_params():
    [rep] = verify_numeric("heine", 256, seed=11, samples=1)
    again = verify_numeric("heine", 256, samples=1, params=rep.params)[0]
    assert _stable(again) == _stable(rep)


def test_samples_respect_declared_domains():
    for seed in range(5):
        for i in range(3):
            v = engine.numeric_point(get_record("recip4"), seed, i)
            assert abs(v["c"]) < abs(v["a"]) < 1 and abs(v["d"]) < abs(v["b"]) < 1
            assert all(x.denominator <= 13 for x in v.values())


def test_sigma2_at_d0_is_sigma1():
    ctx = fps.make_context({"c": 1, "d": 1}, 14)
    r2 = builders.sigma_two_param_rhs(FormalBackend(ctx, {"c": "c", "d": "d"}))
    r1 = builders.sigma_one_param_rhs(FormalBackend(ctx, {"c": "c"}))
    assert fps.equal_up_to(fps.substitute_var(r2, "d", 0), r1, 14)


@pytest.mark.parametrize("rid", ["recip3", "recip4"])
def test_reciprocity_antisymmetry(rid):
    rec = get_record(rid)
    setup = engine.formal_setup(rec, 12)
    swapped = dict(setup.bindings, a=setup.bindings["b"], b=setup.bindings["a"])
    B1 = FormalBackend(setup.ctx, setup.bindings)
    B2 = FormalBackend(setup.ctx, swapped)
    assert rec.lhs(B2) == -rec.lhs(B1)
    assert rec.rhs(B2) == -rec.rhs(B1)


@pytest.mark.parametrize("rid", ["rcq", "bbt", "lemma4heine"])
def test_dual_and_summation_records(rid):
    assert verify_formal(rid, 12).passed


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_reciprocity_holds_for_sampled_points(seed):
    assert verify_formal("recip3", 10, seed=seed).passed
    [rep] = verify_numeric("recip4", 128, seed=seed, samples=1)
    assert rep.passed


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_heine_numeric_for_sampled_points(seed):
    assert all(r.passed for r in verify_numeric("heine2", 128, seed=seed, samples=1))


def test_verify_all_counts_and_isolation():
    recs = [get_record(i) for i in ("euler", "qbin", "rsi1", "sigma1")]
    summary = verify_all(order=10, precision=128, records=recs)
    assert len(summary.reports) == sum(len(r.backends) for r in recs)
    assert summary.ok
    broken = [perturb(r, 10) if r.id == "rsi1" else r for r in recs]
    summary = verify_all(order=10, precision=128, records=broken)
    assert [r.identity_id for r in summary.failures] == ["rsi1"]
    assert summary.failures[0].first_mismatch["monomial"] == "q^10"
