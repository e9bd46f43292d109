import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvlab.classify import (
    ALMOST_COMPLEX_JORDAN_IP,
    FAILS,
    HOLDS,
    TWO_NILPOTENT,
    PropertyQuery,
    QueryError,
    almost_complex_spectrum_check,
    check,
    diagonalizability_check,
    duality_suite,
    equivalence_suite,
    ip,
    jordan_ip,
    jordan_osserman,
    jordan_osserman_type,
    jordan_szabo,
    osserman,
    osserman_type,
    parse_label,
    parse_property,
    rank_constant,
    recheck_witness,
    szabo_property,
    szabo_structure_suite,
)
from curvlab.curvature import CovDerivTensor, CurvatureTensor, build_constant_curvature, build_R_a, build_R_phi, random_self_adjoint
from curvlab.frames import SamplerConfig
from curvlab.geometry import random_cov_deriv
from curvlab.pseudolin import LinearMap, Signature
from curvlab.suites import CUBIC_F, _fab_eval


def query(prop, samples=50, seed=0, **kw):
    return PropertyQuery(prop, samples, SamplerConfig(seed=seed), **kw)


def generic_R(sig, seed=4):
    return build_R_phi(random_self_adjoint(sig, np.random.default_rng(seed)))


# --------------------------------------------------------------- examples


def test_constant_curvature_spacelike_osserman():
    rep = check(build_constant_curvature(1, Signature(0, 4)), query(osserman(1), 500))
    assert rep.verdict == HOLDS
    assert rep.samples == 500
    # t (t - 1)^3
    assert rep.reference["spectrum"]["charpoly"] == ["1", "-3", "3", "-1", "0"]


def test_R_a_type_one_zero_fails_with_witness():
    R = build_R_a(3, 3, 1)
    rep = check(R, query(jordan_osserman_type(1, 0), 500))
    assert rep.verdict == FAILS
    assert rep.witness["indices"][0] == 0
    assert recheck_witness(R, rep)
    for r, s in [(3, 0), (0, 3)]:
        assert check(R, query(jordan_osserman_type(r, s), 100)).holds


def test_fab_szabo_zero_spectrum():
    D = _fab_eval(CUBIC_F, 0, 0).nabla_R
    rep = check(D, query(szabo_property(1), 100))
    assert rep.holds
    assert rep.reference["spectrum"]["charpoly"] == ["1", "0", "0", "0", "0"]
    assert not D.is_zero()


def test_random_riemannian_cov_deriv_not_szabo():
    D = random_cov_deriv(Signature(0, 3), np.random.default_rng(1))
    rep = check(D, query(szabo_property(1), 200))
    assert rep.verdict == FAILS
    assert recheck_witness(D, rep)


def test_two_nilpotent_property():
    assert check(build_R_a(2, 2, 1), query(TWO_NILPOTENT)).holds
    assert not check(build_constant_curvature(1, Signature(0, 3)), query(TWO_NILPOTENT)).holds


def test_applicability_errors():
    R = build_constant_curvature(1, Signature(0, 3))
    with pytest.raises(QueryError):
        check(R, query(osserman(-1)))
    with pytest.raises(QueryError):
        check(R, query(szabo_property(1)))
    with pytest.raises(QueryError):
        check(R, query(jordan_osserman_type(0, 3)))
    with pytest.raises(QueryError):
        check(CovDerivTensor.zero(Signature(0, 3)), query(osserman(1)))
    with pytest.raises(QueryError):
        check(R, query(ALMOST_COMPLEX_JORDAN_IP))


# ------------------------------------------------------------------ suites


def test_duality_suite_examples():
    assert duality_suite(build_constant_curvature(1, Signature(0, 3)), SamplerConfig(seed=1), 30).passed
    rep = duality_suite(build_R_a(2, 2, 1), SamplerConfig(seed=1), 30)
    assert rep.passed
    item = next(it for it in rep.items if it["check"] == "Jordan type (0,2) <=> (2,0)")
    assert item["verdict"] == item["dual"] == HOLDS
    assert duality_suite(CurvatureTensor.zero(Signature(1, 2)), SamplerConfig(seed=1), 10).passed


def test_equivalence_suite_examples():
    rep = equivalence_suite(build_R_a(2, 2, 1), SamplerConfig(seed=2), 60)
    assert rep.passed
    assert set(rep.items[0]["verdicts"].values()) == {HOLDS}
    ev = _fab_eval("x1^2 + 2*x2^2", 0, 1)
    assert equivalence_suite(ev.R, SamplerConfig(seed=2), 40, D=ev.nabla_R).passed
    assert equivalence_suite(CurvatureTensor.zero(Signature(1, 2)), SamplerConfig(seed=2), 10).passed


def test_szabo_structure_examples():
    rep = szabo_structure_suite(CovDerivTensor.zero(Signature(1, 2)), SamplerConfig(seed=3), 20)
    assert rep.passed
    D = _fab_eval(CUBIC_F, 0, 1).nabla_R
    rep = szabo_structure_suite(D, SamplerConfig(seed=3), 40)
    assert rep.passed
    assert any(it["check"] == "p<q: spec+ in iR" for it in rep.items)


def test_diagonalizability_on_constant_curvature():
    rep = diagonalizability_check(build_constant_curvature(1, Signature(1, 3)), SamplerConfig(seed=1), 20)
    assert rep.passed
    assert rep.items[-1]["check"] == "J(x) diagonalizable on S+"


def test_almost_complex_spectrum():
    rep = almost_complex_spectrum_check(build_constant_curvature(1, Signature(0, 4)), cfg=SamplerConfig(seed=1), samples=10)
    assert rep.passed


# -------------------------------------------------------------- properties


PROPS = [osserman(1), jordan_osserman(-1), osserman_type(1, 1), jordan_osserman_type(0, 2), ip("mixed"), jordan_ip("spacelike")]


@pytest.mark.parametrize("prop", PROPS, ids=lambda p: p.label)
def test_witness_recheck(prop):
    R = generic_R(Signature(2, 2))
    rep = check(R, query(prop, 50, seed=5))
    assert rep.verdict == FAILS
    assert recheck_witness(R, rep)
    assert recheck_witness(R, json.loads(json.dumps(rep.to_json())))


def test_rank_constant_ip_holds_for_R_phi():
    # R_phi(pi) has image span{phi e1, phi e2}, so its rank is 2 for invertible phi
    R = build_R_phi(LinearMap(np.diag([-1, -2, 1, 3]), Signature(2, 2)))
    for kind in ("timelike", "mixed", "spacelike"):
        assert check(R, query(rank_constant(ip(kind)), 40)).holds


def test_tampered_witness_rejected():
    R = generic_R(Signature(2, 2))
    rep = check(R, query(osserman(1), 50)).to_json()
    rep["witness"]["invariants"][1] = rep["witness"]["invariants"][0]
    assert not recheck_witness(R, rep)


def test_orientation_note():
    rep = check(build_R_a(2, 2, 1), query(jordan_ip("mixed"), 30))
    assert "orientation classes: T and -T have the same Jordan signature" in rep.notes


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(PROPS[:6]))
def test_determinism_and_threads(seed, prop):
    R = generic_R(Signature(2, 2), seed % 7)
    a = check(R, query(prop, 20, seed))
    b = check(R, query(prop, 20, seed))
    c = check(R, query(prop, 20, seed, threads=2))
    assert json.dumps(a.to_json()) == json.dumps(b.to_json()) == json.dumps(c.to_json())


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 20), st.integers(1, 40))
def test_monotone_confidence(seed, small, extra):
    R = build_R_phi(LinearMap(np.diag([1, 1, 1, 2]), Signature(1, 3)).scale(1)) if seed % 2 else generic_R(Signature(1, 3), seed % 5)
    prop = osserman(1)
    lo = check(R, query(prop, small, seed))
    hi = check(R, query(prop, small + extra, seed))
    if lo.verdict == FAILS:
        assert hi.verdict == FAILS
        assert hi.witness == lo.witness


def test_full_budget_rate():
    rep = check(generic_R(Signature(0, 3)), query(osserman(1), 30, full_budget=True))
    assert rep.samples == 30
    assert any(n.startswith("constancy rate") for n in rep.notes)
    assert rep.to_json()["mismatches"] == rep.mismatches > 0


def test_float_mode_verdicts_agree():
    R = build_constant_curvature(1, Signature(1, 3))
    for prop in [osserman(1), jordan_osserman(-1), jordan_osserman_type(1, 1)]:
        # repeated eigenvalues of non-normal float matrices drift, so loosen the tolerance
        assert check(R.to_float(), query(prop, 30, tol=1e-6)).verdict == check(R, query(prop, 30)).verdict


@pytest.mark.parametrize(
    "text,label",
    [
        ("spacelike-osserman", "SpacelikeOsserman"),
        ("timelike-jordan-osserman", "JordanOsserman(-)"),
        ("osserman-type:1,0", "OssermanType(1,0)"),
        ("jordan-osserman-type:2,1", "JordanOssermanType(2,1)"),
        ("mixed-ip", "MixedIP"),
        ("timelike-jordan-ip", "JordanIP(timelike)"),
        ("spacelike-szabo", "Szabo(+)"),
        ("timelike-jordan-szabo", "JordanSzabo(-)"),
        ("rank-constant:spacelike-ip", "RankConstant(SpacelikeIP)"),
        ("almost-complex-jordan-ip", "AlmostComplexJordanIP"),
        ("two-nilpotent", "TwoNilpotent"),
    ],
)
def test_property_names(text, label):
    prop = parse_property(text)
    assert prop.label == label
    assert parse_label(label) == prop


@pytest.mark.parametrize("text", ["mixed-osserman", "spacelike-foo", "osserman-type:1", "nope"])
def test_property_name_errors(text):
    with pytest.raises(ValueError):
        parse_property(text)


def test_jordan_szabo_on_cubic():
    D = _fab_eval(CUBIC_F, 0, 1).nabla_R
    assert check(D, query(jordan_szabo(1), 100)).verdict == FAILS
