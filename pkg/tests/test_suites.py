import pytest

from curvlab.frames import SamplerConfig
from curvlab.suites import SUITES, rational_points, run_suite, psi_type_table, r_a_type_table


def test_suite_names():
    assert sorted(SUITES) == ["equivalences", "thm1.4", "thm2.4", "thm3.1", "thm3.4", "thm3.5", "thm4.3", "thm6.2"]
    with pytest.raises(ValueError):
        run_suite("thm9.9", SamplerConfig())


def test_R_a_tables():
    # 2a < p: only the maximal definite types
    assert r_a_type_table(3, 3, 1) == {(3, 0), (0, 3)}
    # 2a = p < q
    assert r_a_type_table(2, 3, 1) == {(1, 0), (2, 0), (0, 3), (1, 3)}
    # 2a = p = q
    assert r_a_type_table(2, 2, 1) == {(1, 0), (2, 0), (0, 1), (0, 2), (1, 2), (2, 1)}


def test_psi_tables():
    # neutral, no flat factor: every definite type and its dual
    assert psi_type_table(2, 0, 0) == {(1, 0), (2, 0), (0, 1), (0, 2), (1, 2), (2, 1)}
    # one spacelike flat direction: only the timelike side and its dual survive
    assert psi_type_table(2, 0, 1) == {(1, 0), (2, 0), (1, 3), (0, 3)}


def test_rational_points_deterministic():
    cfg = SamplerConfig(seed=9)
    a = rational_points(cfg, "pts", 4, 5)
    assert a == rational_points(cfg, "pts", 4, 5)
    assert a[:3] == rational_points(cfg, "pts", 4, 3)
    assert len(set(a)) == 5


def test_small_suite_passes():
    rep = run_suite("thm2.4", SamplerConfig(seed=1), 40)
    assert rep.passed
    assert rep.to_json()["suite"] == "thm2.4"
