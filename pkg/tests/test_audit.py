import numpy as np
import pytest
from hypothesis import given, strategies as st

from ifmsim import (
    AuditConfig,
    AuditReport,
    BASIS_SIGMA,
    BASIS_XY,
    CHECK_IDS,
    DegenerateDataError,
    DimensionMismatchError,
    FilterConfig,
    audit_rule,
    builtin_rules,
    check_anti_alignment,
    check_basis_covariance,
    check_indistinguishability,
    check_role_symmetry,
    chi_square_two_sample,
    coherent_projection,
    object_rigid,
    preferred_basis,
    probe_rigid,
    random_mix,
    run_filter_mc,
    singlet_rule,
    tvd,
)

FAST_EXACT = AuditConfig(unitary_samples=25, input_samples=40, seed=11)
FAST_MC = AuditConfig(
    evaluation="mc",
    seed=11,
    mc_trials=100_000,
    mc_input_samples=6,
    mc_unitary_samples=3,
)


def test_tvd_examples():
    assert tvd([0, 0.5, 0.5], [0, 0.5, 0.5]) == pytest.approx(0.0, abs=1e-15)
    assert tvd([0, 0.5, 0.5], [0.25, 0.25, 0.5]) == pytest.approx(0.25, abs=1e-15)
    assert tvd([1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-15)


def test_tvd_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        tvd([1, 0], [1, 0, 0])


def test_tvd_rejects_non_distributions():
    with pytest.raises(ValueError):
        tvd([0.7, 0.7], [0.5, 0.5])


@st.composite
def distributions(draw, size=4):
    weights = draw(
        st.lists(st.floats(1e-6, 1.0, allow_nan=False), min_size=size, max_size=size)
    )
    arr = np.array(weights)
    return arr / arr.sum()


@given(d1=distributions(), d2=distributions(), d3=distributions())
def test_tvd_is_a_metric(d1, d2, d3):
    assert tvd(d1, d1) == pytest.approx(0.0, abs=1e-12)
    assert tvd(d1, d2) == pytest.approx(tvd(d2, d1), abs=1e-15)
    assert tvd(d1, d3) <= tvd(d1, d2) + tvd(d2, d3) + 1e-12
    if tvd(d1, d2) < 1e-15:
        assert np.allclose(d1, d2, atol=1e-12)


def test_chi_square_identical_counts():
    stat, p = chi_square_two_sample([10, 20, 30], [10, 20, 30])
    assert stat == pytest.approx(0.0, abs=1e-15)
    assert p == pytest.approx(1.0, abs=1e-12)


def test_chi_square_separates_mode_counts():
    stat, p = chi_square_two_sample([0, 500, 500], [250, 250, 500])
    # direct formula: pooled expectations (125, 375, 500) per sample
    expected = 2 * ((125**2) / 125 + (125**2) / 375)
    assert stat == pytest.approx(expected, abs=1e-9)
    assert p < 1e-3


def test_chi_square_drops_empty_cells():
    stat_with, p_with = chi_square_two_sample([5, 0, 5], [7, 0, 3])
    stat_without, p_without = chi_square_two_sample([5, 5], [7, 3])
    assert stat_with == pytest.approx(stat_without, abs=1e-12)
    assert p_with == pytest.approx(p_without, abs=1e-12)


def test_chi_square_degenerate_data():
    with pytest.raises(DegenerateDataError):
        chi_square_two_sample([0, 0], [0, 0])
    with pytest.raises(DegenerateDataError):
        chi_square_two_sample([5, 0], [3, 0])
    with pytest.raises(DimensionMismatchError):
        chi_square_two_sample([1, 2], [1, 2, 3])


def test_chi_square_null_calibration():
    # independent seeds on an identical configuration: p should rarely be small
    base = dict(rule=singlet_rule(), source_mode=1, evaluation="mc", trials=100_000)
    good = 0
    for rep in range(100):
        a = run_filter_mc(FilterConfig(seed=1000 + 2 * rep, **base))
        b = run_filter_mc(FilterConfig(seed=1001 + 2 * rep, **base))
        _, p = chi_square_two_sample(a.counts, b.counts)
        good += p > 0.01
    assert good >= 95


def test_c1_probe_rigid_fails_with_quarter_and_half():
    result = check_indistinguishability(probe_rigid(), FAST_EXACT)
    assert not result.passed
    assert result.metric == pytest.approx(0.5, abs=1e-12)
    assert result.evidence["tvd_full"] == pytest.approx(0.25, abs=1e-12)
    assert result.evidence["tvd_conditional"] == pytest.approx(0.5, abs=1e-12)
    assert "roles=normal" in result.witness


def test_c1_object_rigid_fails_only_when_swapped():
    result = check_indistinguishability(object_rigid(), FAST_EXACT)
    assert not result.passed
    assert "roles=swapped" in result.witness


def test_c1_singlet_passes():
    result = check_indistinguishability(singlet_rule(), FAST_EXACT)
    assert result.passed
    assert result.metric < 1e-12


def test_c2_singlet_passes():
    assert check_role_symmetry(singlet_rule(), FAST_EXACT).passed


def test_c2_object_rigid_fails_at_sigma_plus_x():
    result = check_role_symmetry(object_rigid(), FAST_EXACT)
    assert not result.passed
    assert result.metric >= 0.75 - 1e-12


def test_c2_random_mix_passes():
    assert check_role_symmetry(random_mix(), FAST_EXACT).passed


def test_c3_singlet_passes_everywhere():
    result = check_anti_alignment(singlet_rule(), FAST_EXACT)
    assert result.passed
    assert result.metric < 1e-12


def test_c3_random_mix_fails_at_half():
    result = check_anti_alignment(random_mix(), FAST_EXACT)
    assert not result.passed
    assert result.metric == pytest.approx(0.5, abs=1e-12)


def test_c3_preferred_basis_fails_in_unbiased_basis():
    result = check_anti_alignment(preferred_basis(BASIS_SIGMA), FAST_EXACT)
    assert not result.passed
    assert result.metric == pytest.approx(0.5, abs=1e-12)
    assert "basis=SIGMA" not in result.witness


def test_c4_singlet_passes():
    assert check_basis_covariance(singlet_rule(), FAST_EXACT).passed


def test_c4_preferred_basis_fails():
    assert not check_basis_covariance(preferred_basis(BASIS_SIGMA), FAST_EXACT).passed


def test_c4_coherent_projection_fails_with_scatter_gap():
    result = check_basis_covariance(coherent_projection(BASIS_XY), FAST_EXACT)
    assert not result.passed
    assert result.metric >= 0.5 - 1e-12


def test_audit_singlet_overall_pass():
    report = audit_rule(singlet_rule(), FAST_EXACT)
    assert report.overall_pass
    assert tuple(c.check_id for c in report.checks) == CHECK_IDS
    for check in report.checks:
        assert check.passed and check.metric < 1e-9


def test_audit_alternatives_fail():
    for rule in (probe_rigid(), object_rigid(), preferred_basis(BASIS_SIGMA),
                 coherent_projection(BASIS_XY)):
        assert not audit_rule(rule, FAST_EXACT).overall_pass


def test_singlet_is_the_unique_survivor():
    passes = {rule.name: audit_rule(rule, FAST_EXACT).overall_pass for rule in builtin_rules()}
    assert passes.pop("singlet") is True
    assert not any(passes.values())


def test_audit_random_mix_fails_exactly_c3():
    report = audit_rule(random_mix(), FAST_EXACT)
    verdicts = {c.check_id: c.passed for c in report.checks}
    assert verdicts == {
        "C1_indistinguishability": True,
        "C2_role_symmetry": True,
        "C3_anti_alignment": False,
        "C4_basis_covariance": True,
    }


def test_audit_deterministic():
    a = audit_rule(object_rigid(), FAST_EXACT)
    b = audit_rule(object_rigid(), FAST_EXACT)
    assert a.to_json() == b.to_json()


def test_audit_noise_levels_do_not_change_verdicts():
    for rule in builtin_rules():
        patterns = []
        for levels in ((0.0,), (0.25,), (0.5,)):
            cfg = AuditConfig(unitary_samples=10, input_samples=20, seed=11,
                              noise_levels=levels)
            report = audit_rule(rule, cfg)
            patterns.append(tuple(c.passed for c in report.checks))
        assert patterns[0] == patterns[1] == patterns[2]


def test_report_json_round_trip():
    report = audit_rule(singlet_rule(), FAST_EXACT)
    text = report.to_json()
    back = AuditReport.from_json(text)
    assert back.rule_name == report.rule_name
    assert back.overall_pass == report.overall_pass
    assert back.to_json() == text


def test_mc_verdicts_match_exact_verdicts():
    # every exact metric in this battery is either ~0 or >= 0.05
    for rule in builtin_rules():
        exact = audit_rule(rule, FAST_EXACT)
        mc = audit_rule(rule, FAST_MC)
        for check_id in CHECK_IDS:
            assert mc.check(check_id).passed == exact.check(check_id).passed, (
                rule.name,
                check_id,
            )


def test_mc_audit_deterministic():
    a = audit_rule(probe_rigid(), FAST_MC)
    b = audit_rule(probe_rigid(), FAST_MC)
    assert a.to_json() == b.to_json()


def test_audit_config_validation():
    with pytest.raises(ValueError):
        AuditConfig(bases=())
    with pytest.raises(ValueError):
        AuditConfig(epsilon_mc=2.0)
    with pytest.raises(ValueError):
        AuditConfig(noise_levels=(1.5,))
    with pytest.raises(ValueError):
        AuditConfig(evaluation="sometimes")


def test_check_result_invariant_passed_iff_below_threshold():
    for rule in (singlet_rule(), object_rigid(), random_mix()):
        for config in (FAST_EXACT, FAST_MC):
            report = audit_rule(rule, config)
            for check in report.checks:
                assert check.passed == (check.metric < check.threshold)
                assert check.metric >= 0.0
