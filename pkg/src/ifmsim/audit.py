"""The four-check audit battery for candidate non-interaction rules.

Checks (exact evaluation is the verdict of record; Monte Carlo is a
statistical cross-check):

* C1 indistinguishability - the two source modes of the filter device
  must stay indistinguishable for every role assignment, object/analyzer
  basis pairing and noise level; metric is the worst total variation
  distance between mode-1 and mode-2 statistics (full, including the
  scatter outcome, and conditional on survival).
* C2 role symmetry - applying the rule with the partners exchanged and
  mapping back through SWAP must reproduce the same outcome; metric is
  the worst of (1 - fidelity) and the scatter-probability gap.
* C3 anti-alignment - survivors of an actual coupling must carry zero
  weight on the aligned cells of every configured basis; evaluated on
  the coupled (q = 0) survivor, since fly-by events leave the untouched
  product state behind by construction and would mask the signature of
  every rule equally.
* C4 basis covariance - rotating both inputs by the same unitary must
  commute with the rule; metric as in C2.

Monte Carlo mode replays each comparison as counts at ``mc_trials``
trials and applies two-sample chi-square tests; the p-value threshold
``epsilon_mc`` is spent family-wise across a check's comparisons
(Bonferroni), so a rule whose exact metric is zero is not failed by a
single unlucky case among many.  C3's Monte Carlo verdict demands zero
aligned events among the coupled survivors.

Every sampled quantity derives from ``AuditConfig.seed`` through fixed
streams, so identical configs produce identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaincc

from .experiments import (
    ConfigError,
    FilterConfig,
    check_mode_equivalence,
    derive_rng,
    derive_seed,
    run_filter_exact,
    run_filter_mc,
)
from .rules import CouplingOutcome, Rule, apply_rule, swapped_channel
from .states import (
    BASIS_DIAG,
    BASIS_SIGMA,
    BASIS_XY,
    Basis,
    D_MINUS,
    D_PLUS,
    QubitState,
    SIGMA_MINUS,
    SIGMA_PLUS,
    STATE_X,
    STATE_Y,
    apply_unitary,
    basis_change_unitary,
    fidelity,
    haar_unitary,
    joint_born_distribution,
    mutually_unbiased,
    random_state,
    state_label,
)


class DimensionMismatchError(ValueError):
    """Two distributions live on different outcome spaces."""


class DegenerateDataError(ValueError):
    """Too little data for a two-sample test."""


CHECK_IDS = (
    "C1_indistinguishability",
    "C2_role_symmetry",
    "C3_anti_alignment",
    "C4_basis_covariance",
)

CORNER_STATES = (STATE_X, STATE_Y, SIGMA_PLUS, SIGMA_MINUS, D_PLUS, D_MINUS)

# Compact input set for Monte Carlo replays of C2/C4.
_MC_CORNER_PAIRS = (
    (STATE_X, STATE_X),
    (STATE_Y, STATE_X),
    (SIGMA_PLUS, STATE_X),
    (SIGMA_PLUS, SIGMA_PLUS),
    (SIGMA_PLUS, SIGMA_MINUS),
    (D_PLUS, SIGMA_MINUS),
)


def tvd(d1, d2) -> float:
    """Total variation distance ``0.5 * sum |d1 - d2|`` between distributions."""
    a = np.asarray(d1, dtype=float).reshape(-1)
    b = np.asarray(d2, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"outcome spaces differ: {a.shape} vs {b.shape}")
    for name, dist in (("first", a), ("second", b)):
        if abs(dist.sum() - 1.0) > 1e-6:
            raise ValueError(f"{name} distribution sums to {dist.sum()}, expected 1")
    return float(0.5 * np.abs(a - b).sum())


def chi_square_two_sample(counts_a, counts_b) -> tuple[float, float]:
    """Two-sample chi-square statistic and p-value over pooled expected counts.

    Cells with pooled count zero are dropped; degrees of freedom are the
    remaining cell count minus one; the p-value is the regularized upper
    incomplete gamma function at the statistic.
    """
    a = np.asarray(counts_a, dtype=float).reshape(-1)
    b = np.asarray(counts_b, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"outcome spaces differ: {a.shape} vs {b.shape}")
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("counts must be non-negative")
    total_a, total_b = a.sum(), b.sum()
    if total_a <= 0 or total_b <= 0:
        raise DegenerateDataError("each sample needs at least one count")
    pooled = a + b
    keep = pooled > 0
    if int(keep.sum()) < 2:
        raise DegenerateDataError("fewer than 2 nonzero pooled cells")
    expected_a = total_a * pooled[keep] / (total_a + total_b)
    expected_b = total_b * pooled[keep] / (total_a + total_b)
    stat = float(
        np.sum((a[keep] - expected_a) ** 2 / expected_a)
        + np.sum((b[keep] - expected_b) ** 2 / expected_b)
    )
    dof = int(keep.sum()) - 1
    p_value = float(gammaincc(dof / 2.0, stat / 2.0))
    return stat, p_value


@dataclass(frozen=True, eq=False)
class CheckResult:
    """Verdict of one check; ``passed`` holds exactly when ``metric < threshold``."""

    check_id: str
    passed: bool
    metric: float
    threshold: float
    witness: str
    evidence: dict | None = None


@dataclass(frozen=True, eq=False)
class AuditConfig:
    """Knobs of the audit battery."""

    bases: tuple[Basis, ...] = (BASIS_XY, BASIS_SIGMA, BASIS_DIAG)
    epsilon_exact: float = 1e-9
    epsilon_mc: float = 1e-3
    unitary_samples: int = 100
    input_samples: int = 200
    noise_levels: tuple[float, ...] = (0.0, 0.5)
    seed: int = 0
    evaluation: str = "exact"
    mc_trials: int = 100_000
    mc_input_samples: int = 12
    mc_unitary_samples: int = 6

    def __post_init__(self):
        if not self.bases:
            raise ConfigError("bases must not be empty")
        if not 0.0 < float(self.epsilon_exact) < 1.0:
            raise ConfigError("epsilon_exact must lie in (0, 1)")
        if not 0.0 < float(self.epsilon_mc) < 1.0:
            raise ConfigError("epsilon_mc must lie in (0, 1)")
        for count in (self.unitary_samples, self.input_samples, self.mc_trials,
                      self.mc_input_samples, self.mc_unitary_samples):
            if int(count) < 1:
                raise ConfigError("sample counts must be positive")
        if not self.noise_levels:
            raise ConfigError("noise_levels must not be empty")
        for q in self.noise_levels:
            if not 0.0 <= float(q) <= 1.0:
                raise ConfigError(f"noise level {q!r} outside [0, 1]")
        if self.evaluation not in ("exact", "mc"):
            raise ConfigError(f"evaluation must be 'exact' or 'mc', got {self.evaluation!r}")


@dataclass(frozen=True, eq=False)
class AuditReport:
    """Per-rule verdicts for all four checks."""

    rule_name: str
    checks: tuple[CheckResult, ...]
    overall_pass: bool
    evaluation: str
    noise_levels: tuple[float, ...]
    seed: int
    config_echo: dict

    def check(self, check_id: str) -> CheckResult:
        for result in self.checks:
            if result.check_id == check_id:
                return result
        raise KeyError(check_id)

    def to_json(self) -> str:
        payload = {
            "rule": self.rule_name,
            "overall_pass": self.overall_pass,
            "evaluation": self.evaluation,
            "noise_levels": list(self.noise_levels),
            "seed": self.seed,
            "config": self.config_echo,
            "checks": [
                {
                    "check_id": c.check_id,
                    "passed": c.passed,
                    "metric": c.metric,
                    "threshold": c.threshold,
                    "witness": c.witness,
                    "evidence": c.evidence,
                }
                for c in self.checks
            ],
        }
        return json.dumps(payload, indent=2)

    @staticmethod
    def from_json(text: str) -> "AuditReport":
        doc = json.loads(text)
        checks = tuple(
            CheckResult(
                check_id=c["check_id"],
                passed=bool(c["passed"]),
                metric=float(c["metric"]),
                threshold=float(c["threshold"]),
                witness=str(c["witness"]),
                evidence=c.get("evidence"),
            )
            for c in doc["checks"]
        )
        return AuditReport(
            rule_name=doc["rule"],
            checks=checks,
            overall_pass=bool(doc["overall_pass"]),
            evaluation=doc["evaluation"],
            noise_levels=tuple(float(q) for q in doc["noise_levels"]),
            seed=int(doc["seed"]),
            config_echo=doc["config"],
        )


def _config_echo(config: AuditConfig) -> dict:
    return {
        "bases": [b.label.lower() for b in config.bases],
        "epsilon_exact": config.epsilon_exact,
        "epsilon_mc": config.epsilon_mc,
        "unitary_samples": config.unitary_samples,
        "input_samples": config.input_samples,
        "noise_levels": [float(q) for q in config.noise_levels],
        "seed": config.seed,
        "evaluation": config.evaluation,
        "mc_trials": config.mc_trials,
        "mc_input_samples": config.mc_input_samples,
        "mc_unitary_samples": config.mc_unitary_samples,
    }


def _corner_pairs() -> list[tuple[QubitState, QubitState]]:
    return [(a, b) for a in CORNER_STATES for b in CORNER_STATES]


def _sampled_pairs(rng, count: int) -> list[tuple[QubitState, QubitState]]:
    return [(random_state(rng), random_state(rng)) for _ in range(count)]


def _corner_unitaries(bases) -> list[tuple[str, np.ndarray]]:
    out = [("identity", np.eye(2, dtype=complex))]
    for src in bases:
        for dst in bases:
            if dst is not src:
                out.append((f"{src.label}->{dst.label}", basis_change_unitary(src, dst)))
    return out


def _channel_discrepancy(a: CouplingOutcome, b: CouplingOutcome) -> tuple[float, float, float]:
    """(discrepancy, scatter gap, fidelity) between two coupling outcomes."""
    dp = abs(a.p_scatter - b.p_scatter)
    if a.survive_state is None and b.survive_state is None:
        return dp, dp, 1.0
    if a.survive_state is None or b.survive_state is None:
        return max(dp, 1.0), dp, 0.0
    f = fidelity(a.survive_state, b.survive_state)
    return max(dp, 1.0 - f), dp, f


def _conjugated_outcome(out: CouplingOutcome, uu: np.ndarray) -> CouplingOutcome:
    """The outcome with its survivor rotated by the pair unitary ``uu``."""
    if out.survive_state is None:
        return out
    return CouplingOutcome(out.p_scatter, uu @ out.survive_state @ uu.conj().T)


def _mode_pair_cases(config: AuditConfig, analyzers: str):
    """C1 case grid; ``analyzers`` is 'all' or 'object' (analyzer = object basis)."""
    cases = []
    for swapped in (False, True):
        for object_basis in config.bases:
            analyzer_list = config.bases if analyzers == "all" else (object_basis,)
            for analyzer in analyzer_list:
                for mode2_basis in config.bases:
                    if mode2_basis is object_basis:
                        continue
                    if not mutually_unbiased(object_basis, mode2_basis):
                        continue
                    for q in config.noise_levels:
                        cases.append((swapped, object_basis, analyzer, mode2_basis, float(q)))
    return cases


def _mode_pair_configs(rule, swapped, object_basis, analyzer, mode2_basis, q, **mc):
    check_mode_equivalence(object_basis, mode2_basis)
    common = dict(
        rule=rule,
        object_state=object_basis.b1,
        analyzer_basis=analyzer,
        noise_q=q,
        swapped_roles=swapped,
        **mc,
    )
    cfg1 = FilterConfig(source_mode=1, source_basis=object_basis, **common)
    cfg2 = FilterConfig(source_mode=2, source_basis=mode2_basis, **common)
    return cfg1, cfg2


def _case_label(swapped, object_basis, analyzer, mode2_basis, q) -> str:
    role = "swapped" if swapped else "normal"
    return (
        f"roles={role} object_basis={object_basis.label} analyzer={analyzer.label} "
        f"mode2={mode2_basis.label} q={q:g}"
    )


def check_indistinguishability(rule: Rule, config: AuditConfig) -> CheckResult:
    """C1: mode-1 and mode-2 source statistics must be identical."""
    if config.evaluation == "mc":
        return _check_c1_mc(rule, config)
    worst = -1.0
    witness = ""
    evidence = None
    for case in _mode_pair_cases(config, analyzers="all"):
        swapped, object_basis, analyzer, mode2_basis, q = case
        cfg1, cfg2 = _mode_pair_configs(rule, *case)
        d1 = run_filter_exact(cfg1)
        d2 = run_filter_exact(cfg2)
        t_full = tvd(d1.probabilities(), d2.probabilities())
        t_cond = None
        if d1.conditional_on_survival is not None and d2.conditional_on_survival is not None:
            t_cond = tvd(d1.conditional_on_survival, d2.conditional_on_survival)
        for view, value in (("full", t_full), ("conditional", t_cond)):
            if value is not None and value > worst:
                worst = value
                witness = _case_label(*case) + f" view={view}"
                evidence = {
                    "mode1": [float(x) for x in d1.probabilities()],
                    "mode2": [float(x) for x in d2.probabilities()],
                    "tvd_full": t_full,
                    "tvd_conditional": t_cond,
                }
    worst = max(worst, 0.0)
    return CheckResult(
        CHECK_IDS[0], worst < config.epsilon_exact, worst, config.epsilon_exact, witness, evidence
    )


def _check_c1_mc(rule: Rule, config: AuditConfig) -> CheckResult:
    comparisons = []  # (1 - p_value, label, evidence)
    for idx, case in enumerate(_mode_pair_cases(config, analyzers="object")):
        cfg1, cfg2 = _mode_pair_configs(
            rule,
            *case,
            evaluation="mc",
            trials=config.mc_trials,
            seed=0,
        )
        d1 = run_filter_mc(replace(cfg1, seed=derive_seed(config.seed, 11, idx, 1)))
        d2 = run_filter_mc(replace(cfg2, seed=derive_seed(config.seed, 11, idx, 2)))
        views = [("full", d1.counts, d2.counts)]
        views.append(("conditional", d1.counts[:2], d2.counts[:2]))
        for view, c1, c2 in views:
            try:
                _, p_value = chi_square_two_sample(c1, c2)
            except DegenerateDataError:
                continue
            comparisons.append(
                (
                    1.0 - p_value,
                    _case_label(*case) + f" view={view}",
                    {"counts_mode1": list(map(int, c1)), "counts_mode2": list(map(int, c2)),
                     "p_value": p_value},
                )
            )
    return _mc_verdict(CHECK_IDS[0], comparisons, config)


def _mc_verdict(check_id: str, comparisons, config: AuditConfig) -> CheckResult:
    """Family-wise chi-square verdict: every p-value must clear the shared budget."""
    if not comparisons:
        return CheckResult(check_id, True, 0.0, 1.0, "no informative comparisons", None)
    per_case = config.epsilon_mc / len(comparisons)
    threshold = 1.0 - per_case
    worst, witness, evidence = max(comparisons, key=lambda item: item[0])
    return CheckResult(check_id, worst < threshold, worst, threshold, witness, evidence)


def check_role_symmetry(rule: Rule, config: AuditConfig) -> CheckResult:
    """C2: exchanging the partners and SWAPping back must change nothing."""
    if config.evaluation == "mc":
        return _check_c2_mc(rule, config)
    rng = derive_rng(config.seed, 2)
    pairs = _corner_pairs() + _sampled_pairs(rng, config.input_samples)
    worst = -1.0
    witness = ""
    evidence = None
    for probe, obj in pairs:
        for q in config.noise_levels:
            direct = apply_rule(rule, probe, obj, q)
            mirrored = swapped_channel(rule, probe, obj, q)
            disc, dp, f = _channel_discrepancy(direct, mirrored)
            if disc > worst:
                worst = disc
                witness = f"input=({state_label(probe)}, {state_label(obj)}) q={q:g}"
                evidence = {
                    "p_scatter_direct": direct.p_scatter,
                    "p_scatter_swapped": mirrored.p_scatter,
                    "fidelity": f,
                }
    worst = max(worst, 0.0)
    return CheckResult(
        CHECK_IDS[1], worst < config.epsilon_exact, worst, config.epsilon_exact, witness, evidence
    )


def _outcome_law(out: CouplingOutcome, basis: Basis) -> np.ndarray:
    """Five-outcome law: the four joint cells in ``basis`` plus scatter."""
    survive = 1.0 - out.p_scatter
    if out.survive_state is None:
        cells = np.zeros(4)
    else:
        cells = joint_born_distribution(out.survive_state, basis, basis)
    return np.clip(np.concatenate([survive * cells, [out.p_scatter]]), 0.0, None)


def _sample_counts(rng, law: np.ndarray, trials: int) -> np.ndarray:
    cum = np.cumsum(law)
    cum[-1] = max(cum[-1], 1.0)
    idx = np.searchsorted(cum, rng.random(trials), side="right")
    return np.bincount(idx, minlength=len(law))


def _mc_law_comparisons(config, cases, stream):
    """chi-square comparisons of five-outcome laws for (label, out_a, out_b) cases."""
    comparisons = []
    case_idx = 0
    for label, out_a, out_b in cases:
        for basis in config.bases:
            law_a = _outcome_law(out_a, basis)
            law_b = _outcome_law(out_b, basis)
            counts_a = _sample_counts(
                derive_rng(config.seed, stream, case_idx, 1), law_a, config.mc_trials
            )
            counts_b = _sample_counts(
                derive_rng(config.seed, stream, case_idx, 2), law_b, config.mc_trials
            )
            case_idx += 1
            try:
                _, p_value = chi_square_two_sample(counts_a, counts_b)
            except DegenerateDataError:
                continue
            comparisons.append(
                (
                    1.0 - p_value,
                    f"{label} basis={basis.label}",
                    {"p_value": p_value},
                )
            )
    return comparisons


def _check_c2_mc(rule: Rule, config: AuditConfig) -> CheckResult:
    rng = derive_rng(config.seed, 21)
    pairs = list(_MC_CORNER_PAIRS) + _sampled_pairs(rng, config.mc_input_samples)
    cases = []
    for probe, obj in pairs:
        for q in config.noise_levels:
            label = f"input=({state_label(probe)}, {state_label(obj)}) q={q:g}"
            cases.append(
                (label, apply_rule(rule, probe, obj, q), swapped_channel(rule, probe, obj, q))
            )
    return _mc_verdict(CHECK_IDS[1], _mc_law_comparisons(config, cases, 22), config)


def check_anti_alignment(rule: Rule, config: AuditConfig) -> CheckResult:
    """C3: coupled survivors carry zero aligned-cell weight in every basis.

    Evaluated on the q = 0 survivor; fly-by trials pass the input product
    state through untouched and are conditioned away (in Monte Carlo mode
    only coupled trials are counted).
    """
    if config.evaluation == "mc":
        return _check_c3_mc(rule, config)
    rng = derive_rng(config.seed, 3)
    pairs = _corner_pairs() + _sampled_pairs(rng, config.input_samples)
    survivors = []
    for probe, obj in pairs:
        out = apply_rule(rule, probe, obj, 0.0)
        if out.survive_state is None or out.p_scatter >= 1.0 - 1e-6:
            continue
        survivors.append((probe, obj, out))
    worst = -1.0
    witness = ""
    evidence = None
    for probe, obj, out in survivors:
        for basis in config.bases:
            cells = joint_born_distribution(out.survive_state, basis, basis)
            aligned = float(cells[0] + cells[3])
            if aligned > worst:
                worst = aligned
                witness = (
                    f"input=({state_label(probe)}, {state_label(obj)}) basis={basis.label}"
                )
                evidence = {"cells": [float(c) for c in cells], "aligned_weight": aligned}
    worst = max(worst, 0.0)
    return CheckResult(
        CHECK_IDS[2], worst < config.epsilon_exact, worst, config.epsilon_exact, witness, evidence
    )


def _check_c3_mc(rule: Rule, config: AuditConfig) -> CheckResult:
    rng = derive_rng(config.seed, 31)
    picks = list(_MC_CORNER_PAIRS) + _sampled_pairs(rng, config.mc_input_samples)
    chosen = []
    for probe, obj in picks:
        out = apply_rule(rule, probe, obj, 0.0)
        if out.survive_state is None or out.p_scatter >= 1.0 - 1e-6:
            continue
        chosen.append((probe, obj, out))
    threshold = 0.5 / config.mc_trials
    worst = 0.0
    witness = "no aligned events observed"
    evidence = None
    case_idx = 0
    for probe, obj, out in chosen:
        for basis in config.bases:
            cells = joint_born_distribution(out.survive_state, basis, basis)
            case_rng = derive_rng(config.seed, 32, case_idx)
            case_idx += 1
            u = case_rng.random((config.mc_trials, 2))
            survived = u[:, 0] >= out.p_scatter
            n_survivors = int(survived.sum())
            if n_survivors == 0:
                continue
            cum = np.cumsum(np.clip(cells, 0.0, None))
            cum[-1] = max(cum[-1], 1.0)
            idx = np.searchsorted(cum, u[survived, 1], side="right")
            aligned_events = int(((idx == 0) | (idx == 3)).sum())
            fraction = aligned_events / n_survivors
            if fraction > worst:
                worst = fraction
                witness = (
                    f"input=({state_label(probe)}, {state_label(obj)}) basis={basis.label}"
                )
                evidence = {"aligned_events": aligned_events, "survivors": n_survivors}
    return CheckResult(CHECK_IDS[2], worst < threshold, worst, threshold, witness, evidence)


def check_basis_covariance(rule: Rule, config: AuditConfig) -> CheckResult:
    """C4: the rule must commute with identical rotations of both inputs."""
    if config.evaluation == "mc":
        return _check_c4_mc(rule, config)
    rng = derive_rng(config.seed, 4)
    cases = []
    for u_label, u in _corner_unitaries(config.bases):
        for pair in _corner_pairs():
            cases.append((u_label, u, pair))
    for i in range(config.unitary_samples):
        u = haar_unitary(rng)
        cases.append((f"haar[{i}]", u, (random_state(rng), random_state(rng))))
    worst = -1.0
    witness = ""
    evidence = None
    for u_label, u, (probe, obj) in cases:
        uu = np.kron(u, u)
        for q in config.noise_levels:
            rotated = apply_rule(rule, apply_unitary(u, probe), apply_unitary(u, obj), q)
            base = apply_rule(rule, probe, obj, q)
            conjugated = _conjugated_outcome(base, uu)
            disc, dp, f = _channel_discrepancy(rotated, conjugated)
            if disc > worst:
                worst = disc
                witness = (
                    f"unitary={u_label} input=({state_label(probe)}, {state_label(obj)}) q={q:g}"
                )
                evidence = {
                    "p_scatter_rotated": rotated.p_scatter,
                    "p_scatter_base": base.p_scatter,
                    "fidelity": f,
                }
    worst = max(worst, 0.0)
    return CheckResult(
        CHECK_IDS[3], worst < config.epsilon_exact, worst, config.epsilon_exact, witness, evidence
    )


def _check_c4_mc(rule: Rule, config: AuditConfig) -> CheckResult:
    rng = derive_rng(config.seed, 41)
    unitary_cases = []
    for u_label, u in _corner_unitaries(config.bases):
        for pair in _MC_CORNER_PAIRS:
            unitary_cases.append((u_label, u, pair))
    for i in range(config.mc_unitary_samples):
        u = haar_unitary(rng)
        unitary_cases.append((f"haar[{i}]", u, (random_state(rng), random_state(rng))))
    cases = []
    for u_label, u, (probe, obj) in unitary_cases:
        uu = np.kron(u, u)
        for q in config.noise_levels:
            rotated = apply_rule(rule, apply_unitary(u, probe), apply_unitary(u, obj), q)
            conjugated = _conjugated_outcome(apply_rule(rule, probe, obj, q), uu)
            label = (
                f"unitary={u_label} input=({state_label(probe)}, {state_label(obj)}) q={q:g}"
            )
            cases.append((label, rotated, conjugated))
    return _mc_verdict(CHECK_IDS[3], _mc_law_comparisons(config, cases, 42), config)


def audit_rule(rule: Rule, config: AuditConfig | None = None) -> AuditReport:
    """Run the full battery C1-C4 and combine the verdicts."""
    cfg = config if config is not None else AuditConfig()
    checks = (
        check_indistinguishability(rule, cfg),
        check_role_symmetry(rule, cfg),
        check_anti_alignment(rule, cfg),
        check_basis_covariance(rule, cfg),
    )
    return AuditReport(
        rule_name=rule.name,
        checks=checks,
        overall_pass=all(c.passed for c in checks),
        evaluation=cfg.evaluation,
        noise_levels=tuple(float(q) for q in cfg.noise_levels),
        seed=cfg.seed,
        config_echo=_config_echo(cfg),
    )
