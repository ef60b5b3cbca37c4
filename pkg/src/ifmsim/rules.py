"""Candidate non-interaction rules and the coupling channel they induce.

A coupling event between an aligned-or-not probe/object pair ends one of
two ways: the probe *scatters* (it is absorbed and dissipated, a terminal
and opaque outcome) or the pair *survives* in some joint state.  A rule
is exactly a prescription for that survivor state.

All built-in rules except the linear-channel ones share the universal
scatter law ``p_scatter = interaction_probability(probe, object)``; they
differ only in what they claim survives:

* ``probe-rigid``    - the probe keeps its state, the object jumps to the
                       state orthogonal to the probe's aligned partner.
* ``object-rigid``   - the mirror image: the object keeps its state.
* ``singlet``        - the survivor is the fixed maximally entangled
                       anti-aligned pair ``(|x>|y> - |y>|x>)/sqrt(2)``,
                       independent of the input.
* ``random-mix``     - the survivor is the maximally mixed pair state.
* ``preferred-basis:B`` - the survivor dephases onto the anti-aligned
                       cells ``|b1 b2>``, ``|b2 b1>`` of basis B, with
                       weights taken from the input.

``coherent-projection:B`` and ``custom`` are linear channels: they carry
their own scatter law (the weight removed by their survive operator),
which is precisely the kind of disagreement the audit battery exposes.

Fly-by noise ``q`` is the probability that the coupling simply does not
happen; the outcome then blends the untouched input with the rule's own
survivor.  All functions here are pure and deterministic; randomness
lives only in the Monte Carlo engine.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .states import (
    ATOL,
    PHASE_EPS,
    Basis,
    JointState,
    QubitState,
    SINGLET,
    orthogonal_state,
    overlap_probability,
    parse_basis_spec,
    tensor_product,
)

# Permutation exchanging the probe and object slots: (i, j) -> (j, i).
SWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

_IDENTITY4 = np.eye(4, dtype=complex)
_SINGLET_DENSITY = SINGLET.density()


class InvalidRuleError(ValueError):
    """A rule definition is malformed."""


class ContractionViolationError(InvalidRuleError):
    """A custom survive operator can exceed unit probability on some input."""

    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            "survive operator violates the contraction bound: "
            f"I - K^dag K has most-negative eigenvalue {self.min_eigenvalue:.6g}"
        )


class RuleKind(enum.Enum):
    PROBE_RIGID = "probe-rigid"
    OBJECT_RIGID = "object-rigid"
    SINGLET = "singlet"
    RANDOM_MIX = "random-mix"
    PREFERRED_BASIS = "preferred-basis"
    COHERENT_PROJECTION = "coherent-projection"
    CUSTOM = "custom"


_BASIS_KINDS = (RuleKind.PREFERRED_BASIS, RuleKind.COHERENT_PROJECTION)
# Kinds whose scatter probability is the universal interaction probability.
UNIVERSAL_SCATTER_KINDS = (
    RuleKind.PROBE_RIGID,
    RuleKind.OBJECT_RIGID,
    RuleKind.SINGLET,
    RuleKind.RANDOM_MIX,
    RuleKind.PREFERRED_BASIS,
)


@dataclass(frozen=True, eq=False)
class Rule:
    """One candidate non-interaction rule."""

    kind: RuleKind
    basis: Basis | None = None
    operator: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind in _BASIS_KINDS and self.basis is None:
            raise InvalidRuleError(f"{self.kind.value} rule needs a basis")
        if self.kind is RuleKind.CUSTOM:
            if self.operator is None:
                raise InvalidRuleError("custom rule needs a survive operator")
            op = np.array(self.operator, dtype=complex)
            if op.shape != (4, 4):
                raise InvalidRuleError(f"survive operator must be 4x4, got shape {op.shape}")
            if not np.all(np.isfinite(op)):
                raise InvalidRuleError("survive operator entries must be finite")
            slack = np.linalg.eigvalsh(_IDENTITY4 - op.conj().T @ op)
            if slack.min() < -ATOL:
                raise ContractionViolationError(slack.min())
            op.setflags(write=False)
            object.__setattr__(self, "operator", op)
        if not self.name:
            name = self.kind.value
            if self.basis is not None:
                name = f"{name}:{self.basis.label.lower()}"
            object.__setattr__(self, "name", name)

    def __repr__(self) -> str:
        return f"Rule({self.name})"


@dataclass(frozen=True, eq=False)
class CouplingOutcome:
    """Result of one coupling: scatter probability plus the survivor density."""

    p_scatter: float
    survive_state: np.ndarray | None

    def __post_init__(self):
        if self.survive_state is not None:
            state = np.asarray(self.survive_state, dtype=complex)
            state.setflags(write=False)
            object.__setattr__(self, "survive_state", state)


def probe_rigid() -> Rule:
    return Rule(RuleKind.PROBE_RIGID)


def object_rigid() -> Rule:
    return Rule(RuleKind.OBJECT_RIGID)


def singlet_rule() -> Rule:
    return Rule(RuleKind.SINGLET)


def random_mix() -> Rule:
    return Rule(RuleKind.RANDOM_MIX)


def preferred_basis(basis: Basis) -> Rule:
    return Rule(RuleKind.PREFERRED_BASIS, basis=basis)


def coherent_projection(basis: Basis) -> Rule:
    return Rule(RuleKind.COHERENT_PROJECTION, basis=basis)


def validate_custom_rule(operator, name: str = "custom") -> Rule:
    """Check the contraction bound ``I - K^dag K >= 0`` and wrap ``K`` as a rule."""
    op = np.asarray(operator, dtype=complex)
    return Rule(RuleKind.CUSTOM, operator=op, name=name)


def builtin_rules() -> tuple[Rule, ...]:
    """The default audit battery, singlet plus the rejected alternatives."""
    from .states import BASIS_SIGMA, BASIS_XY

    return (
        probe_rigid(),
        object_rigid(),
        singlet_rule(),
        random_mix(),
        preferred_basis(BASIS_SIGMA),
        coherent_projection(BASIS_XY),
    )


def aligned_state(obj: QubitState) -> QubitState:
    """The probe state fully absorbed by an object in state ``obj``.

    The probe and object spaces are identified amplitude-by-amplitude
    (x with x, y with y), so the aligned partner carries the same
    amplitudes; ``overlap_probability(aligned_state(w), w) == 1``.
    """
    return QubitState(obj.amps)


def interaction_probability(probe: QubitState, obj: QubitState) -> float:
    """Probability that the pair interacts: overlap with the aligned partner."""
    return overlap_probability(probe, aligned_state(obj))


def _aligned_projector(basis: Basis) -> np.ndarray:
    """Projector onto the aligned cells ``|b1 b1>``, ``|b2 b2>`` of ``basis``."""
    v11 = np.kron(basis.b1.amps, basis.b1.amps)
    v22 = np.kron(basis.b2.amps, basis.b2.amps)
    return np.outer(v11, v11.conj()) + np.outer(v22, v22.conj())


def _survivor_density(rule: Rule, probe: QubitState, obj: QubitState, inp: JointState) -> np.ndarray:
    """Noiseless survivor for the universal-scatter rule kinds."""
    if rule.kind is RuleKind.PROBE_RIGID:
        return np.kron(probe.density(), orthogonal_state(probe).density())
    if rule.kind is RuleKind.OBJECT_RIGID:
        return np.kron(orthogonal_state(aligned_state(obj)).density(), obj.density())
    if rule.kind is RuleKind.SINGLET:
        return _SINGLET_DENSITY
    if rule.kind is RuleKind.RANDOM_MIX:
        return _IDENTITY4 / 4.0
    if rule.kind is RuleKind.PREFERRED_BASIS:
        v12 = np.kron(rule.basis.b1.amps, rule.basis.b2.amps)
        v21 = np.kron(rule.basis.b2.amps, rule.basis.b1.amps)
        w12 = abs(np.vdot(v12, inp.amps)) ** 2
        w21 = abs(np.vdot(v21, inp.amps)) ** 2
        total = w12 + w21
        if total <= PHASE_EPS:
            w12 = w21 = 0.5
        else:
            w12, w21 = w12 / total, w21 / total
        return w12 * np.outer(v12, v12.conj()) + w21 * np.outer(v21, v21.conj())
    raise InvalidRuleError(f"no survivor map for rule kind {rule.kind}")


def apply_rule(rule: Rule, probe: QubitState, obj: QubitState, noise_q: float = 0.0) -> CouplingOutcome:
    """Run one coupling under ``rule`` with fly-by probability ``noise_q``.

    With probability ``noise_q`` the coupling does not happen at all and
    the input product state passes through untouched.  Otherwise the
    rule's own scatter law and survivor map apply.  If the overall
    survive probability is negligible the outcome reports certain
    scatter and omits the survivor.
    """
    q = float(noise_q)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"noise_q must be within [0, 1], got {q}")
    inp = tensor_product(probe, obj)

    if rule.kind is RuleKind.COHERENT_PROJECTION:
        kept = (_IDENTITY4 - _aligned_projector(rule.basis)) @ inp.amps
        survive_nn = float(np.vdot(kept, kept).real)
        p_nn = min(max(1.0 - survive_nn, 0.0), 1.0)
        survivor_nn = np.outer(kept, kept.conj()) / survive_nn if survive_nn > PHASE_EPS else None
    elif rule.kind is RuleKind.CUSTOM:
        kept = rule.operator @ inp.amps
        survive_nn = float(np.vdot(kept, kept).real)
        p_nn = min(max(1.0 - survive_nn, 0.0), 1.0)
        survivor_nn = np.outer(kept, kept.conj()) / survive_nn if survive_nn > PHASE_EPS else None
    else:
        p_nn = interaction_probability(probe, obj)
        survive_nn = 1.0 - p_nn
        survivor_nn = _survivor_density(rule, probe, obj, inp) if survive_nn > PHASE_EPS else None

    survive_mass = q + (1.0 - q) * (1.0 - p_nn)
    if survive_mass <= PHASE_EPS:
        return CouplingOutcome(1.0, None)

    p_scatter = (1.0 - q) * p_nn
    blended = q * inp.density()
    if survivor_nn is not None:
        blended = blended + (1.0 - q) * (1.0 - p_nn) * survivor_nn
    return CouplingOutcome(p_scatter, blended / survive_mass)


def swapped_channel(rule: Rule, probe: QubitState, obj: QubitState, noise_q: float = 0.0) -> CouplingOutcome:
    """Apply ``rule`` with the arguments exchanged, mapped back by SWAP.

    The output lives on the same (probe slot, object slot) space as
    ``apply_rule(rule, probe, obj)``, so a role-symmetric rule gives an
    identical outcome through both paths.
    """
    out = apply_rule(rule, obj, probe, noise_q)
    if out.survive_state is None:
        return out
    return CouplingOutcome(out.p_scatter, SWAP @ out.survive_state @ SWAP)


_BUILTIN_FACTORIES = {
    RuleKind.PROBE_RIGID.value: lambda basis: probe_rigid(),
    RuleKind.OBJECT_RIGID.value: lambda basis: object_rigid(),
    RuleKind.SINGLET.value: lambda basis: singlet_rule(),
    RuleKind.RANDOM_MIX.value: lambda basis: random_mix(),
    RuleKind.PREFERRED_BASIS.value: preferred_basis,
    RuleKind.COHERENT_PROJECTION.value: coherent_projection,
}


def rule_from_name(text: str) -> Rule:
    """Resolve a rule spelling like ``singlet`` or ``preferred-basis:sigma``."""
    if not isinstance(text, str) or not text.strip():
        raise InvalidRuleError("empty rule name")
    spelled = text.strip().lower()
    base, _, basis_label = spelled.partition(":")
    if base not in _BUILTIN_FACTORIES:
        known = ", ".join(sorted(_BUILTIN_FACTORIES))
        raise InvalidRuleError(f"unknown rule {text.strip()!r}; built-ins: {known}")
    needs_basis = base in (RuleKind.PREFERRED_BASIS.value, RuleKind.COHERENT_PROJECTION.value)
    if needs_basis and not basis_label:
        raise InvalidRuleError(f"rule {base!r} needs a basis, e.g. {base}:sigma")
    if not needs_basis and basis_label:
        raise InvalidRuleError(f"rule {base!r} does not take a basis parameter")
    basis = parse_basis_spec(basis_label) if basis_label else None
    return _BUILTIN_FACTORIES[base](basis)


def load_rule_file(path: str) -> Rule:
    """Load a custom rule from a JSON document.

    Expected shape: ``{"name": str, "survive_operator": K}`` where ``K``
    is a 4x4 array of ``[re, im]`` pairs, row-major, flat index
    ``2*probe + object``.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidRuleError(f"cannot read rule file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidRuleError(f"rule file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidRuleError("rule document must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise InvalidRuleError("rule field 'name': expected a non-empty string")
    rows = doc.get("survive_operator")
    if not isinstance(rows, list) or len(rows) != 4:
        raise InvalidRuleError("rule field 'survive_operator': expected 4 rows")
    op = np.zeros((4, 4), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise InvalidRuleError(f"survive_operator[{r}]: expected 4 entries")
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise InvalidRuleError(f"survive_operator[{r}][{c}]: expected an [re, im] number pair")
            if not all(math.isfinite(float(v)) for v in entry):
                raise InvalidRuleError(f"survive_operator[{r}][{c}]: entries must be finite")
            op[r, c] = complex(float(entry[0]), float(entry[1]))
    return validate_custom_rule(op, name=name)


def rule_description(rule: Rule) -> str:
    """One-line account of what the rule claims survives a non-interaction."""
    if rule.kind is RuleKind.PROBE_RIGID:
        return "probe keeps its state; the object jumps to the orthogonal partner state"
    if rule.kind is RuleKind.OBJECT_RIGID:
        return "object keeps its state; the probe jumps to the orthogonal partner state"
    if rule.kind is RuleKind.SINGLET:
        return "survivor is the fixed maximally entangled anti-aligned pair, independent of input"
    if rule.kind is RuleKind.RANDOM_MIX:
        return "survivor is the maximally mixed two-particle state"
    if rule.kind is RuleKind.PREFERRED_BASIS:
        return f"survivor dephases onto the anti-aligned cells of basis {rule.basis.label}"
    if rule.kind is RuleKind.COHERENT_PROJECTION:
        return (
            f"linear channel removing the aligned components in basis {rule.basis.label}; "
            "scatter probability is the removed weight"
        )
    return "custom survive operator K; scatter probability is 1 - |K psi|^2"
