"""Cb computation, transition classification and the checks built on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from centering.model import (
    AnnotationError,
    CenteringUnit,
    Discourse,
    Entity,
    Form,
    Gender,
    GrammaticalFunction,
    Mention,
    Number,
    Person,
    SequenceLabel,
    Transition,
    features_compatible,
    rank_cf,
)


class Convention(Enum):
    """How to compare against the unspecified Cb of a segment-initial unit."""

    CONTINUE = "continue"  # Cb(U_n) = Cb(U_n-1) counts as satisfied
    NONE = "none"  # no transition is assigned


class ExpressionTag(Enum):
    CONTINUE = "continue"
    RETAIN = "retain"
    SHIFT = "shift"
    CENT_ESTAB = "cent_estab"
    OTHER_EXCLUDED = "other_excluded"
    NEW_ENTITY = "new_entity"
    NONE = "none"


class FelicityKind(Enum):
    EXPECTED_ZERO_GOT_STRONG = "expected_zero_got_strong"
    ZERO_WITHOUT_CLUE = "zero_in_retain_or_shift_without_clue"
    ZERO_LICENSED_BY_CLUE = "zero_licensed_by_clue"
    CONFORMING = "conforming"


_TAG_FOR_TRANSITION = {
    Transition.CONTINUE: ExpressionTag.CONTINUE,
    Transition.RETAIN: ExpressionTag.RETAIN,
    Transition.SMOOTH_SHIFT: ExpressionTag.SHIFT,
    Transition.ROUGH_SHIFT: ExpressionTag.SHIFT,
    Transition.CENT_ESTAB: ExpressionTag.CENT_ESTAB,
    Transition.OTHER_EXCLUDED: ExpressionTag.OTHER_EXCLUDED,
    Transition.NONE: ExpressionTag.NONE,
}

# lower is preferred
TRANSITION_PREFERENCE = {
    Transition.CONTINUE: 0,
    Transition.RETAIN: 1,
    Transition.SMOOTH_SHIFT: 2,
    Transition.ROUGH_SHIFT: 3,
}

TRANSITION_WEIGHT = {
    Transition.CONTINUE: 3,
    Transition.RETAIN: 2,
    Transition.SMOOTH_SHIFT: 1,
    Transition.ROUGH_SHIFT: 0,
}


@dataclass(frozen=True)
class ExpressionRecord:
    mention_id: str
    unit_id: str
    entity: str
    form: Form
    grammatical_function: GrammaticalFunction
    tag: ExpressionTag
    sequence: SequenceLabel = SequenceLabel.NOT_APPLICABLE


@dataclass(frozen=True)
class Rule1Violation:
    unit_id: str
    explanation: str


@dataclass(frozen=True)
class FelicityFinding:
    unit_id: str
    kind: FelicityKind
    detail: str
    mention_id: str = ""


@dataclass(frozen=True)
class AnalysisResult:
    discourse: Discourse
    units: tuple[CenteringUnit, ...]
    expression_records: tuple[ExpressionRecord, ...] = ()
    rule1_violations: tuple[Rule1Violation, ...] = ()
    felicity_findings: tuple[FelicityFinding, ...] = ()
    convention: Convention = Convention.CONTINUE


def compute_cb(unit: CenteringUnit, prev: Optional[CenteringUnit]) -> Optional[Entity]:
    """Individuate Cb(U_n) from the previous unit's Cf list.

    A single pronominalized element of Cf(U_n-1) is the Cb.  With none or
    several, Cb(U_n-1) wins if it is realized again, else the highest
    ranked element of Cf(U_n-1) that is realized.  Pronouns are counted by
    the entity they realize, so two pronouns for one referent count once.
    """
    if prev is None or unit.segment_initial:
        return None
    pronouns = unit.pronominalized()
    realized = unit.realized()
    pronominal_prev = [e for e in prev.cf if e.id in pronouns]
    if len(pronominal_prev) == 1:
        return pronominal_prev[0]
    if prev.cb is not None and prev.cb.id in realized:
        return prev.cb
    for e in prev.cf:
        if e.id in realized:
            return e
    return None


def classify_transition(
    cb_n: Optional[Entity],
    cb_prev: Optional[Entity],
    cp_n: Optional[Entity],
    convention: Convention = Convention.CONTINUE,
) -> Transition:
    """Place a unit in the 2x2 grid of Cb(U_n)=Cb(U_n-1) by Cb(U_n)=Cp(U_n).

    ``cb_prev`` None means the previous Cb is unspecified.
    """
    if cb_n is None:
        return Transition.NONE
    if cb_prev is None:
        if convention is Convention.NONE:
            return Transition.NONE
        same_backward = True
    else:
        same_backward = cb_n == cb_prev
    same_forward = cb_n == cp_n
    if same_backward:
        return Transition.CONTINUE if same_forward else Transition.RETAIN
    return Transition.SMOOTH_SHIFT if same_forward else Transition.ROUGH_SHIFT


def classify_sequence(transition_prev: Optional[Transition], transition_n: Optional[Transition]) -> SequenceLabel:
    if transition_n is not Transition.CONTINUE:
        return SequenceLabel.NOT_APPLICABLE
    if transition_prev is Transition.CONTINUE:
        return SequenceLabel.CONT_CONT
    if transition_prev is Transition.RETAIN:
        return SequenceLabel.RET_CONT
    if transition_prev in (Transition.SMOOTH_SHIFT, Transition.ROUGH_SHIFT):
        return SequenceLabel.SHIFT_CONT
    return SequenceLabel.NOT_APPLICABLE


def detect_cent_est(
    unit: CenteringUnit, prev: Optional[CenteringUnit], history: Iterable[str]
) -> bool:
    """True when the unit refers back to a discourse entity missing from Cf(U_n-1)."""
    if prev is None:
        return False
    history = set(history)
    prev_cf = set(prev.cf_ids())
    return any(e in history and e not in prev_cf for e in unit.realized())


def established_center(unit: CenteringUnit, history: Iterable[str]) -> Optional[Entity]:
    """Highest ranked Cf(U_n) entity already known to the discourse."""
    history = set(history)
    for e in unit.cf:
        if e.id in history:
            return e
    return None


def check_rule1(unit: CenteringUnit, prev: Optional[CenteringUnit]) -> list[Rule1Violation]:
    """If an element of Cf(U_n-1) is pronominalized in U_n, Cb(U_n) must be too."""
    if prev is None or unit.cb is None:
        return []
    pronouns = unit.pronominalized()
    offending = [e.id for e in prev.cf if e.id in pronouns]
    if not offending or unit.cb.id in pronouns:
        return []
    return [
        Rule1Violation(
            unit.id,
            f"{', '.join(offending)} pronominalized but Cb {unit.cb.id} is not",
        )
    ]


def agreement_forces_referent(
    subject_features: tuple[Gender, Number],
    intended: Entity,
    cb_prev: Optional[Entity],
    candidates: Sequence[Entity],
) -> bool:
    """True iff agreement leaves exactly one candidate, the intended one, and it is not Cb(U_n-1)."""
    if not candidates:
        raise ValueError("agreement_forces_referent needs at least one candidate")
    if intended not in candidates:
        raise ValueError(f"intended referent {intended.id} is not among the candidates")
    gender, number = subject_features
    survivors = [c for c in candidates if features_compatible(gender, number, c)]
    return len(survivors) == 1 and survivors[0] == intended and survivors[0] != cb_prev


def _subject_mentions(unit: CenteringUnit, registry: Mapping[str, Entity]) -> list[Mention]:
    out = []
    for m in unit.mentions:
        if m.grammatical_function is not GrammaticalFunction.SUBJECT or m.entity is None:
            continue
        if m.contraindexed:
            continue
        e = registry.get(m.entity)
        if e is None or not e.animate or e.person is not Person.THIRD:
            continue
        out.append(m)
    return out


def check_felicity(
    unit: CenteringUnit,
    prev: Optional[CenteringUnit],
    registry: Optional[Mapping[str, Entity]] = None,
) -> list[FelicityFinding]:
    """Check the null vs strong subject strategies on each analyzable subject."""
    if prev is None:
        raise ValueError(f"unit {unit.id}: felicity needs the preceding unit")
    if registry is None:
        registry = {e.id: e for e in (*unit.cf, *prev.cf)}
    findings = []
    for m in _subject_mentions(unit, registry):
        if m.unanalyzed:
            continue
        intended = registry[m.entity]
        kind, detail = FelicityKind.CONFORMING, ""
        if (
            m.form is Form.STRONG_PRONOUN
            and unit.transition is Transition.CONTINUE
            and unit.sequence_label in (SequenceLabel.CONT_CONT, SequenceLabel.SHIFT_CONT)
        ):
            kind = FelicityKind.EXPECTED_ZERO_GOT_STRONG
            detail = f"strong subject for {intended.id} in a {unit.sequence_label.value}"
        elif m.form is Form.ZERO and unit.transition in (
            Transition.RETAIN,
            Transition.SMOOTH_SHIFT,
            Transition.ROUGH_SHIFT,
        ):
            if prev.cb is not None and intended == prev.cb:
                detail = f"zero keeps referring to Cb(U_n-1) {intended.id}"
            else:
                candidates = [e for e in prev.cf if e.person is Person.THIRD]
                if intended not in candidates:
                    candidates.append(intended)
                features = (m.gender or intended.gender, m.number or intended.number)
                if agreement_forces_referent(features, intended, prev.cb, candidates):
                    kind = FelicityKind.ZERO_LICENSED_BY_CLUE
                    detail = f"agreement singles out {intended.id}"
                else:
                    kind = FelicityKind.ZERO_WITHOUT_CLUE
                    detail = (
                        f"zero for {intended.id} in a {unit.transition.value} and agreement "
                        "does not exclude the other candidates"
                    )
        findings.append(FelicityFinding(unit.id, kind, detail, m.id))
    return findings


def _expression_records(
    unit: CenteringUnit,
    prev: Optional[CenteringUnit],
    history: set[str],
    registry: Mapping[str, Entity],
) -> list[ExpressionRecord]:
    prev_cf = set(prev.cf_ids()) if prev is not None and not unit.segment_initial else None
    records = []
    for m in _subject_mentions(unit, registry):
        if m.unanalyzed:
            tag = ExpressionTag.OTHER_EXCLUDED
        elif m.form in (Form.FULL_NP, Form.POSSESSIVE_NP) and m.entity not in history:
            tag = ExpressionTag.NEW_ENTITY
        elif prev_cf is not None and m.entity in history and m.entity not in prev_cf:
            # the reference itself establishes a center, whatever the unit's Cb
            tag = ExpressionTag.CENT_ESTAB
        else:
            tag = _TAG_FOR_TRANSITION[unit.transition or Transition.NONE]
        seq = unit.sequence_label if tag is ExpressionTag.CONTINUE else SequenceLabel.NOT_APPLICABLE
        records.append(
            ExpressionRecord(m.id, unit.id, m.entity, m.form, m.grammatical_function, tag, seq)
        )
    return records


def analyze_unit(
    unit: CenteringUnit,
    prev: Optional[CenteringUnit],
    history: set[str],
    registry: Mapping[str, Entity],
    convention: Convention = Convention.CONTINUE,
) -> CenteringUnit:
    """Populate cf/cp/cb/transition/sequence_label for one unit."""
    try:
        cf = tuple(rank_cf(unit.mentions, registry))
    except AnnotationError as exc:
        raise AnnotationError(f"unit {unit.id}: {exc}") from None
    unit = replace(unit, cf=cf, cp=cf[0] if cf else None)
    if prev is None or unit.segment_initial:
        return replace(
            unit,
            cb=None,
            transition=Transition.NONE,
            sequence_label=SequenceLabel.NOT_APPLICABLE,
        )
    cb = compute_cb(unit, prev)
    if cb is None:
        if detect_cent_est(unit, prev, history):
            cb = established_center(unit, history)
            transition = Transition.CENT_ESTAB
        else:
            transition = Transition.NONE
    else:
        transition = classify_transition(cb, prev.cb, unit.cp, convention)
    return replace(
        unit,
        cb=cb,
        transition=transition,
        sequence_label=classify_sequence(prev.transition, transition),
    )


def _mentioned(unit: CenteringUnit) -> set[str]:
    return unit.realized() | {m.entity for m in unit.mentions if m.entity is not None}


def analyze_discourse(
    discourse: Discourse, convention: Convention = Convention.CONTINUE
) -> AnalysisResult:
    registry = discourse.entities
    units: list[CenteringUnit] = []
    records: list[ExpressionRecord] = []
    violations: list[Rule1Violation] = []
    findings: list[FelicityFinding] = []
    history: set[str] = set()
    prev: Optional[CenteringUnit] = None
    for raw in discourse.units:
        if raw.segment_initial:
            prev = None
        unit = analyze_unit(raw, prev, history, registry, convention)
        unit_records = _expression_records(unit, prev, history, registry)
        unit = replace(
            unit, expression_tags=tuple((r.mention_id, r.tag.value) for r in unit_records)
        )
        records.extend(unit_records)
        if prev is not None:
            violations.extend(check_rule1(unit, prev))
            findings.extend(check_felicity(unit, prev, registry))
        history |= _mentioned(unit)
        units.append(unit)
        prev = unit
    return AnalysisResult(
        discourse=discourse,
        units=tuple(units),
        expression_records=tuple(records),
        rule1_violations=tuple(violations),
        felicity_findings=tuple(findings),
        convention=convention,
    )


def coherence_score(transitions: Sequence[Transition]) -> Fraction:
    """Score a transition sequence in [0, 1]; 1 is maximally coherent.

    Core transitions weigh continue 3, retain 2, smooth-shift 1,
    rough-shift 0, and a continue right after a retain loses 1.
    Other labels are skipped but still break adjacency.

    >>> coherence_score([Transition.CONTINUE, Transition.RETAIN, Transition.CONTINUE])
    Fraction(7, 9)
    """
    total = 0
    counted = 0
    prev: Optional[Transition] = None
    for t in transitions:
        if t in TRANSITION_WEIGHT:
            weight = TRANSITION_WEIGHT[t]
            if classify_sequence(prev, t) is SequenceLabel.RET_CONT:
                weight = max(weight - 1, 0)
            total += weight
            counted += 1
        prev = t
    if counted == 0:
        return Fraction(1)
    return Fraction(total, 3 * counted)


@dataclass(frozen=True)
class ResolutionResult:
    assignments: Mapping[str, Optional[str]]
    # mention id -> candidates ordered best first, with the transition each would give
    candidates: Mapping[str, tuple[tuple[str, Transition], ...]]
    transitions: Mapping[str, Transition]
    unresolvable: tuple[str, ...] = ()


def _candidates_for(mention: Mention, pool: Sequence[Entity]) -> list[Entity]:
    gender = mention.gender or Gender.UNSPECIFIED
    number = mention.number or Number.UNSPECIFIED
    out = []
    for e in pool:
        if e.person is not Person.THIRD:
            continue
        if mention.form is Form.STRONG_PRONOUN and not e.animate:
            continue
        if features_compatible(gender, number, e):
            out.append(e)
    return out


def resolve_pronouns(
    discourse: Discourse, convention: Convention = Convention.CONTINUE
) -> ResolutionResult:
    """Resolve unresolved pronouns against Cf(U_n-1), preferring coherent transitions.

    All joint assignments of a unit's open pronouns are tried; the one giving
    the most preferred transition wins, ties going to higher Cf(U_n-1) rank.
    Assignments mapping two pronouns to one referent are used only when no
    other assignment exists.
    """
    registry = discourse.entities
    assignments: dict[str, Optional[str]] = {}
    ranked: dict[str, tuple[tuple[str, Transition], ...]] = {}
    transitions: dict[str, Transition] = {}
    unresolvable: list[str] = []
    history: set[str] = set()
    prev: Optional[CenteringUnit] = None  # previous unit, across segment boundaries

    for unit in discourse.units:
        link = None if unit.segment_initial else prev
        pool = list(prev.cf) if prev is not None else []
        rank_of = {e.id: i for i, e in enumerate(pool)}
        open_mentions = [m for m in unit.mentions if m.entity is None]
        options_per_mention = []
        for m in open_mentions:
            cands = _candidates_for(m, pool)
            if not cands:
                unresolvable.append(m.id)
                assignments[m.id] = None
                ranked[m.id] = ()
            options_per_mention.append(cands)
        solvable = [(m, c) for m, c in zip(open_mentions, options_per_mention) if c]
        fixed = [m for m in unit.mentions if m.entity is not None]

        def build(choice: Sequence[Entity]) -> CenteringUnit:
            chosen = {m.id: e.id for (m, _), e in zip(solvable, choice)}
            mentions = tuple(
                replace(m, entity=chosen[m.id]) if m.id in chosen else m
                for m in unit.mentions
                if m.entity is not None or m.id in chosen
            )
            return replace(unit, mentions=mentions)

        choices = list(itertools.product(*(c for _, c in solvable)))
        injective = [c for c in choices if len({e.id for e in c}) == len(c)]
        scored = []
        for choice in injective or choices:
            analyzed = analyze_unit(build(choice), link, history, registry, convention)
            key = (
                TRANSITION_PREFERENCE.get(analyzed.transition, len(TRANSITION_PREFERENCE)),
                tuple(rank_of[e.id] for e in choice),
            )
            scored.append((key, choice, analyzed))
        scored.sort(key=lambda s: s[0])

        if scored:
            _, best, analyzed = scored[0]
            for i, ((m, _), e) in enumerate(zip(solvable, best)):
                assignments[m.id] = e.id
                order: dict[str, tuple] = {}
                for key, choice, a in scored:
                    order.setdefault(choice[i].id, (key, a.transition))
                ranked[m.id] = tuple((eid, t) for eid, (_, t) in order.items())
        else:
            analyzed = analyze_unit(
                replace(unit, mentions=tuple(fixed)), link, history, registry, convention
            )
        transitions[unit.id] = analyzed.transition
        history |= _mentioned(analyzed)
        prev = analyzed

    return ResolutionResult(
        assignments=assignments,
        candidates=ranked,
        transitions=transitions,
        unresolvable=tuple(unresolvable),
    )
