"""Domain types for centering analysis and the Cf salience ranking."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence


class AnnotationError(ValueError):
    """Raised when annotated input is internally inconsistent."""


class Gender(Enum):
    MASCULINE = "m"
    FEMININE = "f"
    UNSPECIFIED = "u"


class Number(Enum):
    SINGULAR = "sg"
    PLURAL = "pl"
    UNSPECIFIED = "u"


class Person(Enum):
    FIRST = 1
    SECOND = 2
    THIRD = 3


class Form(Enum):
    ZERO = "zero"
    CLITIC = "clitic"
    STRONG_PRONOUN = "strong"
    FULL_NP = "np"
    POSSESSIVE_NP = "poss_np"
    DEICTIC = "deictic"
    OTHER_ANAPHOR = "other_anaphor"
    SET_EXPRESSION = "set_expr"


class GrammaticalFunction(Enum):
    SUBJECT = "subj"
    OBJECT2 = "obj2"
    OBJECT = "obj"
    OTHER = "other"


class ClauseKind(Enum):
    MAIN = "main"
    TENSED_ADJUNCT = "tensed_adj"
    TENSELESS_ADJUNCT = "tenseless_adj"
    # not a centering category; segmented like a main clause and flagged by the validator
    COMPLEMENT = "complement"


class Transition(Enum):
    CONTINUE = "continue"
    RETAIN = "retain"
    SMOOTH_SHIFT = "smooth_shift"
    ROUGH_SHIFT = "rough_shift"
    CENT_ESTAB = "cent_estab"
    OTHER_EXCLUDED = "other_excluded"
    NONE = "none"


class SequenceLabel(Enum):
    CONT_CONT = "cont_cont"
    SHIFT_CONT = "shift_cont"
    RET_CONT = "ret_cont"
    NOT_APPLICABLE = "not_applicable"


PRONOMINAL_FORMS = frozenset({Form.ZERO, Form.CLITIC, Form.STRONG_PRONOUN})
UNANALYZED_FORMS = frozenset({Form.OTHER_ANAPHOR, Form.SET_EXPRESSION})
CORE_TRANSITIONS = (
    Transition.CONTINUE,
    Transition.RETAIN,
    Transition.SMOOTH_SHIFT,
    Transition.ROUGH_SHIFT,
)

# smaller is more salient
FUNCTION_RANK = {
    GrammaticalFunction.SUBJECT: 0,
    GrammaticalFunction.OBJECT2: 1,
    GrammaticalFunction.OBJECT: 2,
    GrammaticalFunction.OTHER: 3,
}


@dataclass(frozen=True)
class Entity:
    id: str
    animate: bool = True
    gender: Gender = Gender.UNSPECIFIED
    number: Number = Number.UNSPECIFIED
    person: Person = Person.THIRD


@dataclass(frozen=True)
class Mention:
    """One realization of an entity inside a clause or unit.

    ``entity`` is the id of the realized entity; for a possessive NP it is
    the possessed entity and ``possessor`` names the possessor.  ``entity``
    is None only for pronouns awaiting resolution.  ``gender`` and
    ``number`` hold the agreement features visible on the mention itself
    (None means: take them from the entity).  ``set_ref`` marks a mention
    that builds a set out of several referents.
    """

    id: str
    entity: Optional[str]
    form: Form
    grammatical_function: GrammaticalFunction
    empathy: bool = False
    possessor: Optional[str] = None
    contraindexed: bool = False
    surface_position: int = 0
    gender: Optional[Gender] = None
    number: Optional[Number] = None
    set_ref: bool = False

    def __post_init__(self) -> None:
        if (self.possessor is not None) != (self.form is Form.POSSESSIVE_NP):
            raise AnnotationError(
                f"mention {self.id}: possessor must be given exactly when form is poss_np"
            )
        if self.contraindexed and self.form is not Form.ZERO:
            raise AnnotationError(f"mention {self.id}: only zero subjects can be contraindexed")
        if self.entity is None and self.form not in PRONOMINAL_FORMS:
            raise AnnotationError(f"mention {self.id}: only pronouns may be left unresolved")

    @property
    def is_pronoun(self) -> bool:
        return self.form in PRONOMINAL_FORMS

    @property
    def unanalyzed(self) -> bool:
        """True for mentions that centering leaves aside (sets, other anaphors)."""
        return self.set_ref or self.form in UNANALYZED_FORMS


@dataclass(frozen=True)
class CenteringUnit:
    id: str
    mentions: tuple[Mention, ...]
    clause_kind: ClauseKind = ClauseKind.MAIN
    segment_initial: bool = False
    # where the unit came from in the source document
    segment: int = 0
    sentence: int = 0
    clauses: tuple[int, ...] = ()
    # computed by the engine
    cf: tuple[Entity, ...] = ()
    cp: Optional[Entity] = None
    cb: Optional[Entity] = None
    transition: Optional[Transition] = None
    sequence_label: Optional[SequenceLabel] = None
    expression_tags: tuple[tuple[str, str], ...] = ()

    def realized(self) -> set[str]:
        """Entity ids realized in this unit for Cb purposes (possessors included)."""
        ids: set[str] = set()
        for m in self.mentions:
            if m.unanalyzed or m.entity is None:
                continue
            ids.add(m.entity)
            if m.possessor is not None:
                ids.add(m.possessor)
        return ids

    def pronominalized(self) -> set[str]:
        return {
            m.entity
            for m in self.mentions
            if m.is_pronoun and not m.unanalyzed and m.entity is not None
        }

    def cf_ids(self) -> list[str]:
        return [e.id for e in self.cf]


@dataclass(frozen=True)
class Discourse:
    """Entity registry plus the ordered centering units of a document.

    ``segments`` keeps the source annotation (a tuple of segments, each a
    tuple of raw sentences) so that a parsed document can be written back.
    """

    entities: Mapping[str, Entity]
    units: tuple[CenteringUnit, ...]
    segments: tuple = ()
    # (mention id, reason) for mentions kept out of centering or of the statistics
    exclusions: tuple[tuple[str, str], ...] = ()

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise AnnotationError(f"unknown entity {entity_id!r}") from None


def rank_cf(mentions: Sequence[Mention], registry: Mapping[str, Entity]) -> list[Entity]:
    """Rank the entities evoked by one unit's mentions by salience.

    The empathy locus comes first, then subject > object2 > object > other,
    ties broken by surface position.  Each possessor of a possessive NP is
    placed right before its possessed entity when that is inanimate and
    right after it when animate.  An entity occurs once, in its highest slot.

    >>> reg = {"john": Entity("john"), "mary": Entity("mary")}
    >>> ms = [Mention("a", "mary", Form.CLITIC, GrammaticalFunction.OBJECT, surface_position=1),
    ...       Mention("b", "john", Form.STRONG_PRONOUN, GrammaticalFunction.SUBJECT)]
    >>> [e.id for e in rank_cf(ms, reg)]
    ['john', 'mary']
    """
    empathic = [m for m in mentions if m.empathy]
    if len(empathic) > 1:
        raise AnnotationError(
            "more than one empathy mention: " + ", ".join(m.id for m in empathic)
        )

    def lookup(entity_id: Optional[str], mention: Mention) -> Entity:
        if entity_id is None:
            raise AnnotationError(f"mention {mention.id} is unresolved")
        try:
            return registry[entity_id]
        except KeyError:
            raise AnnotationError(
                f"mention {mention.id} references unknown entity {entity_id!r}"
            ) from None

    ordered = sorted(
        (m for m in mentions if m.form is not Form.DEICTIC),
        key=lambda m: (not m.empathy, FUNCTION_RANK[m.grammatical_function], m.surface_position),
    )
    for m in ordered:
        lookup(m.entity, m)
    ranking = _dedupe(m.entity for m in ordered)

    possessives = sorted(
        (m for m in ordered if m.possessor is not None), key=lambda m: m.surface_position
    )
    for m in possessives:
        lookup(m.possessor, m)
        host = ranking.index(m.entity)
        if registry[m.entity].animate:
            ranking.insert(host + 1, m.possessor)
        else:
            ranking.insert(host, m.possessor)
    return [registry[i] for i in _dedupe(ranking)]


def _dedupe(ids: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    out = []
    for i in ids:
        if i not in seen:
            seen.add(i)
            out.append(i)
    return out


def features_compatible(
    gender: Gender, number: Number, entity: Entity
) -> bool:
    """Unspecified features are compatible with anything."""
    if Gender.UNSPECIFIED not in (gender, entity.gender) and gender is not entity.gender:
        return False
    if Number.UNSPECIFIED not in (number, entity.number) and number is not entity.number:
        return False
    return True
