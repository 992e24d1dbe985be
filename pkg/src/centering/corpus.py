"""Reading, validating and writing annotated discourses.

A document is a JSON object::

    {"entities": [{"id": "john", "animate": true, "gender": "m",
                   "number": "sg", "person": 3}, ...],
     "segments": [{"sentences": [{"clauses": [
         {"kind": "main",
          "mentions": [{"entity": "john", "form": "strong", "gf": "subj"}]}
     ]}]}]}

Analysis output uses the same layout with ``units`` and ``records`` added.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

from centering.engine import (
    AnalysisResult,
    Convention,
    ExpressionRecord,
    ExpressionTag,
    FelicityFinding,
    FelicityKind,
    Rule1Violation,
)
from centering.model import (
    CenteringUnit,
    ClauseKind,
    Discourse,
    Entity,
    Form,
    Gender,
    GrammaticalFunction,
    Mention,
    Number,
    Person,
    PRONOMINAL_FORMS,
    SequenceLabel,
    Transition,
)

log = logging.getLogger(__name__)

FORMAT_NAME = "centering-analysis"
FORMAT_VERSION = 1
SCHEMA_PATH = Path(__file__).with_name("schema.json")

TOP_KEYS = {"entities", "segments", "format", "version", "name"}
OUTPUT_KEYS = {"convention", "units", "records", "rule1_violations", "felicity"}
ENTITY_KEYS = {"id", "animate", "gender", "number", "person"}
SEGMENT_KEYS = {"sentences"}
SENTENCE_KEYS = {"clauses"}
CLAUSE_KEYS = {"kind", "mentions"}
MENTION_KEYS = {
    "entity", "form", "gf", "empathy", "possessor", "contraindexed",
    "gender", "number", "set_ref",
}


class CorpusError(ValueError):
    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        self.message = message
        self.path = path
        self.line = line
        where = path
        if line is not None:
            where = f"line {line}" + (f", {path}" if path else "")
        super().__init__(f"{where}: {message}" if where else message)


class ParseError(CorpusError):
    pass


class UnknownEntityError(CorpusError):
    def __init__(self, entity_id: str, path: str = ""):
        self.entity_id = entity_id
        super().__init__(f"unregistered entity {entity_id!r}", path)


class DuplicateEntityError(CorpusError):
    pass


class ConsistencyError(CorpusError):
    pass


class DegenerateSentenceError(CorpusError):
    pass


@dataclass(frozen=True)
class Clause:
    kind: ClauseKind
    mentions: tuple[Mention, ...]


@dataclass(frozen=True)
class RawSentence:
    clauses: tuple[Clause, ...]


@dataclass
class Diagnostics:
    errors: list[CorpusError]
    warnings: list[str]

    @property
    def clean(self) -> bool:
        return not self.errors


def segment_units(sentence: RawSentence) -> list[CenteringUnit]:
    """Split a sentence into centering units.

    Main clauses and tensed adjuncts each open a unit; a tenseless adjunct
    joins the unit before it, or the next one when it starts the sentence.
    Returned units carry empty ids; positions are renumbered per unit.
    """
    groups: list[tuple[ClauseKind, list[int]]] = []
    leading: list[int] = []
    for i, clause in enumerate(sentence.clauses):
        if clause.kind is ClauseKind.TENSELESS_ADJUNCT:
            if groups:
                groups[-1][1].append(i)
            else:
                leading.append(i)
        else:
            groups.append((clause.kind, leading + [i]))
            leading = []
    if not groups:
        raise DegenerateSentenceError("sentence has no main clause or tensed adjunct")
    units = []
    for kind, indices in groups:
        mentions = []
        for i in indices:
            mentions.extend(sorted(sentence.clauses[i].mentions, key=lambda m: m.surface_position))
        mentions = [replace(m, surface_position=k) for k, m in enumerate(mentions)]
        units.append(
            CenteringUnit(id="", mentions=tuple(mentions), clause_kind=kind, clauses=tuple(indices))
        )
    return units


def filter_mentions(
    unit: CenteringUnit, registry: Mapping[str, Entity]
) -> tuple[CenteringUnit, list[tuple[str, str]]]:
    """Drop deictic mentions from a unit and log contraindexed zeros.

    Deictics are mentions of form ``deictic`` and pronouns (zeros included)
    whose referent is first or second person.  Contraindexed zeros stay in
    the unit but are logged as excluded from the subject statistics.
    """
    kept = []
    log_entries = []
    for m in unit.mentions:
        entity = registry.get(m.entity) if m.entity is not None else None
        deictic = m.form is Form.DEICTIC or (
            m.form in PRONOMINAL_FORMS and entity is not None and entity.person is not Person.THIRD
        )
        if deictic:
            log_entries.append((m.id, "deictic"))
            continue
        if m.contraindexed:
            log_entries.append((m.id, "contraindexed"))
        kept.append(m)
    if len(kept) == len(unit.mentions):
        return unit, log_entries
    return replace(unit, mentions=tuple(kept)), log_entries


def build_discourse(
    entities: Mapping[str, Entity], segments: Sequence[Sequence[RawSentence]]
) -> Discourse:
    """Segment and filter raw sentences into a Discourse."""
    units = []
    exclusions: list[tuple[str, str]] = []
    for s, segment in enumerate(segments):
        first = True
        for t, sentence in enumerate(segment):
            for unit in segment_units(sentence):
                unit, logged = filter_mentions(unit, entities)
                exclusions.extend(logged)
                units.append(
                    replace(
                        unit,
                        id=f"u{len(units)}",
                        segment_initial=first,
                        segment=s,
                        sentence=t,
                    )
                )
                first = False
    return Discourse(
        entities=dict(entities),
        units=tuple(units),
        segments=tuple(tuple(seg) for seg in segments),
        exclusions=tuple(exclusions),
    )


class _Reader:
    def __init__(self, strict: bool):
        self.strict = strict
        self.errors: list[CorpusError] = []
        self.warnings: list[str] = []

    def error(self, exc: CorpusError) -> None:
        self.errors.append(exc)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        log.warning(message)

    def keys(self, obj: Mapping, allowed: set[str], path: str) -> None:
        for key in obj:
            if key not in allowed:
                msg = f"unknown field {key!r}"
                if self.strict:
                    self.error(ParseError(msg, f"{path}.{key}" if path else key))
                else:
                    self.warn(f"{path or '<root>'}: {msg} ignored")

    def obj(self, value: Any, path: str) -> Optional[Mapping]:
        if not isinstance(value, dict):
            self.error(ParseError(f"expected an object, got {type(value).__name__}", path))
            return None
        return value

    def items(self, obj: Mapping, key: str, path: str) -> list:
        value = obj.get(key, [])
        if not isinstance(value, list):
            self.error(ParseError("expected a list", f"{path}.{key}" if path else key))
            return []
        return value

    def enum(self, enum_cls, value: Any, path: str, default=None):
        if value is None and default is not None:
            return default
        try:
            return enum_cls(value)
        except ValueError:
            allowed = ", ".join(repr(e.value) for e in enum_cls)
            self.error(ParseError(f"invalid value {value!r} (expected one of {allowed})", path))
            return default

    def flag(self, obj: Mapping, key: str, path: str) -> bool:
        value = obj.get(key, False)
        if not isinstance(value, bool):
            self.error(ParseError("expected true or false", f"{path}.{key}"))
            return False
        return value

    def entity(self, raw: Any, path: str) -> Optional[Entity]:
        raw = self.obj(raw, path)
        if raw is None:
            return None
        self.keys(raw, ENTITY_KEYS, path)
        eid = raw.get("id")
        if not isinstance(eid, str) or not eid:
            self.error(ParseError("entity id must be a non-empty string", f"{path}.id"))
            return None
        animate = raw.get("animate")
        if not isinstance(animate, bool):
            self.error(ParseError("animate must be true or false", f"{path}.animate"))
            animate = True
        return Entity(
            id=eid,
            animate=animate,
            gender=self.enum(Gender, raw.get("gender"), f"{path}.gender", Gender.UNSPECIFIED),
            number=self.enum(Number, raw.get("number"), f"{path}.number", Number.UNSPECIFIED),
            person=self.enum(Person, raw.get("person"), f"{path}.person", Person.THIRD),
        )

    def mention(
        self, raw: Any, path: str, mention_id: str, position: int, registry: Mapping[str, Entity]
    ) -> Optional[Mention]:
        raw = self.obj(raw, path)
        if raw is None:
            return None
        self.keys(raw, MENTION_KEYS, path)
        n_errors = len(self.errors)
        form = self.enum(Form, raw.get("form"), f"{path}.form")
        gf = self.enum(GrammaticalFunction, raw.get("gf"), f"{path}.gf")
        entity = raw.get("entity")
        if entity is None:
            if form is not None and form not in PRONOMINAL_FORMS:
                self.error(ConsistencyError("only pronouns may be left unresolved", f"{path}.entity"))
            else:
                self.warn(f"{path}: unresolved pronoun")
        elif not isinstance(entity, str):
            self.error(ParseError("entity must be an id string", f"{path}.entity"))
        elif entity not in registry:
            self.error(UnknownEntityError(entity, f"{path}.entity"))
        possessor = raw.get("possessor")
        if possessor is not None:
            if not isinstance(possessor, str):
                self.error(ParseError("possessor must be an id string", f"{path}.possessor"))
            elif possessor not in registry:
                self.error(UnknownEntityError(possessor, f"{path}.possessor"))
        if (possessor is not None) != (form is Form.POSSESSIVE_NP) and form is not None:
            self.error(
                ConsistencyError("possessor is required for poss_np and only allowed there", path)
            )
        contraindexed = self.flag(raw, "contraindexed", path)
        if contraindexed and form is not Form.ZERO:
            self.error(ConsistencyError("only zero mentions can be contraindexed", path))
        gender = self.enum(Gender, raw["gender"], f"{path}.gender") if "gender" in raw else None
        number = self.enum(Number, raw["number"], f"{path}.number") if "number" in raw else None
        empathy = self.flag(raw, "empathy", path)
        set_ref = self.flag(raw, "set_ref", path)
        if len(self.errors) > n_errors:
            return None
        return Mention(
            id=mention_id,
            entity=entity,
            form=form,
            grammatical_function=gf,
            empathy=empathy,
            possessor=possessor,
            contraindexed=contraindexed,
            surface_position=position,
            gender=gender,
            number=number,
            set_ref=set_ref,
        )

    def document(self, doc: Any) -> Optional[Discourse]:
        doc = self.obj(doc, "")
        if doc is None:
            return None
        self.keys(doc, TOP_KEYS | OUTPUT_KEYS, "")
        registry: dict[str, Entity] = {}
        for i, raw in enumerate(self.items(doc, "entities", "")):
            path = f"entities[{i}]"
            entity = self.entity(raw, path)
            if entity is None:
                continue
            if entity.id in registry:
                self.error(DuplicateEntityError(f"duplicate entity id {entity.id!r}", f"{path}.id"))
                continue
            registry[entity.id] = entity

        segments = []
        for s, raw_seg in enumerate(self.items(doc, "segments", "")):
            spath = f"segments[{s}]"
            raw_seg = self.obj(raw_seg, spath)
            if raw_seg is None:
                continue
            self.keys(raw_seg, SEGMENT_KEYS, spath)
            sentences = []
            for t, raw_sent in enumerate(self.items(raw_seg, "sentences", spath)):
                tpath = f"{spath}.sentences[{t}]"
                raw_sent = self.obj(raw_sent, tpath)
                if raw_sent is None:
                    continue
                self.keys(raw_sent, SENTENCE_KEYS, tpath)
                clauses = []
                for c, raw_clause in enumerate(self.items(raw_sent, "clauses", tpath)):
                    cpath = f"{tpath}.clauses[{c}]"
                    raw_clause = self.obj(raw_clause, cpath)
                    if raw_clause is None:
                        continue
                    self.keys(raw_clause, CLAUSE_KEYS, cpath)
                    kind = self.enum(ClauseKind, raw_clause.get("kind"), f"{cpath}.kind")
                    if kind is ClauseKind.COMPLEMENT:
                        self.warn(f"{cpath}: complement clause analysed as a separate main unit")
                    mentions = []
                    for k, raw_m in enumerate(self.items(raw_clause, "mentions", cpath)):
                        m = self.mention(
                            raw_m, f"{cpath}.mentions[{k}]", f"m{s}.{t}.{c}.{k}", k, registry
                        )
                        if m is not None:
                            mentions.append(m)
                    if kind is not None:
                        clauses.append(Clause(kind, tuple(mentions)))
                sentence = RawSentence(tuple(clauses))
                try:
                    units = segment_units(sentence)
                except DegenerateSentenceError as exc:
                    self.error(DegenerateSentenceError(exc.message, tpath))
                else:
                    for u in units:
                        empathic = [m for m in u.mentions if m.empathy]
                        if len(empathic) > 1:
                            self.error(
                                ConsistencyError("more than one empathy mention in a unit", tpath)
                            )
                sentences.append(sentence)
            segments.append(tuple(sentences))
        if self.errors:
            return None
        return build_discourse(registry, segments)


def _load_json(document: Union[str, bytes, Mapping]) -> Any:
    if isinstance(document, Mapping):
        return document
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None


def validate(document: Union[str, bytes, Mapping], strict: bool = False) -> Diagnostics:
    """Collect every problem in a document instead of stopping at the first."""
    try:
        doc = _load_json(document)
    except ParseError as exc:
        return Diagnostics([exc], [])
    reader = _Reader(strict)
    reader.document(doc)
    return Diagnostics(reader.errors, reader.warnings)


def parse_corpus(document: Union[str, bytes, Mapping], strict: bool = False) -> Discourse:
    """Parse and validate one discourse; raises the first CorpusError found."""
    doc = _load_json(document)
    reader = _Reader(strict)
    discourse = reader.document(doc)
    if reader.errors:
        raise reader.errors[0]
    return discourse


def load_corpus(path: Union[str, Path], strict: bool = False) -> Discourse:
    return parse_corpus(Path(path).read_bytes(), strict=strict)


def _mention_doc(m: Mention) -> dict:
    out: dict[str, Any] = {
        "entity": m.entity,
        "form": m.form.value,
        "gf": m.grammatical_function.value,
    }
    if m.empathy:
        out["empathy"] = True
    if m.possessor is not None:
        out["possessor"] = m.possessor
    if m.contraindexed:
        out["contraindexed"] = True
    if m.gender is not None:
        out["gender"] = m.gender.value
    if m.number is not None:
        out["number"] = m.number.value
    if m.set_ref:
        out["set_ref"] = True
    return out


def serialize_discourse(discourse: Discourse) -> dict:
    """The annotation part of a document; parse_corpus inverts it."""
    return {
        "entities": [
            {
                "id": e.id,
                "animate": e.animate,
                "gender": e.gender.value,
                "number": e.number.value,
                "person": e.person.value,
            }
            for e in discourse.entities.values()
        ],
        "segments": [
            {
                "sentences": [
                    {
                        "clauses": [
                            {
                                "kind": c.kind.value,
                                "mentions": [
                                    _mention_doc(m)
                                    for m in sorted(c.mentions, key=lambda m: m.surface_position)
                                ],
                            }
                            for c in sentence.clauses
                        ]
                    }
                    for sentence in segment
                ]
            }
            for segment in discourse.segments
        ],
    }


def _cb_value(unit: CenteringUnit) -> Optional[str]:
    if unit.cb is not None:
        return unit.cb.id
    return "?" if unit.segment_initial else None


def serialize_analysis(result: AnalysisResult) -> dict:
    doc: dict[str, Any] = {"format": FORMAT_NAME, "version": FORMAT_VERSION}
    doc.update(serialize_discourse(result.discourse))
    doc["convention"] = result.convention.value
    doc["units"] = [
        {
            "id": u.id,
            "segment": u.segment,
            "sentence": u.sentence,
            "clauses": list(u.clauses),
            "cf": u.cf_ids(),
            "cb": _cb_value(u),
            "cp": u.cp.id if u.cp is not None else None,
            "transition": u.transition.value if u.transition is not None else None,
            "sequence": u.sequence_label.value if u.sequence_label is not None else None,
        }
        for u in result.units
    ]
    doc["records"] = [
        {
            "mention": r.mention_id,
            "unit": r.unit_id,
            "entity": r.entity,
            "form": r.form.value,
            "gf": r.grammatical_function.value,
            "tag": r.tag.value,
            "sequence": r.sequence.value,
        }
        for r in result.expression_records
    ]
    doc["rule1_violations"] = [
        {"unit": v.unit_id, "explanation": v.explanation} for v in result.rule1_violations
    ]
    doc["felicity"] = [
        {"unit": f.unit_id, "mention": f.mention_id, "kind": f.kind.value, "detail": f.detail}
        for f in result.felicity_findings
    ]
    return doc


def dumps(doc: Mapping) -> str:
    """Deterministic text rendering of a document."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def is_analysis(doc: Mapping) -> bool:
    return "records" in doc and "units" in doc


def load_analysis(document: Union[str, bytes, Mapping], strict: bool = False) -> AnalysisResult:
    """Rebuild an AnalysisResult from a serialized analysis document."""
    doc = _load_json(document)
    if not isinstance(doc, Mapping) or not is_analysis(doc):
        raise ParseError("not an analysis document (missing units/records)")
    discourse = parse_corpus(doc, strict=strict)
    reg = discourse.entities

    def ent(value: Optional[str]) -> Optional[Entity]:
        if value is None or value == "?":
            return None
        if value not in reg:
            raise UnknownEntityError(value, "units")
        return reg[value]

    try:
        by_id = {u["id"]: u for u in doc["units"]}
        records = tuple(
            ExpressionRecord(
                mention_id=r["mention"],
                unit_id=r["unit"],
                entity=r["entity"],
                form=Form(r["form"]),
                grammatical_function=GrammaticalFunction(r["gf"]),
                tag=ExpressionTag(r["tag"]),
                sequence=SequenceLabel(r["sequence"]),
            )
            for r in doc["records"]
        )
        tags: dict[str, list[tuple[str, str]]] = {}
        for r in records:
            tags.setdefault(r.unit_id, []).append((r.mention_id, r.tag.value))
        units = []
        for u in discourse.units:
            stored = by_id.get(u.id)
            if stored is None:
                raise ParseError(f"analysis has no entry for unit {u.id}", "units")
            units.append(
                replace(
                    u,
                    cf=tuple(ent(e) for e in stored["cf"]),
                    cp=ent(stored["cp"]),
                    cb=ent(stored["cb"]),
                    transition=Transition(stored["transition"]) if stored["transition"] else None,
                    sequence_label=SequenceLabel(stored["sequence"]) if stored["sequence"] else None,
                    expression_tags=tuple(tags.get(u.id, ())),
                )
            )
        violations = tuple(
            Rule1Violation(v["unit"], v["explanation"]) for v in doc.get("rule1_violations", [])
        )
        findings = tuple(
            FelicityFinding(f["unit"], FelicityKind(f["kind"]), f["detail"], f["mention"])
            for f in doc.get("felicity", [])
        )
        convention = Convention(doc.get("convention", Convention.CONTINUE.value))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CorpusError):
            raise
        raise ParseError(f"malformed analysis section: {exc}") from None
    return AnalysisResult(
        discourse=discourse,
        units=tuple(units),
        expression_records=records,
        rule1_violations=violations,
        felicity_findings=findings,
        convention=convention,
    )


def apply_assignments(discourse: Discourse, assignments: Mapping[str, Optional[str]]) -> Discourse:
    """Fill resolved pronoun referents back into the source annotation."""

    def fill(m: Mention) -> Mention:
        if m.entity is None and assignments.get(m.id):
            return replace(m, entity=assignments[m.id])
        return m

    segments = tuple(
        tuple(
            RawSentence(tuple(Clause(c.kind, tuple(fill(m) for m in c.mentions)) for c in s.clauses))
            for s in segment
        )
        for segment in discourse.segments
    )
    return build_discourse(discourse.entities, segments)
