"""Small builders for hand-made units and discourses."""

from centering.model import (
    CenteringUnit,
    Discourse,
    Entity,
    Form,
    Gender,
    GrammaticalFunction,
    Mention,
    Number,
)

GF = {g.value: g for g in GrammaticalFunction}


def ent(eid, animate=True, gender="u", number="sg"):
    return Entity(eid, animate, Gender(gender), Number(number))


def men(entity, form="np", gf="subj", pos=0, mid=None, **kw):
    return Mention(
        id=mid or f"{entity}-{form}-{gf}-{pos}",
        entity=entity,
        form=Form(form),
        grammatical_function=GF[gf],
        surface_position=pos,
        **kw,
    )


def unit(uid, *mentions, initial=False):
    ms = tuple(
        m if m.surface_position or i == 0 else m.__class__(**{**m.__dict__, "surface_position": i})
        for i, m in enumerate(mentions)
    )
    return CenteringUnit(id=uid, mentions=ms, segment_initial=initial)


def discourse(entities, *units):
    units = list(units)
    if units and not any(u.segment_initial for u in units[:1]):
        first = units[0]
        units[0] = first.__class__(**{**first.__dict__, "segment_initial": True})
    return Discourse(entities={e.id: e for e in entities}, units=tuple(units))
