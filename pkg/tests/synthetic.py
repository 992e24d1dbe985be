"""A corpus whose analysis realizes exactly the target subject counts.

Every segment is a small annotated discourse built so that one subject of
a chosen form ends up with a chosen transition tag (and sequence label for
continues).  Scaffolding units use deictic subjects, inanimate subjects or
first-mention full NPs, none of which are counted.
"""

import itertools

# form -> [(tag, sequence, count)]
TABLE2_PLAN = {
    "zero": [("continue", "cont_cont", 40), ("continue", "shift_cont", 11), ("continue", "ret_cont", 5),
             ("retain", None, 4), ("shift", None, 6), ("cent_est", None, 12), ("other", None, 2)],
    "strong": [("continue", "cont_cont", 5), ("continue", "shift_cont", 2), ("continue", "ret_cont", 6),
               ("retain", None, 4), ("shift", None, 5), ("cent_est", None, 10), ("other", None, 1)],
    "np": [("continue", "cont_cont", 14), ("continue", "ret_cont", 3), ("retain", None, 11),
           ("shift", None, 7), ("cent_est", None, 44), ("other", None, 2)],
    "poss": [("continue", "cont_cont", 9), ("continue", "shift_cont", 2), ("retain", None, 5),
             ("shift", None, 1), ("cent_est", None, 8)],
}

TABLE2 = {
    "zero": (56, 4, 6, 12, 2),
    "strong": (13, 4, 5, 10, 1),
    "np": (17, 11, 7, 44, 2),
    "poss": (11, 5, 1, 8, 0),
}
TABLE4 = {"zero": (51, 5), "strong": (7, 6)}

WIRE_FORM = {"zero": "zero", "strong": "strong", "np": "np", "poss": "poss_np"}


class _Builder:
    def __init__(self):
        self.entities = [{"id": "io", "animate": True, "gender": "u", "number": "sg", "person": 1}]
        self.counter = itertools.count()

    def new(self, animate=True, number="sg"):
        eid = f"e{next(self.counter)}"
        self.entities.append(
            {"id": eid, "animate": animate, "gender": "u", "number": number, "person": 3}
        )
        return eid

    def target(self, form, referent, set_ref=False):
        m = {"entity": referent, "form": WIRE_FORM[form], "gf": "subj"}
        if form == "poss":
            m["possessor"] = self.new()
        if set_ref:
            m["set_ref"] = True
        return m


def _m(entity, form, gf):
    return {"entity": entity, "form": form, "gf": gf}


def _sent(*mentions):
    return {"clauses": [{"kind": "main", "mentions": list(mentions)}]}


def _segment(b, form, tag, seq):
    me = _m("io", "deictic", "subj")
    a = b.new()
    if tag == "continue" and seq == "cont_cont":
        return [_sent(_m(a, "np", "subj")), _sent(me, _m(a, "clitic", "obj")), _sent(b.target(form, a))]
    if tag == "continue" and seq == "ret_cont":
        thing = b.new(animate=False)
        return [
            _sent(_m(a, "np", "subj")),
            _sent(me, _m(a, "clitic", "obj")),
            _sent(_m(thing, "np", "subj"), _m(a, "clitic", "obj")),
            _sent(b.target(form, a)),
        ]
    if tag == "cent_est":
        thing = b.new(animate=False)
        return [_sent(_m(a, "np", "subj")), _sent(me, _m(thing, "np", "obj")), _sent(b.target(form, a))]
    if tag == "other":
        group = b.new(number="pl")
        return [_sent(_m(a, "np", "subj")), _sent(b.target(form, group, set_ref=True))]
    # two-referent openings: Cb = a, Cf = [a > c]
    c = b.new()
    opening = [
        _sent(_m(a, "np", "subj"), _m(c, "np", "obj")),
        _sent(me, _m(a, "clitic", "obj2"), _m(c, "clitic", "obj")),
    ]
    if tag == "continue" and seq == "shift_cont":
        return opening + [_sent(me, _m(c, "clitic", "obj")), _sent(b.target(form, c))]
    if tag == "retain":
        return opening + [_sent(b.target(form, c), _m(a, "clitic", "obj"))]
    if tag == "shift":
        return opening + [_sent(b.target(form, c))]
    raise ValueError((form, tag, seq))


def target_count_corpus():
    """Interchange document realizing the target distribution and sequence tables."""
    b = _Builder()
    segments = []
    for form, plan in TABLE2_PLAN.items():
        for tag, seq, count in plan:
            for _ in range(count):
                segments.append({"sentences": _segment(b, form, tag, seq)})
    return {"name": "synthetic corpus with the target subject counts",
            "entities": b.entities, "segments": segments}
