"""File formats: system models, supervisor tables, and reports.

One JSON-based document format, serialized bit-exactly (sorted keys,
two-space indent, trailing newline) so fixtures diff cleanly.  Parsing is
strict: unknown fields are rejected and errors carry the JSON path of the
offending element.  State ids in documents are strings or integers.
"""

from __future__ import annotations

import json

from .attack import Observer
from .fsa import Automaton, state_key
from .model import EventAttributes, SystemModel, induced_subautomaton
from .synth import Supervisor
from .verify import Witness


class DocumentError(ValueError):
    """Malformed document; the message names the offending location."""


def dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _expect_keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        raise DocumentError(f"{path}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise DocumentError(f"{path}: unknown fields {sorted(unknown)!r}")
    missing = set(required) - set(obj)
    if missing:
        raise DocumentError(f"{path}: missing fields {sorted(missing)!r}")


def _state_id(value, path):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(f"{path}: state ids must be strings or integers")
    return value


def _event_name(value, path):
    if not isinstance(value, str) or not value:
        raise DocumentError(f"{path}: event names must be nonempty strings")
    return value


def _bool(obj, key, path, default):
    value = obj.get(key, default)
    if not isinstance(value, bool):
        raise DocumentError(f"{path}.{key}: expected a boolean")
    return value


def _state_list(value, path):
    if not isinstance(value, list):
        raise DocumentError(f"{path}: expected a list")
    return [_state_id(s, f"{path}[{i}]") for i, s in enumerate(value)]


def _parse_transitions(value, path):
    if not isinstance(value, list):
        raise DocumentError(f"{path}: expected a list")
    out = []
    for i, item in enumerate(value):
        if not isinstance(item, list) or len(item) != 3:
            raise DocumentError(f"{path}[{i}]: expected [source, event, target]")
        s = _state_id(item[0], f"{path}[{i}][0]")
        e = _event_name(item[1], f"{path}[{i}][1]")
        t = _state_id(item[2], f"{path}[{i}][2]")
        out.append((s, e, t))
    return out


def _parse_automaton(obj, path, alphabet=None) -> Automaton:
    _expect_keys(obj, path, ("states", "initial", "marked", "transitions"))
    states = _state_list(obj["states"], f"{path}.states")
    marked = _state_list(obj["marked"], f"{path}.marked")
    initial = _state_id(obj["initial"], f"{path}.initial")
    transitions = _parse_transitions(obj["transitions"], f"{path}.transitions")
    try:
        return Automaton.make(
            initial=initial,
            transitions=transitions,
            marked=marked,
            states=states,
            alphabet=alphabet,
        )
    except ValueError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def parse_model_document(doc) -> SystemModel:
    _expect_keys(doc, "$", ("events", "plant", "spec"), optional=("attacks",))
    if not isinstance(doc["events"], list):
        raise DocumentError("$.events: expected a list")
    attributes = {}
    for i, entry in enumerate(doc["events"]):
        path = f"$.events[{i}]"
        _expect_keys(
            entry,
            path,
            ("name",),
            optional=("controllable", "observable", "attackable_control", "attackable_observation"),
        )
        name = _event_name(entry["name"], f"{path}.name")
        if name in attributes:
            raise DocumentError(f"{path}: duplicate event {name!r}")
        try:
            attributes[name] = EventAttributes(
                controllable=_bool(entry, "controllable", path, True),
                observable=_bool(entry, "observable", path, True),
                attackable_control=_bool(entry, "attackable_control", path, False),
                attackable_observation=_bool(entry, "attackable_observation", path, False),
            )
        except ValueError as exc:
            raise DocumentError(f"{path}: {exc}") from exc
    plant = _parse_automaton(doc["plant"], "$.plant", alphabet=frozenset(attributes))

    _expect_keys(doc["spec"], "$.spec", ("states", "marked"))
    spec_states = _state_list(doc["spec"]["states"], "$.spec.states")
    spec_marked = _state_list(doc["spec"]["marked"], "$.spec.marked")
    try:
        spec = induced_subautomaton(plant, spec_states, spec_marked)
    except ValueError as exc:
        raise DocumentError(f"$.spec: {exc}") from exc

    attacks: dict = {}
    for i, entry in enumerate(doc.get("attacks", [])):
        path = f"$.attacks[{i}]"
        _expect_keys(entry, path, ("on", "language"))
        on = entry["on"]
        language = _parse_automaton(entry["language"], f"{path}.language")
        if isinstance(on, dict) and set(on) == {"event"}:
            event = _event_name(on["event"], f"{path}.on.event")
            targets = [tr for tr in plant.transitions if tr[1] == event]
            if not targets:
                raise DocumentError(f"{path}.on: no plant transition carries {event!r}")
        elif isinstance(on, dict) and set(on) == {"source", "event", "target"}:
            tr = (
                _state_id(on["source"], f"{path}.on.source"),
                _event_name(on["event"], f"{path}.on.event"),
                _state_id(on["target"], f"{path}.on.target"),
            )
            if tr not in plant.transitions:
                raise DocumentError(f"{path}.on: not a plant transition")
            targets = [tr]
        else:
            raise DocumentError(f"{path}.on: expected {{event}} or {{source, event, target}}")
        for tr in targets:
            if tr in attacks:
                raise DocumentError(f"{path}.on: transition attacked twice")
            attacks[tr] = language

    return SystemModel(plant=plant, spec=spec, attributes=attributes, attacks=attacks)


def load_model(path) -> SystemModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: not valid JSON ({exc})") from exc
    return parse_model_document(doc)


def _document_state(s, path="serialization"):
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"{path}: state id {s!r} is not representable (string or integer)")
    return s


def _automaton_document(a: Automaton) -> dict:
    return {
        "states": [_document_state(s) for s in sorted(a.states, key=state_key)],
        "initial": _document_state(a.initial),
        "marked": [_document_state(s) for s in sorted(a.marked, key=state_key)],
        "transitions": [
            [_document_state(s), e, _document_state(t)]
            for s, e, t in sorted(a.transitions, key=state_key)
        ],
    }


def model_to_document(m: SystemModel) -> dict:
    events = [
        {
            "name": e,
            "controllable": attr.controllable,
            "observable": attr.observable,
            "attackable_control": attr.attackable_control,
            "attackable_observation": attr.attackable_observation,
        }
        for e, attr in sorted(m.attributes.items())
    ]
    # Group an event's attacks back into one per-event entry when they cover
    # every transition of the event with one shared language.
    by_event: dict = {}
    for tr, language in m.attacks.items():
        by_event.setdefault(tr[1], []).append((tr, language))
    entries = []
    for event, items in by_event.items():
        all_of_event = [tr for tr in m.plant.transitions if tr[1] == event]
        same = len({lang for _, lang in items}) == 1
        if len(items) == len(all_of_event) and same:
            entries.append(((event, 0, ()), {"on": {"event": event}, "language": _automaton_document(items[0][1])}))
        else:
            for tr, language in items:
                entries.append(
                    (
                        (event, 1, state_key(tr)),
                        {
                            "on": {"source": _document_state(tr[0]), "event": event, "target": _document_state(tr[2])},
                            "language": _automaton_document(language),
                        },
                    )
                )
    entries.sort(key=lambda kv: kv[0])
    return {
        "events": events,
        "plant": _automaton_document(m.plant),
        "spec": {
            "states": [_document_state(s) for s in sorted(m.spec.states, key=state_key)],
            "marked": [_document_state(s) for s in sorted(m.spec.marked, key=state_key)],
        },
        "attacks": [doc for _, doc in entries],
    }


def _member_document(member):
    if isinstance(member, tuple) and len(member) == 3 and member[0] == "att":
        return {"copy": member[1], "state": _document_state(member[2])}
    return _document_state(member)


def _parse_member(value, path):
    if isinstance(value, dict):
        _expect_keys(value, path, ("copy", "state"))
        if not isinstance(value["copy"], int) or isinstance(value["copy"], bool):
            raise DocumentError(f"{path}.copy: expected an integer attack index")
        return ("att", value["copy"], _state_id(value["state"], f"{path}.state"))
    return _state_id(value, path)


def supervisor_to_document(sup: Supervisor, warnings=()) -> dict:
    obs = sup.observer
    states = []
    for y in sorted(sup.observer.automaton.states, key=state_key):
        states.append(
            {
                "members": [_member_document(x) for x in sorted(y, key=state_key)],
                "estimate": [
                    _document_state(x)
                    for x in sorted(y & obs.origin_states, key=state_key)
                ],
                "marked": y in obs.automaton.marked,
                "enabled": sorted(sup.enabled(y)),
            }
        )
    doc = {"states": states}
    if warnings:
        doc["warnings"] = list(warnings)
    return doc


def parse_supervisor_document(doc, obs: Observer, model: SystemModel) -> Supervisor:
    _expect_keys(doc, "$", ("states",), optional=("warnings",))
    if not isinstance(doc["states"], list):
        raise DocumentError("$.states: expected a list")
    table = {}
    for i, entry in enumerate(doc["states"]):
        path = f"$.states[{i}]"
        _expect_keys(entry, path, ("members", "enabled"), optional=("estimate", "marked"))
        members = frozenset(
            _parse_member(v, f"{path}.members[{j}]") for j, v in enumerate(entry["members"])
        )
        if members not in obs.automaton.states:
            raise DocumentError(f"{path}: not a state of this model's observer")
        enabled = set()
        for j, e in enumerate(entry["enabled"]):
            if e not in model.events:
                raise DocumentError(f"{path}.enabled[{j}]: unknown event {e!r}")
            enabled.add(e)
        table[members] = frozenset(enabled)
    missing = set(obs.automaton.states) - set(table)
    if missing:
        raise DocumentError(f"$.states: supervisor misses {len(missing)} observer state(s)")
    return Supervisor(table=table, observer=obs, model=model)


def witness_document(w: Witness) -> dict:
    return {
        "kind": w.kind,
        "event": w.event,
        "observer_state": None
        if w.observer_state is None
        else [_member_document(x) for x in sorted(w.observer_state, key=state_key)],
        "plant_states": None
        if w.plant_states is None
        else [_document_state(x) for x in w.plant_states],
        "detail": w.detail,
    }
