"""JSON machine files.

One schema for all three models, every number a "num/den" string:

    {"model": "pfa" | "linear" | "dpda",
     "alphabet": [...],
     "states": [{"name": ..., "role": ..., "accepting": ...}, ...],
     ...}

pfa/linear carry "initial" (name -> value) and "transitions"
(symbol -> row-major matrix), or "transitions_bit0"/"transitions_bit1";
linear adds "scale_bound". dpda carries "initial", "stack_alphabet" (bottom
marker first) and transitions keyed "state,symbol,stacktop[,bit]" with
values [target, push] (push as a list of stack symbols, or a string when
they are single characters; the empty symbol field is an epsilon move).
"""

import json

from .dpda import DpdaSpec
from .errors import MachineFormatError, SpecValidationError
from .machines import LinearFaSpec, PfaSpec, Role, State
from .rational import rat, rat_str


def _fail(msg):
    raise MachineFormatError(msg)


def _rat(value, where):
    if isinstance(value, bool) or isinstance(value, float):
        _fail(f"{where}: numbers must be 'num/den' strings or ints, got {value!r}")
    try:
        return rat(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        _fail(f"{where}: bad rational {value!r} ({exc})")


def _states(raw):
    if not isinstance(raw, list):
        _fail("states must be a list")
    out = []
    for entry in raw:
        try:
            role = Role(entry.get("role", "normal"))
        except (ValueError, AttributeError):
            _fail(f"bad state entry {entry!r}")
        out.append(State(entry["name"], role, bool(entry.get("accepting", False))))
    return tuple(out)


def _matrix(raw, where):
    if not isinstance(raw, list):
        _fail(f"{where}: matrix must be a list of rows")
    return tuple(tuple(_rat(x, where) for x in row) for row in raw)


def _tables(raw, where):
    if not isinstance(raw, dict):
        _fail(f"{where}: transitions must map symbols to matrices")
    return {sym: _matrix(m, f"{where}[{sym!r}]") for sym, m in raw.items()}


def _initial_vector(raw, states, where="initial"):
    if not isinstance(raw, dict):
        _fail(f"{where} must map state names to values")
    names = {s.name for s in states}
    for name in raw:
        if name not in names:
            _fail(f"{where}: unknown state {name!r}")
    return tuple(_rat(raw.get(s.name, 0), where) for s in states)


def _load_pfa(doc):
    states = _states(doc.get("states"))
    kwargs = {}
    for key in ("transitions", "transitions_bit0", "transitions_bit1"):
        if key in doc:
            kwargs[key] = _tables(doc[key], key)
    return PfaSpec(alphabet=tuple(doc.get("alphabet", ())), states=states,
                   initial=_initial_vector(doc.get("initial"), states), **kwargs)


def _load_linear(doc):
    states = _states(doc.get("states"))
    kwargs = {}
    for key in ("transitions", "transitions_bit0", "transitions_bit1"):
        if key in doc:
            kwargs[key] = _tables(doc[key], key)
    if "scale_bound" not in doc:
        _fail("linear machines need a scale_bound")
    return LinearFaSpec(alphabet=tuple(doc.get("alphabet", ())), states=states,
                        initial=_initial_vector(doc.get("initial"), states),
                        scale_bound=_rat(doc["scale_bound"], "scale_bound"),
                        **kwargs)


def _load_dpda(doc):
    raw = doc.get("transitions")
    if not isinstance(raw, dict):
        _fail("transitions must map 'state,symbol,stacktop[,bit]' keys")
    trans = {}
    for key, value in raw.items():
        parts = key.split(",")
        if len(parts) == 4:
            parts[3] = int(parts[3]) if parts[3] in ("0", "1") else _fail(
                f"bad bit in transition key {key!r}")
        elif len(parts) != 3:
            _fail(f"transition key {key!r} must have 3 or 4 fields")
        try:
            target, push = value
        except (TypeError, ValueError):
            _fail(f"transition value for {key!r} must be [target, push]")
        trans[tuple(parts)] = (target, tuple(push))
    return DpdaSpec(input_alphabet=tuple(doc.get("alphabet", ())),
                    stack_alphabet=tuple(doc.get("stack_alphabet", ())),
                    states=_states(doc.get("states")),
                    initial_state=doc.get("initial"),
                    transitions=trans)


def machine_from_dict(doc) -> object:
    if not isinstance(doc, dict):
        _fail("machine file must hold a JSON object")
    model = doc.get("model")
    loaders = {"pfa": _load_pfa, "linear": _load_linear, "dpda": _load_dpda}
    if model not in loaders:
        _fail(f"unknown model {model!r}; expected pfa, linear or dpda")
    try:
        return loaders[model](doc)
    except KeyError as exc:
        _fail(f"missing field {exc}")


def load_machine(path) -> object:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            _fail(f"{path}: not valid JSON ({exc})")
    return machine_from_dict(doc)


def _dump_states(states):
    return [{"name": s.name, "role": s.role.value, "accepting": s.accepting}
            for s in states]


def _dump_tables(tables):
    return {sym: [[rat_str(x) for x in row] for row in m]
            for sym, m in tables.items()}


def machine_to_dict(spec) -> dict:
    if isinstance(spec, (PfaSpec, LinearFaSpec)):
        doc = {"model": "linear" if isinstance(spec, LinearFaSpec) else "pfa",
               "alphabet": list(spec.alphabet),
               "states": _dump_states(spec.states),
               "initial": {s.name: rat_str(x)
                           for s, x in zip(spec.states, spec.initial) if x}}
        if isinstance(spec, LinearFaSpec):
            doc["scale_bound"] = rat_str(spec.scale_bound)
        if spec.ctc_indexed:
            doc["transitions_bit0"] = _dump_tables(spec.transitions_bit0)
            doc["transitions_bit1"] = _dump_tables(spec.transitions_bit1)
        else:
            doc["transitions"] = _dump_tables(spec.transitions)
        return doc
    if isinstance(spec, DpdaSpec):
        trans = {}
        for (state, sym, top, bit), (target, push) in sorted(
                spec.transitions.items(),
                key=lambda kv: (kv[0][0], kv[0][1] or "", kv[0][2], kv[0][3] or 0)):
            fields = [state, sym if sym is not None else "", top]
            if bit is not None:
                fields.append(str(bit))
            push_out = "".join(push) if all(len(x) == 1 for x in push) \
                else list(push)
            trans[",".join(fields)] = [target, push_out]
        return {"model": "dpda", "alphabet": list(spec.input_alphabet),
                "stack_alphabet": list(spec.stack_alphabet),
                "states": _dump_states(spec.states),
                "initial": spec.initial_state, "transitions": trans}
    raise SpecValidationError(f"cannot serialize {type(spec).__name__}")


def dump_machine(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(machine_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_matrix_literal(text):
    """Row-major matrix literal for the CLI; tolerant of single quotes."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        try:
            raw = json.loads(text.replace("'", '"'))
        except json.JSONDecodeError as exc:
            _fail(f"bad matrix literal ({exc})")
    return _matrix(raw, "matrix literal")
