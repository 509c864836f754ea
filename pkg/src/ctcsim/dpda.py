"""Deterministic pushdown automata, optionally indexed by the received bit.

A transition pops the stack top and pushes a replacement string (last symbol
on top). The bottom marker is never popped: moves on it must push it back
first. The reserved end-marker ``$`` is processed as an ordinary final
symbol; epsilon moves may run at any point before and after it, and the run
halts when no move applies. Acceptance is by final state after the entire
input including the end-marker was consumed. Runs that exhaust the input but
loop forever are reported as nonhalting via an epsilon-cycle detector (a
revisited (state, stack-top) at no lower height with the input pointer
parked) plus a step budget of 10*(|w|+1)*|states|*|stack| as a backstop;
runs stuck mid-input never reach a send state and are reported as nonhalting
with reason "stuck".

Bit-indexed machines must move into terminal send-role states exactly on the
end-marker; the branching-2 compiler produces such machines from
nondeterministic PDAs by letting the received bit name the branch to follow.

The configuration stepper is the package's hot loop. A compiled extension
(ctcsim._stepper, Cython) is used when available; ctcsim._stepper_py is the
pure-Python twin, forced by CTCSIM_PURE_PYTHON=1.
"""

import os
from array import array
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

from .errors import AlphabetError, CompileError, SpecValidationError
from .machines import Role, State

if os.environ.get("CTCSIM_PURE_PYTHON") == "1":
    from . import _stepper_py as stepper
    STEPPER_BACKEND = "python"
else:
    try:
        from . import _stepper as stepper
        STEPPER_BACKEND = "cython"
    except ImportError:
        from . import _stepper_py as stepper
        STEPPER_BACKEND = "python"

END_MARKER = "$"
EPSILON = None

HALTED, NONHALT_CYCLE, NONHALT_BUDGET, STUCK = 0, 1, 2, 3
_NONHALT_REASON = {NONHALT_CYCLE: "cycle", NONHALT_BUDGET: "budget",
                   STUCK: "stuck"}


@dataclass(frozen=True)
class DpdaRun:
    """Outcome of one run; state/accepting are None when nonhalting."""

    halted: bool
    state: Optional[str]
    accepting: Optional[bool]
    nonhalt_reason: Optional[str]
    steps_used: int


def _normalize_key(key):
    if len(key) == 3:
        state, sym, top = key
        bit = None
    elif len(key) == 4:
        state, sym, top, bit = key
    else:
        raise SpecValidationError(f"transition key {key!r} must have 3 or 4 parts")
    if sym == "":
        sym = EPSILON
    return (state, sym, top, bit)


@dataclass(frozen=True)
class DpdaSpec:
    input_alphabet: tuple
    stack_alphabet: tuple  # bottom marker first
    states: tuple
    initial_state: str
    transitions: dict  # (state, symbol|None, stacktop[, bit]) -> (state, push)

    def __post_init__(self):
        names = {s.name for s in self.states}
        if len(names) != len(self.states):
            raise SpecValidationError("state names must be unique")
        if self.initial_state not in names:
            raise SpecValidationError("unknown initial state")
        if END_MARKER in self.input_alphabet:
            raise SpecValidationError(f"{END_MARKER!r} is reserved")
        if len(set(self.stack_alphabet)) != len(self.stack_alphabet) \
                or not self.stack_alphabet:
            raise SpecValidationError("stack alphabet must be nonempty and unique")
        bottom = self.stack_alphabet[0]
        norm = {}
        bits_seen = set()
        for key, mv in self.transitions.items():
            state, sym, top, bit = _normalize_key(key)
            if state not in names or (sym not in (EPSILON, END_MARKER)
                                      and sym not in self.input_alphabet):
                raise SpecValidationError(f"bad transition key {key!r}")
            if top not in self.stack_alphabet or bit not in (None, 0, 1):
                raise SpecValidationError(f"bad transition key {key!r}")
            target, push = mv
            push = tuple(push)
            if target not in names or any(x not in self.stack_alphabet for x in push):
                raise SpecValidationError(f"bad transition value {mv!r}")
            if top == bottom:
                if not push or push[0] != bottom or bottom in push[1:]:
                    raise SpecValidationError(
                        f"move {key!r} must keep the bottom marker at the bottom")
            elif bottom in push:
                raise SpecValidationError(
                    f"move {key!r} pushes the bottom marker above the bottom")
            norm[(state, sym, top, bit)] = (target, push)
            bits_seen.add(bit)
        if None in bits_seen and len(bits_seen) > 1:
            raise SpecValidationError("mix of bit-indexed and plain transitions")
        object.__setattr__(self, "transitions", norm)
        object.__setattr__(self, "ctc_indexed", bits_seen != {None} and bool(bits_seen))
        for (state, sym, top, bit) in norm:
            if sym is not EPSILON and (state, EPSILON, top, bit) in norm:
                raise SpecValidationError(
                    f"determinism violation at ({state!r}, top {top!r}): both an "
                    "epsilon move and a symbol move are defined")
        if self.ctc_indexed:
            self._check_send_discipline(norm)
        elif any(s.role is not Role.NORMAL for s in self.states):
            raise SpecValidationError("plain DPDA states must have normal roles")

    def _check_send_discipline(self, norm):
        send = {s.name for s in self.states if s.role in (Role.SEND0, Role.SEND1)}
        if not send:
            raise SpecValidationError("bit-indexed DPDA has no send states")
        for (state, sym, top, bit), (target, push) in norm.items():
            if state in send:
                raise SpecValidationError(
                    f"send state {state!r} must be terminal")
            if sym == END_MARKER and target not in send:
                raise SpecValidationError(
                    f"end-marker move from {state!r} must enter a send state")
            if sym != END_MARKER and target in send:
                raise SpecValidationError(
                    f"send state {target!r} entered before the end-marker")

    @cached_property
    def _by_name(self):
        return {s.name: s for s in self.states}

    @cached_property
    def _encoded(self):
        """Flat int tables for the stepper; see _stepper_py for the layout."""
        state_ix = {s.name: i for i, s in enumerate(self.states)}
        sym_ix = {sym: i for i, sym in enumerate(self.input_alphabet)}
        sym_ix[END_MARKER] = len(self.input_alphabet)
        stack_ix = {x: i for i, x in enumerate(self.stack_alphabet)}
        n_states, n_syms = len(self.states), len(sym_ix)
        n_stack = len(self.stack_alphabet)
        n_bits = 2 if self.ctc_indexed else 1
        eps = array("i", [-1]) * (n_states * n_stack * n_bits)
        sym_tab = array("i", [-1]) * (n_states * n_syms * n_stack * n_bits)
        target, push_off, push_len, pool = (array("i"), array("i"),
                                            array("i"), array("i"))
        max_push = 1
        for (state, sym, top, bit), (tgt, push) in sorted(
                self.transitions.items(),
                key=lambda kv: (kv[0][0], kv[0][1] or "", kv[0][2], kv[0][3] or 0)):
            mid = len(target)
            target.append(state_ix[tgt])
            push_off.append(len(pool))
            push_len.append(len(push))
            pool.extend(stack_ix[x] for x in push)
            max_push = max(max_push, len(push))
            bits = (0, 1) if bit is None and self.ctc_indexed else \
                   ((0,) if bit is None else (bit,))
            for b in bits:
                q, t = state_ix[state], stack_ix[top]
                if sym is EPSILON:
                    eps[(q * n_stack + t) * n_bits + b] = mid
                else:
                    a = sym_ix[sym]
                    sym_tab[((q * n_syms + a) * n_stack + t) * n_bits + b] = mid
        return (n_states, n_syms, n_stack, n_bits, eps, sym_tab,
                target, push_off, push_len, pool,
                state_ix[self.initial_state], max_push)

    def encode_word(self, word) -> array:
        sym_ix = {sym: i for i, sym in enumerate(self.input_alphabet)}
        out = array("i")
        for sym in word:
            if sym not in sym_ix:
                raise AlphabetError(f"symbol {sym!r} is not in the machine alphabet")
            out.append(sym_ix[sym])
        out.append(len(self.input_alphabet))  # end-marker code
        return out

    def with_accepting(self, names) -> "DpdaSpec":
        states = tuple(State(s.name, s.role, s.name in names) for s in self.states)
        return replace(self, states=states)


def default_budget(spec: DpdaSpec, word_len: int) -> int:
    return 10 * (word_len + 1) * len(spec.states) * len(spec.stack_alphabet)


def _bit_arg(spec, bit):
    if spec.ctc_indexed:
        if bit not in (0, 1):
            raise SpecValidationError("this machine needs a bit value 0 or 1")
        return bit
    if bit is not None:
        raise SpecValidationError("bit value supplied for a non-ctc machine")
    return 0


def _zeros(n: int) -> array:
    return array("i", bytes(array("i").itemsize * n))


def run_dpda(spec: DpdaSpec, word: Sequence[str], bit: Optional[int] = None,
             budget: Optional[int] = None) -> DpdaRun:
    """Run one word (end-marker appended internally)."""
    b = _bit_arg(spec, bit)
    codes = spec.encode_word(word)
    offs = array("i", [0, len(codes)])
    out_status = _zeros(1)
    out_state = _zeros(1)
    out_steps = _zeros(1)
    stepper.run_batch(spec._encoded, codes, offs, b,
                      0 if budget is None else budget, 10,
                      out_status, out_state, out_steps)
    status = out_status[0]
    if status == HALTED:
        st = spec.states[out_state[0]]
        return DpdaRun(True, st.name, st.accepting, None, out_steps[0])
    return DpdaRun(False, None, None, _NONHALT_REASON[status], out_steps[0])


def run_dpda_batch(spec: DpdaSpec, flat: array, offsets: array,
                   bit: Optional[int] = None):
    """Run many encoded words at once; returns (status, final-state) arrays."""
    b = _bit_arg(spec, bit)
    n = len(offsets) - 1
    out_status = _zeros(n)
    out_state = _zeros(n)
    out_steps = _zeros(n)
    stepper.run_batch(spec._encoded, flat, offsets, b, 0, 10,
                      out_status, out_state, out_steps)
    return out_status, out_state


def dpda_accepts(spec: DpdaSpec, word, bit=None) -> bool:
    run = run_dpda(spec, word, bit)
    return bool(run.halted and run.accepting)


# --- nondeterministic PDAs and the bit-selection compiler ---

@dataclass(frozen=True)
class NpdaSpec:
    """PDA whose transitions map to an ordered tuple of successors.

    The successor order names the branches of a binary choice. branching
    must equal the largest per-configuration successor count (epsilon and
    next-symbol moves combined).
    """

    input_alphabet: tuple
    stack_alphabet: tuple
    states: tuple
    initial_state: str
    transitions: dict  # (state, symbol|None, stacktop) -> ((state, push), ...)
    branching: int

    def __post_init__(self):
        norm = {}
        for key, succ in self.transitions.items():
            state, sym, top, bit = _normalize_key(key)
            if bit is not None:
                raise SpecValidationError("NPDAs are not bit-indexed")
            norm[(state, sym, top)] = tuple((t, tuple(p)) for t, p in succ)
        object.__setattr__(self, "transitions", norm)
        if self.branching != self._max_successors():
            raise SpecValidationError(
                f"declared branching {self.branching} != computed "
                f"{self._max_successors()}")

    def _max_successors(self) -> int:
        worst = 1
        for state in (s.name for s in self.states):
            for top in self.stack_alphabet:
                eps = len(self.transitions.get((state, EPSILON, top), ()))
                per_sym = [len(self.transitions.get((state, sym, top), ()))
                           for sym in self.input_alphabet + (END_MARKER,)]
                worst = max(worst, eps + max(per_sym, default=0))
        return worst

    def successors(self, state, sym, top):
        return self.transitions.get((state, sym, top), ())


_T_ACC = {0: "acc>0", 1: "acc>1"}   # accept, send the current branch name
_T_REJ = {0: "rej>0", 1: "rej>1"}   # reject, send the other branch name
_OVERFLOW = "overflow"


def npda_branching2_to_ctc(n: NpdaSpec) -> DpdaSpec:
    """Compile a branching-2 PDA to a bit-indexed deterministic PDA.

    The received bit names the branch taken at the first binary choice; a
    path that would branch again is rewritten to scan to the end and reject.
    On the end-marker the machine enters a send state: the current branch
    name if accepting, the other one if rejecting (also when the PDA has no
    end-marker move, i.e. the path dies). A choice cell must consist of two
    epsilon moves or two moves on one input symbol; cells mixing the two are
    not resolvable by a deterministic real-time machine and are rejected.
    """
    by_name = {s.name: s for s in n.states}
    for (state, sym, top), succ in n.transitions.items():
        if len(succ) > 2:
            raise CompileError(f"branching above 2 at ({state!r}, {sym!r}, {top!r})")
        if sym is not EPSILON and len(succ) > 1 \
                and n.successors(state, EPSILON, top):
            raise CompileError(
                f"cell ({state!r}, top {top!r}) mixes epsilon and symbol moves")
        if sym is EPSILON and len(succ) == 2:
            for other_sym in n.input_alphabet + (END_MARKER,):
                if n.successors(state, other_sym, top):
                    raise CompileError(
                        f"cell ({state!r}, top {top!r}) mixes epsilon and "
                        "symbol moves")
        if sym is EPSILON and len(succ) == 1:
            for other_sym in n.input_alphabet + (END_MARKER,):
                if n.successors(state, other_sym, top):
                    raise CompileError(
                        f"cell ({state!r}, top {top!r}) mixes epsilon and "
                        "symbol moves")
    for (state, sym, top), succ in n.transitions.items():
        if sym == END_MARKER:
            for tgt, _ in succ:
                if any(k[0] == tgt for k in n.transitions):
                    raise CompileError(
                        f"end-marker move target {tgt!r} must be terminal")

    fresh = {s.name: s.name for s in n.states}
    committed = {s.name: s.name + "+" for s in n.states}
    states = [State(fresh[s.name]) for s in n.states]
    states += [State(committed[s.name]) for s in n.states]
    states.append(State(_OVERFLOW))
    states += [State(_T_ACC[0], Role.SEND0, True), State(_T_ACC[1], Role.SEND1, True),
               State(_T_REJ[0], Role.SEND0, False), State(_T_REJ[1], Role.SEND1, False)]

    trans = {}

    def end_move(src, top, bit, npda_target):
        accepting = npda_target is not None and by_name[npda_target].accepting
        tgt = _T_ACC[bit] if accepting else _T_REJ[1 - bit]
        trans[(src, END_MARKER, top, bit)] = (tgt, (top,))

    for bit in (0, 1):
        for s in n.states:
            for top in n.stack_alphabet:
                for sym in (EPSILON,) + n.input_alphabet + (END_MARKER,):
                    succ = n.successors(s.name, sym, top)
                    if sym == END_MARKER:
                        # pick per tag; completion reject when the path dies
                        for tag_map in (fresh, committed):
                            if len(succ) == 2 and tag_map is fresh:
                                end_move(tag_map[s.name], top, bit, succ[bit][0])
                            elif len(succ) >= 1:
                                if len(succ) == 2:  # excess choice: reject
                                    end_move(tag_map[s.name], top, bit, None)
                                else:
                                    end_move(tag_map[s.name], top, bit, succ[0][0])
                            elif not n.successors(s.name, EPSILON, top):
                                end_move(tag_map[s.name], top, bit, None)
                        continue
                    if not succ:
                        if sym is not EPSILON \
                                and not n.successors(s.name, EPSILON, top):
                            # dead path: scan to the end, then reject
                            trans[(fresh[s.name], sym, top, bit)] = (_OVERFLOW, (top,))
                            trans[(committed[s.name], sym, top, bit)] = (_OVERFLOW, (top,))
                        continue
                    if len(succ) == 1:
                        tgt, push = succ[0]
                        trans[(fresh[s.name], sym, top, bit)] = (fresh[tgt], push)
                        trans[(committed[s.name], sym, top, bit)] = (committed[tgt], push)
                    else:
                        tgt, push = succ[bit]
                        trans[(fresh[s.name], sym, top, bit)] = (committed[tgt], push)
                        # second choice on a committed path: excess branching
                        trans[(committed[s.name], sym, top, bit)] = (_OVERFLOW, (top,))
        for top in n.stack_alphabet:
            for sym in n.input_alphabet:
                trans[(_OVERFLOW, sym, top, bit)] = (_OVERFLOW, (top,))
            end_move(_OVERFLOW, top, bit, None)

    return DpdaSpec(input_alphabet=n.input_alphabet,
                    stack_alphabet=n.stack_alphabet,
                    states=tuple(states),
                    initial_state=fresh[n.initial_state],
                    transitions=trans)


def decompose_ctc_dpda(spec: DpdaSpec):
    """Three plain DPDAs whose languages satisfy L = L1 | (L2 & L3).

    A1: bit fixed to 0, accept iff the run ends in an accepting send-0 state.
    A2: bit fixed to 0, accept iff the run ends in any send-1 state.
    A3: bit fixed to 1, original accepting states.
    The identity holds for machines with a crisp verdict on every word.
    """
    if not spec.ctc_indexed:
        raise SpecValidationError("decompose needs a bit-indexed DPDA")

    def slice_bit(bit, accepting_names):
        trans = {(st, sym, top): mv
                 for (st, sym, top, b), mv in spec.transitions.items() if b == bit}
        states = tuple(State(s.name, Role.NORMAL, s.name in accepting_names)
                       for s in spec.states)
        return DpdaSpec(input_alphabet=spec.input_alphabet,
                        stack_alphabet=spec.stack_alphabet, states=states,
                        initial_state=spec.initial_state, transitions=trans)

    a1 = slice_bit(0, {s.name for s in spec.states
                       if s.role is Role.SEND0 and s.accepting})
    a2 = slice_bit(0, {s.name for s in spec.states if s.role is Role.SEND1})
    a3 = slice_bit(1, {s.name for s in spec.states if s.accepting})
    return a1, a2, a3
