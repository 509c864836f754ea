"""Postselection semantics and both conversion directions.

Forward (postselection machine -> bit-indexed machine): the image imitates
the original; a run ending in a postselection state halts with that state's
decision and sends the matching bit (accept=1, reject=0), while a run ending
outside the postselection states reports the received bit as its decision
and sends it back. The induced evolution is

    [[1 - p_a, p_r], [p_a, 1 - p_r]]

with unique stationary distribution (p_r, p_a)/(p_a + p_r), and the
acceptance probability at that distribution is exactly p_a/(p_a + p_r): the
image recognizes the same language with the same error.

Backward (bit-indexed machine -> postselection machine): fix the bit both
ways (A0, A1), tensor the two fixings, and read two joint events off the
product: "A1 sent 0 and A0 accepted" and "A0 sent 1 and A1 accepted" (plus
their rejecting twins). The events can overlap, so the *sum* of their
probabilities is realized by mixing two role-labelings of the same tensor
with probability 1/2 each rather than by a union predicate. Normalizing the
mixed masses reproduces the bit-channel acceptance value exactly.

Linear machines convert backward only when residue-free (scaled-orthogonal
matrices, unit initial norm, send roles on every component): a dilation
residue is not a component, so its cross terms cannot appear as squared
masses of any rational tensor machine.
"""

from .errors import ConversionError, SpecValidationError
from .machines import (END_MARKER, LinearFaSpec, PfaSpec, PostOutcome, Role,
                       State, direct_sum, fix_bit, fix_bit_linear,
                       mat_block_diag, mat_identity, tensor, unpair_index,
                       with_state_meta)
from .rational import HALF, ONE, ZERO, is_probability

_F_ACC = "post:acc"
_F_REJ = "post:rej"


def post_probabilities(p_a, p_r):
    """Discard-and-renormalize probabilities: (p_a, p_r) -> (P_a, P_r)."""
    if not (is_probability(p_a) and is_probability(p_r)) or p_a + p_r > ONE:
        raise SpecValidationError("postselection masses must be probabilities "
                                  "with p_a + p_r <= 1")
    out = PostOutcome.from_masses(p_a, p_r)
    return out.P_a, out.P_r


# --- forward direction: postselection -> bit channel ---

def _post_role_sets(spec):
    if spec.kind != "post":
        raise ConversionError("machine has no postselection roles")
    pa = {i for i, s in enumerate(spec.states) if s.role is Role.POST_ACCEPT}
    pr = {i for i, s in enumerate(spec.states) if s.role is Role.POST_REJECT}
    return pa, pr


def _pfa_post_to_ctc(spec: PfaSpec) -> PfaSpec:
    pa, pr = _post_role_sets(spec)
    n = len(spec.states)
    states = tuple(State(s.name) for s in spec.states) \
        + (State(_F_ACC, Role.SEND1, True), State(_F_REJ, Role.SEND0, False))
    symbol_tables = {sym: mat_block_diag(m, mat_identity(2))
                     for sym, m in spec.transitions.items() if sym != END_MARKER}
    end = spec.transitions[END_MARKER]

    def end_table(bit):
        acc_row = [ZERO] * (n + 2)
        rej_row = [ZERO] * (n + 2)
        for j in range(n):
            col_acc = col_rej = ZERO
            for i in range(n):
                x = end[i][j]
                if x == ZERO:
                    continue
                if i in pa:
                    col_acc += x
                elif i in pr:
                    col_rej += x
                elif bit == 1:  # outside postselection: report the bit
                    col_acc += x
                else:
                    col_rej += x
            acc_row[j], rej_row[j] = col_acc, col_rej
        acc_row[n] = ONE       # dead columns of the two halt states
        rej_row[n + 1] = ONE
        zero = tuple([ZERO] * (n + 2))
        return tuple([zero] * n) + (tuple(acc_row), tuple(rej_row))

    t0 = dict(symbol_tables)
    t0[END_MARKER] = end_table(0)
    t1 = dict(symbol_tables)
    t1[END_MARKER] = end_table(1)
    return PfaSpec(alphabet=spec.alphabet, states=states,
                   initial=tuple(spec.initial) + (ZERO, ZERO),
                   transitions_bit0=t0, transitions_bit1=t1)


def _linear_post_to_ctc(spec: LinearFaSpec) -> LinearFaSpec:
    pa, pr = _post_role_sets(spec)
    n = len(spec.states)
    nonpost = [i for i in range(n) if i not in pa and i not in pr]
    twin_of = {i: n + k for k, i in enumerate(nonpost)}
    dim = n + len(nonpost)

    def meta(i):
        if i in pa:
            return Role.SEND1, True
        return Role.SEND0, False

    states = tuple(State(s.name, *meta(i)) for i, s in enumerate(spec.states)) \
        + tuple(State(f"{spec.states[i].name}'", Role.SEND1, True)
                for i in nonpost)

    def pad(m):
        return tuple(tuple(m[i]) + (ZERO,) * len(nonpost) if i < n
                     else (ZERO,) * dim for i in range(dim))

    symbol_tables = {sym: pad(m) for sym, m in spec.transitions.items()
                     if sym != END_MARKER}
    end = spec.transitions[END_MARKER]
    end0 = pad(end)
    # bit 1: reroute the non-postselection rows onto their accepting twins
    rows = [list(r) for r in end0]
    for i in nonpost:
        rows[twin_of[i]] = rows[i]
        rows[i] = [ZERO] * dim
    end1 = tuple(tuple(r) for r in rows)
    t0 = dict(symbol_tables)
    t0[END_MARKER] = end0
    t1 = dict(symbol_tables)
    t1[END_MARKER] = end1
    return LinearFaSpec(alphabet=spec.alphabet, states=states,
                        initial=tuple(spec.initial) + (ZERO,) * len(nonpost),
                        scale_bound=spec.scale_bound,
                        transitions_bit0=t0, transitions_bit1=t1)


def postselect_to_ctc(machine):
    """Image machine whose bit-channel acceptance equals P_a exactly."""
    if isinstance(machine, PfaSpec):
        return _pfa_post_to_ctc(machine)
    if isinstance(machine, LinearFaSpec):
        return _linear_post_to_ctc(machine)
    raise ConversionError("only PFA and linear machines convert")


# --- backward direction: bit channel -> postselection ---

def _pair_metas(a0, a1, copy):
    """Postselection roles on the product of the two bit-fixings.

    copy 1 reads "A1 sent 0, decide as A0"; copy 2 reads "A0 sent 1,
    decide as A1"; everything else sits outside the postselection.
    """
    n1 = len(a1.states)
    metas = []
    for k in range(len(a0.states) * n1):
        i, j = unpair_index(k, n1)
        if copy == 1 and a1.states[j].role is Role.SEND0:
            decide = a0.states[i].accepting
        elif copy == 2 and a0.states[i].role is Role.SEND1:
            decide = a1.states[j].accepting
        else:
            metas.append((Role.NONPOST, False))
            continue
        metas.append((Role.POST_ACCEPT, True) if decide
                     else (Role.POST_REJECT, False))
    return metas


def _check_residue_free(spec: LinearFaSpec):
    c2 = spec.scale_bound * spec.scale_bound
    if spec.initial_norm2 != ONE:
        raise ConversionError("linear conversion needs a unit initial vector")
    if any(s.role not in (Role.SEND0, Role.SEND1) for s in spec.states):
        raise ConversionError("linear conversion needs send roles on every "
                              "component")
    for bit in (0, 1):
        for sym, m in spec.tables(bit).items():
            nn = len(m)
            for i in range(nn):
                for j in range(nn):
                    dot = sum((m[k][i] * m[k][j] for k in range(nn)), ZERO)
                    if dot != (c2 if i == j else ZERO):
                        raise ConversionError(
                            f"matrix for {sym!r} (bit {bit}) is not "
                            "scaled-orthogonal; the conversion would drop "
                            "dilation-residue mass")


def ctc_to_postselect(machine):
    """Postselection machine with the same acceptance value on every word."""
    if isinstance(machine, PfaSpec):
        if not machine.ctc_indexed:
            raise ConversionError("machine is not bit-indexed")
        a0, a1 = fix_bit(machine, 0), fix_bit(machine, 1)
    elif isinstance(machine, LinearFaSpec):
        if not machine.ctc_indexed:
            raise ConversionError("machine is not bit-indexed")
        _check_residue_free(machine)
        a0, a1 = fix_bit_linear(machine, 0), fix_bit_linear(machine, 1)
    else:
        raise ConversionError("only PFA and linear machines convert")
    product = tensor(a0, a1)
    t1 = with_state_meta(product, _pair_metas(a0, a1, 1))
    t2 = with_state_meta(product, _pair_metas(a0, a1, 2))
    return direct_sum(t1, t2, HALF, HALF)
