"""Seeded random machine generators shared by the property and acceptance tests."""

from ctcsim.dpda import DpdaSpec, NpdaSpec
from ctcsim.machines import PfaSpec, Role, State
from ctcsim.rational import ONE, RAT, ZERO

TERMINALS = (State("as0", Role.SEND0, True), State("as1", Role.SEND1, True),
             State("rs0", Role.SEND0, False), State("rs1", Role.SEND1, False))


def random_rational(rng, max_den=16):
    den = rng.randint(1, max_den)
    return RAT(rng.randint(0, den), den)


def random_probability_pair(rng, max_den=16):
    """(p, q) with p + q <= 1, not both forced positive."""
    den = rng.randint(1, max_den)
    a = rng.randint(0, den)
    b = rng.randint(0, den - a)
    return RAT(a, den), RAT(b, den)


def _stochastic_column(rng, n, live):
    support = rng.sample(live, k=rng.randint(1, min(3, len(live))))
    weights = [rng.randint(1, 4) for _ in support]
    total = sum(weights)
    col = [ZERO] * n
    for i, w in zip(support, weights):
        col[i] += RAT(w, total)
    return col


def _cols_to_matrix(cols):
    n = len(cols[0])
    return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(n))


def _identity_cols(n, start):
    return [[ONE if i == j else ZERO for i in range(n)]
            for j in range(start, n)]


def random_ctc_pfa(rng, max_states=4, alphabet=("a", "b")):
    """Random bit-indexed PFA: live mixing states plus the four terminals."""
    n_live = rng.randint(1, max_states)
    n = n_live + 4
    live = list(range(n_live))
    states = tuple(State(f"q{i}") for i in live) + TERMINALS

    def bit_tables():
        out = {}
        for sym in alphabet:
            cols = [_stochastic_column(rng, n, live) for _ in live]
            cols += _identity_cols(n, n_live)
            out[sym] = _cols_to_matrix(cols)
        cols = [_stochastic_column(rng, n, list(range(n_live, n))) for _ in live]
        cols += _identity_cols(n, n_live)
        out["$"] = _cols_to_matrix(cols)
        return out

    return PfaSpec(alphabet=tuple(alphabet), states=states,
                   initial=tuple(_stochastic_column(rng, n, live)),
                   transitions_bit0=bit_tables(), transitions_bit1=bit_tables())


def random_compact_ctc_pfa(rng, max_states=4, alphabet=("a", "b")):
    """Bit-indexed PFA on at most max_states states *total*: every state
    carries a send role (so any end-marker matrix is legal) and a random
    accepting flag."""
    n = rng.randint(1, max_states)
    states = tuple(State(f"q{i}",
                         rng.choice((Role.SEND0, Role.SEND1)),
                         rng.random() < 0.5)
                   for i in range(n))

    def bit_tables():
        return {sym: _cols_to_matrix(
                    [_stochastic_column(rng, n, list(range(n)))
                     for _ in range(n)])
                for sym in tuple(alphabet) + ("$",)}

    return PfaSpec(alphabet=tuple(alphabet), states=states,
                   initial=tuple(_stochastic_column(rng, n, list(range(n)))),
                   transitions_bit0=bit_tables(), transitions_bit1=bit_tables())


def random_compact_deterministic_ctc_pfa(rng, max_states=5, alphabet=("a", "b")):
    """Deterministic twin of random_compact_ctc_pfa (point-mass columns)."""
    n = rng.randint(1, max_states)
    states = tuple(State(f"q{i}",
                         rng.choice((Role.SEND0, Role.SEND1)),
                         rng.random() < 0.5)
                   for i in range(n))

    def point_column(i):
        return [ONE if k == i else ZERO for k in range(n)]

    def bit_tables():
        return {sym: _cols_to_matrix([point_column(rng.randrange(n))
                                      for _ in range(n)])
                for sym in tuple(alphabet) + ("$",)}

    return PfaSpec(alphabet=tuple(alphabet), states=states,
                   initial=tuple(point_column(rng.randrange(n))),
                   transitions_bit0=bit_tables(), transitions_bit1=bit_tables())


def random_deterministic_ctc_pfa(rng, max_states=5, alphabet=("a", "b")):
    """Random DFA with a bit channel, as a 0/1-matrix PfaSpec."""
    n_live = rng.randint(1, max_states)
    n = n_live + 4
    states = tuple(State(f"q{i}") for i in range(n_live)) + TERMINALS

    def point_column(n, i):
        return [ONE if k == i else ZERO for k in range(n)]

    def bit_tables():
        out = {}
        for sym in alphabet:
            cols = [point_column(n, rng.randrange(n_live)) for _ in range(n_live)]
            cols += _identity_cols(n, n_live)
            out[sym] = _cols_to_matrix(cols)
        cols = [point_column(n, n_live + rng.randrange(4)) for _ in range(n_live)]
        cols += _identity_cols(n, n_live)
        out["$"] = _cols_to_matrix(cols)
        return out

    return PfaSpec(alphabet=tuple(alphabet), states=states,
                   initial=tuple(point_column(n, 0)),
                   transitions_bit0=bit_tables(), transitions_bit1=bit_tables())


def random_post_pfa(rng, max_states=4, alphabet=("a", "b")):
    """Random postselection PFA (roles drawn per state, at least one
    postselection state guaranteed live via a uniform floor)."""
    n = rng.randint(2, max_states + 2)
    roles = [rng.choice((Role.POST_ACCEPT, Role.POST_REJECT, Role.NONPOST))
             for _ in range(n)]
    roles[0] = Role.POST_ACCEPT
    roles[1] = Role.POST_REJECT
    states = tuple(State(f"q{i}", role, role is Role.POST_ACCEPT)
                   for i, role in enumerate(roles))
    trans = {}
    for sym in tuple(alphabet) + ("$",):
        cols = [_stochastic_column(rng, n, list(range(n))) for _ in range(n)]
        trans[sym] = _cols_to_matrix(cols)
    # keep a sliver of mass on postselection states for every word
    initial = [RAT(1, 2 * n)] * n
    initial[0] += ONE - sum(initial, ZERO)
    trans["$"] = _cols_to_matrix(
        [[x / 2 + (RAT(1, 2 * n)) for x in
          [trans["$"][i][j] for i in range(n)]] for j in range(n)])
    return PfaSpec(alphabet=tuple(alphabet), states=states,
                   initial=tuple(initial), transitions=trans)


def random_post_linear(rng, alphabet=("a", "b"), max_dim=4):
    """Random integer-matrix postselection linear machine; the scale bound
    is the smallest integer whose square covers the Gram row-sum bound."""
    n = rng.randint(2, max_dim)
    roles = [rng.choice((Role.POST_ACCEPT, Role.POST_REJECT, Role.NONPOST))
             for _ in range(n)]
    roles[0] = Role.POST_ACCEPT
    roles[rng.randrange(1, n)] = Role.POST_REJECT
    states = tuple(State(f"c{i}", r, r is Role.POST_ACCEPT)
                   for i, r in enumerate(roles))

    def matrix():
        return tuple(tuple(RAT(rng.randint(-3, 3)) for _ in range(n))
                     for _ in range(n))

    trans = {sym: matrix() for sym in tuple(alphabet) + ("$",)}
    worst = ZERO
    for m in trans.values():
        for i in range(n):
            row = sum(abs(sum(m[k][i] * m[k][j] for k in range(n)))
                      for j in range(n))
            worst = max(worst, row)
    c = 1
    while c * c < worst:
        c += 1
    init = tuple(RAT(rng.randint(-2, 2)) for _ in range(n))
    if all(x == ZERO for x in init):
        init = (ONE,) + init[1:]
    from ctcsim.machines import LinearFaSpec
    return LinearFaSpec(alphabet=tuple(alphabet), states=states, initial=init,
                        scale_bound=RAT(c), transitions=trans)


def random_plain_dpda(rng, alphabet=("a", "b"), n_states=3):
    """Random total epsilon-free DPDA; always halts in a terminal on '$'."""
    Z, X = "Z", "X"
    names = [f"p{i}" for i in range(n_states)]
    acc = rng.random() < 0.5
    states = tuple(State(n) for n in names) + (
        State("halt_acc", accepting=True), State("halt_rej"))
    trans = {}
    for q in names:
        for sym in alphabet:
            for top in (Z, X):
                tgt = rng.choice(names)
                if top == Z:
                    push = rng.choice([(Z,), (Z, X)])
                else:
                    push = rng.choice([(), (X,), (X, X)])
                trans[(q, sym, top)] = (tgt, push)
        for top in (Z, X):
            tgt = "halt_acc" if rng.random() < 0.5 else "halt_rej"
            trans[(q, "$", top)] = (tgt, (top,))
    return DpdaSpec(input_alphabet=tuple(alphabet), stack_alphabet=(Z, X),
                    states=states, initial_state=names[0], transitions=trans)


def random_branching2_npda(rng, alphabet=("a", "b")):
    """Union of two random DPDAs behind one initial epsilon choice."""
    d0 = random_plain_dpda(rng, alphabet)
    d1 = random_plain_dpda(rng, alphabet)
    states = [State("S")]
    trans = {("S", "", "Z"): ((f"L.{d0.initial_state}", ("Z",)),
                              (f"R.{d1.initial_state}", ("Z",)))}
    for prefix, d in (("L", d0), ("R", d1)):
        for s in d.states:
            states.append(State(f"{prefix}.{s.name}", accepting=s.accepting))
        for (q, sym, top, _bit), (tgt, push) in d.transitions.items():
            trans[(f"{prefix}.{q}", sym or "", top)] = \
                ((f"{prefix}.{tgt}", push),)
    return NpdaSpec(input_alphabet=tuple(alphabet), stack_alphabet=("Z", "X"),
                    states=tuple(states), initial_state="S",
                    transitions=trans, branching=2), d0, d1
