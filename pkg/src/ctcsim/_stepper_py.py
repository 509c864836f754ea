"""Pure-Python configuration stepper; the fallback twin of ctcsim._stepper.

Encoded machine layout (all tables are array('i')):

    enc = (n_states, n_syms, n_stack, n_bits,
           eps,       # (q*n_stack + top)*n_bits + bit          -> move | -1
           sym,       # ((q*n_syms + a)*n_stack + top)*n_bits+b -> move | -1
           target, push_off, push_len, pool,   # per-move data
           initial_state, max_push)

Words are symbol codes with the end-marker code appended. Statuses:
0 halted, 1 epsilon-cycle, 2 budget exhausted, 3 stuck mid-input.

An epsilon cycle is flagged when a (state, stack-top) pair recurs with the
input pointer parked, at a height no lower than its first visit, with the
stack never dipping below that first height in between: a deterministic
machine then repeats forever. The step budget is the backstop for loops the
trail check cannot certify.
"""

HALTED, NONHALT_CYCLE, NONHALT_BUDGET, STUCK = 0, 1, 2, 3


def run_batch(enc, flat, offs, bit, budget_override, budget_mult,
              out_status, out_state, out_steps):
    (n_states, n_syms, n_stack, n_bits, eps, sym,
     target, push_off, push_len, pool, initial_state, max_push) = enc
    n_words = len(offs) - 1
    max_wl = max((offs[i + 1] - offs[i] for i in range(n_words)), default=1)
    budget_cap = budget_override if budget_override > 0 \
        else budget_mult * max_wl * n_states * n_stack
    stack = [0] * (2 + budget_cap * max(1, max_push))
    trail_q = [0] * (budget_cap + 1)
    trail_t = [0] * (budget_cap + 1)
    trail_h = [0] * (budget_cap + 1)
    trail_m = [0] * (budget_cap + 1)

    for w in range(n_words):
        pos, end_pos = offs[w], offs[w + 1]
        wl = end_pos - pos
        budget = budget_override if budget_override > 0 \
            else budget_mult * wl * n_states * n_stack
        q = initial_state
        stack[0] = 0
        sp = 1
        steps = 0
        trail_len = 0
        status = -1
        while True:
            if steps >= budget:
                status = NONHALT_BUDGET
                break
            top = stack[sp - 1]
            mid = eps[(q * n_stack + top) * n_bits + bit]
            consumed = False
            if mid < 0 and pos < end_pos:
                a = flat[pos]
                mid = sym[((q * n_syms + a) * n_stack + top) * n_bits + bit]
                consumed = True
            if mid < 0:
                status = HALTED if pos == end_pos else STUCK
                break
            sp -= 1
            off, ln = push_off[mid], push_len[mid]
            for k in range(ln):
                stack[sp + k] = pool[off + k]
            sp += ln
            q = target[mid]
            steps += 1
            if consumed:
                pos += 1
                trail_len = 0
            else:
                top2 = stack[sp - 1]
                hit = False
                for k in range(trail_len):
                    if trail_m[k] > sp:
                        trail_m[k] = sp
                    if trail_q[k] == q and trail_t[k] == top2 \
                            and trail_m[k] >= trail_h[k]:
                        hit = True
                        break
                if hit:
                    status = NONHALT_CYCLE
                    break
                trail_q[trail_len] = q
                trail_t[trail_len] = top2
                trail_h[trail_len] = sp
                trail_m[trail_len] = sp
                trail_len += 1
        out_status[w] = status
        out_state[w] = q
        out_steps[w] = steps
