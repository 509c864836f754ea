# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled configuration stepper; semantics identical to _stepper_py."""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

HALTED, NONHALT_CYCLE, NONHALT_BUDGET, STUCK = 0, 1, 2, 3


def run_batch(enc, int[::1] flat, int[::1] offs, int bit,
              long budget_override, long budget_mult,
              int[::1] out_status, int[::1] out_state, int[::1] out_steps):
    cdef int n_states = enc[0]
    cdef int n_syms = enc[1]
    cdef int n_stack = enc[2]
    cdef int n_bits = enc[3]
    cdef int[::1] eps = enc[4]
    cdef int[::1] sym = enc[5]
    cdef int[::1] target = enc[6]
    cdef int[::1] push_off = enc[7]
    cdef int[::1] push_len = enc[8]
    cdef int[::1] pool = enc[9]
    cdef int initial_state = enc[10]
    cdef int max_push = enc[11]

    cdef Py_ssize_t n_words = offs.shape[0] - 1
    cdef Py_ssize_t w
    cdef long max_wl = 1, wl
    for w in range(n_words):
        wl = offs[w + 1] - offs[w]
        if wl > max_wl:
            max_wl = wl
    cdef long budget_cap = budget_override if budget_override > 0 \
        else budget_mult * max_wl * n_states * n_stack
    cdef long grow = max_push if max_push > 1 else 1
    cdef long stack_cap = 2 + budget_cap * grow

    cdef int *stack = <int *> PyMem_Malloc(stack_cap * sizeof(int))
    cdef int *trail_q = <int *> PyMem_Malloc((budget_cap + 1) * sizeof(int))
    cdef int *trail_t = <int *> PyMem_Malloc((budget_cap + 1) * sizeof(int))
    cdef int *trail_h = <int *> PyMem_Malloc((budget_cap + 1) * sizeof(int))
    cdef int *trail_m = <int *> PyMem_Malloc((budget_cap + 1) * sizeof(int))
    if stack is NULL or trail_q is NULL or trail_t is NULL \
            or trail_h is NULL or trail_m is NULL:
        PyMem_Free(stack); PyMem_Free(trail_q); PyMem_Free(trail_t)
        PyMem_Free(trail_h); PyMem_Free(trail_m)
        raise MemoryError()

    cdef long pos, end_pos, budget, steps, trail_len, sp, k, off, ln
    cdef int q, top, top2, mid, a, status, consumed, hit
    try:
        for w in range(n_words):
            pos = offs[w]
            end_pos = offs[w + 1]
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
                consumed = 0
                if mid < 0 and pos < end_pos:
                    a = flat[pos]
                    mid = sym[((q * n_syms + a) * n_stack + top) * n_bits + bit]
                    consumed = 1
                if mid < 0:
                    status = HALTED if pos == end_pos else STUCK
                    break
                sp -= 1
                off = push_off[mid]
                ln = push_len[mid]
                if sp + ln >= stack_cap:  # unreachable by the cap formula
                    status = NONHALT_BUDGET
                    break
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
                    hit = 0
                    for k in range(trail_len):
                        if trail_m[k] > sp:
                            trail_m[k] = sp
                        if trail_q[k] == q and trail_t[k] == top2 \
                                and trail_m[k] >= trail_h[k]:
                            hit = 1
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
            out_steps[w] = <int> steps
    finally:
        PyMem_Free(stack)
        PyMem_Free(trail_q)
        PyMem_Free(trail_t)
        PyMem_Free(trail_h)
        PyMem_Free(trail_m)
