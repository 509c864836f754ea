"""Independent oracles: every frozen expected value is computed here first.

These deliberately avoid the library's evaluation paths: probabilities come
from explicit path enumeration (not iterated matrix-vector products), the
palindrome witness is checked with plain integer positional encoding, fixed
points are found by generic Gaussian elimination (not the 2x2 closed form),
and nondeterministic PDAs are decided by breadth-first configuration search.
"""

from collections import deque

from ctcsim.rational import RAT, ZERO

END = "$"


def pfa_masses_by_paths(spec, word, bit=None):
    """Final state masses by depth-first enumeration of all state paths."""
    tables = spec.tables(bit) if spec.ctc_indexed else spec.tables()
    syms = list(word) + [END]
    n = len(spec.states)
    masses = [ZERO] * n

    def dfs(state, weight, pos):
        if pos == len(syms):
            masses[state] += weight
            return
        m = tables[syms[pos]]
        for nxt in range(n):
            x = m[nxt][state]
            if x != ZERO:
                dfs(nxt, weight * x, pos + 1)

    for i, w0 in enumerate(spec.initial):
        if w0 != ZERO:
            dfs(i, w0, 0)
    return masses


def post_masses_by_paths(spec, word):
    """(p_a, p_r) of a postselection PFA via path enumeration."""
    from ctcsim.machines import Role
    masses = pfa_masses_by_paths(spec, word)
    p_a = sum((x for x, s in zip(masses, spec.states)
               if s.role is Role.POST_ACCEPT), ZERO)
    p_r = sum((x for x, s in zip(masses, spec.states)
               if s.role is Role.POST_REJECT), ZERO)
    return p_a, p_r


def linear_vector_by_paths(spec, word, bit=None):
    """Final amplitudes as sums over all paths of entry products."""
    tables = spec.tables(bit) if spec.ctc_indexed else spec.tables()
    syms = list(word) + [END]
    n = len(spec.states)
    out = [ZERO] * n

    def dfs(state, weight, pos):
        if pos == len(syms):
            out[state] += weight
            return
        m = tables[syms[pos]]
        for nxt in range(n):
            x = m[nxt][state]
            if x != ZERO:
                dfs(nxt, weight * x, pos + 1)

    for i, w0 in enumerate(spec.initial):
        if w0 != ZERO:
            dfs(i, w0, 0)
    return out


def encode_positional(word, digits, base):
    """Plain integer positional encoding (independent of the zoo helpers)."""
    value = 0
    for ch in word:
        value = value * base + digits[ch]
    return value


def solve_linear(aug):
    """Gaussian elimination over rationals; aug = [[a,b,...,rhs], ...].

    Returns the unique solution vector, or None if the system is singular
    or inconsistent.
    """
    rows = [list(r) for r in aug]
    n_vars = len(rows[0]) - 1
    r = 0
    for c in range(n_vars):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != ZERO), None)
        if pivot is None:
            return None
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != ZERO:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    for row in rows[r:]:
        if not any(x != ZERO for x in row[:-1]) and row[-1] != ZERO:
            return None
    return [rows[i][-1] for i in range(n_vars)]


def stationary_by_elimination(m):
    """Fixed points of a 2x2 column-stochastic matrix via generic elimination.

    Returns ("unique", (p0, p1)) or ("all", None).
    """
    a = m[1][0]
    b = m[0][1]
    # (M - I) d = 0 plus normalization d0 + d1 = 1
    sol = solve_linear([
        [m[0][0] - 1, m[0][1], ZERO],
        [m[1][0], m[1][1] - 1, ZERO],
        [RAT(1), RAT(1), RAT(1)],
    ])
    if sol is None:
        assert a == ZERO and b == ZERO
        return "all", None
    return "unique", tuple(sol)


def npda_accepts(n, word, budget=100000):
    """Breadth-first configuration search for NPDA membership."""
    syms = tuple(word) + (END,)
    accepting = {s.name for s in n.states if s.accepting}
    start = (n.initial_state, 0, (n.stack_alphabet[0],))
    seen = set()
    queue = deque([start])
    while queue and budget > 0:
        budget -= 1
        cfg = queue.popleft()
        if cfg in seen:
            continue
        seen.add(cfg)
        state, pos, stack = cfg
        if pos == len(syms) and state in accepting:
            return True
        top = stack[-1]
        for tgt, push in n.successors(state, None, top):
            queue.append((tgt, pos, stack[:-1] + tuple(push)))
        if pos < len(syms):
            for tgt, push in n.successors(state, syms[pos], top):
                queue.append((tgt, pos + 1, stack[:-1] + tuple(push)))
    return False
