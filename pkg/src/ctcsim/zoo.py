"""Witness machines, each paired with its reference membership predicate.

* equal-counts language over {a,b} (|w|_a = |w|_b): a postselection PFA with
  one accepting survivor branch and two rejecting counter branches. The
  accepting branch decays at rate 1/64 per symbol; each rejecting branch
  decays at rate 1/64^2 per symbol it counts and not at all on the other
  symbol, so on balanced words all branches shrink alike and the
  renormalized acceptance is exactly 3/4, while an imbalance of d symbols
  inflates one rejecting branch by 64^|d|, pushing acceptance below 3/35.

* palindromes over {a,b}: a linear machine tracking
  (s, f, r, z) = (1, prefix value, reversed-prefix value, 4^len) with digits
  a=1, b=2 in base 4; the end-marker reads off s and 2(f - r), so acceptance
  is 1/(1 + 4 d^2) with d = enc(w) - enc(w^r): exactly 1 on palindromes,
  at most 1/5 otherwise (equal-length digit strings encode injectively).

* union language {a^i b^j c^k : i=j or i=k}: a branching-2 PDA choosing
  between the two deterministic checkers, compiled to a bit-selected
  deterministic PDA; the verdict is crisp on every word.

All closed forms are validated against brute-force oracles in the test
suite before any expected value is frozen.
"""

from .dpda import DpdaSpec, NpdaSpec, npda_branching2_to_ctc
from .machines import LinearFaSpec, PfaSpec, Role, State
from .rational import ONE, RAT, ZERO

LEQ_ALPHABET = ("a", "b")
SURVIVE_ACC = RAT(1, 64)
SURVIVE_REJ = SURVIVE_ACC * SURVIVE_ACC  # the square keeps members at 3/4


def is_leq(word: str) -> bool:
    return word.count("a") == word.count("b")


def leq_acceptance(word: str):
    """Closed form for the witness machine's acceptance (oracle-checked)."""
    t = RAT(64) ** (word.count("a") - word.count("b"))
    return RAT(3) / (RAT(3) + (t + 1 / t) / 2)


def build_leq_postpfa() -> PfaSpec:
    states = (State("A", Role.POST_ACCEPT, True),
              State("R1", Role.POST_REJECT, False),
              State("R2", Role.POST_REJECT, False),
              State("D", Role.NONPOST, False))

    def decay(a_rate, r1_rate, r2_rate):
        cols = (a_rate, r1_rate, r2_rate, ONE)
        rows = [[ZERO] * 4 for _ in range(4)]
        for j, keep in enumerate(cols):
            rows[j][j] = keep
            rows[3][j] += ONE - keep
        return tuple(tuple(r) for r in rows)

    identity = decay(ONE, ONE, ONE)
    return PfaSpec(
        alphabet=LEQ_ALPHABET,
        states=states,
        initial=(RAT(3, 4), RAT(1, 8), RAT(1, 8), ZERO),
        transitions={"a": decay(SURVIVE_ACC, SURVIVE_REJ, ONE),
                     "b": decay(SURVIVE_ACC, ONE, SURVIVE_REJ),
                     "$": identity})


PAL_ALPHABET = ("a", "b")
_DIGIT = {"a": 1, "b": 2}
_BASE = 4


def is_pal(word: str) -> bool:
    return word == word[::-1]


def enc_base4(word: str) -> int:
    value = 0
    for ch in word:
        value = value * _BASE + _DIGIT[ch]
    return value


def pal_acceptance(word: str):
    d = enc_base4(word) - enc_base4(word[::-1])
    return ONE / (ONE + 4 * RAT(d) * RAT(d))


def build_lpal_postqfa() -> LinearFaSpec:
    states = (State("s", Role.POST_ACCEPT, True),
              State("f", Role.POST_REJECT, False),
              State("r", Role.NONPOST, False),
              State("z", Role.NONPOST, False))

    def step(d):
        # (s, f, r, z) -> (s, 4f + d*s, r + d*z, 4z)
        return ((ONE, ZERO, ZERO, ZERO),
                (RAT(d), RAT(4), ZERO, ZERO),
                (ZERO, ZERO, ONE, RAT(d)),
                (ZERO, ZERO, ZERO, RAT(4)))

    end = ((ONE, ZERO, ZERO, ZERO),          # accept readout: s
           (ZERO, RAT(2), RAT(-2), ZERO),    # reject readout: 2(f - r)
           (ZERO,) * 4,
           (ZERO,) * 4)
    return LinearFaSpec(
        alphabet=PAL_ALPHABET,
        states=states,
        initial=(ONE, ZERO, ZERO, ONE),
        scale_bound=RAT(6),
        transitions={"a": step(1), "b": step(2), "$": end})


UNION_ALPHABET = ("a", "b", "c")


def is_union_ijk(word: str) -> bool:
    i = word.count("a")
    j = word.count("b")
    k = word.count("c")
    return word == "a" * i + "b" * j + "c" * k and (i == j or i == k)


def build_union_ijk_npda() -> NpdaSpec:
    """Initial binary choice between the i=j and the i=k checker.

    Dead combinations are simply left undefined; the compiler completes them
    into scan-to-end-and-reject paths.
    """
    Z, X = "Z", "X"
    states = [State("S")]
    states += [State(n) for n in ("Ja", "Jb", "Jc")] + [State("JT", accepting=True)]
    states += [State(n) for n in ("Ka", "Kb", "Kc")] + [State("KT", accepting=True)]
    one = lambda tgt, *push: ((tgt, tuple(push)),)
    trans = {
        ("S", "", Z): (("Ja", (Z,)), ("Ka", (Z,))),
        # i=j: match a's against b's on the stack, then free c's
        ("Ja", "a", Z): one("Ja", Z, X),
        ("Ja", "a", X): one("Ja", X, X),
        ("Ja", "b", X): one("Jb"),
        ("Ja", "c", Z): one("Jc", Z),
        ("Jb", "b", X): one("Jb"),
        ("Jb", "c", Z): one("Jc", Z),
        ("Jc", "c", Z): one("Jc", Z),
        ("Ja", "$", Z): one("JT", Z),
        ("Jb", "$", Z): one("JT", Z),
        ("Jc", "$", Z): one("JT", Z),
        # i=k: match a's against c's, skipping b's
        ("Ka", "a", Z): one("Ka", Z, X),
        ("Ka", "a", X): one("Ka", X, X),
        ("Ka", "b", Z): one("Kb", Z),
        ("Ka", "b", X): one("Kb", X),
        ("Ka", "c", X): one("Kc"),
        ("Kb", "b", Z): one("Kb", Z),
        ("Kb", "b", X): one("Kb", X),
        ("Kb", "c", X): one("Kc"),
        ("Kc", "c", X): one("Kc"),
        ("Ka", "$", Z): one("KT", Z),
        ("Kb", "$", Z): one("KT", Z),
        ("Kc", "$", Z): one("KT", Z),
    }
    return NpdaSpec(input_alphabet=UNION_ALPHABET, stack_alphabet=(Z, X),
                    states=tuple(states), initial_state="S",
                    transitions=trans, branching=2)


def build_union_ijk_ctc_dpda() -> DpdaSpec:
    return npda_branching2_to_ctc(build_union_ijk_npda())


ZOO = {
    "leq": (build_leq_postpfa, is_leq),
    "pal": (build_lpal_postqfa, is_pal),
    "union-ijk": (build_union_ijk_ctc_dpda, is_union_ijk),
}
