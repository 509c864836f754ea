"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -s` to see the lines and timings.
Every expected value is exact; runtime bounds are asserted as stated.
"""

import random
import time
from contextlib import contextmanager

import pytest

from ctcsim import (BranchOutcome, BranchSendProfile, Dist2,
                    PostselectionMassZero, VerdictKind, ctc_semantics,
                    ctc_to_postselect, decompose_ctc_dpda,
                    evolution_from_branches, evolution_from_sends,
                    hop_chain_consistency, postselect_to_ctc, run_dpda_batch,
                    run_linear, run_pfa, simulate_deterministic,
                    single_hop_evolution, stationary, with_infinite_branch)
from ctcsim.ctc1 import branch_outcome, deterministic_verdict
from ctcsim.dpda import HALTED
from ctcsim.machines import Role
from ctcsim.rational import ONE, RAT, ZERO
from ctcsim.words import encode_corpus, words_upto
from ctcsim.zoo import (build_leq_postpfa, build_lpal_postqfa,
                        build_union_ijk_ctc_dpda, is_leq, is_pal,
                        is_union_ijk)

from generators import (random_compact_ctc_pfa,
                        random_compact_deterministic_ctc_pfa,
                        random_ctc_pfa, random_deterministic_ctc_pfa,
                        random_probability_pair, random_rational)


@contextmanager
def criterion(number, description, limit_seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    ok = elapsed < limit_seconds
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} "
          f"({elapsed:.2f}s vs {limit_seconds}s bound) - {description}")
    assert ok, f"criterion {number} exceeded its runtime bound"


def test_criterion_1_postselection_stationary_formula():
    with criterion(1, "postselection image evolution has stationary "
                      "(p_r, p_a)/(p_a+p_r) on 200+ random mass pairs", 1.0):
        rng = random.Random(101)
        checked = 0
        while checked < 200:
            p_a, p_r = random_probability_pair(rng)
            if p_a + p_r == ZERO:
                continue
            evo = evolution_from_sends(p_a, p_r)
            st = stationary(evo)
            total = p_a + p_r
            assert st.unique == Dist2(p_r / total, p_a / total)
            checked += 1


def test_criterion_2_branch_table_reproduction():
    with criterion(2, "all four accept/reject branch rows give the exact "
                      "matrices and stationary distributions", 1.0):
        cases = [
            (True, True, ((ONE, ZERO), (ZERO, ONE)), None),
            (True, False, ((ONE, ONE), (ZERO, ZERO)), (ONE, ZERO)),
            (False, True, ((ZERO, ZERO), (ONE, ONE)), (ZERO, ONE)),
            (False, False, ((ZERO, ONE), (ONE, ZERO)), (RAT(1, 2), RAT(1, 2))),
        ]
        for acc0, acc1, matrix, fixed in cases:
            # accepting branch sends its own name, rejecting the other one
            b0 = BranchOutcome.point(0 if acc0 else 1, acc0)
            b1 = BranchOutcome.point(1 if acc1 else 0, acc1)
            evo = evolution_from_branches(b0, b1)
            assert evo.m == matrix
            st = stationary(evo)
            if fixed is None:
                assert st.is_all
            else:
                assert st.unique == Dist2(*fixed)


def test_criterion_3_backward_conversion_exactness():
    with criterion(3, "converted machine acceptance equals the stationary "
                      "acceptance value for 200 random bit-indexed PFAs "
                      "on all words up to length 6", 30.0):
        rng = random.Random(303)
        words = list(words_upto("ab", 6))
        for trial in range(200):
            machine = (random_compact_ctc_pfa(rng, max_states=4)
                       if trial % 2 else random_ctc_pfa(rng, max_states=4))
            converted = ctc_to_postselect(machine)
            for w in words:
                b0 = branch_outcome(machine, w, 0)
                b1 = branch_outcome(machine, w, 1)
                denom = b0.send1 + b1.send0
                if denom == ZERO:
                    with pytest.raises(PostselectionMassZero):
                        run_pfa(converted, w)
                    continue
                value = (b1.send0 * b0.accept + b0.send1 * b1.accept) / denom
                assert run_pfa(converted, w).P_a == value
                v = ctc_semantics(machine, w)
                assert v.acceptance_min == v.acceptance_max == value


def test_criterion_4_two_run_simulation_equivalence():
    with criterion(4, "two-run deterministic simulation equals the full "
                      "semantics for 500 random machines on all words up "
                      "to length 6", 30.0):
        rng = random.Random(404)
        words = list(words_upto("ab", 6))
        for trial in range(500):
            machine = (random_compact_deterministic_ctc_pfa(rng, max_states=5)
                       if trial % 2 else
                       random_deterministic_ctc_pfa(rng, max_states=5))
            for w in words:
                assert simulate_deterministic(machine, w).kind is \
                    ctc_semantics(machine, w).kind


def test_criterion_5_equal_counts_witness():
    with criterion(5, "equal-counts witness: all 2047 words to length 10, "
                      "members accept at exactly 3/4, nonmembers reject "
                      "at most 3/35, no undefined", 10.0):
        machine = build_leq_postpfa()
        image = postselect_to_ctc(machine)
        count = 0
        for w in words_upto("ab", 10):
            count += 1
            p_a = run_pfa(machine, w).P_a
            v = ctc_semantics(image, w)
            assert v.acceptance_min == v.acceptance_max == p_a
            if is_leq(w):
                assert p_a == RAT(3, 4)
                assert v.kind is VerdictKind.ACCEPT
            else:
                assert p_a <= RAT(3, 35)
                assert v.kind is VerdictKind.REJECT
        assert count == 2047


def test_criterion_6_palindrome_witness():
    with criterion(6, "palindrome witness: all words to length 10, "
                      "palindromes at exactly 1, others at most 1/5", 10.0):
        machine = build_lpal_postqfa()
        count = 0
        for w in words_upto("ab", 10):
            count += 1
            p_a = run_linear(machine, w).P_a
            if is_pal(w):
                assert p_a == ONE
            else:
                assert p_a <= RAT(1, 5)
        assert count == 2047


def test_criterion_7_union_language_zero_error():
    with criterion(7, "union-language machine: crisp verdicts matching the "
                      "reference on all 797161 words to length 12, and the "
                      "three-machine decomposition agrees everywhere", 60.0):
        machine = build_union_ijk_ctc_dpda()
        flat, offs = encode_corpus("abc", 12)
        n_words = len(offs) - 1
        assert n_words == 797161

        send_of = [0 if s.role is Role.SEND0 else 1 for s in machine.states]
        acc_of = [s.accepting for s in machine.states]
        status0, state0 = run_dpda_batch(machine, flat, offs, 0)
        status1, state1 = run_dpda_batch(machine, flat, offs, 1)

        a1, a2, a3 = decompose_ctc_dpda(machine)
        parts = []
        for sub in (a1, a2, a3):
            status, state = run_dpda_batch(sub, flat, offs)
            accepting = [s.accepting for s in sub.states]
            parts.append([st == HALTED and accepting[q]
                          for st, q in zip(status, state)])
        l1, l2, l3 = parts

        words = words_upto("abc", 12)
        sample_check = 0
        for i, w in enumerate(words):
            assert status0[i] == HALTED and status1[i] == HALTED
            q0, q1 = state0[i], state1[i]
            kind = deterministic_verdict(send_of[q0], acc_of[q0],
                                         send_of[q1], acc_of[q1])
            member = is_union_ijk(w)
            assert kind is (VerdictKind.ACCEPT if member
                            else VerdictKind.REJECT), w
            assert (l1[i] or (l2[i] and l3[i])) == member, w
            if i % 40013 == 0:  # dual-route spot check of the batch path
                v = ctc_semantics(machine, w)
                assert v.kind is kind
                assert v.acceptance_min == v.acceptance_max
                assert v.acceptance_min == (ONE if member else ZERO)
                sample_check += 1
        assert sample_check >= 19


def test_criterion_8_hop_equivalence():
    with criterion(8, "hop chains: 100 random halting profiles equal the "
                      "single-jump stationary set for every chain length "
                      "to 20; nonhalting branches are always undefined "
                      "with the trap distribution stationary", 10.0):
        rng = random.Random(808)
        for _ in range(100):
            profile = BranchSendProfile(random_rational(rng),
                                        random_rational(rng))
            want = stationary(single_hop_evolution(profile))
            for n in range(1, 21):
                assert hop_chain_consistency(profile, n) == want
        for _ in range(50):
            st, v = with_infinite_branch(random_rational(rng))
            assert v.kind is VerdictKind.UNDEFINED
            assert Dist2(ONE, ZERO) in st


def test_criterion_9_grandfather_fixed_point():
    with criterion(9, "self-blocking scenario settles at exactly (1/2, 1/2) "
                      "and is undefined", 1.0):
        from test_ctc1 import GRANDFATHER
        v = ctc_semantics(GRANDFATHER, "")
        assert v.stationary.unique == Dist2(RAT(1, 2), RAT(1, 2))
        assert v.kind is VerdictKind.UNDEFINED
