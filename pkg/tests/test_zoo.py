"""Witness machines against their oracles and closed forms."""

from ctcsim import (VerdictKind, ctc_semantics, postselect_to_ctc, run_linear,
                    run_pfa)
from ctcsim.rational import ONE, RAT
from ctcsim.words import words_upto
from ctcsim.zoo import (build_leq_postpfa, build_lpal_postqfa,
                        build_union_ijk_ctc_dpda, build_union_ijk_npda,
                        enc_base4, is_leq, is_pal, is_union_ijk,
                        leq_acceptance, pal_acceptance)

from oracles import (encode_positional, linear_vector_by_paths, npda_accepts,
                     post_masses_by_paths)


class TestLeqWitness:
    def test_closed_form_validated_by_path_enumeration(self):
        m = build_leq_postpfa()
        for w in words_upto("ab", 6):
            p_a, p_r = post_masses_by_paths(m, w)
            assert p_a / (p_a + p_r) == leq_acceptance(w)

    def test_machine_matches_closed_form(self):
        m = build_leq_postpfa()
        for w in words_upto("ab", 7):
            assert run_pfa(m, w).P_a == leq_acceptance(w)

    def test_balanced_word_masses(self):
        # frozen from the path oracle: both branch families decay by 64^-2
        # on "ab", so the 3:1 initial split survives the normalization
        out = run_pfa(build_leq_postpfa(), "ab")
        assert out.p_a == RAT(3, 4) / 4096
        assert out.p_r == RAT(1, 4) / 4096
        assert out.P_a == RAT(3, 4)

    def test_members_exactly_three_quarters(self):
        m = build_leq_postpfa()
        for w in words_upto("ab", 6):
            if is_leq(w):
                assert run_pfa(m, w).P_a == RAT(3, 4)

    def test_nonmembers_below_three_thirtyfifths(self):
        m = build_leq_postpfa()
        for w in words_upto("ab", 6):
            if not is_leq(w):
                assert run_pfa(m, w).P_a <= RAT(3, 35)

    def test_conversion_never_undefined(self):
        image = postselect_to_ctc(build_leq_postpfa())
        for w in words_upto("ab", 5):
            kind = ctc_semantics(image, w).kind
            assert kind is (VerdictKind.ACCEPT if is_leq(w)
                            else VerdictKind.REJECT)


class TestPalWitness:
    def test_integer_encoding_oracle(self):
        digits = {"a": 1, "b": 2}
        m = build_lpal_postqfa()
        for w in words_upto("ab", 6):
            d = encode_positional(w, digits, 4) \
                - encode_positional(w[::-1], digits, 4)
            out = run_linear(m, w)
            assert out.P_a == ONE / (ONE + 4 * RAT(d) * RAT(d))
            assert (d == 0) == is_pal(w)
            assert enc_base4(w) == encode_positional(w, digits, 4)

    def test_amplitudes_match_path_enumeration(self):
        m = build_lpal_postqfa()
        for w in ("", "a", "ab", "aba", "abba", "babab"):
            assert linear_vector_by_paths(m, w) == _final_vector(m, w)

    def test_palindromes_certain(self):
        m = build_lpal_postqfa()
        for w in words_upto("ab", 7):
            out = run_linear(m, w)
            if is_pal(w):
                assert out.P_a == ONE
            else:
                assert out.P_a <= RAT(1, 5)
            assert out.P_a == pal_acceptance(w)


def _final_vector(spec, word):
    from ctcsim.machines import _vector_after
    return _vector_after(spec, word, None)


class TestUnionWitness:
    def test_spec_examples(self):
        m = build_union_ijk_ctc_dpda()
        v = ctc_semantics(m, "aabbc")
        assert v.kind is VerdictKind.ACCEPT
        v = ctc_semantics(m, "aabcc")
        assert v.kind is VerdictKind.ACCEPT
        v = ctc_semantics(m, "aabbbccc")
        assert v.kind is VerdictKind.REJECT
        assert str(v.stationary) == "(1/2, 1/2)"

    def test_reference_predicate_on_short_words(self):
        m = build_union_ijk_ctc_dpda()
        npda = build_union_ijk_npda()
        for w in words_upto("abc", 6):
            member = is_union_ijk(w)
            v = ctc_semantics(m, w)
            assert v.kind is (VerdictKind.ACCEPT if member
                              else VerdictKind.REJECT), w
            assert v.acceptance_min == v.acceptance_max
            assert v.acceptance_min == (1 if member else 0)
            assert npda_accepts(npda, w) == member

    def test_membership_by_counts(self):
        assert is_union_ijk("")
        assert is_union_ijk("abc")
        assert is_union_ijk("bbb")
        assert not is_union_ijk("cb")
        assert not is_union_ijk("aabbbc")
        assert is_union_ijk("aabbbcc")  # i=k even though i!=j


class TestEmission:
    def test_round_trip_through_json(self, tmp_path):
        from ctcsim import dump_machine, load_machine
        for name, (builder, _pred) in {
                "leq": (build_leq_postpfa, None),
                "pal": (build_lpal_postqfa, None),
                "union-ijk": (build_union_ijk_ctc_dpda, None)}.items():
            spec = builder()
            path = tmp_path / f"{name}.json"
            dump_machine(spec, path)
            again = load_machine(path)
            assert again == spec
