import itertools

import pytest
from hypothesis import given, settings

from surfbundle.mcg import (
    A1, A2, A3, A4, IDENTITY, SURFACE_RELATOR,
    SurfaceAutomorphism, TwistWord, WordError,
    apply_automorphism, apply_twist, are_conjugate, automorphism_of, cyclic_reduce,
    family_word, format_group_word, free_reduce, invert,
)
from conftest import fiber_words, twist_words

EPS = list(itertools.product((1, -1), repeat=4))


def reductions_oracle(word):
    """Every irreducible word reachable by cancelling adjacent inverse pairs in any order."""
    seen, stack, results = {tuple(word)}, [tuple(word)], set()
    while stack:
        w = stack.pop()
        moves = [k for k in range(len(w) - 1) if w[k] == -w[k + 1]]
        if not moves:
            results.add(w)
        for k in moves:
            nxt = w[:k] + w[k + 2:]
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return results


class TestFreeReduce:
    def test_cancels_to_empty(self):
        assert free_reduce((A1, -A1)) == ()

    def test_interior_cancellation(self):
        assert free_reduce((A1, A2, -A2, A3)) == (A1, A3)

    def test_overlapping_cancellation(self):
        assert reductions_oracle((A1, -A2, A2, -A2)) == {(A1, -A2)}
        assert free_reduce((A1, -A2, A2, -A2)) == (A1, -A2)

    def test_matches_oracle_on_all_short_words(self):
        letters = (1, -1, 2, -2)
        for n in range(7):
            for w in itertools.product(letters, repeat=n):
                assert reductions_oracle(w) == {free_reduce(w)}

    @given(fiber_words)
    def test_idempotent_and_shortening(self, w):
        r = free_reduce(w)
        assert free_reduce(r) == r
        assert len(r) <= len(w)

    def test_cyclic_reduce(self):
        assert cyclic_reduce((A2, A1, A3, -A2)) == (A1, A3)
        assert cyclic_reduce((A1, -A1)) == ()


class TestApplyTwist:
    def test_table_entries(self):
        assert apply_twist(1, 1, A2) == (A2, A1)
        assert apply_twist(3, 1, A4) == (-A3, A1, A4)
        assert apply_twist(1, 1, A1) == (A1,)
        assert apply_twist(2, 1, A1) == (A1, -A2)
        assert apply_twist(2, -1, A1) == (A1, A2)
        assert apply_twist(3, -1, A2) == (-A1, A3, A2)
        assert apply_twist(4, 1, A3) == (A3, A4)
        assert apply_twist(5, 1, A4) == (A4, -A3)
        assert apply_twist(5, -1, A4) == (A4, A3)

    def test_fixed_generators(self):
        moved = {1: {A2}, 2: {A1}, 3: {A2, A4}, 4: {A3}, 5: {A4}}
        for i in range(1, 6):
            for g in (A1, A2, A3, A4):
                if g not in moved[i]:
                    assert apply_twist(i, 1, g) == (g,)
                    assert apply_twist(i, -1, g) == (g,)

    @pytest.mark.parametrize("i", range(1, 6))
    def test_inverse_twists_cancel(self, i):
        for e in (1, -1):
            plus = SurfaceAutomorphism(tuple(apply_twist(i, e, g) for g in (A1, A2, A3, A4)))
            minus = SurfaceAutomorphism(tuple(apply_twist(i, -e, g) for g in (A1, A2, A3, A4)))
            assert plus.compose(minus).is_identity()

    @pytest.mark.parametrize("bad", [(0, 1, A1), (6, 1, A1), (1, 2, A1), (1, 1, 5)])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(WordError):
            apply_twist(*bad)


class TestAutomorphisms:
    def test_homomorphic_extension(self):
        phi = automorphism_of(TwistWord.parse("D2"))
        assert apply_automorphism(phi, (A1, A3)) == (A1, -A2, A3)

    def test_identity(self):
        assert apply_automorphism(IDENTITY, (A1, A2, -A2, A4)) == (A1, A4)

    def test_iterated_d5(self):
        phi = automorphism_of(TwistWord.parse("D5^3"))
        # by hand: a4 -> a4 a3^-1 -> a4 a3^-2 -> a4 a3^-3
        assert phi.image(A4) == (A4, -A3, -A3, -A3)

    def test_rejects_stable_letter(self):
        with pytest.raises(WordError):
            apply_automorphism(IDENTITY, (A1, 5))

    @pytest.mark.parametrize("eps", EPS)
    @pytest.mark.parametrize("n", [-3, 0, 4])
    def test_family_image_of_a1(self, eps, n):
        phi = automorphism_of(family_word(eps, n))
        assert phi.image(A1) == (A1, -eps[1] * A2)

    @pytest.mark.parametrize("eps", EPS)
    @pytest.mark.parametrize("n", [-2, 0, 5])
    def test_family_single_next_generator(self, eps, n):
        # image of a_i has exactly one a_{i+1}^{+-1} and nothing beyond it
        phi = automorphism_of(family_word(eps, n))
        for i in (1, 2, 3):
            img = phi.image(i)
            assert sum(1 for x in img if abs(x) == i + 1) == 1
            assert all(abs(x) <= i + 1 for x in img)

    def test_empty_word_is_identity(self):
        assert automorphism_of(TwistWord()).is_identity()

    def test_cancelling_syllables(self):
        assert automorphism_of(TwistWord.normalized([(1, 1), (1, -1)])).is_identity()

    def test_composition_order(self):
        # leftmost syllable is applied last
        d1, d2 = automorphism_of(TwistWord.parse("D1")), automorphism_of(TwistWord.parse("D2"))
        assert automorphism_of(TwistWord.parse("D2 D1")) == d2.compose(d1)
        assert automorphism_of(TwistWord.parse("D2 D1")).image(A2) == d2((A2, A1))

    @settings(max_examples=300)
    @given(twist_words())
    def test_relator_preserved_up_to_conjugacy(self, w):
        image = automorphism_of(w)(SURFACE_RELATOR)
        assert are_conjugate(image, SURFACE_RELATOR)

    @settings(max_examples=300)
    @given(twist_words(), twist_words())
    def test_word_times_inverse_is_identity(self, u, v):
        w = u * v
        assert automorphism_of(w * w.inverse()).is_identity()
        assert automorphism_of(w).compose(automorphism_of(w.inverse())).is_identity()

    @given(twist_words(max_len=8), fiber_words, fiber_words)
    def test_homomorphism(self, w, u, v):
        phi = automorphism_of(w)
        assert phi(u + v) == free_reduce(phi(u) + phi(v))
        assert phi(invert(u)) == invert(phi(u))


class TestTwistWord:
    def test_parse_and_format(self):
        w = TwistWord.parse("D1^2 D2^-1 D3")
        assert w.syllables == ((1, 2), (2, -1), (3, 1))
        assert str(w) == "D1^2 D2^-1 D3"
        assert len(w) == 4

    def test_parse_merges_runs(self):
        assert TwistWord.parse("D1 D1 D2 D2^-1") == TwistWord(((1, 2),))

    @pytest.mark.parametrize("bad", ["D9", "D0", "D1^0", "D1^", "X1", "D1^a", "d1", "D1^-"])
    def test_parse_rejects(self, bad):
        with pytest.raises(WordError):
            TwistWord.parse(bad)

    def test_parse_error_quotes_token(self):
        with pytest.raises(WordError, match="D9"):
            TwistWord.parse("D1 D9")

    def test_invariants_enforced(self):
        with pytest.raises(WordError):
            TwistWord(((1, 1), (1, 2)))
        with pytest.raises(WordError):
            TwistWord(((1, 0),))

    def test_family_word(self):
        assert str(family_word((1, 1, 1, 1), 0)) == "D2 D1 D3 D4"
        assert str(family_word((-1, 1, -1, -1), 2)) == "D2 D1^-1 D3^-1 D4^-1 D5^2"
        for n in range(-6, 7):
            assert len(family_word((1, 1, 1, 1), n)) == 4 + abs(n)

    def test_family_word_rejects_bad_eps(self):
        with pytest.raises(WordError):
            family_word((1, 0, 1, 1), 1)

    def test_format_group_word(self):
        assert format_group_word((A1, -A3, 5)) == "a1 a3^-1 t"
        assert format_group_word(()) == "1"
