"""Dehn twist words: homology images, fiber preservation, batch agreement."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su3lab.fiber import RepPoint, commutator, fiber_residual
from su3lab.mcg import (
    ALLOWED_NEXT,
    INVERSE_INDEX,
    INVERSE_LETTER,
    LETTERS,
    TwistWord,
    apply_word,
    apply_word_stack,
    homology_action,
    is_hyperbolic,
    random_word,
    random_word_indices,
)
from su3lab.su3 import dagger, haar_random, unitarity_defect

ST_WORD = st.lists(st.sampled_from("aAbB"), min_size=1, max_size=12).map(
    lambda ls: TwistWord(tuple(ls))
)


def test_letter_tables_consistent():
    assert set(LETTERS) == set("aAbB")
    for i in range(4):
        assert INVERSE_INDEX[i] not in ALLOWED_NEXT[i]
        assert len(set(ALLOWED_NEXT[i])) == 3
        assert LETTERS[INVERSE_INDEX[i]] == INVERSE_LETTER[LETTERS[i]]


def test_homology_action_oracles():
    # Right twist then left twist: the standard hyperbolic example.
    m = homology_action(TwistWord(("a", "b")))
    assert m.tolist() == [[2, 1], [1, 1]]
    m2 = homology_action(TwistWord(("a", "b", "a")))
    assert m2.tolist() == [[2, 3], [1, 2]]
    # A twist and its inverse cancel in homology.
    m3 = homology_action(TwistWord(("a", "A")))
    assert m3.tolist() == [[1, 0], [0, 1]]


@settings(max_examples=60, deadline=None)
@given(ST_WORD)
def test_homology_action_is_unimodular(word):
    m = homology_action(word)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assert det == 1


def test_is_hyperbolic():
    assert is_hyperbolic(homology_action(TwistWord(("a", "b"))))
    assert not is_hyperbolic(homology_action(TwistWord(("a",))))  # parabolic
    assert not is_hyperbolic(np.eye(2, dtype=np.int64))
    with pytest.raises(ValueError):
        is_hyperbolic(np.array([[2, 0], [0, 1]]))  # det 2, not in the group


def test_twist_word_parsing():
    w = TwistWord.parse("abA")
    assert w.letters == ("a", "b", "A")
    assert str(w) == "abA"
    assert len(w) == 3
    with pytest.raises(ValueError):
        TwistWord.parse("abx")
    # The empty word is the identity mapping class.
    assert homology_action(TwistWord(())).tolist() == [[1, 0], [0, 1]]


def test_random_word_avoids_cancellation(rng):
    for _ in range(20):
        w = random_word(30, rng)
        assert len(w) == 30
        for cur, nxt in zip(w.letters, w.letters[1:]):
            assert nxt != INVERSE_LETTER[cur]


def test_random_word_indices_shape_and_range(rng):
    idx = random_word_indices(7, 50, rng)
    assert idx.shape == (7, 50)
    assert idx.min() >= 0 and idx.max() < 4
    for row in idx:
        for cur, nxt in zip(row, row[1:]):
            assert nxt != INVERSE_INDEX[cur]


def test_apply_word_single_letters(rng):
    a, b = haar_random(rng), haar_random(rng)
    p = RepPoint.from_pair(a, b)
    qa = apply_word(TwistWord(("a",)), p)
    assert np.abs(qa.b - b @ a).max() < 1e-12
    assert np.abs(qa.a - a).max() < 1e-12
    qA = apply_word(TwistWord(("A",)), p)
    assert np.abs(qA.b - b @ dagger(a)).max() < 1e-12
    qb = apply_word(TwistWord(("b",)), p)
    assert np.abs(qb.a - a @ b).max() < 1e-12
    assert np.abs(qb.b - b).max() < 1e-12
    qB = apply_word(TwistWord(("B",)), p)
    assert np.abs(qB.a - a @ dagger(b)).max() < 1e-12


def test_apply_word_preserves_fiber(rng):
    p = RepPoint.from_pair(haar_random(rng), haar_random(rng))
    w = random_word(400, rng)
    q = apply_word(w, p)
    assert q.residual() < 1e-11
    assert unitarity_defect(q.a) < 1e-12
    assert unitarity_defect(q.b) < 1e-12


def test_inverse_word_undoes(rng):
    p = RepPoint.from_pair(haar_random(rng), haar_random(rng))
    w = TwistWord.parse("abAB")
    back = TwistWord(tuple(INVERSE_LETTER[l] for l in reversed(w.letters)))
    q = apply_word(back, apply_word(w, p))
    assert np.abs(q.a - p.a).max() < 1e-11
    assert np.abs(q.b - p.b).max() < 1e-11


def test_apply_word_stack_matches_single(rng):
    a = haar_random(rng, size=6)
    b = haar_random(rng, size=6)
    c = commutator(a, b)
    idx = random_word_indices(6, 60, rng)
    a2, b2 = apply_word_stack(idx, a, b)
    for i in range(6):
        w = TwistWord(tuple(LETTERS[j] for j in idx[i]))
        q = apply_word(w, RepPoint.from_pair(a[i], b[i]))
        assert np.abs(a2[i] - q.a).max() < 1e-10
        assert np.abs(b2[i] - q.b).max() < 1e-10
    assert fiber_residual(a2, b2, c).max() < 1e-11


def test_apply_word_stack_long_word_residual(rng):
    a = haar_random(rng, size=8)
    b = haar_random(rng, size=8)
    c = commutator(a, b)
    idx = random_word_indices(8, 1000, rng)
    a2, b2 = apply_word_stack(idx, a, b)
    assert fiber_residual(a2, b2, c).max() < 1e-10
