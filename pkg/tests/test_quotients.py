import numpy as np
import pytest

from surfbundle.mcg import TwistWord, family_word
from surfbundle.presentation import FiberType, Presentation, bundle_presentation
from surfbundle.quotients import (
    QuotientWitness,
    affine_witness,
    cycle_notation,
    evaluate,
    find_witness,
    has_nonabelian_image,
    integer_weights,
    is_homomorphism,
    nonabelian_witness,
    primes,
)
from surfbundle.simplify import tietze_eliminate

FREE2 = Presentation.parse(["x", "y"], [])
ABELIAN = Presentation.parse(["x", "y"], ["x y x^-1 y^-1"])


def test_free_group_witness_in_s3():
    w = nonabelian_witness(FREE2, 3)
    assert w.group == "S3"
    # first nonabelian pair in lexicographic order of one-line images
    assert w.cycles() == {"x": "(2 3)", "y": "(1 2)"}
    assert is_homomorphism(FREE2, w) and has_nonabelian_image(w)


def test_abelian_group_has_no_witness():
    for d in (3, 4, 5):
        assert nonabelian_witness(ABELIAN, d) is None
    assert affine_witness(ABELIAN) is None
    assert find_witness(ABELIAN) is None


def test_degree_cap():
    with pytest.raises(ValueError):
        nonabelian_witness(FREE2, 7)


def test_cyclic_group_has_no_witness():
    assert nonabelian_witness(Presentation.parse(["x"], ["x^5"]), 5) is None


# found by exhaustive enumeration of S3 images, generators in id order
FAMILY_FIXTURE = {"a1": "(1 2 3)", "a2": "(1 3 2)", "a3": "(1 3 2)", "a4": "(1 3 2)", "t": "(2 3)"}


def test_family_bundle_fixture():
    p = bundle_presentation(family_word((1, 1, 1, 1), 1), FiberType.CLOSED)
    w = nonabelian_witness(p, 5)
    assert w is not None and w.degree <= 5
    assert w.cycles() == FAMILY_FIXTURE
    assert is_homomorphism(p, w)


def test_affine_witness_for_h1_z():
    # H1 = Z and no nonabelian quotient needed beyond AGL(1, p)
    p = tietze_eliminate(bundle_presentation(TwistWord.parse("D1 D2 D3 D4"))).final
    w = affine_witness(p)
    assert w is not None and w.group.startswith("AGL")
    assert is_homomorphism(p, w) and has_nonabelian_image(w)


def test_affine_full_character_search():
    # finite abelianization: no weights, so the exhaustive character loop runs
    p = Presentation.parse(["x", "y"], ["x^2", "y^3", "x y x^-1 y"])
    assert integer_weights(p) is None
    w = affine_witness(p)
    assert w is not None and is_homomorphism(p, w)


def test_integer_weights():
    assert integer_weights(FREE2) == (1, 0)
    p = Presentation.parse(["x", "y"], ["x^2 y^-3"])
    assert integer_weights(p) in ((3, 2), (-3, -2))
    assert integer_weights(Presentation.parse(["x"], ["x"])) is None


def test_evaluate_composition_order():
    a = np.array([1, 0, 2])
    b = np.array([0, 2, 1])
    images = {1: a, 2: b}
    assert list(evaluate((1, 2), images)) == list(a[b])
    assert list(evaluate((1, -1), images)) == [0, 1, 2]


def test_invalid_witness_detected():
    bogus = QuotientWitness("S3", 3, ((1, 0, 2), (0, 2, 1)), ("x", "y"))
    assert not is_homomorphism(ABELIAN, bogus)
    assert has_nonabelian_image(bogus)


def test_cycle_notation():
    assert cycle_notation((0, 1, 2)) == "()"
    assert cycle_notation((1, 2, 0, 4, 3)) == "(1 2 3)(4 5)"


def test_primes():
    assert list(primes(20)) == [2, 3, 5, 7, 11, 13, 17, 19]


def test_single_generator_has_no_witness():
    p = Presentation.parse(["x"], [])
    assert nonabelian_witness(p) is None
    assert affine_witness(p) is None
