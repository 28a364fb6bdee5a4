"""Formal commutators, Witt counts, Hall bases, normal forms."""

import itertools
import random

import pytest

from wordmaps.errors import ClassOutOfSupportedRange, EnumerationCapExceeded
from wordmaps.groups import unitriangular_group
from wordmaps.nilpotent import (
    FormalCommutator,
    NormalForm,
    catalan,
    commutator_as_word,
    count_formal_commutators,
    enumerate_formal_commutators,
    evaluate_normal_form,
    formal_commutator_count,
    hall_basis,
    leaf,
    max_leaf,
    normal_form,
    normal_form_to_word,
    pair,
    witt_count,
)
from wordmaps.words import (
    commutator_word,
    concat,
    evaluate,
    generator_word,
    parse_word,
    reduce_word,
)


def brute_force_aperiodic_necklaces(d, w):
    """Independent oracle for witt_count: count rotation classes of aperiodic
    strings of length w over d letters."""
    seen = set()
    count = 0
    for s in itertools.product(range(d), repeat=w):
        if s in seen:
            continue
        rotations = {s[k:] + s[:k] for k in range(w)}
        seen |= rotations
        if len(rotations) == w:  # aperiodic
            count += 1
    return count


def test_formal_commutator_structure():
    a = leaf(1)
    b = leaf(2)
    assert a.weight == 1 and a.is_leaf()
    c = pair(pair(b, a), a)
    assert c.weight == 3
    assert str(c) == "[[2,1],1]"
    assert max_leaf(c) == 2
    assert pair(a, b) != pair(b, a)  # syntactic equality
    with pytest.raises(ValueError):
        leaf(0)


def test_catalan_values():
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]


def test_enumeration_counts():
    assert [str(f) for f in enumerate_formal_commutators(2, 1)] == ["1", "2"]
    assert count_formal_commutators(2, 2) == 6
    assert count_formal_commutators(2, 3) == 22
    assert count_formal_commutators(3, 3) == 3 + 9 + 2 * 27
    for d in range(0, 5):
        assert count_formal_commutators(d, 1) == d


def test_enumeration_is_deduplicated_and_ordered():
    fcs = enumerate_formal_commutators(3, 3)
    assert len(set(fcs)) == len(fcs)
    weights = [fc.weight for fc in fcs]
    assert weights == sorted(weights)
    assert all(fc.weight <= 3 for fc in fcs)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_formal_commutators(4, 5, cap=100)


def test_count_polynomial_degree():
    # c-th finite difference in d constant and nonzero, (c+1)-th zero
    for c in range(1, 6):
        counts = [formal_commutator_count(d, c) for d in range(c + 3)]
        diffs = counts
        for _ in range(c):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        assert diffs and all(x == diffs[0] for x in diffs)
        assert diffs[0] != 0
        final = [b - a for a, b in zip(diffs, diffs[1:])]
        assert all(x == 0 for x in final)


def test_witt_count_examples():
    for d in range(0, 6):
        assert witt_count(d, 1) == d
    assert witt_count(2, 2) == 1
    assert witt_count(2, 3) == 2
    assert witt_count(3, 2) == 3


def test_witt_count_against_necklace_oracle():
    for d in range(0, 5):
        for w in range(1, 5):
            assert witt_count(d, w) == brute_force_aperiodic_necklaces(d, w), (d, w)


def test_hall_basis_small():
    basis = hall_basis(2, 1)
    assert [str(fc) for fc in basis.commutators] == ["1", "2"]
    basis = hall_basis(2, 2)
    assert [str(fc) for fc in basis.commutators] == ["1", "2", "[2,1]"]
    assert basis.size == 3
    basis = hall_basis(2, 3)
    assert basis.size == 5
    assert [str(fc) for fc in basis.commutators[3:]] == ["[[2,1],1]", "[[2,1],2]"]


def test_hall_basis_weights_match_witt():
    for d in range(0, 5):
        for c in range(1, 5):
            basis = hall_basis(d, c)
            for w in range(1, c + 1):
                assert len(basis.entries_of_weight(w)) == witt_count(d, w)
            assert basis.size == sum(witt_count(d, w) for w in range(1, c + 1))


def test_hall_basis_size_bounded_by_formal_count():
    for d in range(0, 5):
        for c in range(1, 5):
            assert hall_basis(d, c).size <= formal_commutator_count(d, c)


def test_hall_basis_entries_are_basic():
    basis = hall_basis(3, 4)
    pos = basis.position
    for fc in basis.commutators:
        if fc.is_leaf():
            continue
        assert fc.left in basis and fc.right in basis
        assert pos(fc.right) < pos(fc.left)
        if not fc.left.is_leaf():
            assert pos(fc.left.right) <= pos(fc.right)


def test_hall_basis_cap():
    with pytest.raises(EnumerationCapExceeded):
        hall_basis(10, 4, cap=50)


def test_commutator_as_word():
    assert commutator_as_word(leaf(1)).syllables == ((1, 1),)
    w = commutator_as_word(pair(leaf(2), leaf(1)))
    assert w == commutator_word(generator_word(2, 2), generator_word(1, 2))
    assert w.syllables == ((2, -1), (1, -1), (2, 1), (1, 1))
    deep = commutator_as_word(pair(pair(leaf(2), leaf(1)), leaf(1)))
    assert deep.syllable_count() == 10


def test_normal_form_single_generator():
    for a in (0, 1, 7, -4, 123456789):
        nf = normal_form(parse_word(f"x1^{a}", d=2), 2, 3)
        assert nf.exponents == (a, 0, 0, 0, 0)


def test_normal_form_commutator_dies_in_abelian_quotient():
    nf = normal_form(parse_word("[x1, x2]"), 2, 1)
    assert nf.exponents == (0, 0)


def test_normal_form_x2_x1():
    nf = normal_form(parse_word("x2 x1"), 2, 2)
    assert nf.exponents == (1, 1, 1)
    # spec-level verification: x2 x1 = x1 x2 [x2, x1] holds in every group;
    # check it exhaustively in unitriangular groups of class 2
    lhs = parse_word("x2 x1")
    rhs = parse_word("x1 x2 [x2, x1]")
    for p in (2, 3, 5):
        G = unitriangular_group(3, p)
        for a in range(G.order):
            for b in range(G.order):
                assert evaluate(lhs, G, (a, b)) == evaluate(rhs, G, (a, b))


def test_normal_form_to_word_examples():
    basis = hall_basis(2, 2)
    zero = NormalForm(basis, (0, 0, 0))
    assert normal_form_to_word(zero).is_identity()
    nf = NormalForm(basis, (1, 1, 1))
    word = normal_form_to_word(nf)
    assert word == parse_word("x1 x2 [x2, x1]")
    # x1 x2 x2^-1 x1^-1 x2 x1 reduces to x2 x1
    assert word == parse_word("x2 x1")


def test_normal_form_round_trip():
    rng = random.Random(5)
    for d, c in [(1, 3), (2, 2), (2, 3), (3, 3)]:
        basis = hall_basis(d, c)
        for _ in range(25):
            exps = tuple(rng.randint(-5, 5) for _ in range(basis.size))
            nf = NormalForm(basis, exps)
            back = normal_form(normal_form_to_word(nf), d, c)
            assert back.exponents == exps


def test_normal_form_homomorphism_certificate():
    rng = random.Random(6)
    for _ in range(30):
        d, c = rng.choice([(2, 2), (2, 3), (3, 2)])
        u = reduce_word([(rng.randint(1, d), rng.randint(-3, 3))
                         for _ in range(8)], d=d)
        v = reduce_word([(rng.randint(1, d), rng.randint(-3, 3))
                         for _ in range(8)], d=d)
        direct = normal_form(concat(u, v), d, c)
        rebuilt = normal_form(concat(
            normal_form_to_word(normal_form(u, d, c)),
            normal_form_to_word(normal_form(v, d, c))), d, c)
        assert direct == rebuilt


def test_normal_form_sound_in_unitriangular():
    rng = random.Random(7)
    groups = {(c, p): unitriangular_group(c + 1, p)
              for c in (1, 2, 3) for p in (2, 3)}
    for _ in range(40):
        d = rng.randint(1, 3)
        c = rng.randint(1, 3)
        w = reduce_word([(rng.randint(1, d), rng.randint(-3, 3))
                         for _ in range(rng.randint(0, 12))], d=d)
        nf = normal_form(w, d, c)
        for p in (2, 3):
            G = groups[(c, p)]
            for _ in range(10):
                args = [rng.randrange(G.order) for _ in range(d)]
                assert evaluate(w, G, args) == evaluate_normal_form(nf, G, args)


def test_evaluate_normal_form_matches_materialized_word():
    rng = random.Random(8)
    G = unitriangular_group(3, 3)
    basis = hall_basis(2, 2)
    for _ in range(20):
        exps = tuple(rng.randint(-4, 4) for _ in range(basis.size))
        nf = NormalForm(basis, exps)
        word = normal_form_to_word(nf)
        for _ in range(5):
            args = [rng.randrange(G.order) for _ in range(2)]
            assert evaluate(word, G, args) == evaluate_normal_form(nf, G, args)


def test_normal_form_d0_and_validation():
    nf = normal_form(parse_word(""), 0, 2)
    assert nf.exponents == ()
    with pytest.raises(ValueError):
        normal_form(parse_word("x1"), 1, 0)
    with pytest.raises(ValueError):
        NormalForm(hall_basis(2, 2), (1, 2))


def test_class_limit():
    with pytest.raises(ClassOutOfSupportedRange):
        normal_form(parse_word("x1"), 1, 5)
    with pytest.warns(UserWarning):
        nf = normal_form(parse_word("x1^3"), 1, 5, class_limit=6)
    assert nf.exponents[0] == 3


def test_huge_exponents_stay_cheap():
    w = parse_word("x1^123456789123456789 x2^-987654321987654321")
    nf = normal_form(w, 2, 2)
    assert nf.exponents[0] == 123456789123456789
    assert nf.exponents[1] == -987654321987654321
    # weight-2 exponent is the product-free: no crossing, so zero
    assert nf.exponents[2] == 0
    w2 = concat(parse_word("x2^1000000"), parse_word("x1^1000000"))
    nf2 = normal_form(w2, 2, 2)
    assert nf2.exponents == (1000000, 1000000, 1000000 ** 2)
