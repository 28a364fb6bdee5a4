"""Word engine: reduction, free-group ops, evaluation, tables, parsing."""

import random

import numpy as np
import pytest

from wordmaps.errors import TableCapExceeded, VariableOutOfRange, WordSyntaxError
from wordmaps.groups import from_permutation_generators, nested_commutator
from wordmaps.library import cyclic_group, quaternion_group
from wordmaps.words import (
    Word,
    commutator_word,
    concat,
    evaluate,
    generator_word,
    identity_word,
    invert,
    nested_commutator_word,
    parse_word,
    reduce_word,
    word_map_table,
    word_power,
)


def s3():
    return from_permutation_generators([(2, 1, 3), (2, 3, 1)], label="S3")


def test_reduce_examples():
    assert reduce_word([(1, 1), (1, -1)]).is_identity()
    assert reduce_word([(1, 2), (1, 3)]).syllables == ((1, 5),)
    assert reduce_word([(1, 1), (2, 1), (2, -1), (1, -1)]).is_identity()
    assert reduce_word([(1, 0), (2, 0)]).is_identity()


def test_reduce_confluence():
    rng = random.Random(0)
    for _ in range(200):
        raw = [(rng.randint(1, 3), rng.randint(-2, 2)) for _ in range(12)]
        whole = reduce_word(raw, d=3)
        cut = rng.randint(0, len(raw))
        split = concat(reduce_word(raw[:cut], d=3), reduce_word(raw[cut:], d=3))
        assert whole == split
        assert reduce_word(whole.syllables, d=3) == whole


def test_word_validation():
    with pytest.raises(VariableOutOfRange):
        reduce_word([(3, 1)], d=2)
    with pytest.raises(VariableOutOfRange):
        Word(d=1, syllables=((2, 1),))
    with pytest.raises(ValueError):
        Word(d=1, syllables=((1, 0),))
    with pytest.raises(ValueError):
        Word(d=2, syllables=((1, 1), (1, 2)))


def test_concat_invert_examples():
    x1 = generator_word(1, 2)
    x2 = generator_word(2, 2)
    assert concat(x1, invert(x1)).is_identity()
    assert invert(concat(x1, x2)).syllables == ((2, -1), (1, -1))
    assert concat(concat(x1, x2), invert(x2)) == x1


def test_commutator_word_examples():
    x1 = generator_word(1, 2)
    x2 = generator_word(2, 2)
    assert commutator_word(x1, x1).is_identity()
    assert commutator_word(x1, x2).syllables == \
        ((1, -1), (2, -1), (1, 1), (2, 1))
    assert commutator_word(identity_word(2), x2).is_identity()


def test_nested_commutator_word():
    assert nested_commutator_word([1]).syllables == ((1, 1),)
    assert nested_commutator_word([1, 2]).syllables == \
        ((1, -1), (2, -1), (1, 1), (2, 1))
    w = nested_commutator_word([1, 2, 3])
    expected = commutator_word(nested_commutator_word([1, 2], d=3),
                               generator_word(3, 3))
    assert w == expected
    assert w.syllable_count() == 10


def test_word_power():
    x1 = generator_word(1, 1)
    assert word_power(x1, 5).syllables == ((1, 5),)
    assert word_power(x1, -3).syllables == ((1, -3),)
    assert word_power(x1, 0).is_identity()
    c = commutator_word(generator_word(1, 2), generator_word(2, 2))
    assert word_power(c, 2) == concat(c, c)


def test_evaluate_examples():
    G = s3()
    for args in [(0,), (3,)]:
        assert evaluate(identity_word(1), G, args) == 0
    a = G.element_names.index("(1 2 3)")
    sq = evaluate(parse_word("x1^2", d=1), G, (a,))
    assert G.element_names[sq] == "(1 3 2)"
    with pytest.raises(ValueError):
        evaluate(generator_word(1, 1), G, (0, 1))


def test_evaluate_agrees_with_nested_commutator():
    G = quaternion_group()
    rng = random.Random(2)
    for _ in range(100):
        r = rng.randint(1, 4)
        gs = [rng.randrange(G.order) for _ in range(r)]
        w = nested_commutator_word(list(range(1, r + 1)), d=r)
        assert evaluate(w, G, gs) == nested_commutator(G, gs)


def test_evaluate_is_homomorphic():
    G = s3()
    rng = random.Random(3)
    for _ in range(100):
        u = reduce_word([(rng.randint(1, 2), rng.randint(-3, 3))
                         for _ in range(6)], d=2)
        v = reduce_word([(rng.randint(1, 2), rng.randint(-3, 3))
                         for _ in range(6)], d=2)
        args = (rng.randrange(6), rng.randrange(6))
        assert evaluate(concat(u, v), G, args) == \
            G.mul(evaluate(u, G, args), evaluate(v, G, args))
        assert evaluate(invert(u), G, args) == \
            G.inverse(evaluate(u, G, args))


def test_word_map_table_small():
    Z2 = cyclic_group(2)
    empty = word_map_table(identity_word(1), Z2, 1)
    assert empty.values.tolist() == [0, 0]
    proj = word_map_table(generator_word(1, 1), Z2, 1)
    assert proj.values.tolist() == [0, 1]
    addition = word_map_table(parse_word("x1 x2"), Z2, 2)
    # index = g1 + 2*g2, value = g1 + g2 mod 2
    assert addition.values.tolist() == [0, 1, 1, 0]


def test_word_map_table_matches_pointwise_evaluate():
    G = s3()
    rng = random.Random(4)
    for _ in range(10):
        w = reduce_word([(rng.randint(1, 2), rng.randint(-4, 4))
                         for _ in range(8)], d=2)
        table = word_map_table(w, G, 2)
        for idx in range(36):
            args = (idx % 6, idx // 6)
            assert int(table.values[idx]) == evaluate(w, G, args)
            assert table.value_at(args) == evaluate(w, G, args)


def test_word_map_table_promotion_and_equality():
    Z2 = cyclic_group(2)
    t1 = word_map_table(generator_word(1, 1), Z2, 2)
    t2 = word_map_table(parse_word("x1 x2 x2^-1", d=2), Z2, 2)
    assert t1 == t2
    assert t1.key() == t2.key()
    t3 = word_map_table(generator_word(2, 2), Z2, 2)
    assert t1 != t3


def test_word_map_table_cap():
    G = s3()
    with pytest.raises(TableCapExceeded):
        word_map_table(generator_word(1, 1), G, 4, table_cap=100)


def test_with_arity():
    w = parse_word("x1 x2")
    assert w.with_arity(5).d == 5
    with pytest.raises(VariableOutOfRange):
        w.with_arity(1)


def test_parse_word():
    w = parse_word("x1^2 [x1, x2]^3")
    expected = concat(word_power(generator_word(1, 2), 2),
                      word_power(commutator_word(generator_word(1, 2),
                                                 generator_word(2, 2)), 3))
    assert w == expected
    assert parse_word("[[x1,x2],x3]") == nested_commutator_word([1, 2, 3])
    assert parse_word("").is_identity()
    assert parse_word("x1 x1^-1").is_identity()
    assert parse_word("x2^-3", d=4).d == 4
    assert str(parse_word("x1^2 x2")) == "x1^2 x2"


def test_parse_word_errors():
    for bad in ("y1", "x1^", "[x1 x2]", "[x1, x2", "x1]", "x0 &"):
        with pytest.raises(WordSyntaxError):
            parse_word(bad)
    with pytest.raises(VariableOutOfRange):
        parse_word("x5", d=2)


def test_table_values_frozen():
    Z2 = cyclic_group(2)
    t = word_map_table(generator_word(1, 1), Z2, 1)
    with pytest.raises(ValueError):
        t.values[0] = 1
