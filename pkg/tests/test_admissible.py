"""Admissible functions: bounds, enumeration, w_f words, witnesses."""

import itertools

import pytest

from wordmaps.admissible import (
    AdmissibleFunction,
    _exhaustive_witness_scan,
    admissible_count,
    build_admissible_word,
    canonical_subsets,
    distinctness_witness,
    enumerate_admissible,
    is_admissible,
)
from wordmaps.errors import EnumerationCapExceeded, NotDistinct
from wordmaps.groups import exp_profile, from_permutation_generators
from wordmaps.library import cyclic_group, quaternion_group
from wordmaps.words import (
    commutator_word,
    concat,
    evaluate,
    generator_word,
    nested_commutator_word,
    word_map_table,
    word_power,
)


def s3():
    return from_permutation_generators([(2, 1, 3), (2, 3, 1)], label="S3")


def fn(d, assignment):
    return AdmissibleFunction.from_assignment(d, assignment)


def test_canonical_subsets_order():
    assert canonical_subsets(3) == (
        (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3))
    assert canonical_subsets(0) == ()


def test_from_assignment_validation():
    f = fn(2, {(1,): 5, (2,): 0, (1, 2): 2})
    assert f.value((1,)) == 5
    assert f.value((2, 1)) == 2
    with pytest.raises(ValueError):
        fn(2, {(1,): 0, (2,): 0})
    with pytest.raises(ValueError):
        fn(1, {(1,): -1})


def test_is_admissible_examples():
    Z2 = cyclic_group(2)
    assert is_admissible(fn(1, {(1,): 1}), Z2)
    assert not is_admissible(fn(1, {(1,): 2}), Z2)  # strict bound
    G = s3()
    assert is_admissible(fn(2, {(1,): 5, (2,): 0, (1, 2): 2}), G)
    assert not is_admissible(fn(2, {(1,): 6, (2,): 0, (1, 2): 2}), G)
    assert not is_admissible(fn(2, {(1,): 5, (2,): 0, (1, 2): 3}), G)


def test_counts():
    assert admissible_count(cyclic_group(2), 1) == 2
    assert admissible_count(s3(), 2) == 108  # 6 * 6 * 3
    assert admissible_count(quaternion_group(), 2) == 32  # 4 * 4 * 2
    assert admissible_count(s3(), 0) == 1


def test_enumeration_is_exact_and_deduplicated():
    G = s3()
    fs = list(enumerate_admissible(G, 2))
    assert len(fs) == 108
    assert len({f.values for f in fs}) == 108
    profile = exp_profile(G, r_max=2)
    for f in fs:
        assert is_admissible(f, G, profile)
    # deterministic odometer order: first function all zero, last all max
    assert fs[0].values == (0, 0, 0)
    assert fs[-1].values == (5, 5, 2)

    q8 = list(enumerate_admissible(quaternion_group(), 2))
    assert len(q8) == 32


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        list(enumerate_admissible(s3(), 2, cap=50))


def test_enumerate_d0():
    fs = list(enumerate_admissible(cyclic_group(2), 0))
    assert len(fs) == 1
    assert fs[0].values == ()


def test_build_admissible_word_structure():
    x1 = generator_word(1, 2)
    x2 = generator_word(2, 2)
    assert build_admissible_word(fn(1, {(1,): 4})).syllables == ((1, 4),)
    f = fn(2, {(1,): 2, (2,): 3, (1, 2): 1})
    expected = concat(concat(word_power(x1, 2), word_power(x2, 3)),
                      commutator_word(x1, x2))
    assert build_admissible_word(f) == expected
    assert build_admissible_word(fn(2, {(1,): 0, (2,): 0, (1, 2): 0})).is_identity()


def test_build_admissible_word_factor_order():
    # r ascending outermost, lexicographic tuples inside
    f = fn(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1,
               (1, 2, 3): 1})
    factors = [generator_word(1, 3), generator_word(2, 3), generator_word(3, 3),
               nested_commutator_word([1, 2], 3), nested_commutator_word([1, 3], 3),
               nested_commutator_word([2, 3], 3), nested_commutator_word([1, 2, 3], 3)]
    expected = factors[0]
    for factor in factors[1:]:
        expected = concat(expected, factor)
    assert build_admissible_word(f) == expected


def test_witness_z2():
    Z2 = cyclic_group(2)
    f = fn(1, {(1,): 0})
    g = fn(1, {(1,): 1})
    witness = distinctness_witness(f, g, Z2)
    assert witness == (1,)
    wf, wg = build_admissible_word(f), build_admissible_word(g)
    assert evaluate(wf, Z2, witness) != evaluate(wg, Z2, witness)


def test_witness_s3_commutator_coordinate():
    G = s3()
    f = fn(2, {(1,): 0, (2,): 0, (1, 2): 1})
    g = fn(2, {(1,): 0, (2,): 0, (1, 2): 0})
    witness = distinctness_witness(f, g, G)
    a, b = witness
    assert G.commutator(a, b) != 0
    wf, wg = build_admissible_word(f), build_admissible_word(g)
    assert evaluate(wf, G, witness) != evaluate(wg, G, witness)


def test_witness_q8_power_difference():
    Q8 = quaternion_group()
    f = fn(2, {(1,): 1, (2,): 0, (1, 2): 0})
    g = fn(2, {(1,): 3, (2,): 0, (1, 2): 0})
    witness = distinctness_witness(f, g, Q8)
    assert witness[1] == 0  # identity off the disagreement subset
    assert Q8.power(witness[0], 1 - 3) != 0  # an order-4 element
    wf, wg = build_admissible_word(f), build_admissible_word(g)
    assert evaluate(wf, Q8, witness) != evaluate(wg, Q8, witness)


def test_witness_minimal_subset_rule():
    G = s3()
    # disagreement on both a singleton and the pair: the singleton wins
    f = fn(2, {(1,): 1, (2,): 0, (1, 2): 2})
    g = fn(2, {(1,): 0, (2,): 0, (1, 2): 0})
    witness = distinctness_witness(f, g, G)
    assert witness[1] == 0  # only coordinate 1 is populated


def test_witness_not_distinct():
    Z2 = cyclic_group(2)
    f = fn(1, {(1,): 1})
    with pytest.raises(NotDistinct):
        distinctness_witness(f, f, Z2)


def test_exhaustive_scan_agrees():
    G = s3()
    tup = _exhaustive_witness_scan(G, 2, 1)
    from wordmaps.groups import nested_commutator
    assert G.power(nested_commutator(G, tup), 1) != 0


def test_pairwise_distinct_word_maps_q8():
    # the full exhaustive run lives in the acceptance suite; Q8 is the
    # smaller of the two spec instances and fast enough for unit scope
    Q8 = quaternion_group()
    fs = list(enumerate_admissible(Q8, 2))
    words = [build_admissible_word(f) for f in fs]
    tables = [word_map_table(w, Q8, 2) for w in words]
    keys = {t.key() for t in tables}
    assert len(keys) == len(fs) == 32
    for i, j in itertools.combinations(range(len(fs)), 2):
        witness = distinctness_witness(fs[i], fs[j], Q8)
        assert evaluate(words[i], Q8, witness) != evaluate(words[j], Q8, witness)
