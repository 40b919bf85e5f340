import pytest

from quiddity import oracle
from quiddity.counter import (
    dp_count,
    dp_count_all_targets,
    dp_vector,
    dp_vector_sequence,
)
from quiddity.modring import Modulus
from quiddity.oracle import NONUNIT, SetSpec, UNIT, fixed
from quiddity.sl2 import (
    CapExceeded,
    TARGET_NAMES,
    elementary,
    identity,
    neg_identity,
    target_by_name,
)

MOD8 = Modulus(8)


def test_reference_counts():
    assert dp_count(SetSpec(5, identity(MOD8))) == 80
    assert dp_count(SetSpec(7, identity(MOD8))) == 5376
    assert dp_count(SetSpec(6, identity(MOD8), {2: UNIT})) == 320


def test_all_targets_reads_one_vector():
    got = dp_count_all_targets(5, MOD8, {2: UNIT})
    assert got["s"] == 32
    assert got["neg-s"] == 32
    assert got["id"] == got["neg-id"] == got["t"] == got["neg-t"] == 48
    assert dp_count_all_targets(8, MOD8, {2: UNIT})["id"] == 21504
    assert dp_count_all_targets(4, MOD8, {2: UNIT})["s"] == 8


def test_single_letter_vector():
    vec = dp_vector(1, MOD8)
    for a in range(8):
        assert vec.at(elementary(a, MOD8)) == 1
    assert vec.total() == 8


def test_two_letter_vector_pins_neg_id():
    assert dp_vector(2, MOD8).at(neg_identity(MOD8)) == 1


def test_conservation():
    for n in (3, 4, 8, 12):
        mod = Modulus(n)
        for size in range(1, 8):
            assert dp_vector(size, mod).total() == n ** size


def test_sequence_snapshots_match_single_runs():
    seq = dp_vector_sequence(5, MOD8, {2: UNIT})
    assert len(seq) == 6
    assert seq[0].counts[0] == 1 and seq[0].total() == 1
    for size in range(2, 6):
        assert seq[size].counts == dp_vector(size, MOD8, {2: UNIT}).counts


CONSTRAINT_CASES = [None, {2: UNIT}, {2: NONUNIT}, {2: fixed(1)}]


@pytest.mark.parametrize("n,max_size", [(3, 10), (4, 10), (8, 6)])
def test_dp_matches_oracle(n, max_size):
    mod = Modulus(n)
    for size in range(2, max_size + 1):
        for cons in CONSTRAINT_CASES:
            vec = dp_vector(size, mod, cons)
            for name in ("id", "neg-id", "s"):
                spec = SetSpec(size, target_by_name(name, mod), cons)
                method = "mitm" if size >= 4 else "naive"
                assert vec.at(spec.target) == oracle.count(spec, method)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_two_term_recursion_on_dp_values(m):
    mod = Modulus(1 << m)
    seq = dp_vector_sequence(12, mod, {2: UNIT})
    for name in TARGET_NAMES:
        target = target_by_name(name, mod)
        series = [vec.at(target) for vec in seq]
        for size in range(5, 13):
            expected = 2 ** (m - 1) * series[size - 1] + 2 ** (2 * m - 1) * series[size - 2]
            assert series[size] == expected


def test_negation_symmetry_for_odd_sizes():
    for n in (3, 4, 8, 12):
        mod = Modulus(n)
        for size in (3, 5, 7, 9):
            vec = dp_vector(size, mod)
            assert vec.at(identity(mod)) == vec.at(neg_identity(mod))


def test_fixed_minus_one_transfers_to_smaller_size():
    # Pinning the second entry to -1 mirrors the full count one size down
    # with the negated target.
    for n in (4, 8):
        mod = Modulus(n)
        for size in range(4, 10):
            pinned = dp_vector(size, mod, {2: fixed(-1)})
            plain = dp_vector(size - 1, mod)
            for name in TARGET_NAMES:
                target = target_by_name(name, mod)
                assert pinned.at(target) == plain.at(-target)


def test_cap_is_enforced():
    big = Modulus((1 << 16) + 2)
    with pytest.raises(CapExceeded):
        dp_count(SetSpec(3, identity(big)))
