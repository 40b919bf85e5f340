import pytest

from helpers import euler_phi
from quiddity.modring import Modulus, NotAUnit, Residue, nonunits_of, units_of


@pytest.mark.parametrize("n,expected", [
    (2, None), (3, None), (4, 2), (6, None), (8, 3), (12, None), (16, 4), (1024, 10),
])
def test_two_adic_detection(n, expected):
    assert Modulus(n).two_adic == expected


@pytest.mark.parametrize("bad", [1, 0, -4])
def test_modulus_rejects_small(bad):
    with pytest.raises(ValueError):
        Modulus(bad)


def test_residues_are_canonical():
    mod = Modulus(8)
    for z in range(-20, 20):
        for k in (-3, -1, 0, 1, 5):
            assert Residue(z, mod) == Residue(z + k * 8, mod)
            assert 0 <= Residue(z + k * 8, mod).value < 8


def test_unit_detection():
    mod8, mod4 = Modulus(8), Modulus(4)
    assert Residue(3, mod8).is_unit
    assert not Residue(6, mod8).is_unit
    assert not Residue(0, mod4).is_unit


def test_inverse_examples():
    mod8 = Modulus(8)
    assert Residue(3, mod8).inverse() == Residue(3, mod8)
    assert Residue(1, mod8).inverse() == Residue(1, mod8)
    assert Residue(5, mod8).inverse() == Residue(5, mod8)


def test_inverse_round_trip():
    for n in (4, 8, 9, 12, 16, 25, 1024):
        mod = Modulus(n)
        for r in units_of(mod):
            assert (r * r.inverse()).value == 1
            assert r.inverse().inverse() == r


def test_inverse_of_nonunit_raises():
    with pytest.raises(NotAUnit):
        Residue(6, Modulus(8)).inverse()
    with pytest.raises(NotAUnit):
        Residue(0, Modulus(4)).inverse()


def test_units_of_examples():
    assert [r.value for r in units_of(Modulus(4))] == [1, 3]
    assert [r.value for r in units_of(Modulus(8))] == [1, 3, 5, 7]
    assert [r.value for r in units_of(Modulus(3))] == [1, 2]


def test_unit_count_matches_totient():
    for n in (3, 4, 5, 8, 9, 12, 15, 16, 24, 40):
        mod = Modulus(n)
        assert len(units_of(mod)) == euler_phi(n)
        assert len(units_of(mod)) + len(nonunits_of(mod)) == n


def test_two_power_unit_group_order():
    for m in range(2, 11):
        assert len(units_of(Modulus(1 << m))) == 1 << (m - 1)


def test_arithmetic_matches_int_arithmetic():
    mod = Modulus(8)
    for a in range(8):
        for b in range(8):
            ra, rb = Residue(a, mod), Residue(b, mod)
            assert (ra + rb).value == (a + b) % 8
            assert (ra - rb).value == (a - b) % 8
            assert (ra * rb).value == (a * b) % 8
            assert (-ra).value == (-a) % 8
            assert (ra + b).value == (a + b) % 8
            assert (b - ra).value == (b - a) % 8
            assert (2 * ra).value == (2 * a) % 8


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        Residue(1, Modulus(8)) + Residue(1, Modulus(4))
