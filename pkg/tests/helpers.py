"""Shared test helpers."""

from quiddity.modring import Modulus, Residue


def rt(modulus: Modulus, *values) -> tuple:
    """Tuple of residues from plain ints."""
    return tuple(Residue(v, modulus) for v in values)


def ivals(t) -> tuple:
    """Canonical int view of a residue tuple."""
    return tuple(int(a) for a in t)


def euler_phi(n: int) -> int:
    """Independent totient via trial-division factoring."""
    result = n
    p = 2
    remaining = n
    while p * p <= remaining:
        if remaining % p == 0:
            result = result // p * (p - 1)
            while remaining % p == 0:
                remaining //= p
        p += 1
    if remaining > 1:
        result = result // remaining * (remaining - 1)
    return result
