"""Chinese-remainder assembly of counts across coprime modulus pieces.

A composite modulus N = 2^m * p_1 * ... * p_r (distinct odd primes) splits
a solution count into a product of per-piece counts.  Pieces come from
closed formulas where those apply, falling back to the DP or the brute
oracle for the handful of small sizes the formulas exclude.  The
underlying componentwise tuple bijection ships as a TupleMap so it can be
harness-verified, not just assumed at count level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import counter, formulas, oracle
from .maps import ProductSet, SpecSet, TupleMap
from .modring import Modulus, Residue
from .oracle import SetSpec
from .sl2 import identity, neg_identity


class NonSquarefreeOddPart(ValueError):
    """The odd part of the modulus has a repeated prime factor."""


@dataclass(frozen=True)
class Factorization:
    """N = 2^two_exponent * product of distinct odd primes (ascending)."""

    two_exponent: int | None
    odd_primes: tuple[int, ...]

    def modulus_value(self) -> int:
        value = 1 if self.two_exponent is None else 1 << self.two_exponent
        return value * math.prod(self.odd_primes)

    def piece_moduli(self) -> tuple[int, ...]:
        pieces = () if self.two_exponent is None else (1 << self.two_exponent,)
        return pieces + self.odd_primes


def split(n: int) -> Factorization:
    """Factor N as 2^m times a squarefree odd part."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    m = 0
    rest = n
    while rest % 2 == 0:
        rest //= 2
        m += 1
    if m == 1:
        raise ValueError(f"modulus {n} has 2-adic part 2^1; need 2^m with m >= 2 or odd")
    primes = []
    p = 3
    while p * p <= rest:
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                raise NonSquarefreeOddPart(f"odd part of {n} is divisible by {p}^2")
            primes.append(p)
        p += 2
    if rest > 1:
        primes.append(rest)
    return Factorization(m if m else None, tuple(primes))


def _two_part_formula(size: int, m: int, sign: int):
    if size % 2 and size >= 5:
        return formulas.w_odd_2m((size - 1) // 2, m, sign)
    if size == 4:
        return formulas.w4_2m(m, sign)
    if size % 2 == 0 and size >= 6 and m == 2:
        return formulas.w4_ring4(size, sign)
    return None


def two_part_count(size: int, m: int, sign: int, method: str = "auto") -> tuple[int, str]:
    """Count for the 2^m piece, with the source that produced it."""
    if method in ("auto", "formula"):
        value = _two_part_formula(size, m, sign)
        if value is not None:
            return int(value), "formula"
        if method == "formula":
            raise formulas.UnsupportedCase(
                f"no closed form for size {size} over Z/2^{m}Z per sign")
    if method == "brute":
        return _brute_piece(size, Modulus(1 << m), sign), "brute"
    spec = _piece_spec(size, Modulus(1 << m), sign)
    return counter.dp_count(spec), "dp"


def prime_count(size: int, p: int, sign: int, method: str = "auto") -> tuple[int, str]:
    """Count for an odd prime-field piece, with the source used."""
    if method in ("auto", "formula"):
        if size > 4:
            return int(formulas.u_count(size, p, sign)), "formula"
        if method == "formula":
            raise formulas.UnsupportedCase(f"no prime-field closed form for size {size}")
    if method == "brute":
        return _brute_piece(size, Modulus(p), sign), "brute"
    return counter.dp_count(_piece_spec(size, Modulus(p), sign)), "dp"


def _piece_spec(size: int, modulus: Modulus, sign: int) -> SetSpec:
    target = identity(modulus) if sign == 1 else neg_identity(modulus)
    return SetSpec(size, target)


def _brute_piece(size: int, modulus: Modulus, sign: int) -> int:
    return oracle.count(_piece_spec(size, modulus, sign))


def piece_counts(size: int, fact: Factorization, sign: int,
                 method: str = "auto") -> list[tuple[int, int, str]]:
    """(piece modulus, count, source) for every coprime piece."""
    sign = formulas.normalize_sign(sign)
    out = []
    if fact.two_exponent is not None:
        value, source = two_part_count(size, fact.two_exponent, sign, method)
        out.append((1 << fact.two_exponent, value, source))
    for p in fact.odd_primes:
        value, source = prime_count(size, p, sign, method)
        out.append((p, value, source))
    return out


def assemble_count(size: int, fact: Factorization, sign,
                   method: str = "auto") -> formulas.FormulaValue:
    """Product of the per-piece counts; equals the direct count over Z/NZ."""
    sign = formulas.normalize_sign(sign)
    pieces = piece_counts(size, fact, sign, method)
    return formulas.crt_count(size, [(mp, cnt) for mp, cnt, _ in pieces], sign)


def crt_split_bijection(size: int, n: int, sign: int) -> TupleMap:
    """Componentwise residue splitting from Z/NZ tuples to tuples of
    per-piece tuples, with CRT reconstruction as the inverse."""
    fact = split(n)
    pieces = fact.piece_moduli()
    if len(pieces) < 2:
        raise ValueError(f"{n} does not split into two or more coprime pieces")
    big = Modulus(n)
    small = [Modulus(mp) for mp in pieces]
    # CRT basis: e_i = (N / M_i) * ((N / M_i)^-1 mod M_i)
    basis = [(n // mp) * pow(n // mp, -1, mp) for mp in pieces]
    domain = SpecSet(_piece_spec(size, big, sign))
    codomain = ProductSet([SpecSet(_piece_spec(size, mod, sign)) for mod in small])

    def forward(t):
        return tuple(tuple(Residue(a.value, mod) for a in t) for mod in small)

    def backward(parts):
        merged = []
        for position in zip(*parts):
            value = sum(r.value * e for r, e in zip(position, basis))
            merged.append(Residue(value, big))
        return tuple(merged)

    return TupleMap(f"crt-split(n={size}, N={n}, sign={'+' if sign == 1 else '-'})",
                    domain, codomain, forward, backward)
