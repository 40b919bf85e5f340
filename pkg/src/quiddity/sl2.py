"""2x2 matrices over Z/NZ, continuant products, and a dense index of SL2(Z/NZ).

The continuant product multiplies a new letter on the LEFT: the last letter
of a tuple is the leftmost factor.  That convention fixes which tuple
position a per-position constraint refers to, and it has to agree between
the brute-force enumerator and the dynamic program.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .modring import Modulus, Residue

# Dense group enumeration is O(N^3) elements; past this it is not worth it.
ENUMERATION_CAP = 1 << 16


class CapExceeded(ValueError):
    """Modulus too large for dense group enumeration."""


class Mat2:
    """A 2x2 matrix over Z/NZ with canonical (least nonnegative) entries."""

    __slots__ = ("a", "b", "c", "d", "modulus")

    def __init__(self, a, b, c, d, modulus: Modulus):
        n = modulus.n
        self.a = int(a) % n
        self.b = int(b) % n
        self.c = int(c) % n
        self.d = int(d) % n
        self.modulus = modulus

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.modulus.n

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def residues(self) -> tuple[Residue, Residue, Residue, Residue]:
        m = self.modulus
        return (Residue(self.a, m), Residue(self.b, m), Residue(self.c, m), Residue(self.d, m))

    def key(self) -> int:
        # Entries packed into one integer: ((a*N + b)*N + c)*N + d.
        n = self.modulus.n
        return ((self.a * n + self.b) * n + self.c) * n + self.d

    def __matmul__(self, other: "Mat2") -> "Mat2":
        if other.modulus.n != self.modulus.n:
            raise ValueError("mixed moduli in matrix product")
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.modulus,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d, self.modulus)

    def inverse(self) -> "Mat2":
        if self.det() != 1:
            raise ValueError("inverse is only implemented for determinant-1 matrices")
        return Mat2(self.d, -self.b, -self.c, self.a, self.modulus)

    def __eq__(self, other):
        return (
            isinstance(other, Mat2)
            and self.modulus.n == other.modulus.n
            and self.entries() == other.entries()
        )

    def __hash__(self):
        return hash((self.key(), self.modulus.n))

    def __repr__(self):
        return f"Mat2([[{self.a},{self.b}],[{self.c},{self.d}]], mod={self.modulus.n})"


def identity(modulus: Modulus) -> Mat2:
    return Mat2(1, 0, 0, 1, modulus)


def neg_identity(modulus: Modulus) -> Mat2:
    return Mat2(-1, 0, 0, -1, modulus)


def s_mat(modulus: Modulus) -> Mat2:
    """The order-4 generator [[0,-1],[1,0]]; equal to elementary(0)."""
    return Mat2(0, -1, 1, 0, modulus)


def t_mat(modulus: Modulus) -> Mat2:
    """The shear generator [[1,1],[0,1]]."""
    return Mat2(1, 1, 0, 1, modulus)


TARGET_NAMES = ("id", "neg-id", "s", "neg-s", "t", "neg-t")


def target_by_name(name: str, modulus: Modulus) -> Mat2:
    base = {"id": identity, "s": s_mat, "t": t_mat}
    if name in base:
        return base[name](modulus)
    if name.startswith("neg-") and name[4:] in base:
        return -base[name[4:]](modulus)
    raise ValueError(f"unknown target name {name!r}; expected one of {TARGET_NAMES}")


def elementary(a, modulus: Modulus | None = None) -> Mat2:
    """The letter matrix [[a, -1], [1, 0]]."""
    if modulus is None:
        if not isinstance(a, Residue):
            raise ValueError("elementary() needs a modulus when given a bare integer")
        modulus = a.modulus
    return Mat2(int(a), -1, 1, 0, modulus)


def continuant_product(values, modulus: Modulus | None = None) -> Mat2:
    """Product of letter matrices with the last letter leftmost.

    ``values`` may hold Residue objects (modulus inferred) or plain ints
    (modulus required).  Splitting a tuple t = u ++ v gives
    product(t) == product(v) @ product(u).
    """
    values = tuple(values)
    if not values:
        raise ValueError("continuant product needs at least one letter")
    if modulus is None:
        first = values[0]
        if not isinstance(first, Residue):
            raise ValueError("continuant_product() needs a modulus for bare integers")
        modulus = first.modulus
    n = modulus.n
    # Left-multiplying by [[a,-1],[1,0]] sends [[p,q],[r,s]] to [[ap-r, aq-s],[p, q]].
    p, q, r, s = int(values[0]) % n, n - 1, 1, 0
    for letter in values[1:]:
        a = int(letter)
        p, q, r, s = (a * p - r) % n, (a * q - s) % n, p, q
    return Mat2(p, q, r, s, modulus)


def _solve_linear(a: int, t: int, n: int) -> range | None:
    """Solutions d in [0, n) of a*d == t (mod n), or None when none exist."""
    g = math.gcd(a, n)
    if t % g:
        return None
    n_red = n // g
    d0 = (t // g) * pow(a // g, -1, n_red) % n_red
    return range(d0, n, n_red)


class GroupTable:
    """Dense ordinal <-> element bijection for SL2(Z/NZ).

    Ordinal 0 is the identity; the rest follow in ascending packed-key
    order.  Built once per modulus and then read-only.
    """

    def __init__(self, modulus: Modulus):
        if modulus.n > ENUMERATION_CAP:
            raise CapExceeded(f"modulus {modulus.n} exceeds enumeration cap {ENUMERATION_CAP}")
        self.modulus = modulus
        n = modulus.n
        keys = []
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    ds = _solve_linear(a, 1 + b * c, n)
                    if ds is None:
                        continue
                    base = ((a * n + b) * n + c) * n
                    keys.extend(base + d for d in ds)
        keys.sort()
        id_key = identity(modulus).key()
        keys.remove(id_key)
        keys.insert(0, id_key)
        self._keys = keys
        self._ordinal = {k: i for i, k in enumerate(keys)}
        self._elements = [self._unpack(k) for k in keys]

    def _unpack(self, key: int) -> Mat2:
        n = self.modulus.n
        key, d = divmod(key, n)
        key, c = divmod(key, n)
        a, b = divmod(key, n)
        return Mat2(a, b, c, d, self.modulus)

    def __len__(self) -> int:
        return len(self._keys)

    def __getitem__(self, ordinal: int) -> Mat2:
        return self._elements[ordinal]

    def index_of(self, mat: Mat2) -> int:
        return self._ordinal[mat.key()]

    def index_of_key(self, key: int) -> int:
        return self._ordinal[key]

    def __contains__(self, mat: Mat2) -> bool:
        return isinstance(mat, Mat2) and mat.key() in self._ordinal


@lru_cache(maxsize=None)
def group_table(modulus: Modulus) -> GroupTable:
    return GroupTable(modulus)


def group_order(n: int) -> int:
    """|SL2(Z/NZ)| = N^3 * prod over primes p | N of (1 - p^-2), exactly."""
    order = n ** 3
    remaining = n
    p = 2
    while p * p <= remaining:
        if remaining % p == 0:
            order = order // (p * p) * (p * p - 1)
            while remaining % p == 0:
                remaining //= p
        p += 1
    if remaining > 1:
        p = remaining
        order = order // (p * p) * (p * p - 1)
    return order
