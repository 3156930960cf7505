"""Cyclotomic cosets modulo n and the counting functions built on them.

A q-cyclotomic coset modulo n is an orbit of a residue under z -> q*z mod n.
Cosets are keyed by the divisor j = n / gcd(n, z) of their elements; a coset
is symmetric when it is closed under negation, otherwise it is paired with its
negative.  The divisor j contributes symmetric cosets exactly when j divides
q^i + 1 for some i >= 1 (membership in N_q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .errors import ValidationError

MAX_N = 1 << 20


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"length n must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise ValidationError(f"length n={n} exceeds the supported maximum {MAX_N}")


def _check_coprime(a: int, b: int, what: str) -> None:
    if gcd(a, b) != 1:
        raise ValidationError(f"{what}: gcd({a}, {b}) = {gcd(a, b)} != 1")


def factorize(m: int) -> dict[int, int]:
    """Prime factorization of m by trial division."""
    if m < 1:
        raise ValidationError(f"cannot factor {m}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divisors(m: int) -> list[int]:
    divs = [1]
    for prime, exp in factorize(m).items():
        divs = [d * prime**k for d in divs for k in range(exp + 1)]
    return sorted(divs)


def euler_phi(m: int) -> int:
    result = m
    for prime in factorize(m):
        result = result // prime * (prime - 1)
    return result


def mult_order(q: int, j: int) -> int:
    """Multiplicative order of q modulo j (ord_1(q) = 1)."""
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}")
    if j < 1:
        raise ValidationError(f"modulus must be positive, got {j}")
    _check_coprime(q, j, "mult_order")
    if j == 1:
        return 1
    # the order divides phi(j); test divisors in increasing order
    for d in divisors(euler_phi(j)):
        if pow(q, d, j) == 1:
            return d
    raise AssertionError("order of a unit must divide phi(j)")


def in_Nq(j: int, q: int) -> bool:
    """True iff j divides q^i + 1 for some i >= 1."""
    if j < 1:
        raise ValidationError(f"j must be positive, got {j}")
    _check_coprime(j, q, "in_Nq")
    if j <= 2:
        return True
    m = mult_order(q, j)
    x = 1
    for _ in range(m):
        x = x * q % j
        if x == j - 1:
            return True
    return False


def gamma_beta(j: int, q: int) -> tuple[int, int]:
    """Number of symmetric cosets and of asymmetric pairs with divisor j."""
    _check_coprime(j, q, "gamma_beta")
    ph = euler_phi(j)
    m = mult_order(q, j)
    if in_Nq(j, q):
        if ph % m:
            raise AssertionError(f"phi({j}) = {ph} not divisible by ord = {m}")
        return ph // m, 0
    if ph % (2 * m):
        raise AssertionError(f"phi({j}) = {ph} not divisible by 2*ord = {2 * m}")
    return 0, ph // (2 * m)


@dataclass(frozen=True)
class Coset:
    rep: int
    elements: tuple[int, ...]
    divisor: int
    symmetric: bool
    partner_rep: int | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, z: object) -> bool:
        return z in self.elements


def _orbit(z: int, n: int, q: int) -> tuple[int, ...]:
    seen = []
    x = z % n
    while True:
        seen.append(x)
        x = x * q % n
        if x == seen[0]:
            return tuple(sorted(seen))


def coset_of(z: int, n: int, q: int) -> Coset:
    """The q-cyclotomic coset of z modulo n, with its symmetry data."""
    _check_n(n)
    _check_coprime(n, q, "coset_of")
    if not 0 <= z < n:
        raise ValidationError(f"residue {z} is not in [0, {n - 1}]")
    elems = _orbit(z, n, q)
    neg = tuple(sorted((-x) % n for x in elems))
    symmetric = neg == elems
    return Coset(
        rep=elems[0],
        elements=elems,
        divisor=n // gcd(n, elems[0]),
        symmetric=symmetric,
        partner_rep=None if symmetric else neg[0],
    )


@dataclass(frozen=True)
class CosetAtlas:
    """All q-cyclotomic cosets modulo n, ordered by (divisor, rep).

    ``symmetric`` lists the symmetric cosets G_il and ``pairs`` the asymmetric
    pairs (F_jh, -F_jh), the member with smaller rep first.  Both follow the
    atlas order, which fixes the indices used by triple-sequences.
    """

    n: int
    q: int
    cosets: tuple[Coset, ...]
    by_divisor: dict[int, tuple[tuple[Coset, ...], tuple[tuple[Coset, Coset], ...]]] = field(
        repr=False
    )
    _index: tuple[int, ...] = field(repr=False)

    @property
    def omega(self) -> int:
        return len(self.cosets)

    @property
    def symmetric(self) -> list[Coset]:
        return [c for sym, _ in self.by_divisor.values() for c in sym]

    @property
    def pairs(self) -> list[tuple[Coset, Coset]]:
        return [pr for _, prs in self.by_divisor.values() for pr in prs]

    def coset_index(self, z: int) -> int:
        return self._index[z % self.n]

    def coset_containing(self, z: int) -> Coset:
        return self.cosets[self._index[z % self.n]]

    def by_rep(self, rep: int) -> Coset:
        c = self.coset_containing(rep)
        if c.rep != rep:
            raise ValidationError(f"{rep} is not a coset representative modulo {self.n}")
        return c

    def is_closed(self, A: Iterable[int]) -> bool:
        s = frozenset(A)
        return all(z * self.q % self.n in s for z in s)

    def closure(self, Z: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for z in Z:
            out.update(self.coset_containing(z).elements)
        return frozenset(out)

    def decompose(self, A: Iterable[int]) -> list[Coset]:
        """Cosets whose union is A; raises if A is not q-closed."""
        s = frozenset(A)
        if not all(0 <= z < self.n for z in s):
            raise ValidationError(f"set has residues outside [0, {self.n - 1}]")
        reps = sorted({self._index[z] for z in s})
        cosets = [self.cosets[i] for i in reps]
        if sum(len(c) for c in cosets) != len(s):
            raise ValidationError(f"set {sorted(s)} is not q-closed modulo {self.n}")
        return cosets

    def gamma_beta_table(self) -> dict[int, tuple[int, int, int]]:
        """divisor -> (ord_j(q), gamma(j;q), beta(j;q))."""
        return {
            j: (mult_order(self.q, j), *gamma_beta(j, self.q)) for j in self.by_divisor
        }

    def omega_formula(self) -> int:
        total = 0
        for j in divisors(self.n):
            g, b = gamma_beta(j, self.q)
            total += g + 2 * b
        return total


def build_atlas(n: int, q: int) -> CosetAtlas:
    _check_n(n)
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}")
    _check_coprime(n, q, "build_atlas")
    index = [-1] * n
    found = []
    for z in range(n):
        if index[z] == -1:
            c = coset_of(z, n, q)
            for x in c.elements:
                index[x] = -2
            found.append(c)
    found.sort(key=lambda c: (c.divisor, c.rep))
    for i, c in enumerate(found):
        for x in c.elements:
            index[x] = i
    by_divisor: dict[int, tuple] = {}
    for j in divisors(n):
        here = [c for c in found if c.divisor == j]
        sym = tuple(c for c in here if c.symmetric)
        pairs = tuple(
            (c, found[index[c.partner_rep]])
            for c in here
            if not c.symmetric and c.rep < c.partner_rep
        )
        by_divisor[j] = (sym, pairs)
    return CosetAtlas(n=n, q=q, cosets=tuple(found), by_divisor=by_divisor, _index=tuple(index))


def negate(A: Iterable[int], n: int) -> frozenset[int]:
    return frozenset((-z) % n for z in A)


def complement(A: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(range(n)) - frozenset(A)


def scale(u: int, A: Iterable[int], n: int) -> frozenset[int]:
    if gcd(u, n) != 1:
        raise ValidationError(f"scale factor {u} is not invertible modulo {n}")
    return frozenset(u * z % n for z in A)


def set_ops(A: Iterable[int], B: Iterable[int], n: int, u: int = 1) -> dict[str, frozenset[int]]:
    """Bundle of the elementary set operations on subsets of [0, n-1]."""
    a, b = frozenset(A), frozenset(B)
    return {
        "negate": negate(a, n),
        "complement": complement(a, n),
        "scale": scale(u, a, n),
        "union": a | b,
        "intersection": a & b,
    }
