"""Chain-ring elements, vectors and polynomials modulo X^n - 1.

Two concrete families are realized:

* ``GaloisRing``: R = GR(p^a, r), theta = p, e = 1, s = a.  Elements are
  tuples of r integers mod p^a.
* ``FieldPlusNilpotent``: R = F_{p^r}[u]/(u^s), theta = u, a = 1, e = s.
  Elements are tuples of s field elements (u-adic digits), each a tuple of
  r integers mod p.

Other parameter tuples are valid for the counting code but have no element
arithmetic; asking for it raises ``UnsupportedFamilyError``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import grarith
from .errors import UnsupportedFamilyError, ValidationError

GALOIS_RING = "GaloisRing"
FIELD_PLUS_NILPOTENT = "FieldPlusNilpotent"
EISENSTEIN = "Eisenstein"


@dataclass(frozen=True)
class RingSpec:
    p: int
    a: int
    r: int
    e: int
    s: int

    def __post_init__(self):
        for name in ("p", "a", "r", "e", "s"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
        if not grarith.is_prime(self.p):
            raise ValidationError(f"p={self.p} is not prime")
        if not (self.a - 1) * self.e < self.s <= self.a * self.e:
            raise ValidationError(
                f"need (a-1)e < s <= ae, got a={self.a}, e={self.e}, s={self.s}"
            )

    @property
    def q(self) -> int:
        return self.p**self.r

    @property
    def family(self) -> str:
        if self.e == 1 and self.s == self.a:
            return GALOIS_RING
        if self.a == 1 and self.e == self.s:
            return FIELD_PLUS_NILPOTENT
        return EISENSTEIN

    @property
    def has_arithmetic(self) -> bool:
        return self.family != EISENSTEIN

    def ring(self) -> "ChainRing":
        return chain_ring(self)

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.a, self.r, self.e, self.s)

    def to_json(self) -> dict:
        return {"p": self.p, "a": self.a, "r": self.r, "e": self.e, "s": self.s}

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse "p,a,r,e,s" or one of the shortcuts Z4, Z8, Z9, Z27, F2u2."""
        key = text.strip()
        if key in RING_SHORTCUTS:
            return cls(*RING_SHORTCUTS[key])
        try:
            parts = [int(x) for x in key.split(",")]
        except ValueError:
            raise ValidationError(f"cannot parse ring spec {text!r}") from None
        if len(parts) != 5:
            raise ValidationError(f"ring spec needs five integers p,a,r,e,s, got {text!r}")
        return cls(*parts)


RING_SHORTCUTS = {
    "Z4": (2, 2, 1, 1, 2),
    "Z8": (2, 3, 1, 1, 3),
    "Z9": (3, 2, 1, 1, 2),
    "Z27": (3, 3, 1, 1, 3),
    "F2u2": (2, 1, 1, 2, 2),
}


class ChainRing:
    """Common interface for the two arithmetic families."""

    spec: RingSpec
    field: grarith.GaloisRing
    zero: tuple
    one: tuple

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def size(self) -> int:
        return self.q**self.s

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.spec.as_tuple()}"

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def is_zero(self, x) -> bool:
        return x == self.zero

    def is_unit(self, x) -> bool:
        return self.valuation(x) == 0

    def theta_pow(self, t: int):
        out = self.one
        for _ in range(t):
            out = self.theta_mul(out)
        return out

    def pow(self, x, e: int):
        result, base = self.one, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inverse(self, x):
        if not self.is_unit(x):
            raise ValidationError(f"{x} is not a unit")
        units = self.q ** (self.s - 1) * (self.q - 1)
        return self.pow(x, units - 1)

    def sigma_pow(self, x, ell: int):
        out = x
        for _ in range(ell % self.r):
            out = self.sigma(out)
        return out

    def elements(self) -> list:
        return [self.from_index(i) for i in range(self.size)]

    def random(self, rng):
        return self.from_index(int(rng.integers(self.size)))


class GaloisRingArith(ChainRing):
    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.gr = grarith.galois_ring(spec.p, spec.a, spec.r)
        self.field = self.gr.residue_field()
        self.zero = self.gr.zero
        self.one = self.gr.one
        self.theta = self.gr.from_int(spec.p)

    def add(self, x, y):
        return self.gr.add(x, y)

    def neg(self, x):
        return self.gr.neg(x)

    def sub(self, x, y):
        return self.gr.sub(x, y)

    def mul(self, x, y):
        return self.gr.mul(x, y)

    def theta_mul(self, x):
        return self.gr.scalar(self.p, x)

    def valuation(self, x) -> int:
        return self.gr.valuation(x)

    def div_theta(self, x, t: int):
        return self.gr.div_p(x, t)

    def split_theta(self, x, t: int):
        """(rem, quot) with x = rem + theta^t * quot and rem canonical mod theta^t."""
        d = self.p**t
        return tuple(c % d for c in x), tuple(c // d for c in x)

    def inverse(self, x):
        return self.gr.inverse(x)

    def sigma(self, x):
        return self.gr.frobenius(x)

    def pi(self, x):
        return self.gr.pi(x)

    def lift(self, f):
        return tuple(f)

    def from_int(self, c: int):
        return self.gr.from_int(c)

    def index(self, x) -> int:
        out = 0
        for c in reversed(x):
            out = out * self.gr.pa + c
        return out

    def from_index(self, i: int):
        pa = self.gr.pa
        out = []
        for _ in range(self.r):
            i, c = divmod(i, pa)
            out.append(c)
        return tuple(out)

    def to_json(self, x):
        return x[0] if self.r == 1 else list(x)

    def from_json(self, obj):
        if isinstance(obj, int):
            return self.gr.from_int(obj)
        if len(obj) != self.r:
            raise ValidationError(f"element needs {self.r} coordinates")
        return tuple(int(c) % self.gr.pa for c in obj)


class FieldPlusNilpotentArith(ChainRing):
    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.field = grarith.galois_ring(spec.p, 1, spec.r)
        F = self.field
        self.zero = (F.zero,) * spec.s
        self.one = (F.one,) + (F.zero,) * (spec.s - 1)
        self.theta = self.theta_mul(self.one)

    def add(self, x, y):
        F = self.field
        return tuple(F.add(u, v) for u, v in zip(x, y))

    def neg(self, x):
        F = self.field
        return tuple(F.neg(u) for u in x)

    def mul(self, x, y):
        F, s = self.field, self.s
        out = [F.zero] * s
        for i, u in enumerate(x):
            if F.is_zero(u):
                continue
            for j in range(s - i):
                if not F.is_zero(y[j]):
                    out[i + j] = F.add(out[i + j], F.mul(u, y[j]))
        return tuple(out)

    def theta_mul(self, x):
        return (self.field.zero,) + tuple(x[:-1])

    def valuation(self, x) -> int:
        for t, d in enumerate(x):
            if any(d):
                return t
        return self.s

    def div_theta(self, x, t: int):
        if self.valuation(x) < t:
            raise ValidationError(f"{x} is not divisible by u^{t}")
        return tuple(x[t:]) + (self.field.zero,) * t

    def split_theta(self, x, t: int):
        z = self.field.zero
        return tuple(x[:t]) + (z,) * (self.s - t), tuple(x[t:]) + (z,) * t

    def sigma(self, x):
        return tuple(self.field.frobenius(d) for d in x)

    def pi(self, x):
        return x[0]

    def lift(self, f):
        return (tuple(f),) + (self.field.zero,) * (self.s - 1)

    def from_int(self, c: int):
        return self.lift(self.field.from_int(c))

    def index(self, x) -> int:
        out = 0
        p = self.p
        for d in reversed(x):
            for c in reversed(d):
                out = out * p + c
        return out

    def from_index(self, i: int):
        p, r = self.p, self.r
        digits = []
        for _ in range(self.s):
            d = []
            for _ in range(r):
                i, c = divmod(i, p)
                d.append(c)
            digits.append(tuple(d))
        return tuple(digits)

    def to_json(self, x):
        if self.r == 1:
            return [d[0] for d in x]
        return [list(d) for d in x]

    def from_json(self, obj):
        if isinstance(obj, int):
            return self.from_int(obj)
        if len(obj) != self.s:
            raise ValidationError(f"element needs {self.s} u-adic digits")
        p = self.p
        if self.r == 1:
            return tuple((int(c) % p,) for c in obj)
        return tuple(tuple(int(c) % p for c in d) for d in obj)


@lru_cache(maxsize=None)
def chain_ring(spec: RingSpec) -> ChainRing:
    if spec.family == GALOIS_RING:
        return GaloisRingArith(spec)
    if spec.family == FIELD_PLUS_NILPOTENT:
        return FieldPlusNilpotentArith(spec)
    raise UnsupportedFamilyError(
        f"no element arithmetic for (p,a,r,e,s) = {spec.as_tuple()}: only Galois rings "
        "(e=1, s=a) and F_q[u]/(u^s) (a=1, e=s) are realized"
    )


# -- vectors and polynomials modulo X^n - 1 ----------------------------------


def galois_inner_product(R: ChainRing, u: Sequence, v: Sequence, ell: int = 0):
    """sum_j u_j * sigma^ell(v_j)."""
    if len(u) != len(v):
        raise ValidationError(f"length mismatch: {len(u)} != {len(v)}")
    if not 0 <= ell < R.r:
        raise ValidationError(f"ell={ell} must lie in [0, {R.r - 1}]")
    acc = R.zero
    for x, y in zip(u, v):
        acc = R.add(acc, R.mul(x, R.sigma_pow(y, ell)))
    return acc


def poly_to_vector(R: ChainRing, f: Sequence, n: int) -> list:
    """Reduce a polynomial modulo X^n - 1 into a length-n coefficient vector."""
    out = [R.zero] * n
    for i, c in enumerate(f):
        out[i % n] = R.add(out[i % n], c)
    return out


def poly_mulmod(R: ChainRing, f: Sequence, g: Sequence, n: int) -> list:
    out = [R.zero] * n
    for i, u in enumerate(f):
        if R.is_zero(u):
            continue
        for j, v in enumerate(g):
            if not R.is_zero(v):
                k = (i + j) % n
                out[k] = R.add(out[k], R.mul(u, v))
    return out


def poly_divmod_monic(R: ChainRing, f: Sequence, d: Sequence) -> tuple[list, list]:
    return grarith.poly_divmod_monic(R, f, d)


def divides_monic(R: ChainRing, d: Sequence, c: Sequence) -> bool:
    """True when the monic divisor d of X^n - 1 divides c in R[X]/(X^n - 1).

    c is a length-n vector; since d | X^n - 1, plain division of the
    representative of degree < n decides divisibility in the quotient.
    """
    return not poly_divmod_monic(R, c, d)[1]


def cyclic_shift(v: Sequence, k: int = 1) -> list:
    n = len(v)
    return [v[(i - k) % n] for i in range(n)]


def shifts(v: Sequence) -> list[list]:
    return [cyclic_shift(v, k) for k in range(len(v))]


def sigma_vector(R: ChainRing, v: Sequence, h: int = 1) -> list:
    return [R.sigma_pow(x, h) for x in v]


def pi_vector(R: ChainRing, v: Sequence) -> list:
    return [R.pi(x) for x in v]


# -- theta-adic echelon form ---------------------------------------------------


@dataclass(frozen=True)
class Echelon:
    """Row-reduced generator set in standard form.

    Each row has a pivot column where it equals theta^t; all other rows
    vanish in that column except for entries above it, which are reduced to
    canonical representatives modulo theta^t.
    """

    rows: tuple
    pivots: tuple  # (column, t) per row
    s: int

    @property
    def profile(self) -> tuple[int, ...]:
        k = [0] * self.s
        for _, t in self.pivots:
            k[t] += 1
        return tuple(k)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def qdim(self) -> int:
        return sum((self.s - t) * k for t, k in enumerate(self.profile))


def _row_axpy(R: ChainRing, row: list, m, other: Sequence) -> None:
    """row -= m * other, in place."""
    for j, y in enumerate(other):
        if not R.is_zero(y):
            row[j] = R.sub(row[j], R.mul(m, y))


def theta_adic_echelon(R: ChainRing, rows: Iterable[Sequence]) -> Echelon:
    """Standard-form reduction of the R-span of ``rows``.

    Pivot choice: the entry of globally minimal theta-valuation among the
    unprocessed rows, ties broken by smallest column and then smallest row.
    A left-to-right column scan can miss the standard-form profile (for the
    single row (2, 1) over Z_4 it would report a torsion pivot), so the
    global minimum is used.
    """
    work = [list(r) for r in rows]
    work = [r for r in work if any(not R.is_zero(x) for x in r)]
    s = R.s
    done_rows: list[list] = []
    pivots: list[tuple[int, int]] = []
    while work:
        best = None
        for i, row in enumerate(work):
            for j, x in enumerate(row):
                v = R.valuation(x)
                if v < s and (best is None or (v, j, i) < best):
                    best = (v, j, i)
        if best is None:
            break
        t, col, idx = best
        prow = work.pop(idx)
        unit = R.div_theta(prow[col], t)
        inv = R.inverse(unit)
        prow = [R.mul(inv, x) for x in prow]
        for row in work:
            if not R.is_zero(row[col]):
                _row_axpy(R, row, R.div_theta(row[col], t), prow)
        work = [r for r in work if any(not R.is_zero(x) for x in r)]
        done_rows.append(prow)
        pivots.append((col, t))
    for j, (col, t) in enumerate(pivots):
        for i in range(j):
            x = done_rows[i][col]
            if not R.is_zero(x):
                _, quot = R.split_theta(x, t)
                if not R.is_zero(quot):
                    _row_axpy(R, done_rows[i], quot, done_rows[j])
    return Echelon(tuple(tuple(r) for r in done_rows), tuple(pivots), s)


def reduce_vector(R: ChainRing, ech: Echelon, v: Sequence) -> list | None:
    """Subtract pivot rows from v; returns the residue, or None if a pivot entry is not divisible."""
    w = list(v)
    for row, (col, t) in zip(ech.rows, ech.pivots):
        x = w[col]
        if R.is_zero(x):
            continue
        if R.valuation(x) < t:
            return None
        _row_axpy(R, w, R.div_theta(x, t), row)
    return w


def in_span(R: ChainRing, ech: Echelon, v: Sequence) -> bool:
    w = reduce_vector(R, ech, v)
    return w is not None and all(R.is_zero(x) for x in w)


def spans_equal(R: ChainRing, a: Echelon, b: Echelon) -> bool:
    return a.profile == b.profile and all(in_span(R, b, row) for row in a.rows)


def enumerate_span(R: ChainRing, ech: Echelon) -> Iterable[tuple]:
    """All elements of the span (only sensible for tiny modules)."""
    n = len(ech.rows[0]) if ech.rows else 0
    coeff_sets = []
    for _, t in ech.pivots:
        # theta^t * c only depends on c modulo theta^{s-t}
        reps = {}
        for c in R.elements():
            key = R.mul(R.theta_pow(t), c)
            reps.setdefault(key, c)
        coeff_sets.append(list(reps.values()))
    for combo in itertools.product(*coeff_sets):
        acc = [R.zero] * n
        for c, row in zip(combo, ech.rows):
            for j, y in enumerate(row):
                if not R.is_zero(y):
                    acc[j] = R.add(acc[j], R.mul(c, y))
        yield tuple(acc)


class PolyRing:
    """Convenience bundle: R[X]/(X^n - 1) with the Omega factor table attached."""

    def __init__(self, spec: RingSpec, n: int):
        self.spec = spec
        self.R = chain_ring(spec)
        self.n = n
        self.table = grarith.factor_table(spec.p, spec.a if spec.family == GALOIS_RING else 1, spec.r, n)

    @cached_property
    def atlas(self):
        return self.table.atlas

    def omega(self, A: Iterable[int]) -> list:
        """Omega(A) with coefficients in R."""
        return [self.R.lift(c) for c in self.table.omega(A)]

    def x_n_minus_1(self) -> list:
        return grarith.x_n_minus_1(self.R, self.n)
