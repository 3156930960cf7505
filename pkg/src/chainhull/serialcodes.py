"""Defining multisets and the cyclic serial codes they describe.

A defining multiset is an ordered partition (A_0, ..., A_s) of [0, n-1]
into q-closed sets.  It determines the code

    C(A) = sum_{t < s} theta^t <Omega(complement of A_t)>

whose parameters are (|A_0|, ..., |A_{s-1}|).  Everything below (duals,
hulls, sums, intersections) is computed on multisets; generator
polynomials are only realized on demand.

Each residue z has a *level*: the index t with z in A_t.  The operations
read naturally on levels:

* ``diamond`` sends level t to s - t;
* ``sqcup`` keeps the smaller level of the two inputs (sum of codes);
* ``sqcap`` keeps the larger one (intersection of codes).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import cosetlab
from .errors import ValidationError
from .ringpoly import PolyRing, RingSpec, theta_adic_echelon


@dataclass(frozen=True)
class DefiningMultiset:
    n: int
    q: int
    s: int
    parts: tuple[frozenset, ...]

    def __post_init__(self):
        parts = tuple(frozenset(P) for P in self.parts)
        object.__setattr__(self, "parts", parts)
        if self.s < 1:
            raise ValidationError("s must be positive")
        if len(parts) != self.s + 1:
            raise ValidationError(f"need s+1 = {self.s + 1} parts, got {len(parts)}")
        seen: set[int] = set()
        for P in parts:
            if seen & P:
                raise ValidationError(f"parts overlap on {sorted(seen & P)}")
            seen |= P
        if seen != set(range(self.n)):
            raise ValidationError(f"parts do not cover [0, {self.n - 1}]")
        atlas = self.atlas
        for P in parts:
            if not atlas.is_closed(P):
                raise ValidationError(f"part {sorted(P)} is not {self.q}-closed modulo {self.n}")

    @property
    def atlas(self) -> cosetlab.CosetAtlas:
        return _atlas(self.n, self.q)

    @classmethod
    def from_levels(cls, n: int, q: int, s: int, level: Sequence[int]) -> "DefiningMultiset":
        parts: list[set[int]] = [set() for _ in range(s + 1)]
        for z, t in enumerate(level):
            parts[t].add(z)
        return cls(n, q, s, tuple(frozenset(P) for P in parts))

    @classmethod
    def from_coset_levels(cls, n: int, q: int, s: int, levels: Sequence[int]) -> "DefiningMultiset":
        """Levels given per coset in atlas order."""
        atlas = _atlas(n, q)
        if len(levels) != atlas.omega:
            raise ValidationError(f"need {atlas.omega} coset levels, got {len(levels)}")
        lv = [0] * n
        for c, t in zip(atlas.cosets, levels):
            if not 0 <= t <= s:
                raise ValidationError(f"level {t} outside [0, {s}]")
            for z in c.elements:
                lv[z] = t
        return cls.from_levels(n, q, s, lv)

    @classmethod
    def from_reps(cls, n: int, q: int, s: int, reps: Sequence[Sequence[int]]) -> "DefiningMultiset":
        """Expand coset representatives per slot; a missing trailing slot is filled with the rest."""
        atlas = _atlas(n, q)
        if len(reps) not in (s, s + 1):
            raise ValidationError(f"need {s + 1} slots of coset representatives, got {len(reps)}")
        parts = []
        for slot in reps:
            P: set[int] = set()
            for z in slot:
                if not isinstance(z, int) or not 0 <= z < n:
                    raise ValidationError(f"residue {z!r} is not in [0, {n - 1}]")
                P |= set(atlas.coset_containing(z).elements)
            parts.append(frozenset(P))
        if len(parts) == s:
            used = frozenset().union(*parts)
            parts.append(frozenset(range(n)) - used)
        return cls(n, q, s, tuple(parts))

    @classmethod
    def all(cls, n: int, q: int, s: int) -> Iterable["DefiningMultiset"]:
        import itertools

        atlas = _atlas(n, q)
        for levels in itertools.product(range(s + 1), repeat=atlas.omega):
            yield cls.from_coset_levels(n, q, s, levels)

    @cached_property
    def levels(self) -> tuple[int, ...]:
        lv = [0] * self.n
        for t, P in enumerate(self.parts):
            for z in P:
                lv[z] = t
        return tuple(lv)

    @property
    def coset_levels(self) -> tuple[int, ...]:
        return tuple(self.levels[c.rep] for c in self.atlas.cosets)

    @property
    def params(self) -> tuple[int, ...]:
        return tuple(len(P) for P in self.parts[: self.s])

    @property
    def qdim(self) -> int:
        return sum((self.s - t) * len(P) for t, P in enumerate(self.parts))

    def _like(self, levels: Sequence[int]) -> "DefiningMultiset":
        return DefiningMultiset.from_levels(self.n, self.q, self.s, levels)

    def _check_compatible(self, other: "DefiningMultiset") -> None:
        if (self.n, self.q, self.s) != (other.n, other.q, other.s):
            raise ValidationError("multisets have different (n, q, s)")

    def diamond(self) -> "DefiningMultiset":
        return DefiningMultiset(self.n, self.q, self.s, self.parts[::-1])

    def scale(self, u: int) -> "DefiningMultiset":
        return DefiningMultiset(
            self.n, self.q, self.s, tuple(cosetlab.scale(u, P, self.n) for P in self.parts)
        )

    def sqcup(self, other: "DefiningMultiset") -> "DefiningMultiset":
        self._check_compatible(other)
        return self._like([min(a, b) for a, b in zip(self.levels, other.levels)])

    def sqcap(self, other: "DefiningMultiset") -> "DefiningMultiset":
        self._check_compatible(other)
        return self._like([max(a, b) for a, b in zip(self.levels, other.levels)])

    def dual(self, p: int, ell: int = 0) -> "DefiningMultiset":
        """Defining multiset -p^ell A^diamond of the ell-Galois dual."""
        return self.diamond().scale((-pow(p, ell, self.n)) % self.n if self.n > 1 else 1)

    def hull(self, p: int, ell: int = 0) -> "DefiningMultiset":
        return self.sqcap(self.dual(p, ell))

    def to_json(self) -> dict:
        atlas = self.atlas
        return {
            "n": self.n,
            "q": self.q,
            "s": self.s,
            "parts": [[c.rep for c in atlas.decompose(P)] for P in self.parts],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DefiningMultiset":
        return cls.from_reps(obj["n"], obj["q"], obj["s"], obj["parts"])

    def describe(self) -> str:
        return json.dumps(self.to_json()["parts"])


def _atlas(n: int, q: int) -> cosetlab.CosetAtlas:
    return _ATLAS_CACHE.get(n, q)


class _AtlasCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple[int, int], cosetlab.CosetAtlas] = {}

    def get(self, n: int, q: int) -> cosetlab.CosetAtlas:
        key = (n, q)
        atlas = self._data.get(key)
        if atlas is None:
            atlas = cosetlab.build_atlas(n, q)
            with self._lock:
                self._data.setdefault(key, atlas)
        return atlas


_ATLAS_CACHE = _AtlasCache()


# -- triple-sequences ----------------------------------------------------------


def level_to_vector(level: int, s: int) -> tuple[int, ...]:
    """The E_s vector with a single 1 at ``level`` (all zero for level s)."""
    return tuple(1 if a == level else 0 for a in range(s))


def vector_to_level(x: Sequence[int], s: int) -> int:
    if len(x) != s or any(v not in (0, 1) for v in x) or sum(x) > 1:
        raise ValidationError(f"{tuple(x)} is not in E_{s}")
    return x.index(1) if 1 in x else s


def cumulative(x: Sequence[int], t: int) -> int:
    """x^[t] = sum_{a > t} x^(a) with the implicit x^(s) = 1 - sum_{a<s} x^(a)."""
    if t < 0:
        return 1
    return sum(x[t + 1 :]) + (1 - sum(x))


@dataclass(frozen=True)
class TripleSequence:
    n: int
    q: int
    s: int
    x: tuple[tuple[int, ...], ...]  # per symmetric coset, atlas order
    y: tuple[tuple[int, ...], ...]  # per pair (F, -F): vector of F
    z: tuple[tuple[int, ...], ...]  # per pair: vector of -F

    def __post_init__(self):
        atlas = _atlas(self.n, self.q)
        if len(self.x) != len(atlas.symmetric) or len(self.y) != len(atlas.pairs) or len(
            self.z
        ) != len(atlas.pairs):
            raise ValidationError("triple-sequence does not match the coset atlas")
        for v in (*self.x, *self.y, *self.z):
            vector_to_level(v, self.s)


def to_triple_sequence(A: DefiningMultiset) -> TripleSequence:
    atlas = A.atlas
    lv = A.levels
    s = A.s
    return TripleSequence(
        A.n,
        A.q,
        s,
        tuple(level_to_vector(lv[c.rep], s) for c in atlas.symmetric),
        tuple(level_to_vector(lv[F.rep], s) for F, _ in atlas.pairs),
        tuple(level_to_vector(lv[G.rep], s) for _, G in atlas.pairs),
    )


def from_triple_sequence(T: TripleSequence) -> DefiningMultiset:
    atlas = _atlas(T.n, T.q)
    lv = [0] * T.n
    assign = []
    for c, v in zip(atlas.symmetric, T.x):
        assign.append((c, vector_to_level(v, T.s)))
    for (F, G), vy, vz in zip(atlas.pairs, T.y, T.z):
        assign.append((F, vector_to_level(vy, T.s)))
        assign.append((G, vector_to_level(vz, T.s)))
    for c, t in assign:
        for z in c.elements:
            lv[z] = t
    return DefiningMultiset.from_levels(T.n, T.q, T.s, lv)


def zero_triple_sequence(n: int, q: int, s: int) -> TripleSequence:
    atlas = _atlas(n, q)
    zero = (0,) * s
    return TripleSequence(
        n, q, s, (zero,) * len(atlas.symmetric), (zero,) * len(atlas.pairs), (zero,) * len(atlas.pairs)
    )


# -- codes ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CyclicSerialCode:
    """A cyclic serial code identified by its defining multiset.

    Generators theta^t * Omega(complement of A_t) are built lazily, once, even
    under concurrent first access.
    """

    spec: RingSpec
    multiset: DefiningMultiset
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.multiset.q != self.spec.q or self.multiset.s != self.spec.s:
            raise ValidationError(
                f"multiset has (q, s) = ({self.multiset.q}, {self.multiset.s}), ring needs "
                f"({self.spec.q}, {self.spec.s})"
            )
        if self.multiset.n % self.spec.p == 0:
            raise ValidationError(f"gcd(n={self.multiset.n}, p={self.spec.p}) != 1")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CyclicSerialCode)
            and self.spec == other.spec
            and self.multiset == other.multiset
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.multiset))

    @property
    def n(self) -> int:
        return self.multiset.n

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def params(self) -> tuple[int, ...]:
        return self.multiset.params

    @property
    def qdim(self) -> int:
        return self.multiset.qdim

    def _check_ell(self, ell: int) -> None:
        if not 0 <= ell < self.spec.r:
            raise ValidationError(f"ell={ell} must lie in [0, {self.spec.r - 1}]")

    def _with(self, A: DefiningMultiset) -> "CyclicSerialCode":
        return CyclicSerialCode(self.spec, A)

    def dual(self, ell: int = 0) -> "CyclicSerialCode":
        self._check_ell(ell)
        return self._with(self.multiset.dual(self.spec.p, ell))

    def hull(self, ell: int = 0) -> "CyclicSerialCode":
        self._check_ell(ell)
        return self._with(self.multiset.hull(self.spec.p, ell))

    def sum(self, other: "CyclicSerialCode") -> "CyclicSerialCode":
        return self._with(self.multiset.sqcup(other.multiset))

    def intersection(self, other: "CyclicSerialCode") -> "CyclicSerialCode":
        return self._with(self.multiset.sqcap(other.multiset))

    def sigma_code(self, h: int = 1) -> "CyclicSerialCode":
        """sigma^h(C), realized as the code of p^h A."""
        return self._with(self.multiset.scale(pow(self.spec.p, h, self.n) if self.n > 1 else 1))

    def is_lcd(self, ell: int = 0) -> bool:
        return self.hull(ell).multiset.parts[self.s] == frozenset(range(self.n))

    def is_self_orthogonal(self, ell: int = 0) -> bool:
        return self.hull(ell).multiset == self.multiset

    def is_self_dual(self, ell: int = 0) -> bool:
        return self.dual(ell).multiset == self.multiset

    def residue_code(self) -> "CyclicSerialCode":
        """pi(C) as a cyclic code over the residue field F_{p^r}."""
        A = self.multiset
        rest = frozenset().union(*A.parts[1:])
        field_spec = RingSpec(self.spec.p, 1, self.spec.r, 1, 1)
        return CyclicSerialCode(field_spec, DefiningMultiset(A.n, A.q, 1, (A.parts[0], rest)))

    # -- realized generators --

    @property
    def poly_ring(self) -> PolyRing:
        return self._realize("poly_ring", lambda: PolyRing(self.spec, self.n))

    def _realize(self, key, build):
        if key not in self._cache:
            with self._lock:
                if key not in self._cache:
                    self._cache[key] = build()
        return self._cache[key]

    @property
    def generators(self) -> list[list]:
        """theta^t * Omega(complement of A_t) for t < s, as length-n vectors (zero ones kept)."""
        return self._realize("generators", self._build_generators)

    def _build_generators(self) -> list[list]:
        P = self.poly_ring
        R = P.R
        n = self.n
        out = []
        for t in range(self.s):
            comp = cosetlab.complement(self.multiset.parts[t], n)
            g = P.omega(comp)
            th = R.theta_pow(t)
            vec = [R.zero] * n
            for i, c in enumerate(g):
                if i == n:
                    # Omega(full) = X^n - 1 is zero modulo X^n - 1
                    vec[0] = R.add(vec[0], R.mul(th, c))
                else:
                    vec[i] = R.add(vec[i], R.mul(th, c))
            out.append(vec)
        return out

    def generator_rows(self) -> list[list]:
        """All cyclic shifts of the generators; their R-span is the code."""
        from .ringpoly import shifts

        rows = []
        for g in self.generators:
            if any(not self.poly_ring.R.is_zero(x) for x in g):
                rows.extend(shifts(g))
        return rows

    @property
    def echelon(self):
        return self._realize(
            "echelon", lambda: theta_adic_echelon(self.poly_ring.R, self.generator_rows())
        )

    def report(self, ell: int = 0) -> dict:
        D = self.dual(ell)
        H = self.hull(ell)
        return {
            "ring": self.spec.to_json(),
            "ell": ell,
            "multiset": self.multiset.to_json(),
            "params": list(self.params),
            "qdim": self.qdim,
            "dual": {"multiset": D.multiset.to_json(), "params": list(D.params), "qdim": D.qdim},
            "hull": {"multiset": H.multiset.to_json(), "params": list(H.params), "qdim": H.qdim},
            "lcd": self.is_lcd(ell),
            "selfOrthogonal": self.is_self_orthogonal(ell),
            "selfDual": self.is_self_dual(ell),
        }


def code_from_multiset(spec: RingSpec, A: DefiningMultiset) -> CyclicSerialCode:
    """Build the code and check that the ring has element arithmetic."""
    spec.ring()
    return CyclicSerialCode(spec, A)


def dual_multiset(A: DefiningMultiset, p: int, ell: int = 0) -> DefiningMultiset:
    return A.dual(p, ell)


def hull_multiset(A: DefiningMultiset, p: int, ell: int = 0) -> DefiningMultiset:
    return A.hull(p, ell)
