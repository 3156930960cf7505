"""Parameters, dimension counts and averages of Euclidean hulls of cyclic serial codes.

Everything here depends on the ring only through p, q = p^r and s.  Hull
dimensions are q-dimensions; averages are exact ``Fraction`` values.

Per coset the hull contribution is simple.  A symmetric coset placed at
level L sits at hull level max(L, s-L).  A pair (F, -F) with F at level b and
-F at level c has F at hull level max(b, s-c) and -F at max(c, s-b).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from . import cosetlab
from .errors import BudgetExceededError, ValidationError
from .ringpoly import RingSpec
from .serialcodes import cumulative, level_to_vector, vector_to_level

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16


def default_budget() -> int:
    env = os.environ.get("HULLCTL_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"HULLCTL_BUDGET={env!r} is not an integer") from None
    return DEFAULT_BUDGET


def E_vectors(s: int) -> list[tuple[int, ...]]:
    """E_s: the zero vector and the s unit vectors of length s."""
    return [level_to_vector(t, s) for t in range(s + 1)]


def triangle(x: Sequence[int]) -> int:
    s = len(x)
    vector_to_level(x, s)
    return sum(min(sum(x[: t + 1]), 1 - sum(x[: s - t])) for t in range(s))


def blacktriangle(y: Sequence[int], z: Sequence[int]) -> int:
    s = len(y)
    if len(z) != s:
        raise ValidationError("y and z must have the same length")
    vector_to_level(y, s)
    vector_to_level(z, s)
    return sum(
        min(sum(y[: t + 1]), 1 - sum(z[: s - t])) + min(sum(z[: t + 1]), 1 - sum(y[: s - t]))
        for t in range(s)
    )


@dataclass(frozen=True)
class DeltaTables:
    s: int
    psi: dict[int, int]
    rho: dict[int, int]

    def mean_triangle(self) -> Fraction:
        return Fraction(sum(k * v for k, v in self.psi.items()), self.s + 1)

    def mean_blacktriangle(self) -> Fraction:
        return Fraction(sum(k * v for k, v in self.rho.items()), (self.s + 1) ** 2)


def delta_tables(s: int) -> DeltaTables:
    if s < 1:
        raise ValidationError("s must be positive")
    E = E_vectors(s)
    psi = Counter(triangle(x) for x in E)
    rho = Counter(blacktriangle(y, z) for y in E for z in E)
    closed = {eta: 2 * (eta + 1) for eta in range(s)}
    closed[s] = s + 1
    if dict(rho) != closed:
        raise AssertionError(f"rho_{s} = {dict(rho)} disagrees with its closed form {closed}")
    return DeltaTables(s, dict(sorted(psi.items())), dict(sorted(rho.items())))


def mean_triangle_closed(s: int) -> Fraction:
    c = ceil(s / 2)
    return Fraction(c * (s - c), s + 1)


def mean_blacktriangle_closed(s: int) -> Fraction:
    return Fraction(s * (2 * s + 1), 3 * (s + 1))


# -- divisor data ----------------------------------------------------------------


@dataclass(frozen=True)
class DivisorData:
    """(ord, gamma) per divisor in N_q and (ord, beta) per divisor outside it."""

    n: int
    q: int
    sym: tuple[tuple[int, int, int], ...]  # (i, ord_i, gamma_i)
    asym: tuple[tuple[int, int, int], ...]  # (j, ord_j, beta_j)

    @property
    def Bnq(self) -> int:
        return sum(cosetlab.euler_phi(i) for i, _, _ in self.sym)

    @property
    def omega(self) -> int:
        return sum(g for _, _, g in self.sym) + 2 * sum(b for _, _, b in self.asym)


def divisor_data(n: int, q: int) -> DivisorData:
    if n < 1:
        raise ValidationError(f"length must be positive, got {n}")
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}")
    if np.gcd(n, q) != 1:
        raise ValidationError(f"gcd(n={n}, q={q}) != 1")
    sym, asym = [], []
    for d in cosetlab.divisors(n):
        g, b = cosetlab.gamma_beta(d, q)
        m = cosetlab.mult_order(q, d)
        if g:
            sym.append((d, m, g))
        if b:
            asym.append((d, m, b))
    return DivisorData(n, q, tuple(sym), tuple(asym))


def _check_ring(n: int, spec: RingSpec) -> None:
    if n < 1:
        raise ValidationError(f"length must be positive, got {n}")
    if n % spec.p == 0:
        raise ValidationError(f"gcd(n={n}, p={spec.p}) != 1")


# -- reports ---------------------------------------------------------------------


@dataclass
class HullReport:
    ring: RingSpec
    n: int
    method: str
    tuples: dict[tuple[int, ...], int | None]
    aleph: list[int] = field(default_factory=list)
    counts: dict[int, int] = field(default_factory=dict)
    average: Fraction | None = None
    Bnq: int = 0
    ell: int = 0
    extra: dict = field(default_factory=dict)

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)

    def to_json(self) -> dict:
        out = {
            "method": self.method,
            "n": self.n,
            "ring": self.ring.to_json(),
            "ell": self.ell,
            "tuples": [{"k": list(k), "count": self.tuples[k]} for k in self.sorted_tuples()],
            "aleph": sorted(self.aleph),
            "counts": [{"tau": t, "count": c} for t, c in sorted(self.counts.items())],
            "average": None
            if self.average is None
            else {"num": self.average.numerator, "den": self.average.denominator},
            "Bnq": self.Bnq,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "HullReport":
        avg = obj.get("average")
        return cls(
            ring=RingSpec(**obj["ring"]),
            n=obj["n"],
            method=obj["method"],
            tuples={tuple(row["k"]): row["count"] for row in obj["tuples"]},
            aleph=list(obj.get("aleph", [])),
            counts={row["tau"]: row["count"] for row in obj.get("counts", [])},
            average=None if avg is None else Fraction(avg["num"], avg["den"]),
            Bnq=obj.get("Bnq", 0),
            ell=obj.get("ell", 0),
            extra=obj.get("extra", {}),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HullReport) and self.to_json() == other.to_json()

    def table_rows(self) -> list[tuple[tuple[int, ...], list[int]]]:
        """Group tuples by all but the last entry: (prefix, sorted last entries)."""
        groups: dict[tuple[int, ...], list[int]] = {}
        for k in self.sorted_tuples():
            groups.setdefault(k[:-1], []).append(k[-1])
        return [(pre, sorted(v)) for pre, v in sorted(groups.items())]

    def to_csv(self) -> str:
        s = self.ring.s
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if s >= 2:
            w.writerow([f"k{t}" for t in range(s - 1)] + [f"k{s - 1} values"])
            for pre, last in self.table_rows():
                w.writerow(list(pre) + [" ".join(map(str, last))])
        else:
            w.writerow(["k0", "count"])
            for k in self.sorted_tuples():
                w.writerow([k[0], self.tuples[k] if self.tuples[k] is not None else ""])
        return buf.getvalue()

    def to_table(self) -> str:
        """Plain-text table; repeated leading entries are blanked as in a printed table."""
        s = self.ring.s
        lines = []
        if s < 2:
            lines.append("k0")
            lines.extend(str(k[0]) for k in self.sorted_tuples())
            return "\n".join(lines)
        header = [f"k{t}" for t in range(s)]
        rows = []
        prev: tuple = ()
        for pre, last in self.table_rows():
            shown = []
            for i, v in enumerate(pre):
                same = len(prev) > i and prev[: i + 1] == pre[: i + 1]
                shown.append("" if same else str(v))
            rows.append(shown + [", ".join(map(str, last))])
            prev = pre
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for r in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines)


def report_from_json_text(text: str) -> HullReport:
    return HullReport.from_json(json.loads(text))


# -- Algorithm 1 -------------------------------------------------------------------


def _weighted_values(parts: Sequence[tuple[int, int]]) -> set[int]:
    """All sums sum ord * m with 0 <= m <= bound, for (ord, bound) pairs."""
    vals = {0}
    for ord_, bound in parts:
        vals = {v + ord_ * m for v in vals for m in range(bound + 1)}
    return vals


def algorithm1(n: int, spec: RingSpec) -> HullReport:
    """Candidate hull parameters by the per-step bound recursion.

    For n in N_q only levels t >= ceil(s/2) can be nonzero.  Otherwise the
    pair counts nu^(t) per divisor outside N_q are bounded by
    beta - nu^(t-1) below ceil(s/2) and 2(beta - nu^(t-1)) from there on,
    and prefixes must satisfy 2k_0 + k_1 + ... + k_t <= n.
    """
    _check_ring(n, spec)
    s, q = spec.s, spec.q
    c = ceil(s / 2)
    dd = divisor_data(n, q)
    mu_vals = sorted(_weighted_values([(m, g) for _, m, g in dd.sym]))
    tuples: set[tuple[int, ...]] = set()
    if cosetlab.in_Nq(n, q):
        options = [[0] if t < c else mu_vals for t in range(s)]
        for k in itertools.product(*options):
            if sum(k) <= n:
                tuples.add(tuple(k))
    else:
        ords = [m for _, m, _ in dd.asym]
        betas = [b for _, _, b in dd.asym]

        def extend(t: int, prev_nu: tuple[int, ...], prefix: tuple[int, ...], weight: int):
            if t == s:
                tuples.add(prefix)
                return
            if t == 0:
                bounds = betas
            elif t < c:
                bounds = [b - v for b, v in zip(betas, prev_nu)]
            else:
                bounds = [2 * (b - v) for b, v in zip(betas, prev_nu)]
            extra = mu_vals if t >= c else [0]
            for nu in itertools.product(*(range(max(b, 0) + 1) for b in bounds)):
                base = sum(o * v for o, v in zip(ords, nu))
                for mu in extra:
                    k = base + mu
                    w = weight + (2 * k if t == 0 else k)
                    if w <= n:
                        extend(t + 1, nu, prefix + (k,), w)

        extend(0, tuple(0 for _ in betas), (), 0)
    return HullReport(
        ring=spec,
        n=n,
        method="algorithm1",
        tuples={k: None for k in tuples},
        Bnq=dd.Bnq,
    )


# -- exact enumeration -------------------------------------------------------------


def _symmetric_contribution(x: Sequence[int], s: int) -> tuple[list[int], int]:
    """Hull indicator steps for a symmetric coset with vector x.

    Returns (per-level counts d_t = u^[t-1] - u^[t], hull q-dim weight).
    """
    # the dual of a symmetric coset at level L sits at level s - L; on
    # cumulative indicators the hull takes the maximum
    L = vector_to_level(x, s)
    dual = level_to_vector(s - L, s)
    u = [max(cumulative(x, t), cumulative(dual, t)) for t in range(-1, s)]
    steps = [u[t] - u[t + 1] for t in range(s)]
    return steps, sum((s - t) * d for t, d in enumerate(steps))


def _pair_contribution(y: Sequence[int], z: Sequence[int], s: int) -> list[int]:
    """epsilon^(t-1) - epsilon^(t) for a pair with vectors (y, z)."""
    # F at hull level > t  iff  y^[t] = 1 or z has its level below s - t
    def hull_cum(a, b, t):
        if t < 0:
            return 1
        return max(cumulative(a, t), sum(b[: s - t]))

    eps = [hull_cum(y, z, t) + hull_cum(z, y, t) for t in range(-1, s)]
    steps = [eps[t] - eps[t + 1] for t in range(s)]
    if any(d < 0 for d in steps):
        raise AssertionError(f"epsilon sequence increases for y={y}, z={z}")
    return steps


def _triple_tables(n: int, spec: RingSpec):
    """Per coset unit: option count and per-option k contribution arrays."""
    s, q = spec.s, spec.q
    atlas = cosetlab.build_atlas(n, q)
    E = E_vectors(s)
    radices, tables = [], []
    for cs in atlas.symmetric:
        rows = []
        for x in E:
            steps, _ = _symmetric_contribution(x, s)
            rows.append([len(cs) * d for d in steps])
        radices.append(len(E))
        tables.append(np.array(rows, dtype=np.int64))
    for F, _ in atlas.pairs:
        rows = []
        for y in E:
            for z in E:
                rows.append([len(F) * d for d in _pair_contribution(y, z, s)])
        radices.append(len(E) ** 2)
        tables.append(np.array(rows, dtype=np.int64))
    return radices, tables


def _galois_tables(n: int, spec: RingSpec, ell: int):
    """Per coset option tables for the ell-Galois hull, using coset levels directly.

    The dual places z at level s - level(-p^{-ell} z); cosets linked by
    that map form cycles, and each cycle is one enumeration unit.
    """
    s, q = spec.s, spec.q
    atlas = cosetlab.build_atlas(n, q)
    u = (-pow(spec.p, -ell, n)) % n if n > 1 else 0
    partner = [atlas.coset_index(u * c.rep % n if n > 1 else 0) for c in atlas.cosets]
    seen = [False] * atlas.omega
    radices, tables = [], []
    for start in range(atlas.omega):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = partner[i]
        pos = {ci: k for k, ci in enumerate(cycle)}
        rows = []
        for levels in itertools.product(range(s + 1), repeat=len(cycle)):
            k = [0] * s
            for ci in cycle:
                h = max(levels[pos[ci]], s - levels[pos[partner[ci]]])
                if h < s:
                    k[h] += len(atlas.cosets[ci])
            rows.append(k)
        radices.append((s + 1) ** len(cycle))
        tables.append(np.array(rows, dtype=np.int64))
    return radices, tables


def _tally_chunk(radices, tables, s: int, start: int, stop: int) -> Counter:
    idx = np.arange(start, stop, dtype=np.int64)
    k = np.zeros((stop - start, s), dtype=np.int64)
    for rad, tab in zip(radices, tables):
        idx, digit = np.divmod(idx, rad)
        k += tab[digit]
    uniq, counts = np.unique(k, axis=0, return_counts=True)
    return Counter({tuple(int(v) for v in row): int(c) for row, c in zip(uniq, counts)})


def exact_enumeration(
    n: int, spec: RingSpec, ell: int = 0, budget: int | None = None, jobs: int = 1
) -> HullReport:
    """Tally hull parameters over every cyclic serial code of length n.

    The (s+1)^omega codes are visited in mixed-radix order.  For ell = 0 the
    per-coset contributions come from the triple-sequence formulas; for
    ell > 0 from coset levels under the map z -> -p^{-ell} z.
    """
    _check_ring(n, spec)
    if not 0 <= ell < spec.r:
        raise ValidationError(f"ell={ell} must lie in [0, {spec.r - 1}]")
    budget = default_budget() if budget is None else budget
    s = spec.s
    atlas = cosetlab.build_atlas(n, spec.q)
    total = (s + 1) ** atlas.omega
    if total > budget:
        raise BudgetExceededError(
            f"{total} codes of length {n} exceed the enumeration budget {budget}"
        )
    if ell == 0:
        radices, tables = _triple_tables(n, spec)
    else:
        radices, tables = _galois_tables(n, spec, ell)
    chunks = [(a, min(a + _CHUNK, total)) for a in range(0, total, _CHUNK)]
    tally: Counter = Counter()
    if jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(lambda ab: _tally_chunk(radices, tables, s, *ab), chunks):
                tally.update(part)
    else:
        for a, b in chunks:
            tally.update(_tally_chunk(radices, tables, s, a, b))
    counts: Counter = Counter()
    for k, c in tally.items():
        counts[sum((s - t) * v for t, v in enumerate(k))] += c
    if sum(counts.values()) != total:
        raise AssertionError("tally does not cover every code")
    avg = Fraction(sum(t * c for t, c in counts.items()), total)
    return HullReport(
        ring=spec,
        n=n,
        method="exact",
        tuples=dict(sorted(tally.items())),
        aleph=sorted(counts),
        counts=dict(sorted(counts.items())),
        average=avg,
        Bnq=divisor_data(n, spec.q).Bnq,
        ell=ell,
    )


# -- counting formulas ----------------------------------------------------------------


def _convolve(dist: dict[int, int], step: dict[int, int]) -> dict[int, int]:
    out: Counter = Counter()
    for a, ca in dist.items():
        for b, cb in step.items():
            out[a + b] += ca * cb
    return dict(out)


def hull_dimension_distribution(n: int, s: int, q: int) -> dict[int, int]:
    """tau -> number of codes whose Euclidean hull has q-dimension tau."""
    dd = divisor_data(n, q)
    tabs = delta_tables(s)
    dist = {0: 1}
    for _, m, g in dd.sym:
        step = {m * k: v for k, v in tabs.psi.items()}
        for _ in range(g):
            dist = _convolve(dist, step)
    for _, m, b in dd.asym:
        step = {m * k: v for k, v in tabs.rho.items()}
        for _ in range(b):
            dist = _convolve(dist, step)
    return dict(sorted(dist.items()))


def aleph(n: int, s: int, q: int) -> set[int]:
    """All achievable q-dimensions of Euclidean hulls."""
    dd = divisor_data(n, q)
    E = E_vectors(s)
    tri = {triangle(x) for x in E}
    btri = {blacktriangle(y, z) for y in E for z in E}
    vals = {0}
    for _, m, g in dd.sym:
        for _ in range(g):
            vals = {v + m * d for v in vals for d in tri}
    for _, m, b in dd.asym:
        for _ in range(b):
            vals = {v + m * d for v in vals for d in btri}
    return vals


def count_hulls(n: int, tau: int, spec: RingSpec) -> int:
    _check_ring(n, spec)
    return hull_dimension_distribution(n, spec.s, spec.q).get(tau, 0)


def average_dim(n: int, spec: RingSpec) -> Fraction:
    """Exact mean q-dimension of the Euclidean hull over all cyclic serial codes."""
    _check_ring(n, spec)
    s = spec.s
    B = divisor_data(n, spec.q).Bnq
    lead = Fraction(s * (2 * s + 1), 6 * (s + 1))
    if s % 2 == 0:
        corr = Fraction(s * (s + 2), 12 * (s + 1))
    else:
        corr = Fraction(s * s + 2 * s + 3, 12 * (s + 1))
    E = lead * n - corr * B
    et, eb = mean_triangle_closed(s), mean_blacktriangle_closed(s)
    if E != Fraction(n, 2) * eb - B * (eb / 2 - et):
        raise AssertionError("closed form disagrees with the expectation identity")
    if cosetlab.in_Nq(n, spec.q):
        collapsed = Fraction(s * s * n, 4 * (s + 1)) if s % 2 == 0 else Fraction(n * (s - 1), 4)
        if E != collapsed:
            raise AssertionError("closed form disagrees with its n in N_q specialization")
    return E


def bounds(n: int, spec: RingSpec) -> tuple[Fraction, Fraction]:
    """Lower/upper bounds on the average that hold for every n outside N_q.

    For n in N_q the average is known exactly and returned as both bounds.
    """
    _check_ring(n, spec)
    s = spec.s
    if cosetlab.in_Nq(n, spec.q):
        E = average_dim(n, spec)
        return E, E
    if s % 2 == 0:
        lower = Fraction((5 * s + 1) * s * n, 18 * (s + 1))
        upper = Fraction(2 * n * (2 * s + 1) * s - (s + 2) * s, 12 * (s + 1))
    else:
        lower = Fraction((5 * s * s + s - 3) * n, 18 * (s + 1))
        upper = Fraction(2 * n * s * (2 * s + 1) - (s * s + 2 * s + 3), 12 * (s + 1))
    return lower, upper


def full_report(n: int, spec: RingSpec, budget: int | None = None, jobs: int = 1) -> HullReport:
    """Exact enumeration with aleph, counts and the closed-form average attached."""
    rep = exact_enumeration(n, spec, budget=budget, jobs=jobs)
    rep.extra["closedFormAverage"] = {
        "num": average_dim(n, spec).numerator,
        "den": average_dim(n, spec).denominator,
    }
    return rep


def algorithm1_minus_exact(n: int, spec: RingSpec, budget: int | None = None) -> dict:
    alg = set(algorithm1(n, spec).tuples)
    ex = set(exact_enumeration(n, spec, budget=budget).tuples)
    return {
        "onlyAlgorithm1": sorted(alg - ex),
        "onlyExact": sorted(ex - alg),
    }
