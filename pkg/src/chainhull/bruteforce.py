"""Exhaustive oracle over tiny rings.

Codes are realized as explicit sets of vectors, duals by scanning all of
R^n, hulls by set intersection.  Nothing here touches the multiset algebra
apart from reading a code's generator polynomials once.

Vectors are encoded as integers sum_j idx(v_j) * |R|^j where idx is the
ring's element index; sets of vectors are sorted int64 arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError, ValidationError, VerificationError
from .ringpoly import ChainRing, RingSpec, chain_ring
from .serialcodes import CyclicSerialCode

DEFAULT_BUDGET = 1 << 24
_SCAN_CHUNK = 1 << 18


class BruteRing:
    """Lookup tables for a small chain ring, indexed by element index."""

    def __init__(self, R: ChainRing):
        self.R = R
        N = R.size
        self.N = N
        elems = R.elements()
        idx = {x: i for i, x in enumerate(elems)}
        self.elems = elems
        self.add = np.array([[idx[R.add(x, y)] for y in elems] for x in elems], dtype=np.int64)
        self.mul = np.array([[idx[R.mul(x, y)] for y in elems] for x in elems], dtype=np.int64)
        self.neg = np.array([idx[R.neg(x)] for x in elems], dtype=np.int64)
        self.theta = np.array([idx[R.theta_mul(x)] for x in elems], dtype=np.int64)
        sig = [np.arange(N, dtype=np.int64)]
        for _ in range(1, R.r):
            sig.append(np.array([idx[R.sigma(elems[i])] for i in sig[-1]], dtype=np.int64))
        self.sigma = sig  # sigma[h][i] = idx(sigma^h(x_i))
        field_elems = {}
        self.pi = np.array(
            [field_elems.setdefault(R.pi(x), len(field_elems)) for x in elems], dtype=np.int64
        )
        self.q = len(field_elems)
        self.zero = idx[R.zero]
        if self.zero != 0:
            raise AssertionError("element index 0 must be the zero element")

    def sigma_pow(self, h: int) -> np.ndarray:
        return self.sigma[h % self.R.r]


@lru_cache(maxsize=None)
def brute_ring(spec: RingSpec) -> BruteRing:
    return BruteRing(chain_ring(spec))


@dataclass
class Space:
    """R^n with vector encode/decode helpers."""

    B: BruteRing
    n: int

    @property
    def size(self) -> int:
        return self.B.N**self.n

    def check_budget(self, budget: int | None) -> None:
        budget = DEFAULT_BUDGET if budget is None else budget
        if self.size > budget:
            raise BudgetExceededError(
                f"|R|^n = {self.B.N}^{self.n} = {self.size} exceeds the scan budget {budget}"
            )

    def encode(self, digits: np.ndarray) -> np.ndarray:
        """(m, n) element indices -> (m,) keys."""
        w = self.B.N ** np.arange(self.n, dtype=np.int64)
        return digits.astype(np.int64, copy=False) @ w

    def decode(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        out = np.empty((keys.size, self.n), dtype=np.int64)
        k = keys.copy()
        for j in range(self.n):
            k, out[:, j] = np.divmod(k, self.B.N)
        return out

    def chunks(self):
        """(keys, digits) over all of R^n in key order."""
        allv = _all_vectors(self.B.N, self.n)
        for start in range(0, self.size, _SCAN_CHUNK):
            stop = min(start + _SCAN_CHUNK, self.size)
            yield np.arange(start, stop, dtype=np.int64), allv[start:stop]

    def vector_to_indices(self, v: Sequence) -> np.ndarray:
        R = self.B.R
        return np.array([R.index(x) for x in v], dtype=np.int64)

    def to_json(self, key: int) -> list:
        R = self.B.R
        return [R.to_json(self.B.elems[i]) for i in self.decode(np.array([key]))[0]]

    # -- linear algebra on index arrays --

    def scal(self, c: int, V: np.ndarray) -> np.ndarray:
        return self.B.mul[c][V]

    def vadd(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        return self.B.add[U, V]

    def inner(self, U: np.ndarray, g: np.ndarray, ell: int) -> np.ndarray:
        """<u, g>_ell for every row u of U."""
        sg = self.B.sigma_pow(ell)[g]
        acc = np.zeros(U.shape[0], dtype=np.int64)
        for j in range(self.n):
            acc = self.B.add[acc, self.B.mul[U[:, j], sg[j]]]
        return acc


@lru_cache(maxsize=4)
def _all_vectors(N: int, n: int) -> np.ndarray:
    """Digits of every key in [0, N^n), one row per key (read-only)."""
    keys = np.arange(N**n, dtype=np.int64)
    dtype = np.uint8 if N <= 256 else np.int64
    out = np.empty((keys.size, n), dtype=dtype)
    for j in range(n):
        out[:, j] = (keys // N**j) % N
    out.flags.writeable = False
    return out


def space_for(code: CyclicSerialCode) -> Space:
    return Space(brute_ring(code.spec), code.n)


def span_keys(
    S: Space, rows: Sequence[np.ndarray], budget: int | None = None, start: np.ndarray | None = None
) -> np.ndarray:
    """Sorted keys of the R-span of the given index rows (plus the module ``start``)."""
    S.check_budget(budget)
    keys = np.array([0], dtype=np.int64) if start is None else start
    N = S.B.N
    for g in rows:
        g = np.asarray(g, dtype=np.int64)
        gk = S.encode(g[None, :])[0]
        if np.searchsorted(keys, gk) < keys.size and keys[np.searchsorted(keys, gk)] == gk:
            continue
        multiples = np.unique(S.encode(np.stack([S.scal(c, g) for c in range(N)])))
        M = S.decode(multiples)
        step = max(1, _SCAN_CHUNK // len(multiples))
        parts = []
        for start in range(0, keys.size, step):
            V = S.decode(keys[start : start + step])
            combo = S.B.add[V[:, None, :], M[None, :, :]].reshape(-1, S.n)
            parts.append(np.unique(S.encode(combo)))
        keys = np.unique(np.concatenate(parts))
    return keys


def enumerate_codewords(code: CyclicSerialCode, budget: int | None = None) -> np.ndarray:
    S = space_for(code)
    rows = [S.vector_to_indices(r) for r in code.generator_rows()]
    keys = span_keys(S, rows, budget)
    expected = code.spec.q**code.qdim
    if keys.size != expected:
        raise VerificationError(
            f"code has {keys.size} codewords, expected q^qdim = {expected}",
            {"multiset": code.multiset.to_json(), "size": int(keys.size), "expected": expected},
        )
    return keys


def greedy_generators(S: Space, keys: np.ndarray) -> list[np.ndarray]:
    """A generating set of the module with the given keys, picked greedily in key order."""
    gens: list[np.ndarray] = []
    span = np.array([0], dtype=np.int64)
    while span.size < keys.size:
        missing = np.setdiff1d(keys, span, assume_unique=True)
        g = S.decode(missing[:1])[0]
        gens.append(g)
        span = span_keys(S, [g], start=span)
        if np.setdiff1d(span, keys, assume_unique=True).size:
            raise ValidationError("key set is not closed under R-linear combinations")
    return gens


def dual_of_keys(S: Space, keys: np.ndarray, ell: int = 0, budget: int | None = None) -> np.ndarray:
    """All u in R^n with <u, c>_ell = 0 for every c in the module ``keys``."""
    S.check_budget(budget)
    if not 0 <= ell < S.B.R.r:
        raise ValidationError(f"ell={ell} must lie in [0, {S.B.R.r - 1}]")
    gens = greedy_generators(S, keys)
    found = []
    for ukeys, U in S.chunks():
        for g in gens:
            keep = S.inner(U, g, ell) == S.B.zero
            ukeys, U = ukeys[keep], U[keep]
            if not ukeys.size:
                break
        found.append(ukeys)
    dual = np.concatenate(found)
    if dual.size * keys.size != S.size:
        raise VerificationError(
            f"|C| * |C^perp| = {keys.size} * {dual.size} != |R|^n = {S.size}",
            {"codeSize": int(keys.size), "dualSize": int(dual.size)},
        )
    return dual


def brute_dual(code: CyclicSerialCode, ell: int = 0, budget: int | None = None) -> np.ndarray:
    S = space_for(code)
    return dual_of_keys(S, enumerate_codewords(code, budget), ell, budget)


def brute_hull(code: CyclicSerialCode, ell: int = 0, budget: int | None = None) -> np.ndarray:
    C = enumerate_codewords(code, budget)
    D = brute_dual(code, ell, budget)
    return np.intersect1d(C, D, assume_unique=True)


def sigma_keys(S: Space, keys: np.ndarray, h: int) -> np.ndarray:
    return np.unique(S.encode(S.B.sigma_pow(h)[S.decode(keys)]))


def is_module_sampled(S: Space, keys: np.ndarray, rng: np.random.Generator, samples: int = 200) -> bool:
    """Closure of the key set under a + c*b on random samples."""
    if keys.size == 0 or keys[0] != 0:
        return False
    V = S.decode(keys)
    a = V[rng.integers(keys.size, size=samples)]
    b = V[rng.integers(keys.size, size=samples)]
    c = rng.integers(S.B.N, size=samples)
    comb = S.B.add[a, S.B.mul[c[:, None], b]]
    got = S.encode(comb)
    pos = np.searchsorted(keys, got).clip(max=keys.size - 1)
    return bool(np.all(keys[pos] == got))


def _log_exact(count: int, q: int) -> int:
    d = 0
    while count > 1:
        if count % q:
            raise VerificationError(f"{count} is not a power of {q}")
        count //= q
        d += 1
    return d


def profile_of_set(S: Space, keys: np.ndarray, rng: np.random.Generator | None = None) -> tuple[int, ...]:
    """(k_0, ..., k_{s-1}) of a submodule from its torsion codes.

    dim over F_q of pi({x : theta^t x in S}) equals k_0 + ... + k_t.
    """
    rng = rng or np.random.default_rng(0)
    if not is_module_sampled(S, keys, rng):
        raise ValidationError("set is not closed under R-linear combinations")
    B = S.B
    s = B.R.s
    dims = []
    for t in range(s):
        mask_parts = []
        for ukeys, U in S.chunks():
            Ut = U
            for _ in range(t):
                Ut = B.theta[Ut]
            k = S.encode(Ut)
            pos = np.searchsorted(keys, k).clip(max=keys.size - 1)
            mask_parts.append(U[keys[pos] == k])
        T = np.concatenate(mask_parts)
        residues = np.unique(B.pi[T] @ (B.q ** np.arange(S.n, dtype=np.int64)))
        dims.append(_log_exact(residues.size, B.q))
    return tuple(dims[0:1] + [dims[t] - dims[t - 1] for t in range(1, s)])


def witness(S: Space, a: np.ndarray, b: np.ndarray) -> dict:
    """Smallest element of a \\ b and of b \\ a, as JSON vectors."""
    out = {}
    only_a = np.setdiff1d(a, b, assume_unique=True)
    only_b = np.setdiff1d(b, a, assume_unique=True)
    if only_a.size:
        out["onlyAnalytic"] = S.to_json(int(only_a[0]))
    if only_b.size:
        out["onlyBrute"] = S.to_json(int(only_b[0]))
    return out


def check_hull(
    code: CyclicSerialCode, ell: int = 0, budget: int | None = None, rng: np.random.Generator | None = None
) -> dict:
    """Compare the analytic hull with C intersect C^perp; raise on mismatch."""
    S = space_for(code)
    C = enumerate_codewords(code, budget)
    D = dual_of_keys(S, C, ell, budget)
    brute = np.intersect1d(C, D, assume_unique=True)
    H = code.hull(ell)
    analytic = enumerate_codewords(H, budget)
    D_analytic = enumerate_codewords(code.dual(ell), budget)
    info = {
        "multiset": code.multiset.to_json(),
        "ell": ell,
        "hullSize": int(brute.size),
    }
    if not np.array_equal(D, D_analytic):
        info["dual"] = witness(S, D_analytic, D)
        raise VerificationError("analytic dual differs from the brute-force dual", info)
    if not np.array_equal(brute, analytic):
        info["hull"] = witness(S, analytic, brute)
        raise VerificationError("analytic hull differs from the brute-force hull", info)
    prof = profile_of_set(S, brute, rng)
    if prof != H.params:
        info["profile"] = {"brute": list(prof), "analytic": list(H.params)}
        raise VerificationError("hull parameter profiles differ", info)
    info["profile"] = list(prof)
    return info


def run_grid(grid: list[dict], budget: int | None = None, seed: int = 0) -> dict:
    """Oracle check over a grid of {"ring": "Z4" | "p,a,r,e,s", "n": [..], "ell": [..] (optional)}."""
    from .serialcodes import DefiningMultiset

    rng = np.random.default_rng(seed)
    checked = 0
    for entry in grid:
        spec = RingSpec.parse(entry["ring"]) if isinstance(entry["ring"], str) else RingSpec(**entry["ring"])
        ns = entry["n"] if isinstance(entry["n"], list) else [entry["n"]]
        ells = entry.get("ell", list(range(spec.r)))
        for n in ns:
            for A in DefiningMultiset.all(n, spec.q, spec.s):
                code = CyclicSerialCode(spec, A)
                for ell in ells:
                    check_hull(code, ell, budget, rng)
                    checked += 1
    return {"checked": checked, "mismatches": 0}


def load_grid(text: str) -> list[dict]:
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = obj.get("grid", [obj])
    if not isinstance(obj, list):
        raise ValidationError("grid must be a JSON list of entries")
    return obj
