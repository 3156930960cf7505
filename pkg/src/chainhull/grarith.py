"""Galois ring arithmetic and the basic-irreducible factorization of X^n - 1.

GR(p^a, r) is realized as Z_{p^a}[X]/(f) where f is the Teichmuller lift of
the lexicographically smallest primitive polynomial of degree r over F_p, so
the class of X has multiplicative order p^r - 1.  The residue field F_{p^r}
is the same construction with a = 1.  Elements are tuples of r integers
(coefficients of 1, X, ..., X^{r-1}).

Polynomials over any of the coefficient rings in this package are plain
lists of elements, constant term first; the ``poly_*`` helpers take the
coefficient ring as first argument and only need add/sub/mul/neg/zero/one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import cosetlab
from .errors import ValidationError

Elem = tuple  # tuple[int, ...]


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    return cosetlab.factorize(m) == {m: 1}


class GaloisRing:
    """GR(p^a, r) = Z_{p^a}[X]/(modulus); a = 1 gives the field F_{p^r}."""

    def __init__(self, p: int, a: int, r: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise ValidationError(f"p={p} is not prime")
        if a < 1 or r < 1:
            raise ValidationError("a and r must be positive")
        modulus = tuple(int(c) % p**a for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ValidationError(f"modulus must be monic of degree {r}")
        self.p, self.a, self.r = p, a, r
        self.pa = p**a
        self.q = p**r
        self.modulus = modulus
        self.zero = (0,) * r
        self.one = (1,) + (0,) * (r - 1)
        self.gen = (0, 1) + (0,) * (r - 2) if r > 1 else ((-modulus[0]) % self.pa,)
        # X^{r+k} mod modulus, k = 0..r-2
        red = []
        cur = [(-c) % self.pa for c in modulus[:r]]
        for _ in range(max(r - 1, 0)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(x - top * m) % self.pa for x, m in zip(cur, modulus[:r])]
        self._red = red

    def __repr__(self) -> str:
        return f"GR({self.p}^{self.a}, {self.r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GaloisRing) and (self.pa, self.r, self.modulus) == (
            other.pa,
            other.r,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.pa, self.r, self.modulus))

    @property
    def is_field(self) -> bool:
        return self.a == 1

    @property
    def size(self) -> int:
        return self.pa**self.r

    # -- element arithmetic -------------------------------------------------

    def from_int(self, c: int) -> Elem:
        return (c % self.pa,) + (0,) * (self.r - 1)

    def add(self, x: Elem, y: Elem) -> Elem:
        m = self.pa
        return tuple((u + v) % m for u, v in zip(x, y))

    def sub(self, x: Elem, y: Elem) -> Elem:
        m = self.pa
        return tuple((u - v) % m for u, v in zip(x, y))

    def neg(self, x: Elem) -> Elem:
        m = self.pa
        return tuple((-u) % m for u in x)

    def scalar(self, c: int, x: Elem) -> Elem:
        m = self.pa
        return tuple(c * u % m for u in x)

    def mul(self, x: Elem, y: Elem) -> Elem:
        r, m = self.r, self.pa
        if r == 1:
            return (x[0] * y[0] % m,)
        prod = [0] * (2 * r - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    if v:
                        prod[i + j] += u * v
        out = prod[:r]
        for k, c in enumerate(prod[r:]):
            if c:
                row = self._red[k]
                for i in range(r):
                    out[i] += c * row[i]
        return tuple(v % m for v in out)

    def pow(self, x: Elem, e: int) -> Elem:
        if e < 0:
            return self.pow(self.inverse(x), -e)
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_zero(self, x: Elem) -> bool:
        return not any(x)

    def is_unit(self, x: Elem) -> bool:
        return any(u % self.p for u in x)

    def inverse(self, x: Elem) -> Elem:
        if not self.is_unit(x):
            raise ValidationError(f"{x} is not a unit in {self}")
        order = self.q ** (self.a - 1) * (self.q - 1)
        return self.pow(x, order - 1)

    def valuation(self, x: Elem) -> int:
        """p-adic valuation, with valuation(0) = a."""
        v = self.a
        for u in x:
            if u:
                k = 0
                while u % self.p == 0:
                    u //= self.p
                    k += 1
                v = min(v, k)
        return v

    def div_p(self, x: Elem, k: int = 1) -> Elem:
        """Some y with p^k * y = x; x must be divisible by p^k."""
        d = self.p**k
        if any(u % d for u in x):
            raise ValidationError(f"{x} is not divisible by {self.p}^{k}")
        return tuple(u // d for u in x)

    def pi(self, x: Elem) -> Elem:
        """Reduction modulo p, as an element of the residue field."""
        return tuple(u % self.p for u in x)

    def residue_field(self) -> "GaloisRing":
        return galois_ring(self.p, 1, self.r)

    def teichmuller(self, x: Elem) -> Elem:
        """Unique Teichmuller element congruent to x modulo p."""
        y = x
        for _ in range(self.a - 1):
            y = self.pow(y, self.q)
        return y

    def teichmuller_digits(self, x: Elem) -> list[Elem]:
        """Teichmuller digits (t_0, ..., t_{a-1}) with x = sum t_k p^k."""
        digits = []
        cur = x
        for k in range(self.a):
            t = self.teichmuller(cur)
            digits.append(t)
            if k + 1 < self.a:
                cur = self.div_p(self.sub(cur, t))
        return digits

    def frobenius(self, x: Elem, times: int = 1) -> Elem:
        """sigma(sum t_k p^k) = sum t_k^p p^k, applied ``times`` times."""
        times %= self.r
        if times == 0:
            return x
        digits = self.teichmuller_digits(x)
        e = self.p**times
        out = self.zero
        for k, t in enumerate(digits):
            out = self.add(out, self.scalar(self.p**k, self.pow(t, e)))
        return out

    def frobenius_linear(self, x: Elem) -> Elem:
        """Frobenius via X -> X^p on the power basis (cross-check for ``frobenius``)."""
        xp = self.pow(self.gen, self.p)
        out = self.zero
        power = self.one
        for c in x:
            if c:
                out = self.add(out, self.scalar(c, power))
            power = self.mul(power, xp)
        return out

    def elements(self) -> Iterable[Elem]:
        return itertools.product(range(self.pa), repeat=self.r)

    def random(self, rng) -> Elem:
        return tuple(int(rng.integers(self.pa)) for _ in range(self.r))


# -- polynomials over a coefficient ring -----------------------------------


def poly_trim(R, f: Sequence) -> list:
    f = list(f)
    while f and R.is_zero(f[-1]):
        f.pop()
    return f


def poly_add(R, f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    z = R.zero
    return poly_trim(
        R, [R.add(f[i] if i < len(f) else z, g[i] if i < len(g) else z) for i in range(n)]
    )


def poly_sub(R, f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    z = R.zero
    return poly_trim(
        R, [R.sub(f[i] if i < len(f) else z, g[i] if i < len(g) else z) for i in range(n)]
    )


def poly_scale(R, c, f: Sequence) -> list:
    return poly_trim(R, [R.mul(c, x) for x in f])


def poly_mul(R, f: Sequence, g: Sequence) -> list:
    if not f or not g:
        return []
    out = [R.zero] * (len(f) + len(g) - 1)
    for i, u in enumerate(f):
        if R.is_zero(u):
            continue
        for j, v in enumerate(g):
            if not R.is_zero(v):
                out[i + j] = R.add(out[i + j], R.mul(u, v))
    return poly_trim(R, out)


def poly_divmod_monic(R, f: Sequence, d: Sequence) -> tuple[list, list]:
    """Quotient and remainder of f by the monic polynomial d."""
    d = poly_trim(R, d)
    if not d or d[-1] != R.one:
        raise ValidationError("divisor must be monic")
    rem = poly_trim(R, f)
    k = len(d) - 1
    if len(rem) <= k:
        return [], rem
    quot = [R.zero] * (len(rem) - k)
    for i in range(len(rem) - 1, k - 1, -1):
        c = rem[i]
        if R.is_zero(c):
            continue
        quot[i - k] = c
        for j in range(k + 1):
            rem[i - k + j] = R.sub(rem[i - k + j], R.mul(c, d[j]))
    return poly_trim(R, quot), poly_trim(R, rem[:k])


def poly_make_monic(F, f: Sequence) -> list:
    f = poly_trim(F, f)
    return poly_scale(F, F.inverse(f[-1]), f) if f else f


def poly_divmod_field(F, f: Sequence, d: Sequence) -> tuple[list, list]:
    d = poly_trim(F, d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = F.inverse(d[-1])
    q, r = poly_divmod_monic(F, f, poly_scale(F, lead_inv, d))
    return poly_scale(F, lead_inv, q), r


def poly_xgcd(F, f: Sequence, g: Sequence) -> tuple[list, list, list]:
    """(d, s, t) over a field with s*f + t*g = d and d monic (or zero)."""
    r0, r1 = poly_trim(F, f), poly_trim(F, g)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        qt, rr = poly_divmod_field(F, r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, qt, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, qt, t1))
    if not r0:
        return [], s0, t0
    inv = F.inverse(r0[-1])
    return poly_scale(F, inv, r0), poly_scale(F, inv, s0), poly_scale(F, inv, t0)


def poly_gcd(F, f: Sequence, g: Sequence) -> list:
    return poly_xgcd(F, f, g)[0]


def poly_eval(R, f: Sequence, x):
    acc = R.zero
    for c in reversed(f):
        acc = R.add(R.mul(acc, x), c)
    return acc


def poly_powmod(F, base: Sequence, e: int, mod: Sequence) -> list:
    """base^e modulo a monic polynomial."""
    result = [F.one]
    b = poly_divmod_monic(F, base, mod)[1]
    while e:
        if e & 1:
            result = poly_divmod_monic(F, poly_mul(F, result, b), mod)[1]
        e >>= 1
        if e:
            b = poly_divmod_monic(F, poly_mul(F, b, b), mod)[1]
    return result


def is_irreducible(F, f: Sequence) -> bool:
    """Rabin's test over the field F for a monic polynomial f."""
    f = poly_trim(F, f)
    k = len(f) - 1
    if k < 1:
        return False
    x = [F.zero, F.one]
    x_red = poly_divmod_monic(F, x, f)[1]
    if poly_sub(F, poly_powmod(F, x, F.q**k, f), x_red):
        return False
    for ell in cosetlab.factorize(k):
        h = poly_sub(F, poly_powmod(F, x, F.q ** (k // ell), f), x_red)
        if len(poly_gcd(F, f, h)) != 1:
            return False
    return True


def x_n_minus_1(R, n: int) -> list:
    return [R.neg(R.one)] + [R.zero] * (n - 1) + [R.one]


# -- construction of the rings ---------------------------------------------


def solve_unimodular(columns: Sequence[Sequence[int]], rhs: Sequence[int], p: int, pa: int) -> list[int]:
    """Solve sum_i c_i * columns[i] = rhs over Z_{p^a}.

    The columns must be linearly independent modulo p; the system may be
    overdetermined, in which case consistency is checked.
    """
    k = len(columns)
    m = len(rhs)
    rows = [[columns[i][e] % pa for i in range(k)] + [rhs[e] % pa] for e in range(m)]
    piv_rows = []
    used = set()
    for col in range(k):
        pivot = next(
            (e for e in range(m) if e not in used and rows[e][col] % p), None
        )
        if pivot is None:
            raise ValidationError("columns are dependent modulo p")
        used.add(pivot)
        inv = pow(rows[pivot][col], -1, pa)
        rows[pivot] = [v * inv % pa for v in rows[pivot]]
        for e in range(m):
            if e != pivot and rows[e][col]:
                c = rows[e][col]
                rows[e] = [(v - c * w) % pa for v, w in zip(rows[e], rows[pivot])]
        piv_rows.append(pivot)
    for e in range(m):
        if e not in used and rows[e][k]:
            raise ValidationError("inconsistent system: target is outside the subring")
    return [rows[piv_rows[col]][k] for col in range(k)]


def _prime_factors(m: int) -> list[int]:
    return list(cosetlab.factorize(m))


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest (constant term first) primitive polynomial of degree r."""
    order = p**r - 1
    primes = _prime_factors(order) if order > 1 else []
    for low in itertools.product(range(p), repeat=r):
        if low[0] == 0:
            continue
        cand = low + (1,)
        F = GaloisRing(p, 1, r, cand)
        x = F.gen
        if F.pow(x, order) != F.one:
            continue
        if all(F.pow(x, order // ell) != F.one for ell in primes):
            return cand
    raise AssertionError(f"no primitive polynomial of degree {r} over F_{p}")


@lru_cache(maxsize=None)
def galois_ring(p: int, a: int, r: int) -> GaloisRing:
    """GR(p^a, r) with the class of X a Teichmuller generator."""
    fbar = primitive_polynomial(p, r)
    if a == 1:
        return GaloisRing(p, 1, r, fbar)
    rough = GaloisRing(p, a, r, fbar)
    t = rough.teichmuller(rough.gen)
    powers = [rough.one]
    for _ in range(r):
        powers.append(rough.mul(powers[-1], t))
    coeffs = solve_unimodular(powers[:r], powers[r], p, rough.pa)
    modulus = tuple((-c) % rough.pa for c in coeffs) + (1,)
    ring = GaloisRing(p, a, r, modulus)
    if ring.pow(ring.gen, ring.q - 1) != ring.one:
        raise AssertionError("lifted modulus does not make X a Teichmuller generator")
    return ring


def _np_mulmod(a, b, f, p: int):
    import numpy as np

    c = np.convolve(a, b)
    m = len(f) - 1
    for i in range(len(c) - 1, m - 1, -1):
        t = c[i] % p
        if t:
            c[i - m : i + 1] -= t * f
    out = c[:m] % p
    return np.concatenate([out, np.zeros(m - len(out), dtype=np.int64)]) if len(out) < m else out


def _np_x_power(e: int, f, p: int):
    import numpy as np

    m = len(f) - 1
    result = np.zeros(m, dtype=np.int64)
    result[0] = 1
    base = np.zeros(m, dtype=np.int64)
    if m > 1:
        base[1] = 1
    else:
        base[0] = (-f[0]) % p
    while e:
        if e & 1:
            result = _np_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _np_mulmod(base, base, f, p)
    return result


def _irreducible_prime_field(p: int, coeffs: Sequence[int]) -> bool:
    """Rabin's test over F_p with numpy arithmetic (monic coeffs, constant term first)."""
    import numpy as np

    m = len(coeffs) - 1
    if m < 1:
        return False
    if m > 1 and coeffs[0] % p == 0:
        return False
    f = np.array(coeffs, dtype=np.int64) % p
    x = np.zeros(m, dtype=np.int64)
    if m > 1:
        x[1] = 1
    else:
        x[0] = (-f[0]) % p
    if not np.array_equal(_np_x_power(p**m, f, p), x):
        return False
    Fp = galois_ring(p, 1, 1)
    fpoly = [(int(c),) for c in f]
    for ell in cosetlab.factorize(m):
        h = _np_x_power(p ** (m // ell), f, p)
        h = (h - x) % p
        if len(poly_gcd(Fp, fpoly, [(int(c),) for c in h])) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest (constant term first) monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(1, p), *([range(p)] * (k - 1))):
        cand = low + (1,)
        if _irreducible_prime_field(p, cand):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


def _exact_order(E: GaloisRing, x: Elem, n: int) -> bool:
    if E.pow(x, n) != E.one:
        return False
    return all(E.pow(x, n // ell) != E.one for ell in cosetlab.factorize(n))


def _nonzero_stream(E: GaloisRing):
    for digits in itertools.product(range(E.p), repeat=E.r):
        x = tuple(reversed(digits))
        if any(x):
            yield x


class Embedding:
    """GR(p^a, r) inside GR(p^a, r*m), sending the small generator to ``image_gen``."""

    def __init__(self, small: GaloisRing, big: GaloisRing, image_gen: Elem):
        if big.r % small.r or big.pa != small.pa:
            raise ValidationError(f"{small} is not a subring of {big}")
        self.small, self.big = small, big
        if not big.is_zero(poly_eval(big, [big.from_int(c) for c in small.modulus], image_gen)):
            raise AssertionError("image of the generator is not a root of the small modulus")
        self.image_gen = image_gen
        self.basis = [big.one]
        for _ in range(small.r - 1):
            self.basis.append(big.mul(self.basis[-1], image_gen))

    def to_big(self, x: Elem) -> Elem:
        big = self.big
        out = big.zero
        for c, b in zip(x, self.basis):
            if c:
                out = big.add(out, big.scalar(c, b))
        return out

    def to_small(self, y: Elem) -> Elem:
        return tuple(solve_unimodular(self.basis, y, self.big.p, self.big.pa))


@lru_cache(maxsize=None)
def _field_splitting(n: int, p: int, r: int) -> tuple[GaloisRing, Elem, Elem]:
    """(F_p[Z]/(g) of degree r*ord_n(q), root of the small modulus, element of exact order n).

    Both elements are the first suitable powers along a fixed enumeration, so
    the result is deterministic.
    """
    q = p**r
    m = cosetlab.mult_order(q, n)
    E = GaloisRing(p, 1, r * m, irreducible_modulus(p, r * m))
    small_mod = [E.from_int(c) for c in primitive_polynomial(p, r)]
    gamma = None
    if r == 1:
        gamma = E.from_int(-primitive_polynomial(p, 1)[0])
    else:
        for y in _nonzero_stream(E):
            w = E.pow(y, (E.q - 1) // (q - 1))
            if not _exact_order(E, w, q - 1):
                continue
            cand = w
            for _ in range(q - 1):
                if E.is_zero(poly_eval(E, small_mod, cand)):
                    gamma = cand
                    break
                cand = E.mul(cand, w)
            if gamma is not None:
                break
    alpha = next(
        x for x in (E.pow(y, (E.q - 1) // n) for y in _nonzero_stream(E)) if _exact_order(E, x, n)
    )
    return E, gamma, alpha


def _minimal_polynomial(F: GaloisRing, E: GaloisRing, basis: Sequence[Elem], beta: Elem, d: int) -> list:
    """Monic minimal polynomial of degree d of beta over the subfield F spanned (over F_p) by ``basis``."""
    powers = [E.one]
    for _ in range(d):
        powers.append(E.mul(powers[-1], beta))
    cols = [E.mul(b, x) for x in powers[:d] for b in basis]
    sol = solve_unimodular(cols, powers[d], E.p, E.p)
    r = len(basis)
    coeffs = [tuple(sol[i * r : (i + 1) * r]) for i in range(d)]
    return [F.neg(c) for c in coeffs] + [F.one]


# -- factorization of X^n - 1 ------------------------------------------------


@dataclass(frozen=True)
class MonicFactor:
    coeffs: tuple
    coset_key: frozenset
    rep: int | None = None
    divisor: int | None = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _check_length(n: int, p: int) -> None:
    if n < 1:
        raise ValidationError(f"length must be positive, got {n}")
    if n % p == 0:
        raise ValidationError(f"gcd(n={n}, p={p}) != 1")


@lru_cache(maxsize=None)
def _field_factor_cached(n: int, p: int, r: int) -> tuple:
    F = galois_ring(p, 1, r)
    E, gamma, alpha = _field_splitting(n, p, r)
    basis = Embedding(F, E, gamma).basis
    out = []
    for c in cosetlab.build_atlas(n, F.q).cosets:
        beta = E.pow(alpha, c.rep)
        out.append((c.rep, tuple(_minimal_polynomial(F, E, basis, beta, len(c)))))
    return tuple(out)


def field_factor_xn_minus_1(n: int, field: GaloisRing) -> dict[int, list]:
    """Minimal polynomials over F_{p^r} of alpha^z, one per coset (keyed by rep)."""
    if not field.is_field:
        raise ValidationError("field_factor_xn_minus_1 needs a field context (a = 1)")
    _check_length(n, field.p)
    cached = _field_factor_cached(n, field.p, field.r)
    return {rep: list(f) for rep, f in cached}


def hensel_lift_pair(ring: GaloisRing, f: Sequence, g0: Sequence, h0: Sequence) -> tuple[list, list]:
    """Monic g, h over ring with g*h = f, lifting monic coprime residues g0*h0 = pi(f)."""
    F = ring.residue_field()
    d, s, t = poly_xgcd(F, g0, h0)
    if d != [F.one]:
        raise ValidationError("factors are not coprime modulo p")
    g = [tuple(c) for c in g0]
    h = [tuple(c) for c in h0]
    for k in range(1, ring.a):
        err = poly_sub(ring, f, poly_mul(ring, g, h))
        e = [F.pi(ring.div_p(c, k)) for c in err]
        e = poly_trim(F, e)
        if not e:
            continue
        qt, G = poly_divmod_monic(F, poly_mul(F, t, e), g0)
        H = poly_add(F, poly_mul(F, s, e), poly_mul(F, qt, h0))
        pk = ring.p**k
        g = poly_add(ring, g, [ring.scalar(pk, c) for c in G])
        h = poly_add(ring, h, [ring.scalar(pk, c) for c in H])
    if poly_sub(ring, f, poly_mul(ring, g, h)):
        raise AssertionError("Hensel lifting did not converge")
    return g, h


def hensel_lift_factorization(
    field_factors: Sequence[tuple[object, Sequence]], ring: GaloisRing, target: Sequence | None = None
) -> list[tuple[object, list]]:
    """Lift pairwise coprime monic factors of pi(target) to monic factors of target.

    ``field_factors`` is a list of (key, polynomial over the residue field);
    ``target`` defaults to the product of the factors (lifted naively), which
    is only meaningful when the caller passes X^n - 1 explicitly.
    """
    F = ring.residue_field()
    if target is None:
        prod = [F.one]
        for _, g in field_factors:
            prod = poly_mul(F, prod, g)
        target = [tuple(c) for c in prod]
    if [F.pi(c) for c in poly_trim(ring, target)] != poly_trim(F, _product(F, [g for _, g in field_factors])):
        raise ValidationError("field factors do not multiply to the residue of the target")
    out = []
    rest_target = list(target)
    remaining = list(field_factors)
    while len(remaining) > 1:
        key, g0 = remaining[0]
        h0 = _product(F, [g for _, g in remaining[1:]])
        g, h = hensel_lift_pair(ring, rest_target, g0, h0)
        out.append((key, g))
        rest_target = h
        remaining = remaining[1:]
    if remaining:
        out.append((remaining[0][0], rest_target))
    return out


def _product(R, polys: Iterable[Sequence]) -> list:
    out = [R.one]
    for g in polys:
        out = poly_mul(R, out, g)
    return out


class FactorTable:
    """Omega(A) for every q-closed A modulo n over GR(p^a, r).

    Built eagerly from the Hensel-lifted residue factorization; immutable
    afterwards.
    """

    def __init__(self, p: int, a: int, r: int, n: int):
        _check_length(n, p)
        self.ring = galois_ring(p, a, r)
        self.n = n
        self.atlas = cosetlab.build_atlas(n, self.ring.q)
        field = self.ring.residue_field()
        ff = field_factor_xn_minus_1(n, field)
        lifted = hensel_lift_factorization(
            [(rep, ff[rep]) for rep in sorted(ff)], self.ring, x_n_minus_1(self.ring, n)
        )
        self.factors: dict[int, MonicFactor] = {}
        for rep, coeffs in lifted:
            c = self.atlas.by_rep(rep)
            self.factors[rep] = MonicFactor(tuple(coeffs), frozenset(c.elements), rep, c.divisor)

    def omega(self, A: Iterable[int]) -> list:
        """Omega(A) = prod over the cosets in A of their basic-irreducible factor."""
        R = self.ring
        out = [R.one]
        for c in self.atlas.decompose(A):
            out = poly_mul(R, out, self.factors[c.rep].coeffs)
        return out

    def omega_by_expansion(self, A: Iterable[int]) -> list:
        """Omega(A) expanded directly as prod (X - delta^z) in the extension ring."""
        self.atlas.decompose(A)
        R = self.ring
        E, gamma, alpha = _field_splitting(self.n, R.p, R.r)
        big = GaloisRing(R.p, R.a, E.r, E.modulus)
        # residue coordinates are valid lifts; the Teichmuller representatives are the canonical ones
        emb = Embedding(R, big, big.teichmuller(gamma))
        delta = big.teichmuller(alpha)
        f = [big.one]
        for z in sorted(A):
            f = poly_mul(big, f, [big.neg(big.pow(delta, z)), big.one])
        return [emb.to_small(y) for y in f]

    def reciprocal(self, f: Sequence) -> list:
        return reciprocal(self.ring, f)

    def hat(self, f: Sequence) -> list:
        """(X^n - 1) / f for a monic divisor f."""
        quot, rem = poly_divmod_monic(self.ring, x_n_minus_1(self.ring, self.n), f)
        if rem:
            raise ValidationError("polynomial does not divide X^n - 1")
        return quot

    def to_json(self) -> list[dict]:
        rows = []
        for c in self.atlas.cosets:
            fac = self.factors[c.rep]
            coeffs = [x[0] if self.ring.r == 1 else list(x) for x in fac.coeffs]
            rows.append({"cosetRep": c.rep, "divisor": c.divisor, "coefficients": coeffs})
        return rows


@lru_cache(maxsize=64)
def factor_table(p: int, a: int, r: int, n: int) -> FactorTable:
    return FactorTable(p, a, r, n)


def reciprocal(R, f: Sequence) -> list:
    """Monic reciprocal X^k f(1/X) / f(0)."""
    f = poly_trim(R, f)
    if not f or not R.is_unit(f[0]):
        raise ValidationError("reciprocal needs a unit constant term")
    inv = R.inverse(f[0])
    return [R.mul(inv, c) for c in reversed(f)]
