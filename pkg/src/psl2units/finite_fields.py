"""Finite fields F_q and the quadratic extension F_{q^2}.

Field elements are plain integers.  The element with digits
(c_0, ..., c_{r-1}) in the fixed polynomial basis is encoded as
sum(c_i * l**i), so 0 is the zero element and 1 the multiplicative
identity.  Elements of F_{q^2} are (lo, hi) pairs of F_q encodings
with respect to the construction basis {1, w}.

Every constructive choice (modulus, multiplicative generator, alpha,
beta) is made by deterministic enumeration, so everything derived
downstream (generators, orbits, sweep records) is reproducible bit for
bit.  The modulus of F_q over its prime field is the first monic
irreducible of degree r when coefficient tuples are compared
low-degree-first; F_{q^2} is a degree-2 extension of F_q (X^2 - c with
c the first non-square for odd q, X^2 + X + c with c the first element
of absolute trace 1 for even q), which keeps Frobenius, norm and trace
one-line operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import NotPrime, ZeroElement


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (inputs are small)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: multiplicity} by trial division."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """Return (l, r) with q = l**r, or raise ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (l, r), = fac.items()
    return l, r


@dataclass(frozen=True)
class PrimePower:
    """A prime power q = l**r with q >= 4 (PSL(2,q) must be simple)."""

    l: int
    r: int
    q: int

    def __post_init__(self):
        if not is_prime(self.l):
            raise NotPrime(f"{self.l} is not prime")
        if self.r < 1:
            raise ValueError("exponent must be positive")
        if self.q != self.l ** self.r:
            raise ValueError(f"q={self.q} is not {self.l}^{self.r}")
        if self.q < 4:
            raise ValueError("q >= 4 required")

    @classmethod
    def make(cls, l: int, r: int) -> "PrimePower":
        return cls(l, r, l ** r)

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        l, r = prime_power_decomposition(q)
        return cls(l, r, q)


# ---------------------------------------------------------------------------
# Polynomial helpers over F_l (coefficient tuples, low degree first, no
# trailing zeros).  Only used during field construction.

def _ptrim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _pmod(a, f, l):
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and len(a) > 0:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, c in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * c) % l
        a.pop()
    return _ptrim(a)


def _pmul(a, b, l):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % l
    return _ptrim(out)


def _pmulmod(a, b, f, l):
    return _pmod(_pmul(a, b, l), f, l)


def _ppowmod(base, e, f, l):
    result = (1,)
    base = _pmod(base, f, l)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, l)
        base = _pmulmod(base, base, f, l)
        e >>= 1
    return result


def _pgcd(a, b, l):
    while b:
        a, b = b, _prem(a, b, l)
    return a


def _prem(a, b, l):
    # remainder of a by (possibly non-monic) b over F_l
    b = _ptrim(b)
    inv_lead = pow(b[-1], l - 2, l) if b[-1] != 1 else 1
    monic = tuple((c * inv_lead) % l for c in b)
    return _pmod(a, monic, l)


def _is_irreducible(f, l):
    """Monic f of degree r is irreducible over F_l iff X^(l^r) = X mod f
    and gcd(f, X^(l^(r/s)) - X) = 1 for every prime s dividing r."""
    r = len(f) - 1
    if r == 1:
        return True
    x = (0, 1)
    t = x
    powers = {}
    for i in range(1, r + 1):
        t = _ppowmod(t, l, f, l)
        powers[i] = t
    if powers[r] != x:
        return False
    for s in factorize(r):
        g = _psub(powers[r // s], x, l)
        if len(_pgcd(f, g, l)) != 1:  # any common factor of positive degree
            return False
    return True


def _psub(a, b, l):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ca = a[i] if i < len(a) else 0
        cb = b[i] if i < len(b) else 0
        out[i] = (ca - cb) % l
    return _ptrim(out)


def _smallest_modulus(l: int, r: int) -> tuple[int, ...]:
    """First monic irreducible of degree r, low coefficients compared first.

    Returns the tuple (c_0, ..., c_{r-1}) of the non-leading coefficients;
    the modulus is X^r + sum(c_i X^i).  Degree 1 uses the X - 0 convention.
    """
    if r == 1:
        return (0,)
    for low in itertools.product(range(l), repeat=r):
        f = low + (1,)
        if _is_irreducible(f, l):
            return low
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Base field


def _order_in_group(n: int, is_one, powfn) -> int:
    o = n
    for s in factorize(n):
        while o % s == 0 and is_one(powfn(o // s)):
            o //= s
    return o


class PrimeField:
    """F_l for prime l; elements are the residues 0..l-1."""

    def __init__(self, l: int):
        self.l = l
        self.r = 1
        self.q = l
        self.modulus = (0,)

    def elements(self):
        return range(self.q)

    def add(self, x, y):
        return (x + y) % self.l

    def sub(self, x, y):
        return (x - y) % self.l

    def neg(self, x):
        return -x % self.l

    def mul(self, x, y):
        return (x * y) % self.l

    def inv(self, x):
        if x == 0:
            raise ZeroElement("0 has no inverse")
        return pow(x, self.l - 2, self.l)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e):
        if e < 0:
            return pow(self.inv(x), -e, self.l)
        return pow(x, e, self.l)

    def digits(self, x):
        return (x,)

    def encode(self, digits):
        return digits[0] % self.l

    def is_square(self, x):
        if self.l == 2 or x == 0:
            return True
        return pow(x, (self.l - 1) // 2, self.l) == 1

    def element_order(self, x):
        if x == 0:
            raise ZeroElement("order of 0 is undefined")
        return _order_in_group(self.q - 1, lambda v: v == 1, lambda e: self.pow(x, e))

    def first_non_square(self):
        for x in range(1, self.q):
            if not self.is_square(x):
                return x
        raise AssertionError("no non-square in odd field")

    def first_primitive(self):
        for x in range(1, self.q):
            if self.element_order(x) == self.q - 1:
                return x
        raise AssertionError("cyclic group has a generator")


class ExtensionField:
    """F_{l^r} for r >= 2, with exp/log (Zech) tables for O(1) arithmetic."""

    _ZERO_LOG = -1

    def __init__(self, l: int, r: int):
        self.l = l
        self.r = r
        self.q = q = l ** r
        self.modulus = mod = _smallest_modulus(l, r)
        f = mod + (1,)
        pows = [l ** i for i in range(r)]

        def enc(poly):
            return sum(c * pows[i] for i, c in enumerate(poly))

        def dec(e):
            out = []
            for _ in range(r):
                out.append(e % l)
                e //= l
            return _ptrim(out)

        # multiplicative generator: first encoding of full order q-1
        qm1 = self.q - 1
        primes = list(factorize(qm1))
        gen = None
        for e in range(2, q):
            cand = dec(e)
            if all(_ppowmod(cand, qm1 // s, f, l) != (1,) for s in primes):
                gen = cand
                break
        assert gen is not None

        exp = [0] * qm1
        cur = (1,)
        for i in range(qm1):
            exp[i] = enc(cur)
            cur = _pmulmod(cur, gen, f, l)
        log = [self._ZERO_LOG] * q
        for i, e in enumerate(exp):
            log[e] = i

        def add_enc(x, y):
            s = 0
            for i in range(r):
                s += ((x % l + y % l) % l) * pows[i]
                x //= l
                y //= l
            return s

        zech = [self._ZERO_LOG] * qm1
        for k in range(qm1):
            s = add_enc(1, exp[k])
            zech[k] = log[s] if s else self._ZERO_LOG
        neg = [0] * q
        for e in range(1, q):
            neg[e] = sum(((l - d) % l) * pows[i] for i, d in enumerate(dec(e)))
        inv = [0] * q
        for e in range(1, q):
            inv[e] = exp[(qm1 - log[e]) % qm1]

        self.exp = exp
        self.log = log
        self.zech = zech
        self.neg_table = neg
        self.inv_table = inv
        self._pows = pows

    def elements(self):
        return range(self.q)

    def add(self, x, y):
        if x == 0:
            return y
        if y == 0:
            return x
        qm1 = self.q - 1
        lx = self.log[x]
        z = self.zech[(self.log[y] - lx) % qm1]
        if z == self._ZERO_LOG:
            return 0
        return self.exp[(lx + z) % qm1]

    def neg(self, x):
        return self.neg_table[x]

    def sub(self, x, y):
        return self.add(x, self.neg_table[y])

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]

    def inv(self, x):
        if x == 0:
            raise ZeroElement("0 has no inverse")
        return self.inv_table[x]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e):
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroElement("0 has no inverse")
            return 0
        return self.exp[(self.log[x] * e) % (self.q - 1)]

    def digits(self, x):
        out = []
        for _ in range(self.r):
            out.append(x % self.l)
            x //= self.l
        return tuple(out)

    def encode(self, digits):
        return sum((d % self.l) * self._pows[i] for i, d in enumerate(digits))

    def is_square(self, x):
        if self.l == 2 or x == 0:
            return True
        return self.log[x] % 2 == 0

    def element_order(self, x):
        if x == 0:
            raise ZeroElement("order of 0 is undefined")
        qm1 = self.q - 1
        return qm1 // gcd(qm1, self.log[x])

    def first_non_square(self):
        for x in range(1, self.q):
            if not self.is_square(x):
                return x
        raise AssertionError("no non-square in odd field")

    def first_primitive(self):
        for x in range(1, self.q):
            if self.element_order(x) == self.q - 1:
                return x
        raise AssertionError("cyclic group has a generator")


Field = PrimeField | ExtensionField


@lru_cache(maxsize=None)
def make_field(l: int, r: int) -> Field:
    """Field context for F_{l^r}; deterministic modulus, cached per (l, r)."""
    if not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if r < 1:
        raise ValueError("exponent must be positive")
    if r == 1:
        return PrimeField(l)
    return ExtensionField(l, r)


# ---------------------------------------------------------------------------
# Quadratic extension


class QuadraticExtension:
    """F_{q^2} over F_q with elements (lo, hi) in the basis {1, w}.

    Odd q: w^2 = c with c the first non-square of F_q, so Frobenius is
    (lo, hi) -> (lo, -hi).  Even q: w^2 = w + c with c the first element
    of absolute trace 1, so Frobenius is (lo, hi) -> (lo + hi, hi).
    """

    def __init__(self, base: Field):
        self.base = base
        self.q = base.q
        self.even = base.l == 2
        if self.even:
            self.c = self._first_trace_one()
        else:
            self.c = base.first_non_square()

    def _first_trace_one(self):
        fq = self.base
        for c in range(fq.q):
            t = c
            acc = c
            for _ in range(fq.r - 1):
                t = fq.mul(t, t)
                acc = fq.add(acc, t)
            if acc == 1:
                return c
        raise AssertionError("absolute trace is onto F_2")

    zero = (0, 0)
    one = (1, 0)

    def embed(self, x):
        return (x, 0)

    def from_encoding(self, e):
        return (e % self.q, e // self.q)

    def encoding(self, u):
        return u[0] + u[1] * self.q

    def add(self, u, v):
        fq = self.base
        return (fq.add(u[0], v[0]), fq.add(u[1], v[1]))

    def neg(self, u):
        fq = self.base
        return (fq.neg(u[0]), fq.neg(u[1]))

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def mul(self, u, v):
        fq = self.base
        a, b = u
        x, y = v
        ax = fq.mul(a, x)
        by = fq.mul(b, y)
        cross = fq.add(fq.mul(a, y), fq.mul(b, x))
        if self.even:
            # w^2 = w + c
            return (fq.add(ax, fq.mul(by, self.c)), fq.add(cross, by))
        # w^2 = c
        return (fq.add(ax, fq.mul(by, self.c)), cross)

    def frobenius(self, u):
        fq = self.base
        if self.even:
            return (fq.add(u[0], u[1]), u[1])
        return (u[0], fq.neg(u[1]))

    def trace(self, u):
        t = self.add(u, self.frobenius(u))
        assert t[1] == 0
        return t[0]

    def norm(self, u):
        n = self.mul(u, self.frobenius(u))
        assert n[1] == 0
        return n[0]

    def inv(self, u):
        if u == self.zero:
            raise ZeroElement("0 has no inverse")
        fq = self.base
        n_inv = fq.inv(self.norm(u))
        ub = self.frobenius(u)
        return (fq.mul(ub[0], n_inv), fq.mul(ub[1], n_inv))

    def pow(self, u, e):
        if e < 0:
            u, e = self.inv(u), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, u)
            u = self.mul(u, u)
            e >>= 1
        return result

    def element_order(self, u):
        if u == self.zero:
            raise ZeroElement("order of 0 is undefined")
        n = self.q * self.q - 1
        return _order_in_group(n, lambda v: v == self.one, lambda e: self.pow(u, e))


# ---------------------------------------------------------------------------
# Setup: alpha, t, beta


@dataclass(frozen=True)
class FieldSetup:
    """F_q, F_{q^2}, an element alpha of order q+1, its trace t, and a
    primitive element beta of F_q*."""

    pp: PrimePower
    fq: Field
    fq2: QuadraticExtension
    alpha: tuple[int, int]
    t: int
    beta: int


def build_setup(pp: PrimePower) -> FieldSetup:
    """Deterministic setup for PSL(2,q): scan xi by encoding, take the first
    xi**(q-1) of multiplicative order exactly q+1."""
    fq = make_field(pp.l, pp.r)
    fq2 = QuadraticExtension(fq)
    q = pp.q
    qp1_primes = list(factorize(q + 1))
    alpha = None
    for e in range(1, q * q):
        xi = fq2.from_encoding(e)
        cand = fq2.pow(xi, q - 1)  # order divides (q^2-1)/(q-1) = q+1
        if cand == fq2.one:
            continue
        if all(fq2.pow(cand, (q + 1) // s) != fq2.one for s in qp1_primes):
            alpha = cand
            break
    assert alpha is not None, "F_{q^2}* is cyclic of order q^2-1"
    t = fq2.trace(alpha)
    if t in (0, 1, fq.neg(1)):
        # only happens for q + 1 < 8 (alpha would satisfy X^6 = 1)
        raise ValueError(f"q={q}: trace of alpha degenerate (q+1 >= 8 required)")
    beta = fq.first_primitive()
    return FieldSetup(pp=pp, fq=fq, fq2=fq2, alpha=alpha, t=t, beta=beta)
