"""Euclidean-domain backends: arbitrary-precision integers and GF(p)[x].

Every higher layer (matrices, modules, functors, scans) is generic over a
backend object exposing exact ring arithmetic, Euclidean division, extended
gcd, factorization into canonical primes, and canonical associates.

Element representations are plain hashable Python values:

* integers     -- Python ``int`` (arbitrary precision),
* polynomials  -- tuples of coefficients low-to-high degree, coefficients
                  reduced into ``{0, ..., p-1}``, no trailing zeros, with
                  ``()`` for the zero polynomial.

Canonical associates are positive integers and monic polynomials, so ideal
and invariant-factor equality reduce to element equality.

Factorization is desk-scale by design: trial division plus Pollard rho for
integers (inputs up to roughly 64-bit prime factors), squarefree then
distinct-degree then equal-degree splitting for GF(p)[x].
"""

from __future__ import annotations

import random


class BackendMismatch(TypeError):
    """Raised when elements of different backends are combined."""


class ZeroInputError(ZeroDivisionError):
    """Raised when an operation requires a nonzero element."""


def _xgcd_int(a, b):
    # Maintain the invariants:
    #          x * a +      y * b ==      g
    #     next_x * a + next_y * b == next_g
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return g, x, y


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # Deterministic witness set for n < 3.3 * 10^24.
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    # n odd composite, not a prime power of a tiny prime.
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = _xgcd_int(abs(x - y), n)[0] if x != y else n
        if d != n:
            return d


def _factor_int(n):
    factors = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = m
        while d == m:
            d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


class Integers:
    """The rational integers with canonical associates the positive integers."""

    kind = "integers"
    characteristic = None
    zero = 0
    one = 1

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a == 1 or a == -1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a**n

    def divmod(self, a, b):
        if b == 0:
            raise ZeroInputError("division by zero")
        return divmod(a, b)

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r != 0:
            raise ValueError(f"{b} does not divide {a}")
        return q

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def norm(self, a):
        return abs(a)

    def canon(self, a):
        """Return ``(c, u)`` with ``c = u*a`` canonical (nonnegative)."""
        if a < 0:
            return -a, -1
        return a, 1

    def unit_inv(self, u):
        if u not in (1, -1):
            raise ValueError(f"{u} is not a unit")
        return u

    def gcd_ext(self, a, b):
        g, u, v = _xgcd_int(a, b)
        if g == 0:
            return 0, 1, 0
        if g < 0:
            g, u, v = -g, -u, -v
        return g, u, v

    def gcd(self, a, b):
        return self.gcd_ext(a, b)[0]

    def lcm(self, a, b):
        if a == 0 or b == 0:
            return 0
        return abs(a * b) // self.gcd(a, b)

    def factor(self, a):
        """Factor ``a`` into a sorted list of ``(prime, multiplicity)`` pairs."""
        if a == 0:
            raise ZeroInputError("cannot factor zero")
        return sorted(_factor_int(abs(a)).items())

    def saturate_part(self, d, g):
        """The divisor of ``d`` supported on primes dividing ``g``, canonical."""
        if d == 0:
            raise ZeroInputError("saturate_part of zero")
        c = d
        h = self.gcd(c, g)
        while not self.is_unit(h):
            c = self.exact_div(c, h)
            h = self.gcd(c, g)
        return self.canon(self.exact_div(d, c))[0]

    def prime_key(self, p):
        return p

    def elem_sort_key(self, a):
        return (abs(a), -a)

    def elem_str(self, a):
        return str(a)

    def elem_to_json(self, a):
        return str(a)

    def elem_from_json(self, v):
        if isinstance(v, bool):
            raise ValueError("integer element expected")
        if isinstance(v, int):
            return v
        if isinstance(v, str):
            return int(v.strip())
        raise ValueError(f"cannot read integer element from {v!r}")

    def descriptor(self):
        return {"kind": "integers"}

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("integers")

    def __repr__(self):
        return "ZZ"


ZZ = Integers()


def _ptrim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


class PolyOverFp:
    """Univariate polynomials over the prime field GF(p), monic canonical form."""

    kind = "poly"
    zero = ()

    def __init__(self, p):
        if not _is_probable_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.characteristic = p
        self.one = (1 % p,) if p > 1 else ()

    def const(self, c):
        return _ptrim([c % self.p])

    def is_zero(self, a):
        return a == ()

    def is_unit(self, a):
        return len(a) == 1

    def deg(self, a):
        return len(a) - 1

    def add(self, a, b):
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return _ptrim(out)

    def neg(self, a):
        p = self.p
        return tuple((-c) % p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] = (out[i + j] + ca * cb) % p
        return _ptrim(out)

    def pow(self, a, n):
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def divmod(self, a, b):
        if not b:
            raise ZeroInputError("division by zero polynomial")
        p = self.p
        inv_lead = pow(b[-1], p - 2, p)
        rem = list(a)
        db = len(b) - 1
        q = [0] * max(len(a) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                factor = c * inv_lead % p
                q[i - db] = factor
                for j, cb in enumerate(b):
                    rem[i - db + j] = (rem[i - db + j] - factor * cb) % p
        return _ptrim(q), _ptrim(rem)

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r != ():
            raise ValueError("inexact polynomial division")
        return q

    def divides(self, a, b):
        if not a:
            return not b
        return self.divmod(b, a)[1] == ()

    def norm(self, a):
        return len(a)

    def canon(self, a):
        """Return ``(c, u)`` with ``c = u*a`` monic."""
        if not a:
            return (), self.one
        u = self.const(pow(a[-1], self.p - 2, self.p))
        return self.mul(u, a), u

    def unit_inv(self, u):
        if len(u) != 1:
            raise ValueError(f"{u} is not a unit")
        return self.const(pow(u[0], self.p - 2, self.p))

    def gcd_ext(self, a, b):
        # Same invariant dance as the integer xgcd, with polynomial division.
        x, next_x = self.one, ()
        y, next_y = (), self.one
        g, next_g = a, b
        while next_g:
            q, r = self.divmod(g, next_g)
            x, next_x = next_x, self.sub(x, self.mul(q, next_x))
            y, next_y = next_y, self.sub(y, self.mul(q, next_y))
            g, next_g = next_g, r
        if not g:
            return (), self.one, ()
        c, u = self.canon(g)
        return c, self.mul(u, x), self.mul(u, y)

    def gcd(self, a, b):
        return self.gcd_ext(a, b)[0]

    def lcm(self, a, b):
        if not a or not b:
            return ()
        return self.canon(self.exact_div(self.mul(a, b), self.gcd(a, b)))[0]

    def _derivative(self, a):
        p = self.p
        return _ptrim([(i * c) % p for i, c in enumerate(a)][1:])

    def _pth_root(self, a):
        # Coefficients live in GF(p) where Frobenius is the identity.
        return _ptrim([a[i] for i in range(0, len(a), self.p)])

    def _squarefree_parts(self, f):
        """Yield ``(g, multiplicity)`` with g squarefree, product g^m = f (monic)."""
        out = {}

        def accumulate(g, mult):
            if self.deg(g) > 0:
                out[g] = out.get(g, 0) + mult

        def recurse(f, mult):
            d = self._derivative(f)
            if not d:
                recurse(self._pth_root(f), mult * self.p)
                return
            w = self.gcd(f, d)
            squarefree = self.exact_div(f, w)
            i = 1
            while self.deg(squarefree) > 0:
                y = self.gcd(squarefree, w)
                accumulate(self.exact_div(squarefree, y), mult * i)
                squarefree = y
                w = self.exact_div(w, y)
                i += 1
            if self.deg(w) > 0:
                recurse(w, mult)

        recurse(self.canon(f)[0], 1)
        return sorted(out.items())

    def _distinct_degree(self, f):
        """Split squarefree monic f into ``(product-of-degree-d factors, d)``."""
        out = []
        x = (0, 1)
        h = x
        d = 0
        rest = f
        while self.deg(rest) >= 2 * (d + 1):
            d += 1
            h = self._powmod(h, self.p, rest)
            g = self.gcd(self.sub(h, x), rest)
            if self.deg(g) > 0:
                out.append((g, d))
                rest = self.exact_div(rest, g)
                h = self.divmod(h, rest)[1]
        if self.deg(rest) > 0:
            out.append((rest, self.deg(rest)))
        return out

    def _powmod(self, a, n, modulus):
        result = self.one
        base = self.divmod(a, modulus)[1]
        while n:
            if n & 1:
                result = self.divmod(self.mul(result, base), modulus)[1]
            base = self.divmod(self.mul(base, base), modulus)[1]
            n >>= 1
        return result

    def _equal_degree(self, f, d, rng):
        """Cantor-Zassenhaus splitting of monic squarefree f, all factors degree d."""
        n = self.deg(f)
        if n == d:
            return [f]
        p = self.p
        while True:
            a = _ptrim([rng.randrange(p) for _ in range(n)])
            if self.deg(a) < 1:
                continue
            g = self.gcd(a, f)
            if 0 < self.deg(g) < n:
                split = g
            else:
                if p == 2:
                    # Trace map replaces the (p^d-1)/2 power trick.
                    t = a
                    acc = a
                    for _ in range(d - 1):
                        t = self._powmod(t, 2, f)
                        acc = self.add(acc, t)
                    split = self.gcd(acc, f)
                else:
                    e = (p**d - 1) // 2
                    b = self._powmod(a, e, f)
                    split = self.gcd(self.sub(b, self.one), f)
                if not (0 < self.deg(split) < n):
                    continue
            left = self._equal_degree(split, d, rng)
            right = self._equal_degree(self.exact_div(f, split), d, rng)
            return left + right

    def factor(self, a):
        """Factor into sorted ``(monic irreducible, multiplicity)`` pairs."""
        if not a:
            raise ZeroInputError("cannot factor zero")
        if self.is_unit(a):
            return []
        rng = random.Random((self.p, a).__hash__())
        factors = {}
        for squarefree, mult in self._squarefree_parts(a):
            for block, d in self._distinct_degree(squarefree):
                for irr in self._equal_degree(block, d, rng):
                    factors[irr] = factors.get(irr, 0) + mult
        return sorted(factors.items(), key=lambda kv: self.prime_key(kv[0]))

    def saturate_part(self, d, g):
        if not d:
            raise ZeroInputError("saturate_part of zero")
        c = d
        h = self.gcd(c, g)
        while not self.is_unit(h):
            c = self.exact_div(c, h)
            h = self.gcd(c, g)
        return self.canon(self.exact_div(d, c))[0]

    def prime_key(self, q):
        return (len(q), q)

    def elem_sort_key(self, a):
        return (len(a), a)

    def elem_str(self, a):
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("x" if c == 1 else f"{c}x")
            else:
                terms.append(f"x^{i}" if c == 1 else f"{c}x^{i}")
        return "+".join(terms)

    def elem_to_json(self, a):
        return list(a)

    def elem_from_json(self, v):
        if isinstance(v, list):
            if not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
                raise ValueError("polynomial coefficients must be integers")
            return _ptrim([c % self.p for c in v])
        if isinstance(v, int) and not isinstance(v, bool):
            return self.const(v)
        raise ValueError(f"cannot read polynomial element from {v!r}")

    def descriptor(self):
        return {"kind": "poly", "characteristic": self.p}

    def __eq__(self, other):
        return isinstance(other, PolyOverFp) and other.p == self.p

    def __hash__(self):
        return hash(("poly", self.p))

    def __repr__(self):
        return f"GF({self.p})[x]"


_POLY_CACHE = {}


def poly_ring(p):
    """The backend GF(p)[x], cached per characteristic."""
    if p not in _POLY_CACHE:
        _POLY_CACHE[p] = PolyOverFp(p)
    return _POLY_CACHE[p]


def domain_from_descriptor(desc):
    """Build a backend from its serialized descriptor."""
    kind = desc.get("kind")
    if kind == "integers":
        return ZZ
    if kind == "poly":
        return poly_ring(int(desc["characteristic"]))
    raise ValueError(f"unknown backend kind {kind!r}")
