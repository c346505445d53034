"""Module invariants over a Euclidean backend: associated primes, annihilator,
depth, the local-torsion functor values Gamma_I and tau_S, and the
common-multiplicatively-closed / coprincipal predicates for element sets.

Over these one-dimensional backends an associated-prime set consists of the
zero ideal (iff the module has free rank) plus one prime ideal for every
prime dividing an invariant factor, and depth takes only the values
``0``, ``1`` and ``inf``.

Depth convention: ``dep_J(M) = inf`` whenever ``J M = M`` -- in particular
for the zero module.  This keeps depth sequences of eventually-vanishing
families well-defined.
"""

from __future__ import annotations

from typing import NamedTuple

from .matrices import Mat
from .modules import FpModule, Morphism, Ideal, DomainViolation

DEPTH_INF = float("inf")


class PrimeIdeal:
    """A prime of the backend: the zero ideal or a canonical prime element."""

    __slots__ = ("domain", "gen")

    def __init__(self, domain, gen=None):
        if gen is not None:
            gen = domain.canon(gen)[0]
            if domain.is_zero(gen) or domain.is_unit(gen):
                raise ValueError("prime generator must be a nonzero nonunit")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "gen", gen)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeIdeal is immutable")

    @classmethod
    def zero_ideal(cls, domain):
        return cls(domain, None)

    def is_zero_ideal(self):
        return self.gen is None

    def contains(self, elem):
        if self.gen is None:
            return self.domain.is_zero(elem)
        return self.domain.divides(self.gen, elem)

    def contains_ideal(self, ideal):
        """``self >= I`` i.e. membership of I in V-supports; (0) >= I iff I = (0)."""
        return self.contains(ideal.gen)

    def sort_key(self):
        if self.gen is None:
            return (0,)
        return (1, self.domain.prime_key(self.gen))

    def __eq__(self, other):
        return (isinstance(other, PrimeIdeal) and self.domain == other.domain
                and self.gen == other.gen)

    def __hash__(self):
        return hash((self.domain, self.gen))

    def __repr__(self):
        if self.gen is None:
            return "(0)"
        return f"({self.domain.elem_str(self.gen)})"


class AssSet:
    """A finite, canonically ordered set of prime ideals."""

    __slots__ = ("primes",)

    def __init__(self, primes):
        uniq = {p: None for p in sorted(primes, key=PrimeIdeal.sort_key)}
        object.__setattr__(self, "primes", tuple(uniq))

    def __setattr__(self, name, value):
        raise AttributeError("AssSet is immutable")

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def __eq__(self, other):
        return isinstance(other, AssSet) and self.primes == other.primes

    def __hash__(self):
        return hash(self.primes)

    def intersect(self, other):
        return AssSet([p for p in self.primes if p in other])

    def minus(self, other):
        return AssSet([p for p in self.primes if p not in other])

    def union(self, other):
        return AssSet(self.primes + other.primes)

    def restrict_to_v(self, ideal):
        """Intersection with ``V(I) = {P : P >= I}``."""
        return AssSet([p for p in self.primes if p.contains_ideal(ideal)])

    def remove_v(self, ideal):
        return AssSet([p for p in self.primes if not p.contains_ideal(ideal)])

    def to_json(self):
        return [repr(p) for p in self.primes]

    def __repr__(self):
        return "{" + ", ".join(repr(p) for p in self.primes) + "}"


def ass(m):
    """Associated primes read off the invariant-factor decomposition.

    >>> from stab.domains import ZZ
    >>> from stab.modules import FpModule
    >>> ass(FpModule.free(ZZ, 1).direct_sum(FpModule.cyclic(ZZ, 12)))
    {(0), (2), (3)}
    """
    D = m.domain
    primes = []
    if m.rank > 0:
        primes.append(PrimeIdeal.zero_ideal(D))
    if m.factors:
        # Largest invariant factor is divisible by all the others.
        for p, _ in D.factor(m.factors[-1]):
            primes.append(PrimeIdeal(D, p))
    return AssSet(primes)


def ann(m):
    """The annihilator ideal: (0) with free rank, else the largest factor."""
    D = m.domain
    if m.rank > 0:
        return Ideal(D, D.zero)
    if not m.factors:
        return Ideal(D, D.one)
    return Ideal(D, m.factors[-1])


def ann_contains(inner, outer):
    """``(inner) <= (outer)`` as ideals, i.e. outer divides inner."""
    return inner.domain.divides(outer.gen, inner.gen)


def depth(j, m):
    """Depth of the ideal ``J`` on ``M``: one of 0, 1, DEPTH_INF.

    ``inf`` iff ``J M = M`` (in particular M = 0); 0 iff the generator lies
    in an associated prime of a module that J does not exhaust; 1 otherwise
    (the generator is regular and annihilates M/gM, so the sequence stops).
    """
    if m.power_quotient(j, 1).is_zero():
        return DEPTH_INF
    g = j.gen
    for p in ass(m):
        if p.contains(g):
            return 0
    return 1


class TorsionPart(NamedTuple):
    """A torsion-part computation: submodule, inclusion, quotient, projection."""

    part: FpModule
    include: Morphism
    quotient: FpModule
    project: Morphism


def gamma(i, m):
    """``Gamma_I(M)``: elements killed by a power of I, with inclusion and quotient.

    Each cyclic summand ``R/(d)`` contributes ``R/(s)`` with ``s`` the part of
    ``d`` supported on primes of ``I``; for the zero ideal the whole module is
    returned.
    """
    D = m.domain
    g = i.gen
    if D.is_zero(g):
        incl = Morphism.identity(m)
        quot, proj = incl.cokernel()
        return TorsionPart(m, incl, quot, proj)
    cols = []
    dim = len(m.factors) + m.rank
    for idx, d in enumerate(m.factors):
        s = D.saturate_part(d, g)
        if D.is_unit(s):
            continue
        t = D.exact_div(d, s)
        col = [D.zero] * dim
        col[idx] = t
        cols.append(m._from_dec.mul_vec(col))
    part, incl = m.submodule(Mat.from_cols(D, cols, m.ambient))
    quot, proj = incl.cokernel()
    return TorsionPart(part, incl, quot, proj)


class CmcSet:
    """A subset of the backend used by the torsion functor tau_S.

    Either an explicit finite list of elements, or the multiplicative closure
    of finitely many nonzero generators (closures are multiplicatively closed,
    hence common multiplicatively closed, by construction).
    """

    __slots__ = ("domain", "elems", "closure_gens")

    def __init__(self, domain, elems=None, closure_gens=None):
        if (elems is None) == (closure_gens is None):
            raise ValueError("give either explicit elements or closure generators")
        if closure_gens is not None:
            closure_gens = tuple(closure_gens)
            if not closure_gens:
                raise ValueError("closure needs at least one generator")
            if any(domain.is_zero(g) for g in closure_gens):
                raise ValueError("closure generators must be nonzero")
        else:
            elems = tuple(elems)
            if not elems:
                raise ValueError("an explicit set must be nonempty")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "elems", elems)
        object.__setattr__(self, "closure_gens", closure_gens)

    def __setattr__(self, name, value):
        raise AttributeError("CmcSet is immutable")

    @classmethod
    def explicit(cls, domain, elems):
        return cls(domain, elems=list(elems))

    @classmethod
    def closure(cls, domain, gens):
        return cls(domain, closure_gens=list(gens))

    def is_explicit(self):
        return self.closure_gens is None

    def is_cmc(self):
        """For every pair (r, s) some member is divisible by lcm(r, s)."""
        if not self.is_explicit():
            return True
        D = self.domain
        for r in self.elems:
            for s in self.elems:
                target = D.lcm(r, s)
                if not any(D.divides(target, t) for t in self.elems):
                    return False
        return True

    def cogenerator(self):
        """Some member divisible by every member, or ``None``."""
        D = self.domain
        if not self.is_explicit():
            if all(D.is_unit(g) for g in self.closure_gens):
                return D.one
            return None
        for s in self.elems:
            if all(D.divides(r, s) for r in self.elems):
                return s
        return None

    def is_coprincipal(self):
        return self.cogenerator() is not None

    def is_multiplicative(self):
        """Closed under products (decidable for closures and explicit sets)."""
        if not self.is_explicit():
            return True
        D = self.domain
        for r in self.elems:
            for s in self.elems:
                if D.mul(r, s) not in self.elems:
                    return False
        return True

    def meets_prime(self, p):
        """Whether ``P`` intersects the set."""
        if self.is_explicit():
            return any(p.contains(e) for e in self.elems)
        if p.is_zero_ideal():
            return False
        return any(p.contains(g) for g in self.closure_gens)

    def to_json(self):
        D = self.domain
        if self.is_explicit():
            return {"elements": [D.elem_to_json(e) for e in self.elems]}
        return {"closure": [D.elem_to_json(g) for g in self.closure_gens]}

    def __repr__(self):
        D = self.domain
        if self.is_explicit():
            return "{" + ", ".join(D.elem_str(e) for e in self.elems) + "}"
        return "closure{" + ", ".join(D.elem_str(g) for g in self.closure_gens) + "}"


class NotCmc(DomainViolation):
    """tau_S needs a common multiplicatively closed set."""


def tau(s, m):
    """``tau_S(M)``: elements killed by some member of S.

    Explicit finite cmc sets are coprincipal, so the torsion part is the
    kernel of multiplication by a cogenerator; multiplicative closures reduce
    to ``Gamma`` at the product of the generators.
    """
    D = m.domain
    if not s.is_cmc():
        raise NotCmc(f"{s!r} is not common multiplicatively closed")
    if s.is_explicit():
        s0 = s.cogenerator()
        if s0 is None:
            raise NotCmc("finite cmc set lost its cogenerator")
        part, incl = Morphism.mult_by(s0, m).kernel()
        quot, proj = incl.cokernel()
        return TorsionPart(part, incl, quot, proj)
    prod = D.one
    for g in s.closure_gens:
        prod = D.mul(prod, g)
    return gamma(Ideal(D, prod), m)
