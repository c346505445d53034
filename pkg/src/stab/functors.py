"""Evaluable covariant R-linear functors on finitely presented modules.

Variants:

* identity, ``Hom(M, -)``;
* coherent functors presented by a morphism ``f : K -> L``, evaluated as
  ``coker(Hom(L, N) -> Hom(K, N))``;
* homology of a tensored three-term complex of finitely presented modules
  (which houses ``Tor_i(M, -)`` through a free resolution);
* ``Gamma_I``, ``tau_S`` and their quotient companions;
* homology of a tensored middle-finite complex whose ends may be localized;
* the oscillating functor on the skeleton of finite torsion modules, with
  per-prime exponent sets.

Every functor is immutable and pure: ``F(N)`` returns a fresh module with a
deterministic presentation, and ``F.map(g)`` returns the induced morphism
between the recomputed values.
"""

from __future__ import annotations

from typing import NamedTuple

from .matrices import Mat
from .modules import (FpModule, Morphism, Ideal, LocModule, HomSpace,
                      _hom_induced_full, loc_tensor, tensor_mor, DomainViolation)
from .invariants import gamma, tau


def homology_at(f, h):
    """Homology ``ker(h)/im(f)`` at the middle of ``A --f--> B --h--> C``.

    Returns ``(H, include)`` where ``include : K -> B`` embeds the kernel
    whose generators present ``H``.
    """
    k, incl = h.kernel()
    f2 = f.factor_through(incl)
    hmod = FpModule(k.domain, k.ambient, k.relations.hstack(f2.mat))
    return hmod, incl


def homology_induced(hm, incl_m, hn, incl_n, mid):
    """The map on homology induced by a middle square ``mid : B_M -> B_N``."""
    carried = mid.compose(incl_m).factor_through(incl_n)
    return Morphism(hm, hn, carried.mat)


class Functor:
    """Interface: ``F(N)`` evaluates on objects, ``F.map(g)`` on morphisms."""

    def __call__(self, n):
        raise NotImplementedError

    def map(self, g):
        raise NotImplementedError


class IdentityFunctor(Functor):
    def __call__(self, n):
        return n

    def map(self, g):
        return g

    def __repr__(self):
        return "Id"


class HomFrom(Functor):
    """``Hom(M, -)``."""

    def __init__(self, m):
        self.m = m

    def __call__(self, n):
        return HomSpace(self.m, n).module

    def map(self, g):
        ha = HomSpace(self.m, g.source)
        hb = HomSpace(self.m, g.target)
        cols = [hb.coords(g.compose(u)) for u in ha.generators()]
        mat = Mat.from_cols(self.m.domain, cols, len(hb.pairs))
        return Morphism(ha.module, hb.module, mat)

    def __repr__(self):
        return f"Hom({self.m!r}, -)"


class CoherentFunctor(Functor):
    """``coker(h_L -> h_K)`` presented by a morphism ``f : K -> L``.

    >>> from stab.domains import ZZ
    >>> from stab.modules import FpModule, Morphism
    >>> from stab.matrices import Mat
    >>> r = FpModule.free(ZZ, 1)
    >>> f = Morphism(r, r, Mat(ZZ, [[2]]))
    >>> CoherentFunctor(f)(FpModule.cyclic(ZZ, 4)).decompose()
    (0, [2])
    """

    def __init__(self, presenting):
        self.presenting = presenting

    def __call__(self, n):
        _, _, induced = _hom_induced_full(self.presenting, n)
        value, _ = induced.cokernel()
        return value

    def map(self, g):
        fa = self(g.source)
        fb = self(g.target)
        k = self.presenting.source
        ha = HomSpace(k, g.source)
        hb = HomSpace(k, g.target)
        cols = [hb.coords(g.compose(u)) for u in ha.generators()]
        mat = Mat.from_cols(k.domain, cols, len(hb.pairs))
        return Morphism(fa, fb, mat)

    def __repr__(self):
        return f"coker(h_{self.presenting.target!r} -> h_{self.presenting.source!r})"


class ComplexHomology(Functor):
    """``N -> H_i(P (x) N)`` for a complex ``P2 -> P1 -> P0`` with zero composite."""

    def __init__(self, d2, d1, index):
        if index not in (0, 1, 2):
            raise ValueError("homology index must be 0, 1 or 2")
        if d2.target.ambient != d1.source.ambient:
            raise ValueError("complex maps do not compose")
        if not d1.compose(d2).is_zero():
            raise ValueError("complex has nonzero composite")
        self.d2 = d2
        self.d1 = d1
        self.index = index

    def _tensored(self, n):
        ident = Morphism.identity(n)
        return tensor_mor(self.d2, ident), tensor_mor(self.d1, ident)

    def __call__(self, n):
        t2, t1 = self._tensored(n)
        if self.index == 0:
            value, _ = t1.cokernel()
            return value
        if self.index == 2:
            value, _ = t2.kernel()
            return value
        value, _ = homology_at(t2, t1)
        return value

    def map(self, g):
        sm2, sm1 = self._tensored(g.source)
        tm2, tm1 = self._tensored(g.target)
        if self.index == 0:
            fa, _ = sm1.cokernel()
            fb, _ = tm1.cokernel()
            mid = tensor_mor(Morphism.identity(self.d1.target), g)
            return Morphism(fa, fb, mid.mat)
        if self.index == 2:
            fa, incl_a = sm2.kernel()
            fb, incl_b = tm2.kernel()
            mid = tensor_mor(Morphism.identity(self.d2.source), g)
            return mid.compose(incl_a).factor_through(incl_b)
        fa, incl_a = homology_at(sm2, sm1)
        fb, incl_b = homology_at(tm2, tm1)
        mid = tensor_mor(Morphism.identity(self.d1.source), g)
        return homology_induced(fa, incl_a, fb, incl_b, mid)

    def __repr__(self):
        return f"H_{self.index}(P (x) -)"


def presentation_map(m):
    """An injective presentation ``R^s -> R^k`` with cokernel ``m``."""
    D = m.domain
    h, _ = m.relations.hnf()
    keep = [j for j in range(h.cols)
            if any(not D.is_zero(h.data[i][j]) for i in range(h.rows))]
    a = h.take_cols(keep)
    return Morphism(FpModule.free(D, a.cols), FpModule.free(D, m.ambient), a)


def ext_functor(m, i=1):
    """``Ext^i(M, -)`` for i in {0, 1}; i = 1 is coherent on a free presentation."""
    if i == 0:
        return HomFrom(m)
    if i == 1:
        return CoherentFunctor(presentation_map(m))
    raise ValueError("projective dimension over these backends is at most 1")


def tor_functor(m, i=1):
    """``Tor_i(M, -)`` for i in {0, 1} via the tensored free resolution."""
    if i not in (0, 1):
        raise ValueError("projective dimension over these backends is at most 1")
    pres = presentation_map(m)
    d2 = Morphism.zero_map(FpModule.zero(m.domain), pres.source)
    return ComplexHomology(d2, pres, i)


class GammaFunctor(Functor):
    def __init__(self, ideal):
        self.ideal = ideal

    def __call__(self, n):
        return gamma(self.ideal, n).part

    def map(self, g):
        ga = gamma(self.ideal, g.source)
        gb = gamma(self.ideal, g.target)
        return g.compose(ga.include).factor_through(gb.include)

    def __repr__(self):
        return f"Gamma_{self.ideal!r}"


class ModGamma(Functor):
    def __init__(self, ideal):
        self.ideal = ideal

    def __call__(self, n):
        return gamma(self.ideal, n).quotient

    def map(self, g):
        qa = gamma(self.ideal, g.source).quotient
        qb = gamma(self.ideal, g.target).quotient
        return Morphism(qa, qb, g.mat)

    def __repr__(self):
        return f"Id/Gamma_{self.ideal!r}"


class TauFunctor(Functor):
    def __init__(self, cmc_set):
        self.cmc_set = cmc_set

    def __call__(self, n):
        return tau(self.cmc_set, n).part

    def map(self, g):
        ta = tau(self.cmc_set, g.source)
        tb = tau(self.cmc_set, g.target)
        return g.compose(ta.include).factor_through(tb.include)

    def __repr__(self):
        return f"tau_{self.cmc_set!r}"


class ModTau(Functor):
    def __init__(self, cmc_set):
        self.cmc_set = cmc_set

    def __call__(self, n):
        return tau(self.cmc_set, n).quotient

    def map(self, g):
        qa = tau(self.cmc_set, g.source).quotient
        qb = tau(self.cmc_set, g.target).quotient
        return Morphism(qa, qb, g.mat)

    def __repr__(self):
        return f"Id/tau_{self.cmc_set!r}"


class EndSummand(NamedTuple):
    """One summand of a middle-finite complex end; localized when invert is set."""

    module: FpModule
    invert: object = None


class MiddleFiniteComplex:
    """``A -> B -> C`` with finitely presented middle and possibly localized ends.

    The maps are block matrices of ring elements between ambient generators;
    blocks into or out of a localized summand are composed with the canonical
    localization map.  The composite is checked to vanish, summand by summand,
    up to the localization (an element of ``C[1/x]`` is zero iff it is
    x-power torsion in ``C``).
    """

    def __init__(self, a_ends, b, c_ends, d_a, d_b):
        self.a_ends = tuple(a_ends)
        self.b = b
        self.c_ends = tuple(c_ends)
        a_dim = sum(s.module.ambient for s in self.a_ends)
        c_dim = sum(s.module.ambient for s in self.c_ends)
        if d_a.rows != b.ambient or d_a.cols != a_dim:
            raise ValueError("d_a has the wrong shape")
        if d_b.rows != c_dim or d_b.cols != b.ambient:
            raise ValueError("d_b has the wrong shape")
        self.d_a = d_a
        self.d_b = d_b
        self._check_composite()

    def has_localized_ends(self):
        return any(s.invert is not None for s in self.a_ends + self.c_ends)

    def _check_composite(self):
        D = self.b.domain
        comp = self.d_b @ self.d_a
        row = 0
        for summand in self.c_ends:
            block = comp.take_rows(range(row, row + summand.module.ambient))
            row += summand.module.ambient
            for j in range(block.cols):
                col = block.col(j)
                if summand.invert is None:
                    ok = summand.module.contains_vector(col)
                else:
                    torsion = gamma(Ideal(D, summand.invert), summand.module)
                    aug = torsion.include.mat.hstack(summand.module.relations)
                    ok = aug.solve(col) is not None
                if not ok:
                    raise ValueError("middle-finite complex has nonzero composite")

    def _tensor_end(self, summand, n):
        if summand.invert is None:
            return summand.module.tensor(n)
        return loc_tensor(LocModule(summand.module, summand.invert), n)

    def _tensored(self, n):
        D = self.b.domain
        if self.has_localized_ends() and not n.is_torsion():
            raise DomainViolation("localized ends require a torsion argument")
        b_n = self.b.tensor(n)
        a_n = FpModule.zero(D)
        for s in self.a_ends:
            a_n = a_n.direct_sum(self._tensor_end(s, n))
        c_n = FpModule.zero(D)
        for s in self.c_ends:
            c_n = c_n.direct_sum(self._tensor_end(s, n))
        ident = Mat.identity(D, n.ambient)
        try:
            f = Morphism(a_n, b_n, self.d_a.kron(ident))
            h = Morphism(b_n, c_n, self.d_b.kron(ident))
        except Exception as exc:
            raise DomainViolation(f"maps do not descend to localizations: {exc}") from exc
        return f, h

    def __repr__(self):
        return f"MiddleFinite({len(self.a_ends)} -> {self.b!r} -> {len(self.c_ends)})"


class MiddleFiniteFunctor(Functor):
    """``N -> H(sigma (x) N)`` for a middle-finite complex ``sigma``."""

    def __init__(self, complex_):
        self.complex = complex_

    def __call__(self, n):
        f, h = self.complex._tensored(n)
        value, _ = homology_at(f, h)
        return value

    def map(self, g):
        sf, sh = self.complex._tensored(g.source)
        tf, th = self.complex._tensored(g.target)
        fa, incl_a = homology_at(sf, sh)
        fb, incl_b = homology_at(tf, th)
        mid = tensor_mor(Morphism.identity(self.complex.b), g)
        return homology_induced(fa, incl_a, fb, incl_b, mid)

    def __repr__(self):
        return f"H({self.complex!r} (x) -)"


def gamma_as_middle_finite(ideal):
    """``Gamma_(g)`` as homology of ``0 -> R -> R[1/g]``."""
    D = ideal.domain
    r = FpModule.free(D, 1)
    complex_ = MiddleFiniteComplex(
        a_ends=[], b=r, c_ends=[EndSummand(r, ideal.gen)],
        d_a=Mat.zero(D, 1, 0), d_b=Mat.identity(D, 1))
    return MiddleFiniteFunctor(complex_)


class ExponentSet:
    """A subset of the positive integers: finite members plus progressions a + bN."""

    __slots__ = ("members", "progressions")

    def __init__(self, members=(), progressions=()):
        members = frozenset(int(e) for e in members)
        if any(e < 1 for e in members):
            raise ValueError("exponents must be positive")
        progs = []
        for a, b in progressions:
            a, b = int(a), int(b)
            if a < 1 or b < 1:
                raise ValueError("progressions need a >= 1 and step >= 1")
            progs.append((a, b))
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "progressions", tuple(progs))

    def __setattr__(self, name, value):
        raise AttributeError("ExponentSet is immutable")

    def __contains__(self, e):
        if e in self.members:
            return True
        return any(e >= a and (e - a) % b == 0 for a, b in self.progressions)

    def to_json(self):
        doc = {}
        if self.members:
            doc["members"] = sorted(self.members)
        if self.progressions:
            doc["progressions"] = [list(p) for p in self.progressions]
        return doc

    def __repr__(self):
        parts = [str(e) for e in sorted(self.members)]
        parts += [f"{a}+{b}N" for a, b in self.progressions]
        return "{" + ", ".join(parts) + "}"


EMPTY_EXPONENTS = ExponentSet()


class SkeletonFormError(DomainViolation):
    """An object or morphism endpoint is not a sorted prime-power presentation."""


def skeleton(n):
    """Normalize a torsion module into its skeleton: sorted prime-power summands.

    Returns ``(skel, to_skel, from_skel)`` with mutually inverse morphisms;
    the skeleton presentation is ``diag(p1^e1, ..., pj^ej)`` ordered by prime
    then exponent.
    """
    if not n.is_torsion():
        raise DomainViolation("skeleton is defined for torsion modules only")
    D = n.domain
    pairs = []
    for idx, d in enumerate(n.factors):
        for p, e in D.factor(d):
            pairs.append((p, e, idx))
    pairs.sort(key=lambda t: (D.prime_key(t[0]), t[1], t[2]))
    dim = len(n.factors)
    skel_cols = []
    split = [[D.zero] * dim for _ in range(len(pairs))]
    crt = [[D.zero] * len(pairs) for _ in range(dim)]
    for r, (p, e, idx) in enumerate(pairs):
        q = D.pow(p, e)
        col = [D.zero] * len(pairs)
        col[r] = q
        skel_cols.append(col)
        split[r][idx] = D.one
        d = n.factors[idx]
        m = D.exact_div(d, q)
        _, u, _ = D.gcd_ext(m, q)
        crt[idx][r] = D.divmod(D.mul(u, m), d)[1]
    skel = FpModule(D, len(pairs), Mat.from_cols(D, skel_cols, len(pairs)))
    split_m = Mat(D, split, len(pairs), dim)
    crt_m = Mat(D, crt, dim, len(pairs))
    to_skel = Morphism(n, skel, split_m @ n._to_dec)
    from_skel = Morphism(skel, n, n._from_dec @ crt_m)
    return skel, to_skel, from_skel


def skeleton_pairs(module):
    """Read ``[(p, e), ...]`` off a skeleton-form module, or raise."""
    D = module.domain
    rel = module.relations
    if module.rank != 0 or rel.cols != module.ambient:
        raise SkeletonFormError("not a skeleton presentation")
    pairs = []
    for j in range(rel.cols):
        col = rel.col(j)
        if any(not D.is_zero(a) for i, a in enumerate(col) if i != j):
            raise SkeletonFormError("relations are not diagonal")
        d = col[j]
        if D.is_zero(d) or D.is_unit(d):
            raise SkeletonFormError("diagonal entries must be prime powers")
        fac = D.factor(d)
        if len(fac) != 1:
            raise SkeletonFormError("diagonal entries must be prime powers")
        p, e = fac[0]
        if D.canon(d)[0] != d:
            raise SkeletonFormError("diagonal entries must be canonical")
        pairs.append((p, e))
    keys = [(D.prime_key(p), e) for p, e in pairs]
    if keys != sorted(keys):
        raise SkeletonFormError("summands are not canonically sorted")
    return pairs


class OscillatingFunctor(Functor):
    """Per-prime exponent rules on the skeleton of finite torsion modules.

    ``F(R/p^e) = R/p`` when ``e`` lies in the exponent set of ``p`` and 0
    otherwise; on morphisms only the blocks between summands with the same
    prime and same exponent survive, reduced mod p.  Arbitrary torsion inputs
    are normalized into skeleton form first and morphisms are conjugated by
    the normalization isomorphisms.
    """

    def __init__(self, domain, rules):
        self.domain = domain
        canon_rules = {}
        for p, exps in rules.items():
            c = domain.canon(p)[0]
            fac = domain.factor(c)
            if len(fac) != 1 or fac[0][1] != 1:
                raise ValueError(f"{domain.elem_str(p)} is not prime")
            canon_rules[c] = exps
        self.rules = canon_rules

    def exponents_of(self, p):
        return self.rules.get(p, EMPTY_EXPONENTS)

    def eval_skeleton(self, module):
        """Object rule on a module already in skeleton form."""
        pairs = skeleton_pairs(module)
        kept = [p for (p, e) in pairs if e in self.exponents_of(p)]
        return _diag_of(self.domain, kept)

    def map_skeleton(self, g):
        """Morphism rule when both endpoints are in skeleton form."""
        D = self.domain
        spairs = skeleton_pairs(g.source)
        tpairs = skeleton_pairs(g.target)
        skeep = [i for i, (p, e) in enumerate(spairs) if e in self.exponents_of(p)]
        tkeep = [j for j, (p, e) in enumerate(tpairs) if e in self.exponents_of(p)]
        fa = _diag_of(D, [spairs[i][0] for i in skeep])
        fb = _diag_of(D, [tpairs[j][0] for j in tkeep])
        out = [[D.zero] * len(skeep) for _ in range(len(tkeep))]
        for col, i in enumerate(skeep):
            for row, j in enumerate(tkeep):
                p_i, e_i = spairs[i]
                p_j, e_j = tpairs[j]
                if p_i == p_j and e_i == e_j:
                    out[row][col] = D.divmod(g.mat.data[j][i], p_j)[1]
        return Morphism(fa, fb, Mat(D, out, len(tkeep), len(skeep)))

    def __call__(self, n):
        skel, _, _ = skeleton(n)
        return self.eval_skeleton(skel)

    def map(self, g):
        _, to_a, from_a = skeleton(g.source)
        _, to_b, _ = skeleton(g.target)
        conj = to_b.compose(g).compose(from_a)
        return self.map_skeleton(conj)

    def __repr__(self):
        inner = ", ".join(f"{self.domain.elem_str(p)}: {s!r}" for p, s in self.rules.items())
        return "Osc{" + inner + "}"


def _diag_of(domain, elems):
    k = len(elems)
    cols = []
    for i, d in enumerate(elems):
        col = [domain.zero] * k
        col[i] = d
        cols.append(col)
    return FpModule(domain, k, Mat.from_cols(domain, cols, k))


def evaluate(functor, n):
    return functor(n)


def evaluate_mor(functor, g):
    return functor.map(g)
