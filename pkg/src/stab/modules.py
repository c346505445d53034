"""The constructive category of finitely presented modules over a backend.

A module is ``R^k / <columns of a relation matrix>``.  Submodules are always
given by generator matrices inside an ambient presentation; everything
(membership, kernels, subquotients) routes through exact solving and syzygy
computation on augmented matrices.

The invariant-factor decomposition is computed once at construction via the
Smith normal form of the relations; isomorphism testing reduces to comparing
``(rank, invariant factors)``.

>>> from stab.domains import ZZ
>>> M = FpModule.from_relations(ZZ, [[2, 4], [6, 8]])
>>> M.rank, list(M.factors)
(0, [2, 4])
>>> FpModule.free(ZZ, 1).tensor(M).is_isomorphic_to(M)
True
"""

from __future__ import annotations

from .domains import BackendMismatch
from .matrices import Mat


class NotWellDefined(ValueError):
    """A generator-image matrix does not send relations into relations."""


class SubmoduleError(ValueError):
    """A submodule precondition (such as W contained in V) fails."""


class DomainViolation(ValueError):
    """An input lies outside the domain of the requested operation."""


class Ideal:
    """A principal ideal, stored by its canonical generator (possibly zero)."""

    __slots__ = ("domain", "gen")

    def __init__(self, domain, gen):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "gen", domain.canon(gen)[0])

    def __setattr__(self, name, value):
        raise AttributeError("Ideal is immutable")

    def power_gen(self, n):
        """Generator of the n-th power; ``I^0 = R`` even for the zero ideal."""
        if n == 0:
            return self.domain.one
        return self.domain.pow(self.gen, n)

    def is_zero(self):
        return self.domain.is_zero(self.gen)

    def is_unit_ideal(self):
        return self.domain.is_unit(self.gen)

    def contains(self, elem):
        return self.domain.divides(self.gen, elem)

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.domain == other.domain
                and self.gen == other.gen)

    def __hash__(self):
        return hash((self.domain, self.gen))

    def __repr__(self):
        return f"({self.domain.elem_str(self.gen)})"


class FpModule:
    """A finitely presented module: ambient free rank plus a relation matrix."""

    __slots__ = ("domain", "ambient", "relations", "rank", "factors",
                 "_dec_rows", "_to_dec", "_from_dec")

    def __init__(self, domain, ambient, relations=None):
        if relations is None:
            relations = Mat.zero(domain, ambient, 0)
        if relations.rows != ambient:
            raise ValueError("relation matrix must have one row per ambient generator")
        if relations.domain != domain:
            raise BackendMismatch("relations over wrong backend")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "relations", relations)
        self._decompose()

    def __setattr__(self, name, value):
        raise AttributeError("FpModule is immutable")

    def _decompose(self):
        D = self.domain
        dmat, u, _, uinv, _ = self.relations._snf_full()
        diag = dmat.diagonal()
        torsion_rows = [i for i, d in enumerate(diag)
                        if not D.is_zero(d) and not D.is_unit(d)]
        free_rows = [i for i in range(self.ambient)
                     if i >= len(diag) or D.is_zero(diag[i])]
        order = torsion_rows + free_rows
        object.__setattr__(self, "rank", len(free_rows))
        object.__setattr__(self, "factors", tuple(diag[i] for i in torsion_rows))
        object.__setattr__(self, "_dec_rows", tuple(order))
        # Rows with unit diagonal entries present generators that vanish, so
        # dropping them from the transforms is an isomorphism.
        object.__setattr__(self, "_to_dec", u.take_rows(order))
        object.__setattr__(self, "_from_dec", uinv.take_cols(order))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_relations(cls, domain, rows, ambient=None):
        if ambient is None:
            ambient = len(rows)
        cols = len(rows[0]) if rows else 0
        return cls(domain, ambient, Mat(domain, rows, ambient, cols))

    @classmethod
    def free(cls, domain, rank):
        return cls(domain, rank)

    @classmethod
    def zero(cls, domain):
        return cls(domain, 0)

    @classmethod
    def from_invariants(cls, domain, rank, factors):
        """``R^rank (+) R/(d)`` for each listed factor, torsion generators first."""
        factors = [domain.canon(d)[0] for d in factors]
        if any(domain.is_zero(d) for d in factors):
            raise ValueError("zero invariant factor; use rank for free summands")
        factors = [d for d in factors if not domain.is_unit(d)]
        k = len(factors) + rank
        cols = []
        for i, d in enumerate(factors):
            col = [domain.zero] * k
            col[i] = d
            cols.append(col)
        return cls(domain, k, Mat.from_cols(domain, cols, k))

    @classmethod
    def cyclic(cls, domain, d):
        """R/(d); the free module of rank one when d == 0."""
        if domain.is_zero(d):
            return cls.free(domain, 1)
        return cls.from_invariants(domain, 0, [d])

    # -- structure ------------------------------------------------------------

    def decompose(self):
        """``(free rank, invariant factors)`` with units dropped, d1 | d2 | ..."""
        return self.rank, list(self.factors)

    def dec_module(self):
        """The diagonal presentation isomorphic to this module."""
        return FpModule.from_invariants(self.domain, self.rank, list(self.factors))

    def to_dec(self):
        """Isomorphism onto :meth:`dec_module`."""
        return Morphism(self, self.dec_module(), self._to_dec)

    def from_dec(self):
        """Inverse isomorphism from :meth:`dec_module`."""
        return Morphism(self.dec_module(), self, self._from_dec)

    def is_zero(self):
        return self.rank == 0 and not self.factors

    def is_torsion(self):
        return self.rank == 0

    def is_isomorphic_to(self, other):
        return (self.domain == other.domain and self.rank == other.rank
                and self.factors == other.factors)

    def element_count(self):
        """Number of elements, or ``None`` when infinite."""
        if self.rank > 0:
            return None
        D = self.domain
        total = 1
        for d in self.factors:
            total *= abs(d) if D.kind == "integers" else D.p ** (len(d) - 1)
        return total

    def elements(self):
        """All elements as ambient coordinate vectors (finite modules only)."""
        D = self.domain
        if self.rank > 0:
            raise DomainViolation("cannot enumerate an infinite module")
        residues = []
        for d in self.factors:
            if D.kind == "integers":
                residues.append([r for r in range(abs(d))])
            else:
                p, deg = D.p, len(d) - 1
                opts = [()]
                for _ in range(deg):
                    opts = [o + (c,) for o in opts for c in range(p)]
                residues.append([_trim_tuple(o) for o in opts])
        out = [[]]
        for opts in residues:
            out = [v + [o] for v in out for o in opts]
        frommat = self._from_dec
        return [frommat.mul_vec(v) for v in out]

    def contains_vector(self, vec):
        """Membership of an ambient vector in the relation span (i.e. is it 0)."""
        return self.relations.solve(vec) is not None

    # -- constructions ----------------------------------------------------------

    def direct_sum(self, other):
        self._check(other)
        D = self.domain
        top = self.relations.hstack(Mat.zero(D, self.ambient, other.relations.cols))
        bot = Mat.zero(D, other.ambient, self.relations.cols).hstack(other.relations)
        return FpModule(D, self.ambient + other.ambient, top.vstack(bot))

    def tensor(self, other):
        """Tensor product; generator ``(i, j)`` sits at index ``i * other.ambient + j``.

        >>> from stab.domains import ZZ
        >>> a = FpModule.cyclic(ZZ, 4).tensor(FpModule.cyclic(ZZ, 6))
        >>> a.decompose()
        (0, [2])
        """
        self._check(other)
        D = self.domain
        left = self.relations.kron(Mat.identity(D, other.ambient))
        right = Mat.identity(D, self.ambient).kron(other.relations)
        return FpModule(D, self.ambient * other.ambient, left.hstack(right))

    def power_quotient(self, ideal, n):
        """``M / I^n M``; for the zero ideal and n >= 1 this is M itself."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        D = self.domain
        g = ideal.power_gen(n)
        extra = Mat.scalar(D, self.ambient, g)
        return FpModule(D, self.ambient, self.relations.hstack(extra))

    def power_layer(self, ideal, n):
        """``I^(n-1) M / I^n M`` for n >= 1."""
        if n < 1:
            raise ValueError("layers need n >= 1")
        D = self.domain
        gens = Mat.identity(D, self.ambient)
        scaled = Mat.scalar(D, self.ambient, ideal.gen)
        return self.subquotient(Mat.zero(D, self.ambient, 0), gens, scaled, ideal, n - 1)

    def subquotient(self, u, v, w, ideal, n):
        """``(<U> + I^n <V>) / I^n <W>`` inside this module; requires W inside V.

        Columns of ``u``, ``v``, ``w`` are ambient vectors read modulo the
        relations.  The result is presented on the generators ``[U | g^n V]``.
        """
        D = self.domain
        for m_ in (u, v, w):
            if m_.rows != self.ambient:
                raise ValueError("submodule generators must live in the ambient module")
        vr = v.hstack(self.relations)
        for j in range(w.cols):
            if vr.solve(w.col(j)) is None:
                raise SubmoduleError("W is not contained in V")
        g = ideal.power_gen(n)
        gens = u.hstack(v.scale(g))
        killed = w.scale(g)
        big = gens.hstack(killed).hstack(self.relations)
        syz = big.kernel().take_rows(range(gens.cols))
        pres, _ = syz.hnf()
        keep = [j for j in range(pres.cols)
                if any(not D.is_zero(pres.data[i][j]) for i in range(pres.rows))]
        return FpModule(D, gens.cols, pres.take_cols(keep))

    def submodule(self, gens):
        """Presentation of the submodule spanned by the given generator columns.

        Returns ``(S, include)`` with ``include`` the inclusion into this module.
        """
        D = self.domain
        if gens.rows != self.ambient:
            raise ValueError("generators must live in the ambient module")
        big = gens.hstack(self.relations)
        syz = big.kernel().take_rows(range(gens.cols))
        pres, _ = syz.hnf()
        keep = [j for j in range(pres.cols)
                if any(not D.is_zero(pres.data[i][j]) for i in range(pres.rows))]
        sub = FpModule(D, gens.cols, pres.take_cols(keep))
        return sub, Morphism(sub, self, gens)

    def _check(self, other):
        if self.domain != other.domain:
            raise BackendMismatch("modules over different backends")

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        D = self.domain
        if self._is_diag_presentation():
            return {"rank": self.rank, "factors": [D.elem_to_json(d) for d in self.factors]}
        return {"relations": [[D.elem_to_json(a) for a in row] for row in self.relations.data],
                "ambient": self.ambient}

    def _is_diag_presentation(self):
        # Exactly the shape produced by from_invariants.
        D = self.domain
        if self.relations.cols != len(self.factors):
            return False
        if self.ambient != len(self.factors) + self.rank:
            return False
        for j in range(self.relations.cols):
            col = self.relations.col(j)
            if col[j] != self.factors[j]:
                return False
            if any(not D.is_zero(a) for i, a in enumerate(col) if i != j):
                return False
        return True

    @classmethod
    def from_json(cls, domain, doc):
        if "relations" in doc:
            rows = [[domain.elem_from_json(a) for a in row] for row in doc["relations"]]
            ambient = doc.get("ambient", len(rows))
            cols = len(rows[0]) if rows else 0
            return cls(domain, ambient, Mat(domain, rows, ambient, cols))
        rank = int(doc.get("rank", 0))
        factors = [domain.elem_from_json(d) for d in doc.get("factors", [])]
        return cls.from_invariants(domain, rank, factors)

    def __repr__(self):
        D = self.domain
        parts = ["R"] * self.rank + [f"R/({D.elem_str(d)})" for d in self.factors]
        return " + ".join(parts) if parts else "0"


def _trim_tuple(t):
    i = len(t)
    while i > 0 and t[i - 1] == 0:
        i -= 1
    return t[:i]


class Morphism:
    """A module map given by a generator-image matrix.

    The matrix sends ambient generators of the source to ambient vectors of
    the target; construction verifies well-definedness (every source relation
    maps into the target relation span).  Equality is equality modulo the
    target relations.
    """

    __slots__ = ("source", "target", "mat")

    def __init__(self, source, target, mat, check=True):
        if mat.rows != target.ambient or mat.cols != source.ambient:
            raise ValueError("generator-image matrix has wrong shape")
        if source.domain != target.domain or mat.domain != source.domain:
            raise BackendMismatch("morphism backend mismatch")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mat", mat)
        if check:
            rel = source.relations
            for j in range(rel.cols):
                if not target.contains_vector(mat.mul_vec(rel.col(j))):
                    raise NotWellDefined("images of relations do not vanish")

    def __setattr__(self, name, value):
        raise AttributeError("Morphism is immutable")

    @classmethod
    def identity(cls, module):
        return cls(module, module, Mat.identity(module.domain, module.ambient), check=False)

    @classmethod
    def zero_map(cls, source, target):
        return cls(source, target, Mat.zero(source.domain, target.ambient, source.ambient),
                   check=False)

    @classmethod
    def mult_by(cls, elem, module):
        return cls(module, module, Mat.scalar(module.domain, module.ambient, elem),
                   check=False)

    def compose(self, other):
        """``self after other``."""
        if other.target.ambient != self.source.ambient:
            raise ValueError("composition shape mismatch")
        return Morphism(other.source, self.target, self.mat @ other.mat, check=False)

    def __add__(self, other):
        return Morphism(self.source, self.target, self.mat + other.mat, check=False)

    def __sub__(self, other):
        return Morphism(self.source, self.target, self.mat - other.mat, check=False)

    def apply(self, vec):
        return self.mat.mul_vec(vec)

    def is_zero(self):
        return all(self.target.contains_vector(self.mat.col(j))
                   for j in range(self.mat.cols))

    def equals(self, other):
        if self.source.ambient != other.source.ambient or \
                self.target.ambient != other.target.ambient:
            return False
        return (self - other).is_zero()

    def kernel(self):
        """``(K, include)`` with ``include`` the inclusion of the kernel."""
        big = self.mat.hstack(self.target.relations)
        pre = big.kernel().take_rows(range(self.source.ambient))
        gens, _ = pre.hnf()
        D = self.source.domain
        keep = [j for j in range(gens.cols)
                if any(not D.is_zero(gens.data[i][j]) for i in range(gens.rows))]
        return self.source.submodule(gens.take_cols(keep))

    def cokernel(self):
        """``(C, project)``; the cokernel shares the target's ambient generators."""
        C = FpModule(self.target.domain, self.target.ambient,
                     self.target.relations.hstack(self.mat))
        return C, Morphism(self.target, C, Mat.identity(self.target.domain,
                                                        self.target.ambient), check=False)

    def image(self):
        """``(I, include)``: the image as a submodule of the target."""
        return self.target.submodule(self.mat)

    def factor_through(self, include):
        """Express this morphism through a submodule inclusion of its target.

        ``include`` is a morphism ``S -> target`` whose image contains the
        image of ``self``; returns ``f' : source -> S`` with
        ``include . f' == self``.
        """
        aug = include.mat.hstack(self.target.relations)
        cols = []
        for j in range(self.mat.cols):
            sol = aug.solve(self.mat.col(j))
            if sol is None:
                raise SubmoduleError("morphism does not factor through the submodule")
            cols.append(sol[:include.mat.cols])
        return Morphism(self.source, include.source,
                        Mat.from_cols(self.source.domain, cols, include.mat.cols))

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


class LocModule:
    """A finitely presented module with one element formally inverted."""

    __slots__ = ("base", "inverted")

    def __init__(self, base, inverted):
        if base.domain.is_zero(inverted):
            raise ValueError("cannot invert zero")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "inverted", inverted)

    def __setattr__(self, name, value):
        raise AttributeError("LocModule is immutable")

    def __repr__(self):
        return f"({self.base!r})[1/{self.base.domain.elem_str(self.inverted)}]"


def direct_sum(m, n):
    return m.direct_sum(n)


def tensor(m, n):
    return m.tensor(n)


def tensor_mor(f, g):
    """``f (x) g`` on tensor products, matching :meth:`FpModule.tensor` indexing."""
    src = f.source.tensor(g.source)
    tgt = f.target.tensor(g.target)
    return Morphism(src, tgt, f.mat.kron(g.mat), check=False)


def loc_tensor(loc, n):
    """``(base[1/x]) (x) N`` for torsion ``N``: the x-primary part of each
    invariant factor dies.  Shares the ambient of ``base (x) N`` so the
    canonical localization map is the identity matrix.
    """
    if not n.is_torsion():
        raise DomainViolation("localized tensor needs a torsion module")
    D = n.domain
    base = loc.base.tensor(n)
    x = loc.inverted
    extra = []
    for idx, d in enumerate(base.factors):
        t = D.exact_div(d, D.saturate_part(d, x))
        col = [D.zero] * (len(base.factors) + base.rank)
        col[idx] = t
        extra.append(base._from_dec.mul_vec(col))
    if not extra:
        return base
    add = Mat.from_cols(D, extra, base.ambient)
    return FpModule(D, base.ambient, base.relations.hstack(add))


class HomSpace:
    """``Hom(M, N)`` as a module plus realize/coordinate maps.

    The generators are indexed by pairs of decomposition summands of ``M``
    and ``N`` in decomposition order (torsion summands ascending by invariant
    factor, then free summands).

    >>> from stab.domains import ZZ
    >>> H = hom(FpModule.cyclic(ZZ, 6), FpModule.cyclic(ZZ, 4))
    >>> H.module.decompose()
    (0, [2])
    """

    __slots__ = ("source", "target", "module", "pairs")

    def __init__(self, source, target):
        source._check(target)
        D = source.domain
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        ssum = list(source.factors) + [None] * source.rank
        tsum = list(target.factors) + [None] * target.rank
        pairs = []
        for i, a in enumerate(ssum):
            for j, b in enumerate(tsum):
                if a is None and b is None:
                    pairs.append((i, j, D.zero, D.one))
                elif a is None:
                    pairs.append((i, j, b, D.one))
                elif b is None:
                    continue  # torsion to free is zero
                else:
                    g = D.gcd(a, b)
                    if D.is_unit(g):
                        continue
                    pairs.append((i, j, g, D.exact_div(b, g)))
        object.__setattr__(self, "pairs", tuple(pairs))
        object.__setattr__(self, "module",
                           _diag_module(D, [ann for (_, _, ann, _) in pairs]))

    def __setattr__(self, name, value):
        raise AttributeError("HomSpace is immutable")

    def realize(self, coords):
        """The morphism with the given coordinates over the Hom generators."""
        D = self.source.domain
        sdim = len(self.source.factors) + self.source.rank
        tdim = len(self.target.factors) + self.target.rank
        dec = [[D.zero] * sdim for _ in range(tdim)]
        for c, (i, j, _, mult) in zip(coords, self.pairs):
            dec[j][i] = D.add(dec[j][i], D.mul(c, mult))
        mat = self.target._from_dec @ Mat(D, dec, tdim, sdim) @ self.source._to_dec
        return Morphism(self.source, self.target, mat)

    def coords(self, f):
        """Coordinates of a morphism ``source -> target`` over the generators."""
        D = self.source.domain
        dec = self.target._to_dec @ f.mat @ self.source._from_dec
        out = []
        for (i, j, ann, mult) in self.pairs:
            t = dec.data[j][i]
            c = D.exact_div(t, mult) if not D.is_unit(mult) else D.mul(t, D.unit_inv(mult))
            if not D.is_zero(ann):
                c = D.divmod(c, ann)[1]
            out.append(c)
        return out

    def generators(self):
        """The generator morphisms themselves."""
        D = self.source.domain
        n = len(self.pairs)
        outs = []
        for k in range(n):
            coords = [D.one if t == k else D.zero for t in range(n)]
            outs.append(self.realize(coords))
        return outs


def _diag_module(domain, anns):
    k = len(anns)
    cols = []
    for i, a in enumerate(anns):
        if domain.is_zero(a):
            continue
        col = [domain.zero] * k
        col[i] = a
        cols.append(col)
    return FpModule(domain, k, Mat.from_cols(domain, cols, k))


def hom(m, n):
    return HomSpace(m, n)


def _hom_induced_full(f, n):
    hl = HomSpace(f.target, n)
    hk = HomSpace(f.source, n)
    cols = [hk.coords(g.compose(f)) for g in hl.generators()]
    mat = Mat.from_cols(f.source.domain, cols, len(hk.pairs))
    return hl, hk, Morphism(hl.module, hk.module, mat)


def hom_induced(f, n):
    """Precomposition ``Hom(L, N) -> Hom(K, N)`` for ``f : K -> L``."""
    return _hom_induced_full(f, n)[2]


def sub_member(ambient_mod, gens, vec):
    """Whether an ambient vector lies in ``<gens> + relations``."""
    return gens.hstack(ambient_mod.relations).solve(vec) is not None


def sub_contains(ambient_mod, g1, g2):
    """Whether ``<g2>`` is contained in ``<g1>`` inside the module."""
    aug = g1.hstack(ambient_mod.relations)
    return all(aug.solve(g2.col(j)) is not None for j in range(g2.cols))


def sub_equal(ambient_mod, g1, g2):
    return sub_contains(ambient_mod, g1, g2) and sub_contains(ambient_mod, g2, g1)


def sub_intersect(ambient_mod, g1, g2):
    """Generators of the intersection of two submodules of the same module."""
    big = g1.hstack(g2).hstack(ambient_mod.relations)
    ker = big.kernel()
    part = ker.take_rows(range(g1.cols))
    gens = g1 @ part
    canon, _ = gens.hnf()
    D = ambient_mod.domain
    keep = [j for j in range(canon.cols)
            if any(not D.is_zero(canon.data[i][j]) for i in range(canon.rows))]
    return canon.take_cols(keep)


def kernel_m(f):
    return f.kernel()


def cokernel_m(f):
    return f.cokernel()


def image_m(f):
    return f.image()
