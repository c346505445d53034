"""Randomized functor-law checking shared by the test suite and the CLI.

A trial draws random composable morphisms (through Hom spaces, so they are
well-defined by construction) and checks that the functor preserves
identities, composition, and sums, with equality read modulo target
relations.
"""

from __future__ import annotations

import random

from .modules import FpModule, Morphism, HomSpace


def random_torsion_module(domain, rng, max_summands=3, pool=None):
    if pool is None:
        if domain.kind == "integers":
            pool = [2, 3, 4, 8, 9, 12]
        else:
            x = (0, domain.one[0])
            pool = [domain.add(x, domain.one), x,
                    domain.mul(x, x), domain.mul(x, domain.add(x, domain.one))]
    k = rng.randint(1, max_summands)
    factors = [pool[rng.randrange(len(pool))] for _ in range(k)]
    return FpModule.from_invariants(domain, 0, factors)


def random_module(domain, rng, max_summands=3, max_rank=1, pool=None):
    m = random_torsion_module(domain, rng, max_summands, pool)
    rank = rng.randint(0, max_rank)
    if rank:
        return FpModule.free(domain, rank).direct_sum(m)
    return m


def random_morphism(source, target, rng, bound=6):
    """A uniformly random-ish well-defined morphism via Hom coordinates."""
    h = HomSpace(source, target)
    domain = source.domain
    coords = []
    for _ in h.pairs:
        if domain.kind == "integers":
            coords.append(rng.randint(-bound, bound))
        else:
            coords.append(tuple(rng.randrange(domain.p) for _ in range(2)))
    coords = [domain.elem_from_json(list(c) if isinstance(c, tuple) else c)
              for c in coords]
    return h.realize(coords)


def check_functor_laws(functor, domain, rng=None, trials=50, torsion_only=False,
                       module_pool=None):
    """Run identity/composition/additivity law trials; returns failure strings."""
    if rng is None:
        rng = random.Random(0)
    failures = []
    make = random_torsion_module if torsion_only else random_module
    for t in range(trials):
        m = make(domain, rng, pool=module_pool)
        n = make(domain, rng, pool=module_pool)
        l = make(domain, rng, pool=module_pool)
        f = random_morphism(m, n, rng)
        f2 = random_morphism(m, n, rng)
        g = random_morphism(n, l, rng)
        ident = functor.map(Morphism.identity(m))
        if not ident.equals(Morphism.identity(functor(m))):
            failures.append(f"trial {t}: F(id) != id on {m!r}")
        lhs = functor.map(g.compose(f))
        rhs = functor.map(g).compose(functor.map(f))
        if not lhs.equals(rhs):
            failures.append(f"trial {t}: F(g.f) != F(g).F(f) on {m!r}->{n!r}->{l!r}")
        lhs = functor.map(f + f2)
        rhs = functor.map(f) + functor.map(f2)
        if not lhs.equals(rhs):
            failures.append(f"trial {t}: F(f+f') != F(f)+F(f') on {m!r}->{n!r}")
    return failures
