"""The experiment engine: ideal-power families, stabilization detection,
and the Artin-Rees exponent probe.

A family produces one finitely presented module per index ``n``; a scan
pushes the family through a functor, records associated primes and depth,
and reports whether the observed sequence is eventually constant within the
horizon.  Detection is honest about its finite window: the theorems this
machinery probes guarantee existence of a stabilization index but give no
bound, so a sequence that keeps moving is reported as
``not-stable-within-horizon`` (or as periodic when an exact period fits).

Distinct indices are independent; set ``STAB_THREADS`` to evaluate them in a
thread pool with deterministic assembly in index order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .matrices import Mat
from .modules import (FpModule, Morphism, sub_equal, sub_intersect,
                      sub_contains)
from .invariants import ass, ann, depth, ann_contains
from .functors import IdentityFunctor


class AnnihilatorViolation(RuntimeError):
    """A functor value failed the annihilator monotonicity law."""


class Family:
    """Base for ideal-power families of modules; ``generate(n)`` is pure."""

    scan_start = 1

    def generate(self, n):
        raise NotImplementedError

    def domain(self):
        raise NotImplementedError


class QuotientPowers(Family):
    """``n -> M / I^n M``."""

    def __init__(self, module, ideal):
        self.module = module
        self.ideal = ideal

    def generate(self, n):
        return self.module.power_quotient(self.ideal, n)

    def domain(self):
        return self.module.domain


class Layers(Family):
    """``n -> I^(n-1) M / I^n M``."""

    def __init__(self, module, ideal):
        self.module = module
        self.ideal = ideal

    def generate(self, n):
        return self.module.power_layer(self.ideal, n)

    def domain(self):
        return self.module.domain


class GradedLayers(Family):
    """``n -> I^n M / I^n M'`` for a submodule given by generators."""

    def __init__(self, module, sub_gens, ideal):
        self.module = module
        self.sub_gens = sub_gens
        self.ideal = ideal
        if sub_gens.rows != module.ambient:
            raise ValueError("submodule generators must live in the ambient module")

    def generate(self, n):
        D = self.module.domain
        return self.module.subquotient(Mat.zero(D, self.module.ambient, 0),
                                       Mat.identity(D, self.module.ambient),
                                       self.sub_gens, self.ideal, n)

    def domain(self):
        return self.module.domain


class SubquotientFamily(Family):
    """``n -> (U + I^n V) / I^n W`` inside a fixed module."""

    def __init__(self, module, u, v, w, ideal):
        self.module = module
        self.u, self.v, self.w = u, v, w
        self.ideal = ideal
        # Validate W <= V once, at n = 0.
        module.subquotient(u, v, w, ideal, 0)

    def generate(self, n):
        return self.module.subquotient(self.u, self.v, self.w, self.ideal, n)

    def domain(self):
        return self.module.domain


class KwHomology(Family):
    """Homology of ``L/I^n L' -> M/I^n M' -> N/I^n N'`` at the middle.

    With shift data ``(L1, L2, c)`` the source is ``(L1 + I^(n-c) L2)/I^n L'``,
    subject to ``I^c L' <= L2``; scans then start at ``max(1, c)``.
    """

    def __init__(self, alpha, beta, l_sub, m_sub, n_sub, ideal, shift=None):
        if not beta.compose(alpha).is_zero():
            raise ValueError("not a complex: composite is nonzero")
        self.alpha, self.beta = alpha, beta
        self.l_sub, self.m_sub, self.n_sub = l_sub, m_sub, n_sub
        self.ideal = ideal
        self.shift = shift
        lmod, mmod, nmod = alpha.source, alpha.target, beta.target
        for j in range(l_sub.cols):
            if not sub_contains(mmod, m_sub, Mat.from_cols(
                    mmod.domain, [alpha.mat.mul_vec(l_sub.col(j))], mmod.ambient)):
                raise ValueError("alpha does not map L' into M'")
        for j in range(m_sub.cols):
            if not sub_contains(nmod, n_sub, Mat.from_cols(
                    nmod.domain, [beta.mat.mul_vec(m_sub.col(j))], nmod.ambient)):
                raise ValueError("beta does not map M' into N'")
        if shift is not None:
            l1, l2, c = shift
            if c < 0:
                raise ValueError("shift offset must be nonnegative")
            g_c = ideal.power_gen(c)
            if not sub_contains(lmod, l2, l_sub.scale(g_c)):
                raise ValueError("I^c L' is not contained in L2")
            self.scan_start = max(1, c)

    def generate(self, n):
        if self.shift is not None and n < self.shift[2]:
            raise ValueError("index below the shift offset")
        if n < 0:
            raise ValueError("index must be nonnegative")
        D = self.ideal.domain
        g_n = self.ideal.power_gen(n)
        mmod, nmod = self.alpha.target, self.beta.target
        m_n = FpModule(D, mmod.ambient, mmod.relations.hstack(self.m_sub.scale(g_n)))
        n_n = FpModule(D, nmod.ambient, nmod.relations.hstack(self.n_sub.scale(g_n)))
        beta_n = Morphism(m_n, n_n, self.beta.mat)
        if self.shift is None:
            image_gens = self.alpha.mat
        else:
            l1, l2, c = self.shift
            shifted = (self.alpha.mat @ l2).scale(self.ideal.power_gen(n - c))
            image_gens = (self.alpha.mat @ l1).hstack(shifted)
        k, incl = beta_n.kernel()
        carrier = Morphism(FpModule.free(D, image_gens.cols), m_n, image_gens)
        inside = carrier.factor_through(incl)
        return FpModule(D, k.ambient, k.relations.hstack(inside.mat))

    def domain(self):
        return self.ideal.domain


@dataclass(frozen=True)
class StabilizationReport:
    """A scanned sequence of values with the detected verdict."""

    kind: str
    observations: tuple
    window: int
    status: str
    n0: Optional[int]
    period: Optional[int]

    def is_stable(self):
        return self.status == "stable"


def detect(ns, values, window):
    """Verdict for a finite observation window.

    Stable requires the last ``window`` values to agree; the reported index
    is the start of the maximal constant tail.  Otherwise the smallest exact
    period of the whole observed sequence is reported, if one exists.
    """
    count = len(values)
    if count < window:
        raise ValueError("window longer than the observation range")
    tail = values[-window:]
    if all(v == tail[0] for v in tail):
        i = count - 1
        while i > 0 and values[i - 1] == values[-1]:
            i -= 1
        return "stable", ns[i], None
    for k in range(2, count // 2 + 1):
        if all(values[i] == values[i + k] for i in range(count - k)):
            return f"oscillating-with-period-{k}", None, k
    return "not-stable-within-horizon", None, None


@dataclass(frozen=True)
class ScanRow:
    n: int
    value: FpModule
    ass_set: object
    depth_value: object


@dataclass(frozen=True)
class ScanResult:
    rows: tuple
    ass_report: StabilizationReport
    depth_report: Optional[StabilizationReport]
    ann_checks: int


def _thread_count():
    try:
        return max(1, int(os.environ.get("STAB_THREADS", "1")))
    except ValueError:
        return 1


def scan_rows(family, functor=None, depth_ideal=None, horizon=50, window=10,
              check_ann=True):
    """Evaluate a family through a functor across ``[start, horizon]``.

    Returns a :class:`ScanResult` with one row per index (invariant factors,
    associated primes, and depth when a depth ideal is given) plus detection
    verdicts.  With ``check_ann`` every evaluation asserts the annihilator
    monotonicity law ``ann(N) <= ann(F(N))``.
    """
    if functor is None:
        functor = IdentityFunctor()
    if window < 2:
        raise ValueError("window must be at least 2")
    start = family.scan_start
    if horizon < start + window - 1:
        raise ValueError("horizon too small for the requested window")
    ns = list(range(start, horizon + 1))

    def evaluate(n):
        source = family.generate(n)
        value = functor(source)
        if check_ann and not ann_contains(ann(source), ann(value)):
            raise AnnihilatorViolation(
                f"ann {ann(source)!r} not inside ann {ann(value)!r} at n={n}")
        d = depth(depth_ideal, value) if depth_ideal is not None else None
        return ScanRow(n, value, ass(value), d)

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, ns))
    else:
        rows = [evaluate(n) for n in ns]

    ass_values = [r.ass_set for r in rows]
    status, n0, period = detect(ns, ass_values, window)
    ass_report = StabilizationReport("ass", tuple(zip(ns, ass_values)),
                                     window, status, n0, period)
    depth_report = None
    if depth_ideal is not None:
        dvals = [r.depth_value for r in rows]
        status, n0, period = detect(ns, dvals, window)
        depth_report = StabilizationReport("depth", tuple(zip(ns, dvals)),
                                           window, status, n0, period)
    checks = len(rows) if check_ann else 0
    return ScanResult(tuple(rows), ass_report, depth_report, checks)


def scan_ass(family, functor=None, horizon=50, window=10, check_ann=True):
    """Associated-prime scan; see :func:`scan_rows`."""
    return scan_rows(family, functor, None, horizon, window, check_ann).ass_report


def scan_depth(depth_ideal, family, functor=None, horizon=50, window=10,
               check_ann=True):
    """Depth scan for a fixed ideal ``J``; see :func:`scan_rows`."""
    result = scan_rows(family, functor, depth_ideal, horizon, window, check_ann)
    return result.depth_report


def artin_rees_probe(beta, n_prime, ideal, horizon=10):
    """Least ``d`` with ``beta(M) * I^n N' = I^(n-d)(beta(M) * I^d N')`` for
    all ``n`` in ``[d, horizon]`` (``*`` denoting intersection), or ``None``.
    """
    target = beta.target
    if n_prime.rows != target.ambient:
        raise ValueError("N' generators must live in the target module")
    image = beta.mat
    cuts = []
    for n in range(horizon + 1):
        scaled = n_prime.scale(ideal.power_gen(n))
        cuts.append(sub_intersect(target, image, scaled))
    for d in range(horizon + 1):
        ok = True
        for n in range(d, horizon + 1):
            rhs = cuts[d].scale(ideal.power_gen(n - d))
            if not sub_equal(target, cuts[n], rhs):
                ok = False
                break
        if ok:
            return d
    return None
