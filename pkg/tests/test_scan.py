import pytest

from stab.domains import ZZ, poly_ring
from stab.matrices import Mat
from stab.modules import FpModule, Morphism, Ideal
from stab.invariants import DEPTH_INF, AssSet, PrimeIdeal
from stab.functors import (CoherentFunctor, OscillatingFunctor,
                           ExponentSet, tor_functor)
from stab.scan import (QuotientPowers, Layers, GradedLayers, SubquotientFamily,
                       KwHomology, detect, scan_ass, scan_depth, scan_rows,
                       artin_rees_probe, AnnihilatorViolation)

F2 = poly_ring(2)
R = FpModule.free(ZZ, 1)
I2 = Ideal(ZZ, 2)


def cyc(*ds):
    return FpModule.from_invariants(ZZ, 0, list(ds))


def test_family_generate_examples():
    fam = QuotientPowers(R.direct_sum(cyc(8)), I2)
    assert fam.generate(5).decompose() == (0, [8, 32])
    fam = Layers(R, I2)
    assert fam.generate(3).decompose() == (0, [2])
    fam = SubquotientFamily(R, Mat(ZZ, [[4]]), Mat(ZZ, [[1]]), Mat(ZZ, [[2]]), I2)
    assert fam.generate(3).decompose() == (0, [4])


def test_graded_layers_generate():
    fam = GradedLayers(R, Mat(ZZ, [[2]]), Ideal(ZZ, 3))
    for n in range(1, 5):
        assert fam.generate(n).decompose() == (0, [2])


def test_kw_homology_generate():
    zero = FpModule.zero(ZZ)
    alpha = Morphism(R, R, Mat(ZZ, [[2]]))
    beta = Morphism(R, zero, Mat.zero(ZZ, 0, 1))
    fam = KwHomology(alpha, beta, Mat(ZZ, [[1]]), Mat(ZZ, [[1]]),
                     Mat.zero(ZZ, 0, 0), I2)
    # H(n) = (Z/2^n) / 2(Z/2^n) = Z/2
    for n in (1, 2, 5):
        assert fam.generate(n).decompose() == (0, [2])


def test_kw_homology_shifted():
    zero = FpModule.zero(ZZ)
    alpha = Morphism(R, R, Mat(ZZ, [[2]]))
    beta = Morphism(R, zero, Mat.zero(ZZ, 0, 1))
    fam = KwHomology(alpha, beta, Mat(ZZ, [[1]]), Mat(ZZ, [[1]]),
                     Mat.zero(ZZ, 0, 0), I2,
                     shift=(Mat(ZZ, [[2]]), Mat(ZZ, [[1]]), 1))
    # image = 4Z + 2^n Z inside Z/2^n: H(n) = Z/4 for n >= 2
    assert fam.generate(1).decompose() == (0, [2])
    for n in (2, 3, 6):
        assert fam.generate(n).decompose() == (0, [4])


def test_kw_homology_validates_complex():
    alpha = Morphism(R, R, Mat(ZZ, [[2]]))
    beta = Morphism(R, R, Mat(ZZ, [[3]]))
    with pytest.raises(ValueError):
        KwHomology(alpha, beta, Mat(ZZ, [[1]]), Mat(ZZ, [[1]]), Mat(ZZ, [[1]]), I2)


def test_kw_homology_validates_shift_containment():
    zero = FpModule.zero(ZZ)
    alpha = Morphism(R, R, Mat(ZZ, [[2]]))
    beta = Morphism(R, zero, Mat.zero(ZZ, 0, 1))
    with pytest.raises(ValueError):
        KwHomology(alpha, beta, Mat(ZZ, [[1]]), Mat(ZZ, [[1]]),
                   Mat.zero(ZZ, 0, 0), I2,
                   shift=(Mat(ZZ, [[1]]), Mat(ZZ, [[4]]), 1))


def _ass_of(*ps):
    return AssSet([PrimeIdeal(ZZ, p) for p in ps])


def test_detect_stable():
    values = [_ass_of(2, 3)] + [_ass_of(2)] * 9
    status, n0, period = detect(list(range(1, 11)), values, 5)
    assert status == "stable" and n0 == 2 and period is None


def test_detect_not_stable():
    values = [_ass_of(2) if i % 5 == 0 else _ass_of(3 + i) for i in range(12)]
    status, n0, period = detect(list(range(1, 13)), values, 4)
    assert status == "not-stable-within-horizon" and n0 is None


def test_detect_periodic():
    values = [_ass_of(2) if i % 2 == 0 else AssSet([]) for i in range(12)]
    status, n0, period = detect(list(range(1, 13)), values, 4)
    assert status == "oscillating-with-period-2" and period == 2


def test_detect_window_validation():
    with pytest.raises(ValueError):
        detect([1, 2], [_ass_of(2), _ass_of(2)], 5)


def test_scan_ass_identity_example():
    rep = scan_ass(QuotientPowers(R, I2), horizon=20, window=5)
    assert rep.status == "stable" and rep.n0 == 1
    assert all(v == _ass_of(2) for _, v in rep.observations)


def test_scan_ass_tor1_example():
    rep = scan_ass(QuotientPowers(R, I2), tor_functor(cyc(4), 1),
                   horizon=20, window=5)
    assert rep.status == "stable" and rep.n0 == 1
    assert all(v == _ass_of(2) for _, v in rep.observations)


def test_scan_ass_oscillating():
    osc = OscillatingFunctor(ZZ, {2: ExponentSet(progressions=[(2, 2)])})
    rep = scan_ass(QuotientPowers(R, I2), osc, horizon=40, window=10)
    assert rep.status == "oscillating-with-period-2"


def test_scan_depth_examples():
    m = R.direct_sum(cyc(8))
    rep = scan_depth(Ideal(ZZ, 2), QuotientPowers(m, I2), horizon=20, window=5)
    assert rep.status == "stable"
    assert all(v == 0 for _, v in rep.observations)
    rep = scan_depth(Ideal(ZZ, 3), QuotientPowers(m, I2), horizon=20, window=5)
    assert all(v == DEPTH_INF for _, v in rep.observations)
    rep = scan_depth(Ideal(ZZ, 1), QuotientPowers(m, I2), horizon=20, window=5)
    assert all(v == DEPTH_INF for _, v in rep.observations)


def test_scan_depth_free_module_value_one():
    # identity functor on M/I^n M for M with free part: depth (3) on
    # Z/2^n (+) ... exercises the regular-element branch
    rep = scan_depth(Ideal(ZZ, 3), QuotientPowers(R.direct_sum(R), Ideal(ZZ, 6)),
                     horizon=14, window=5)
    assert rep.status == "stable"
    assert all(v == 0 for _, v in rep.observations)  # 3 divides 6^n


def test_scan_rows_carries_everything():
    res = scan_rows(QuotientPowers(R.direct_sum(cyc(8)), I2), None, Ideal(ZZ, 2),
                    horizon=15, window=5)
    assert len(res.rows) == 15
    assert res.rows[0].n == 1
    assert res.ann_checks == 15
    assert res.depth_report is not None


def test_scan_horizon_window_validation():
    with pytest.raises(ValueError):
        scan_rows(QuotientPowers(R, I2), None, None, horizon=5, window=10)


class _BrokenFunctor:
    def __call__(self, n):
        return FpModule.free(n.domain, 1)  # ann drops to (0): violates the law

    def map(self, g):
        raise NotImplementedError


def test_ann_monotonicity_violation_detected():
    with pytest.raises(AnnihilatorViolation):
        scan_rows(QuotientPowers(R, I2), _BrokenFunctor(), None,
                  horizon=12, window=5)


def test_scan_tor1_value_sequence():
    res = scan_rows(QuotientPowers(R, I2), tor_functor(cyc(4), 1), None,
                    horizon=10, window=4)
    factors = [list(r.value.factors) for r in res.rows]
    assert factors[0] == [2]
    assert all(f == [4] for f in factors[1:])


def test_graded_layers_coherent_matches_independent_path():
    m = R.direct_sum(cyc(8))
    sub = Mat(ZZ, [[2], [0]])
    ideal = I2
    fam = GradedLayers(m, sub, ideal)
    functor = CoherentFunctor(Morphism(R, R, Mat(ZZ, [[2]])))
    for n in range(1, 21):
        via_family = functor(fam.generate(n))
        # independent path: abstract submodule I^n M first, then its quotient
        g_n = ideal.power_gen(n)
        s, incl = m.submodule(Mat.identity(ZZ, m.ambient).scale(g_n))
        carrier = Morphism(FpModule.free(ZZ, sub.cols), m, sub.scale(g_n))
        inside = carrier.factor_through(incl)
        quotient, _ = inside.cokernel()
        direct = functor(quotient)
        assert via_family.is_isomorphic_to(direct)


def test_kw_homology_validates_submodule_compatibility():
    zero = FpModule.zero(ZZ)
    alpha = Morphism(R, R, Mat(ZZ, [[1]]))
    beta = Morphism(R, zero, Mat.zero(ZZ, 0, 1))
    # alpha(L') = Z is not inside M' = 4Z
    with pytest.raises(ValueError):
        KwHomology(alpha, beta, Mat(ZZ, [[1]]), Mat(ZZ, [[4]]),
                   Mat.zero(ZZ, 0, 0), I2)


def test_artin_rees_examples():
    beta4 = Morphism(R, R, Mat(ZZ, [[4]]))
    assert artin_rees_probe(beta4, Mat(ZZ, [[1]]), I2, horizon=10) == 2
    ident = Morphism.identity(R)
    assert artin_rees_probe(ident, Mat(ZZ, [[1]]), I2, horizon=10) == 0
    zero = Morphism.zero_map(R, R)
    assert artin_rees_probe(zero, Mat(ZZ, [[1]]), I2, horizon=10) == 0


def test_artin_rees_d_minimality():
    # beta = *8, I = (2): 8Z meet 2^n Z = 2^max(3,n) Z, so d = 3.
    beta8 = Morphism(R, R, Mat(ZZ, [[8]]))
    assert artin_rees_probe(beta8, Mat(ZZ, [[1]]), I2, horizon=10) == 3


def test_artin_rees_inside_torsion_module():
    m = cyc(16)
    beta = Morphism(m, m, Mat(ZZ, [[4]]))
    d = artin_rees_probe(beta, Mat(ZZ, [[1]]), I2, horizon=10)
    assert d is not None and d <= 10


def test_artin_rees_poly():
    rp = FpModule.free(F2, 1)
    x = (0, 1)
    beta = Morphism(rp, rp, Mat(F2, [[F2.mul(x, x)]]))
    assert artin_rees_probe(beta, Mat(F2, [[F2.one]]), Ideal(F2, x), horizon=10) == 2


def test_threads_env_deterministic(monkeypatch):
    fam = QuotientPowers(R.direct_sum(cyc(8)), I2)
    base = scan_rows(fam, None, Ideal(ZZ, 2), horizon=12, window=5)
    monkeypatch.setenv("STAB_THREADS", "4")
    threaded = scan_rows(fam, None, Ideal(ZZ, 2), horizon=12, window=5)
    assert [r.n for r in threaded.rows] == [r.n for r in base.rows]
    assert [r.ass_set for r in threaded.rows] == [r.ass_set for r in base.rows]
    assert threaded.ass_report == base.ass_report
