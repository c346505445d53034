"""
Finitely presented modules and their constructions
==================================================

A module is R^k modulo the column span of a relation matrix.  The invariant
factor decomposition is computed once, by Smith reduction, and drives
isomorphism testing, tensor products, Hom modules, and kernels/cokernels.
"""

from stab import ZZ, Mat, FpModule, Morphism, Ideal
from stab.modules import hom, hom_induced, loc_tensor, LocModule

# coker of a relation matrix: Z^2 / <(2,6), (4,8)> = Z/2 (+) Z/4.
M = FpModule.from_relations(ZZ, [[2, 4], [6, 8]])
print("decomposition:", M.decompose())

R = FpModule.free(ZZ, 1)
Z4, Z6 = FpModule.cyclic(ZZ, 4), FpModule.cyclic(ZZ, 6)

# Tensor products follow the gcd rule on cyclic pieces.
print("Z/4 (x) Z/6:", Z4.tensor(Z6).decompose())         # Z/2
print("R (x) M iso to M:", R.tensor(M).is_isomorphic_to(M))

# Hom(Z/6, Z/4) = Z/2, realized by an actual morphism (multiplication by 2).
H = hom(Z6, Z4)
print("Hom(Z/6, Z/4):", H.module.decompose())
gen = H.generators()[0]
print("its generator sends 1 to", gen.mat.data[0][0], "in Z/4")

# Precomposition: Hom(R, Z/4) --(.2)--> Hom(R, Z/4) is multiplication by 2.
doubling = Morphism(R, R, Mat(ZZ, [[2]]))
print("induced map is *2:",
      hom_induced(doubling, Z4).equals(Morphism.mult_by(2, hom(R, Z4).module)))

# Kernels, cokernels, images of a morphism of presentations.
f = Morphism.mult_by(2, Z4)
kernel, include = f.kernel()
image, _ = f.image()
print("ker(2 on Z/4):", kernel.decompose(), " im:", image.decompose())

# Ideal-power subquotients: (4Z + I^3 Z) / I^3 (2Z) for I = (2) is Z/4.
I = Ideal(ZZ, 2)
sq = R.subquotient(Mat(ZZ, [[4]]), Mat(ZZ, [[1]]), Mat(ZZ, [[2]]), I, 3)
print("(4Z + 8Z)/16Z:", sq.decompose())

# M/I^n M and the layers I^(n-1) M / I^n M.
big = R.direct_sum(FpModule.cyclic(ZZ, 8))
print("M/I^5 M for M = Z (+) Z/8:", big.power_quotient(I, 5).decompose())
print("layer at n=3 for M = Z:", R.power_layer(I, 3).decompose())

# Inverting an element kills the matching primary part of a torsion module.
print("R[1/2] (x) Z/12:", loc_tensor(LocModule(R, 2), FpModule.cyclic(ZZ, 12)).decompose())
