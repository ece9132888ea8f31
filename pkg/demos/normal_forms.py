"""
Recovering a normal form from a scrambled tensor
================================================

Concise m x m x m tensors of geometric rank two fall into two families.
Here one of them is hidden behind a random change of basis, and the
classifier finds matrices that undo it.
"""

import random

from geomrank import catalog_make, change_basis, classify_gr2_tensor, random_basis_change

target = catalog_make("utriv", 4)
rng = random.Random(5)
scrambled = change_basis(target, random_basis_change(target.dims, rng=rng))
print(len(target), "entries before,", len(scrambled), "after scrambling")

cls = classify_gr2_tensor(scrambled)
print(cls.variant.value, "with bounded-rank slices along axis", cls.axis.name)

# The witness is a factor permutation followed by one invertible matrix per
# factor.  Applying it must give back the normal form exactly.
print(cls.apply(scrambled) == target)
for name, g in zip("ABC", cls.witness):
    print(name, [[str(x) for x in row] for row in g.rows])

# Skew-symmetric 3x3x3 is the other family
skew = catalog_make("skew3")
print(classify_gr2_tensor(change_basis(skew, random_basis_change(skew.dims, rng=rng))).variant.value)
