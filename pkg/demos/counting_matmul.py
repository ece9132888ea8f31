"""
Geometric rank of 2x2 matrix multiplication by counting points
===============================================================

The tensor of 2x2 matrix multiplication lives in a 4x4x4 space. Its
geometric rank is read off from how many covector pairs kill it over
small prime fields.
"""

import numpy as np

from geomrank import catalog_make, geometric_rank, sigma_hat_count, stratum_counts

M2 = catalog_make("matmul", 2)
print(M2.dims, len(M2), "nonzero entries")

# Count pairs (x, y) with T(x, y, .) = 0 over a few fields.  The counts grow
# like p^dim, so the log-ratio gives the dimension of the variety.
primes = [3, 5, 7]
counts = [sigma_hat_count(M2, "AB", p) for p in primes]
for p, n in zip(primes, counts):
    print(f"p = {p}: {n} points, log_p = {np.log(n) / np.log(p):.3f}")

# The raw log-ratio converges slowly.  The library fits the dimension
# from several primes and cross-checks it against a rank stratification
# of each slice space.
for p in primes:
    print(p, stratum_counts(M2, "A", p).counts)

rep = geometric_rank(M2, primes)
print("GR =", rep.gr, "certified" if rep.certified else "uncertified")
print("per pairing:", rep.values)
print("largest stratum:", rep.max_stratum)
