"""
Tensor rank lower bounds from geometric rank
============================================

Each bound below is a certified lower bound on tensor rank.  Comparing
them with known ranks shows which argument is sharp for which family.
"""

from geomrank import catalog_make, combined_bound_report

cases = [("strassen", 3), ("utriv", 5), ("cw_small", 4), ("cw_big", 4), ("gr3_1deg", 8), ("gr3_1deg", 9)]

for name, param in cases:
    rep = combined_bound_report(catalog_make(name, param))
    parts = ", ".join(f"{b.source.value}={b.value}" for b in rep.bounds if not b.conditional)
    print(f"{name}({param}): best {rep.best}, recorded rank {rep.known_rank}")
    print("   ", parts)
    for note in rep.notes:
        print("    note:", note)

# For odd sizes the recorded rank of gr3_1deg sits one below the
# compression bound, so the report flags it as inconsistent.
