"""Two small numerics: hull convergence to the simplex, and an iid bound.

Nested hulls of a growing uniform sample approach the whole simplex; the
Hausdorff distance to it is non-increasing (and never exceeds 2, the diameter
bound for any pair of simplex subsets).  Separately, beta(m, L) quantifies
how well L draws from an exchangeable m-sequence are approximated by iid
draws; it is tiny as soon as m >> L^2.
"""

from simplexmix import definetti_bound, hull_limit_experiment

print("Hausdorff distance from Conv(first n samples) to the full 2-simplex:")
for n, d in hull_limit_experiment(J=3, n_grid=(100, 316, 1000, 3162, 10000), seed=3):
    print(f"  n = {n:>6d}   d_H = {d:.4f}")

print("\nexchangeable-to-iid total variation bound beta(m, L):")
print("  m    L=2       L=5       L=10")
for m in (10, 20, 40, 60):
    row = [definetti_bound(m, L).beta for L in (2, 5, 10)]
    print(f"  {m:<3d}  {row[0]:.5f}   {row[1]:.5f}   {row[2]:.5f}")
print("each entry respects the elementary bound L(L-1)/(2m).")
