"""Menger paths, a minimum separator and the Sperner walk it hides.

For an isometric filling of C_8 found by the search, cut the boundary at
an antipodal pair and print the three certificates of the lower-bound
argument: disjoint L-R paths, a separator of the same size, and an x-y
walk through the separator.
"""

from fillings.bounds import menger_path_floor, path_sum_bound
from fillings.metrics import cycle_distance, lipschitz_constant, skeleton_distances
from fillings.search import compute_D
from fillings.separators import make_cut_instance, max_disjoint_paths, sperner_walk

res = compute_D(8, 0)
K = res.witness
n = K.boundary_n
print(f"isometric filling of C_{n} with {K.num_vertices} vertices, delta = {lipschitz_constant(K).delta}")

x, y = 0, n // 2
inst = make_cut_instance(K, x, y)
cert = max_disjoint_paths(inst)
print(f"cut at x={x}, y={y}: L={inst.L}, R={inst.R}")
for p in cert.paths:
    print(f"  path {p}  (endpoints {cycle_distance(n, p[0], p[-1])} apart on the cycle)")
print(f"  separator {cert.separator}")

k = len(cert.paths)
spread = sum(cycle_distance(n, p[0], p[-1]) for p in cert.paths)
print(f"path-sum: {spread} >= {path_sum_bound(k)}")
print(f"paths guaranteed: delta*floor(n/2) - 1 = {menger_path_floor(n, 1)}")

walk = sperner_walk(K, x, y, cert.separator)
print(f"walk {walk.walk}; d_K(x, y) = {int(skeleton_distances(K, [x])[0, y])}")
