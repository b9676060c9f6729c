"""Smallest isometric fillings of short cycles.

Runs the exhaustive search for n = 3..7 and sets each minimum against the
vertex lower bound. Also shows how relaxing the Lipschitz constant lets
smaller fillings through.
"""

from fillings.bounds import vertex_lower_bound
from fillings.search import compute_D

print(f"{'n':>3} {'D(n;0)':>7} {'bound':>6} {'proven':>7} {'nodes':>7}")
for n in range(3, 8):
    res = compute_D(n, 0)
    print(f"{n:>3} {res.d_value:>7} {vertex_lower_bound(n, 1).ceiling:>6} {str(res.proof_of_minimality):>7} {res.nodes_explored:>7}")

print()
print("n = 7 with a relaxed constant 1 - eps:")
for eps in ("1/2", "1/3", "1/4", "0"):
    res = compute_D(7, eps)
    print(f"  eps = {eps:>3}: D = {res.d_value}")

w = compute_D(6, 0).witness
print()
print(f"a minimum isometric filling of C_6 ({w.num_vertices} vertices):")
for t in w.triangles:
    print("  ", t)
