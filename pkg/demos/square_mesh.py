"""Balanced triangulations of the unit square.

As k grows the mesh step shrinks; the count of non-equilateral triangles
grows like 1/eps, so their number times eps stays flat while the total
triangle count grows like 1/eps^2.
"""

from fillings.plmesh.pipeline import balanced_triangulation
from fillings.plmesh.presets import unit_square

M = unit_square()
print(f"{'k':>4} {'eps':>9} {'|V|':>7} {'|T|':>7} {'equi':>7} {'other*eps':>10} {'max edge/eps':>13} {'area err':>9}")
for k in (10, 20, 30, 50, 70):
    st = balanced_triangulation(M, k).stats
    eps = st["epsilon"]
    print(
        f"{k:>4} {eps:>9.5f} {st['num_vertices']:>7} {st['num_triangles']:>7} {st['equilateral_count']:>7} "
        f"{st['non_equilateral_count'] * eps:>10.2f} {st['max_edge'] / eps:>13.4f} {abs(st['total_area'] - 1):>9.1e}"
    )
