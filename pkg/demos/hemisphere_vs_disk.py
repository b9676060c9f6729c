"""Hemisphere against flat disk.

Both surfaces fill the same boundary circle. The hemisphere keeps
antipodal boundary points far apart (delta near 1); the flat disk lets
them meet through the centre (delta near 2/pi). Pass a polygon size on
the command line for a bigger hemisphere (48 takes about a minute and a
half).
"""

import math
import sys

from fillings.bounds import DSTAR_LOWER, DSTAR_UPPER
from fillings.plmesh.pipeline import k_for_epsilon, mesh_filling_report
from fillings.plmesh.presets import flat_disk, hemisphere

n = int(sys.argv[1]) if len(sys.argv) > 1 else 16
rings = max(2, round(n / 16))

for name, M, target in [
    ("hemisphere", hemisphere(n, rings), min(2 * math.sin(math.pi / n) / 16, 1 / 40)),
    ("flat disk", flat_disk(n), 1 / 36),
]:
    report, mesh, _ = mesh_filling_report(M, k_for_epsilon(M, target))
    print(f"{name}: k={report['k']}, eps={report['epsilon']:.4f}, cycle n={report['n']}, |V|={report['num_vertices']}")
    print(f"  delta = {report['delta_float']:.3f}, |V|/n^2 = {report['vertices_over_n2']:.4f}")
    print(f"  area {report['area']:.4f} vs bound {report['area_bound']:.4f} (ratio {report['area_ratio']:.2f})")

print(f"reference constants: 1/8 = {float(DSTAR_LOWER):.4f}, 1/(pi sqrt 3) = {DSTAR_UPPER:.4f}, 2/pi = {2 / math.pi:.4f}")
