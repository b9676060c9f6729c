"""Acceptance checks, one test per criterion.

Each test records a one-line verdict that is printed in the pytest summary
(and immediately, when run with ``-s`` or as a script).
"""

import json
import math
import time
from fractions import Fraction

import pytest

import conftest
from corpus import audit_cut, cut_pairs, enumerated_corpus, random_corpus
from fillings import bounds
from fillings.cli import main
from fillings.complex import boundary_cycle, dump, validate
from fillings.metrics import is_delta_filling
from fillings.plmesh import presets
from fillings.plmesh.pipeline import balanced_triangulation, k_for_epsilon, mesh_filling_report
from fillings.search import compute_D, discretized_hemisphere, wheel


def _record(num: int, ok: bool, text: str) -> None:
    conftest.ACCEPTANCE[num] = (ok, text)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, text


def test_criterion_1_formulas():
    n = 10**4
    ratio = bounds.vertex_lower_bound(n, 1).value / n**2
    area = bounds.continuous_area_bound(1, 2 * math.pi)
    target = math.sqrt(3) / 4 * math.pi**2
    ok = abs(ratio - Fraction(1, 8)) < Fraction(1, 1000) and abs(area - target) < 1e-9
    _record(1, ok, f"V/n^2 = {float(ratio):.6f} at n = 1e4; area bound = {area:.10f} vs {target:.10f}")


def test_criterion_2_path_sum():
    t0 = time.monotonic()
    bad = [v for n in range(3, 13) for v in bounds.path_sum_violations(n, 4)]
    dt = time.monotonic() - t0
    _record(2, not bad and dt < 10, f"{len(bad)} violations for n <= 12, k <= 4 in {dt:.1f}s")


def test_criterion_3_small_D():
    t0 = time.monotonic()
    expect = {3: 3, 4: 5, 5: 6}
    lines, ok = [], True
    for n in (3, 4, 5, 6):
        res = compute_D(n, 0, budget_nodes=10**7)
        floor = bounds.vertex_lower_bound(n, 1).ceiling
        good = res.d_value is not None and res.d_value >= floor
        if n in expect:
            good = good and res.d_value == expect[n] and res.proof_of_minimality
        W = res.witness
        good = good and validate(W).ok and boundary_cycle(W) == list(range(n)) and is_delta_filling(W, 1)
        ok = ok and good
        lines.append(f"D({n};0)={res.d_value} (floor {floor}, proven={res.proof_of_minimality}, nodes={res.nodes_explored})")
    dt = time.monotonic() - t0
    _record(3, ok and dt < 600, "; ".join(lines) + f"; {dt:.1f}s")


@pytest.fixture(scope="module")
def corpus_problems():
    t0 = time.monotonic()
    problems, instances = [], 0
    corpus = list(enumerated_corpus()) + list(random_corpus())
    for K in corpus:
        for x, y in cut_pairs(K.boundary_n):
            instances += 1
            problems += audit_cut(K, x, y)
    return corpus, instances, problems, time.monotonic() - t0


def test_criterion_4_menger(corpus_problems):
    corpus, instances, problems, dt = corpus_problems
    menger = [p for p in problems if "sperner" not in p and "walk" not in p and "interior" not in p]
    _record(
        4,
        not menger and dt < 300,
        f"{len(menger)} violations over {len(corpus)} complexes / {instances} cuts "
        f"({len(enumerated_corpus())} enumerated n <= 7, {len(random_corpus())} random |V| <= 12) in {dt:.0f}s",
    )


def test_criterion_5_sperner(corpus_problems):
    corpus, instances, problems, _ = corpus_problems
    walk = [p for p in problems if "sperner" in p or "walk" in p or "interior" in p or "d_K" in p]
    _record(5, not walk, f"{len(walk)} walk or degree violations over {instances} cuts")


def test_criterion_6_square_mesh():
    M = presets.unit_square()
    rows, ok, first = [], True, None
    for k in (10, 30, 70):
        t0 = time.monotonic()
        mesh = balanced_triangulation(M, k)
        dt = time.monotonic() - t0
        st = mesh.stats
        eps = st["epsilon"]
        area_ok = abs(st["total_area"] - M.area) <= 1e-6 * M.area
        equi_ok = all(mesh.triangle_sides(t) == (eps, eps, eps) for t in mesh.equilateral)
        scaled = st["non_equilateral_count"] * eps
        first = scaled if first is None else first
        bnd_ok = all(abs(mesh.lengths[e] - eps) <= st["deviation_bound"] + 1e-12 for e in mesh.complex.boundary_edges)
        ok = ok and area_ok and equi_ok and scaled <= 4 * first and bnd_ok and dt < 60
        rows.append(f"k={k}: eps={eps:.5f}, non-equilateral*eps={scaled:.2f}, {dt:.1f}s")
    _record(6, ok, "; ".join(rows))


def test_criterion_7_bracketing():
    t0 = time.monotonic()
    K, lip = discretized_hemisphere(48)
    n = K.boundary_n
    ratio = bounds.dstar_ratio(K.num_vertices, n)
    hemi_ok = lip.delta >= Fraction(4, 5) and 0.125 <= ratio <= 0.30
    M = presets.flat_disk(16)
    report, _, disk_lip = mesh_filling_report(M, k_for_epsilon(M, 1 / 36))
    disk_ok = abs(float(disk_lip.delta) - 2 / math.pi) <= 0.1
    dt = time.monotonic() - t0
    _record(
        7,
        hemi_ok and disk_ok,
        f"hemisphere over a 48-gon: mesh cycle n={n}, |V|={K.num_vertices}, delta={float(lip.delta):.3f}, "
        f"|V|/n^2={ratio:.4f}; flat disk delta={float(disk_lip.delta):.3f} (2/pi={2 / math.pi:.3f}); {dt:.0f}s",
    )


def test_criterion_8_determinism(tmp_path, capsys):
    dump(wheel(7), tmp_path / "w7.json")
    (tmp_path / "tri.json").write_text(presets.equilateral_triangle().dumps())
    commands = [
        ["verify", "-i", tmp_path / "w7.json", "--delta", "1/2"],
        ["bounds", "--n", 12, "--delta", "3/4", "--chi", 1],
        ["search", "--n", 6],
        ["search", "--n", 6, "--threads", 2],
        ["certificates", "-i", tmp_path / "w7.json", "--x", 0, "--y", 3],
        ["mesh", "-i", tmp_path / "tri.json", "--k", 30],
        ["mesh", "--preset", "disk", "--n", 12],
    ]
    differing = []
    outputs = {}
    for argv in commands:
        runs = []
        for rep in range(2):
            out_dir = tmp_path / f"{argv[0]}-{len(outputs)}-{rep}"
            code = main([str(a) for a in argv] + ["-o", str(out_dir)])
            stdout = capsys.readouterr().out
            files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())} if out_dir.exists() else {}
            runs.append((code, stdout, files))
        outputs[len(outputs)] = runs[0]
        if runs[0] != runs[1]:
            differing.append(" ".join(map(str, argv)))
    # threaded search must match the single-threaded one byte for byte
    if outputs[2] != outputs[3]:
        differing.append("search --threads 2 vs 1")
    _record(8, not differing, f"{len(commands)} commands run twice; differing: {differing or 'none'}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
