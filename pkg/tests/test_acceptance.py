"""Acceptance gate. Each test records a PASS/FAIL line shown in the pytest summary."""

import json
import math
import time

import numpy as np
import pytest

from conftest import random_poly
from qspexact.cli import main
from qspexact.completion import (
    complete,
    complete_fixed,
    defect,
    eval_Q_boundary,
    eval_Q_exterior,
    eval_Q_interior,
    validate_target,
)
from qspexact.invpoly import InversionSpec, build, error_bound
from qspexact.oracle import align_phase, complementary_by_roots
from qspexact.polycore import ComplexPoly, grid_values, sup_norm_circle
from qspexact.serialize import poly_from_json, poly_to_json, write_json

S3 = math.sqrt(3)
# Inner spectral factor for [0.25, 0.25]; the construction returns the
# reflected (outer) factor, z * conj(q(1/conj z)) up to a unit phase.
Q_INNER = np.array([(2 - S3) / 4, -(2 + S3) / 4])
ROUNDOFF_FLOOR = 1e-14


def test_ac1_degree_one_completion(acceptance_report):
    target = validate_target(ComplexPoly([0.25, 0.25]))
    complete(target)
    t0 = time.perf_counter()
    q = complete(target).q
    elapsed = time.perf_counter() - t0
    reflected = ComplexPoly(np.conj(Q_INNER[::-1]))
    _, err = align_phase(q, reflected)
    ok = err <= 1e-12 and elapsed < 0.1
    acceptance_report("AC1 degree-1 completion", ok, f"max coeff err {err:.2e}, {elapsed * 1e3:.1f} ms")
    assert err <= 1e-12
    assert elapsed < 0.1


def test_ac2_defect_at_scale(acceptance_report):
    rng = np.random.default_rng(20250519)
    worst = 0.0
    t0 = time.perf_counter()
    for d in (1, 2, 4, 8, 16, 32, 64):
        for _ in range(50):
            target = validate_target(random_poly(rng, d))
            q = complete(target).q
            worst = max(worst, defect(target.poly, q, max(4096, 64 * (d + 1))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 60
    acceptance_report("AC2 defect at scale", ok, f"worst defect {worst:.2e} over 350 targets, {elapsed:.1f} s")
    assert worst <= 1e-10
    assert elapsed < 60


def test_ac3_convergence_scaling(acceptance_report):
    target = validate_target(random_poly(np.random.default_rng(20250519), 32))
    defects = [complete_fixed(target, n).defect for n in (256, 512, 1024, 2048)]
    # once at double-precision roundoff the sequence may wobble by an ulp or two
    monotone = all(b <= max(a, ROUNDOFF_FLOOR) for a, b in zip(defects, defects[1:]))
    n_used = complete(target).n_used
    ok = monotone and n_used <= 4096
    detail = ", ".join(f"{d:.1e}" for d in defects) + f"; accepted N={n_used}"
    acceptance_report("AC3 convergence scaling", ok, detail)
    assert monotone
    assert n_used <= 4096


def test_ac4_uniqueness(acceptance_report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for k in range(20):
        target = validate_target(random_poly(rng, 1 + k % 8))
        _, diff = align_phase(complete(target).q, complementary_by_roots(target))
        worst = max(worst, diff)
    acceptance_report("AC4 uniqueness vs root oracle", worst <= 1e-8, f"worst max_diff {worst:.2e}")
    assert worst <= 1e-8


def test_ac5_circle_root(acceptance_report):
    result = complete(validate_target(ComplexPoly([0.5, 0.5])))
    roots = result.rootset.roots
    root_ok = len(roots) == 1 and abs(roots[0][0] - 1) < 1e-8 and roots[0][1] == 1
    z = np.exp(2j * np.pi * np.arange(4096) / 4096)
    err = float(np.max(np.abs(np.abs(grid_values(result.q, 4096)) - np.abs(z - 1) / 2)))
    ok = root_ok and err <= 1e-10
    acceptance_report("AC5 circle-root case", ok, f"roots {roots}, modulus err {err:.2e}")
    assert root_ok
    assert err <= 1e-10


def test_ac6_representations(acceptance_report):
    target = validate_target(ComplexPoly([0.25, 0.25]))
    result = complete(target)
    q, rs = result.q, result.rootset
    thetas = np.random.default_rng(6).uniform(0, 2 * np.pi, 8)
    errs = [abs(eval_Q_interior(target, rs, 0.5j, 2048) - q(0.5j))]
    errs += [abs(eval_Q_boundary(target, rs, t, 2048) - q(np.exp(1j * t))) for t in thetas]
    errs.append(abs(eval_Q_exterior(target, rs, 2.0, 2048) - q(2.0)))
    worst = max(errs)
    acceptance_report("AC6 representation consistency", worst <= 1e-7, f"worst abs err {worst:.2e}")
    assert worst <= 1e-7


def test_ac7_inversion_n1(acceptance_report):
    ip = build(InversionSpec(0.5, 1), grid_per_interval=50_000)  # 1e5 points over both intervals
    coeff_err = float(np.max(np.abs(ip.cheb.cheb_coeffs - [0.0, 2.0])))
    bound = error_bound(ip.spec)
    ok = coeff_err <= 1e-14 and abs(ip.eps_measured - 1) <= 1e-6 and ip.eps_measured <= bound
    acceptance_report(
        "AC7 inversion n=1",
        ok,
        f"coeff err {coeff_err:.1e}, measured {ip.eps_measured:.9f}, bound {bound:.6f}, "
        f"bound/measured {ip.bound_ratio:.6f}",
    )
    assert coeff_err <= 1e-14
    assert ip.eps_measured == pytest.approx(1.0, abs=1e-6)
    assert ip.eps_measured <= 1.118034
    assert bound == pytest.approx(1.118034, abs=1e-6)


def test_ac8_inversion_sweep(acceptance_report):
    t0 = time.perf_counter()
    failures = []
    for a in (0.5, 0.1, 0.01):
        previous = math.inf
        for n in range(1, 31):
            ip = build(InversionSpec(a, n))
            even = float(np.max(np.abs(ip.cheb.cheb_coeffs[::2])))
            if even >= 1e-10:
                failures.append(f"a={a} n={n} even coeff {even:.1e}")
            if ip.eps_measured > ip.eps_bound * (1 + 1e-9):
                failures.append(f"a={a} n={n} measured above bound")
            if ip.alternation_count < 2 * n + 1:
                failures.append(f"a={a} n={n} alternations {ip.alternation_count}")
            if not ip.eps_measured < previous:
                failures.append(f"a={a} n={n} not decreasing")
            previous = ip.eps_measured
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    acceptance_report("AC8 inversion sweep", ok, f"{len(failures)} failures, {elapsed:.1f} s")
    assert not failures, failures[:5]
    assert elapsed < 120


def test_ac9_pipeline(tmp_path, acceptance_report):
    runs = [tmp_path / "run1", tmp_path / "run2"]
    codes = [main(["pipeline", "--a", "0.5", "--epsilon", "1.2", "--outdir", str(r)]) for r in runs]
    names = sorted(p.name for p in runs[0].iterdir())
    identical = names == sorted(p.name for p in runs[1].iterdir()) and all(
        (runs[0] / n).read_bytes() == (runs[1] / n).read_bytes() for n in names
    )
    p = poly_from_json(json.loads((runs[0] / "target.json").read_text()))
    q = poly_from_json(json.loads((runs[0] / "complement.json").read_text()))
    sup = sup_norm_circle(p, 1 << 14)
    dfc = defect(p, q, 1 << 14)
    ok = codes == [0, 0] and identical and sup < 1 and dfc <= 1e-10
    acceptance_report(
        "AC9 end-to-end pipeline", ok, f"exit {codes}, identical={identical}, sup {sup:.7f}, defect {dfc:.1e}"
    )
    assert codes == [0, 0]
    assert identical
    assert sup < 1
    assert dfc <= 1e-10


def test_ac10_cli_errors(tmp_path, capsys, acceptance_report):
    codes = [main(["invpoly", "--a", "1.5", "--n", "3", "--output", str(tmp_path / "x.json")])]
    write_json(tmp_path / "p01.json", poly_to_json(ComplexPoly([0, 1])))
    codes.append(main(["complement", "--input", str(tmp_path / "p01.json"), "--output", str(tmp_path / "q.json")]))
    names_error = "ZeroConstantTerm" in capsys.readouterr().err
    write_json(tmp_path / "half.json", poly_to_json(ComplexPoly([0.5])))
    codes.append(main(["verify", "--p", str(tmp_path / "half.json"), "--q", str(tmp_path / "half.json")]))
    ok = codes == [2, 2, 5] and names_error
    acceptance_report("AC10 CLI error handling", ok, f"exit codes {codes}")
    assert codes == [2, 2, 5]
    assert names_error
