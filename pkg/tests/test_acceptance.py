"""Acceptance criteria.  Each test prints one ``[ACCEPT] Cn PASS|FAIL`` line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also echoed through ``capsys.disabled()`` so ``-s`` is optional.
"""

import json
import time

import numpy as np
import pytest

from qchi2 import fop
from qchi2.cli import main as cli_main
from qchi2.divergence import chi2, chi2_alpha_closed, classical_chi2
from qchi2.fop import WeightFunction, from_weight
from qchi2.harness import (
    DEFAULT_SCAN_FLOOR,
    contraction_scan,
    convexity_scan,
    family_scan,
    quadratic_inverse_convexity_scan,
    quadratic_inverse_margin,
    random_density,
    trial_rng,
)
from qchi2.linalg import apply_mc_superop, superop_apply_dense

BUILTINS = fop.builtin_functions()
LAMBDA_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[ACCEPT] {tag} {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def _random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def test_c1_convexity(report):
    start = time.perf_counter()
    worst, worst_id, failures = np.inf, None, []
    for func in BUILTINS:
        for n in (2, 3, 4):
            rep = convexity_scan(func, n, 200, LAMBDA_GRID, seed=1000 + n, tol=1e-9)
            if rep.min_margin < worst:
                worst, worst_id = rep.min_margin, (func.spec, n)
            if not rep.passed:
                failures.append((func.spec, n, rep.min_margin, rep.errors))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120.0
    report("C1 convexity", ok, f"min relative margin {worst:.3e} at {worst_id}; "
                               f"{len(BUILTINS) * 3} scans in {elapsed:.1f}s; failures={failures}")
    assert not failures
    assert elapsed < 120.0


def test_c2_closed_form(report):
    worst = 0.0
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        f = fop.ruskai_family(alpha)
        for n in (2, 3, 4, 5):
            for i in range(50):
                r = trial_rng(2000 + n, i)
                rho, sigma = random_density(n, r), random_density(n, r, DEFAULT_SCAN_FLOOR)
                a = chi2(f, rho, sigma).value
                b = chi2_alpha_closed(alpha, rho, sigma).value
                worst = max(worst, abs(a - b) / abs(b))
    ok = worst <= 1e-10
    report("C2 closed-form", ok, f"max |eig - closed| / |closed| = {worst:.3e} (tol 1e-10 relative)")
    assert ok


def test_c3_commuting_reduction(report):
    worst = 0.0
    for func in BUILTINS:
        for i in range(100):
            r = trial_rng(3000, i)
            n = int(r.integers(2, 6))
            p = r.dirichlet(np.ones(n))
            q = (1.0 - DEFAULT_SCAN_FLOOR * n) * r.dirichlet(np.ones(n)) + DEFAULT_SCAN_FLOOR
            worst = max(worst, abs(chi2(func, np.diag(p), np.diag(q)).value - classical_chi2(p, q)))
    example = max(abs(chi2(f, np.diag([0.5, 0.5]), np.diag([0.25, 0.75])).value - 1 / 3)
                  for f in BUILTINS)
    ok = worst <= 1e-12 and example <= 1e-12
    report("C3 commuting", ok, f"max |quantum - classical| = {worst:.3e}; "
                               f"(1/2,1/2) vs (1/4,3/4) off by {example:.3e} (tol 1e-12)")
    assert ok


def test_c4_oracle_equivalence(report):
    """Entrywise absolute 1e-12 between the eigenbasis path and the dense oracle.

    States come from the default scan generator (eigenvalue floor 1e-3).
    Outputs then reach ~1e3 in magnitude and both routes carry rounding of
    order eps * |output| / lambda_min against exact arithmetic, so the
    absolute bound is not reachable in double precision; the relative
    discrepancy is printed alongside.
    """
    worst_abs, worst_rel = 0.0, 0.0
    for func in BUILTINS:
        for n in (2, 3):
            for i in range(100):
                r = trial_rng(4000 + n, i)
                sigma = random_density(n, r, DEFAULT_SCAN_FLOOR)
                a = _random_hermitian(n, r)
                e = apply_mc_superop(func, sigma, a)
                d = superop_apply_dense(func, sigma, a)
                err = float(np.max(np.abs(e - d)))
                worst_abs = max(worst_abs, err)
                worst_rel = max(worst_rel, err / float(np.max(np.abs(e))))
    ok = worst_abs <= 1e-12
    report("C4 oracle", ok, f"max entrywise |eig - dense| = {worst_abs:.3e} (tol 1e-12 absolute); "
                            f"relative to max|output|: {worst_rel:.3e}")
    assert ok


def test_c5_canonical_representation(report):
    t = fop.log_grid(1e-3, 1e3, 200)
    worst = 0.0
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        diff = np.abs(from_weight(WeightFunction.const(alpha))(t) - fop.wyd_family(alpha)(t))
        worst = max(worst, float(diff.max()))
    half = float(np.max(np.abs(from_weight(WeightFunction.const(0.5))(t)
                               - fop.ruskai_family(0.5)(t))))
    ok = worst <= 1e-8 and half <= 1e-8
    report("C5 representation", ok, f"max |from_weight - wyd| = {worst:.3e}; "
                                    f"vs ruskai(1/2) {half:.3e} (tol 1e-8)")
    assert ok


def test_c6_contraction(report):
    worst, unitary, failures = np.inf, 0.0, []
    for func in BUILTINS:
        for n in (2, 3):
            rep = contraction_scan(func, n, 100, seed=6000 + n, env_dims=(1, 2, 4), delta=1e-3,
                                   tol=1e-9)
            worst = min(worst, rep.min_margin)
            unitary = max(unitary, rep.details["unitary_max_deviation"])
            if not rep.passed:
                failures.append((func.spec, n, rep.min_margin, rep.errors))
    ok = not failures and unitary <= 1e-10
    report("C6 contraction", ok, f"min (before - after)/before = {worst:.3e} (tol -1e-9); "
                                 f"unitary max |margin|/max(1, chi2) = {unitary:.3e} (tol 1e-10); "
                                 f"failures={failures}")
    assert ok


def test_c7_fop_structure(report):
    t = fop.log_grid(1e-4, 1e4, 200)
    sym, bounds, loewner = 0.0, np.inf, np.inf
    for func in BUILTINS:
        sym = max(sym, -fop.symmetry_check(func, t).min_margin)
        bounds = min(bounds, fop.bounds_check(func, t).min_margin)
        for i in range(50):
            r = trial_rng(7000, i)
            nodes = np.exp(r.uniform(np.log(1e-2), np.log(1e2), int(r.integers(2, 7))))
            loewner = min(loewner, fop.loewner_check(func, nodes).min_margin)
    control = fop.loewner_check(fop.custom(lambda x: np.asarray(x) ** 2, "t^2"), [1.0, 2.0, 8.0])
    ok = sym <= 1e-10 and bounds >= -1e-10 and loewner >= -1e-8 and not control.passed
    report("C7 F_op structure", ok,
           f"max symmetry defect {sym:.3e} (tol 1e-10); min bound margin {bounds:.3e} "
           f"(tol -1e-10); min Loewner eigenvalue {loewner:.3e} (tol -1e-8); "
           f"t^2 control min eigenvalue {control.min_margin:.3f} -> "
           f"{'rejected' if not control.passed else 'ACCEPTED'}")
    assert ok


def test_c8_quadratic_inverse(report):
    worst = np.inf
    for n in range(1, 9):
        rep = quadratic_inverse_convexity_scan(n, 500, LAMBDA_GRID, seed=8000 + n, tol=1e-10)
        worst = min(worst, rep.min_margin)
    scalar, _ = quadratic_inverse_margin(1.0, 4.0, 1.0, 1.0, 0.5)
    ok = worst >= -1e-10 and abs(scalar - 0.225) <= 1e-12
    report("C8 quadratic-inverse", ok, f"min relative margin {worst:.3e} (tol -1e-10); "
                                       f"scalar case {scalar!r} (expected 0.225)")
    assert ok


def test_c9_determinism(report, capsys):
    f = fop.wyd_family(0.25)
    pairs = [
        lambda: convexity_scan(f, 3, 20, LAMBDA_GRID, seed=9).to_json(verbose=True),
        lambda: convexity_scan(f, 3, 20, LAMBDA_GRID, seed=9, workers=4).to_json(verbose=True),
        lambda: contraction_scan(f, 2, 20, seed=9).to_json(verbose=True),
        lambda: quadratic_inverse_convexity_scan(4, 50, LAMBDA_GRID, seed=9).to_json(verbose=True),
        lambda: json.dumps(family_scan("ruskai", [0.0, 0.5, 1.0], 2, 5, seed=9).to_dict(True),
                           sort_keys=True),
    ]
    outputs = [(g(), g()) for g in pairs]
    same = all(a == b for a, b in outputs)
    serial_parallel = outputs[0][0] == outputs[1][0]

    argv = ["scan", "convexity", "--f", "ruskai:0.75", "--n", "3", "--trials", "15", "--seed",
            "11", "--verbose"]
    cli_main(argv)
    first = capsys.readouterr().out
    cli_main(argv)
    second = capsys.readouterr().out
    ok = same and serial_parallel and first == second
    report("C9 determinism", ok, f"library re-runs identical={same}; serial==parallel="
                                 f"{serial_parallel}; CLI bytes identical={first == second}")
    assert ok
