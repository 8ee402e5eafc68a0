"""Acceptance gate: one criterion per test, one printed pass/fail line each.

Every tolerance below is the contract tolerance, not a tuned-down copy.
Shared sweeps come from the session cache so the whole gate stays fast.
"""

import dataclasses
import io
import json
import math

import numpy as np

from rapidnets import (
    DEFAULT_CONFIG,
    EpsilonGrid,
    RegularSetSpec,
    check_fourier,
    check_intersection,
    check_null,
    check_taylor,
    classify,
    fit_exponent,
    fit_profile,
    fourier_applicable,
    fourier_sweep,
    marginal_profile,
    mixed_profile,
    parseval_gap,
    roundtrip_error,
    verify_axioms,
)
from rapidnets.fourier import dft_quadrature
from rapidnets.regular_sets import affine_envelope
from rapidnets.cli import run

ALL2 = RegularSetSpec(kind="all", arity="double")
BOUNDED2 = RegularSetSpec(kind="bounded", arity="double")


def _line(capsys, num, name, ok, detail):
    tag = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\n[criterion {num:02d}] {name}: {tag}  ({detail})")
    assert ok, f"criterion {num:02d} {name}: {detail}"


def test_criterion_01_exact_power_law_recovery(capsys):
    eps = np.array(DEFAULT_CONFIG.eps_grid.values)
    worst = 0.0
    for p in (0.0, 0.5, 1.0, 2.0, 3.7):
        for c in (1e-3, 1.0, 1e3):
            fit = fit_exponent(c * eps ** -p, eps)
            worst = max(worst, abs(fit.exponent - p))
    _line(capsys, 1, "synthetic power-law exponents within 1e-9", worst <= 1e-9,
          f"max |error| = {worst:.3e}")


def test_criterion_02_delta_net_exponent_table(capsys, cache):
    expo = fit_profile(cache.mixed("DeltaNet(p=1)"), m_max=DEFAULT_CONFIG.m_max)
    worst = 0.0
    classes_ok = True
    for q in range(4):
        for l in range(4):
            fit = expo.fit(q, l)
            oracle = 1.0 + q - l
            worst = max(worst, abs(fit.exponent - oracle))
            classes_ok = classes_ok and fit.decay_class == "polynomial"
            if oracle < 0:
                classes_ok = classes_ok and fit.exponent < 0
    ok = worst <= 0.1 and classes_ok
    _line(capsys, 2, "DeltaNet(1) table matches 1+q-l within 0.1", ok,
          f"max |error| = {worst:.3e}, decaying cells classified = {classes_ok}")


def test_criterion_03_intersection_agreement(capsys, suite, cache):
    total = 0
    agreed = 0
    for net in suite:
        mixed = cache.mixed(net.label)
        for spec in (ALL2, BOUNDED2):
            r = check_intersection(net, spec, DEFAULT_CONFIG, mixed=mixed)
            total += 1
            agreed += bool(r.agree)
    _line(capsys, 3, "box-intersection agreement on suite x {All, Bounded}",
          agreed == total, f"{agreed}/{total} pairs agree")


def test_criterion_04_fourier_agreement_and_exponent_match(capsys, suite, cache):
    total = 0
    agreed = 0
    for net in suite:
        if not fourier_applicable(net):
            continue
        mixed = cache.mixed(net.label)
        fprof = cache.fourier(net.label)
        for spec in (ALL2, BOUNDED2):
            r = check_fourier(net, spec, DEFAULT_CONFIG, mixed=mixed, fourier=fprof)
            total += 1
            agreed += bool(r.agree)

    # exponent comparison in the settled regime below the oscillation scale
    osc = cache.net("Oscillatory")
    fine = EpsilonGrid(eps0=0.1, ratio=0.8, count=16)
    cfg = dataclasses.replace(DEFAULT_CONFIG, eps_grid=fine, max_q=3, max_l=0)
    expo_d = fit_profile(mixed_profile(osc, cfg), m_max=DEFAULT_CONFIG.m_max)
    expo_f = fit_profile(
        fourier_sweep(osc, fine, max_l=3, policy=DEFAULT_CONFIG.policy),
        m_max=DEFAULT_CONFIG.m_max,
    )
    drift = max(
        abs(expo_d.fit(q, 0).exponent - expo_f.fit(0, q).exponent)
        for q in range(4)
    )
    ok = agreed == total and drift <= 0.15
    _line(capsys, 4, "Fourier-side agreement and Oscillatory exponent match", ok,
          f"{agreed}/{total} pairs agree, max exponent drift = {drift:.3f}")


def test_criterion_05_null_characterizations(capsys, cache):
    scales = ("derivative", "weight", "fourier_weight")

    def reports(key):
        net = cache.net(key)
        out = []
        for scale in scales:
            if scale == "fourier_weight":
                prof = cache.fourier(key)
            else:
                prof = marginal_profile(cache.mixed(key), scale)
            out.append(check_null(net, scale, DEFAULT_CONFIG, profile=prof))
        return out

    ok = True
    for r in reports("SuperSmall()@R"):
        ok = ok and r.status == "pass"
        ok = ok and r.details["order_zero_null"] and r.details["all_orders_null"]
    for r in reports("GaussianPeak(p=1)@R"):
        ok = ok and r.status == "pass"
        ok = ok and not r.details["order_zero_null"]
        ok = ok and not r.details["all_orders_null"]

    # negligibility must not depend on which regular set was supplied
    custom = RegularSetSpec(
        kind="custom", arity="double",
        generators=(tuple(tuple(row) for row in np.full((5, 5), 3.0)),),
        closure_depth=1,
    )
    indep = True
    for key, expect in (("SuperSmall()@R", True), ("GaussianPeak(p=1)@R", False)):
        expo = fit_profile(cache.mixed(key), m_max=DEFAULT_CONFIG.m_max)
        negs = {classify(expo, s).negligible for s in (ALL2, BOUNDED2, custom)}
        indep = indep and negs == {expect}
    ok = ok and indep
    _line(capsys, 5, "null characterizations and spec independence", ok,
          f"spec-independent verdicts = {indep}")


def test_criterion_06_taylor_bound(capsys, suite):
    worst = -math.inf
    all_ok = True
    for net in suite:
        summary = check_taylor(net, DEFAULT_CONFIG)
        all_ok = all_ok and summary.passed
        if summary.max_violation is not None:
            worst = max(worst, summary.max_violation)
    ok = all_ok and worst <= 1e-9
    _line(capsys, 6, "difference-quotient bound within 1e-9", ok,
          f"max violation = {worst:.3e}")


def test_criterion_07_fourier_numerics(capsys, suite):
    nodes = np.linspace(-16.0, 16.0, 2049)
    h = float(nodes[1] - nodes[0])
    xi, uhat = dft_quadrature(nodes, np.exp(-0.5 * nodes**2), h)
    selfdual = float(np.abs(uhat - np.exp(-0.5 * xi**2)).max())

    worst_rt = 0.0
    worst_pv = 0.0
    for net in suite:
        if not fourier_applicable(net):
            continue
        for eps in DEFAULT_CONFIG.eps_grid.values:
            worst_rt = max(worst_rt, roundtrip_error(net, eps))
            worst_pv = max(worst_pv, parseval_gap(net, eps))
    ok = selfdual <= 1e-8 and worst_rt <= 1e-6 and worst_pv <= 1e-6
    _line(capsys, 7, "self-duality 1e-8, roundtrip and Parseval 1e-6", ok,
          f"selfdual = {selfdual:.3e}, roundtrip = {worst_rt:.3e}, "
          f"parseval = {worst_pv:.3e}")


def test_criterion_08_interpolation_invariant(capsys, cache):
    worst = 0.0
    ok = True
    for label in cache.labels():
        vals = cache.mixed(label).values
        for i in range(vals.shape[0]):
            for beta in (1, 2):
                lhs = vals[i, 0, beta] ** 2
                rhs = vals[i, 0, 2 * beta] * vals[i, 0, 0]
                if rhs == 0.0:
                    ok = ok and lhs == 0.0
                    continue
                worst = max(worst, lhs / rhs - 1.0)
    ok = ok and worst <= 1e-12
    _line(capsys, 8, "sup-norm interpolation inequality on shared grids", ok,
          f"max excess = {worst:.3e} (rounding slack 1e-12)")


def test_criterion_09_regular_set_algebra(capsys):
    specs = [
        RegularSetSpec(kind="all", arity="single"),
        RegularSetSpec(kind="all", arity="double"),
        RegularSetSpec(kind="bounded", arity="single"),
        RegularSetSpec(kind="bounded", arity="double"),
        RegularSetSpec(kind="affine", arity="single"),
    ]
    axioms_ok = True
    for spec in specs:
        report = verify_axioms(spec, window_size=8, trials=100, rng_seed=20260823)
        axioms_ok = axioms_ok and report.passed

    rng = np.random.default_rng(20260823)
    envelope_ok = True
    for _ in range(50):
        size = int(rng.integers(2, 9))
        vals = np.round(rng.uniform(0.1, 10.0, size), 3)
        a, b, margin = affine_envelope(vals)
        feasible = all(a * m + b >= vals[m] - 1e-9 for m in range(size))
        # brute-force line search over slopes at the pinned intercept
        a_hi = max((vals[m] - vals[0]) / m for m in range(1, size)) + 1.0
        grid = np.linspace(0.0, max(a_hi, 1.0), 20001)
        step = float(grid[1] - grid[0])
        feas = [g for g in grid
                if all(g * m + vals[0] >= vals[m] - 1e-12 for m in range(size))]
        a_brute = min(feas)
        envelope_ok = (envelope_ok and feasible and margin >= -1e-9
                       and abs(b - vals[0]) <= 1e-12 and abs(a - a_brute) <= step)
    ok = axioms_ok and envelope_ok
    _line(capsys, 9, "closure axioms and minimal affine envelopes", ok,
          f"axioms = {axioms_ok}, envelopes = {envelope_ok}")


def test_criterion_10_deterministic_batch_runs(capsys, tmp_path):
    outs = []
    codes = []
    for sub in ("first", "second"):
        out_dir = tmp_path / sub
        codes.append(run("suite_gs.cfg", out_dir=out_dir, no_timestamp=True,
                         stream=io.StringIO()))
        outs.append(out_dir)
    names = sorted(p.name for p in outs[0].iterdir())
    same_names = names == sorted(p.name for p in outs[1].iterdir())
    identical = same_names and all(
        (outs[0] / n).read_bytes() == (outs[1] / n).read_bytes() for n in names
    )
    report = json.loads((outs[0] / "run_report.json").read_text())
    ok = codes == [0, 0] and identical and report["overall_pass"] is True
    _line(capsys, 10, "byte-identical reruns of the suite preset", ok,
          f"exit codes = {codes}, files = {len(names)}, identical = {identical}")
