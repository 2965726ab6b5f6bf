"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (or execute this file).  The
summary lines are written at the end of the module regardless of ``-s``.
"""
import filecmp
import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from qsig import adversary, analysis, conjecture, fingerprint as fp, gc, protocol
from qsig.coding import CodeSpec
from qsig.errors import QsigError
from qsig.rng import make_rng

RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    write = tr.write_line if tr else print
    write("")
    write("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        write(f"  criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


# 1 ------------------------------------------------------------------------

def test_criterion_01_oracle_equivalence():
    t0 = time.perf_counter()
    rng = make_rng(1)
    keys = np.array(list(itertools.product((0, 1), repeat=8)), dtype=np.uint8)
    mus = np.stack([fp.dense_mu(k) for k in keys])
    worst_p = worst_psi = 0.0
    for d, S in ((8, 2), (8, 4)):
        ell = d - fp.hidden_length(d, S)
        for s in range(S):
            I = fp.index_set(s, d, ell)
            kappas = rng.integers(0, 2, size=(200, ell), dtype=np.uint8)
            psis = np.stack([fp.dense_psi(I, kp, d) for kp in kappas])
            closed = np.stack([fp.psi_closed_form(I, kp, d) for kp in kappas])
            worst_psi = max(worst_psi, float(np.abs(psis - closed).max()))
            dense = (mus @ psis.T) ** 2
            for a, k in enumerate(keys):
                for b, kp in enumerate(kappas):
                    p = float(fp.accept_probability(k, I, kp))
                    worst_p = max(worst_p, abs(p - dense[a, b]))
    dt = time.perf_counter() - t0
    record(1, worst_p <= 1e-12 and worst_psi <= 1e-12 and dt < 10,
           f"max |P - dense| = {worst_p:.1e}, max |psi - closed| = {worst_psi:.1e}, "
           f"{dt:.1f} s")


# 2 ------------------------------------------------------------------------

def test_criterion_02_genuine_accept_rate():
    t0 = time.perf_counter()
    params = protocol.SchemeParams(d=1024, S=4, T=10, code=CodeSpec(4, 100, 10_000, 0.2),
                                   z_acc=2500, z_rej=4000)
    passed = draws = 0
    for rep in range(10):
        keys = protocol.keygen(params, seed=100 + rep)
        x = make_rng(200 + rep).integers(0, 4, params.K)
        sig = protocol.sign(keys, x, params)
        out = protocol.verify_simulate(keys, x, sig, params, seed=300 + rep)
        passed += params.N - out.z
        draws += params.N
    rate = passed / draws
    sigma = math.sqrt(0.75 * 0.25 / draws)
    dt = time.perf_counter() - t0
    record(2, abs(rate - 0.75) <= 3 * sigma and dt < 5,
           f"rate {rate:.5f} over {draws} draws, |dev| = {abs(rate - 0.75) / sigma:.2f} sigma, "
           f"{dt:.1f} s")


# 3 ------------------------------------------------------------------------

def test_criterion_03_conjecture_range():
    rep = conjecture.check_range(2**14)
    record(3, rep.holds and rep.largest_checked == 2**14 and rep.seconds < 600,
           f"x <= {rep.largest_checked}, {rep.steps_checked} steps, "
           f"{rep.exact_fallbacks} exact fallbacks, counterexample={rep.counterexample}, "
           f"{rep.seconds:.1f} s")


# 4 ------------------------------------------------------------------------

def test_criterion_04_half_identity():
    t0 = time.perf_counter()
    identity = all(conjecture.f_exact(2 * z, z)
                   == 1 / (1 + Fraction(math.comb(2 * z, z), 2 ** (2 * z)))
                   for z in range(1, 2**10 + 1))
    bound = all(conjecture.half_bound_holds(z) for z in range(1, 2**10 + 1))
    # equality at z = 1: C(2,1)^2 (3+1) == 16 and the bound value is 2/3
    equal = (conjecture.f_exact(2, 1) == Fraction(2, 3)
             and math.comb(2, 1) ** 2 * 4 == 16
             and all(math.comb(2 * z, z) ** 2 * (3 * z + 1) < 16**z for z in range(2, 50)))
    dt = time.perf_counter() - t0
    record(4, identity and bound and equal and dt < 60,
           f"identity={identity}, bound={bound}, equality only at z=1: {equal}, {dt:.1f} s")


# 5 ------------------------------------------------------------------------

def multinomial_repudiation(q, T):
    QR, Q0, Q1 = q
    total = 0.0
    for a in range(1, T + 1):
        for c in range(1, T - a + 1):
            b = T - a - c
            coef = math.factorial(T) // (math.factorial(a) * math.factorial(b) * math.factorial(c))
            total += coef * QR**a * Q0**b * Q1**c
    return total


def test_criterion_05_repudiation_identity():
    t0 = time.perf_counter()
    n = 44
    grid = [(i / n, j / n, (n - i - j) / n) for i in range(n + 1) for j in range(n + 1 - i)]
    worst = 0.0
    t1_zero = True
    for q in grid:
        dist = analysis.OutcomeDistribution(*q)
        t1_zero &= analysis.repudiation_probability(dist, 1).exact == 0.0
        for T in range(1, 7):
            r = analysis.repudiation_probability(dist, T).exact
            worst = max(worst, abs(r - multinomial_repudiation(q, T)))
    dt = time.perf_counter() - t0
    record(5, worst <= 1e-12 and t1_zero and dt < 60,
           f"{len(grid)} grid points, T <= 6, max error {worst:.1e}, T=1 zero: {t1_zero}, "
           f"{dt:.1f} s")


# 6, 7 ---------------------------------------------------------------------

ALPHAS = (0.25, 0.1, 0.04, 0.01)
TS = (10, 100, 1000)
D_GRID = np.geomspace(1e4, 1e8, 25)


def test_criterion_06_p1_above_one_minus_three_alpha():
    checked = violations = 0
    for alpha, T, d_req in itertools.product(ALPHAS, TS, D_GRID):
        d = analysis.snap_dimension(d_req, round(1 / alpha))
        try:
            b = adversary.p1_bound(alpha, d, T)
        except QsigError:
            continue
        checked += 1
        violations += not b.p1 > 1 - 3 * alpha
    record(6, checked > 0 and violations == 0,
           f"{checked} admissible points, {violations} with p1 <= 1 - 3 alpha")


def test_criterion_07_parameter_contract():
    checked = bad = 0
    worst = 1.0
    for alpha, T, d_req in itertools.product(ALPHAS, TS, D_GRID):
        d = analysis.snap_dimension(d_req, round(1 / alpha))
        try:
            p = analysis.set_parameters(alpha, d, T, nu=0.2, eps_c=1e-9, eps_f=1e-12)
        except QsigError:
            continue
        checked += 1
        acc = analysis.genuine_accept_probability(p.N, p.alpha, p.z_acc)
        worst = min(worst, acc)
        ok = p.alpha * p.N <= p.z_acc < p.z_rej <= 2 * p.theta * p.N and acc >= 1 - 1e-9
        bad += not ok
    record(7, checked > 0 and bad == 0,
           f"{checked} admissible points, {bad} violations, "
           f"min genuine accept 1 - {1 - worst:.2e}")


# 8 ------------------------------------------------------------------------

def test_criterion_08_forgery_monte_carlo():
    t0 = time.perf_counter()
    lines = []
    ok = True
    for alpha, d_req, T in ((0.25, 1024, 10), (0.1, 2**14, 10)):
        d = analysis.snap_dimension(d_req, round(1 / alpha))
        model = adversary.ForgeryModel.for_scheme(alpha, d, T)
        W = adversary.sample_distances(model, 100_000, seed=8)
        ell = d - model.hidden_length
        rng = make_rng(9)
        accepted = rng.random(W.size) < (ell - 2.0 * W) ** 2 / (ell * d)
        rate = accepted.mean()
        se = accepted.std(ddof=1) / math.sqrt(W.size)
        p1 = adversary.p1_bound(alpha, d, T).p1
        ok &= rate <= p1 + 3 * se
        lines.append(f"(alpha={alpha}, d={d}, T={T}) rate {rate:.4f} +- {se:.4f} vs p1 {p1:.4f}")
    dt = time.perf_counter() - t0
    record(8, ok and dt < 60, "; ".join(lines) + f"; {dt:.1f} s")


# 9 ------------------------------------------------------------------------

def test_criterion_09_figure_properties():
    rows = [r for r in analysis.sweep(100, [0.01], 3e5, 8e7, 40) if r.admissible]
    rows.sort(key=lambda r: r.d)
    q = [r.qubits_per_bit for r in rows]
    decreasing = all(b <= a for a, b in zip(q, q[1:]))
    gap_exact = all(r.gap == 1 - r.p1 - r.alpha for r in rows)
    upper = rows[len(rows) // 2:]
    below_gc = all(r.qubits_per_bit < r.gc_qubits_per_bit for r in upper)
    record(9, decreasing and gap_exact and below_gc,
           f"{len(rows)} admissible rows; qubits_per_bit decreasing in d: {decreasing} "
           f"({q[0]:.3f} at d={rows[0].d} -> {q[-1]:.3f} at d={rows[-1].d}); "
           f"gap == 1 - p1 - alpha: {gap_exact}; below GC01 on upper half: {below_gc} "
           f"(GC01 {min(r.gc_qubits_per_bit for r in upper):.2f}.."
           f"{max(r.gc_qubits_per_bit for r in upper):.2f})")


# 10 -----------------------------------------------------------------------

def test_criterion_10_gc_baseline():
    _, approx = gc.gc_min_dimension(100, 0.1)
    n_min = gc.gc_min_codeword(0.1, 0.5, 1 - math.exp(-1))
    p = gc.GCParams(d=2**24, gamma=0.1, beta=0.1, T=100)
    pf, _ = gc.gc_forge1(p)
    ok = approx == 664 and abs(n_min - 20) < 1e-9 and abs(pf - p.delta**2) <= 1e-6
    record(10, ok, f"d_min.approx = {approx}, N_min = {n_min:.12g}, "
                   f"p_forge1 - delta^2 = {pf - p.delta ** 2:.1e} (margin {p.margin:.0f} bits)")


# 11 -----------------------------------------------------------------------

CLI_RUNS = {
    "params": ["params", "--alpha", "0.1", "--d", "16380", "--T", "10", "--format", "json"],
    "simulate": ["simulate", "--alpha", "0.1", "--d", "16380", "--T", "10",
                 "--mode", "forge", "--trials", "50", "--seed", "3", "--histogram", "{hist}"],
    "sweep": ["sweep", "--T", "100", "--alpha-list", "0.1,0.01", "--d-min", "3e5",
              "--d-max", "8e7", "--points", "10"],
    "conjecture": ["conjecture", "--x-max", "3000", "--format", "json"],
    "gc": ["gc", "--d", "1e5", "--gamma", "0.05", "--beta", "0.1", "--T", "100", "--reuse"],
}


def test_criterion_11_cli_determinism(tmp_path):
    same = {}
    for name, argv in CLI_RUNS.items():
        outs = []
        for rep in range(2):
            out = tmp_path / f"{name}{rep}.out"
            hist = tmp_path / f"{name}{rep}.hist"
            args = [a.replace("{hist}", str(hist)) for a in argv]
            r = subprocess.run([sys.executable, "-m", "qsig", *args, "--output", str(out)],
                               capture_output=True, text=True)
            assert r.returncode == 0, r.stderr
            outs.append((out, hist))
        ok = filecmp.cmp(outs[0][0], outs[1][0], shallow=False)
        if outs[0][1].exists():
            ok &= filecmp.cmp(outs[0][1], outs[1][1], shallow=False)
        same[name] = ok
    record(11, all(same.values()), ", ".join(f"{k}={'same' if v else 'DIFF'}"
                                             for k, v in same.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
