import itertools
import math

import pytest
from hypothesis import given, strategies as st
from scipy.stats import binom

from qsig import analysis as an
from qsig.errors import DomainError, ParameterError, SweepError


def enumerate_repudiation(q, T):
    """Sum over all verdict tuples: some verifier rejects and some 1-accepts."""
    total = 0.0
    for tup in itertools.product(range(3), repeat=T):
        if 0 in tup and 2 in tup:
            total += math.prod(q[i] for i in tup)
    return total


dists = st.tuples(st.floats(0, 1), st.floats(0, 1)).map(
    lambda ab: (min(ab), max(ab) - min(ab), 1 - max(ab)))


@given(dists, st.integers(1, 6))
def test_repudiation_matches_enumeration(q, T):
    r = an.repudiation_probability(an.OutcomeDistribution(*q), T)
    assert r.exact == pytest.approx(enumerate_repudiation(q, T), abs=1e-12)


@given(dists, st.integers(1, 50))
def test_repudiation_bound_ordering(q, T):
    r = an.repudiation_probability(an.OutcomeDistribution(*q), T)
    assert r.exact <= r.bound_pow + 1e-12
    assert r.bound_pow <= r.bound_lin + 1e-12


def test_single_verifier_never_repudiates():
    assert an.repudiation_probability(an.OutcomeDistribution(0.5, 0.0, 0.5), 1).exact == 0.0


def test_outcome_distribution_validation():
    with pytest.raises(DomainError):
        an.OutcomeDistribution(0.5, 0.5, 0.5)


@given(st.integers(1, 400), st.floats(0.001, 0.5), st.data())
def test_exact_tail_against_scipy(N, G, data):
    z = data.draw(st.integers(0, N))
    assert an.genuine_accept_probability(N, G, z) == pytest.approx(
        binom.cdf(z, N, G), abs=1e-12)


def test_beta_route_agrees_with_exact_route(monkeypatch):
    exact = an.genuine_accept_probability(400, 0.1, 55)
    monkeypatch.setattr(an, "_EXACT_TAIL_MAX_N", 0)
    assert an.genuine_accept_probability(400, 0.1, 55) == pytest.approx(exact, abs=1e-14)


@given(st.sampled_from([0.1, 0.04, 0.01]), st.floats(4.5, 8), st.sampled_from([10, 100]))
def test_set_parameters_contract(alpha, log_d, T):
    S = round(1 / alpha)
    d = an.snap_dimension(10**log_d, S)
    try:
        p = an.set_parameters(alpha, d, T)
    except ParameterError:
        return
    assert p.alpha * p.N <= p.z_acc < p.z_rej <= 2 * p.theta * p.N
    assert p.N == math.ceil(an.codeword_length(alpha, p.theta, 1 - p.p1 - alpha, 1e-9, 1e-12))
    assert an.genuine_accept_probability(p.N, alpha, p.z_acc) >= 1 - 1e-9
    exact, asym = an.qubits_per_bit(p)
    assert exact == pytest.approx(asym, rel=1e-3)


def test_set_parameters_errors():
    with pytest.raises(ParameterError, match="nu must exceed alpha"):
        an.set_parameters(0.25, 1024, 10)
    with pytest.raises(ParameterError, match="S must be an integer dividing d"):
        an.set_parameters(0.3, 1000, 10)
    with pytest.raises(ParameterError, match="S must be an integer"):
        an.set_parameters(0.1, 1001, 10)


def test_forgery_rejection_bound_meets_target():
    p = an.set_parameters(0.1, 16380, 10)
    assert an.forgery_reject_probability(p) >= 1 - 1e-12 * (1 + 1e-6)


def test_repudiation_bound_scheme():
    p = an.set_parameters(0.1, 16380, 10)
    assert an.repudiation_bound_scheme(p) == min(1.0, 10 * (1e-9) ** 0.04)
    assert an.repudiation_from_eps(1e-9, 1e-12, 10) == pytest.approx(1e-8)


def test_gap_matched_gamma():
    for gap in (0.01, 0.3, 1.0):
        g = an.gap_matched_gamma(gap)
        assert 8 * g * (1 - 2 * g) == pytest.approx(gap)


def test_sweep_columns_and_admissibility():
    rows = an.sweep(100, [0.1, 0.01], 1e4, 1e6, 5)
    assert len(rows) == 10
    for r in rows:
        assert len(r.as_tuple()) == len(an.SWEEP_COLUMNS)
        assert r.d % round(1 / r.alpha) == 0
        if r.admissible:
            assert r.gap == 1 - r.p1 - r.alpha
        else:
            assert r.reason and math.isnan(r.gap)


def test_sweep_codelength_order():
    rows = an.sweep(100, [0.04], 1e5, 1e8, 8, x_axis="codelength")
    Ns = [r.N for r in rows if r.admissible]
    assert Ns == sorted(Ns)


def test_sweep_nothing_admissible():
    with pytest.raises(SweepError):
        an.sweep(1000, [0.25], 1e3, 2e3, 3)
