import math

import pytest
from hypothesis import given, strategies as st
from scipy.stats import binom

from qsig.bounds import binary_entropy, chernoff_lower, chernoff_upper, entropy_inverse
from qsig.errors import DomainError


def test_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.4999, abs=1e-4)
    with pytest.raises(DomainError):
        binary_entropy(1.5)


@given(st.floats(0.0, 1.0))
def test_inverse_round_trip(y):
    p = entropy_inverse(y)
    assert 0.0 <= p <= 0.5
    assert binary_entropy(p) == pytest.approx(y, abs=1e-12)


@given(st.floats(0.0, 0.5))
def test_inverse_of_entropy(p):
    # h is flat near 1/2, so compare in entropy space there
    q = entropy_inverse(binary_entropy(p))
    assert abs(binary_entropy(q) - binary_entropy(p)) < 1e-12
    if p < 0.45:
        assert q == pytest.approx(p, abs=1e-9)


@given(st.integers(10, 2000), st.floats(0.01, 0.9), st.floats(0.05, 2.0))
def test_chernoff_bounds_dominate_exact_tails(n, g, delta):
    mu = n * g
    upper = binom.sf(math.ceil((1 + delta) * mu) - 1, n, g)
    assert upper <= chernoff_upper(mu, delta) + 1e-15
    if delta < 1:
        lower = binom.cdf(math.floor((1 - delta) * mu), n, g)
        assert lower <= chernoff_lower(mu, delta) + 1e-15


def test_chernoff_domain():
    with pytest.raises(DomainError):
        chernoff_upper(0.0, 1.0)
    with pytest.raises(DomainError):
        chernoff_lower(1.0, 0.0)
