import numpy as np
import pytest

from cornermag.degennes import DeGennesSolution, fh_moment, mu, theta0
from cornermag.errors import NoConvergence

from oracles import shooting_mu, sturm_count

# Frozen from tests/oracles.py (adaptive RK shooting, rtol 1e-11):
SHOOTING_MU_MINUS_2 = 0.9514188413052217


def test_mu_at_zero_is_landau_level():
    # Even extension across the Neumann boundary gives the full-line oscillator.
    sol = mu(0.0)
    assert abs(sol.mu - 1.0) < 1e-7


def test_mu_matches_shooting_oracle():
    sol = mu(-2.0, tol=1e-8)
    assert abs(sol.mu - SHOOTING_MU_MINUS_2) < 1e-7, sol.mu


def test_mu_certificate_and_positivity():
    sol = mu(-1.3)
    assert sol.error_estimate <= 1e-8
    assert sol.mu > 0


def test_mu_eigenfunction_normalized_with_neumann_trace():
    sol = mu(-0.5)
    w = np.full(len(sol.grid), sol.step)
    w[0] = sol.step / 2
    assert abs(np.sum(w * sol.eigenfunction**2) - 1.0) < 1e-10
    # one-sided second-order derivative at the wall
    u = sol.eigenfunction
    d0 = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * sol.step)
    assert abs(d0) < 50 * sol.step**2


def test_mu_tail_certificate_holds_pointwise():
    sol = mu(-0.9)
    bound = sol.decay_constant * np.exp(-sol.decay_rate * sol.grid)
    assert np.all(np.abs(sol.eigenfunction) <= bound + 1e-12)
    assert sol.decay_rate > 0.2
    # log-magnitude eventually concave-decreasing on the resolvable tail
    mag = np.abs(sol.eigenfunction)
    peak = int(np.argmax(mag))
    tail = mag[peak:][mag[peak:] > 1e-10]
    d2 = np.diff(np.log(tail), 2)
    assert np.max(d2) < 1e-6


def test_mu_truncation_robustness():
    # Doubling the truncation length moves the value below tol.
    from cornermag.degennes import _fd_value, _length

    tau = -1.0
    a = _fd_value(tau, _length(tau), 1.0 / 1024)
    b = _fd_value(tau, 2 * _length(tau), 1.0 / 1024)
    assert abs(a - b) < 1e-8


def test_sturm_count_agrees_with_lapack():
    # Independent plain-Python Sturm counter against the packaged solve.
    from cornermag.degennes import _fd_value, _length

    tau = -0.7
    step = 1.0 / 256
    n = int(round(_length(tau) / step))
    z = step * np.arange(n)
    diag = np.full(n, 2.0 / step**2) + (z + tau) ** 2
    off = np.full(n - 1, -1.0 / step**2)
    off[0] = -np.sqrt(2.0) / step**2
    lam = _fd_value(tau, _length(tau), step)
    assert sturm_count(diag, off, lam - 1e-6) == 0
    assert sturm_count(diag, off, lam + 1e-6) == 1


def test_theta0_value_and_minimizer_identity():
    value, tau0 = theta0()
    assert 0.585 < value < 0.595
    assert abs(value - tau0**2) < 1e-6
    assert -0.8 < tau0 < -0.7


def test_theta0_consistency_under_tighter_tol():
    value, _ = theta0()
    tighter, _ = theta0(1e-9)
    assert abs(value - tighter) < 1e-8


def test_theta0_is_the_strict_minimum_of_sampled_mu():
    value, tau0 = theta0()
    for tau in np.linspace(-2.5, -0.05, 9):
        if abs(tau - tau0) > 0.05:
            assert mu(float(tau)).mu > value + 1e-6


def test_fh_moment_vanishes_at_minimizer():
    _, tau0 = theta0()
    assert abs(fh_moment(mu(tau0))) < 1e-6


def test_fh_moment_positive_at_zero():
    m = fh_moment(mu(0.0))
    assert m > 0.5  # all mass at z > 0, well centered at the wall


def test_fh_moment_shrinks_with_refinement():
    # Second-order scheme: the moment residual at the minimizer should drop
    # by roughly 4x when the step is halved.
    from cornermag.degennes import _fd_value, _length

    _, tau0 = theta0()
    residuals = []
    for step in (1.0 / 512, 1.0 / 1024):
        _, z, u, w = _fd_value(tau0, _length(tau0), step, want_vector=True)
        residuals.append(abs(float(np.sum(w * (z + tau0) * u**2))))
    assert residuals[1] < residuals[0]


def test_mu_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        mu(0.3, tol=0.0)


def test_mu_unattainable_tol_raises():
    with pytest.raises(NoConvergence):
        mu(-1.1, tol=1e-13)


def test_solution_is_frozen_record():
    sol = mu(-0.4)
    assert isinstance(sol, DeGennesSolution)
    with pytest.raises(AttributeError):
        sol.mu = 0.0
