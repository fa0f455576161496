"""Tests for Wigner-pair sampling and hypothesis checks."""

import math

import numpy as np
import pytest

from aclaw.wigner import (
    ENSEMBLES,
    EnsembleSpec,
    check_moment_condition,
    check_X_structure,
    entry_p_norm,
    entry_samples,
    load_pair,
    norm_event_rate,
    sample_pair,
    save_pair,
    spec_from_text,
    spec_to_text,
    spectral_norm,
)


@pytest.mark.parametrize("ensemble", sorted(ENSEMBLES))
def test_hermitian_and_deterministic(ensemble):
    spec = EnsembleSpec(n=8, ensemble=ensemble, seed=11)
    p1 = sample_pair(spec)
    p2 = sample_pair(spec)
    np.testing.assert_array_equal(p1.u, p2.u)
    np.testing.assert_array_equal(p1.v, p2.v)
    np.testing.assert_array_equal(p1.u, p1.u.conj().T)
    np.testing.assert_array_equal(p1.v, p1.v.conj().T)


def test_rademacher_small_determinism():
    spec = EnsembleSpec(n=2, ensemble="rademacher", seed=3)
    a = sample_pair(spec)
    b = sample_pair(spec)
    np.testing.assert_array_equal(a.u, b.u)
    assert set(np.abs(a.u[np.triu_indices(2, 1)]) * math.sqrt(2)) <= {1.0}


def test_u_and_v_independent_streams():
    spec = EnsembleSpec(n=16, seed=5)
    pair = sample_pair(spec)
    assert not np.allclose(pair.u, pair.v)


def test_entry_mean_and_second_moment():
    n, samples = 8, 10000
    for ensemble in sorted(ENSEMBLES):
        xs = entry_samples(EnsembleSpec(n=n, ensemble=ensemble, seed=1), samples)
        # CLT-scale bound on the empirical mean
        assert abs(xs.mean()) <= 4.0 / math.sqrt(samples * n)
        second = np.mean(np.abs(xs) ** 2)
        assert second == pytest.approx(1.0 / n, rel=0.05)


def test_pair_offdiag_second_moment():
    # variance of an actual matrix entry across seeds
    n = 8
    vals = []
    for seed in range(10000):
        pair = sample_pair(EnsembleSpec(n=n, ensemble="complex-gaussian", seed=seed))
        vals.append(pair.u[0, 1])
    second = np.mean(np.abs(vals) ** 2)
    assert second == pytest.approx(1.0 / n, rel=0.05)


def test_moment_condition_rademacher_exact():
    spec = EnsembleSpec(n=16, ensemble="rademacher", seed=2)
    rep = check_moment_condition(spec, p_grid=(2, 4, 8, 16), samples=4000)
    # |entry|_p = 1/sqrt(N) for every p: condition holds with alpha1 = 1
    np.testing.assert_allclose(rep.norm_est, 1 / math.sqrt(16), rtol=1e-12)
    assert rep.all_hold


def test_moment_condition_gaussian():
    spec = EnsembleSpec(n=16, ensemble="real-gaussian", seed=2)
    rep = check_moment_condition(spec, samples=40000)
    assert rep.all_hold
    # oracle: gaussian p-norms via the Gamma function,
    # |g|_p = sqrt(2) (Gamma((p+1)/2)/sqrt(pi))^(1/p) / sqrt(N)
    from scipy.special import gammaln
    for p, est in zip(rep.p_grid, rep.norm_est):
        exact = (math.sqrt(2.0)
                 * math.exp((gammaln((p + 1) / 2) - 0.5 * math.log(math.pi)) / p)
                 / math.sqrt(16))
        assert est == pytest.approx(exact, rel=0.05)


def test_moment_condition_negative_control():
    # heavy-tailed stand-in: alpha1 too small for the gaussian growth
    spec = EnsembleSpec(n=16, ensemble="real-gaussian", alpha0=0.1, alpha1=1.0, seed=4)
    rep = check_moment_condition(spec, p_grid=(16,), samples=40000)
    assert not rep.all_hold


def test_x_structure():
    spec = EnsembleSpec(n=4, ensemble="complex-gaussian", seed=9)
    rep = check_X_structure(spec, samples=4000)
    assert rep.all_hold
    np.testing.assert_allclose(rep.gram_matrix, np.eye(2), atol=0.1)


def test_x_structure_identity_input():
    from aclaw.sdcore import phi_ac
    spec = EnsembleSpec(n=4, ensemble="rademacher", seed=10)
    rep = check_X_structure(spec, samples=4000, a_matrix=np.eye(3, dtype=complex))
    assert rep.quad_form_error <= rep.quad_form_tol
    np.testing.assert_allclose(phi_ac(np.eye(3)), np.diag([2.0, 1.0, 1.0]))


def test_norm_event_rate_zero_at_desk_scale():
    spec = EnsembleSpec(n=64, ensemble="complex-gaussian", seed=1)
    assert norm_event_rate(spec, samples=20) == 0.0


def test_norm_event_rate_negative_control():
    # N=2 with threshold far below typical norms must trigger
    spec = EnsembleSpec(n=2, ensemble="complex-gaussian", seed=1)
    assert norm_event_rate(spec, samples=50, threshold=0.1) > 0


def test_norm_event_rate_monotone_in_n():
    rates = [norm_event_rate(EnsembleSpec(n=n, ensemble="complex-gaussian",
                                          seed=2), samples=25)
             for n in (16, 64)]
    assert rates[0] >= rates[1]  # up to Monte Carlo error; both 0 at desk scale


def test_spectral_radius_concentrates_near_two():
    norms = []
    for seed in range(20):
        pair = sample_pair(EnsembleSpec(n=256, ensemble="complex-gaussian", seed=seed))
        norms.append(spectral_norm(pair.u))
    assert 1.9 <= np.mean(norms) <= 2.2


def test_pair_dump_roundtrip(tmp_path):
    spec = EnsembleSpec(n=6, ensemble="complex-gaussian", seed=42)
    pair = sample_pair(spec)
    path = tmp_path / "pair.csv"
    save_pair(pair, path)
    back = load_pair(path)
    np.testing.assert_array_equal(back.u, pair.u)
    np.testing.assert_array_equal(back.v, pair.v)
    assert back.spec == spec


def test_spec_text_roundtrip():
    spec = EnsembleSpec(n=12, ensemble="rademacher", seed=7)
    assert spec_from_text(spec_to_text(spec)) == spec


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec(n=1)
    with pytest.raises(ValueError):
        EnsembleSpec(n=4, ensemble="cauchy")
    with pytest.raises(ValueError):
        EnsembleSpec(n=4, alpha0=-1.0)
    # plain "gaussian" is accepted as an alias
    assert EnsembleSpec(n=4, ensemble="gaussian").ensemble == "complex-gaussian"


def test_entry_p_norm_helper():
    xs = np.array([1.0, -1.0, 1.0, -1.0])
    assert entry_p_norm(xs, 4) == pytest.approx(1.0)
