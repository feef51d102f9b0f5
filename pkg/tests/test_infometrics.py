import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from blindjam.channel import ChannelRealization, default_budget, sample_channel
from blindjam.infometrics import (
    GAUSSIAN_ENTROPY_BITS,
    MC_COMPONENT_CAP,
    QUAD_COMPONENT_CAP,
    MiEstimate,
    MixtureSpec,
    _observation_model,
    _product_mixture,
    gaussian_entropy,
    gaussian_wiretap_capacity,
    mi_discrete_input,
    mixture_entropy,
    mixture_logpdf,
    rate_lower_bound,
    symbol_sum_pmf,
)
from blindjam.schemes import (
    SchemeConfig,
    make_blind_scheme,
    make_csi_scheme,
    make_gaussian_jam_scheme,
)


def test_gaussian_entropy_closed_form():
    assert gaussian_entropy(1.0) == pytest.approx(0.5 * math.log2(2 * math.pi * math.e))
    assert gaussian_entropy(1.0) == pytest.approx(2.0471, abs=1e-3)
    # doubling sigma adds exactly one bit
    assert gaussian_entropy(2.0) - gaussian_entropy(1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gaussian_entropy(0.0)


def test_mixture_spec_validation():
    with pytest.raises(ValueError):
        MixtureSpec(means=np.array([]))
    with pytest.raises(ValueError):
        MixtureSpec(means=np.array([0.0]), sigma=0.0)
    with pytest.raises(ValueError):
        MixtureSpec(means=np.array([0.0, 1.0]), weights=np.array([0.8, 0.1]))
    with pytest.raises(ValueError):
        MixtureSpec(means=np.array([0.0, 1.0]), weights=np.array([1.1, -0.1]))
    spec = MixtureSpec(means=np.array([0.0, 1.0]))
    assert np.allclose(spec.weights, [0.5, 0.5])


def test_logpdf_matches_scipy_single_component():
    spec = MixtureSpec(means=np.array([1.3]), sigma=0.7)
    y = np.linspace(-3, 5, 50)
    assert np.allclose(mixture_logpdf(y, spec), stats.norm.logpdf(y, 1.3, 0.7))


def test_logpdf_matches_manual_logsumexp():
    rng = np.random.default_rng(0)
    means = rng.normal(size=20)
    w = rng.random(20)
    w /= w.sum()
    spec = MixtureSpec(means=means, weights=w, sigma=0.6)
    y = rng.normal(size=30, scale=2.0)
    manual = np.log(np.sum(
        w[None, :] * stats.norm.pdf(y[:, None], means[None, :], 0.6), axis=1))
    assert np.allclose(mixture_logpdf(y, spec), manual, atol=1e-12)


def test_windowed_path_matches_full_evaluation():
    # above the full-evaluation size the pruned log-sum must agree anyway
    rng = np.random.default_rng(1)
    means = np.sort(rng.uniform(-50, 50, size=3000))
    spec = MixtureSpec(means=means, sigma=0.5)
    y = rng.uniform(-55, 55, size=200)
    got = mixture_logpdf(y, spec)
    z = -0.5 * ((y[:, None] - means[None, :]) / 0.5) ** 2
    zmax = z.max(axis=1)
    full = (zmax + np.log(np.exp(z - zmax[:, None]).sum(axis=1))
            - math.log(3000) - math.log(0.5) - 0.5 * math.log(2 * math.pi))
    assert np.max(np.abs(got - full)) < 1e-12


def test_far_query_falls_back_to_nearest_component():
    means = np.sort(np.random.default_rng(2).uniform(-10, 10, size=3000))
    spec = MixtureSpec(means=means, sigma=0.01)
    got = mixture_logpdf(np.array([500.0]), spec)[0]
    assert np.isfinite(got)
    want = (-0.5 * ((500.0 - means[-1]) / 0.01) ** 2
            - math.log(3000) - math.log(0.01) - 0.5 * math.log(2 * math.pi))
    assert got == pytest.approx(want, rel=1e-9)


def test_entropy_permutation_and_translation_invariance():
    means = np.array([0.0, 2.0, -1.0, 5.0])
    w = np.array([0.1, 0.4, 0.3, 0.2])
    spec = MixtureSpec(means=means, weights=w, sigma=0.8)
    perm = np.array([2, 0, 3, 1])
    spec_p = MixtureSpec(means=means[perm], weights=w[perm], sigma=0.8)
    spec_t = MixtureSpec(means=means + 17.3, weights=w, sigma=0.8)
    h = mixture_entropy(spec, method="mc", n_samples=5000, seed=9)
    # sorting inside the estimator makes permutation invariance bitwise
    assert mixture_entropy(spec_p, method="mc", n_samples=5000, seed=9).value == h.value
    # translation is exact up to float rounding of the shifted means
    assert mixture_entropy(spec_t, method="mc", n_samples=5000, seed=9).value == \
        pytest.approx(h.value, abs=1e-9)
    hq = mixture_entropy(spec, method="quadrature").value
    assert mixture_entropy(spec_p, method="quadrature").value == pytest.approx(hq, abs=1e-9)
    assert mixture_entropy(spec_t, method="quadrature").value == pytest.approx(hq, abs=1e-9)


def test_entropy_monotone_in_sigma():
    means = np.array([-2.0, 0.0, 3.0])
    vals = [mixture_entropy(MixtureSpec(means=means, sigma=s), method="quadrature").value
            for s in (0.5, 1.0, 2.0)]
    assert vals[0] < vals[1] < vals[2]


def test_entropy_bounds_single_gaussian_limit():
    # widely separated components: h -> H(choice) + gaussian term
    spec = MixtureSpec(means=np.array([0.0, 1000.0]), sigma=1.0)
    h = mixture_entropy(spec, method="quadrature").value
    assert h == pytest.approx(1.0 + gaussian_entropy(1.0), abs=1e-6)
    # coincident components: plain gaussian
    spec1 = MixtureSpec(means=np.array([4.0, 4.0]), sigma=1.0)
    assert mixture_entropy(spec1, method="quadrature").value == pytest.approx(
        gaussian_entropy(1.0), abs=1e-6)


def test_mc_agrees_with_quadrature():
    rng = np.random.default_rng(3)
    for trial in range(4):
        k = int(rng.integers(2, 30))
        spec = MixtureSpec(means=rng.normal(scale=3.0, size=k),
                           sigma=float(rng.uniform(0.3, 2.0)))
        quad = mixture_entropy(spec, method="quadrature")
        mc = mixture_entropy(spec, method="mc", n_samples=40_000, seed=trial)
        assert abs(mc.value - quad.value) <= 3.0 * mc.stderr + quad.stderr + 1e-6


def test_entropy_caps_refuse():
    big = MixtureSpec(means=np.zeros(QUAD_COMPONENT_CAP + 1))
    with pytest.raises(ValueError):
        mixture_entropy(big, method="quadrature")
    with pytest.raises(ValueError):
        mixture_entropy(MixtureSpec(means=np.zeros(2)), method="nope")


def test_symbol_sum_pmf_oracles():
    vals, pmf = symbol_sum_pmf(1, 2)
    assert np.array_equal(vals, np.arange(-2, 3))
    assert np.allclose(pmf, 0.2)
    vals, pmf = symbol_sum_pmf(2, 1)
    assert np.array_equal(vals, np.arange(-2, 3))
    assert np.allclose(pmf, np.array([1, 2, 3, 2, 1]) / 9.0)
    vals, pmf = symbol_sum_pmf(3, 4)
    assert pmf.sum() == pytest.approx(1.0)
    assert np.allclose(pmf, pmf[::-1])


def test_mi_bpsk_literature_value():
    # unit-energy BPSK in unit AWGN: known 0 dB value
    mi = mi_discrete_input([1.0], [np.array([-1.0, 1.0])], 1.0, [0],
                           method="quadrature")
    assert mi.value == pytest.approx(0.4861, abs=2e-3)


def test_mi_zero_for_singleton_designated():
    mi = mi_discrete_input([1.0, 0.7], [np.array([0.0]), np.array([-1.0, 1.0])],
                           1.0, [0])
    assert mi.value == 0.0 and mi.stderr == 0.0


def test_mi_posterior_form_identity():
    # h(Y) - h(Y|V) must equal H(V) - H(V|Y) (tiny case, both by quadrature)
    mus = np.array([-1.0, 1.0])
    sigma = 0.8
    mi = mi_discrete_input([1.0], [mus], sigma, [0], method="quadrature")

    def integrand(y):
        dens = 0.5 * (stats.norm.pdf(y, -1.0, sigma) + stats.norm.pdf(y, 1.0, sigma))
        post = 0.5 * stats.norm.pdf(y, 1.0, sigma) / dens
        ent = 0.0
        for p in (post, 1.0 - post):
            if p > 0:
                ent -= p * math.log2(p)
        return dens * ent

    h_v_given_y, _ = integrate.quad(integrand, -12, 12, limit=200)
    assert mi.value == pytest.approx(1.0 - h_v_given_y, abs=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_mi_nonnegative_and_capped(seed):
    # 0 <= I <= min(H(designated), capacity cap) within noise
    rng = np.random.default_rng(seed)
    q = int(rng.integers(1, 4))
    coeffs = rng.uniform(0.3, 1.5, size=2)
    sets = [np.arange(-q, q + 1, dtype=float), np.arange(-q, q + 1, dtype=float)]
    sigma = float(rng.uniform(0.5, 2.0))
    mi = mi_discrete_input(coeffs, sets, sigma, [0], method="mc",
                           n_samples=4000, seed=int(seed))
    assert mi.value >= -3.0 * mi.stderr - 1e-9
    assert mi.value <= math.log2(2 * q + 1) + 3.0 * mi.stderr
    means, w = _product_mixture(coeffs, sets, [None, None])
    var = float(np.sum(w * means**2) - np.sum(w * means) ** 2)
    cap = 0.5 * math.log2(1.0 + var / sigma**2)
    assert mi.value <= cap + 3.0 * mi.stderr + 1e-6


def test_mi_input_validation():
    with pytest.raises(ValueError):
        mi_discrete_input([1.0], [np.array([0.0, 1.0])], 1.0, [])
    with pytest.raises(ValueError):
        mi_discrete_input([1.0], [np.array([0.0, 1.0])], 1.0, [2])
    with pytest.raises(ValueError):
        mi_discrete_input([1.0], [np.array([0.0, 1.0])], 0.0, [0])
    with pytest.raises(ValueError):
        mi_discrete_input([1.0, 1.0], [np.array([0.0])], 1.0, [0])


def test_component_cap_message_names_q():
    sets = [np.arange(101, dtype=float)] * 3
    with pytest.raises(ValueError, match="reduce q"):
        mi_discrete_input([1.0, 0.9, 0.8], sets, 1.0, [0])


def test_estimate_validation():
    with pytest.raises(ValueError):
        MiEstimate(value=-1.0, stderr=0.0, n_samples=10, method="mc")
    with pytest.raises(ValueError):
        MiEstimate(value=1.0, stderr=-0.1, n_samples=10, method="mc")


def test_rate_lower_bound_structure(ch1):
    budget = default_budget(ch1, 100.0)
    cfg = make_blind_scheme(1, 100.0, 0.1, ch1.h, budget.c_bar, 3)
    rb = rate_lower_bound(cfg, ch1, budget, n_samples=4000, seed=11)
    assert rb.bound == max(0.0, rb.i_v_y1.value - rb.i_v_y2.value)
    assert rb.bound >= 0.0
    assert rb.stderr == pytest.approx(
        math.hypot(rb.i_v_y1.stderr, rb.i_v_y2.stderr))
    again = rate_lower_bound(cfg, ch1, budget, n_samples=4000, seed=11)
    assert again.bound == rb.bound


def test_rate_lower_bound_all_kinds(ch1):
    budget = default_budget(ch1, 100.0)
    for cfg in (make_blind_scheme(1, 100.0, 0.1, ch1.h, budget.c_bar, 3),
                make_csi_scheme(1, 100.0, 0.1, ch1.h, ch1.g),
                make_gaussian_jam_scheme(1, 100.0, 0.1, ch1.h, budget.c_bar, 3)):
        rb = rate_lower_bound(cfg, ch1, budget, n_samples=4000, seed=1)
        assert np.isfinite(rb.bound)


def test_eve_entropy_cap_trips_on_broken_accounting(ch1):
    # a c_bar far below the true sum g^2 must trip the max-entropy check
    cfg = make_blind_scheme(1, 100.0, 0.1, ch1.h, 10.0, 3)
    broken = SchemeConfig(kind=cfg.kind, m=cfg.m, p=cfg.p, delta=cfg.delta,
                          gamma=cfg.gamma, q=cfg.q, a=cfg.a, alphas=cfg.alphas,
                          c_bar=1e-4)
    with pytest.raises(RuntimeError, match="max-entropy cap"):
        rate_lower_bound(broken, ch1, n_samples=4000, seed=0)


def test_gaussian_jam_uses_exact_noise_folding(ch1):
    budget = default_budget(ch1, 100.0)
    cfg = make_gaussian_jam_scheme(1, 100.0, 0.1, ch1.h, budget.c_bar, 3)
    coeffs, sets, weights, designated, sigma = _observation_model(cfg, ch1, "eve")
    assert sigma == pytest.approx(
        math.sqrt(ch1.sigma2**2 + 100.0 * float(np.sum(ch1.g[1:] ** 2))))
    assert len(sets) == 1 and designated == [0]
    coeffs1, _, _, _, sigma1 = _observation_model(cfg, ch1, "legit")
    assert sigma1 == pytest.approx(
        math.sqrt(ch1.sigma1**2 + 100.0 * float(np.sum(ch1.h[1:] ** 2))))
    assert np.allclose(coeffs1, ch1.h[0] * np.asarray(cfg.alphas))


def test_legit_model_collapses_jamming(ch1):
    cfg = make_blind_scheme(1, 100.0, 0.1, ch1.h, 10.0, 3)
    coeffs, sets, weights, designated, sigma = _observation_model(cfg, ch1, "legit")
    # m message sets plus one pre-convolved jamming sum
    assert len(sets) == 2 and weights[0] is None and weights[1] is not None
    assert coeffs[-1] == 1.0
    vals, pmf = symbol_sum_pmf(2, cfg.q)
    assert np.allclose(weights[1], pmf)
    assert np.allclose(sets[1], cfg.a * vals)


def test_mixture_models_match_simulated_channel(ch1):
    # strongest model check: cross-entropy of physically simulated outputs
    # against the model mixture equals the model's own entropy
    from blindjam.channel import eve_output
    from blindjam.schemes import encode, sample_symbols

    cfg = make_blind_scheme(1, 100.0, 0.1, ch1.h, 10.0, 3)
    coeffs, sets, weights, _, sigma = _observation_model(cfg, ch1, "eve")
    means, w = _product_mixture(coeffs, sets, weights)
    spec = MixtureSpec(means=means, weights=w, sigma=sigma)
    rng = np.random.default_rng(4)
    v, u = sample_symbols(cfg, 8, n=60_000)
    y = eve_output(ch1, encode(cfg, ch1.h, v, u).x) + rng.normal(size=60_000)
    cross = float(np.mean(-mixture_logpdf(y, spec))) / math.log(2)
    h_model = mixture_entropy(spec, method="mc", n_samples=60_000, seed=5)
    assert cross == pytest.approx(h_model.value, abs=4.0 * h_model.stderr + 0.02)


def test_gaussian_wiretap_capacity():
    assert gaussian_wiretap_capacity(1.0, 1.0, 10.0) == 0.0
    assert gaussian_wiretap_capacity(0.5, 2.0, 10.0) == 0.0
    val = gaussian_wiretap_capacity(2.0, 0.5, 10.0)
    assert val == pytest.approx(0.5 * math.log2(41.0) - 0.5 * math.log2(3.5))
    with pytest.raises(ValueError):
        gaussian_wiretap_capacity(1.0, 1.0, -1.0)
