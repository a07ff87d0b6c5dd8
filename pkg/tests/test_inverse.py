import numpy as np
import pytest

from effham.errors import (ChainBreakdown, InfeasibleSampling, MalformedPair,
                           SampleDegeneracy)
from effham.forward import g_function
from effham.instances import probe_window, random_chain, real_poles
from effham.inverse import (CharPolyPair, K1Variables, choose_probe_energies,
                            expand_to_chain, k1_closed_form, k1_invert,
                            k1_variables_from_chain, linearize_samples,
                            reconstruct, samples_from_chain)
from effham.model import GSample, TridiagonalChain

PAPER_SAMPLES = [GSample(0.0, -1.5), GSample(1.0, -2.0), GSample(3.0, -6.0)]


def _max_rel_err(got, ref):
    g = np.concatenate([got.a, got.rho])
    r = np.concatenate([ref.a, ref.rho])
    return float(np.max(np.abs(g - r) / np.maximum(np.abs(r), 1.0)))


class TestProbeSelection:
    def test_basic_contract(self):
        probes = choose_probe_energies(7, (-2.0, 2.0))
        assert len(probes) == 7
        assert len(np.unique(probes)) == 7
        assert np.all(probes > -2.0) and np.all(probes < 2.0)

    def test_margin_respected(self):
        forbidden = [-1.0, 0.3]
        probes = choose_probe_energies(9, (-3.0, 3.0), forbidden, margin=0.2)
        dist = np.min(np.abs(probes[:, None] - np.array(forbidden)), axis=1)
        assert np.all(dist >= 0.2)

    def test_deterministic(self):
        a = choose_probe_energies(11, (-4.0, 4.0), [0.5], 0.1)
        b = choose_probe_energies(11, (-4.0, 4.0), [0.5], 0.1)
        np.testing.assert_array_equal(a, b)

    def test_brackets_interior_poles(self):
        forbidden = [-1.2, 0.8]
        probes = choose_probe_energies(7, (-3.0, 3.0), forbidden, margin=0.05)
        for f in forbidden:
            assert np.any((probes > f) & (probes < f + 0.5))
            assert np.any((probes < f) & (probes > f - 0.5))

    def test_infeasible(self):
        with pytest.raises(InfeasibleSampling):
            choose_probe_energies(5, (0.0, 1.0), [0.5], margin=0.6)

    def test_bad_window(self):
        with pytest.raises(ValueError):
            choose_probe_energies(3, (1.0, 1.0))


class TestLinearize:
    def test_paper_pair(self):
        pair = linearize_samples(PAPER_SAMPLES, 1)
        # G = (E^2 - 3)/(2 - E): d0 lead +1 = (-1)^2, d1 lead -1
        np.testing.assert_allclose(pair.d0, [-3.0, 0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(pair.d1, [2.0, -1.0], atol=1e-12)

    def test_pair_interpolates(self):
        pair = linearize_samples(PAPER_SAMPLES, 1)
        for s in PAPER_SAMPLES:
            assert pair.g_value(s.energy) == pytest.approx(s.g_value,
                                                           rel=1e-12)

    def test_k0(self):
        pair = linearize_samples([GSample(1.0, 3.0)], 0)
        np.testing.assert_allclose(pair.d0, [4.0, -1.0], atol=1e-14)
        np.testing.assert_allclose(pair.d1, [1.0], atol=1e-15)

    def test_wrong_count(self):
        with pytest.raises(ValueError):
            linearize_samples(PAPER_SAMPLES, 2)

    def test_duplicate_energy(self):
        bad = [GSample(0.0, -1.5), GSample(0.0, -1.5), GSample(3.0, -6.0)]
        with pytest.raises(SampleDegeneracy):
            linearize_samples(bad, 1)

    def test_nonfinite(self):
        bad = [GSample(0.0, np.inf), GSample(1.0, -2.0), GSample(3.0, -6.0)]
        with pytest.raises(SampleDegeneracy):
            linearize_samples(bad, 1)


class TestK1:
    def test_paper_inversion_bitwise(self):
        chain = k1_invert(K1Variables(x1=0.0, x2=-3.0, y1=2.0))
        assert chain.a[0] == -2.0 and chain.a[1] == 2.0
        assert chain.rho[0] == -1.0

    def test_variable_roundtrip(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            chain = random_chain(1, rng, "mixed")
            back = k1_invert(k1_variables_from_chain(chain))
            np.testing.assert_allclose(back.a, chain.a, rtol=1e-13)
            np.testing.assert_allclose(back.rho, chain.rho, rtol=1e-12)

    def test_closed_form_paper(self):
        chain = k1_closed_form(PAPER_SAMPLES)
        np.testing.assert_allclose(chain.a, [-2.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(chain.rho, [-1.0], atol=1e-12)

    def test_closed_form_needs_three(self):
        with pytest.raises(ValueError):
            k1_closed_form(PAPER_SAMPLES[:2])

    def test_closed_form_duplicates(self):
        bad = [PAPER_SAMPLES[0], PAPER_SAMPLES[0], PAPER_SAMPLES[2]]
        with pytest.raises(SampleDegeneracy):
            k1_closed_form(bad)

    def test_general_path_matches_closed_form(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            chain = random_chain(1, rng, "mixed")
            probes = choose_probe_energies(3, probe_window(chain),
                                           real_poles(chain), 0.1)
            samples = samples_from_chain(chain, probes)
            cf = k1_closed_form(samples)
            rep = reconstruct(samples, 1)
            np.testing.assert_allclose(rep.chain.a, cf.a, rtol=1e-8)
            np.testing.assert_allclose(rep.chain.rho, cf.rho, rtol=1e-8)
            assert _max_rel_err(rep.chain, chain) < 1e-9


class TestExpansion:
    def test_paper_pair(self):
        pair = CharPolyPair([-3.0, 0.0, 1.0], [2.0, -1.0])
        chain = expand_to_chain(pair)
        np.testing.assert_allclose(chain.a, [-2.0, 2.0], atol=1e-13)
        np.testing.assert_allclose(chain.rho, [-1.0], atol=1e-13)

    def test_determinant_built_pairs(self):
        # build (d0, d1) as trailing-block determinants of S - E and make
        # sure the cascade returns the generating chain
        rng = np.random.default_rng(10)
        for _ in range(20):
            K = int(rng.integers(1, 9))
            chain = random_chain(K, rng, "mixed")
            dense = chain.to_dense()
            # det(S - E) = prod_i (lambda_i - E) = (-1)^deg prod_i (E - lambda_i)
            d0 = ((-1.0) ** (K + 1) * np.polynomial.polynomial.polyfromroots(
                np.linalg.eigvals(dense))).real
            d1 = ((-1.0) ** K * np.polynomial.polynomial.polyfromroots(
                np.linalg.eigvals(dense[1:, 1:]))).real
            got = expand_to_chain(CharPolyPair(d0, d1))
            # eigenvalue rounding is amplified by the division cascade at
            # deep K (hence the extended-precision path inside reconstruct)
            assert _max_rel_err(got, chain) < 1e-5

    def test_degree_mismatch(self):
        with pytest.raises(MalformedPair):
            expand_to_chain(CharPolyPair([1.0, 2.0], [1.0, -1.0]))

    def test_zero_d1(self):
        with pytest.raises(MalformedPair):
            expand_to_chain(CharPolyPair([-3.0, 0.0, 1.0], [0.0, 0.0]))

    def test_breakdown_reports_prefix(self):
        # rho_1 = 0 decouples the last level: G is reducible and the cascade
        # must stop after recovering (a_0, a_1, rho_0)
        chain = TridiagonalChain([1.0, -0.5, 2.0], [1.5, 0.0])
        probes = choose_probe_energies(5, probe_window(chain),
                                       real_poles(chain), 0.1)
        with pytest.raises(ChainBreakdown) as exc:
            reconstruct(samples_from_chain(chain, probes), 2)
        assert exc.value.level == 1
        prefix = exc.value.recovered_prefix
        np.testing.assert_allclose(prefix.a, [1.0, -0.5], atol=1e-6)
        np.testing.assert_allclose(prefix.rho, [1.5], atol=1e-6)


class TestReconstruct:
    def test_k0(self):
        rep = reconstruct([GSample(1.0, 3.0)], 0)
        np.testing.assert_allclose(rep.chain.a, [4.0], atol=1e-14)
        assert rep.chain.K == 0
        assert rep.hermitizable == ()

    def test_paper_chain_report(self):
        rep = reconstruct(PAPER_SAMPLES, 1,
                          holdout=[GSample(-2.0, g_function(
                              TridiagonalChain([-2.0, 2.0], [-1.0]), -2.0))])
        assert rep.hermitizable == (False,)
        assert rep.residual_max < 1e-10
        assert rep.condition_estimate >= 1.0

    def test_roundtrip_positive(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            K = int(rng.integers(2, 11))
            chain = random_chain(K, rng, "positive")
            probes = choose_probe_energies(
                2 * K + 1, probe_window(chain, pad=0.5),
                real_poles(chain), 0.05)
            rep = reconstruct(samples_from_chain(chain, probes), K)
            assert _max_rel_err(rep.chain, chain) <= 1e-7

    def test_roundtrip_mixed_sign(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            K = int(rng.integers(2, 7))
            chain = random_chain(K, rng, "mixed")
            probes = choose_probe_energies(
                2 * K + 1, probe_window(chain, pad=0.5),
                real_poles(chain), 0.05)
            rep = reconstruct(samples_from_chain(chain, probes), K)
            assert _max_rel_err(rep.chain, chain) <= 1e-7
            assert rep.hermitizable == tuple(r >= 0 for r in chain.rho)

    def test_probe_set_independence(self):
        rng = np.random.default_rng(13)
        chain = random_chain(6, rng, "positive")
        lo, hi = probe_window(chain, pad=0.5)
        poles = real_poles(chain)
        p1 = choose_probe_energies(13, (lo, hi), poles, 0.05)
        p2 = choose_probe_energies(15, (lo - 0.3, hi + 0.4), poles, 0.07)[:13]
        c1 = reconstruct(samples_from_chain(chain, p1), 6).chain
        c2 = reconstruct(samples_from_chain(chain, p2), 6).chain
        assert _max_rel_err(c1, c2) <= 1e-7

    def test_shift_equivariance(self):
        rng = np.random.default_rng(14)
        chain = random_chain(4, rng, "positive")
        shifted = chain.shifted(5.0)
        probes = choose_probe_energies(9, probe_window(chain, pad=0.5),
                                       real_poles(chain), 0.05)
        rep0 = reconstruct(samples_from_chain(chain, probes), 4)
        rep5 = reconstruct(samples_from_chain(shifted, probes + 5.0), 4)
        np.testing.assert_allclose(rep5.chain.a, rep0.chain.a + 5.0,
                                   rtol=1e-7, atol=1e-7)
        np.testing.assert_allclose(rep5.chain.rho, rep0.chain.rho, rtol=1e-6)
