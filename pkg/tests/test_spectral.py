import numpy as np
import pytest

from bitorsion.circle import CircleModel, build_discrete, make_circle_model
from bitorsion.errors import (
    ResolutionError,
    StencilMismatchError,
    ThetaNotZeroError,
    ZeroModeError,
)
from bitorsion.spectral import (
    bz_compare,
    conjugation_isospectral_check,
    de_rham_map,
    milnor_from_model,
    morse_from_potential,
    rs_torsion,
    small_spectrum_dims,
    spectral_cut,
    theorem33_experiment,
)


class TestRsTorsion:
    def test_cut_independence(self):
        """Prop-style: identical across admissible cuts."""
        model = make_circle_model(2.0, f=("cos", 1))
        vals = [rs_torsion(model, cut=a) for a in (0.0, 0.5, 2.0, 5.0)]
        for v in vals[1:]:
            assert abs(v - vals[0]) <= 1e-10 * abs(vals[0])

    def test_exact_value(self):
        lam = 2.0
        model = make_circle_model(lam)
        assert rs_torsion(model) == pytest.approx(lam / (1 - lam) ** 2)

    def test_gy_matches_exact(self):
        model = make_circle_model(2.0)
        assert rs_torsion(model, method="gy") == pytest.approx(
            rs_torsion(model, method="exact"), rel=1e-9
        )

    def test_trivial_holonomy_finite(self):
        """Zero-mode bookkeeping: band holds one mode per degree, value finite."""
        model = make_circle_model(1.0)
        value = rs_torsion(model, cut=0.5)
        assert np.isfinite(value) and value != 0

    def test_discrete_method(self):
        model = make_circle_model(2.0, phi=("sin", 0.3), f=("cos", 1))
        ref = rs_torsion(make_circle_model(2.0))
        got = rs_torsion(model, cut=0.5, method="discrete", grid_sizes=(64, 128, 256))
        assert abs(got - ref) <= 1e-3 * abs(ref)

    def test_rank_two_product(self):
        model = CircleModel(np.diag([2.0, 3.0]))
        expected = (2.0 / (1 - 2.0) ** 2) * (3.0 / (1 - 3.0) ** 2)
        assert rs_torsion(model) == pytest.approx(expected)

    def test_non_diagonal_holonomy(self):
        """A diagonalizable non-diagonal holonomy goes through the channel split."""
        from dataclasses import replace

        rng = np.random.default_rng(5)
        p = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) + 2 * np.eye(2)
        lam_mat = p @ np.diag([2.0, 0.5 + 0.8j]) @ np.linalg.inv(p)
        model = replace(make_circle_model(2.0, f=("cos", 1)), holonomy=lam_mat)
        expected = (2.0 / (1 - 2.0) ** 2) * ((0.5 + 0.8j) / (1 - (0.5 + 0.8j)) ** 2)
        assert rs_torsion(model) == pytest.approx(expected, rel=1e-10)
        assert bz_compare(model) == pytest.approx(1.0, abs=1e-10)


class TestAnomalyInvariance:
    def test_gy_route(self):
        base = rs_torsion(make_circle_model(2.0), method="exact")
        wavy = rs_torsion(make_circle_model(2.0, phi=("sin", 0.3)), method="gy")
        assert abs(wavy - base) <= 1e-6 * abs(base)


class TestSmallSpectrum:
    def test_witten_counts_single_well(self):
        model = make_circle_model(2.0, f=("cos", 1))
        r10 = small_spectrum_dims(model, 10.0, 256)
        assert r10.counts == (1, 1)
        r5 = small_spectrum_dims(model, 5.0, 256)
        assert abs(r10.band_trace) < abs(r5.band_trace)

    def test_undeformed_counts_via_exact_oracle(self):
        """T = 0 band count from the closed-form family: one mode inside 0.5."""
        from bitorsion.circle import exact_spectrum_circle

        fam = exact_spectrum_circle(2.0)
        expected = fam.count_in_disk(0.5)
        assert expected == 1
        rep = small_spectrum_dims(make_circle_model(2.0, f=("cos", 1)), 0.0, 128, threshold=0.5)
        assert rep.counts == (expected, expected)

    def test_threshold_hugging_raises(self):
        """At T = 0 the n = +-1 modes sit at 1.012: threshold 1 is unresolved."""
        model = make_circle_model(2.0, f=("cos", 1))
        with pytest.raises(ResolutionError):
            small_spectrum_dims(model, 0.0, 128, threshold=1.0)

    def test_two_wells(self):
        model = make_circle_model(2.0, f=("cos", 2))
        rep = small_spectrum_dims(model, 12.0, 256)
        assert rep.counts == (2, 2)


class TestConjugation:
    def test_zero_deformation(self):
        model = make_circle_model(2.0, f=("cos", 1))
        assert conjugation_isospectral_check(model, 0.0, 64) < 1e-12

    def test_matched_stencil_similarity(self):
        model = make_circle_model(2.0, f=("cos", 1))
        assert conjugation_isospectral_check(model, 5.0, 128) < 1e-10

    def test_mismatched_stencil_surfaces_error(self):
        model = make_circle_model(2.0, f=("cos", 1))
        with pytest.raises(StencilMismatchError) as info:
            conjugation_isospectral_check(model, 5.0, 128, stencil="node")
        assert info.value.mismatch > 1e-10


class TestDeRham:
    def test_constant_zero_form(self):
        model = make_circle_model(1.0, f=("cos", 1))
        img = de_rham_map(model, 64, zero_form=np.full(64, 2.5 + 0.0j))
        assert np.allclose(img.cochain0, 2.5)

    def test_chain_map_identity(self):
        """P(dg) = delta P(g): exact telescoping for this stencil."""
        model = make_circle_model(2.0, f=("cos", 1))
        img = de_rham_map(model, 128)
        assert img.chain_defect < 1e-12

    def test_harmonic_direction_pairs(self):
        """Trivial holonomy: the constant 1-form has a nonzero degree-1 cochain."""
        model = make_circle_model(1.0, f=("cos", 1))
        img = de_rham_map(model, 64, one_form=np.ones(64, dtype=complex))
        assert abs(img.cochain1[0]) > 1.0

    def test_milnor_from_model_value(self):
        lam = 2.0
        assert milnor_from_model(make_circle_model(lam, f=("cos", 1))) == pytest.approx(
            lam / (1 - lam) ** 2
        )

    def test_morse_from_potential_two_wells(self):
        ms = morse_from_potential(make_circle_model(2.0, f=("cos", 2)))
        assert ms.morse_counts() == [2, 2]

    def test_unaligned_critical_point_raises(self):
        """Odd grid: the minimum at pi falls between nodes."""
        from bitorsion.errors import GridError

        model = make_circle_model(2.0, f=("cos", 1))
        with pytest.raises(GridError):
            de_rham_map(model, 63, zero_form=np.ones(63, dtype=complex))


class TestTheorem33:
    def test_trend_single_case(self):
        model = make_circle_model(2.0, f=("cos", 1))
        rows = theorem33_experiment(model, [4.0, 8.0], 256)
        assert rows[0].band_dims == (1, 1)
        assert rows[1].abs_log_ratio < rows[0].abs_log_ratio
        assert abs(rows[1].ratio - 1.0) < 0.05

    def test_unresolved_gap_raises(self):
        """T = 0 sits outside the asymptotic regime: modes hug the threshold."""
        model = make_circle_model(2.0, f=("cos", 1))
        with pytest.raises(ResolutionError):
            theorem33_experiment(model, [0.0], 128)

    def test_flat_windows_keep_wells(self):
        """Plateauing phi near critical points must not flatten the T f wells."""
        model = make_circle_model(2.0, phi=("sin", 0.25), f=("cos", 1), flat_windows=True)
        rows = theorem33_experiment(model, [4.0, 8.0], 256)
        assert rows[0].band_dims == (1, 1)
        assert rows[1].abs_log_ratio < rows[0].abs_log_ratio


class TestCutErrors:
    def test_eigenvalue_on_cut_rejected(self):
        """|mu_{+-1}| = 1.0122 at holonomy 2: a cut there is ambiguous."""
        from bitorsion.circle import exact_spectrum_circle
        from bitorsion.errors import AmbiguousCutError

        model = make_circle_model(2.0)
        bad_cut = abs(exact_spectrum_circle(2.0).mu(1))
        with pytest.raises(AmbiguousCutError):
            rs_torsion(model, cut=bad_cut)


class TestBzCompare:
    @pytest.mark.parametrize("lam", [2.0, np.exp(1j * np.pi / 5)])
    def test_unity(self, lam):
        model = make_circle_model(lam, f=("cos", 1))
        assert abs(bz_compare(model) - 1.0) < 1e-8

    def test_trivial_holonomy_rejected(self):
        with pytest.raises(ZeroModeError):
            bz_compare(make_circle_model(1.0, f=("cos", 1)))

    def test_nonzero_theta_rejected(self):
        model = make_circle_model(2.0, phi=("sin", 0.3), f=("cos", 1))
        with pytest.raises(ThetaNotZeroError):
            bz_compare(model)


class TestTwoBandStructure:
    def test_band_separation_grows(self):
        model = make_circle_model(2.0, f=("cos", 1))
        reports = [small_spectrum_dims(model, t, 256) for t in (5.0, 10.0, 20.0)]
        traces = [abs(r.band_trace) for r in reports]
        mins = [r.large_band_min for r in reports]
        assert traces[1] < traces[0]
        assert mins[0] < mins[1] < mins[2]

    def test_spectral_cut_dims(self):
        model = make_circle_model(2.0, f=("cos", 1))
        from bitorsion.circle import witten_deform

        ch = build_discrete(witten_deform(model, 8.0), 256).channels[0]
        cut = spectral_cut(ch, 1.0, clearance_frac=0.1)
        assert cut.dims == (1, 1)
        assert cut.complement0.size == 255
        assert cut.complement_min_modulus() > 10.0

    def test_invariant_subspace_on_witten_laplacian(self):
        """Unit-disk invariant subspace of the deformed Laplacian has Morse-count dimension."""
        from bitorsion.circle import witten_deform
        from bitorsion.numkernel import DiskPredicate, invariant_subspace

        model = make_circle_model(2.0, f=("cos", 2))
        ch = build_discrete(witten_deform(model, 10.0), 256).channels[0]
        basis = invariant_subspace(ch.sym_laplacian(0), DiskPredicate(1.0))
        assert basis.shape[1] == 2  # M_0 for two wells
