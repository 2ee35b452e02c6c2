import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from decolemma.errors import HermiticityViolation, NonEquidistantSpectrum, ValidationError
from decolemma.generators import diagonal, gaussian_offdiag, generate, random_hermitian, two_level
from decolemma.model import (
    DiscreteModel,
    ZERO_MASS,
    equilibrium_value,
    evolve_and_check,
    expectation,
    expectation_series,
    frequency_profile,
    predict,
)
from decolemma.rlsum import DECOHERES, NO_DECOHERENCE, WINDOW_EMPTY

PI = math.pi


def double_sum(model, t):
    """Plain Python double loop over conj(rho_ij) O_ij exp(i (w_i - w_j) t / hbar)."""
    w, rho, obs = model.energies, model.rho, model.observable
    total = 0j
    for i in range(model.levels):
        for j in range(model.levels):
            total += np.conj(rho[i, j]) * obs[i, j] * np.exp(1j * (w[i] - w[j]) * t / model.hbar)
    return total


class TestValidation:
    def test_rejects_non_hermitian_rho(self):
        rho = np.array([[0.5, 0.3], [0.1, 0.5]])
        with pytest.raises(ValidationError):
            DiscreteModel([0, 1], rho, np.eye(2))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError):
            DiscreteModel([0, 1], np.eye(2), np.eye(2))

    def test_rejects_non_hermitian_observable(self):
        with pytest.raises(ValidationError):
            DiscreteModel([0, 1], np.eye(2) / 2, np.array([[0, 1], [0, 0]]))

    def test_rejects_unsorted_energies(self):
        with pytest.raises(ValidationError):
            DiscreteModel([1, 0], np.eye(2) / 2, np.eye(2))

    def test_positivity_on_demand(self):
        rho = np.array([[1.5, 0], [0, -0.5]])
        model = DiscreteModel([0, 1], rho, np.eye(2))
        with pytest.raises(ValidationError):
            model.check_positivity()
        assert gaussian_offdiag(51).check_positivity() >= -1e-8
        assert random_hermitian(12).check_positivity() >= -1e-8


class TestExpectation:
    def test_diagonal_model_constant(self):
        m = diagonal(10, seed=3)
        eq = equilibrium_value(m)
        for t in [0.0, 1.3, 77.0]:
            assert expectation(m, t) == pytest.approx(eq, abs=1e-12)

    def test_trace_at_zero(self):
        m = random_hermitian(9, seed=2)
        assert expectation(m, 0.0) == pytest.approx(np.trace(m.rho @ m.observable).real, abs=1e-10)

    def test_two_level_cosine(self):
        m = two_level(gap=0.7, hbar=1.3)
        for t in np.linspace(0, 30, 17):
            assert expectation(m, t) == pytest.approx(math.cos(0.7 * t / 1.3), abs=1e-14)
        assert equilibrium_value(m) == 0

    def test_maximally_mixed(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(6, 6))
        obs = a + a.T
        m = DiscreteModel(np.arange(6.0), np.eye(6) / 6, obs)
        assert equilibrium_value(m) == pytest.approx(np.trace(obs) / 6)

    def test_dimensionless_flag(self):
        m = random_hermitian(5, seed=1, spacing=0.5, hbar=2.0)
        # bandwidth 2, hbar 2: dimensionless t = t_phys
        assert expectation(m, 3.0, dimensionless=True) == pytest.approx(expectation(m, 3.0))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(-50, 50))
    def test_matches_double_sum(self, levels, seed, t):
        m = random_hermitian(levels, seed=seed)
        ref = double_sum(m, t)
        assert abs(ref.imag) <= 1e-8 * np.abs(m.kernel).sum()
        assert expectation(m, t) == pytest.approx(ref.real, abs=1e-12 * np.abs(m.kernel).sum())

    def test_hermiticity_violation_detected(self):
        m = random_hermitian(4, seed=0)
        # bypass validation to inject an anti-Hermitian defect
        bad = m.observable.copy()
        bad[0, 1] += 1j
        object.__setattr__(m, "observable", bad)
        m.__dict__.pop("kernel", None)
        with pytest.raises(HermiticityViolation):
            expectation(m, 0.3)

    def test_recurrence_of_series(self):
        m = random_hermitian(12, seed=4, spacing=0.25)
        t_rec = 2 * PI / 0.25
        times = np.linspace(0, 10, 23)
        assert_allclose(expectation_series(m, times + t_rec), expectation_series(m, times), atol=1e-8)


class TestProfile:
    def test_diagonal_model(self):
        m = diagonal(7)
        prof = frequency_profile(m)
        assert np.all(prof.bins == 0)
        assert prof.diagonal_part.real == pytest.approx(equilibrium_value(m))
        assert prof.sampled is None and prof.off_diagonal_mass == 0

    def test_two_level_single_bin(self):
        m = two_level()
        prof = frequency_profile(m)
        assert prof.n_bins == 1
        assert prof.bins[0] == pytest.approx(np.conj(m.rho[1, 0]) * m.observable[1, 0])

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_reconstruction(self, seed):
        m = random_hermitian(64, seed=seed, spacing=0.3, hbar=0.9)
        prof = frequency_profile(m)
        assert prof.n_bins == 63
        scale = np.abs(m.kernel).sum()
        for t in np.random.default_rng(seed).uniform(-100, 100, 16):
            assert abs(prof.reconstruct(t) - double_sum(m, t).real) <= 1e-10 * scale

    def test_bins_match_anti_diagonals(self):
        m = random_hermitian(6, seed=8)
        prof = frequency_profile(m)
        for d in range(1, 6):
            ref = sum(m.kernel[i, i - d] for i in range(d, 6))
            assert prof.bins[d - 1] == pytest.approx(ref, abs=1e-14)

    def test_non_equidistant(self):
        m = DiscreteModel([0.0, 1.0, 2.5], np.eye(3) / 3, np.eye(3))
        with pytest.raises(NonEquidistantSpectrum):
            frequency_profile(m)

    def test_time_maps(self):
        m = gaussian_offdiag(21, spacing=0.5, hbar=2.0)
        prof = frequency_profile(m)
        assert prof.recurrence_time == pytest.approx(2 * PI * 2.0 / 0.5)
        assert prof.physical_time(prof.to_profile_time(1.7)) == pytest.approx(1.7)
        # the profile grid recurrence 2 pi (N - 1) maps onto the physical recurrence
        assert prof.physical_time(2 * PI * 19) == pytest.approx(prof.recurrence_time)


class TestPredict:
    def test_gaussian_decoheres(self):
        m = gaussian_offdiag(201, seed=7)
        pr = predict(m)
        assert pr.status == DECOHERES
        lo, hi = pr.physical_window
        assert 0 < lo < hi
        assert pr.deviation_bound == pytest.approx(pr.verdict.predicted_bound * pr.off_diagonal_mass)

    def test_hundred_levels_too_coarse(self):
        # 101 levels: the best admissible P is below kappa = 10
        pr = predict(gaussian_offdiag(101, seed=0))
        assert pr.status == NO_DECOHERENCE and pr.verdict.reason == WINDOW_EMPTY

    def test_six_levels_window_empty(self):
        pr = predict(gaussian_offdiag(6, seed=1), kappa=10)
        assert pr.status == NO_DECOHERENCE and pr.verdict.reason == WINDOW_EMPTY

    def test_two_level_no_decoherence(self):
        pr = predict(two_level())
        assert pr.status == NO_DECOHERENCE and pr.verdict.reason == WINDOW_EMPTY

    def test_diagonal_trivial(self):
        pr = predict(diagonal(9))
        assert pr.status == DECOHERES and pr.verdict.reason == ZERO_MASS
        assert pr.deviation_bound == 0

    def test_non_equidistant_reported(self):
        m = DiscreteModel([0.0, 1.0, 2.5], np.full((3, 3), 1 / 3), np.eye(3))
        pr = predict(m)
        assert pr.status == NO_DECOHERENCE and pr.verdict.reason == "NonEquidistantSpectrum"

    @pytest.mark.parametrize("levels", [151, 201, 301])
    @pytest.mark.parametrize("seed", [0, 3, 11])
    def test_soundness_on_zoo(self, levels, seed):
        m = gaussian_offdiag(levels, seed=seed)
        pr = predict(m)
        assert pr.status == DECOHERES
        lo, hi = pr.physical_window
        check = evolve_and_check(m, np.linspace(lo, hi, 400), prediction=pr)
        assert check.max_deviation_in_window <= pr.deviation_bound


class TestEvolution:
    def test_diagonal_flat(self):
        m = diagonal(6)
        check = evolve_and_check(m, np.linspace(0, 20, 50))
        assert np.max(check.deviation) < 1e-12
        assert check.revival_time is None

    def test_two_level_oscillates(self):
        m = two_level()
        times = np.linspace(0, 4 * PI, 401)
        check = evolve_and_check(m, times)
        assert_allclose(check.series.values, np.cos(times), atol=1e-14)
        assert check.max_deviation_in_window is None
        # never settles: full amplitude keeps coming back
        assert check.revival_time is not None
        # |cos t| halves at pi/3 and is back above one half at 2 pi/3
        assert check.revival_time == pytest.approx(2 * PI / 3, abs=0.05)

    def test_gaussian_revival(self):
        m = gaussian_offdiag(201, seed=7)
        pr = predict(m)
        t_rec = pr.recurrence_time
        check = evolve_and_check(m, np.linspace(0, 1.25 * t_rec, 2048), prediction=pr)
        assert check.max_deviation_in_window <= pr.deviation_bound
        assert abs(check.revival_time - t_rec) <= 0.1 * t_rec

    def test_csv(self):
        import io

        check = evolve_and_check(two_level(), [0.0, 1.0])
        buf = io.StringIO()
        check.write_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "t_phys,expectation,deviation"
        assert lines[1] == "0,1,1"


def test_generate_by_name():
    assert generate("two-level").levels == 2
    assert generate("diagonal", levels=5).levels == 5
    a = generate("gaussian-offdiag", levels=31, seed=4)
    b = generate("gaussian-offdiag", levels=31, seed=4)
    assert np.array_equal(a.rho, b.rho) and np.array_equal(a.observable, b.observable)
    with pytest.raises(ValueError):
        generate("nope")
