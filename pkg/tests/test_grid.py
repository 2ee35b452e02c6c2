import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from decolemma.errors import (
    LengthMismatch,
    NonEquidistantSpectrum,
    NonFiniteValue,
    ValidationError,
)
from decolemma.grid import AffineEnergyMap, grid_from_energies, make_uniform_grid, sample


def test_small_grid_points():
    assert_array_equal(make_uniform_grid(4).points, [0, 0.25, 0.5, 0.75, 1.0])
    assert_array_equal(make_uniform_grid(1).points, [0, 1])


def test_large_grid_spacing():
    g = make_uniform_grid(1000)
    assert len(g.points) == 1001
    assert g.spacing == 0.001
    assert g.points[0] == 0 and g.points[-1] == 1


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_rejects_bad_interval_count(bad):
    with pytest.raises(ValidationError):
        make_uniform_grid(bad)


@given(st.integers(min_value=1, max_value=5000))
def test_spacing_exact(n):
    pts = make_uniform_grid(n).points
    assert len(pts) == n + 1
    assert pts[0] == 0 and pts[-1] == 1
    # i/N computed directly equals the stored points, so the spacing is exactly 1/N
    assert_array_equal(pts, np.arange(n + 1) / n)


def test_grid_from_energies_unit_ladder():
    g, m = grid_from_energies([0, 1, 2, 3], hbar=1.0)
    assert g.n_intervals == 3
    assert m.scale == pytest.approx(1 / 3)
    assert_allclose(m.to_unit([0, 1, 2, 3]), g.points, atol=1e-15)


def test_grid_from_energies_offset():
    g, m = grid_from_energies([5.0, 5.1, 5.2], hbar=1.0)
    assert g.n_intervals == 2
    assert m.offset == 5.0
    assert_allclose(m.to_unit([5.0, 5.1, 5.2]), [0, 0.5, 1], atol=1e-12)


def test_grid_from_energies_rejects_uneven():
    with pytest.raises(NonEquidistantSpectrum) as info:
        grid_from_energies([0, 1, 2.5], tolerance=1e-9)
    assert info.value.max_deviation > 1e-9


@pytest.mark.parametrize("energies", [[1.0], [0, 0, 1], [0, 2, 1]])
def test_grid_from_energies_rejects_non_increasing(energies):
    with pytest.raises(ValidationError):
        grid_from_energies(energies)


def test_tolerance_is_configurable():
    energies = [0.0, 1.0, 2.0 + 1e-7, 3.0]
    with pytest.raises(NonEquidistantSpectrum):
        grid_from_energies(energies)
    g, _ = grid_from_energies(energies, tolerance=1e-6)
    assert g.n_intervals == 3


@given(
    st.floats(-1e3, 1e3),
    st.floats(1e-3, 1e3),
    st.integers(1, 200),
    st.floats(0.1, 10),
)
def test_energy_map_round_trip(offset, gap, n, hbar):
    energies = offset + gap * np.arange(n + 1)
    g, m = grid_from_energies(energies, hbar=hbar)
    back = m.to_energy(g.points)
    scale = np.maximum(np.abs(energies), gap)
    assert np.all(np.abs(back - energies) <= 1e-12 * scale * max(n, 1))


def test_time_conversion_matches_phases():
    g, m = grid_from_energies(2.0 + 0.5 * np.arange(11), hbar=0.7)
    t_phys = 3.3
    tau = m.dimensionless_time(t_phys)
    # (w_i - w_j) t / hbar == (x_i - x_j) tau
    assert_allclose(0.5 * 10 * t_phys / 0.7, tau)
    assert_allclose(m.physical_time(tau), t_phys)


def test_energy_map_rejects_nonpositive_scale():
    with pytest.raises(ValidationError):
        AffineEnergyMap(0.0, 0.0)


def test_sample_constant():
    sf = sample(make_uniform_grid(2), [1, 1, 1])
    assert_array_equal(sf.values, [1, 1, 1])
    assert sf.is_real


def test_sample_length_mismatch():
    with pytest.raises(LengthMismatch):
        sample(make_uniform_grid(2), [1, 1])


def test_sample_non_finite():
    with pytest.raises(NonFiniteValue) as info:
        sample(make_uniform_grid(2), [1, np.nan, 1])
    assert info.value.index == 1


def test_sample_is_immutable():
    sf = sample(make_uniform_grid(2), [1, 2, 3])
    with pytest.raises(ValueError):
        sf.values[0] = 5
