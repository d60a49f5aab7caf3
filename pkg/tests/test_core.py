"""Array layout generation, RF spec invariants, beam command validation."""

import math

import numpy as np
import pytest

import skybeam as sb
from skybeam.errors import InvalidArgumentError

from conftest import brute_force_disk_count


def test_disk_grid_29_elements():
    layout = sb.make_planar_array(0.3, 0.05)
    assert layout.n_active == 29
    assert layout.n_active == brute_force_disk_count(0.3, 0.05)


@pytest.mark.parametrize("diameter,spacing", [
    (1.0, 0.3), (2.5, 0.11), (0.77, 0.05), (10.0, 0.33),
])
def test_disk_grid_matches_enumeration(diameter, spacing):
    layout = sb.make_planar_array(diameter, spacing)
    assert layout.n_active == brute_force_disk_count(diameter, spacing)


def test_element_edge_lengths():
    # 3 GHz tile is a ~5 cm square, 1 GHz a ~15 cm square
    assert sb.element_size_for(3e9) == pytest.approx(0.04997, abs=5e-5)
    assert sb.element_size_for(1e9) == pytest.approx(0.1499, abs=1e-4)
    f = 2.2e9
    assert sb.element_size_for(f) == 0.5 * sb.SPEED_OF_LIGHT / f


def test_full_grid_fill_fraction_is_one():
    layout = sb.make_planar_array(0.9, 0.07)
    assert layout.fill_fraction == 1.0
    assert layout.n_active == layout.n_elements


def test_grid_positions_within_aperture_disk():
    layout = sb.make_planar_array(1.3, 0.09, fill_fraction=0.8, seed=3)
    active = layout.active_positions
    radial = np.hypot(active[:, 0], active[:, 1])
    assert radial.max() <= 0.5 * layout.aperture_diameter * (1 + 1e-12)
    assert np.all(active[:, 2] == 0.0)


def test_nearest_neighbor_distance_equals_spacing():
    layout = sb.make_planar_array(0.3, 0.05)
    pos = layout.active_positions
    dists = np.linalg.norm(pos[None, :, :] - pos[:, None, :], axis=-1)
    np.fill_diagonal(dists, np.inf)
    assert abs(dists.min() - 0.05) < 1e-9


def test_thinning_deterministic_and_seed_sensitive():
    a = sb.make_planar_array(2.0, 0.05, fill_fraction=0.5, seed=9)
    b = sb.make_planar_array(2.0, 0.05, fill_fraction=0.5, seed=9)
    c = sb.make_planar_array(2.0, 0.05, fill_fraction=0.5, seed=10)
    assert np.array_equal(a.fill_mask, b.fill_mask)
    assert not np.array_equal(a.fill_mask, c.fill_mask)


def test_thinning_hits_requested_fill_on_average():
    fills = [sb.make_planar_array(2.0, 0.05, 0.7, seed=s).fill_fraction
             for s in range(12)]
    assert np.mean(fills) == pytest.approx(0.7, abs=0.03)


def test_make_planar_array_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        sb.make_planar_array(0.0, 0.05)
    with pytest.raises(InvalidArgumentError):
        sb.make_planar_array(1.0, -0.1)
    with pytest.raises(InvalidArgumentError):
        sb.make_planar_array(0.04, 0.05)
    with pytest.raises(InvalidArgumentError):
        sb.make_planar_array(1.0, 0.05, fill_fraction=0.0)
    with pytest.raises(InvalidArgumentError):
        sb.make_planar_array(1.0, 0.05, fill_fraction=1.2)
    with pytest.raises(InvalidArgumentError):
        sb.element_size_for(0.0)


def test_rfspec_consistency():
    rf = sb.RfSpec.from_frequency(3e9)
    assert rf.wavelength * rf.frequency == pytest.approx(sb.SPEED_OF_LIGHT, rel=1e-12)
    assert rf.wavenumber * rf.wavelength == pytest.approx(2 * math.pi, rel=1e-13)
    rf2 = sb.RfSpec.from_wavelength(0.1)
    assert rf2.wavelength == 0.1
    with pytest.raises(InvalidArgumentError):
        sb.RfSpec.from_frequency(-1.0)
    with pytest.raises(InvalidArgumentError):
        sb.RfSpec(3e9, 0.2, 2 * math.pi / 0.2)  # wavelength does not match c/f


def test_layout_immutable():
    layout = sb.make_planar_array(0.3, 0.05)
    with pytest.raises(ValueError):
        layout.positions[0, 0] = 1.0
    with pytest.raises(ValueError):
        layout.fill_mask[0] = False


def test_beam_command_validation():
    phases = np.zeros(4)
    cmd = sb.BeamCommand(np.array([0.0, 0.0, 100.0]), 10.0, phases - 7.0)
    assert np.all((cmd.phases >= 0.0) & (cmd.phases < 2 * math.pi))
    with pytest.raises(InvalidArgumentError):
        sb.BeamCommand(np.array([0.0, 0.0, 100.0]), 0.0, phases)
    with pytest.raises(InvalidArgumentError):
        sb.BeamCommand(np.array([0.0, 0.0]), 1.0, phases)


def test_layout_thinned_subset():
    layout = sb.make_planar_array(1.0, 0.05)
    thin = layout.thinned(0.6, seed=5)
    assert thin.n_elements == layout.n_elements
    assert thin.n_active < layout.n_active
    assert np.all(layout.fill_mask[thin.fill_mask])
