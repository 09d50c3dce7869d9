import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from admiss.system_model import (
    AtomicMeasure,
    DiagonalSystem,
    SectorSpec,
    dual_system,
    heat_system,
    load_system,
    max_sector_angle,
    sector_check,
    spectral_measure,
)


def test_heat_eigenvalues():
    sys2 = heat_system(2)
    assert sys2.eigenvalues[0] == pytest.approx(-math.pi**2)
    assert sys2.eigenvalues[1] == pytest.approx(-4 * math.pi**2)
    assert sys2.coeffs == (1.0, 1.0)
    assert sys2.q == 2.0


def test_heat_rejects_nonpositive_modes():
    with pytest.raises(ValueError):
        heat_system(0)


def test_with_modes_regenerates_heat():
    assert heat_system(5).with_modes(7).modes == 7
    plain = DiagonalSystem((-1 + 0j,), (1 + 0j,), 2.0)
    with pytest.raises(ValueError):
        plain.with_modes(3)


def test_system_validation():
    with pytest.raises(ValueError):
        DiagonalSystem((-1 + 0j,), (1 + 0j, 2 + 0j), 2.0)
    with pytest.raises(ValueError):
        DiagonalSystem((), (), 2.0)
    with pytest.raises(ValueError):
        DiagonalSystem((1 + 0j,), (1 + 0j,), 2.0)  # Re lambda must be < 0
    with pytest.raises(ValueError):
        DiagonalSystem((-1 + 0j,), (1 + 0j,), 0.5)


def test_spectral_measure_sign_flip_and_masses():
    sys3 = DiagonalSystem((-1 + 2j, -3 + 0j), (2 + 0j, 1j), 3.0)
    mu = spectral_measure(sys3)
    assert np.allclose(mu.locations, [1 - 2j, 3 + 0j])
    assert np.allclose(mu.masses, [8.0, 1.0])


def test_atomic_measure_immutability():
    mu = AtomicMeasure(np.array([1 + 0j]), np.array([1.0]))
    with pytest.raises(ValueError):
        mu.masses[0] = 2.0


def test_atomic_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure(np.array([-1 + 0j]), np.array([1.0]))
    with pytest.raises(ValueError):
        AtomicMeasure(np.array([1 + 0j]), np.array([-1.0]))


def test_sector_check_heat_true_any_angle():
    mu = spectral_measure(heat_system(50))
    for theta in (0.1, 0.5, 1.2):
        ok, witness = sector_check(mu, SectorSpec(theta))
        assert ok
        assert witness.imag == 0


def test_sector_check_violation_witness():
    mu = AtomicMeasure(np.array([1 + 0j, 1 + 5j]), np.array([1.0, 1.0]))
    ok, witness = sector_check(mu, SectorSpec(math.pi / 4))
    assert not ok
    assert witness == 1 + 5j


def test_sector_check_origin_atom():
    mu = AtomicMeasure(np.array([0j]), np.array([1.0]))
    ok, witness = sector_check(mu, SectorSpec(1.0))
    assert not ok and witness == 0
    assert max_sector_angle(mu) == math.inf


def test_max_sector_angle_ignores_zero_mass():
    mu = AtomicMeasure(np.array([1 + 0j, 1j]), np.array([1.0, 0.0]))
    assert max_sector_angle(mu) == 0.0


def test_dual_system_exponent():
    sys3 = DiagonalSystem((-1 + 0j, -2 + 0j), (1 + 0j, 1 + 0j), 3.0)
    dual = dual_system(sys3, [2 + 0j, 3 + 0j])
    assert dual.q == pytest.approx(1.5)
    assert dual.coeffs == (2 + 0j, 3 + 0j)
    with pytest.raises(ValueError):
        dual_system(DiagonalSystem((-1 + 0j,), (1 + 0j,), 1.0), [1 + 0j])
    with pytest.raises(ValueError):
        dual_system(sys3, [1 + 0j])


@given(st.floats(min_value=1.01, max_value=50))
def test_dual_exponent_involution(q):
    sys1 = DiagonalSystem((-1 + 0j,), (1 + 0j,), q)
    twice = dual_system(dual_system(sys1, [1 + 0j]), [1 + 0j])
    assert twice.q == pytest.approx(q, rel=1e-12)


def test_load_system_explicit_and_generator(tmp_path):
    config = {"eigenvalues": [[-1, 2]], "coeffs": [[0, 1]], "q": 2}
    sys1 = load_system(config)
    assert sys1.eigenvalues == (-1 + 2j,)
    assert sys1.coeffs == (1j,)
    assert load_system(json.dumps(config)).eigenvalues == (-1 + 2j,)
    assert load_system({"generator": "heat1d", "modes": 4}).modes == 4
    with pytest.raises(ValueError):
        load_system({"generator": "wave"})
    with pytest.raises(ValueError):
        load_system({"eigenvalues": [[-1, 0]], "q": 2})
