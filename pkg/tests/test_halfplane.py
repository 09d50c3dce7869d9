import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from admiss.halfplane import (
    CarlesonSquare,
    balayage,
    balayage_integral,
    balayage_norm,
    blaschke_products,
    measure_on_square,
    pseudo_hyperbolic,
    strip_masses,
)
from admiss.system_model import AtomicMeasure, heat_system, spectral_measure

DELTA_1 = AtomicMeasure(np.array([1 + 0j]), np.array([1.0]))


def test_square_membership_delta1():
    sq3 = CarlesonSquare(0.0, 3.0)
    assert measure_on_square(DELTA_1, sq3) == 1.0
    assert measure_on_square(DELTA_1, sq3, part="right_half") == 0.0  # 1 < 3/2
    sq15 = CarlesonSquare(0.0, 1.5)
    assert measure_on_square(DELTA_1, sq15, part="right_half") == 1.0


def test_square_boundary_warning():
    sq = CarlesonSquare(0.0, 1.0)  # atom exactly on the x = length edge
    with pytest.warns(UserWarning, match="half-open"):
        assert measure_on_square(DELTA_1, sq) == 0.0


def test_strip_masses_delta1():
    masses = dict(strip_masses(DELTA_1, -3, 3))
    assert masses[0] == 1.0  # 2^(-1) < 1 <= 2^0
    assert sum(masses.values()) == 1.0


def test_strip_masses_exact_dyadic_boundary():
    m = AtomicMeasure(np.array([0.5 + 0j]), np.array([1.0]))
    masses = dict(strip_masses(m, -3, 3))
    assert masses[-1] == 1.0  # Re z = 2^(-1) belongs to S_(-1)


def test_strip_masses_heat_counts():
    mu = spectral_measure(heat_system(1000))
    for n, mass in strip_masses(mu, 0, 20):
        count = sum(1 for k in range(1, 1001)
                    if 2.0 ** (n - 1) < k * k * math.pi**2 <= 2.0**n)
        assert mass == count


@given(st.integers(min_value=-10, max_value=10))
@settings(max_examples=30)
def test_strip_partition_property(shift):
    # strips over a wide range partition the positive-real-part atoms
    locs = np.array([0.3 * 2.0**shift, 1 + 1j, 7 - 2j, 0 + 1j])
    masses = np.array([1.0, 2.0, 3.0, 4.0])
    m = AtomicMeasure(locs, masses)
    total = sum(v for _, v in strip_masses(m, -40, 40))
    expect = masses[locs.real > 0].sum()
    assert total == pytest.approx(expect)


def test_balayage_delta1_at_zero():
    assert balayage(DELTA_1, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)


def test_balayage_rejects_boundary_atom():
    m = AtomicMeasure(np.array([1j]), np.array([1.0]))
    with pytest.raises(ValueError):
        balayage(m, 0.0)


def test_balayage_integral_conserves_mass():
    m = AtomicMeasure(np.array([1 + 0j, 2 + 3j, 0.1 - 5j]), np.array([1.0, 2.5, 0.5]))
    assert balayage_integral(m) == pytest.approx(m.total_mass, rel=1e-10)


def test_balayage_norm_delta1():
    # || (1/pi) / (1 + t^2) ||_2 = (1/pi) sqrt(pi/2)
    val, _ = balayage_norm(DELTA_1, 0.0, 2.0)
    assert val == pytest.approx(math.sqrt(math.pi / 2) / math.pi, rel=1e-10)


def test_balayage_norm_scaling():
    # delta_R scales the a = 0, s = 2 norm by R^(-1/2)
    base, _ = balayage_norm(DELTA_1, 0.0, 2.0)
    for big_r in (4.0, 9.0):
        m = AtomicMeasure(np.array([big_r + 0j]), np.array([1.0]))
        val, _ = balayage_norm(m, 0.0, 2.0)
        assert val == pytest.approx(base / math.sqrt(big_r), rel=1e-9)


def test_balayage_norm_divergence_detection():
    val, diag = balayage_norm(DELTA_1, -1.0, 2.0)  # |t|^(-2) at 0
    assert val == math.inf and diag["divergent_end"] == "t=0"
    val, diag = balayage_norm(DELTA_1, 2.0, 2.0)  # decay t^0 at infinity
    assert val == math.inf and diag["divergent_end"] == "t=inf"


def test_pseudo_hyperbolic_hand_values():
    assert pseudo_hyperbolic(1, 2) == pytest.approx(1 / 3, rel=1e-15)
    assert pseudo_hyperbolic(1, 3) == pytest.approx(1 / 2, rel=1e-15)


@given(st.floats(min_value=0.05, max_value=20), st.floats(min_value=-20, max_value=20),
       st.floats(min_value=0.05, max_value=20), st.floats(min_value=-20, max_value=20))
@settings(max_examples=100)
def test_pseudo_hyperbolic_symmetry_and_range(x1, y1, x2, y2):
    z, w = complex(x1, y1), complex(x2, y2)
    d = pseudo_hyperbolic(z, w)
    assert d == pytest.approx(pseudo_hyperbolic(w, z), rel=1e-12)
    assert 0 <= d < 1


def test_pseudo_hyperbolic_rejects_left_halfplane():
    with pytest.raises(ValueError):
        pseudo_hyperbolic(-1, 1)


def test_blaschke_two_points():
    products, _ = blaschke_products([1, 2])
    assert products[0] == pytest.approx(1 / 3, rel=1e-15)
    assert products[1] == pytest.approx(1 / 3, rel=1e-15)


def test_blaschke_heat_k3():
    pts = [k * k * math.pi**2 for k in (1, 2, 3)]
    products, _ = blaschke_products(pts)
    assert products[0] == pytest.approx(12 / 25, rel=1e-14)


def test_blaschke_repeated_points_degenerate():
    with pytest.warns(UserWarning, match="repeated"):
        products, diag = blaschke_products([1, 1])
    assert diag["degenerate"]
    assert products[0] == 0.0


def test_blaschke_diagnostics_shape():
    products, diag = blaschke_products([1, 2, 4, 8])
    assert len(diag["min_factor"]) == 4
    assert (products > 0).all()
    assert diag["summability_proxy"] > 0


@given(st.lists(st.tuples(st.floats(min_value=0.1, max_value=10),
                          st.floats(min_value=-5, max_value=5),
                          st.floats(min_value=0.0, max_value=2)),
                min_size=1, max_size=8))
@settings(max_examples=50)
def test_square_mass_monotone_under_atom_addition(atoms):
    sq = CarlesonSquare(0.0, 8.0)
    running = 0.0
    for i in range(1, len(atoms) + 1):
        m = AtomicMeasure.from_atoms([(complex(x, y), mass) for x, y, mass in atoms[:i]])
        val = measure_on_square(m, sq)
        assert val >= running - 1e-12
        running = val
