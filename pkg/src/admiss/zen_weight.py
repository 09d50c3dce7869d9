"""Radial measures on [0, inf), the doubling condition, and the induced
time-domain weight w(t) = 2 pi * integral of exp(-2rt) against the measure.

The representable family is atoms plus a single power-law density
c * r^alpha dr (alpha > -1).  This covers the classical Hardy case (Dirac at
zero), the Bergman scale, and atom mixtures, all with closed-form weights.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

__all__ = [
    "RadialMeasure",
    "WeightFunction",
    "delta2_constant",
    "weight",
    "nu_square_mass",
    "load_radial_measure",
    "hardy",
    "bergman",
]

_QUAD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class RadialMeasure:
    """Positive measure on [0, inf): mass at 0, finitely many atoms at r > 0,
    and an optional power density c * r^alpha dr."""

    atom_at_zero: float = 0.0
    atoms: tuple[tuple[float, float], ...] = ()  # (r > 0, mass >= 0)
    density_alpha: float | None = None
    density_scale: float = 0.0

    def __post_init__(self):
        if self.atom_at_zero < 0:
            raise ValueError("mass at zero must be nonnegative")
        for r, m in self.atoms:
            if r <= 0:
                raise ValueError(f"atom radius must be positive, got {r}")
            if m < 0:
                raise ValueError(f"atom mass must be nonnegative, got {m}")
        if self.density_alpha is not None:
            if self.density_alpha <= -1:
                raise ValueError("density exponent must exceed -1 for integrability at 0")
            if self.density_scale < 0:
                raise ValueError("density scale must be nonnegative")

    @property
    def has_density(self) -> bool:
        return self.density_alpha is not None and self.density_scale > 0

    def cumulative(self, r) -> np.ndarray | float:
        """nu[0, r): includes the atom at 0, excludes atoms at radius >= r."""
        r = np.asarray(r, dtype=float)
        out = np.full(r.shape, self.atom_at_zero)
        for ra, ma in self.atoms:
            out = out + np.where(r > ra, ma, 0.0)
        if self.has_density:
            a = self.density_alpha
            out = out + self.density_scale * np.maximum(r, 0.0) ** (a + 1) / (a + 1)
        return out if out.shape else float(out)

    def is_trivial(self) -> bool:
        return self.atom_at_zero == 0 and not self.has_density and all(m == 0 for _, m in self.atoms)


def hardy() -> RadialMeasure:
    """Dirac mass at 0: the Hardy-space case, w(t) = 2 pi."""
    return RadialMeasure(atom_at_zero=1.0)


def bergman(alpha: float, scale: float = 1.0) -> RadialMeasure:
    """Power density r^alpha dr, alpha > -1: the weighted Bergman scale."""
    return RadialMeasure(density_alpha=alpha, density_scale=scale)


def delta2_constant(m: RadialMeasure, r_min: float = 2.0**-20, r_max: float = 2.0**40,
                    points_per_octave: int = 4) -> float:
    """Supremum of nu[0, 2r) / nu[0, r) over a geometric grid.

    Returns inf when nu[0, r) vanishes while nu[0, 2r) does not (the doubling
    condition fails).  For the representable family the ratio is eventually
    constant at both ends, so the default grid span is conclusive.
    """
    if m.is_trivial():
        raise ValueError("doubling ratio undefined for the zero measure")
    n_oct = int(math.ceil(math.log2(r_max / r_min)))
    r = r_min * 2.0 ** (np.arange(n_oct * points_per_octave + 1) / points_per_octave)
    lower = np.asarray(m.cumulative(r))
    upper = np.asarray(m.cumulative(2 * r))
    if ((lower == 0) & (upper > 0)).any():
        return math.inf
    valid = lower > 0
    if not valid.any():
        return 1.0
    return float((upper[valid] / lower[valid]).max())


@dataclass(frozen=True)
class WeightFunction:
    """Evaluation rule for w(t), t > 0, with closed-form components.

    provenance is "hardy" for a pure Dirac at 0, "bergman-<alpha>" for a pure
    power density, "mixture" for closed-form sums, "quadrature" when the
    fallback integrator produced the values.
    """

    measure: RadialMeasure
    provenance: str

    def __call__(self, t) -> np.ndarray | float:
        t = np.asarray(t, dtype=float)
        if t.size and t.min() <= 0:
            raise ValueError("weight is defined for t > 0")
        m = self.measure
        out = np.full(t.shape, 2 * math.pi * m.atom_at_zero)
        for r, mass in m.atoms:
            out = out + 2 * math.pi * mass * np.exp(-2 * r * t)
        if m.has_density:
            a = m.density_alpha
            out = out + 2 * math.pi * m.density_scale * gamma(a + 1) / (2 * t) ** (a + 1)
        return out if out.shape else float(out)

    def by_quadrature(self, t: float) -> float:
        """Adaptive-quadrature evaluation, used to cross-check the closed forms."""
        m = self.measure
        total = 2 * math.pi * m.atom_at_zero
        for r, mass in m.atoms:
            total += 2 * math.pi * mass * math.exp(-2 * r * t)
        if m.has_density:
            a = m.density_alpha
            r_cap = max(1.0, -math.log(1e-16) / (2 * t))
            val, _ = quad(lambda r: math.exp(-2 * r * t) * r**a, 0, r_cap,
                          epsabs=_QUAD_ABS_TOL, limit=200)
            total += 2 * math.pi * m.density_scale * val
        return total

    def poly_exp_moment(self, power: float, decay_rate: float) -> float:
        """Closed form for integral of t^power * exp(-decay_rate * t) * w(t) dt.

        Returns inf (with no exception) when a component makes the integral
        diverge at t -> 0; the t -> inf end always converges for decay_rate > 0.
        """
        if decay_rate <= 0:
            raise ValueError("decay rate must be positive")
        m = self.measure
        total = 0.0
        if m.atom_at_zero > 0 or any(mass > 0 for _, mass in m.atoms):
            if power <= -1:
                return math.inf
        if m.atom_at_zero > 0:
            total += 2 * math.pi * m.atom_at_zero * gamma(power + 1) / decay_rate ** (power + 1)
        for r, mass in m.atoms:
            if mass > 0:
                total += 2 * math.pi * mass * gamma(power + 1) / (decay_rate + 2 * r) ** (power + 1)
        if m.has_density:
            a = m.density_alpha
            eff = power - (a + 1)
            if eff <= -1:
                return math.inf
            total += (2 * math.pi * m.density_scale * gamma(a + 1) * 2 ** (-(a + 1))
                      * gamma(eff + 1) / decay_rate ** (eff + 1))
        return total


def weight(m: RadialMeasure) -> WeightFunction:
    """Weight w(t) = 2 pi * integral exp(-2rt) dnu(r), refused when doubling fails."""
    r_const = delta2_constant(m)
    if not math.isfinite(r_const):
        raise ValueError(
            "measure fails the doubling condition (nu[0, r) vanishes below the "
            "first atom); the weight integral is not controlled"
        )
    if m.atom_at_zero > 0 and not m.has_density and not m.atoms:
        prov = "hardy"
    elif m.has_density and m.atom_at_zero == 0 and not m.atoms:
        prov = f"bergman-{m.density_alpha:g}"
    else:
        prov = "mixture"
    return WeightFunction(m, prov)


def nu_square_mass(m: RadialMeasure, interval_length: float) -> float:
    """Product-measure mass of the Carleson square of side |I|.

    The x = 0 boundary is included, so the Hardy case gives exactly |I|.
    """
    if interval_length <= 0:
        raise ValueError("interval length must be positive")
    return float(m.cumulative(interval_length)) * interval_length


def load_radial_measure(config: dict | str) -> RadialMeasure:
    """Parse a measure config or a named preset.

    Presets: "hardy", "bergman:<alpha>".  Schema:
    {"atom0": m, "atoms": [[r, m], ...], "density": {"alpha": a, "scale": c}}.
    """
    if isinstance(config, str):
        text = config.strip()
        if text == "hardy":
            return hardy()
        if text.startswith("bergman:"):
            return bergman(float(text.split(":", 1)[1]))
        config = json.loads(text)
    atoms = tuple((float(r), float(mass)) for r, mass in config.get("atoms", []))
    density = config.get("density")
    if density is not None:
        return RadialMeasure(
            atom_at_zero=float(config.get("atom0", 0.0)),
            atoms=atoms,
            density_alpha=float(density["alpha"]),
            density_scale=float(density.get("scale", 1.0)),
        )
    return RadialMeasure(atom_at_zero=float(config.get("atom0", 0.0)), atoms=atoms)
