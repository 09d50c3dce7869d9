"""Diagonal semigroup systems and their induced spectral measures.

A system is a finite truncation of a diagonal generator on ell^q: eigenvalues
lambda_k in the open left half-plane and scalar control coefficients b_k.  The
sign flip onto the right half-plane happens in exactly one place,
``spectral_measure``, so every downstream module works with points
z_k = -lambda_k, Re z_k > 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DiagonalSystem",
    "AtomicMeasure",
    "SectorSpec",
    "spectral_measure",
    "heat_system",
    "dual_system",
    "sector_check",
    "load_system",
]


@dataclass(frozen=True)
class DiagonalSystem:
    """Finite truncation of a diagonal semigroup system on ell^q.

    ``generator`` is an optional symbolic tag (e.g. ``"heat1d"``) allowing
    criteria to rematerialize the system at a larger truncation for
    convergence diagnostics.
    """

    eigenvalues: tuple[complex, ...]
    coeffs: tuple[complex, ...]
    q: float
    generator: str | None = None

    def __post_init__(self):
        if len(self.eigenvalues) != len(self.coeffs):
            raise ValueError(
                f"eigenvalues ({len(self.eigenvalues)}) and coeffs "
                f"({len(self.coeffs)}) must have equal length"
            )
        if len(self.eigenvalues) == 0:
            raise ValueError("system must have at least one mode")
        if self.q < 1:
            raise ValueError(f"state exponent q must be >= 1, got {self.q}")
        for k, lam in enumerate(self.eigenvalues):
            if not complex(lam).real < 0:
                raise ValueError(f"eigenvalue {k} has Re lambda = {complex(lam).real}, must be < 0")

    @property
    def modes(self) -> int:
        return len(self.eigenvalues)

    def with_modes(self, modes: int) -> "DiagonalSystem":
        """Rematerialize a tagged system at a different truncation."""
        if self.generator == "heat1d":
            return heat_system(modes)
        raise ValueError(f"cannot regenerate system without a known generator tag: {self.generator!r}")


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite positive atomic measure on the closed right half-plane."""

    locations: np.ndarray  # complex, Re >= 0
    masses: np.ndarray  # float, >= 0

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=complex)
        mass = np.asarray(self.masses, dtype=float)
        if loc.shape != mass.shape or loc.ndim != 1:
            raise ValueError("locations and masses must be 1-d arrays of equal length")
        if loc.size and loc.real.min() < 0:
            raise ValueError("all atoms must lie in the closed right half-plane")
        if mass.size and mass.min() < 0:
            raise ValueError("atom masses must be nonnegative")
        if not np.isfinite(mass).all():
            raise ValueError("atom masses must be finite")
        loc.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)

    @classmethod
    def from_atoms(cls, atoms) -> "AtomicMeasure":
        """Build from an iterable of (location, mass) pairs."""
        atoms = list(atoms)
        locs = np.array([complex(z) for z, _ in atoms], dtype=complex)
        masses = np.array([float(m) for _, m in atoms], dtype=float)
        return cls(locs, masses)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __len__(self) -> int:
        return self.locations.size

    def scaled(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(self.locations, self.masses * float(factor))

    def transformed(self, mass_factors: np.ndarray) -> "AtomicMeasure":
        """New measure with per-atom mass multipliers (same locations)."""
        return AtomicMeasure(self.locations, self.masses * np.asarray(mass_factors, dtype=float))


@dataclass(frozen=True)
class SectorSpec:
    """Open sector S(theta) = { |arg z| < theta } in the right half-plane."""

    theta: float

    def __post_init__(self):
        if not 0 < self.theta < math.pi / 2:
            raise ValueError(f"sector angle must lie in (0, pi/2), got {self.theta}")


def spectral_measure(sys: DiagonalSystem) -> AtomicMeasure:
    """Atomic measure with atoms at -lambda_k and masses |b_k|^q.

    Duplicate eigenvalues keep separate atoms; geometric routines treat
    coincident atoms additively, so multiplicity is handled naturally.
    """
    lam = np.asarray(sys.eigenvalues, dtype=complex)
    b = np.asarray(sys.coeffs, dtype=complex)
    return AtomicMeasure(-lam, np.abs(b) ** sys.q)


def heat_system(modes: int) -> DiagonalSystem:
    """1-d heat equation with Neumann boundary control: lambda_n = -n^2 pi^2, b_n = 1."""
    if modes < 1:
        raise ValueError(f"number of modes must be >= 1, got {modes}")
    n = np.arange(1, modes + 1, dtype=float)
    eig = tuple(complex(-v) for v in (n * n * math.pi**2))
    return DiagonalSystem(eig, (1.0 + 0.0j,) * modes, 2.0, generator="heat1d")


def dual_system(sys: DiagonalSystem, obs_coeffs) -> DiagonalSystem:
    """System carrying the observation data: same spectrum, coeffs c_k, exponent q' = q/(q-1).

    Observation admissibility questions reduce to control-side criteria run on
    this system together with the dual input space.
    """
    obs = tuple(complex(c) for c in obs_coeffs)
    if len(obs) != sys.modes:
        raise ValueError(f"obs_coeffs length {len(obs)} != number of modes {sys.modes}")
    if sys.q == 1:
        raise ValueError("q = 1 has infinite conjugate exponent; out of numeric scope")
    q_dual = sys.q / (sys.q - 1)
    return DiagonalSystem(sys.eigenvalues, obs, q_dual)


def sector_check(m: AtomicMeasure, s: SectorSpec) -> tuple[bool, complex | None]:
    """True iff every positive-mass atom lies strictly inside S(theta).

    Returns the atom of maximal |arg| as witness.  An atom at the origin with
    positive mass has no argument and counts as a violation.
    """
    pos = m.masses > 0
    if not pos.any():
        return True, None
    loc = m.locations[pos]
    at_origin = loc == 0
    if at_origin.any():
        return False, 0j
    args = np.abs(np.angle(loc))
    worst = loc[int(np.argmax(args))]
    return bool(args.max() < s.theta), complex(worst)


def max_sector_angle(m: AtomicMeasure) -> float:
    """Max |arg z| over positive-mass atoms; inf if an atom sits at the origin."""
    pos = m.masses > 0
    if not pos.any():
        return 0.0
    loc = m.locations[pos]
    if (loc == 0).any():
        return math.inf
    return float(np.abs(np.angle(loc)).max())


def load_system(config: dict | str) -> DiagonalSystem:
    """Build a system from its JSON config.

    Schema: {"eigenvalues": [[re, im], ...], "coeffs": [[re, im], ...], "q": number}
    or {"generator": "heat1d", "modes": K}.
    """
    if isinstance(config, str):
        config = json.loads(config)
    if "generator" in config:
        name = config["generator"]
        if name != "heat1d":
            raise ValueError(f"unknown system generator {name!r}")
        return heat_system(int(config["modes"]))
    for key in ("eigenvalues", "coeffs", "q"):
        if key not in config:
            raise ValueError(f"system config missing required field {key!r}")
    eig = tuple(complex(re, im) for re, im in config["eigenvalues"])
    coeffs = tuple(complex(re, im) for re, im in config["coeffs"])
    return DiagonalSystem(eig, coeffs, float(config["q"]))
