"""Geometry and measure evaluation on the right half-plane.

Carleson squares and their right halves, dyadic strips, the Poisson balayage
onto the boundary, the pseudo-hyperbolic metric, and truncated Blaschke-type
products.  Membership conventions are half-open in both coordinates; atoms
within 1e-12 of a tested boundary trigger a warning since the measure-theoretic
convention is then load-bearing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from admiss.system_model import AtomicMeasure

__all__ = [
    "CarlesonSquare",
    "measure_on_square",
    "strip_masses",
    "balayage",
    "balayage_integral",
    "balayage_norm",
    "pseudo_hyperbolic",
    "blaschke_products",
]

_BOUNDARY_EPS = 1e-12


@dataclass(frozen=True)
class CarlesonSquare:
    """Square over the interval [center_y - length/2, center_y + length/2) of
    the imaginary axis, with 0 <= x < length.  The right half restricts to
    x >= length/2."""

    center_y: float
    length: float

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("square side must be positive")

    @property
    def y_lo(self) -> float:
        return self.center_y - self.length / 2

    @property
    def y_hi(self) -> float:
        return self.center_y + self.length / 2


def _warn_boundary(x: np.ndarray, y: np.ndarray, masses: np.ndarray, edges_x, edges_y) -> None:
    pos = masses > 0
    if not pos.any():
        return
    near = np.zeros(x.shape, dtype=bool)
    for e in edges_x:
        near |= np.abs(x - e) < _BOUNDARY_EPS * max(1.0, abs(e))
    for e in edges_y:
        near |= np.abs(y - e) < _BOUNDARY_EPS * max(1.0, abs(e))
    if (near & pos).any():
        warnings.warn(
            "atom within 1e-12 of a tested square boundary; the half-open "
            "membership convention decides its mass",
            stacklevel=3,
        )


def measure_on_square(m: AtomicMeasure, sq: CarlesonSquare, part: str = "full") -> float:
    """Mass of the atoms inside Q_I (part="full") or its right half T_I
    (part="right_half")."""
    if part not in ("full", "right_half"):
        raise ValueError(f"part must be 'full' or 'right_half', got {part!r}")
    x = m.locations.real
    y = m.locations.imag
    x_lo = sq.length / 2 if part == "right_half" else 0.0
    _warn_boundary(x, y, m.masses, (x_lo, sq.length), (sq.y_lo, sq.y_hi))
    inside = (x >= x_lo) & (x < sq.length) & (y >= sq.y_lo) & (y < sq.y_hi)
    return float(m.masses[inside].sum())


def strip_masses(m: AtomicMeasure, n_min: int, n_max: int) -> list[tuple[int, float]]:
    """Mass per dyadic strip S_n = { 2^(n-1) < Re z <= 2^n }, n in [n_min, n_max]."""
    if n_min > n_max:
        raise ValueError("n_min must not exceed n_max")
    x = m.locations.real
    pos = x > 0
    out = np.zeros(n_max - n_min + 1)
    if pos.any():
        n_atom = np.ceil(np.log2(x[pos])).astype(int)
        # Re z exactly 2^(n-1) belongs to S_(n-1); guard the log2 rounding there.
        exact = x[pos] == 2.0 ** (n_atom - 1)
        n_atom = np.where(exact, n_atom - 1, n_atom)
        sel = (n_atom >= n_min) & (n_atom <= n_max)
        np.add.at(out, n_atom[sel] - n_min, m.masses[pos][sel])
    return [(n, float(v)) for n, v in zip(range(n_min, n_max + 1), out)]


def balayage(m: AtomicMeasure, t) -> np.ndarray | float:
    """Poisson sweep S_mu(t) of the measure onto the boundary line.

    Every atom must lie strictly inside the half-plane; the kernel is singular
    on the boundary.
    """
    x = m.locations.real
    if ((x == 0) & (m.masses > 0)).any():
        raise ValueError("balayage undefined: atom with Re z = 0 makes the Poisson kernel singular")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    y = m.locations.imag
    vals = (m.masses / math.pi) * x / (x * x + (t_arr[:, None] - y) ** 2)
    out = vals.sum(axis=1)
    return out if np.ndim(t) else float(out[0])


def _quad_breakpoints(m: AtomicMeasure) -> tuple[np.ndarray, float]:
    x = m.locations.real
    y = m.locations.imag
    pos = m.masses > 0
    ys = np.unique(np.round(y[pos], decimals=12)) if pos.any() else np.array([0.0])
    width = float(x[pos].max()) if pos.any() else 1.0
    return ys, width


def _integrate_with_breaks(f, lo: float, hi: float, breaks: np.ndarray) -> float:
    """Adaptive quadrature over [lo, hi] split at the breakpoints."""
    pts = np.concatenate(([lo], np.sort(breaks[(breaks > lo) & (breaks < hi)]), [hi]))
    total = 0.0
    chunk = 40
    for i in range(0, len(pts) - 1, chunk):
        seg = pts[i:i + chunk + 1]
        val, _ = quad(f, seg[0], seg[-1], points=list(seg[1:-1]), limit=400,
                      epsabs=1e-13, epsrel=1e-11)
        total += val
    return total


def balayage_integral(m: AtomicMeasure) -> float:
    """Quadrature value of the boundary integral of S_mu (conserves total mass)."""
    if m.total_mass == 0:
        return 0.0
    ys, width = _quad_breakpoints(m)
    lo = float(ys.min()) - 10 * width
    hi = float(ys.max()) + 10 * width
    core = _integrate_with_breaks(lambda t: balayage(m, t), lo, hi, ys)
    tail_lo, _ = quad(lambda t: balayage(m, t), -np.inf, lo, epsabs=1e-13, epsrel=1e-11, limit=400)
    tail_hi, _ = quad(lambda t: balayage(m, t), hi, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)
    return core + tail_lo + tail_hi


def balayage_norm(m: AtomicMeasure, weight_exponent: float, lebesgue_exponent: float
                  ) -> tuple[float, dict]:
    """L^s norm of |t|^a * S_mu(t) over the line, a = weight_exponent,
    s = lebesgue_exponent >= 1.

    Returns (value, diagnostics).  Non-integrable endpoint behaviour is
    detected analytically and reported as inf with the divergent end named.
    """
    a, s = weight_exponent, lebesgue_exponent
    if s < 1:
        raise ValueError("Lebesgue exponent must be >= 1")
    if m.total_mass == 0:
        return 0.0, {"note": "zero measure"}
    x = m.locations.real
    if ((x == 0) & (m.masses > 0)).any():
        raise ValueError("balayage undefined: atom with Re z = 0")
    s0 = float(balayage(m, 0.0))
    if a * s <= -1 and s0 > 0:
        return math.inf, {"divergent_end": "t=0", "exponent": a * s}
    # |t|^(a s) S^s ~ t^(a s - 2 s) at infinity.
    if a * s - 2 * s >= -1:
        return math.inf, {"divergent_end": "t=inf", "exponent": a * s - 2 * s}
    ys, width = _quad_breakpoints(m)
    peak = max(s0, float(np.max(balayage(m, ys))))
    first_moment = float((m.masses * x).sum())
    # tail cutoff where the Lorentzian envelope drops below 1e-14 of the peak
    t_cut = math.sqrt(first_moment / (math.pi * 1e-14 * peak))
    core = max(float(np.abs(ys).max()) + 10 * width, width)
    lo, hi = min(-t_cut, -core), max(t_cut, core)
    # geometric panels bridge the scale gap between the atom cluster and t_cut
    n_geo = max(0, int(math.ceil(math.log2(max(hi, -lo) / core))))
    geo = core * 2.0 ** np.arange(n_geo + 1)

    def integrand(t):
        if t == 0.0:
            # a < 0 is an integrable singularity (checked above); a > 0 vanishes
            return s0**s if a == 0 else 0.0
        return (abs(t) ** a * balayage(m, t)) ** s

    breaks = np.concatenate((ys, [0.0], geo, -geo))
    val = _integrate_with_breaks(integrand, lo, hi, breaks)
    return val ** (1 / s), {"t_cut": t_cut, "peak": peak}


def pseudo_hyperbolic(z: complex, w: complex) -> float:
    """p(z, w) = |(z - w) / (z + conj(w))| on the open right half-plane."""
    z, w = complex(z), complex(w)
    if z.real <= 0 or w.real <= 0:
        raise ValueError("pseudo-hyperbolic metric requires points in the open right half-plane")
    denom = z + w.conjugate()
    if denom == 0:
        raise ValueError("degenerate pair: z + conj(w) = 0")
    return abs((z - w) / denom)


def blaschke_products(points, window: int | None = None) -> tuple[np.ndarray, dict]:
    """Truncated products b_k = prod_{j != k} p(z_j, z_k) with convergence
    diagnostics.

    Returns (products, diagnostics) where diagnostics carries, per k, the
    smallest factor and a tail factor (the product over all factors except the
    ``window`` nearest ones, vacuously 1 when there are no others), plus a
    summability proxy sum Re z / (1 + |z|^2) with a growth flag.  A tail
    factor far below 1 means the product is still collapsing away from the
    nearest neighbours, so its truncated value is untrustworthy.  Repeated
    points give a zero product and are flagged as degenerate.
    """
    z = np.asarray([complex(p) for p in points])
    n = z.size
    if n == 0:
        raise ValueError("empty point sequence")
    if (z.real <= 0).any():
        raise ValueError("all points must lie in the open right half-plane")
    if window is None:
        window = 8
    if window < 0:
        raise ValueError("diagnostic window must be nonnegative")

    products = np.ones(n)
    min_factor = np.ones(n)
    tail_factor = np.ones(n)
    degenerate = False
    for k in range(n):
        others = np.delete(z, k)
        if others.size == 0:
            continue
        factors = np.abs((others - z[k]) / (others + z[k].conjugate()))
        if (factors == 0).any():
            degenerate = True
        products[k] = float(np.prod(factors))
        ordered = np.sort(factors)  # ascending: nearest neighbours first
        min_factor[k] = float(ordered[0])
        tail_factor[k] = float(np.prod(ordered[window:])) if window < ordered.size else 1.0

    proxy_terms = z.real / (1 + np.abs(z) ** 2)
    order = np.argsort(np.abs(z))
    partial = np.cumsum(proxy_terms[order])
    growing = bool(n >= 8 and partial[-1] > 2 * partial[n // 2])
    diagnostics = {
        "min_factor": min_factor,
        "tail_factor": tail_factor,
        "summability_proxy": float(partial[-1]),
        "proxy_growing": growing,
        "degenerate": degenerate,
    }
    if degenerate:
        warnings.warn("repeated interpolation points: Blaschke product vanishes", stacklevel=2)
    return products, diagnostics
