"""Shared domain types for singular-potential scattering.

Units: hbar = 1 and 2M = 1 throughout (energies are inverse squared
lengths).  A problem may declare the M = 1 convention instead; engines
convert with :func:`as_two_m_one` before doing any arithmetic.

The potential is

    U(r) = - sum_j  strength_j * r**(-exponent_j) * exp(-r/tau_j)
           - coulomb_strength / r
           + table(r)

so a positive real ``strength`` is an attractive power-law term and a
purely imaginary ``strength = i*omega`` (omega > 0) is the absorptive
regulator.  All value objects are immutable and safe to share between
threads.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import DomainError


class Branch(Enum):
    """Side of the positive real coupling axis a result is continued from.

    ``ABSORB`` is the alpha + i0 limit (particle flux disappears at the
    origin, |S| < 1), ``CREATE`` is alpha - i0 (|S| > 1).
    """

    ABSORB = "absorb"
    CREATE = "create"

    @property
    def sign(self) -> int:
        """Sign of the infinitesimal imaginary part of the coupling."""
        return 1 if self is Branch.ABSORB else -1

    def conjugate(self) -> "Branch":
        return Branch.CREATE if self is Branch.ABSORB else Branch.ABSORB


class MassConvention(Enum):
    TWO_M_ONE = "two_m_one"
    M_ONE = "m_one"


@dataclass(frozen=True)
class PowerTerm:
    """One power-law piece -strength / r**exponent of the potential.

    ``damping_scale``, if given, multiplies the term by exp(-r/damping_scale)
    so the tail can be cut off without touching the short-range singularity.
    """

    strength: complex
    exponent: float
    damping_scale: Optional[float] = None

    def value(self, r: float) -> complex:
        v = -self.strength * r ** (-self.exponent)
        if self.damping_scale is not None:
            v *= math.exp(-r / self.damping_scale)
        return v

    def derivative(self, r: float) -> complex:
        v = self.strength * self.exponent * r ** (-self.exponent - 1.0)
        if self.damping_scale is None:
            return v
        damp = math.exp(-r / self.damping_scale)
        return damp * (v - self.value_undamped(r) / self.damping_scale)

    def value_undamped(self, r: float) -> complex:
        return -self.strength * r ** (-self.exponent)


@dataclass(frozen=True)
class TabulatedPotential:
    """User-supplied potential samples, interpolated inside the table range.

    Outside [radii[0], radii[-1]] the table contributes nothing; power-law
    terms alone apply there.
    """

    radii: tuple[float, ...]
    values: tuple[complex, ...]
    interpolation: str = "cubic"  # "cubic" | "linear"

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def value(self, r: float) -> complex:
        if r < self.radii[0] or r > self.radii[-1]:
            return 0.0j
        re, im = _table_interpolators(self.radii, self.values, self.interpolation)
        return complex(re(r), im(r))

    def derivative(self, r: float) -> complex:
        if r < self.radii[0] or r > self.radii[-1]:
            return 0.0j
        re, im = _table_interpolators(self.radii, self.values, self.interpolation)
        return complex(re(r, 1), im(r, 1))


@functools.lru_cache(maxsize=64)
def _table_interpolators(radii, values, kind):
    import numpy as np
    from scipy.interpolate import CubicSpline, interp1d

    r = np.asarray(radii)
    v = np.asarray(values)
    if kind == "cubic" and len(r) >= 4:
        re = CubicSpline(r, v.real)
        im = CubicSpline(r, v.imag)
        return re, im
    lin_re = interp1d(r, v.real, kind="linear")
    lin_im = interp1d(r, v.imag, kind="linear")
    # interp1d has no derivative method; wrap with a finite-difference stencil
    def deriv_wrap(f):
        def g(x, n=0):
            if n == 0:
                return float(f(x))
            h = 1e-7 * max(abs(x), 1.0)
            lo, hi = max(x - h, radii[0]), min(x + h, radii[-1])
            return (float(f(hi)) - float(f(lo))) / (hi - lo)
        return g
    return deriv_wrap(lin_re), deriv_wrap(lin_im)


@dataclass(frozen=True)
class PotentialSpec:
    """Full interaction: power-law terms, optional Coulomb tail, optional table."""

    terms: tuple[PowerTerm, ...] = ()
    coulomb_strength: float = 0.0
    table: Optional[TabulatedPotential] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def value(self, r: float) -> complex:
        u = 0.0j
        for t in self.terms:
            u += t.value(r)
        if self.coulomb_strength:
            u -= self.coulomb_strength / r
        if self.table is not None:
            u += self.table.value(r)
        return u

    def derivative(self, r: float) -> complex:
        du = 0.0j
        for t in self.terms:
            du += t.derivative(r)
        if self.coulomb_strength:
            du += self.coulomb_strength / r ** 2
        if self.table is not None:
            du += self.table.derivative(r)
        return du

    def dominant_term(self) -> Optional[PowerTerm]:
        """Term controlling the near-origin behaviour (largest exponent)."""
        live = [t for t in self.terms if t.strength != 0]
        if not live:
            return None
        return max(live, key=lambda t: t.exponent)

    def dominant_exponent(self) -> float:
        t = self.dominant_term()
        return t.exponent if t is not None else 0.0

    def tail_exponent(self) -> Optional[float]:
        """Smallest undamped power-law exponent (slowest-falling tail)."""
        live = [t.exponent for t in self.terms
                if t.strength != 0 and t.damping_scale is None]
        return min(live) if live else None

    def alpha2(self) -> complex:
        """Strength of the inverse-square slot (0 if absent)."""
        for t in self.terms:
            if t.exponent == 2.0:
                return t.strength
        return 0.0j

    def to_dict(self) -> dict:
        d: dict = {"terms": [
            {"re": t.strength.real, "im": t.strength.imag, "s": t.exponent,
             **({"tau": t.damping_scale} if t.damping_scale is not None else {})}
            for t in self.terms
        ]}
        if self.coulomb_strength:
            d["beta"] = self.coulomb_strength
        if self.table is not None:
            d["table"] = {
                "r": list(self.table.radii),
                "v_re": [v.real for v in self.table.values],
                "v_im": [v.imag for v in self.table.values],
                "interp": self.table.interpolation,
            }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialSpec":
        try:
            terms = tuple(
                PowerTerm(complex(t.get("re", 0.0), t.get("im", 0.0)),
                          float(t["s"]),
                          float(t["tau"]) if t.get("tau") is not None else None)
                for t in d.get("terms", ())
            )
            table = None
            if d.get("table") is not None:
                tb = d["table"]
                v_re = tb["v_re"]
                v_im = tb.get("v_im", [0.0] * len(v_re))
                table = TabulatedPotential(
                    radii=tuple(tb["r"]),
                    values=tuple(complex(a, b) for a, b in zip(v_re, v_im)),
                    interpolation=tb.get("interp", "cubic"),
                )
            return cls(terms=terms,
                       coulomb_strength=float(d.get("beta", 0.0)),
                       table=table)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed potential specification: {exc}") from exc


@dataclass(frozen=True)
class RadialProblem:
    """One scattering channel: partial wave, energy and interaction."""

    potential: PotentialSpec
    l: int = 0
    energy: float = 0.0
    mass_convention: MassConvention = MassConvention.TWO_M_ONE

    @property
    def momentum(self) -> float:
        """Asymptotic momentum k = sqrt(E) (2M = 1 units)."""
        if self.energy < 0:
            raise DomainError("momentum undefined for E < 0")
        return math.sqrt(self.energy)

    def effective_potential(self, r: float) -> complex:
        return self.potential.value(r) + self.l * (self.l + 1) / r ** 2

    def effective_potential_derivative(self, r: float) -> complex:
        return self.potential.derivative(r) - 2.0 * self.l * (self.l + 1) / r ** 3


def as_two_m_one(problem: RadialProblem) -> RadialProblem:
    """Rescale an M = 1 problem into the internal 2M = 1 convention.

    With M = 1 the radial equation is -(1/2) Phi'' + U Phi = E Phi, which is
    the 2M = 1 equation for doubled potential and energy.  Lengths (and so
    scattering lengths) are untouched.
    """
    if problem.mass_convention is MassConvention.TWO_M_ONE:
        return problem
    pot = problem.potential
    scaled = PotentialSpec(
        terms=tuple(PowerTerm(2.0 * t.strength, t.exponent, t.damping_scale)
                    for t in pot.terms),
        coulomb_strength=2.0 * pot.coulomb_strength,
        table=None if pot.table is None else TabulatedPotential(
            pot.table.radii,
            tuple(2.0 * v for v in pot.table.values),
            pot.table.interpolation,
        ),
    )
    return RadialProblem(potential=scaled, l=problem.l,
                         energy=2.0 * problem.energy,
                         mass_convention=MassConvention.TWO_M_ONE)


@dataclass(frozen=True)
class ScatteringObservables:
    """Observables of one channel, tagged with the regularization branch.

    At threshold (k = 0) the S-matrix degenerates to 1 and the content is in
    the scattering length; the |S| <> 1 inequalities are meaningful only at
    k > 0.
    """

    branch: Branch
    scattering_length: Optional[complex] = None
    phase_shift: Optional[complex] = None
    s_matrix: Optional[complex] = None
    s_matrix_modulus: Optional[float] = None
    provenance: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class ChannelIndices:
    """Indices of the near-origin analysis for one channel.

    mu comes from the centrifugal + inverse-square combination, nu is the
    order of the incoming-wave solution after the variable change that maps
    the power-law region onto a Bessel equation, eta is the index of the
    zero-energy Coulomb wave.  ``hankel_order`` equals nu; it is kept as its
    own field because it is used in a different matching context.
    """

    mu: complex
    nu: complex
    eta: complex
    hankel_order: complex

    @classmethod
    def from_channel(cls, l: int, alpha2: complex, s: float) -> "ChannelIndices":
        if s <= 2:
            raise DomainError("channel indices need a dominant exponent s > 2")
        mu = cmath.sqrt((l + 0.5) ** 2 - alpha2)  # principal branch: Re mu >= 0
        nu = 2.0 * mu / (s - 2.0)
        eta = 2.0 * mu
        hankel_order = cmath.sqrt((2 * l + 1) ** 2 - 4.0 * alpha2) / (s - 2.0)
        return cls(mu=mu, nu=nu, eta=eta, hankel_order=hankel_order)


def validate(problem: RadialProblem) -> list[str]:
    """Check every structural invariant; return one message per violation.

    Total function: never raises, an empty list means the problem is
    well-formed.
    """
    violations: list[str] = []
    pot = problem.potential

    for i, t in enumerate(pot.terms):
        if not math.isfinite(t.exponent) or t.exponent < 0:
            violations.append(f"terms[{i}].exponent must be finite and non-negative")
        if not (math.isfinite(t.strength.real) and math.isfinite(t.strength.imag)):
            violations.append(f"terms[{i}].strength must be finite")
        if t.damping_scale is not None and not (
                math.isfinite(t.damping_scale) and t.damping_scale > 0):
            violations.append(f"terms[{i}].damping_scale must be strictly positive")

    n_inverse_square = sum(1 for t in pot.terms if t.exponent == 2.0)
    if n_inverse_square > 1:
        violations.append("potential.terms: at most one inverse-square (s = 2) slot")

    if not math.isfinite(pot.coulomb_strength) or pot.coulomb_strength < 0:
        violations.append("potential.coulomb_strength must be finite and >= 0")

    if pot.table is not None:
        radii = pot.table.radii
        if len(radii) < 2:
            violations.append("table.radii needs at least two points")
        if any(not math.isfinite(r) or r <= 0 for r in radii):
            violations.append("table.radii must be finite and positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            violations.append("table.radii must be strictly increasing")
        if len(radii) != len(pot.table.values):
            violations.append("table.values length must match table.radii")
        if pot.table.interpolation not in ("cubic", "linear"):
            violations.append("table.interpolation must be 'cubic' or 'linear'")

    if problem.l < 0 or not isinstance(problem.l, int):
        violations.append("l must be a non-negative integer")
    if not math.isfinite(problem.energy):
        violations.append("energy must be finite")
    elif problem.energy < 0:
        violations.append("energy must be >= 0 for scattering workflows")

    return violations


def effective_momentum(r: float, problem: RadialProblem,
                       branch: Branch = Branch.ABSORB) -> complex:
    """Local momentum p_eff(r) = sqrt(E - U(r) - l(l+1)/r^2).

    The square-root branch is fixed so that Im p_eff >= 0 on the absorption
    side; the creation value is the complex conjugate taken at the conjugated
    potential, so conjugating every strength flips the branch.
    """
    if r <= 0:
        raise DomainError("effective momentum is singular at r = 0")
    radicand = problem.energy - problem.effective_potential(r)
    if branch is Branch.ABSORB:
        p = cmath.sqrt(radicand)
        if p.imag < 0:
            p = -p
        return p
    p = cmath.sqrt(radicand.conjugate())
    if p.imag < 0:
        p = -p
    return p.conjugate()
