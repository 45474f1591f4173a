"""Closed-form scattering observables for regularized singular potentials.

Everything here is analytic: zero-energy scattering lengths of -alpha/r**s
for the absorption/creation branches, the inverse-square phase, the complex
Coulomb + inverse-square spectrum, the near-threshold perturbative phase
shifts, level shifts and widths, and the semiclassical checks.  The numerical
radial engine in :mod:`singscat.solver` reproduces these independently; the
pair forms the oracle-equivalence backbone of the test suite.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from .domain import Branch, ChannelIndices, PotentialSpec, RadialProblem, effective_momentum
from .errors import ConsistencyError, DomainError
from .specfun import branched_power, gamma, sin_pi_gamma_complement


class ValidityWarning(UserWarning):
    """A small-parameter condition is strained but not yet broken."""


_WARN_SMALL = 0.3
_FAIL_SMALL = 1.0


def _check_expansion_parameter(x: float, what: str) -> None:
    if x > _FAIL_SMALL:
        raise DomainError(
            f"{what} = {x:.3g} is outside the near-threshold expansion (limit {_FAIL_SMALL})")
    if x > _WARN_SMALL:
        warnings.warn(
            f"{what} = {x:.3g} strains the near-threshold expansion (soft limit {_WARN_SMALL})",
            ValidityWarning, stacklevel=3)


@dataclass(frozen=True)
class SpectrumLine:
    """One complex level: position Re E, width Gamma = -2 Im E."""

    n_r: int
    energy: complex

    @property
    def width(self) -> float:
        return -2.0 * self.energy.imag


@dataclass(frozen=True)
class InverseSquarePhase:
    """Phase data of the -alpha/r^2 channel (energy independent)."""

    phase: complex
    s_matrix_modulus: float
    phase_jump: complex


@dataclass(frozen=True)
class WkbCheck:
    """Semiclassical diagnostics at one radius."""

    validity: float                 # |d(1/p_eff)/dr|, << 1 where WKB holds
    wavefunction: complex           # p^(-1/2) exp(i int_r^ref p dr')
    breakdown_radius: float         # where validity reaches O(1) at E = 0


def scattering_length_singular(alpha_s: complex, s: float,
                               branch: Branch = Branch.ABSORB) -> complex:
    """Zero-energy S-wave scattering length of -alpha_s/r**s with absorption
    (creation) at the origin.

    Valid for s > 3; the coupling may be complex, in which case the value is
    the analytic continuation off the positive real axis on the requested
    branch.  For real alpha_s the result is complex with Im a < 0 (absorb):
    the non-self-adjointness survives the omega -> 0 limit.
    """
    if s <= 3:
        raise DomainError("scattering length undefined for s <= 3")
    if alpha_s == 0:
        raise DomainError("scattering length needs a non-zero coupling")
    q = 1.0 / (s - 2.0)
    phase = cmath.exp(-1j * branch.sign * math.pi * q)
    power = branched_power(alpha_s, q, branch) * (s - 2.0) ** (-2.0 * q)
    ratio = gamma((s - 3.0) / (s - 2.0)) / gamma((s - 1.0) / (s - 2.0))
    return phase * power * ratio


def scattering_length_repulsive(alpha_s: float, s: float) -> float:
    """Scattering length of the repulsive counterpart +alpha_s/r**s (real)."""
    if s <= 3:
        raise DomainError("scattering length undefined for s <= 3")
    if alpha_s <= 0:
        raise DomainError("repulsive strength must be positive")
    q = 1.0 / (s - 2.0)
    power = alpha_s ** q * (s - 2.0) ** (-2.0 * q)
    ratio = gamma((s - 3.0) / (s - 2.0)) / gamma((s - 1.0) / (s - 2.0))
    return power * (ratio.real if isinstance(ratio, complex) else ratio)


def scattering_length_jump(alpha_s: float, s: float) -> complex:
    """Jump a_absorb - a_create across the positive real coupling axis."""
    if s <= 3:
        raise DomainError("scattering length undefined for s <= 3")
    return -2j * math.sin(math.pi / (s - 2.0)) * scattering_length_repulsive(alpha_s, s)


def inverse_square_phase(alpha: float, branch: Branch = Branch.ABSORB) -> InverseSquarePhase:
    """Energy-independent phase of the supercritical -alpha/r^2 potential.

    delta = +-(i pi/2) sqrt(alpha - 1/4) - pi/4 (upper sign: absorb), so
    |S| = exp(-+pi sqrt(alpha - 1/4)) < 1 on the absorption side.
    """
    if alpha <= 0.25:
        raise DomainError("subcritical coupling: alpha must exceed 1/4")
    root = math.sqrt(alpha - 0.25)
    delta = branch.sign * 0.5j * math.pi * root - 0.25 * math.pi
    modulus = math.exp(-branch.sign * math.pi * root)
    return InverseSquarePhase(phase=delta, s_matrix_modulus=modulus,
                              phase_jump=1j * math.pi * root)


def coulomb_inverse_square_spectrum(n_r: int, alpha: float,
                                    branch: Branch = Branch.ABSORB) -> SpectrumLine:
    """Complex level of an attractive Coulomb field plus -(alpha +- i0)/r^2.

    Transcribed in the source convention (no explicit Coulomb strength, level
    scale -1/2 at n_r = 0, alpha -> 1/4+); widths vanish at the critical
    coupling.  See the README units note before comparing against 2M = 1
    Coulomb spectra.
    """
    if alpha <= 0.25:
        raise DomainError("subcritical coupling: alpha must exceed 1/4")
    if n_r < 0:
        raise DomainError("radial quantum number must be non-negative")
    denom = n_r * n_r + n_r + alpha
    re = -0.5 * (n_r + 0.5) / denom
    im = -branch.sign * 0.5 * math.sqrt(alpha - 0.25) / denom
    return SpectrumLine(n_r=n_r, energy=complex(re, im))


def ground_state_estimate(alpha_s: float, s: float, r0: float) -> float:
    """Square-well upper estimate for the ground state of -alpha_s/r**s.

    E ~ -alpha_s/r0**s + pi^2/r0**2, which diverges to -infinity as the cut
    radius shrinks for s > 2: the unregularized spectrum is unbounded below.
    """
    if r0 <= 0:
        raise DomainError("cut radius must be positive")
    if s <= 2:
        raise DomainError("estimate applies to s > 2")
    return -alpha_s / r0 ** s + math.pi ** 2 / r0 ** 2


def _phase_prefactor(x: complex, mu: complex, nu: complex) -> complex:
    """Common factor of the near-threshold phase formulas.

    Evaluated through pi/Gamma(mu) instead of sin(pi mu)Gamma(1 - mu), which
    removes the 0*inf indeterminacy at integer mu.
    """
    return (-sin_pi_gamma_complement(mu) * x ** (2.0 * mu)
            * cmath.exp(-1j * math.pi * nu)
            * gamma(1.0 - nu) / (gamma(1.0 + mu) * gamma(1.0 + nu)))


def _phase_prefactor_half_integer(x: complex, l: int, nu: complex) -> complex:
    """Specialized form at 2*mu = 2l + 1 (printed with explicit (-1)**(l+1))."""
    return ((-1) ** (l + 1) * x ** (2 * l + 1)
            * cmath.exp(-1j * math.pi * nu)
            * gamma(0.5 - l) * gamma(1.0 - nu)
            / (gamma(1.5 + l) * gamma(1.0 + nu)))


_HALF_INTEGER_EPS = 1e-8


def _near_threshold_indices(l: int, alpha2: float, s: float) -> ChannelIndices:
    idx = ChannelIndices.from_channel(l, alpha2, s)
    if abs(idx.mu.imag) > 1e-12 or idx.mu.real <= 0:
        raise DomainError("supercritical inverse-square coupling: mu must be real positive")
    nu = idx.nu
    if abs(nu.imag) < 1e-12 and abs(nu.real - round(nu.real)) < _HALF_INTEGER_EPS \
            and round(nu.real) >= 1:
        raise DomainError(
            f"nu = {nu.real:.6g} hits a Gamma pole: phase diverges (s too close to "
            f"{2 + 2 * idx.mu.real / round(nu.real):.4g})")
    return idx


def perturbative_phase_constant_background(p: float, alpha_s: float, s: float,
                                           l: int = 0, alpha2: float = 0.0,
                                           branch: Branch = Branch.ABSORB) -> complex:
    """Phase shift produced by a weak singular core on a flat background.

    ``p`` is the local momentum of the background solution near the origin
    (U ~ p^2 there).  Requires p * alpha_s**(1/(s-2)) << 1; a warning is
    issued above 0.3 and the call fails above 1.  The imaginary part is
    positive on the absorption branch.
    """
    if s <= 2:
        raise DomainError("singular exponent must exceed 2")
    if alpha_s <= 0:
        raise DomainError("singular strength must be positive")
    if p < 0:
        raise DomainError("background momentum must be non-negative")
    scale = alpha_s ** (1.0 / (s - 2.0))
    _check_expansion_parameter(p * scale, "p * alpha_s^(1/(s-2))")
    idx = _near_threshold_indices(l, alpha2, s)
    mu, nu = idx.mu, idx.nu
    x = p * scale / (2.0 * (s - 2.0) ** (2.0 / (s - 2.0)))
    two_mu = 2.0 * mu.real
    if abs(two_mu - round(two_mu)) < _HALF_INTEGER_EPS and round(two_mu) == 2 * l + 1:
        delta = _phase_prefactor_half_integer(x, l, nu)
    else:
        delta = _phase_prefactor(x, mu, nu)
    if p > 0 and delta.imag <= 0:
        warnings.warn("absorptive phase lost its positive imaginary part",
                      ValidityWarning, stacklevel=2)
    return delta if branch is Branch.ABSORB else delta.conjugate()


def perturbative_phase_coulomb_background(beta: float, alpha_s: float, s: float,
                                          l: int = 0, alpha2: float = 0.0) -> complex:
    """Phase shift of a weak singular core on an attractive Coulomb background.

    Matched against the zero-energy Coulomb wave; eta = 2 sqrt((l+1/2)^2 -
    alpha2) must be non-integer for this form to apply.
    """
    if s <= 2:
        raise DomainError("singular exponent must exceed 2")
    if alpha_s <= 0 or beta <= 0:
        raise DomainError("couplings must be positive")
    scale = alpha_s ** (1.0 / (s - 2.0))
    _check_expansion_parameter(beta * scale, "beta * alpha_s^(1/(s-2))")
    idx = ChannelIndices.from_channel(l, alpha2, s)
    if abs(idx.mu.imag) > 1e-12 or idx.mu.real <= 0:
        raise DomainError("supercritical inverse-square coupling: mu must be real positive")
    eta = idx.eta
    if abs(eta.real - round(eta.real)) < _HALF_INTEGER_EPS:
        raise DomainError(f"eta = {eta.real:.6g} is integer: formula form invalid")
    x = 8.0 * beta * scale / (2.0 * (s - 2.0) ** (2.0 / (s - 2.0)))
    return (-cmath.sin(math.pi * eta) * x ** eta * cmath.exp(-1j * math.pi * eta)
            * gamma(1.0 - eta) ** 2 / gamma(1.0 + eta) ** 2)


def pure_singular_low_energy(k: float, alpha_s: float, s: float,
                             l: int = 0, alpha2: float = 0.0,
                             branch: Branch = Branch.ABSORB) -> tuple[complex, complex]:
    """Low-energy phase shift and scattering length/volume of a pure
    -(alpha_s +- i0)/r**s potential in partial wave l.

    Returns (delta, a_l) with delta ~ -a_l k**(2 mu); for alpha2 = 0 the
    exponent is the familiar 2l + 1.
    """
    if s <= 2:
        raise DomainError("singular exponent must exceed 2")
    if alpha_s <= 0:
        raise DomainError("singular strength must be positive")
    if k < 0:
        raise DomainError("momentum must be non-negative")
    scale = alpha_s ** (1.0 / (s - 2.0))
    if k > 0:
        _check_expansion_parameter(k * scale, "k * alpha_s^(1/(s-2))")
    idx = _near_threshold_indices(l, alpha2, s)
    mu, nu = idx.mu, idx.nu
    denom = 2.0 * (s - 2.0) ** (2.0 / (s - 2.0))
    x_k = k * scale / denom
    x_a = scale / denom
    two_mu = 2.0 * mu.real
    if abs(two_mu - round(two_mu)) < _HALF_INTEGER_EPS and round(two_mu) == 2 * l + 1:
        delta = _phase_prefactor_half_integer(x_k, l, nu)
        volume = -_phase_prefactor_half_integer(x_a, l, nu)
    else:
        delta = _phase_prefactor(x_k, mu, nu)
        volume = -_phase_prefactor(x_a, mu, nu)
    if branch is Branch.CREATE:
        delta = delta.conjugate()
        volume = volume.conjugate()
    return delta, volume


def level_shift_and_width(delta_s: complex, omega_n: float) -> tuple[float, float]:
    """Shift and width of a near-threshold level from the phase perturbation.

    shift = -Re(delta_s) * omega_n, width = 2 Im(delta_s) * omega_n; on the
    absorption branch the width must come out non-negative.
    """
    if omega_n <= 0:
        raise DomainError("semiclassical frequency must be positive")
    shift = -delta_s.real * omega_n
    width = 2.0 * delta_s.imag * omega_n
    if width < 0:
        raise ConsistencyError(
            f"negative width {width:.3g} on the absorption branch")
    return shift, width


def _allowed_interval(potential: PotentialSpec, energy: float,
                      r_min: float, r_max: float, samples: int) -> tuple[float, float]:
    """Locate the single classically allowed interval of E - U(r) > 0."""
    import numpy as np
    from scipy.optimize import brentq

    grid = np.geomspace(r_min, r_max, samples)

    def f(r: float) -> float:
        return energy - potential.value(float(r)).real

    vals = np.array([f(r) for r in grid])
    pos = vals > 0
    if not pos.any():
        raise DomainError("no classically allowed region at this energy")
    # group contiguous positive runs
    runs = []
    start = None
    for i, flag in enumerate(pos):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(grid) - 1))
    if len(runs) > 1:
        raise DomainError("multiple classically allowed wells are unsupported")
    i0, i1 = runs[0]
    if i1 == len(grid) - 1 and f(r_max) > 0:
        raise DomainError("classically allowed region is unbounded: not a well")
    a = grid[i0] if i0 == 0 else brentq(f, grid[i0 - 1], grid[i0], xtol=1e-14)
    b = brentq(f, grid[i1], grid[i1 + 1], xtol=1e-14) if i1 + 1 < len(grid) else r_max
    return float(a), float(b)


def semiclassical_frequency(potential: PotentialSpec, energy: float,
                            r_min: float = 1e-8, r_max: float = 200.0,
                            samples: int = 4000) -> float:
    """Semiclassical frequency omega = 1 / int_a^b (E - U)**(-1/2) dr.

    The period integral runs between the turning points of the single
    classically allowed interval; integrable inverse-square-root endpoints
    are removed by quadratic substitution before quadrature.
    """
    a, b = _allowed_interval(potential, energy, r_min, r_max, samples)

    def f(r: float) -> float:
        v = energy - potential.value(r).real
        return v if v > 0 else 0.0

    mid = 0.5 * (a + b)

    def left(u: float) -> float:
        r = a + u * u
        v = f(r)
        return 2.0 * u / math.sqrt(v) if v > 0 else 0.0

    def right(u: float) -> float:
        r = b - u * u
        v = f(r)
        return 2.0 * u / math.sqrt(v) if v > 0 else 0.0

    t_left, _ = quad(left, 0.0, math.sqrt(mid - a), epsabs=1e-12, epsrel=1e-9, limit=200)
    t_right, _ = quad(right, 0.0, math.sqrt(b - mid), epsabs=1e-12, epsrel=1e-9, limit=200)
    period = t_left + t_right
    if period <= 0 or not math.isfinite(period):
        raise DomainError("degenerate period integral")
    return 1.0 / period


def hhbar_scattering_length(mass: float, c6: float) -> complex:
    """S-wave scattering length of the fully absorbed van der Waals pair.

    a = (M C6)**(1/4) Gamma(3/4)/(2 sqrt(2) Gamma(5/4)) (1 - i).  Since
    C6 grows like n**4 with the principal quantum number, |a| grows like n.
    Cross-checked against the generic power-law formula at s = 6.
    """
    if mass <= 0 or c6 <= 0:
        raise DomainError("mass and C6 must be positive")
    alpha = mass * c6
    a = (alpha ** 0.25 * (gamma(0.75) / (2.0 * math.sqrt(2.0) * gamma(1.25))).real
         * (1.0 - 1.0j))
    ref = scattering_length_singular(alpha, 6.0, Branch.ABSORB)
    if abs(a - ref) > 1e-10 * abs(ref):
        raise ConsistencyError("van der Waals closed form disagrees with s = 6 formula")
    return a


def zero_energy_smatrix(k: float, a: complex) -> complex:
    """Threshold S-matrix S = (1 - i k a)/(1 + i k a); |S| < 1 iff Im a < 0."""
    if k < 0:
        raise DomainError("momentum must be non-negative")
    denom = 1.0 + 1j * k * a
    if abs(denom) < 1e-14:
        raise DomainError("S-matrix pole: 1 + i k a = 0")
    return (1.0 - 1j * k * a) / denom


def wkb_breakdown_radius(alpha_s: float, s: float) -> float:
    """Radius where the zero-energy WKB validity measure reaches unity."""
    if s <= 2 or alpha_s <= 0:
        raise DomainError("breakdown radius defined for s > 2, alpha > 0")
    return (2.0 * math.sqrt(alpha_s) / s) ** (2.0 / (s - 2.0))


def wkb_wavefunction_check(r: float, problem: RadialProblem,
                           reference_radius: Optional[float] = None,
                           branch: Branch = Branch.ABSORB) -> WkbCheck:
    """Evaluate the semiclassical solution and its validity measure at r.

    validity = |d(1/p_eff)/dr|; the incoming-wave WKB form
    p**(-1/2) exp(i int_r^ref p dr') is integrated with adaptive quadrature.
    The breakdown radius marks where validity reaches O(1) at zero energy
    for the dominant power term.
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    p = effective_momentum(r, problem, branch)
    du = problem.effective_potential_derivative(r)
    validity = abs(du) / (2.0 * abs(p) ** 3)

    dom = problem.potential.dominant_term()
    if dom is not None and dom.exponent > 2 and abs(dom.strength) > 0:
        r_star = wkb_breakdown_radius(abs(dom.strength), dom.exponent)
    else:
        r_star = r
    ref = reference_radius if reference_radius is not None else r_star

    def p_re(x: float) -> float:
        return effective_momentum(x, problem, branch).real

    def p_im(x: float) -> float:
        return effective_momentum(x, problem, branch).imag

    lo, hi = (r, ref) if r <= ref else (ref, r)
    sign = 1.0 if r <= ref else -1.0
    re_part, _ = quad(p_re, lo, hi, epsabs=1e-12, epsrel=1e-9, limit=200)
    im_part, _ = quad(p_im, lo, hi, epsabs=1e-12, epsrel=1e-9, limit=200)
    phase = sign * complex(re_part, im_part)
    psi = cmath.exp(1j * phase) / cmath.sqrt(p)
    return WkbCheck(validity=validity, wavefunction=psi, breakdown_radius=r_star)
