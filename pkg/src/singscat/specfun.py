"""Special-function substrate: Gamma and branch-controlled complex powers.

The Gamma implementation is a Lanczos approximation (g = 7, 9 terms) on the
right half-plane plus the reflection formula on the left, giving relative
accuracy around 1e-13 for moderate arguments -- two orders below every
tolerance that depends on it.  No general Bessel/Hankel machinery lives
here: the analytic formulas only ever need Gamma ratios and exponentials.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .domain import Branch
from .errors import DomainError

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def gamma(z: complex) -> complex:
    """Gamma function for real or complex argument.

    Raises DomainError on the poles (non-positive integers).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real.is_integer():
        raise DomainError(f"gamma pole at z = {z.real:g}")
    if z.real < 0.5:
        # reflection into the right half-plane
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (z + 0.5) * cmath.exp(-t) * x


def gamma_ratio(a: complex, b: complex) -> complex:
    """Convenience Gamma(a)/Gamma(b)."""
    return gamma(a) / gamma(b)


def sin_pi_gamma_complement(mu: complex) -> complex:
    """sin(pi*mu) * Gamma(1 - mu), evaluated as pi / Gamma(mu).

    The reflection form is finite at every integer mu, where the direct
    product is a 0 * inf indeterminate.
    """
    mu = complex(mu)
    if mu.imag == 0.0 and mu.real <= 0.0 and mu.real.is_integer():
        # Gamma(mu) pole <=> the product vanishes
        return 0.0j
    return math.pi / gamma(mu)


def branched_power(base: complex, exponent: float, branch: Branch) -> complex:
    """base**exponent continued across the positive-real-axis cut.

    The argument of ``base`` is taken in (0, 2*pi) for the absorption branch
    and in (-2*pi, 0) for creation, with positive real base mapping to the
    limit exp(+-i*0).  This realizes the analytic continuation that connects
    the attractive-coupling observables to the repulsive ones.
    """
    base = complex(base)
    if base == 0:
        if exponent > 0:
            return 0.0j
        raise DomainError("branched power of zero base with non-positive exponent")
    theta = cmath.phase(base)  # (-pi, pi]
    if branch is Branch.ABSORB:
        if theta < 0.0:
            theta += 2.0 * math.pi
    else:
        if theta > 0.0:
            theta -= 2.0 * math.pi
    return cmath.exp(exponent * (math.log(abs(base)) + 1j * theta))


@dataclass(frozen=True)
class BranchedPower:
    """A power with its continuation branch pinned down."""

    base: complex
    exponent: float
    branch: Branch

    def value(self) -> complex:
        return branched_power(self.base, self.exponent, self.branch)
