"""Attractive spherical square well: scattering length, shallowest bound
state, and depth tuning.

The well is V(r) = -V0 for r < Rw and 0 outside, treated at zero angular
momentum with hbar = 1.  All formulas depend on the dimensionless
strength x0 = k0 * Rw with k0 = sqrt(2 * mu * V0), so any consistent
unit system works; reduced_mass_mu must be expressed so that
2 * mu * V0 has units of inverse length squared (for V0 in MeV and Rw
in fm that means mu = m c^2 / (hbar c)^2).

The s-wave scattering length is a = Rw * (1 - tan(x0)/x0).  It diverges
at x0 = pi/2, 3*pi/2, ..., where a new bound state crosses threshold,
and sweeps the full real line once per unit interval of x0/pi: the
handle this module exposes for dialing a to any prescribed value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ConvergenceError, DomainError, UnreachableTargetError
from .numkit import find_root

__all__ = [
    "DEFAULT_UNITARITY_TOL",
    "SquareWell",
    "ScatteringLengthResult",
    "scattering_length",
    "binding_energy",
    "tune_to_scattering_length",
    "low_energy_cross_section",
]

DEFAULT_UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class SquareWell:
    """Geometry and depth of one attractive square well."""

    depth_V0: float
    range_Rw: float
    reduced_mass_mu: float

    def __post_init__(self) -> None:
        for name in ("depth_V0", "range_Rw", "reduced_mass_mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")

    @property
    def k0(self) -> float:
        """Interior wave number sqrt(2 * mu * V0) at zero energy."""
        return math.sqrt(2.0 * self.reduced_mass_mu * self.depth_V0)

    @property
    def x0(self) -> float:
        """Dimensionless well strength k0 * Rw."""
        return self.k0 * self.range_Rw


@dataclass(frozen=True)
class ScatteringLengthResult:
    """Scattering length plus the bookkeeping around its divergences.

    a is None exactly when unitary is True, meaning x0 sits within the
    unitarity tolerance of an odd multiple of pi/2 where |a| -> inf.
    """

    a: float | None
    unitary: bool
    bound_state_count: int


def _a_of_x(x: float, range_rw: float) -> float:
    return range_rw * (1.0 - math.tan(x) / x)


def _bound_count(x0: float) -> int:
    return max(0, math.floor(x0 / math.pi + 0.5))


def scattering_length(
    well: SquareWell, *, unitarity_tol: float = DEFAULT_UNITARITY_TOL
) -> ScatteringLengthResult:
    """s-wave scattering length a = Rw * (1 - tan(x0)/x0).

    Within unitarity_tol of a divergence (|cos x0| below the tolerance)
    the result is flagged unitary and a is None instead of a huge,
    sign-ambiguous float.  bound_state_count = floor(x0/pi + 1/2) counts
    the s-wave bound states the well supports: it steps up by one at
    each divergence, where a returns from -inf to +inf.
    """
    if not (math.isfinite(unitarity_tol) and unitarity_tol >= 0.0):
        raise DomainError(f"unitarity_tol must be nonnegative, got {unitarity_tol!r}")
    x0 = well.x0
    count = _bound_count(x0)
    if abs(math.cos(x0)) < unitarity_tol:
        return ScatteringLengthResult(a=None, unitary=True, bound_state_count=count)
    return ScatteringLengthResult(
        a=_a_of_x(x0, well.range_Rw), unitary=False, bound_state_count=count
    )


def binding_energy(well: SquareWell) -> float | None:
    """Energy of the shallowest bound state, or None if there is none.

    Solves the even-parity matching condition x' * cot(x') = -sqrt(x0^2
    - x'^2) for the largest root x' and returns epsilon = -(x0^2 -
    x'^2) / (2 * mu * Rw^2), which is negative.  For a well holding M
    states that root lies in ((M - 1/2)*pi, M*pi), and it approaches x0
    itself as the state becomes weakly bound, where |epsilon| tends to
    the universal value 1/(2 * mu * a^2).
    """
    x0 = well.x0
    m = _bound_count(x0)
    if m == 0:
        return None
    lo = (m - 0.5) * math.pi

    def matching(xp: float) -> float:
        return xp * math.cos(xp) / math.sin(xp) + math.sqrt(
            max((x0 - xp) * (x0 + xp), 0.0)
        )

    if x0 < m * math.pi:
        hi = x0
        f_hi = x0 * math.cos(x0) / math.sin(x0)
    else:
        # The root is interior; back off the cotangent pole at m*pi
        # until the endpoint value is negative.
        delta = 1e-8 * math.pi
        hi = m * math.pi - delta
        f_hi = matching(hi)
        while f_hi >= 0.0 and delta > 4.0 * math.ulp(m * math.pi):
            delta /= 16.0
            hi = m * math.pi - delta
            f_hi = matching(hi)
    f_lo = matching(lo)
    if f_lo <= 0.0 or f_hi >= 0.0 or hi <= lo:
        # Only reachable when the well sits at rounding distance from
        # threshold, where the state is marginal and epsilon ~ -0.
        return -max((x0 - lo) * (x0 + lo), 0.0) / (
            2.0 * well.reduced_mass_mu * well.range_Rw**2
        )
    tol = max(1e-13, 8.0 * math.ulp(max(1.0, x0)))
    root = find_root(matching, lo, hi, tol)
    return -((x0 - root) * (x0 + root)) / (
        2.0 * well.reduced_mass_mu * well.range_Rw**2
    )


def tune_to_scattering_length(
    template: SquareWell, target_a: float, branch: int = 0
) -> SquareWell:
    """Return a copy of template with V0 adjusted so a equals target_a.

    branch m selects the m-th interval x0 in (m*pi, (m+1)*pi), which
    contains the divergence at (m + 1/2)*pi and sweeps a over every
    value it can reach there: all of (-inf, Rw) on the rising side for
    m >= 1 (only negative values for m = 0, where the well has no bound
    state yet) and [Rw, +inf) on the far side of the divergence.  The
    tuned well holds m bound states when the target lies below Rw and
    m + 1 when it lies at or above Rw.

    Raises UnreachableTargetError when target_a cannot occur on the
    requested branch (zero, non-finite, or 0 < target_a < Rw with
    branch 0), and ConvergenceError if the depth solve fails to
    reproduce target_a to 1e-9 relative.
    """
    if not isinstance(branch, int) or branch < 0:
        raise DomainError(f"branch must be a nonnegative int, got {branch!r}")
    if not math.isfinite(target_a) or target_a == 0.0:
        raise UnreachableTargetError(
            f"target scattering length must be finite and nonzero, got {target_a!r}"
        )
    rw = template.range_Rw
    pole = (branch + 0.5) * math.pi

    def g(x: float) -> float:
        return _a_of_x(x, rw) - target_a

    if target_a >= rw:
        # Falling side of the divergence: a sweeps +inf down to Rw at
        # (branch+1)*pi.  Extend slightly past so a == Rw brackets too.
        hi = (branch + 1) * math.pi + 1e-6
        delta = 1e-6
        lo = pole + delta
        while g(lo) <= 0.0 and delta > 4.0 * math.ulp(pole):
            delta /= 16.0
            lo = pole + delta
    elif branch == 0 and target_a > 0.0:
        raise UnreachableTargetError(
            f"branch 0 reaches no scattering length in (0, Rw); "
            f"got target {target_a!r} with Rw = {rw!r}"
        )
    else:
        # Rising side: a sweeps Rw (resp. 0 for branch 0) down to -inf.
        lo = branch * math.pi if branch >= 1 else 1e-8
        delta = 1e-6
        hi = pole - delta
        while g(hi) >= 0.0 and delta > 4.0 * math.ulp(pole):
            delta /= 16.0
            hi = pole - delta

    if g(lo) <= 0.0:
        x = lo
    elif g(hi) >= 0.0:
        x = hi
    else:
        x = find_root(g, lo, hi, max(1e-13, 4.0 * math.ulp(hi)))

    # Newton polish in x; the derivative of a is -Rw*(x - sin x cos x)
    # / (x*cos x)^2, strictly negative away from the poles.
    for _ in range(3):
        resid = g(x)
        if abs(resid) <= 1e-12 * max(abs(target_a), rw):
            break
        cx = math.cos(x)
        slope = -rw * (x - math.sin(x) * cx) / (x * x * cx * cx)
        if slope == 0.0 or not math.isfinite(slope):
            break
        step = resid / slope
        if x - step <= branch * math.pi or not math.isfinite(step):
            break
        x -= step

    depth = x * x / (2.0 * template.reduced_mass_mu * rw * rw)
    tuned = replace(template, depth_V0=depth)
    achieved = _a_of_x(tuned.x0, rw)
    if abs(achieved - target_a) > 1e-9 * abs(target_a):
        raise ConvergenceError(
            f"depth solve reached a = {achieved!r} for target {target_a!r} "
            f"on branch {branch}, outside 1e-9 relative"
        )
    return tuned


def low_energy_cross_section(a: float, k: float) -> float:
    """Total s-wave cross section 4*pi*a^2 / (1 + (k*a)^2).

    k is the relative wave number; k = 0 gives the zero-energy limit
    4*pi*a^2.
    """
    if not math.isfinite(a):
        raise DomainError(f"scattering length must be finite, got {a!r}")
    if not (math.isfinite(k) and k >= 0.0):
        raise DomainError(f"wave number must be finite and nonnegative, got {k!r}")
    ka = k * a
    return 4.0 * math.pi * a * a / (1.0 + ka * ka)
