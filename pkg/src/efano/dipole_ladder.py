"""Bound-state ladder of a supercritical inverse-square attraction.

A potential -a/(2 r^2) with coupling a > 1/4 binds an infinite tower of
s-wave states whose wave numbers satisfy

    alpha * ln(scale / kappa) - arg Gamma(1 - i*alpha) = (n + 1/2) * pi,

with alpha = sqrt(a - 1/4) and n = 0, 1, 2, ...  Units are hbar = m = 1,
so a state with wave number kappa has energy epsilon = -kappa**2 / 2.
Successive energies form an exact geometric sequence with ratio
exp(-2*pi/alpha): the anomalous scaling that replaces the usual
power-law level spacing once the coupling passes critical.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import DomainError, SubcriticalStrengthError
from .numkit import log_gamma

__all__ = [
    "CRITICAL_STRENGTH",
    "alpha_from_strength",
    "arg_gamma_term",
    "kappa_n",
    "ladder_residual",
    "LadderEntry",
    "BoundLadder",
    "build_ladder",
    "geometric_energies",
]

CRITICAL_STRENGTH = 0.25


def alpha_from_strength(strength_a: float) -> float:
    """Map the coupling a to alpha = sqrt(a - 1/4).

    Raises SubcriticalStrengthError for a <= 1/4, where the attraction
    is too weak to produce the infinite ladder.
    """
    if not math.isfinite(strength_a):
        raise DomainError(f"coupling must be finite, got {strength_a!r}")
    if strength_a <= CRITICAL_STRENGTH:
        raise SubcriticalStrengthError(
            f"coupling a = {strength_a!r} is at or below the critical value "
            f"{CRITICAL_STRENGTH}; no bound ladder exists"
        )
    return math.sqrt(strength_a - CRITICAL_STRENGTH)


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise DomainError(f"alpha must be finite and positive, got {alpha!r}")


def arg_gamma_term(alpha: float) -> float:
    """arg Gamma(1 - i*alpha) on the branch continuous in alpha from 0."""
    _check_alpha(alpha)
    return log_gamma(complex(1.0, -alpha)).imag


def kappa_n(alpha: float, n: int, *, scale: float = 2.0) -> float:
    """Wave number of the n-th ladder state, n = 0 being the deepest.

    Closed-form inversion of the quantization condition:

        kappa_n = scale * exp(-((n + 1/2)*pi + arg Gamma(1 - i*alpha)) / alpha)

    The scale keyword sets the inverse-length prefactor; the default 2.0
    matches the hbar = m = 1 convention used throughout this module.
    """
    _check_alpha(alpha)
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"level index must be a nonnegative int, got {n!r}")
    if not (math.isfinite(scale) and scale > 0.0):
        raise DomainError(f"scale must be finite and positive, got {scale!r}")
    phase = (n + 0.5) * math.pi + arg_gamma_term(alpha)
    return scale * math.exp(-phase / alpha)


def ladder_residual(alpha: float, kappa: float, n: int, *, scale: float = 2.0) -> float:
    """Quantization-condition residual for a candidate wave number.

    Returns alpha*ln(scale/kappa) - arg Gamma(1 - i*alpha) - (n + 1/2)*pi,
    which vanishes exactly when kappa is the n-th ladder root.
    """
    _check_alpha(alpha)
    if not (math.isfinite(kappa) and kappa > 0.0):
        raise DomainError(f"kappa must be finite and positive, got {kappa!r}")
    return alpha * math.log(scale / kappa) - arg_gamma_term(alpha) - (n + 0.5) * math.pi


@dataclass(frozen=True)
class LadderEntry:
    n: int
    kappa: float
    epsilon: float


@dataclass(frozen=True)
class BoundLadder:
    """Ladder states for one coupling, deepest first.

    truncated_at is the first level index whose energy magnitude fell
    below the smallest positive normal float and was therefore omitted;
    None means every requested level is present.
    """

    alpha: float
    scale: float
    entries: tuple[LadderEntry, ...]
    truncated_at: int | None = None

    @property
    def energy_ratio(self) -> float:
        """Theoretical ratio epsilon_{n+1} / epsilon_n = exp(-2*pi/alpha)."""
        return math.exp(-2.0 * math.pi / self.alpha)


def build_ladder(alpha: float, n_max: int, *, scale: float = 2.0) -> BoundLadder:
    """Levels n = 0 .. n_max, truncated before energies go subnormal.

    Each kappa comes from the closed form in kappa_n, so consecutive
    energies keep the geometric ratio exp(-2*pi/alpha) to rounding
    level.  Levels whose |epsilon| would land below the normal float
    range are dropped rather than returned as denormal noise, and the
    first dropped index is reported as truncated_at.
    """
    _check_alpha(alpha)
    if not isinstance(n_max, int) or n_max < 0:
        raise DomainError(f"n_max must be a nonnegative int, got {n_max!r}")
    entries: list[LadderEntry] = []
    truncated_at: int | None = None
    for n in range(n_max + 1):
        kappa = kappa_n(alpha, n, scale=scale)
        epsilon = -0.5 * kappa * kappa
        if abs(epsilon) < sys.float_info.min:
            truncated_at = n
            break
        entries.append(LadderEntry(n=n, kappa=kappa, epsilon=epsilon))
    return BoundLadder(
        alpha=alpha, scale=scale, entries=tuple(entries), truncated_at=truncated_at
    )


def geometric_energies(ground_energy: float, alpha: float, count: int) -> list[float]:
    """Geometric tower ground_energy * exp(-2*n*pi/alpha), n = 0 .. count-1.

    ground_energy must be negative (a binding energy) and count a
    nonnegative int.
    """
    _check_alpha(alpha)
    if not (math.isfinite(ground_energy) and ground_energy < 0.0):
        raise DomainError(
            f"ground energy must be finite and negative, got {ground_energy!r}"
        )
    if not isinstance(count, int) or count < 0:
        raise DomainError(f"count must be a nonnegative int, got {count!r}")
    step = -2.0 * math.pi / alpha
    return [ground_energy * math.exp(step * n) for n in range(count)]
