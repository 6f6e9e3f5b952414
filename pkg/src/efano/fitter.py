"""Least-squares fitting of sampled cross sections to resonance profiles.

The optimizer is damped Gauss-Newton (Levenberg-Marquardt with the
damping term scaled by the diagonal of J^T J) over the parameter vector
(E_r, log Gamma, q, log peak) for the Fano model, peak being the
profile maximum sigma0*(1+q^2), and (E_r, log Gamma, log sigma0) for
the Breit-Wigner model.  Fitting the positive quantities in log form
keeps them positive without constraint handling, and the diagonal
damping makes the iteration invariant under rescaling of the data, so
fits commute with changes of cross-section units.  Residual derivatives
are analytic.

Starting points come from the profile geometry itself: the interference
zero sits at E_r - q*Gamma/2, the peak at E_r + Gamma/(2*q) with height
sigma0*(1+q^2), and the wings approach sigma0, which together invert
for all four parameters from the locations of the sampled extrema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DegenerateCurveError, DomainError
from .profiles import (
    MIN_CURVE_SAMPLES,
    BreitWignerParameters,
    CrossSectionCurve,
    FanoParameters,
)

__all__ = [
    "MAX_ITERATIONS",
    "SSE_RTOL",
    "GRADIENT_ATOL",
    "Q_CAP",
    "INIT_Q_CAP",
    "FitReport",
    "initial_guess_fano",
    "initial_guess_breit_wigner",
    "fit",
    "compare_models",
    "report_to_json_dict",
]

MAX_ITERATIONS = 200
SSE_RTOL = 1e-12
GRADIENT_ATOL = 1e-10
# Bound on |q| during optimization: beyond this the profile is a
# Lorentzian to machine precision and the q direction goes flat.
Q_CAP = 1e6
# Bound on |q| coming out of the initializer when no dip is visible.
INIT_Q_CAP = 1e3

# exp() overflows past ~709.8; keeping the log-parameters inside this
# band keeps every model evaluation finite.
_LOG_BOUND = 700.0

FittedParameters = Union[FanoParameters, BreitWignerParameters]


@dataclass(frozen=True)
class FitReport:
    """Outcome of one least-squares fit.

    converged means the stop was a convergence criterion (sse stall or
    small gradient), not the iteration cap; the best parameters found
    are reported either way.  lorentzian_limit flags a Fano fit that
    ended pinned at the |q| cap, where the shape is indistinguishable
    from a Breit-Wigner peak.
    """

    model: str
    params: FittedParameters
    sse: float
    iterations: int
    converged: bool
    initial_guess: FittedParameters
    lorentzian_limit: bool = False


def _model_jac_fano(theta: np.ndarray, E: np.ndarray):
    # Internal Fano parameters are (E_r, log Gamma, q, log peak) with
    # peak = sigma0*(1+q^2), the height of the profile maximum.  In the
    # Lorentzian limit the peak stays finite while sigma0 ~ 1/q^2, so
    # parameterizing by the peak turns the large-q valley into a
    # straight line the Gauss-Newton step can follow to the q cap
    # instead of creeping along a curved trade-off with sigma0.
    E_r, lgam, q, lpeak = theta
    gamma = math.exp(lgam)
    peak = math.exp(lpeak)
    big = 1.0 + q * q
    eps = (E - E_r) / (0.5 * gamma)
    denom = 1.0 + eps * eps
    u = q + eps
    f = peak * u * u / (big * denom)
    core = 2.0 * peak * u * (1.0 - q * eps)
    dfde = core / (big * denom * denom)
    J = np.empty((E.size, 4))
    J[:, 0] = dfde * (-2.0 / gamma)
    J[:, 1] = -eps * dfde
    J[:, 2] = core / (big * big * denom)
    J[:, 3] = f
    return f, J


def _model_jac_bw(theta: np.ndarray, E: np.ndarray):
    E_r, lgam, lsig = theta
    gamma = math.exp(lgam)
    sigma0 = math.exp(lsig)
    eps = (E - E_r) / (0.5 * gamma)
    denom = 1.0 + eps * eps
    f = sigma0 / denom
    dfde = -2.0 * eps * sigma0 / (denom * denom)
    J = np.empty((E.size, 3))
    J[:, 0] = dfde * (-2.0 / gamma)
    J[:, 1] = -eps * dfde
    J[:, 2] = f
    return f, J


def _clamp_fano(theta: np.ndarray) -> np.ndarray:
    out = theta.copy()
    out[1] = min(max(out[1], -_LOG_BOUND), _LOG_BOUND)
    out[2] = min(max(out[2], -Q_CAP), Q_CAP)
    out[3] = min(max(out[3], -_LOG_BOUND), _LOG_BOUND)
    return out


def _clamp_bw(theta: np.ndarray) -> np.ndarray:
    out = theta.copy()
    out[1] = min(max(out[1], -_LOG_BOUND), _LOG_BOUND)
    out[2] = min(max(out[2], -_LOG_BOUND), _LOG_BOUND)
    return out


def _minimize(
    model_jac: Callable,
    clamp: Callable[[np.ndarray], np.ndarray],
    theta0: np.ndarray,
    E: np.ndarray,
    y: np.ndarray,
):
    """Damped Gauss-Newton loop.  Deterministic for fixed inputs."""
    theta = clamp(np.asarray(theta0, dtype=np.float64))
    f, J = model_jac(theta, E)
    r = f - y
    sse = float(r @ r)
    lam = 1e-3
    iterations = 0
    converged = False
    for it in range(1, MAX_ITERATIONS + 1):
        iterations = it
        grad = 2.0 * (J.T @ r)
        if float(np.max(np.abs(grad))) < GRADIENT_ATOL:
            converged = True
            break
        A = J.T @ J
        diag = np.diag(A).copy()
        diag[diag <= 0.0] = 1.0
        accepted = False
        rel_drop = 0.0
        while lam <= 1e14:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -0.5 * grad)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and bool(np.all(np.isfinite(step))):
                cand = clamp(theta + step)
                f_c, J_c = model_jac(cand, E)
                r_c = f_c - y
                sse_c = float(r_c @ r_c)
                if math.isfinite(sse_c) and sse_c <= sse:
                    rel_drop = (sse - sse_c) / max(sse, 1e-300)
                    theta, f, J, r, sse = cand, f_c, J_c, r_c, sse_c
                    lam = max(lam / 8.0, 1e-12)
                    accepted = True
                    break
            lam *= 8.0
        if not accepted:
            # No damping level yields an improving step: numerically at
            # a minimum, equivalent to a zero sse drop.
            converged = True
            break
        if rel_drop < SSE_RTOL:
            converged = True
            break
    return theta, sse, iterations, converged


def _interior(i: int, n: int) -> bool:
    return 0 < i < n - 1


def _half_crossings(
    E: np.ndarray, y: np.ndarray, i_ref: int, level: float, rising: bool
) -> float:
    """Full width of the feature at y == level around sample i_ref.

    Scans outward for the first sample past the level (above it when
    rising, below when falling) and interpolates linearly; a side that
    never crosses contributes its grid edge.
    """

    def scan(direction: int) -> float:
        j = i_ref
        while True:
            j2 = j + direction
            if j2 < 0 or j2 >= E.size:
                return float(E[j])
            crossed = y[j2] >= level if rising else y[j2] <= level
            if crossed:
                y0, y1 = y[j], y[j2]
                if y1 == y0:
                    return float(E[j2])
                t = (level - y0) / (y1 - y0)
                return float(E[j] + t * (E[j2] - E[j]))
            j = j2

    left = scan(-1)
    right = scan(+1)
    return right - left


def initial_guess_fano(curve: CrossSectionCurve) -> FanoParameters:
    """Starting parameters read off the curve's extremum geometry.

    With both extrema in the grid interior the full inversion applies:
    the peak-to-wing ratio gives 1 + q^2, the signed dip-to-peak
    separation gives Gamma, and the dip location anchors E_r.  A lone
    interior peak reads as the Lorentzian limit (|q| reported at
    INIT_Q_CAP); a lone interior dip as a window profile (q near 0).
    Monotone data raises DegenerateCurveError.
    """
    E = curve.energies
    y = curve.sigmas
    n = E.size
    i_max = int(np.argmax(y))
    i_min = int(np.argmin(y))
    y_max = float(y[i_max])
    if y_max <= 0.0:
        raise DegenerateCurveError("curve is identically zero")
    has_peak = _interior(i_max, n)
    has_dip = _interior(i_min, n)
    baseline = 0.5 * (float(y[0]) + float(y[-1]))
    span = float(E[-1] - E[0])
    if has_peak and has_dip:
        ratio = y_max / max(baseline, 1e-9 * y_max)
        q_mag = math.sqrt(max(ratio - 1.0, 1e-4))
        q_mag = min(max(q_mag, 0.01), INIT_Q_CAP)
        sign = 1.0 if E[i_min] < E[i_max] else -1.0
        q = sign * q_mag
        d = float(E[i_max] - E[i_min])
        gamma = 2.0 * q * d / (1.0 + q * q)
        if not gamma > 0.0:
            gamma = 0.1 * span
        e_r = float(E[i_min]) + 0.5 * q * gamma
        sigma0 = y_max / (1.0 + q * q)
    elif has_peak:
        q = INIT_Q_CAP
        level = 0.5 * (y_max + min(float(y[0]), float(y[-1])))
        gamma = _half_crossings(E, y, i_max, level, rising=False)
        if not gamma > 0.0:
            gamma = 0.1 * span
        e_r = float(E[i_max])
        sigma0 = y_max / (1.0 + q * q)
    elif has_dip:
        q = 0.0
        y_min = float(y[i_min])
        sigma0 = max(baseline, 1e-3 * y_max)
        level = 0.5 * (sigma0 + y_min)
        gamma = _half_crossings(E, y, i_min, level, rising=True)
        if not gamma > 0.0:
            gamma = 0.1 * span
        e_r = float(E[i_min])
    else:
        raise DegenerateCurveError(
            "no interior extremum: monotone data cannot seed a resonance fit"
        )
    return FanoParameters(
        E_r=e_r, Gamma=gamma, q=q, sigma0=max(sigma0, 1e-12 * y_max)
    )


def initial_guess_breit_wigner(curve: CrossSectionCurve) -> BreitWignerParameters:
    """Peak location, height, and full width at half maximum.

    Dip-only (window) data has no peak to read; the guess then centers
    on the dip with the shoulder height as scale, leaving the optimizer
    to do the rest.  Monotone data raises DegenerateCurveError.
    """
    E = curve.energies
    y = curve.sigmas
    n = E.size
    i_max = int(np.argmax(y))
    i_min = int(np.argmin(y))
    y_max = float(y[i_max])
    if y_max <= 0.0:
        raise DegenerateCurveError("curve is identically zero")
    span = float(E[-1] - E[0])
    if _interior(i_max, n):
        gamma = _half_crossings(E, y, i_max, 0.5 * y_max, rising=False)
        if not gamma > 0.0:
            gamma = 0.1 * span
        return BreitWignerParameters(E_r=float(E[i_max]), Gamma=gamma, sigma0=y_max)
    if _interior(i_min, n):
        shoulder = max(float(y[0]), float(y[-1]))
        return BreitWignerParameters(
            E_r=float(E[i_min]),
            Gamma=0.5 * span,
            sigma0=max(shoulder, 1e-3 * y_max),
        )
    raise DegenerateCurveError(
        "no interior extremum: monotone data cannot seed a resonance fit"
    )


def _check_curve(curve: CrossSectionCurve) -> None:
    if not isinstance(curve, CrossSectionCurve):
        raise DomainError(f"expected a CrossSectionCurve, got {type(curve).__name__}")
    if len(curve) < MIN_CURVE_SAMPLES:
        raise DomainError(
            f"fit needs at least {MIN_CURVE_SAMPLES} samples, got {len(curve)}"
        )


def fit(
    curve: CrossSectionCurve,
    model: str,
    guess: FittedParameters | None = None,
) -> FitReport:
    """Least-squares fit of one model to a curve.

    model is "fano" or "breit_wigner".  When guess is omitted the
    geometric initializer runs first.  The fit minimizes the unweighted
    sum of squared residuals and is deterministic: identical curve,
    guess, and settings give identical reports.  Hitting the iteration
    cap reports the best parameters found with converged=False rather
    than raising.
    """
    _check_curve(curve)
    E = curve.energies
    y = curve.sigmas
    if model == "fano":
        if guess is None:
            guess = initial_guess_fano(curve)
        elif not isinstance(guess, FanoParameters):
            raise DomainError("fano fit requires FanoParameters as guess")
        theta0 = np.array(
            [
                guess.E_r,
                math.log(guess.Gamma),
                guess.q,
                math.log(guess.sigma0) + math.log1p(guess.q * guess.q),
            ]
        )
        theta, sse, iterations, converged = _minimize(
            _model_jac_fano, _clamp_fano, theta0, E, y
        )
        q_fit = float(theta[2])
        params = FanoParameters(
            E_r=float(theta[0]),
            Gamma=math.exp(theta[1]),
            q=q_fit,
            sigma0=math.exp(theta[3]) / (1.0 + q_fit * q_fit),
        )
        at_cap = abs(params.q) >= Q_CAP
        return FitReport(
            model="fano",
            params=params,
            sse=sse,
            iterations=iterations,
            converged=converged,
            initial_guess=guess,
            lorentzian_limit=at_cap,
        )
    if model == "breit_wigner":
        if guess is None:
            guess = initial_guess_breit_wigner(curve)
        elif not isinstance(guess, BreitWignerParameters):
            raise DomainError("breit_wigner fit requires BreitWignerParameters as guess")
        theta0 = np.array([guess.E_r, math.log(guess.Gamma), math.log(guess.sigma0)])
        theta, sse, iterations, converged = _minimize(
            _model_jac_bw, _clamp_bw, theta0, E, y
        )
        params = BreitWignerParameters(
            E_r=float(theta[0]), Gamma=math.exp(theta[1]), sigma0=math.exp(theta[2])
        )
        return FitReport(
            model="breit_wigner",
            params=params,
            sse=sse,
            iterations=iterations,
            converged=converged,
            initial_guess=guess,
        )
    raise DomainError(f"unknown model {model!r}; use 'fano' or 'breit_wigner'")


def compare_models(curve: CrossSectionCurve) -> tuple[FitReport, FitReport]:
    """Fit both models to the same curve; returns (fano, breit_wigner)."""
    return fit(curve, "fano"), fit(curve, "breit_wigner")


def report_to_json_dict(report: FitReport) -> dict:
    """Flat JSON-ready view: model, E_r, Gamma, q (fano only), sigma0,
    sse, iterations, converged."""
    p = report.params
    out: dict = {"model": report.model, "E_r": p.E_r, "Gamma": p.Gamma}
    if isinstance(p, FanoParameters):
        out["q"] = p.q
    out["sigma0"] = p.sigma0
    out["sse"] = report.sse
    out["iterations"] = report.iterations
    out["converged"] = report.converged
    return out
