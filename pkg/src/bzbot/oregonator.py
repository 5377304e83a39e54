"""Two-variable photosensitive Oregonator oscillator.

This is the lumped (well-stirred) surrogate for the marble chemistry. In
dimensionless time the model reads

    du/dt = (u - u^2 - (f*v + phi) * (u - q) / (u + q)) / epsilon
    dv/dt = u - v

where u is the autocatalytic activator, v the oxidized-catalyst fraction
that the electrodes sense, and phi >= 0 an inhibitory light flux. One
dimensionless time unit corresponds to ``t_scale`` seconds of wall-clock
time, so the canonical configuration (epsilon=0.05, f=1.4, q=0.002,
t_scale=3.9) oscillates with a period just under 20 s.

Integration uses an embedded Cash-Karp 5(4) Runge-Kutta pair with adaptive
sub-stepping. Everything in this module is pure and deterministic:
identical inputs give bitwise-identical outputs on one platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence


class OregonatorError(ValueError):
    """Invalid oscillator state, parameters, or input."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed; ``t_reached`` is the last good time (s)."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(message)
        self.t_reached = t_reached


@dataclass(frozen=True)
class OscillatorParams:
    """Model constants plus the wall-clock scale of one dimensionless unit.

    ``t_scale`` should be chosen so the unforced period lands in 10-40 s;
    the shipped default configuration satisfies this (see ``lab``).
    """

    epsilon: float = 0.05
    f: float = 1.4
    q: float = 0.002
    phi0: float = 0.0
    t_scale: float = 3.9

    def __post_init__(self):
        if not all(math.isfinite(x) for x in
                   (self.epsilon, self.f, self.q, self.phi0, self.t_scale)):
            raise OregonatorError("oscillator parameters must be finite")
        if self.epsilon <= 0 or self.f <= 0 or self.t_scale <= 0:
            raise OregonatorError("epsilon, f and t_scale must be positive")
        if not 0 < self.q < 1:
            raise OregonatorError("q must lie in (0, 1)")
        if self.phi0 < 0:
            raise OregonatorError("phi0 must be >= 0")


@dataclass(frozen=True)
class OscillatorState:
    """Activator u and oxidized-catalyst fraction v (both dimensionless)."""

    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise OregonatorError("oscillator state must be finite")
        if self.u <= 0 or self.v < 0:
            raise OregonatorError(f"state outside domain: u={self.u}, v={self.v}")


@dataclass(frozen=True)
class LimitCycleSummary:
    """Outcome of a limit-cycle search at constant light intensity."""

    period: float           # seconds; 0.0 when not oscillating
    amplitude_v: float      # peak-to-trough of v; 0.0 when not oscillating
    oscillating: bool


def derivatives(state: OscillatorState, params: OscillatorParams,
                phi: float) -> tuple[float, float]:
    """Right-hand side (du/dt, dv/dt) in dimensionless time.

    Pure function; rejects non-finite inputs with ``OregonatorError``.
    """
    if not math.isfinite(phi):
        raise OregonatorError("phi must be finite")
    if phi < 0:
        raise OregonatorError("phi must be >= 0")
    u, v = state.u, state.v
    try:
        du = (u - u * u
              - (params.f * v + phi) * (u - params.q) / (u + params.q)) / params.epsilon
        dv = u - v
    except OverflowError as err:
        raise OregonatorError("derivatives overflow") from err
    if not (math.isfinite(du) and math.isfinite(dv)):
        raise OregonatorError("derivatives are not finite")
    return du, dv


# Cash-Karp 5(4) tableau.
_C2, _C3, _C4, _C5, _C6 = 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 3 / 10, -9 / 10, 6 / 5
_A51, _A52, _A53, _A54 = -11 / 54, 5 / 2, -70 / 27, 35 / 27
_A61, _A62, _A63, _A64, _A65 = (1631 / 55296, 175 / 512, 575 / 13824,
                                44275 / 110592, 253 / 4096)
_B1, _B3, _B4, _B6 = 37 / 378, 250 / 621, 125 / 594, 512 / 1771
# 5th-minus-4th order coefficients for the local error estimate.
_E1, _E3, _E4, _E5, _E6 = (-277 / 64512, 6925 / 370944, -6925 / 202752,
                           -277 / 14336, 277 / 7084)

_SAFETY = 0.9
_MIN_SHRINK = 0.2
_MAX_GROW = 5.0
_MAX_STEPS = 100_000


def _rk_step(u: float, v: float, tau: float, h: float,
             rhs: Callable[[float, float, float], tuple[float, float]]
             ) -> tuple[float, float, float, float]:
    """One Cash-Karp step from dimensionless time tau.

    Returns (u_new, v_new, err_u, err_v) where err is the embedded
    5th-vs-4th order difference.
    """
    k1u, k1v = rhs(tau, u, v)
    k2u, k2v = rhs(tau + _C2 * h, u + h * _A21 * k1u, v + h * _A21 * k1v)
    k3u, k3v = rhs(tau + _C3 * h,
                   u + h * (_A31 * k1u + _A32 * k2u),
                   v + h * (_A31 * k1v + _A32 * k2v))
    k4u, k4v = rhs(tau + _C4 * h,
                   u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u),
                   v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v))
    k5u, k5v = rhs(tau + _C5 * h,
                   u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u),
                   v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v))
    k6u, k6v = rhs(tau + _C6 * h,
                   u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u
                            + _A64 * k4u + _A65 * k5u),
                   v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v
                            + _A64 * k4v + _A65 * k5v))
    u_new = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B6 * k6u)
    v_new = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B6 * k6v)
    err_u = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u)
    err_v = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v)
    return u_new, v_new, err_u, err_v


def _integrate(u: float, v: float, span: float,
               rhs: Callable[[float, float, float], tuple[float, float]],
               rtol: float, atol: float, t_scale: float) -> tuple[float, float]:
    """Advance (u, v) over ``span`` dimensionless units with adaptive steps."""
    tau = 0.0
    h = min(span, 0.02)
    steps = 0
    while tau < span:
        if steps >= _MAX_STEPS:
            raise IntegrationError("step limit exceeded", tau * t_scale)
        steps += 1
        h = min(h, span - tau)
        try:
            u_new, v_new, err_u, err_v = _rk_step(u, v, tau, h, rhs)
            bad = not (math.isfinite(u_new) and math.isfinite(v_new))
        except OverflowError:
            bad = True
        if bad:
            h *= _MIN_SHRINK
            if h < 1e-14:
                raise IntegrationError("step size underflow", tau * t_scale)
            continue
        su = atol + rtol * max(abs(u), abs(u_new))
        sv = atol + rtol * max(abs(v), abs(v_new))
        err = math.sqrt(0.5 * ((err_u / su) ** 2 + (err_v / sv) ** 2))
        if err <= 1.0:
            tau += h
            u, v = u_new, v_new
            grow = _MAX_GROW if err == 0.0 else min(_MAX_GROW, _SAFETY * err ** -0.2)
            h *= max(grow, _MIN_SHRINK)
        else:
            h *= max(_MIN_SHRINK, _SAFETY * err ** -0.2)
            if h < 1e-14:
                raise IntegrationError("step size underflow", tau * t_scale)
    return u, v


def step(state: OscillatorState, dt: float, params: OscillatorParams,
         phi_of_t: Callable[[float], float] | None = None, *,
         rtol: float = 1e-6, atol: float = 1e-8) -> OscillatorState:
    """Advance the oscillator by ``dt`` seconds of wall-clock time.

    ``phi_of_t`` maps seconds since the start of the step to a light
    intensity; ``None`` holds the baseline ``params.phi0``. The function is
    evaluated at the internal Runge-Kutta stage times, so piecewise-constant
    and smoothly varying intensities are both handled.
    """
    if not math.isfinite(dt) or dt < 0:
        raise OregonatorError("dt must be finite and >= 0")
    if dt == 0.0:
        return state
    eps, f, q, t_scale = params.epsilon, params.f, params.q, params.t_scale
    if phi_of_t is None:
        phi0 = params.phi0

        def rhs(tau, u, v):
            return ((u - u * u - (f * v + phi0) * (u - q) / (u + q)) / eps,
                    u - v)
    else:
        def rhs(tau, u, v):
            phi = phi_of_t(tau * t_scale)
            return ((u - u * u - (f * v + phi) * (u - q) / (u + q)) / eps,
                    u - v)

    u, v = _integrate(state.u, state.v, dt / t_scale, rhs, rtol, atol, t_scale)
    return OscillatorState(u=u, v=v)


def hysteresis_extrema(times: Sequence[float], values: Sequence[float],
                       band_frac: float = 0.1, band: float | None = None
                       ) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    """Alternating (time, value) peaks and troughs of a sampled signal.

    An extremum is confirmed only once the signal has retreated from it by
    a hysteresis band, which rejects numerical ripple and measurement
    noise. The band is ``band_frac`` of the running amplitude (max minus
    min seen so far) unless a fixed absolute ``band`` is supplied; fixed
    bands suit noisy windows whose full range is known up front.
    """
    peaks: list[tuple[float, float]] = []
    troughs: list[tuple[float, float]] = []
    if not values:
        return peaks, troughs
    fixed_band = band
    run_min = run_max = values[0]
    cand_v = values[0]
    cand_t = times[0]
    direction = 0  # +1 tracking a peak, -1 tracking a trough, 0 undecided
    for t, x in zip(times, values):
        run_min = min(run_min, x)
        run_max = max(run_max, x)
        band = fixed_band if fixed_band is not None else band_frac * (run_max - run_min)
        if band <= 0.0:
            continue
        if direction == 0:
            if x >= cand_v:
                cand_v, cand_t = x, t
                if cand_v - run_min > band:
                    direction = 1
            if x <= cand_v and cand_v - x > band:
                direction = -1
                cand_v, cand_t = x, t
        elif direction > 0:
            if x > cand_v:
                cand_v, cand_t = x, t
            elif cand_v - x > band:
                peaks.append((cand_t, cand_v))
                direction = -1
                cand_v, cand_t = x, t
        else:
            if x < cand_v:
                cand_v, cand_t = x, t
            elif x - cand_v > band:
                troughs.append((cand_t, cand_v))
                direction = 1
                cand_v, cand_t = x, t
    return peaks, troughs


def _refine_peak(times: list[float], values: list[float], i: int) -> float:
    """Parabolic refinement of the time of a local maximum at index i."""
    if i <= 0 or i >= len(values) - 1:
        return times[i]
    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return times[i]
    d = 0.5 * (y0 - y2) / denom
    dt = times[1] - times[0]
    return times[i] + max(-1.0, min(1.0, d)) * dt


def sample_attractor(params: OscillatorParams, phi: float, *,
                     transient: float = 30.0, sample_dt: float = 0.01,
                     max_span: float = 160.0, target_peaks: int = 12,
                     rtol: float = 1e-6, atol: float = 1e-8,
                     start: OscillatorState | None = None
                     ) -> tuple[list[float], list[float]]:
    """Post-transient trajectory of v at constant phi, on a uniform grid.

    Integrates past a transient of ``transient`` dimensionless units, then
    walks in ``sample_dt`` increments until ``target_peaks`` maxima have been
    seen or ``max_span`` units have elapsed. Times are dimensionless.
    """
    if not math.isfinite(phi) or phi < 0:
        raise OregonatorError("phi must be finite and >= 0")
    state = start if start is not None else OscillatorState(u=0.5, v=0.3)
    hold = _with_phi0(params, phi)
    state = step(state, transient * params.t_scale, hold, rtol=rtol, atol=atol)
    times: list[float] = [0.0]
    values: list[float] = [state.v]
    n = int(round(max_span / sample_dt))
    for k in range(1, n + 1):
        state = step(state, sample_dt * params.t_scale, hold, rtol=rtol, atol=atol)
        times.append(k * sample_dt)
        values.append(state.v)
        if k % 400 == 0:
            peaks, _ = hysteresis_extrema(times, values)
            if len(peaks) >= target_peaks:
                break
    return times, values


def _with_phi0(params: OscillatorParams, phi: float) -> OscillatorParams:
    if phi == params.phi0:
        return params
    return OscillatorParams(epsilon=params.epsilon, f=params.f, q=params.q,
                            phi0=phi, t_scale=params.t_scale)


def find_limit_cycle(params: OscillatorParams,
                     phi: float | None = None) -> LimitCycleSummary:
    """Characterise the attractor at constant light intensity.

    Oscillating means at least three maxima of v whose cycle peak-to-trough
    exceeds 1e-3 after the transient. The period is the mean inter-peak
    interval converted to seconds.
    """
    if phi is None:
        phi = params.phi0
    times, values = sample_attractor(params, phi)
    peaks, troughs = hysteresis_extrema(times, values)
    npairs = min(len(peaks), len(troughs))
    if npairs >= 1:
        amp = (sum(p[1] for p in peaks[:npairs]) / npairs
               - sum(t[1] for t in troughs[:npairs]) / npairs)
    else:
        amp = 0.0
    qualifying = len(peaks) >= 3 and amp > 1e-3
    if not qualifying:
        return LimitCycleSummary(period=0.0, amplitude_v=0.0, oscillating=False)
    # Refine peak times on the uniform grid before averaging intervals.
    index = {t: i for i, t in enumerate(times)}
    refined = [_refine_peak(times, values, index[pt]) for pt, _ in peaks]
    intervals = [b - a for a, b in zip(refined, refined[1:])]
    period = (sum(intervals) / len(intervals)) * params.t_scale
    return LimitCycleSummary(period=period, amplitude_v=amp, oscillating=True)
