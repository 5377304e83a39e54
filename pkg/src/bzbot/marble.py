"""The liquid-marble abstraction: laser schedule, electrodes, ADC.

A ``Marble`` owns one oscillator, a schedule of laser stimuli, and the
measurement chain that turns the oxidized-catalyst fraction v into a
quantized electrode voltage:

    volts = gain * (v - v_ref) + gaussian noise, quantized to adc_step

Laser light couples into the chemistry through a first-order transduction
with a fast rise and a slow decay: the photoproduct that inhibits the
oscillation builds up within a second of illumination but is consumed over
tens of seconds, so a 10 s pulse keeps the oscillation suppressed well
after the light goes off. Excite-mode stimuli instead kick the oxidized
fraction v upward once, at their onset.

The raw potential is sampled every 10 ms of simulation time; the control
loop consumes every 200th sample.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .oregonator import (
    OscillatorParams,
    OscillatorState,
    hysteresis_extrema,
    sample_attractor,
    step,
)

SAMPLE_PERIOD_S = 0.01
DEFAULT_TARGET_AMP = 0.040

# A point on the unforced canonical attractor, recorded from a settled
# high-accuracy run; fresh simulations start here so the first seconds are
# already periodic.
DEFAULT_INITIAL_STATE = OscillatorState(u=0.0035522, v=0.0086906)


class MarbleError(ValueError):
    """Invalid stimulus, calibration, or marble operation."""


class CalibrationError(MarbleError):
    """Electrode calibration could not be derived (no oscillation)."""


@dataclass(frozen=True)
class LaserStimulus:
    """A timed laser pulse.

    Wavelength and power of the physical pen are metadata; what matters to
    the model is the mode and the amplitude: an inhibit-mode pulse raises
    the light flux phi by ``amplitude`` while lit, an excite-mode pulse
    kicks v up by ``amplitude`` at ``t_on_s``.
    """

    t_on_s: float
    duration_s: float = 10.0
    amplitude: float = 0.2
    mode: str = "inhibit"
    wavelength_nm: float = 532.0
    power_mw: float = 5.0

    def __post_init__(self):
        if not all(math.isfinite(x) for x in
                   (self.t_on_s, self.duration_s, self.amplitude)):
            raise MarbleError("stimulus fields must be finite")
        if self.duration_s <= 0:
            raise MarbleError("stimulus duration must be > 0")
        if self.amplitude <= 0:
            raise MarbleError("stimulus amplitude must be > 0")
        if self.mode not in ("inhibit", "excite"):
            raise MarbleError(f"unknown stimulus mode {self.mode!r}")

    @property
    def t_off_s(self) -> float:
        return self.t_on_s + self.duration_s

    def covers(self, t_s: float) -> bool:
        return self.t_on_s <= t_s < self.t_off_s


@dataclass(frozen=True)
class ElectrodeCalibration:
    gain: float = 0.16            # volts per unit of v, sign configurable
    v_ref: float = 0.07           # oxidation level that reads as 0 V
    noise_std: float = 0.5e-3     # volts
    adc_step: float = 0.2e-3      # volts

    def __post_init__(self):
        if self.gain == 0 or not math.isfinite(self.gain):
            raise MarbleError("gain must be nonzero and finite")
        if self.adc_step <= 0:
            raise MarbleError("adc_step must be > 0")
        if self.noise_std < 0:
            raise MarbleError("noise_std must be >= 0")


@dataclass(frozen=True)
class LightCoupling:
    """First-order transduction from light intensity to inhibitory flux."""

    tau_on_s: float = 0.5
    tau_off_s: float = 15.0

    def __post_init__(self):
        if self.tau_on_s <= 0 or self.tau_off_s <= 0:
            raise MarbleError("transduction time constants must be > 0")


@dataclass(frozen=True)
class PotentialSample:
    t_s: float
    volts: float
    laser_on: bool


def quantize_adc(volts: float, adc_step: float) -> float:
    """Round to the nearest multiple of ``adc_step``, halves away from zero."""
    if adc_step <= 0:
        raise MarbleError("adc_step must be > 0")
    n = math.floor(abs(volts) / adc_step + 0.5)
    if n == 0:
        return 0.0  # avoid the negative-zero reading
    return math.copysign(n * adc_step, volts)


def potential(state: OscillatorState, calib: ElectrodeCalibration,
              rng: np.random.Generator) -> float:
    """Raw (pre-quantization) electrode voltage for one oscillator state."""
    return calib.gain * (state.v - calib.v_ref) + rng.normal(0.0, calib.noise_std)


def _calibration_from_series(times, values,
                             target_amp: float = DEFAULT_TARGET_AMP
                             ) -> ElectrodeCalibration:
    """Calibration from a sampled oxidation series: v_ref is the time
    average over the last full cycle, gain maps its peak-to-trough onto
    ``target_amp`` volts."""
    peaks, troughs = hysteresis_extrema(times, values)
    npairs = min(len(peaks), len(troughs))
    if len(peaks) < 3 or npairs < 1:
        raise CalibrationError("series does not oscillate")
    amp = (sum(p for _, p in peaks[:npairs]) / npairs
           - sum(t for _, t in troughs[:npairs]) / npairs)
    if amp <= 1e-3:
        raise CalibrationError("series does not oscillate")
    t_a, t_b = peaks[-2][0], peaks[-1][0]
    seg = [v for t, v in zip(times, values) if t_a <= t < t_b]
    v_ref = sum(seg) / len(seg)
    return ElectrodeCalibration(gain=target_amp / amp, v_ref=v_ref)


def calibrate(params: OscillatorParams,
              target_amp: float = DEFAULT_TARGET_AMP) -> ElectrodeCalibration:
    """Derive gain and v_ref from the unforced limit cycle.

    v_ref is the time-average of v over one period, gain maps the cycle
    peak-to-trough onto ``target_amp`` volts. Raises ``CalibrationError``
    when the unforced system does not oscillate.
    """
    times, values = sample_attractor(params, params.phi0)
    try:
        return _calibration_from_series(times, values, target_amp)
    except CalibrationError:
        raise CalibrationError("unforced system does not oscillate") from None


class Marble:
    """One simulated marble: oscillator, laser schedule, measurement chain.

    Mutated by exactly one driver; stimulus scheduling is safe to interleave
    between ``advance_sample`` calls. Time advances in 10 ms samples.
    """

    def __init__(self, params: OscillatorParams | None = None,
                 calib: ElectrodeCalibration | None = None,
                 light: LightCoupling | None = None,
                 state: OscillatorState = DEFAULT_INITIAL_STATE,
                 seed: int = 0):
        self.params = params if params is not None else OscillatorParams()
        self.calib = calib if calib is not None else calibrate(self.params)
        self.light = light if light is not None else LightCoupling()
        self.state = state
        self.rng = np.random.default_rng(seed)
        self._schedule: list[LaserStimulus] = []
        self._pending_kicks: list[tuple[float, float]] = []  # (t_on, amplitude)
        self._sample_index = 0
        self._phi_mem = self.params.phi0
        self.last_sample: PotentialSample | None = None

    @property
    def t_s(self) -> float:
        return self._sample_index * SAMPLE_PERIOD_S

    @property
    def schedule(self) -> tuple[LaserStimulus, ...]:
        return tuple(self._schedule)

    def schedule_laser(self, stimulus: LaserStimulus) -> None:
        """Append a stimulus; rejects onsets in the past."""
        if stimulus.t_on_s < self.t_s:
            raise MarbleError(
                f"stimulus onset {stimulus.t_on_s} s is before now ({self.t_s} s)")
        bisect.insort(self._schedule, stimulus, key=lambda s: s.t_on_s)
        if stimulus.mode == "excite":
            bisect.insort(self._pending_kicks, (stimulus.t_on_s, stimulus.amplitude))

    def phi_at(self, t_s: float) -> float:
        """Optical intensity at time t: baseline plus the strongest covering
        inhibit pulse (overlaps saturate rather than sum)."""
        amps = [s.amplitude for s in self._schedule
                if s.mode == "inhibit" and s.covers(t_s)]
        return self.params.phi0 + (max(amps) if amps else 0.0)

    def laser_on(self, t_s: float) -> bool:
        return any(s.covers(t_s) for s in self._schedule)

    def _boundaries(self, t0: float, t1: float) -> list[float]:
        cuts = {t0, t1}
        for s in self._schedule:
            for edge in (s.t_on_s, s.t_off_s):
                if t0 < edge < t1:
                    cuts.add(edge)
        return sorted(cuts)

    def _apply_kicks(self, t_s: float) -> None:
        while self._pending_kicks and self._pending_kicks[0][0] <= t_s:
            _, amplitude = self._pending_kicks.pop(0)
            self.state = OscillatorState(u=self.state.u,
                                         v=self.state.v + amplitude)

    def advance_sample(self) -> PotentialSample:
        """Advance one 10 ms sample period and measure the electrodes."""
        t0 = self.t_s
        self._sample_index += 1
        t1 = self._sample_index * SAMPLE_PERIOD_S
        self._apply_kicks(t0)
        cuts = self._boundaries(t0, t1)
        for a, b in zip(cuts, cuts[1:]):
            self._apply_kicks(a)
            target = self.phi_at(0.5 * (a + b))
            tau = self.light.tau_on_s if target > self._phi_mem else self.light.tau_off_s
            m0 = self._phi_mem

            def phi_of_t(t_rel, m0=m0, target=target, tau=tau):
                return target + (m0 - target) * math.exp(-t_rel / tau)

            self.state = step(self.state, b - a, self.params, phi_of_t)
            self._phi_mem = target + (m0 - target) * math.exp(-(b - a) / tau)
        self._apply_kicks(t1)
        raw = potential(self.state, self.calib, self.rng)
        volts = quantize_adc(raw, self.calib.adc_step)
        self.last_sample = PotentialSample(t_s=t1, volts=volts,
                                           laser_on=self.laser_on(t1))
        return self.last_sample


def run_samples(marble: Marble, n: int) -> list[PotentialSample]:
    """Convenience: advance and collect ``n`` consecutive samples."""
    return [marble.advance_sample() for _ in range(n)]
