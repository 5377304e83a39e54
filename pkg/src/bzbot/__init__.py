"""Simulator of a wheeled robot steered by a chemical-oscillator marble."""

from .controller import ControlConfig, ControllerError, SteerDecision, decide
from .lab import (
    BUILTIN_SCENARIOS,
    ExperimentTrace,
    GaussianFit,
    LabError,
    Scenario,
    ScenarioAborted,
    TraceParseError,
    characterize_response,
    fit_normal,
    histogram,
    read_trace,
    run_scenario,
    write_trace,
)
from .marble import (
    CalibrationError,
    ElectrodeCalibration,
    LaserStimulus,
    LightCoupling,
    Marble,
    MarbleError,
    PotentialSample,
    calibrate,
    potential,
    quantize_adc,
)
from .oregonator import (
    IntegrationError,
    LimitCycleSummary,
    OregonatorError,
    OscillatorParams,
    OscillatorState,
    derivatives,
    find_limit_cycle,
    step,
)
from .robot import MotionConfig, Pose, RobotError, apply, trajectory

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SCENARIOS",
    "CalibrationError",
    "ControlConfig",
    "ControllerError",
    "ElectrodeCalibration",
    "ExperimentTrace",
    "GaussianFit",
    "IntegrationError",
    "LabError",
    "LaserStimulus",
    "LightCoupling",
    "LimitCycleSummary",
    "Marble",
    "MarbleError",
    "MotionConfig",
    "OregonatorError",
    "OscillatorParams",
    "OscillatorState",
    "Pose",
    "PotentialSample",
    "RobotError",
    "Scenario",
    "ScenarioAborted",
    "SteerDecision",
    "TraceParseError",
    "apply",
    "calibrate",
    "characterize_response",
    "decide",
    "derivatives",
    "find_limit_cycle",
    "fit_normal",
    "histogram",
    "potential",
    "quantize_adc",
    "read_trace",
    "run_scenario",
    "step",
    "trajectory",
    "write_trace",
]
