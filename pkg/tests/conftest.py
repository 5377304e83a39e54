import pytest

from bzbot.lab import Scenario, run_scenario
from bzbot.marble import LaserStimulus

# Golden values, derived once with an independent fine-tolerance oracle
# (scipy Radau at rtol=1e-10, atol=1e-12; see test docstrings for the
# derivations). Dimensionless unless suffixed.
GOLDEN_PERIOD_S = 19.9340127          # 5.111285306 units * t_scale 3.9
GOLDEN_AMPLITUDE_V = 0.250909         # peak-to-trough of v, unforced
GOLDEN_V_MEAN = 0.070645              # one-period time average of v
GOLDEN_V_MEDIAN = 0.036310            # one-period median of v
GOLDEN_FIXED_POINT_U = 0.011605268    # root of the unforced rate law
GOLDEN_GAIN = 0.159420                # 0.040 V / GOLDEN_AMPLITUDE_V


@pytest.fixture(scope="session")
def inhibit_trace():
    """95 s run with one suppressing pulse at 50 s, raw stream kept."""
    scenario = Scenario(
        name="inhibit-probe", duration_s=95.0,
        stimuli=(LaserStimulus(t_on_s=50.0, duration_s=10.0, amplitude=0.2),),
        seed=5)
    return run_scenario(scenario, keep_raw=True), scenario.stimuli[0]


@pytest.fixture(scope="session")
def excite_trace():
    """95 s run with one excite kick at 50 s, raw stream kept."""
    scenario = Scenario(
        name="excite-probe", duration_s=95.0,
        stimuli=(LaserStimulus(t_on_s=50.0, duration_s=10.0, amplitude=1.2,
                               mode="excite"),),
        seed=5)
    return run_scenario(scenario, keep_raw=True), scenario.stimuli[0]
