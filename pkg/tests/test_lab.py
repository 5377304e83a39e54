import io
import math

import numpy as np
import pytest

from bzbot.controller import ControlConfig, SteerDecision, decide
from bzbot.lab import (
    LabError,
    Scenario,
    ScenarioAborted,
    TraceParseError,
    characterize_response,
    decision_tallies,
    fit_normal,
    histogram,
    load_scenario,
    read_trace,
    resolve_scenario,
    run_scenario,
    scenario_e1,
    scenario_e2,
    scenario_e3,
    scenario_e4,
    scenario_from_dict,
    write_trace,
)
from bzbot.marble import LaserStimulus
from bzbot.robot import MotionConfig, apply

L, R, S = SteerDecision.LEFT, SteerDecision.RIGHT, SteerDecision.STAY


class TestBuiltinScenarios:
    def test_e1_balanced_between_left_and_right(self):
        trace = run_scenario(scenario_e1())
        t = decision_tallies(trace)
        moving = t["L"] + t["R"]
        assert moving > 0
        assert 0.35 <= t["L"] / moving <= 0.65

    def test_e1_bias_sits_at_the_cycle_median(self):
        # the balance point of the skewed relaxation waveform
        from conftest import GOLDEN_V_MEDIAN
        assert scenario_e1().overrides["v_ref"] == pytest.approx(
            GOLDEN_V_MEDIAN, abs=1e-4)

    def test_e2_left_run_after_first_pulse(self):
        trace = run_scenario(scenario_e2())
        best = run_len = 0
        for sample, decision in zip(trace.samples, trace.decisions):
            if 10.0 < sample.t_s <= 32.0 and decision is L:
                run_len += 1
                best = max(best, run_len)
            else:
                run_len = 0
        assert best >= 4

    def test_e3_moves_only_left_and_winds_anticlockwise(self):
        trace = run_scenario(scenario_e3())
        kinds = set(trace.decisions)
        assert R not in kinds
        assert L in kinds
        net_turns = sum(1 if d is L else -1 for d in trace.decisions if d is not S)
        assert net_turns * MotionConfig().turn_angle_deg > 0

    def test_e4_flips_right_to_left_after_first_pulse(self):
        trace = run_scenario(scenario_e4())
        pre = [d for s, d in zip(trace.samples, trace.decisions)
               if s.t_s <= 20.0 and d is not S]
        mid = [d for s, d in zip(trace.samples, trace.decisions)
               if 36.0 < s.t_s <= 60.0 and d is not S]
        assert pre and set(pre) == {R}
        assert mid and set(mid) == {L}

    def test_reproducibility_same_scenario_same_trace(self):
        a = run_scenario(scenario_e2(seed=9))
        b = run_scenario(scenario_e2(seed=9))
        assert [s.volts for s in a.samples] == [s.volts for s in b.samples]
        assert a.decisions == b.decisions
        assert a.poses == b.poses


class TestTraceConsistency:
    def test_decisions_match_decide_and_poses_match_apply(self):
        trace = run_scenario(scenario_e2())
        control = ControlConfig()
        motion = MotionConfig()
        pose = trace.poses[0]
        for sample, decision, next_pose in zip(trace.samples, trace.decisions,
                                               trace.poses[1:]):
            assert decide(sample.volts, control) is decision
            pose = apply(pose, decision, motion)
            assert pose == next_pose

    def test_raw_stream_alignment(self):
        trace = run_scenario(scenario_e1(duration_s=10.0), keep_raw=True)
        assert trace.raw[0].t_s == 3.0
        # tick samples are every 200th raw sample, not re-measured
        raw_by_t = {s.t_s: s for s in trace.raw}
        for sample in trace.samples:
            assert raw_by_t[sample.t_s].volts == sample.volts

    def test_aborts_with_partial_trace_on_integration_blowup(self):
        scenario = Scenario(name="blowup", duration_s=10.0, seed=0,
                            overrides={"u0": 1e150, "gain": 1.0, "v_ref": 0.0})
        with pytest.raises(ScenarioAborted) as info:
            run_scenario(scenario)
        assert info.value.partial.decisions == ()
        assert info.value.cause.t_reached >= 0.0


class TestTraceRoundTrip:
    def test_empty_decision_trace_round_trips(self):
        scenario = Scenario(name="short", duration_s=2.5, seed=1)
        trace = run_scenario(scenario)
        assert trace.decisions == ()
        buffer = io.StringIO()
        write_trace(trace, buffer)
        back = read_trace(io.StringIO(buffer.getvalue()))
        assert back.scenario == trace.scenario
        assert back.samples == trace.samples
        assert back.poses == trace.poses

    def test_e1_round_trip_byte_exact(self, tmp_path):
        trace = run_scenario(scenario_e1())
        path1 = tmp_path / "a.csv"
        path2 = tmp_path / "b.csv"
        write_trace(trace, path1)
        write_trace(read_trace(path1), path2)
        assert path1.read_bytes() == path2.read_bytes()

    def test_round_trip_preserves_values(self, tmp_path):
        trace = run_scenario(scenario_e2(seed=5))
        path = tmp_path / "t.csv"
        write_trace(trace, path)
        back = read_trace(path)
        assert back.scenario == trace.scenario
        # in-memory floats agree to the 4-decimal file precision
        for a, b in zip(back.samples, trace.samples):
            assert a.t_s == b.t_s
            assert a.volts == pytest.approx(b.volts, abs=1e-12)
            assert a.laser_on == b.laser_on
        assert back.decisions == trace.decisions
        assert len(back.poses) == len(trace.poses)
        for a, b in zip(back.poses, trace.poses):
            assert a.x == pytest.approx(b.x, abs=1e-6)
            assert a.theta == pytest.approx(b.theta, abs=1e-6)


def write_sample_file(tmp_path, rows, header_extra=""):
    text = ("# bzbot-trace v1\n# name=X\n# seed=0\n# duration_s=60.0\n"
            + header_extra
            + "# pose0=0.000000,0.000000,0.000000\n"
            + "t_s,volts,decision,laser_on,x_cm,y_cm,theta_deg\n"
            + "\n".join(rows) + ("\n" if rows else ""))
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    return path


class TestParseErrors:
    def test_non_monotonic_timestamps_rejected(self, tmp_path):
        path = write_sample_file(tmp_path, [
            "3.00,0.0002,L,0,1.198357,0.062815,3.000000",
            "3.00,0.0002,L,0,2.396715,0.125630,6.000000",
        ])
        with pytest.raises(TraceParseError) as info:
            read_trace(path)
        assert info.value.line == 8
        assert "increasing" in str(info.value)

    def test_bad_field_count(self, tmp_path):
        path = write_sample_file(tmp_path, ["3.00,0.0002,L,0"])
        with pytest.raises(TraceParseError) as info:
            read_trace(path)
        assert info.value.line == 7

    def test_bad_decision_letter_names_column(self, tmp_path):
        path = write_sample_file(tmp_path, [
            "3.00,0.0002,Q,0,1.198357,0.062815,3.000000"])
        with pytest.raises(TraceParseError) as info:
            read_trace(path)
        assert info.value.column == 13

    def test_unquantized_volts_rejected(self, tmp_path):
        path = write_sample_file(tmp_path, [
            "3.00,0.0003,L,0,1.198357,0.062815,3.000000"])
        with pytest.raises(TraceParseError) as info:
            read_trace(path)
        assert "ADC" in str(info.value)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("t_s,volts\n", encoding="utf-8")
        with pytest.raises(TraceParseError) as info:
            read_trace(path)
        assert info.value.line == 1


class TestHistogram:
    def test_direct_count(self):
        bins = histogram([0.001, 0.001, 0.003], 0.002)
        assert bins == [(0.0, 2), (0.002, 1)]

    def test_all_equal_single_bin(self):
        bins = histogram([0.0042] * 7, 0.002)
        assert len(bins) == 1
        assert bins[0][1] == 7

    def test_counts_sum_to_n(self):
        rng = np.random.default_rng(1)
        data = rng.normal(0.0, 0.02, size=5_000)
        bins = histogram(data, 0.002)
        assert sum(count for _, count in bins) == 5_000

    def test_edges_are_integer_multiples(self):
        rng = np.random.default_rng(2)
        data = rng.normal(0.0, 0.02, size=1_000)
        for edge, _ in histogram(data, 0.002):
            assert edge == pytest.approx(round(edge / 0.002) * 0.002, abs=1e-15)

    def test_uniform_counts_within_binomial_expectation(self):
        """Per-bin count within 5 sigma of n*p for uniform synthetic draws."""
        rng = np.random.default_rng(3)
        n = 100_000
        data = rng.uniform(0.0, 0.1, size=n)
        width = 0.002
        p = width / 0.1
        sigma = math.sqrt(n * p * (1 - p))
        for edge, count in histogram(data, width):
            assert abs(count - n * p) < 5 * sigma

    def test_empty_input_rejected(self):
        with pytest.raises(LabError):
            histogram([], 0.002)
        with pytest.raises(LabError):
            histogram([0.1], 0.0)


class TestFitNormal:
    def test_hand_arithmetic_example(self):
        # mean = 0.004/4 = 0.001; var = (3*0.001^2 + 0.003^2)/3 = 4e-6
        fit = fit_normal([0.0, 0.0, 0.0, 0.004])
        assert fit.mean == pytest.approx(0.001, abs=1e-15)
        assert fit.std == pytest.approx(0.002, abs=1e-15)
        assert fit.n == 4

    def test_constant_data_flagged_not_error(self):
        fit = fit_normal([0.5, 0.5, 0.5])
        assert fit.std == 0.0
        assert fit.is_degenerate

    def test_too_few_samples(self):
        with pytest.raises(LabError):
            fit_normal([0.1])

    def test_reference_scale_recorded(self):
        # documented comparison targets from the physical experiments
        from bzbot.lab import REFERENCE_MEAN_V, REFERENCE_STD_V
        assert REFERENCE_MEAN_V == 0.006
        assert REFERENCE_STD_V == 0.0159


class TestCharacterize:
    def test_suppressing_pulse_is_inhibition(self, inhibit_trace):
        trace, stimulus = inhibit_trace
        result = characterize_response(trace, stimulus)
        assert result.kind == "inhibition"
        assert result.amplitude_after < 0.5 * result.amplitude_before

    def test_excite_kick_is_level_shift(self, excite_trace):
        trace, stimulus = excite_trace
        result = characterize_response(trace, stimulus)
        assert result.kind == "level-shift"
        assert abs(result.mean_after - result.mean_before) > 0.25 * result.amplitude_before

    def test_negligible_pulse_is_no_effect(self):
        scenario = Scenario(
            name="tiny", duration_s=95.0,
            stimuli=(LaserStimulus(t_on_s=50.0, duration_s=10.0, amplitude=1e-6),),
            seed=5)
        trace = run_scenario(scenario, keep_raw=True)
        result = characterize_response(trace, scenario.stimuli[0])
        assert result.kind == "no-effect"

    def test_windows_outside_trace_rejected(self):
        scenario = Scenario(
            name="early", duration_s=60.0,
            stimuli=(LaserStimulus(t_on_s=5.0, duration_s=10.0, amplitude=0.2),),
            seed=5)
        trace = run_scenario(scenario, keep_raw=True)
        with pytest.raises(LabError):
            characterize_response(trace, scenario.stimuli[0])

    def test_raw_stream_required(self):
        scenario = Scenario(
            name="noraw", duration_s=95.0,
            stimuli=(LaserStimulus(t_on_s=50.0, duration_s=10.0, amplitude=0.2),),
            seed=5)
        trace = run_scenario(scenario)
        with pytest.raises(LabError):
            characterize_response(trace, scenario.stimuli[0])


class TestScenarioDefinitions:
    def test_validation(self):
        with pytest.raises(LabError):
            Scenario(name="x", duration_s=0.0)
        with pytest.raises(LabError):
            Scenario(name="x", duration_s=10.0,
                     stimuli=(LaserStimulus(t_on_s=20.0),))
        with pytest.raises(LabError):
            Scenario(name="x", duration_s=10.0, overrides={"bogus": 1.0})

    def test_json_file_loading(self, tmp_path):
        path = tmp_path / "custom.json"
        path.write_text("""
        {"name": "custom", "duration_s": 30.0, "seed": 12,
         "stimuli": [{"t_on_s": 5.0, "duration_s": 8.0, "amplitude": 0.15,
                      "mode": "inhibit"}],
         "overrides": {"noise_std": 0.0}}
        """, encoding="utf-8")
        scenario = load_scenario(path)
        assert scenario.name == "custom"
        assert scenario.stimuli[0].duration_s == 8.0
        assert scenario.overrides == {"noise_std": 0.0}

    def test_bad_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(LabError):
            load_scenario(path)
        with pytest.raises(LabError):
            scenario_from_dict({"name": "x"})

    def test_resolve_builtin_and_seed_override(self):
        scenario = resolve_scenario("E1", seed=99)
        assert scenario.name == "E1"
        assert scenario.seed == 99

    def test_resolve_unknown_rejected(self):
        with pytest.raises(LabError):
            resolve_scenario("NOPE")
