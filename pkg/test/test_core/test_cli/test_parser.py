import pytest

from covercalc.core.cli.parser import COMMANDS, CoreParser, make_top_level_parser


def test_baseline_flag(scenario):
    """Test that --baseline loads the built-in calibration."""
    args = CoreParser().parse_args(["--baseline"])
    assert args.scenario == scenario
    assert not args.json and args.out is None
    assert args.loglevel == "WARNING"


def test_scenario_file(tmp_path):
    """Test that a positional path loads the file."""
    path = tmp_path / "scenario.yaml"
    path.write_text("indemnity: {gamma_d: 1000}\n", encoding="utf-8")
    args = CoreParser().parse_args([str(path), "--json"])
    assert args.scenario.indemnity_pricing.fixed_cost == 1_000
    assert args.json


def test_per_event_gamma(tmp_path):
    """Test that --per-event-gamma scales the fixed costs."""
    path = tmp_path / "scenario.yaml"
    path.write_text("parametric: {gamma_p: 50000}\n", encoding="utf-8")
    args = CoreParser().parse_args([str(path), "--per-event-gamma"])
    assert args.scenario.parametric_pricing.fixed_cost == pytest.approx(1_000)


@pytest.mark.parametrize("argv", [[], ["scenario.yaml", "--baseline"]])
def test_scenario_source_required(argv):
    """Test that exactly one of a file and --baseline is needed."""
    with pytest.raises(SystemExit) as info:
        CoreParser().parse_args(argv)
    assert info.value.code == 2


def test_top_level_parser():
    """Test that the command and its remaining arguments are split."""
    args = make_top_level_parser().parse_args(["budget", "--baseline", "-j"])
    assert args.command == "budget"
    assert args.arguments == ["--baseline", "-j"]
    assert "simulate" in COMMANDS

    with pytest.raises(SystemExit):
        make_top_level_parser().parse_args(["walk"])
