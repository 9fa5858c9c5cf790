"""Tests for the trace plotting script.

A handcrafted CSV in the simulator's trace schema drives the unit tests;
the end-to-end test generates a real trace through the simulator CLI and
renders both figure modes from it.
"""
import os
import shutil
import struct
import subprocess
import sys

import pytest

from plot import PlotSpec, main, plot, read_series

HEADER = "scenario,policy,order,t,mean_regret,std_regret,ratio_to_lb"

SAMPLE_ROWS = [
    "strong-2x2,ucb,,1,0.0,0.0,",
    "strong-2x2,ucb,,10,6.5,1.2,",
    "strong-2x2,ucb,,100,18.0,2.5,",
    "strong-2x2,ucb,,1000,31.0,3.4,",
    "strong-2x2,catse-strong,strong,1,0.0,0.0,",
    "strong-2x2,catse-strong,strong,10,7.0,1.0,1.0137",
    "strong-2x2,catse-strong,strong,100,21.0,2.0,1.5199",
    "strong-2x2,catse-strong,strong,1000,24.0,2.1,1.1582",
]


def write_sample(path, rows=SAMPLE_ROWS):
    path.write_text(HEADER + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return str(path)


def png_size(path):
    data = open(path, "rb").read()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    # IHDR is always the first chunk: width and height at bytes 16..24
    return struct.unpack(">II", data[16:24])


@pytest.fixture
def sample_csv(tmp_path):
    return write_sample(tmp_path / "trace.csv")


def test_regret_mode_draws_one_labeled_curve_per_policy(sample_csv, tmp_path):
    out = tmp_path / "fig.png"
    labels = plot(PlotSpec((sample_csv,), "regret", str(out)))
    assert labels == ["ucb", "catse-strong"]
    width, height = png_size(out)
    assert width > 0 and height > 0


def test_plotting_is_read_only_and_rerun_stable(sample_csv, tmp_path):
    before = open(sample_csv, "rb").read()
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    labels_a = plot(PlotSpec((sample_csv,), "regret", str(first)))
    labels_b = plot(PlotSpec((sample_csv,), "regret", str(second)))
    assert open(sample_csv, "rb").read() == before
    assert labels_a == labels_b
    assert png_size(first) == png_size(second)


def test_ratio_mode_skips_series_without_defined_ratio(sample_csv, tmp_path):
    out = tmp_path / "fig.png"
    labels = plot(PlotSpec((sample_csv,), "ratio", str(out)))
    # ucb has no lower bound, so only the ordered policy survives
    assert labels == ["catse-strong"]
    assert png_size(out) > (0, 0)


def test_ratio_mode_with_no_defined_ratio_errors(tmp_path):
    path = write_sample(tmp_path / "trace.csv", [r for r in SAMPLE_ROWS if ",ucb," in r])
    with pytest.raises(ValueError, match="ratio"):
        plot(PlotSpec((path,), "ratio", str(tmp_path / "fig.png")))


def test_policy_filter(sample_csv, tmp_path):
    out = tmp_path / "fig.png"
    labels = plot(PlotSpec((sample_csv,), "regret", str(out), policies=("ucb",)))
    assert labels == ["ucb"]
    with pytest.raises(ValueError, match="no series"):
        plot(PlotSpec((sample_csv,), "regret", str(out), policies=("nope",)))


def test_header_mismatch_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("policy,t,regret\nucb,1,0.0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="schema"):
        plot(PlotSpec((str(path),), "regret", str(tmp_path / "fig.png")))


def test_malformed_row_reports_file_and_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(HEADER + "\nstrong-2x2,ucb,,ten,6.5,1.2,\n", encoding="utf-8")
    with pytest.raises(ValueError, match="bad.csv:2"):
        read_series((str(path),))


def test_mode_and_input_validation(sample_csv, tmp_path):
    with pytest.raises(ValueError, match="mode"):
        PlotSpec((sample_csv,), "histogram", str(tmp_path / "fig.png"))
    with pytest.raises(ValueError, match="input"):
        PlotSpec((), "regret", str(tmp_path / "fig.png"))


def test_multiple_inputs_qualify_colliding_policy_names(tmp_path):
    first = write_sample(tmp_path / "a.csv")
    second = write_sample(
        tmp_path / "b.csv", [r.replace("strong-2x2", "sparse-2x2") for r in SAMPLE_ROWS if ",ucb," in r]
    )
    labels = plot(PlotSpec((first, second), "regret", str(tmp_path / "fig.png")))
    assert labels == ["strong-2x2/ucb", "catse-strong", "sparse-2x2/ucb"]


def test_cli_exit_codes_and_output(sample_csv, tmp_path, capsys):
    out = tmp_path / "fig.png"
    assert main(["--mode", "regret", "--out", str(out), sample_csv]) == 0
    assert "wrote %s (2 series)" % out in capsys.readouterr().out
    assert out.exists()

    assert main(["--mode", "ratio", "--out", str(out), "--policy", "ucb", sample_csv]) == 2
    assert "error:" in capsys.readouterr().err

    assert main(["--mode", "regret", "--out", str(out), str(tmp_path / "missing.csv")]) == 2
    assert "error:" in capsys.readouterr().err

    with pytest.raises(SystemExit):
        main(["--mode", "histogram", "--out", str(out), sample_csv])


def test_script_invocation(sample_csv, tmp_path):
    script = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "plot.py")
    out = tmp_path / "fig.png"
    proc = subprocess.run(
        [sys.executable, script, "--mode", "regret", "--out", str(out), sample_csv],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "wrote" in proc.stdout
    assert png_size(out) > (0, 0)


def test_renders_strong_experiment_trace_in_both_modes(tmp_path):
    """End-to-end: a real simulator trace renders in both modes."""
    cli = shutil.which("catbandit")
    assert cli is not None, "requires the catbandit simulator CLI on PATH"
    trace = tmp_path / "strong.csv"
    proc = subprocess.run(
        [
            cli, "run", "--scenario", "strong-2x2",
            "--policy", "ucb", "--policy", "catse", "--policy", "minmax", "--policy", "murphy",
            "--horizon", "3000", "--runs", "20", "--seed", "0", "--out", str(trace),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr

    regret_out = tmp_path / "regret.png"
    ratio_out = tmp_path / "ratio.png"
    regret_labels = plot(PlotSpec((str(trace),), "regret", str(regret_out)))
    ratio_labels = plot(PlotSpec((str(trace),), "ratio", str(ratio_out)))

    assert len(regret_labels) == 4
    assert png_size(regret_out) > (0, 0) and os.path.getsize(regret_out) > 1000
    # baselines carry no lower bound, so ratio mode keeps the three ordered policies
    assert sorted(ratio_labels) == ["catse-strong", "minmax", "murphy-strong"]
    assert png_size(ratio_out) > (0, 0) and os.path.getsize(ratio_out) > 1000

    # the elimination policy's ratio curve should be past its peak by the end
    series = {s.policy: s for s in read_series((str(trace),))}
    ratios = [row[3] for row in series["catse-strong"].rows if row[3] is not None]
    assert ratios[-1] < max(ratios)
