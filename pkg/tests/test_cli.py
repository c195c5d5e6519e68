"""Argument parsing, output formats, exit codes, and rerun stability.

Every end-to-end case drives main() directly so that exit codes and
stderr diagnostics are observed exactly as a shell would see them.
"""

import argparse
import json
import math

import pytest

from qudisc.cli import main, parse_angle, parse_number_list, parse_size_range
from qudisc.priors import FixedPurities, HardSphere
from qudisc.spectrum import p_err_min


# ---------------------------------------------------------------------------
# Flag value parsers


def test_angle_literals_are_exact_multiples_of_pi():
    assert parse_angle("pi") == math.pi
    assert parse_angle("pi/3") == math.pi / 3
    assert parse_angle("2pi/5") == 2 * math.pi / 5
    assert parse_angle("3*pi/4") == 3 * math.pi / 4
    assert parse_angle(" PI / 2 ") == math.pi / 2


def test_angle_decimals_pass_through():
    assert parse_angle("0.75") == 0.75
    assert parse_angle("1e-3") == 1e-3


@pytest.mark.parametrize("text", ["junk", "pi/0", "pi/pi", "2//pi"])
def test_bad_angles_are_usage_errors(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_angle(text)


def test_size_ranges_are_inclusive():
    assert parse_size_range("7") == [7]
    assert parse_size_range("1:5") == [1, 2, 3, 4, 5]
    assert parse_size_range("10:30:10") == [10, 20, 30]
    assert parse_size_range("10:29:10") == [10, 20]


@pytest.mark.parametrize("text", ["0:5", "5:1", "1:10:0", "1:2:3:4", "a:b", "2.5"])
def test_degenerate_size_ranges_are_rejected(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_size_range(text)


def test_number_lists_keep_their_literal_tokens():
    assert parse_number_list("0.001,0.02") == [("0.001", 0.001), ("0.02", 0.02)]
    assert parse_number_list("1e-3") == [("1e-3", 1e-3)]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_number_list("0.1,,0.2")


# ---------------------------------------------------------------------------
# perr


def test_perr_csv_matches_the_library(capsys):
    code = main([
        "perr", "--scenario", "fixed-purity", "--r1", "0.75", "--r2", "0.5",
        "--n", "1:4",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,p_exact,p_asymptotic,helstrom,excess_risk"
    assert len(lines) == 5
    for line, n in zip(lines[1:], range(1, 5)):
        fields = line.split(",")
        assert int(fields[0]) == n
        report = p_err_min(n, FixedPurities(0.75, 0.5))
        assert fields[1] == format(report.p_exact, ".12g")
        assert fields[3] == format(report.helstrom, ".12g")


def test_perr_json_carries_notes_and_nulls(capsys):
    code = main([
        "perr", "--scenario", "fixed-overlap", "--theta", "pi",
        "--n", "1:2", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["scenario"] == {"kind": "fixed-overlap", "theta": pytest.approx(math.pi)}
    for row in payload["rows"]:
        assert row["p_exact"] == 0.5
        assert row["p_asymptotic"] is None
        assert "coincide" in row["note"]


def test_perr_reruns_are_byte_identical(tmp_path, monkeypatch):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    argv = ["perr", "--scenario", "hard-sphere", "--n", "1:12"]
    assert main(argv + ["--output", str(first)]) == 0
    monkeypatch.setenv("QUDISC_THREADS", "3")
    assert main(argv + ["--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_perr_rows_stay_in_size_order_across_workers(tmp_path, monkeypatch):
    monkeypatch.setenv("QUDISC_THREADS", "7")
    out = tmp_path / "curve.csv"
    assert main([
        "perr", "--scenario", "fixed-overlap", "--theta", "pi/3",
        "--n", "1:20", "--output", str(out),
    ]) == 0
    sizes = [int(line.split(",")[0]) for line in out.read_text().splitlines()[1:]]
    assert sizes == list(range(1, 21))


def test_bad_thread_count_is_a_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("QUDISC_THREADS", "zero")
    code = main(["perr", "--scenario", "hard-sphere", "--n", "1"])
    assert code == 2
    assert "QUDISC_THREADS" in capsys.readouterr().err


def test_missing_scenario_flags_exit_2(capsys):
    code = main(["perr", "--scenario", "fixed-purity", "--n", "1"])
    assert code == 2
    assert "--r1" in capsys.readouterr().err


def test_unparseable_angle_exits_2():
    with pytest.raises(SystemExit) as failure:
        main(["perr", "--scenario", "fixed-overlap", "--theta", "junk", "--n", "1"])
    assert failure.value.code == 2


# ---------------------------------------------------------------------------
# oracle


def test_oracle_agrees_and_exits_0(capsys):
    code = main([
        "oracle", "--scenario", "fixed-purity", "--r1", "0.9", "--r2", "0.9",
        "--format", "json",
    ])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert payload["tolerance"] == 1e-8
    assert [row["n"] for row in payload["rows"]] == [1, 2]
    for row in payload["rows"]:
        assert row["abs_diff"] <= 1e-8


def test_oracle_csv_names_the_scenario(capsys):
    code = main([
        "oracle", "--scenario", "fixed-purity", "--r1", "0.75", "--r2", "0.5",
        "--n", "1",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,scenario,p_engine,p_oracle,abs_diff"
    assert lines[1].startswith("1,fixed-purity(r1=0.75;r2=0.5),")


def test_oracle_refuses_sizes_beyond_the_dense_route(capsys):
    code = main(["oracle", "--scenario", "hard-sphere", "--n", "3"])
    assert code == 2
    assert "n <= 2" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# simulate


def test_simulate_single_angle_is_deterministic(capsys):
    argv = ["simulate", "--theta", "pi/2", "--shots", "500", "--seed", "11"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    lines = first.splitlines()
    assert lines[0] == "theta,frequency,stderr,p_closed_form"
    assert len(lines) == 2


def test_simulate_grid_covers_zero_to_pi(capsys):
    assert main(["simulate", "--points", "5", "--shots", "16"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    angles = [float(line.split(",")[0]) for line in lines[1:]]
    assert angles[0] == 0.0
    assert angles[-1] == pytest.approx(math.pi)


def test_simulate_too_coarse_grid_exits_2(capsys):
    assert main(["simulate", "--points", "1"]) == 2
    assert "--points" in capsys.readouterr().err


def test_depolarizing_sweep_writes_one_file_per_strength(tmp_path):
    out = tmp_path / "dep.csv"
    code = main([
        "simulate", "--theta", "1.0", "--shots", "64",
        "--noise", "depolarizing", "--p-depol", "0.001,0.02",
        "--output", str(out),
    ])
    assert code == 0
    assert not out.exists()
    assert (tmp_path / "dep_p0.001.csv").is_file()
    assert (tmp_path / "dep_p0.02.csv").is_file()


def test_sweep_to_stdout_is_refused(capsys):
    code = main([
        "simulate", "--theta", "1.0", "--noise", "depolarizing",
        "--p-depol", "0.1,0.2",
    ])
    assert code == 2
    assert "--output" in capsys.readouterr().err


def test_thermal_json_records_the_model(capsys):
    code = main([
        "simulate", "--theta", "pi/3", "--shots", "64", "--format", "json",
        "--noise", "thermal", "--t1", "20e-6", "--t2", "30e-6",
    ])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["noise"]["kind"] == "thermal"
    assert payload["noise"]["t1"] == 20e-6
    assert payload["noise"]["t2"] == 30e-6
    assert len(payload["rows"]) == 1


def test_inconsistent_thermal_times_exit_2(capsys):
    # T2 may not exceed 2 T1; the model constructor enforces it.
    code = main([
        "simulate", "--theta", "1.0",
        "--noise", "thermal", "--t1", "10e-6", "--t2", "30e-6",
    ])
    assert code == 2
    assert capsys.readouterr().err != ""


def test_stray_noise_flags_exit_2(capsys):
    code = main(["simulate", "--theta", "1.0", "--p-depol", "0.1"])
    assert code == 2
    assert "--noise" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# spectrum


def test_spectrum_csv_lists_the_single_copy_overlap_blocks(capsys):
    code = main(["spectrum", "--scenario", "fixed-overlap", "--theta", "pi/3", "--n", "1"])
    assert code == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "s,t,q,case,branch,eigenvalue,copies"
    assert len(lines) == 4
    assert lines[1].startswith("1/2,1/2,1/2,mixed,upper,")
    assert "trace sum" in captured.err


def test_spectrum_json_resolves_the_full_dimension(capsys):
    code = main([
        "spectrum", "--scenario", "fixed-purity", "--r1", "0.75", "--r2", "0.5",
        "--n", "2", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == 2 ** 5
    assert abs(payload["trace_sum"]) <= 1e-10
    entry = payload["entries"][0]
    assert set(entry) == {
        "s", "t", "q", "case", "branch", "value",
        "log_scale_magnitude", "scale_sign", "eigenvalue", "copies",
    }
    total = sum(e["eigenvalue"] * e["copies"] for e in payload["entries"])
    reported = p_err_min(2, FixedPurities(0.75, 0.5)).p_exact
    assert 0.5 - 0.25 * sum(
        abs(e["eigenvalue"]) * e["copies"] for e in payload["entries"]
    ) == pytest.approx(reported, abs=1e-12)
    assert total == pytest.approx(0.0, abs=1e-10)


def test_spectrum_refuses_oversized_listings(capsys):
    code = main(["spectrum", "--scenario", "hard-sphere", "--n", "41"])
    assert code == 2
    assert "n <= 40" in capsys.readouterr().err


def test_spectrum_file_output_is_stable(tmp_path):
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    argv = ["spectrum", "--scenario", "hard-sphere", "--n", "3", "--format", "json"]
    assert main(argv + ["--output", str(out_a)]) == 0
    assert main(argv + ["--output", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


# ---------------------------------------------------------------------------
# Scenario spellings shared by all subcommands


def test_every_scenario_spelling_is_accepted(capsys):
    for argv in (
        ["--scenario", "fixed-purity", "--r1", "1", "--r2", "1"],
        ["--scenario", "hard-sphere"],
        ["--scenario", "fixed-overlap", "--theta", "pi/4"],
        ["--scenario", "fixed-overlap-dim", "--theta", "pi/4", "--dim", "3"],
    ):
        assert main(["perr", "--n", "1:2"] + argv) == 0
        capsys.readouterr()


def test_dimension_scenario_requires_both_flags(capsys):
    code = main(["perr", "--n", "1", "--scenario", "fixed-overlap-dim", "--theta", "pi/4"])
    assert code == 2
    assert "--dim" in capsys.readouterr().err
