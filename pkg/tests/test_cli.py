from __future__ import annotations

import os
import pathlib

import pytest

from dcnsim.cli import main

GOLDENS = pathlib.Path(__file__).parent / "goldens"

BUILTIN_NAMES = (
    "bell",
    "ghz_encode",
    "swap3cnot",
    "phase_kickback",
    "deutsch",
    "teleport",
    "err_detect4",
    "err_correct5",
)

BELL_AMPS = "0.707106781187@0 0@0 0@0 0.707106781187@0"
PRODUCT_AMPS = "0.6@0 0.8@0 0@0 0@0"


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_builtins_match_frozen_transcripts(capsys):
    for name in BUILTIN_NAMES:
        code, out, err = run_cli(capsys, "run", name)
        assert code == 0 and err == ""
        assert out == (GOLDENS / f"{name}_run.txt").read_text(encoding="utf-8"), name


def test_run_bell_transcript_lines(capsys):
    code, out, _ = run_cli(capsys, "run", "bell")
    assert code == 0
    assert out.splitlines() == [
        "circuit bell qubits 2",
        'frame 0 "initial"',
        "amps 1@0 0@0 0@0 0@0",
        "verdicts 1=separable 2=separable",
        'frame 3 "bell pair"',
        f"amps {BELL_AMPS}",
        "verdicts 1=entangled 2=entangled",
        f"factor 1,2 {BELL_AMPS}",
    ]


def test_run_unknown_circuit_is_a_runtime_error(capsys):
    code, out, err = run_cli(capsys, "run", "nope")
    assert code == 2
    assert err.startswith("error: unknown circuit 'nope'")
    assert "bell" in err  # the message lists what is available


def test_run_dcn_file_and_parse_error_position(capsys, tmp_path):
    good = tmp_path / "flip.dcn"
    good.write_text("qubits 1\nx 1\nframe \"done\"\n", encoding="utf-8")
    code, out, err = run_cli(capsys, "run", str(good))
    assert code == 0
    assert out.startswith("circuit flip qubits 1")
    assert 'frame 2 "done"' in out
    assert "factor 1 0@0 1@0" in out

    bad = tmp_path / "bad.dcn"
    bad.write_text("qubits 1\nwarp 1\n", encoding="utf-8")
    code, out, err = run_cli(capsys, "run", str(bad))
    assert code == 1
    assert err.startswith("error: 2:1: unknown mnemonic 'warp'")


def test_run_missing_file_is_a_runtime_error(capsys):
    code, _, err = run_cli(capsys, "run", "does/not/exist.dcn")
    assert code == 2
    assert err.startswith("error: ")


def test_run_out_dir_writes_svgs_and_transcript(capsys, tmp_path):
    out_dir = tmp_path / "art"
    code, out, _ = run_cli(capsys, "run", "bell", "--out", str(out_dir))
    assert code == 0
    names = sorted(os.listdir(out_dir))
    assert names == ["bell_0_initial.svg", "bell_3_bell_pair.svg", "bell_trace.txt"]
    transcript = (out_dir / "bell_trace.txt").read_text(encoding="utf-8")
    assert transcript == out


def test_run_out_dir_honors_layout_flag(capsys, tmp_path):
    out_dir = tmp_path / "mod"
    code, _, _ = run_cli(
        capsys, "run", "err_correct5", "--out", str(out_dir), "--layout", "modular:4,5"
    )
    assert code == 0
    svgs = [n for n in os.listdir(out_dir) if n.endswith(".svg")]
    assert len(svgs) == 6
    # Built-in names carry their parameter suffix in the file series.
    sample = (out_dir / "err_correct5_x2_0_initial.svg").read_text(encoding="utf-8")
    assert 'width="900.000"' in sample


def test_run_bad_layout_is_a_runtime_error(capsys):
    code, _, err = run_cli(capsys, "run", "bell", "--layout", "tube", "--out", "/tmp/x")
    assert code == 2
    assert "unknown layout kind" in err


def test_run_forced_measurement_changes_the_branch(capsys):
    code, out, _ = run_cli(capsys, "run", "teleport", "--force-measure", "1=1,2=0")
    assert code == 0
    assert "measured 1=1 p=0.5" in out
    assert "measured 2=0 p=0.5" in out
    # The corrected state still hands the payload to qubit 3.
    assert "factor 3 0.816496580928@0 0.57735026919@-0.785398163397" in out


def test_run_bad_forced_entry(capsys):
    code, _, err = run_cli(capsys, "run", "teleport", "--force-measure", "1=2")
    assert code == 2
    assert "forced bit must be 0 or 1" in err


def test_check_sep_requires_exactly_one_source(capsys):
    code, _, err = run_cli(capsys, "check-sep")
    assert code == 2
    assert "exactly one" in err
    code, _, err = run_cli(capsys, "check-sep", "bell", "--ket", "00")
    assert code == 2


def test_check_sep_ket_product_state(capsys):
    code, out, _ = run_cli(capsys, "check-sep", "--ket", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "state qubits 2"
    assert lines[1] == "amps 0@0 0@0 1@0 0@0"
    assert "qubit 1 verdict separable" in out
    assert "qubit 2 verdict separable" in out
    assert "factor 1 1@0 0@0" in out
    assert "factor 2 0@0 1@0" in out


def test_check_sep_amps_no_query_exit_reflects_product(capsys):
    code, out, _ = run_cli(capsys, "check-sep", "--amps", BELL_AMPS)
    assert code == 3
    assert "qubit 1 verdict entangled" in out
    assert f"factor 1,2 {BELL_AMPS}" in out

    code, out, _ = run_cli(capsys, "check-sep", "--amps", PRODUCT_AMPS)
    assert code == 0
    assert "factor 1 0.6@0 0.8@0" in out
    assert "factor 2 1@0 0@0" in out


def test_check_sep_partition_report(capsys):
    code, out, _ = run_cli(capsys, "check-sep", "--amps", BELL_AMPS, "--partition", "2", "2")
    assert code == 3
    lines = out.splitlines()
    assert "partition 2 2 order default" in lines
    assert "verdict entangled" in lines
    assert "max_violation 0.5" in lines
    assert "witness cell 3 (k=1, r=1)" in lines
    assert not any(line.startswith("factor_p") for line in lines)

    code, out, _ = run_cli(
        capsys, "check-sep", "--amps", PRODUCT_AMPS, "--partition", "2", "2"
    )
    assert code == 0
    assert "verdict separable" in out
    assert "factor_p 1@0 0@0" in out
    assert "factor_q 0.6@0 0.8@0" in out
    assert "residual 0" in out


def test_check_sep_partition_with_custom_order(capsys):
    # Bell pair on qubits 1 and 3 of three: default grouping calls {1} vs
    # {2,3} entangled, while order 2,1,3 isolates the lone qubit 2.
    amps = "0.707106781187@0 0@0 0@0 0@0 0@0 0.707106781187@0 0@0 0@0"
    code, out, _ = run_cli(
        capsys, "check-sep", "--amps", amps, "--partition", "4", "2", "--order", "2,1,3"
    )
    assert code == 0
    assert "partition 4 2 order 2,1,3" in out
    assert "verdict separable" in out
    assert "factor_q 1@0 0@0" in out


def test_check_sep_single_qubit_query(capsys):
    code, out, _ = run_cli(capsys, "check-sep", "--amps", BELL_AMPS, "--qubit", "1")
    assert code == 3
    assert "verdict entangled" in out
    code, out, _ = run_cli(capsys, "check-sep", "--amps", PRODUCT_AMPS, "--qubit", "2")
    assert code == 0
    assert "factor_p 1@0 0@0" in out


def test_check_sep_marginal_exit_code(capsys):
    amps = "1@0 0@0 0@0 5e-08@0"
    code, out, _ = run_cli(capsys, "check-sep", "--amps", amps, "--partition", "2", "2")
    assert code == 4
    assert "verdict marginal" in out


def test_check_sep_tolerance_flags_shift_the_verdict(capsys):
    amps = "1@0 0@0 0@0 1e-05@0"
    code, out, _ = run_cli(capsys, "check-sep", "--amps", amps, "--partition", "2", "2")
    assert code == 3
    code, out, _ = run_cli(
        capsys, "check-sep", "--amps", amps, "--partition", "2", "2", "--tol-sep", "0.001"
    )
    assert code == 0
    assert "verdict separable" in out


def test_check_sep_rejects_conflicting_or_dangling_flags(capsys):
    code, _, err = run_cli(
        capsys, "check-sep", "--amps", BELL_AMPS, "--partition", "2", "2", "--qubit", "1"
    )
    assert code == 2
    assert "not both" in err
    code, _, err = run_cli(capsys, "check-sep", "--amps", BELL_AMPS, "--order", "1,2")
    assert code == 2
    assert "--order requires --partition" in err


def test_check_sep_input_validation(capsys):
    code, _, err = run_cli(capsys, "check-sep", "--amps", "1@0 0@0 0@0")
    assert code == 2
    assert "power of two" in err
    code, _, err = run_cli(capsys, "check-sep", "--ket", "01201")
    assert code == 2
    assert "0/1 bitstring" in err
    code, _, err = run_cli(capsys, "check-sep", "--amps", "not-an-amp")
    assert code == 2


def test_check_sep_circuit_final_state(capsys):
    code, out, _ = run_cli(
        capsys, "check-sep", "teleport", "--force-measure", "1=0,2=1", "--qubit", "3"
    )
    assert code == 0
    assert "verdict separable" in out
    assert "factor_p 0.816496580928@0 0.57735026919@-0.785398163397" in out


def test_usage_errors_exit_via_argparse():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2
