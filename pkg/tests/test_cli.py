import json
import subprocess
import sys

import pytest

from rwstreams.cli import main


@pytest.fixture
def sample(tmp_path):
    path = tmp_path / "in.bin"
    path.write_bytes(b"to be or not to be, that is the question. " * 200 + bytes(range(256)))
    return path


@pytest.mark.parametrize("fwd,inv", [("compress", "decompress"), ("eo-compress", "eo-decompress"), ("bwt", "unbwt")])
def test_round_trips(tmp_path, sample, fwd, inv):
    packed, out, rep = tmp_path / "p", tmp_path / "o", tmp_path / "r.json"
    assert main([fwd, str(sample), "-o", str(packed), "--report", str(rep)]) == 0
    report = json.loads(rep.read_text())
    assert report["peak_declared_memory_bits"] > 0
    assert main([inv, str(packed), "-o", str(out), "--report", str(rep)]) == 0
    assert out.read_bytes() == sample.read_bytes()


def test_budget_flags_respected(tmp_path, sample):
    rep = tmp_path / "r.json"
    args = ["eo-compress", str(sample), "-o", str(tmp_path / "p"), "--report", str(rep),
            "--memory-bits", "40000", "--pass-limit", "2000"]
    assert main(args) == 0
    report = json.loads(rep.read_text())
    assert report["peak_declared_memory_bits"] <= 40000 and report["total_passes"] <= 2000


def test_exit_codes(tmp_path, sample):
    out = str(tmp_path / "x")
    assert main(["bwt", "--streams", "1", str(sample), "-o", out]) == 3
    assert main(["bwt", "--pass-limit", "3", str(sample), "-o", out]) == 4
    bad = tmp_path / "bad"
    bad.write_bytes(b"nonsense")
    assert main(["decompress", str(bad), "-o", out]) == 5
    assert main(["eo-decompress", str(bad), "-o", out]) == 5
    assert main(["compress", "--memory-bits", "0", str(sample)]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["compress", str(tmp_path / "missing")]) == 1


def test_decode_error_code(tmp_path, sample):
    packed = tmp_path / "p"
    assert main(["compress", str(sample), "-o", str(packed), "--report", str(tmp_path / "r")]) == 0
    packed.write_bytes(packed.read_bytes()[:-3])
    assert main(["decompress", str(packed), "-o", str(tmp_path / "o")]) == 6


def test_debruijn_and_text_commands(tmp_path, capsysbinary):
    assert main(["debruijn", "--sigma", "2", "--k", "3", "--count"]) == 0
    assert capsysbinary.readouterr().out == b"2\n"
    assert main(["debruijn", "--sigma", "2", "--k", "1", "--repeat-to", "8"]) == 0
    assert capsysbinary.readouterr().out == b"01010101"
    src = tmp_path / "s"
    src.write_bytes(b"abcabcabcab")
    assert main(["period", str(src), "--report", str(tmp_path / "r")]) == 0
    assert capsysbinary.readouterr().out == b"3\n"
    assert main(["grammar", str(src), "--report", str(tmp_path / "r")]) == 0
    assert capsysbinary.readouterr().out.startswith(b"S0: S1 S3\n")
    nums = tmp_path / "n"
    nums.write_bytes(b"5 3 12\n3")
    assert main(["sortnums", str(nums), "--report", str(tmp_path / "r")]) == 0
    assert capsysbinary.readouterr().out == b"3\n3\n5\n12\n"
    assert main(["entropy", str(src), "--k", "1"]) == 0
    doc = json.loads(capsysbinary.readouterr().out)
    assert doc["n"] == 11 and len(doc["per_order"]) == 2


def test_module_entry_point_and_determinism(tmp_path, sample):
    outs = []
    for i in range(2):
        out = tmp_path / f"o{i}"
        proc = subprocess.run([sys.executable, "-m", "rwstreams", "eo-compress", str(sample), "-o", str(out)],
                              capture_output=True)
        assert proc.returncode == 0
        assert json.loads(proc.stderr)["total_passes"] > 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
