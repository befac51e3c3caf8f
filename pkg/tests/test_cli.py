import json
from pathlib import Path

import pytest

from ordercomplex.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def sample(name):
    return str(SAMPLES / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_m3(capsys):
    code, out, _ = run(capsys, "check", "classify", "preset:M3")
    assert code == 0
    assert "modular=true distributive=false" in out


def test_classify_n5_json(capsys):
    code, out, _ = run(capsys, "check", "classify", "preset:N5", "--json")
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "pass"


def test_delta_axioms_n5(capsys):
    code, out, _ = run(capsys, "check", "delta-axioms", "preset:N5", "--samples", "1000", "--seed", "7")
    assert code == 0 and "FAIL" not in out


def test_breadth_size_limit(capsys):
    code, _, err = run(capsys, "check", "breadth", "preset:chain20")
    assert code == 2 and "SizeLimitExceeded" in err
    code, out, _ = run(capsys, "check", "breadth", "preset:chain20", "--limit", "24")
    assert code == 0


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("elements: a b\ncover: a z\n")
    code, _, err = run(capsys, "check", "classify", str(bad))
    assert code == 2 and "line 2" in err
    code, _, _ = run(capsys, "check", "classify", str(tmp_path / "missing.txt"))
    assert code == 2


def test_not_a_lattice_fails_with_witness(tmp_path, capsys):
    vee = tmp_path / "vee.txt"
    vee.write_text("elements: 0 a b\ncover: 0 a\ncover: 0 b\n")
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "check", "classify", str(vee), "--cert-out", str(cert))
    assert code == 1 and "FAIL lattice" in out
    assert json.loads(cert.read_text())["witness"]["pair"] == ["a", "b"]
    code, _, _ = run(capsys, "check", "--replay", str(cert))
    assert code == 0


def test_membership_certificate_replays(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "check", "membership", sample("m3_points.txt"), "--cert-out", str(cert))
    assert code == 1 and "FAIL member bad" in out
    data = json.loads(cert.read_text())
    assert data["witness"]["point"] == "bad"
    code, out, _ = run(capsys, "check", "--replay", str(cert))
    assert code == 0 and "verdict: PASS" in out


def test_tampered_certificate_is_rejected(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(capsys, "check", "membership", sample("m3_points.txt"), "--cert-out", str(cert))
    data = json.loads(cert.read_text())
    data["witness"]["values"] = ["1/1", "1/1", "0/1", "0/1", "0/1"]
    cert.write_text(json.dumps(data))
    code, _, _ = run(capsys, "check", "--replay", str(cert))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["check", "delta-s", sample("gluing_pairs.txt"), "--samples", "50"],
    ["check", "thicken", sample("m3_thicken.txt"), "--samples", "20"],
    ["check", "edmondson", "--samples", "20"],
    ["check", "stitch", sample("chain3_a.txt"), sample("chain3_b.txt"), sample("chain3_c.txt"), "--samples", "20"],
    ["check", "stitch", sample("chain4.txt"), sample("chain3_c.txt"), "--samples", "20"],
    ["check", "product-iso", "preset:M3", "preset:N5", "--samples", "20"],
    ["check", "functor", sample("cube_sub.txt"), "--map", sample("cube_map.txt"), "--samples", "20"],
    ["check", "gamma", sample("r_const_x1.txt"), "--samples", "20"],
    ["check", "breadth", "preset:boolean3"],
    ["check", "delta-axioms", "preset:M3", "--samples", "50"],
])
def test_checks_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert out.startswith("$ ordercomplex") and "verdict: PASS" in out


def test_runs_are_deterministic(capsys):
    argv = ["check", "delta-axioms", "preset:N5", "--samples", "30", "--seed", "3", "--json"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_check_reports_are_replayable(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "check", "thicken", sample("m3_thicken.txt"), "--samples", "20",
                     "--cert-out", str(cert))
    assert code == 0
    code, _, _ = run(capsys, "check", "--replay", str(cert))
    assert code == 0


def test_eval_reproduces_the_contravariant_counterexample(capsys):
    code, joined, _ = run(capsys, "eval", sample("cube_sub.txt"), "contra(u) | contra(v)", "--map", sample("cube_map.txt"))
    assert code == 0 and "111=0/1" in joined and "110=1/1" in joined
    code, pulled, _ = run(capsys, "eval", sample("cube_sub.txt"), "contra(u | v)", "--map", sample("cube_map.txt"))
    assert code == 0 and "111=1/1" in pulled


def test_eval_meet_and_join(capsys):
    code, out, _ = run(capsys, "eval", sample("m3_points.txt"), "fa | fb")
    assert code == 0 and out.strip() == "point: result 0=1/1 a=1/1 b=1/1 c=1/1 1=1/1"
    code, _, err = run(capsys, "eval", sample("m3_points.txt"), "fa | bad")
    assert code == 2
    code, _, _ = run(capsys, "eval", sample("m3_points.txt"), "__import__('os')")
    assert code == 2


def test_export_formats(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "preset:M3", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    target = tmp_path / "m3.off"
    code, _, _ = run(capsys, "export", "preset:M3", "--format", "off", "-o", str(target))
    assert code == 0 and target.read_text().startswith("OFF")
    code, _, err = run(capsys, "export", "preset:boolean4", "--format", "off")
    assert code == 2 and "DimensionTooHigh" in err


@pytest.mark.parametrize("kind", ["gamma-interval", "gamma-join", "gamma-meet", "edmondson"])
def test_witnesses_and_replay(tmp_path, capsys, kind):
    cert = tmp_path / f"{kind}.json"
    code, out, _ = run(capsys, "witness", kind, "--cert-out", str(cert))
    assert code == 0, out
    code, _, _ = run(capsys, "check", "--replay", str(cert))
    assert code == 0


def test_interval_witness_numbers(capsys):
    code, out, _ = run(capsys, "witness", "gamma-interval", "--r", sample("r_const_x1.txt"))
    assert code == 0
    assert "PASS d(p,r) < eps: 3/40" in out and "PASS d(s,r) >= target: 201/20" in out


def test_edmondson_witness_for_given_points(capsys):
    code, out, _ = run(capsys, "witness", "edmondson", "--x", "1/2,1/2", "--x2", "3/4,1/4", "--json")
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "no-such-check"])
    assert info.value.code == 2
    code, _, _ = run(capsys, "check")
    assert code == 2
    code, _, _ = run(capsys, "check", "functor", sample("cube_sub.txt"))
    assert code == 2
