import subprocess
import sys

import pytest

from localdecision.cli import main
from localdecision.graph import complete, cycle, format_instance, path
from localdecision.nld import certificates_from_map, format_certificates


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return {
        "tri": put("tri.g", format_instance(complete(3, "123"))),
        "badtri": put("badtri.g", format_instance(complete(3, "112"))),
        "c8": put("c8.g", format_instance(cycle(8))),
        "c4": put("c4.g", format_instance(cycle(4))),
        "c5": put("c5.g", format_instance(cycle(5))),
        "p4": put("p4.g", format_instance(path(4, "abab"))),
        "certs": put("c8.certs", format_certificates(
            certificates_from_map(cycle(4), [u % 4 for u in range(8)]))),
        "map": put("map.txt", "\n".join(str(u % 4) for u in range(8)) + "\n"),
        "badmap": put("badmap.txt", "0\n1\n"),
        "bounds": put("bounds.txt", "3\n4\n6\n"),
        "garbage": put("garbage.g", "3 1\n0 x\n"),
        "tmp": tmp_path,
    }


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decide_triangle(capsys, files):
    code, out, _ = call(capsys, "decide", "--language", "coloring", "--instance", files["tri"],
                        "--radius", "1", "--decider", "hereditary")
    assert code == 0 and out.endswith("verdict=accept\n")
    code, out, _ = call(capsys, "decide", "--language", "coloring", "--instance",
                        files["badtri"], "--radius", "1")
    assert code == 1 and "node 2=yes" in out and "verdict=reject" in out


def test_decide_with_identities(capsys, files, tmp_path):
    ids = tmp_path / "ids"
    ids.write_text("3\n1\n2\n")
    code, out, _ = call(capsys, "decide", "--language", "coloring", "--instance",
                        files["badtri"], "--radius", "1", "--decider", "min-id",
                        "--ids", str(ids))
    assert code == 1 and "node 0=yes" in out and "node 1=no" in out
    code, _, err = call(capsys, "decide", "--language", "coloring", "--instance",
                        files["badtri"], "--radius", "1", "--decider", "min-id")
    assert code == 2 and "identity" in err


def test_lift_decider(capsys, files):
    code, out, _ = call(capsys, "lift-decider", "--language", "coloring", "--instance",
                        files["tri"], "--radius", "1", "--oracle-bound", "4",
                        "--no-early-exit")
    assert code == 0 and "simulations=72" in out and "simulations 1=24" in out
    code, out, _ = call(capsys, "lift-decider", "--language", "coloring", "--instance",
                        files["tri"], "--radius", "1", "--oracle-bounds", files["bounds"])
    assert code == 0 and "simulations 2=120" in out
    code, out, _ = call(capsys, "lift-decider", "--language", "coloring", "--instance",
                        files["tri"], "--radius", "1", "--oracle-bound", "2")
    assert code == 1 and "oracle_faithful=no" in out
    code, _, err = call(capsys, "lift-decider", "--language", "coloring", "--instance",
                        files["tri"], "--radius", "1")
    assert code == 2 and "oracle" in err


def test_lift_decider_warns_before_blow_up(capsys, files):
    code, _, err = call(capsys, "lift-decider", "--language", "coloring", "--instance",
                        files["tri"], "--radius", "1", "--oracle-bound", "120")
    assert code == 0 and "warning" in err


def test_lift_check(capsys, files):
    code, out, _ = call(capsys, "lift-check", "--source", files["c8"], "--target", files["c4"],
                        "--t", "1")
    assert code == 0 and "map=0,1,2,3,0,1,2,3" in out and "onto=yes" in out
    code, out, _ = call(capsys, "lift-check", "--source", files["c8"], "--target", files["c4"],
                        "--t", "1", "--map", files["map"])
    assert code == 0
    code, out, _ = call(capsys, "lift-check", "--source", files["c4"], "--target", files["c8"],
                        "--t", "1")
    assert code == 1 and "verdict=none" in out
    code, _, err = call(capsys, "lift-check", "--source", files["c8"], "--target", files["c4"],
                        "--t", "1", "--map", files["badmap"])
    assert code == 2 and "map" in err


def test_closure_search(capsys, files):
    code, out, _ = call(capsys, "closure-search", "--language", "size-at-most:4", "--t", "1",
                        "--max-nodes", "8")
    assert code == 1 and "counterexamples=1" in out and "counterexample 0 map=0,1,2,0,1,2" in out
    code, out, _ = call(capsys, "closure-search", "--language", "size-at-most:4", "--t", "1",
                        "--max-nodes", "8", "--all", "--workers", "2")
    assert code == 1 and "counterexamples=7" in out
    code, out, _ = call(capsys, "closure-search", "--language", "coloring", "--t", "1",
                        "--max-nodes", "5", "--alphabet", "1,2")
    assert code == 0 and "verdict=no counterexample up to 5 nodes" in out


def test_nld_commands(capsys, files, tmp_path):
    out_file = tmp_path / "p4.certs"
    code, out, _ = call(capsys, "nld-prove", "--instance", files["p4"], "--language",
                        "path-pattern:alternating", "--out", str(out_file))
    assert code == 0 and "member=yes" in out
    code, out, _ = call(capsys, "nld-verify", "--instance", files["p4"], "--certs",
                        str(out_file), "--language", "path-pattern:alternating", "--t", "1")
    assert code == 0 and "verdict=accept" in out
    code, out, _ = call(capsys, "nld-verify", "--instance", files["c8"], "--certs",
                        files["certs"], "--language", "size-at-most:4", "--t", "1")
    assert code == 0 and out.count("=yes") == 8
    code, out, _ = call(capsys, "nld-oracle", "--instance", files["c8"], "--language",
                        "size-at-most:4", "--t", "1")
    assert code == 0 and "target n=4" in out
    code, out, _ = call(capsys, "nld-oracle", "--instance", files["c5"], "--language",
                        "size-at-most:4", "--t", "1")
    assert code == 1 and "verdict=reject" in out
    code, _, err = call(capsys, "nld-verify", "--instance", files["c4"], "--certs",
                        files["certs"], "--language", "size-at-most:4", "--t", "1")
    assert code == 2 and "certs" in err


@pytest.mark.parametrize("argv,field", [
    (["decide", "--language", "nope", "--instance", "{tri}", "--radius", "1"], "language"),
    (["decide", "--language", "coloring", "--instance", "{garbage}", "--radius", "1"],
     "edge 0"),
    (["decide", "--language", "coloring", "--instance", "{tri}", "--radius", "-1"], "radius"),
    (["decide", "--language", "forest", "--instance", "{tri}", "--radius", "1",
      "--decider", "min-id"], "forest"),
    (["closure-search", "--language", "coloring", "--t", "0", "--max-nodes", "3"], "t >= 1"),
    (["closure-search", "--language", "coloring", "--t", "1", "--max-nodes", "3",
      "--workers", "0"], "workers"),
    (["nld-verify", "--instance", "{tri}", "--certs", "{tri}", "--language", "coloring",
      "--t", "1"], "certs"),
])
def test_input_errors_exit_two(capsys, files, argv, field):
    argv = [a.format(**files) for a in argv]
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and field in err


def test_bad_flags_exit_two(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["decide", "--radius", "x"]) == 2
    capsys.readouterr()


def test_console_script_runs(files):
    res = subprocess.run([sys.executable, "-m", "localdecision.cli", "decide", "--language",
                          "coloring", "--instance", files["tri"], "--radius", "1", "--timing"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "verdict=accept" in res.stdout
    assert "wall_time=" in res.stderr and "wall_time" not in res.stdout


def test_reports_are_byte_identical(capsys, files):
    argv = ["closure-search", "--language", "size-at-most:4", "--t", "1", "--max-nodes", "7",
            "--all"]
    outs = {call(capsys, *argv, "--workers", str(w))[1] for w in (1, 1, 2, 4)}
    assert len(outs) == 1
