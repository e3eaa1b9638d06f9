#!/usr/bin/env python3
"""Integration tests for the nklab command-line tool.

Usage: cli_tests.py /path/to/nklab
Exits nonzero on the first failing assertion.
"""

import json
import math
import os
import subprocess
import sys
import tempfile

NKLAB = sys.argv[1]
FAILURES = []


def run(args, env_extra=None, expect=0):
    env = dict(os.environ)
    env.pop("NKLAB_SEED", None)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run([NKLAB] + args, capture_output=True, text=True, env=env)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(
            f"nklab {' '.join(args)}: exit {proc.returncode}, expected {expect}\n"
            f"stdout: {proc.stdout[:500]}\nstderr: {proc.stderr[:500]}"
        )
    return proc


def check(name, fn):
    try:
        fn()
        print(f"PASS {name}")
    except AssertionError as exc:
        print(f"FAIL {name}: {exc}")
        FAILURES.append(name)


def circ_close(a, b, tol=1e-7):
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d) <= tol


def write_json(payload):
    fd, path = tempfile.mkstemp(suffix=".json")
    with os.fdopen(fd, "w") as f:
        json.dump(payload, f)
    return path


def test_verify_all():
    out = run(["verify", "all", "--format", "json"]).stdout
    report = json.loads(out)
    assert report["overall_pass"] is True, "suite did not pass"
    assert report["samples"] == 200 and report["seed"] == 42
    assert len(report["checks"]) >= 50, f"only {len(report['checks'])} checks"


def test_verify_structure_enumeration():
    report = json.loads(
        run(["verify", "structure", "--samples", "1", "--format", "json"]).stdout
    )
    assert len(report["checks"]) >= 10
    names = [c["name"] for c in report["checks"]]
    assert len(set(names)) == len(names), "duplicate check names"


def test_determinism():
    args = ["verify", "all", "--format", "json", "--seed", "7"]
    assert run(args).stdout == run(args).stdout, "reports differ between runs"


def test_out_file_matches_stdout():
    stdout = run(["verify", "berger", "--format", "json", "--seed", "3"]).stdout
    path = tempfile.mktemp(suffix=".json")
    run(["verify", "berger", "--format", "json", "--seed", "3", "--out", path])
    with open(path) as f:
        assert f.read() == stdout, "--out content differs from stdout"
    os.unlink(path)


def test_seed_env_override():
    via_flag = run(["verify", "structure", "--samples", "5", "--seed", "11",
                    "--format", "json"]).stdout
    via_env = run(["verify", "structure", "--samples", "5", "--seed", "99",
                   "--format", "json"], env_extra={"NKLAB_SEED": "11"}).stdout
    assert via_flag == via_env, "NKLAB_SEED did not take precedence"
    run(["verify", "structure"], env_extra={"NKLAB_SEED": "pony"}, expect=2)


def test_usage_errors():
    run(["verify", "bogus"], expect=2)
    run(["verify", "structure", "--samples", "0"], expect=2)
    run(["verify", "structure", "--format", "yaml"], expect=2)
    run(["frobnicate"], expect=2)
    run([], expect=2)


def test_classify_trivial():
    path = write_json({
        "delta": 1,
        "A": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "B": [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    })
    result = json.loads(run(["classify", "--input", path]).stdout)
    os.unlink(path)
    assert result["case"] == "1"
    for v in result["params"].values():
        assert circ_close(v, 0.0, 1e-9), f"expected zero angles, got {v}"


def test_classify_first_example_pair():
    # A = -1/2 Id, B = -sqrt(3)/2 Id: all doubled angles are 4*pi/3
    s = -math.sqrt(3) / 2
    path = write_json({
        "delta": 1,
        "A": [[-0.5, 0, 0], [0, -0.5, 0], [0, 0, -0.5]],
        "B": [[s, 0, 0], [0, s, 0], [0, 0, s]],
    })
    result = json.loads(run(["classify", "--input", path]).stdout)
    os.unlink(path)
    assert result["case"] == "1"
    for v in result["params"].values():
        assert circ_close(v, 4 * math.pi / 3, 1e-9), f"angle {v}"
    assert result["refined"]["kind"] == "refined1"


def test_classify_bad_input():
    fd, path = tempfile.mkstemp(suffix=".json")
    with os.fdopen(fd, "w") as f:
        f.write("{ not json")
    run(["classify", "--input", path], expect=2)
    os.unlink(path)
    run(["classify", "--input", "/nonexistent/x.json"], expect=2)
    path = write_json({"delta": 1, "A": [[1, 0], [0, 1]], "B": []})
    run(["classify", "--input", path], expect=2)
    os.unlink(path)


def test_angles_builtins():
    expected = {
        "example1": (4 * math.pi / 3,) * 3,
        "example2": (0.0, math.pi, math.pi),
        "example3": (math.pi, math.pi, 0.0),
    }
    for name, triple in expected.items():
        result = json.loads(
            run(["angles", "--immersion", name, "--samples", "20"]).stdout
        )
        assert result["lagrangian"] is True
        assert result["spread"] <= 1e-7, f"{name} spread {result['spread']}"
        got = result["canonical_triple"]
        direct = all(circ_close(g, t) for g, t in zip(got, triple))
        swapped = (circ_close(got[0], triple[0]) and circ_close(got[1], triple[2])
                   and circ_close(got[2], triple[1]))
        assert direct or swapped, f"{name}: {got} vs {triple}"


def test_angles_non_lagrangian():
    proc = run(["angles", "--immersion", "nonlagrangian", "--samples", "5"],
               expect=1)
    result = json.loads(proc.stdout)
    assert result["lagrangian"] is False
    assert result["lagrangian_residual_max"] > 0.1


def test_angles_json_diagonal():
    # the diagonal immersion is congruent to the first built-in example;
    # its zero angles canonicalize to the 4*pi/3 triple
    path = write_json({"p": {"u": 1.0}, "q": {"u": 1.0}})
    result = json.loads(
        run(["angles", "--immersion", path, "--samples", "5"]).stdout
    )
    os.unlink(path)
    assert result["lagrangian"] is True
    for v in result["canonical_triple"]:
        assert circ_close(v, 4 * math.pi / 3, 1e-6)


def test_angles_bad_file():
    run(["angles", "--immersion", "/nonexistent/imm.json"], expect=2)
    path = write_json({"p": {"u": 1.0}})
    run(["angles", "--immersion", path], expect=2)
    os.unlink(path)


def test_codazzi_scan_case2():
    result = json.loads(run(["codazzi-scan", "--case", "2", "--grid", "50"]).stdout)
    assert result["min_norm"] > 0.4, f"min {result['min_norm']}"
    assert len(result["entries"]) + result["skipped"] == 50


def test_codazzi_scan_case3():
    result = json.loads(run(["codazzi-scan", "--case", "3"]).stdout)
    const = 8.0 / (9.0 * math.sqrt(3))
    for entry in result["entries"]:
        assert abs(abs(entry["je1_component"]) - const) < 1e-10
        assert entry["norm"] > 0


def test_codazzi_scan_case4():
    result = json.loads(run(["codazzi-scan", "--case", "4", "--grid", "10"]).stdout)
    assert result["entries"], "empty scan"
    assert all(e["norm"] > 0 for e in result["entries"])
    assert result["min_norm"] > 0


def test_codazzi_scan_bad_case():
    run(["codazzi-scan", "--case", "7"], expect=2)


def main():
    tests = [(n, f) for n, f in sorted(globals().items()) if n.startswith("test_")]
    for name, fn in tests:
        check(name, fn)
    print(f"{len(tests) - len(FAILURES)}/{len(tests)} CLI tests passed")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
