import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from tricircle import build_trajectory, csc_limit, plan, plan_with_radii, validate
from tricircle.ccc import HALF_PI, Family
from tricircle.cli import main
from tricircle.io import CSV_HEADER, TrajectoryDocument, read_sweep_csv, sweep_rows, write_sweep_csv
from tricircle.solver import circle_circle_plan

from conftest import EX1_A, EX1_B, EX2_A, EX2_B

EX1 = ["--a", "-3,1,0.785", "--b", "0,0,0"]
EX2 = ["--a", "-30,10,0.714", "--b", "0,0,0"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    fields = dict(line.split("\t", 1) for line in out.splitlines() if "\t" in line)
    return code, fields, out, err


def documents():
    yield TrajectoryDocument.from_trajectory(build_trajectory(EX1_A, EX1_B, -1, 1, 2.634), EX1_A, EX1_B, 1.0, 3.6)
    yield TrajectoryDocument.from_trajectory(csc_limit(EX1_A, EX1_B, -1, 1, HALF_PI), EX1_A, EX1_B, 1.0)
    yield TrajectoryDocument.from_trajectory(plan_with_radii(EX2_A, EX2_B, 2.04, 59.314, 1.0, 44.5),
                                             EX2_A, EX2_B, 1.0, 44.5)


@pytest.mark.parametrize("doc", list(documents()), ids=["ccc", "csc", "cc"])
def test_json_round_trip(doc, tmp_path):
    text = doc.dumps()
    back = TrajectoryDocument.loads(text)
    assert back == doc
    assert back.to_dict() == json.loads(text)
    path = tmp_path / "t.json"
    doc.save(path)
    assert TrajectoryDocument.load(path) == doc
    traj = back.to_trajectory()
    assert validate(traj, back.start, back.goal, back.meta["r_min"]).passed


@settings(max_examples=40, deadline=None)
@given(st.floats(3.5, 40))
def test_round_trip_is_lossless(l_o):
    traj = plan(EX2_A, EX2_B, 1.0, 32.0 + l_o)
    doc = TrajectoryDocument.from_trajectory(traj, EX2_A, EX2_B, 1.0, 32.0 + l_o)
    again = TrajectoryDocument.loads(doc.dumps()).to_trajectory()
    assert again.length == traj.length
    assert again.changeovers == traj.changeovers
    assert [a.circle.center if a.circle else None for a in again.arcs] == \
        [a.circle.center if a.circle else None for a in traj.arcs]


def test_schema_is_checked():
    d = next(documents()).to_dict()
    d["schema"] = "other/9"
    with pytest.raises(ValueError):
        TrajectoryDocument.from_dict(d)


def test_sweep_rows_and_csv(tmp_path):
    fam = Family(EX1_A, EX1_B, -1, 1)
    rows = sweep_rows(fam, 1024, 1.0)
    ks = [r[0] for r in rows]
    assert ks == sorted(ks)
    assert sum(r[4] == "pole" for r in rows) == 2
    jumps = [r for r in rows if r[4].startswith("jump")]
    assert jumps and all(float(r[4].split(":")[1]) == pytest.approx(2 * math.pi) for r in jumps)
    for k, r2, length, word, flag in rows:
        if flag != "pole":
            assert math.isfinite(length) and math.isfinite(r2)
    near = [r for r in rows if abs(r[0] - 2.634) < 0.01]
    assert any(abs(r[2] - 3.60) < 0.01 for r in near)
    path = tmp_path / "s.csv"
    write_sweep_csv(str(path), rows)
    assert path.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert read_sweep_csv(path) == rows


def test_cli_shortest(capsys, tmp_path):
    code, f, _, _ = run(capsys, "shortest", *EX1, "--rmin", "1")
    assert code == 0 and f["word"] == "RSL" and float(f["length"]) == pytest.approx(3.484, abs=1e-3)
    assert f["category"] == "in_O_complement"
    code, f, _, _ = run(capsys, "shortest", "--a", "0,0,0", "--b", "10,0,0", "--rmin", "1")
    assert code == 0 and float(f["length"]) == pytest.approx(10)


def test_cli_degrees(capsys):
    code, f, _, _ = run(capsys, "shortest", "--a", "-3,1,45", "--b", "0,0,0", "--degrees")
    assert code == 0 and f["word"] == "RSL"


@pytest.mark.parametrize("argv", [
    ["shortest", "--a", "oops", "--b", "0,0,0"],
    ["shortest", "--a", "1,2", "--b", "0,0,0"],
    ["shortest", "--b", "0,0,0"],
    ["plan", *EX1],
    ["frobnicate"],
])
def test_cli_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 64


def test_cli_degenerate_pair(capsys):
    code, _, _, err = run(capsys, "shortest", "--a", "1,1,0", "--b", "1,1,0")
    assert code == 2 and err


def test_cli_plan(capsys, tmp_path):
    doc_path = tmp_path / "p.json"
    svg = tmp_path / "p.svg"
    csv_path = tmp_path / "p.csv"
    code, f, _, _ = run(capsys, "plan", *EX1, "--rmin", "1", "--length", "7.00",
                        "--json", str(doc_path), "--svg", str(svg), "--csv", str(csv_path))
    assert code == 0 and f["oracle"] == "pass"
    assert float(f["length"]) == pytest.approx(7.0, abs=1e-6)
    assert float(f["r2"]) == pytest.approx(-1.015, abs=0.01) and float(f["k"]) == pytest.approx(0.360, abs=0.01)
    assert svg.read_text().lstrip().startswith("<?xml")
    assert csv_path.read_text().splitlines()[0] == "arc,s,x,y,heading"
    code, f, _, _ = run(capsys, "validate", "--json", str(doc_path))
    assert code == 0 and f["oracle"] == "pass"


def test_cli_plan_unreachable(capsys):
    code, f, _, err = run(capsys, "plan", *EX1, "--rmin", "1", "--length", "5.5")
    assert code == 3
    assert "unreachable" in err
    assert f["reachable"] == "[3.483, 4.146] ∪ [6.850, ∞)"


def test_cli_plan_with_radii(capsys):
    code, f, _, _ = run(capsys, "plan", *EX2, "--rmin", "1", "--length", "44.5", "--r1", "-2.5", "--r3", "1.5")
    assert code == 0 and f["solver"] == "plan_with_radii"
    assert float(f["k"]) == pytest.approx(0.805, abs=0.01)
    assert float(f["r2"]) == pytest.approx(20.5, abs=0.2)  # reference 20.683, see notes
    code, _, _, _ = run(capsys, "plan", *EX2, "--length", "44.5", "--r1", "-2.5")
    assert code == 64


def test_cli_reachable(capsys, tmp_path):
    code, f, _, _ = run(capsys, "reachable", *EX1)
    assert code == 0 and f["reachable"] == "[3.483, 4.146] ∪ [6.850, ∞)"
    path = tmp_path / "r.json"
    code, f, _, _ = run(capsys, "reachable", *EX2, "--json", str(path))
    assert f["reachable"] == "[31.809, ∞)"
    payload = json.loads(path.read_text())
    assert payload["intervals"] == [[pytest.approx(31.8086, abs=1e-4), None]]
    code, f, _, _ = run(capsys, "reachable", "--a", "0,0,0", "--b", "0.5,0,3.14159")
    assert f["category"] == "ccc_shortest" and f["reachable"].endswith("∞)")


def test_cli_sweep(capsys, tmp_path):
    path = tmp_path / "s.csv"
    fig = tmp_path / "s.png"
    code, _, _, _ = run(capsys, "sweep", *EX1, "--r1", "-1", "--r3", "1", "--grid", "1024",
                        "--csv", str(path), "--svg", str(fig))
    assert code == 0 and fig.stat().st_size > 0
    rows = read_sweep_csv(path)
    assert any(r[4].startswith("jump") for r in rows)
    code, _, out, _ = run(capsys, "sweep", *EX1, "--r1", "-1", "--r3", "1", "--grid", "16")
    assert out.splitlines()[0] == "k,r2,length,word,flag"
    code, _, _, _ = run(capsys, "sweep", *EX1, "--r1", "-1", "--r3", "1", "--grid", "8")
    assert code == 64


def test_cli_sweep_no_hyperbola(capsys):
    code, _, _, err = run(capsys, "sweep", "--a", "0,0,0", "--b", "0,3,3.141592653589793", "--r1", "1", "--r3", "2")
    assert code == 4 and err


def test_cli_validate_rejects_corrupted_document(capsys, tmp_path):
    doc = next(documents())
    d = doc.to_dict()
    d["solution"]["arcs"][1]["start"][0] += 1e-3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, f, _, _ = run(capsys, "validate", "--json", str(path))
    assert code == 1 and f["oracle"] == "fail"
    # --tol loosens pose checks only; the shifted arc still disagrees with its stored length
    code, f, _, _ = run(capsys, "validate", "--json", str(path), "--tol", "1e-2")
    assert code == 1 and "joint" not in f["summary"].split("|")[0]


def test_cli_shortest_json_stdout(capsys):
    code, _, out, _ = run(capsys, "shortest", *EX1, "--json", "-")
    body = out[out.index("{"):]
    doc = TrajectoryDocument.loads(body)
    assert doc.solution["word"] == "RSL" and doc.solution["radii"][1] is None


def test_cc_plan_document_has_no_middle_radius():
    traj = circle_circle_plan(EX2_A, EX2_B, 2.04, 59.314, 1.0, 44.5)
    doc = TrajectoryDocument.from_trajectory(traj, EX2_A, EX2_B, 1.0, 44.5)
    assert doc.solution["kind"] == "cc" and doc.solution["radii"][1] is None
