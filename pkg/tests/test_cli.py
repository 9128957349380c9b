import json
import xml.etree.ElementTree as ET

import pytest

from stairtile.cli import main


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def tri(tmp_path):
    return _write(tmp_path, "tri.json", {"breakpoints": [[0, 1], [1, 0]]})


def test_density_triangle(capsys, tri):
    code, out, _ = _run(capsys, ["density", "--disk", tri])
    assert code == 0
    data = json.loads(out)
    assert data["theta_L"] == pytest.approx(1.5, abs=1e-6)
    assert data["A1"] == pytest.approx(1 / 3, abs=1e-9)


def test_density_with_verify(capsys, tri):
    code, out, _ = _run(capsys, ["density", "--disk", tri, "--verify", "1.5", "128"])
    data = json.loads(out)
    assert code == 0 and data["covering"]["coverage_fraction"] == 1.0 and data["tiling"]["is_tiling"]


def test_inscribe_square(capsys, tmp_path):
    sq = _write(tmp_path, "sq.json", {"breakpoints": [[0, 1], [1, 1]]})
    code, out, _ = _run(capsys, ["inscribe", "--disk", sq, "--steps", "2", "--oracle", "200"])
    data = json.loads(out)
    assert code == 0 and data["value"] == 1.0 and data["oracle_gap"] == pytest.approx(0.0)


def test_decompose_and_render(capsys, tmp_path, tri):
    cov = _write(tmp_path, "c.json", {"translates": [[-0.25, -0.25]], "l": 0.2})
    svg = tmp_path / "cells.svg"
    code, out, _ = _run(capsys, ["decompose", "--disk", tri, "--covering", cov, "--l", "0.2", "--render", str(svg)])
    data = json.loads(out)
    assert code == 0
    audit = data["audit"]
    for key in ("tiling_ok", "area_ok", "bound_counting_ok", "bound_main_ok", "bound_sharp_ok"):
        assert audit[key] is True
    root = ET.parse(svg).getroot()
    assert len([e for e in root.iter() if e.tag.endswith("path")]) == len(data["cells"])


def test_decompose_rejects_non_covering(capsys, tmp_path, tri):
    cov = _write(tmp_path, "c.json", {"translates": [[-0.5, -0.5]], "l": 0.5})
    code, _, err = _run(capsys, ["decompose", "--disk", tri, "--covering", cov])
    assert code == 1 and "uncovered" in err


def test_check_exit_codes(capsys, tri):
    code, out, _ = _run(capsys, ["check", "--disk", tri, "--lemma", "sqcap-chain", "--trials", "2000"])
    assert code == 0 and json.loads(out)["violations"] == 0
    code, out, _ = _run(capsys, ["check", "--disk", tri, "--lemma", "cut-chain", "--trials", "10000",
                                 "--mutant", "swapped-orientation"])
    assert code == 2 and json.loads(out)["witness"] is not None


def test_normalize_round_trip(capsys, tmp_path):
    quad = _write(tmp_path, "q.json", {"polygon": [[0, 0], [2, 0], [2, 1], [0, 2]]})
    code, out, _ = _run(capsys, ["normalize", "--polygon", quad])
    assert code == 0
    normal = json.loads(out)
    norm_file = _write(tmp_path, "n.json", normal)
    _, out1, _ = _run(capsys, ["density", "--disk", norm_file])
    direct = _write(tmp_path, "d.json", {"breakpoints": normal["breakpoints"]})
    _, out2, _ = _run(capsys, ["density", "--disk", direct])
    assert json.loads(out1)["theta_L"] == pytest.approx(json.loads(out2)["theta_L"], abs=1e-9)
    # a polygon disk file is normalised on load
    _, out3, _ = _run(capsys, ["density", "--disk", quad])
    assert json.loads(out3)["theta_L"] == pytest.approx(json.loads(out2)["theta_L"], abs=1e-9)


def test_expression_disk(capsys, tmp_path):
    e = _write(tmp_path, "e.json", {"expression": "1 - x**2"})
    code, out, _ = _run(capsys, ["inscribe", "--disk", e, "--steps", "0", "--samples", "128"])
    # max x (1 - x^2) at x = 1/sqrt(3)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2 / (3 * 3**0.5), abs=1e-4)


def test_validation_errors(capsys, tmp_path):
    bad = _write(tmp_path, "bad.json", {"breakpoints": [[0, 1], [0.5, 0.5], [1, 0.25]]})
    code, _, err = _run(capsys, ["density", "--disk", bad])
    assert code == 1 and "slopes" in err
    code, _, err = _run(capsys, ["density", "--disk", str(tmp_path / "missing.json")])
    assert code == 1
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, _, _ = _run(capsys, ["density", "--disk", str(junk)])
    assert code == 1
    with pytest.raises(SystemExit):
        main(["nosuchcommand"])


@pytest.mark.parametrize("extra, n_paths", [(["--stair", "0.3,0.6"], 2), (["--lattice", "1"], None)])
def test_render_outputs_valid_svg(capsys, tmp_path, tri, extra, n_paths):
    out = tmp_path / "o.svg"
    code, _, _ = _run(capsys, ["render", "--disk", tri, "--out", str(out)] + extra)
    assert code == 0
    root = ET.parse(out).getroot()
    paths = [e for e in root.iter() if e.tag.endswith("path")]
    if n_paths is not None:
        assert len(paths) == n_paths
    else:
        assert len(paths) % 2 == 0 and paths
    flips = [e.get("transform") for e in root.iter() if e.get("transform")]
    assert "scale(1,-1)" in flips


def test_render_covering(capsys, tmp_path, tri):
    cov = _write(tmp_path, "c.json", {"translates": [[-0.25, -0.25], [-0.1, -0.3]], "l": 0.2})
    out = tmp_path / "cov.svg"
    assert _run(capsys, ["render", "--disk", tri, "--covering", cov, "--out", str(out)])[0] == 0
    paths = [e for e in ET.parse(out).getroot().iter() if e.tag.endswith("path")]
    assert len(paths) == 2
