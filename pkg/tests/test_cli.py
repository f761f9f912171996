import json

import pytest

from birat import io
from birat.cli import main
from birat.maps import compose

from conftest import CUBIC, DP4


@pytest.fixture
def files(tmp_path, G, G2):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    out = {
        "cubic": write("cubic.txt", "# diagonal cubic\nvariables: x, y, z, t\n" + CUBIC[0] + "\n"),
        "dp4": write("dp4.txt", "variables: x, y, z, t, s\n" + "\n".join(DP4) + "\n"),
        "cone": write("cone.txt", "variables: x, y, z, t\nx^3 + y^3 + z^3\n"),
        "broken": write("broken.txt", "variables: x, y, z, t\nx^3 + 2y^3\n"),
    }
    X = G.map.surface
    for name, fmap in [("G", G.map), ("G2", G2.map), ("GG2", compose(G.map, G2.map))]:
        path = str(tmp_path / f"{name}.map")
        io.write_map_file(path, X, fmap)
        out[name] = path
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validate(capsys, files):
    code, out, _ = run(capsys, "validate", files["cubic"])
    assert code == 0 and "valid: true" in out
    code, out, _ = run(capsys, "validate", files["cone"], "--format", "json")
    assert code == 2
    rep = json.loads(out)
    assert rep["failed"] == "smoothness" and rep["detail"] == "singular at (0 : 0 : 0 : 1)"


def test_parse_error_exit_code(capsys, files):
    code, _, err = run(capsys, "validate", files["broken"])
    assert code == 1
    assert err.startswith("error [parse]") and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "nope.txt"))
    assert code == 1 and "Traceback" not in err


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["involution"])
    assert exc.value.code == 1
    assert "error [usage]" in capsys.readouterr().err


def test_geiser_json_is_deterministic(capsys, files):
    argv = ["involution", files["cubic"], "geiser", "--point", "1,-1,-1,1", "--format", "json"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    _, second, _ = run(capsys, *argv)
    assert first == second
    data = json.loads(first)
    assert data["kind"] == "geiser" and data["degree"] == 2 and data["selfmap"] is True
    assert data["centre"]["degree"] == 1
    assert len(data["forms"]) == 4


def test_text_output(capsys, files):
    code, out, _ = run(capsys, "involution", files["cubic"], "geiser", "--point", "1:-1:-1:1")
    assert code == 0
    assert out.startswith("geiser involution, degree 2")
    assert "selfmap: true" in out


def test_centre_errors(capsys, files):
    code, _, err = run(capsys, "involution", files["cubic"], "bertini", "--point", "1,-1,-1,1")
    assert code == 2 and "WrongCentreDegree" in err
    code, _, err = run(capsys, "involution", files["cubic"], "geiser", "--point", "1,0,0,0")
    assert code == 2


def test_dp4_geiser_from_ideal(capsys, files):
    code, out, _ = run(capsys, "involution", files["dp4"], "geiser", "--ideal", "x, z, s", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["centre"]["degree"] == 2
    assert data["centre"]["field"]["minpoly"] == "a^2 + 1"
    assert data["degree"] == 3


def test_save_and_verify(capsys, files, tmp_path):
    saved = str(tmp_path / "saved.map")
    code, _, _ = run(capsys, "involution", files["cubic"], "geiser", "--point", "1,-1,-1,1",
                     "--save-map", saved)
    assert code == 0
    code, out, _ = run(capsys, "verify", files["cubic"], "involution", saved, "--samples", "5")
    assert code == 0 and out.startswith("involution: true")
    code, out, _ = run(capsys, "verify", files["cubic"], "equal", saved, files["G"], "--samples", "5")
    assert out.startswith("equal: true")
    code, out, _ = run(capsys, "verify", files["cubic"], "equal", files["G"], files["G2"],
                       "--format", "json", "--samples", "5")
    data = json.loads(out)
    assert data["verdict"] is False and data["witnesses"]
    code, out, _ = run(capsys, "verify", files["cubic"], "selfmap", files["GG2"], "--samples", "5")
    assert out.startswith("selfmap: true")


def test_factorize_command(capsys, files):
    code, out, _ = run(capsys, "factorize", files["cubic"], files["GG2"], "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [l["kind"] for l in data["links"]] == ["geiser", "geiser"]
    assert data["round_trip"] is True


def test_factorize_needs_cubic(capsys, files, tmp_path):
    ident = tmp_path / "id.map"
    ident.write_text("variables: x, y, z, t, s\nx\ny\nz\nt\ns\n")
    code, _, err = run(capsys, "factorize", files["dp4"], str(ident))
    assert code == 2
