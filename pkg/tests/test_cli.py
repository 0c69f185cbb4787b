import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lipenhance.cli import dumps, main
from lipenhance.image_io import PixelImage, load_pgm, save_pgm, to_gray_domain
from lipenhance.range_statistics import image_mean_dynamic_range
from lipenhance.synthetic import dark_image


@pytest.fixture
def dark_pgm(tmp_path):
    path = tmp_path / "dark.pgm"
    save_pgm(path, dark_image(64, seed=2))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dumps_uses_17_digits():
    text = dumps({"a": 0.1, "b": [1, None, True], "c": float("nan"), "d": "é"})
    doc = json.loads(text)
    assert '"a": 0.10000000000000001' in text
    assert doc == {"a": 0.1, "b": [1, None, True], "c": None, "d": "é"}


def test_stats_constant_image(tmp_path, capsys):
    path = tmp_path / "c.pgm"
    save_pgm(path, PixelImage(np.full((4, 4), 77)))
    code, out, _ = run(["stats", str(path)], capsys)
    doc = json.loads(out)
    assert code == 0
    for fw in ("classical", "logarithmic"):
        assert doc[fw]["degenerate"] is True
        assert doc[fw]["sigma"] == 0.0
        assert doc[fw]["mean_dynamic_range"] == 0.0


def test_stats_two_valued_recovers_values(tmp_path, capsys):
    path = tmp_path / "t.pgm"
    pixels = np.array([40] * 30 + [180] * 10).reshape(5, 8)
    save_pgm(path, PixelImage(pixels))
    code, out, _ = run(["stats", str(path), "--framework", "both"], capsys)
    doc = json.loads(out)
    for fw in ("classical", "logarithmic"):
        assert doc[fw]["pixel_units"]["v_low"] == pytest.approx(40, abs=1e-6)
        assert doc[fw]["pixel_units"]["v_high"] == pytest.approx(180, abs=1e-6)
    assert doc["conjugacy_check"]["consistent"] is True


def test_stats_single_framework(dark_pgm, capsys):
    code, out, _ = run(["stats", dark_pgm, "--framework", "log"], capsys)
    doc = json.loads(out)
    assert "logarithmic" in doc and "classical" not in doc and "conjugacy_check" not in doc


def test_enhance_identity_when_disabled(dark_pgm, tmp_path, capsys):
    out = tmp_path / "o.pgm"
    code, _, _ = run(["enhance", dark_pgm, str(out), "--translate", "off", "--homothety", "off"], capsys)
    assert code == 0
    assert load_pgm(out) == load_pgm(dark_pgm)


def test_enhance_dark_image(dark_pgm, tmp_path, capsys):
    out, rep = tmp_path / "o.pgm", tmp_path / "r.json"
    code, _, _ = run(["enhance", dark_pgm, str(out), "--translate", "on", "--report", str(rep)], capsys)
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["mean_pixel_level_after"] > doc["mean_pixel_level_before"]
    assert doc["mean_dynamic_range_after"] >= doc["mean_dynamic_range_before"]
    for key in ("w0", "lambda_pos", "lambda_neg", "iterations", "residuals"):
        assert key in doc
    assert load_pgm(out).pixels.mean() > load_pgm(dark_pgm).pixels.mean()


def test_enhance_translate_only_p2(dark_pgm, tmp_path, capsys):
    out = tmp_path / "o.pgm"
    code, _, _ = run(["enhance", dark_pgm, str(out), "--homothety", "off", "--format", "P2"], capsys)
    assert code == 0 and out.read_bytes().startswith(b"P2\n")


def test_baseline_gamma_one_is_identity(dark_pgm, tmp_path, capsys):
    out = tmp_path / "g.pgm"
    assert run(["baseline", dark_pgm, str(out), "--method", "gamma", "--gamma", "1"], capsys)[0] == 0
    assert np.max(np.abs(load_pgm(out).pixels - load_pgm(dark_pgm).pixels)) <= 1


def test_baseline_histeq_uniform(tmp_path, capsys):
    src, out = tmp_path / "u.pgm", tmp_path / "h.pgm"
    img = PixelImage(np.repeat(np.arange(256), 2).reshape(16, 32))
    save_pgm(src, img)
    assert run(["baseline", str(src), str(out), "--method", "histeq"], capsys)[0] == 0
    assert np.max(np.abs(load_pgm(out).pixels - img.pixels)) <= 1


def test_baseline_auto_gamma_quarter(tmp_path, capsys):
    src, out = tmp_path / "q.pgm", tmp_path / "g.pgm"
    img = PixelImage(np.array([0, 0, 0, 255] * 4).reshape(4, 4))
    save_pgm(src, img)
    run(["baseline", str(src), str(out), "--method", "gamma", "--gamma", "auto"], capsys)
    from lipenhance.baselines import gamma_correction
    assert load_pgm(out) == gamma_correction(img, 0.5)


def test_compare_outputs(dark_pgm, tmp_path, capsys):
    outdir = tmp_path / "cmp"
    code, _, _ = run(["compare", dark_pgm, str(outdir)], capsys)
    assert code == 0
    files = sorted(os.listdir(outdir))
    assert len([f for f in files if f.endswith(".pgm")]) == 4 and len(files) == 5
    doc = json.loads((outdir / "report.json").read_text())
    assert set(doc["methods"]) == {"original", "histeq", "gamma", "lip"}
    for row in doc["methods"].values():
        assert {"dynamic_range", "mean_dynamic_range", "mean", "sigma"} <= set(row)
    lip = image_mean_dynamic_range(to_gray_domain(load_pgm(outdir / "lip_enhanced.pgm")))
    orig = image_mean_dynamic_range(to_gray_domain(load_pgm(dark_pgm)))
    assert lip >= orig


def test_io_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n4 4\n255\n\x00")
    code, _, err = run(["stats", str(bad)], capsys)
    assert code == 2 and "lipenhance:" in err
    code, _, _ = run(["stats", str(tmp_path / "missing.pgm")], capsys)
    assert code == 2
    code, _, _ = run(["baseline", str(bad), str(tmp_path / "x.pgm"), "--method", "gamma",
                      "--gamma", "-3"], capsys)
    assert code == 2


def test_non_convergence_exit_3(dark_pgm, tmp_path, capsys, monkeypatch):
    from lipenhance import cli

    original = cli.EnhanceOptions
    monkeypatch.setattr(cli, "EnhanceOptions",
                        lambda **kw: original(max_iter=1, tol=1e-16, **kw))
    out, rep = tmp_path / "o.pgm", tmp_path / "r.json"
    code, _, _ = run(["enhance", dark_pgm, str(out), "--report", str(rep)], capsys)
    assert code == 3
    assert out.exists() and json.loads(rep.read_text())["converged"] is False


def test_module_entry_point(dark_pgm):
    res = subprocess.run([sys.executable, "-m", "lipenhance", "stats", dark_pgm],
                         capture_output=True, check=True)
    assert json.loads(res.stdout)["width"] == 64
