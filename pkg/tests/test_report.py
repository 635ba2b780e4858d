import pytest

pytest.importorskip("matplotlib")

from clarkeframe.cli import main  # noqa: E402


def test_run_figures(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--seed", "0", "--output-dir", str(out), "--figures"]) == 0
    for name in ("tracking.png", "backbone.png", "segment_0_open.csv", "manifest_open.json"):
        assert (out / name).stat().st_size > 0
    assert (out / "tracking.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_subcommand(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--seed", "1", "--output-dir", str(out)]) == 0
    (out / "backbone.png").unlink(missing_ok=True)
    assert main(["report", str(out)]) == 0
    assert (out / "backbone.png").exists() and (out / "tracking.png").exists()


def test_plan_figure(tmp_path, capsys):
    csv, png = tmp_path / "plan.csv", tmp_path / "plan.png"
    assert main(["plan", "--mm", "--start", "0,0", "--goal", "5,5", "-o", str(csv), "--figure", str(png)]) == 0
    assert png.stat().st_size > 0
    assert main(["plan", "--start", "0,0", "--goal", "0.005,0", "--figure", str(png)]) == 2
