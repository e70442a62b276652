from rankbench import run_scenario, sweep_weights
from rankbench.figures import render_report_figures, render_sweep_figure, slugify

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_slugify():
    assert slugify("sim1") == "sim1"
    assert slugify("sim1[rnc=0.3]") == "sim1_rnc_0.3"
    assert slugify("***") == "scenario"


def test_report_figures_written(desk_catalog, sims, tmp_path):
    comparisons = [run_scenario(desk_catalog, sims[n]) for n in ("sim1", "sim2")]
    paths = render_report_figures(comparisons, tmp_path)
    assert [p.name for p in paths] == ["sim1_scores.png", "sim2_scores.png"]
    for p in paths:
        data = p.read_bytes()
        assert data.startswith(PNG_MAGIC)
        assert len(data) > 1000


def test_sweep_figure_tolerates_error_points(desk_catalog, sims, tmp_path):
    points = sweep_weights(desk_catalog, sims["sim1"], "rnc", [0.1, 1.0, 0.3])
    out = render_sweep_figure(points, "rnc", tmp_path / "sweep.png")
    assert out.read_bytes().startswith(PNG_MAGIC)
