import numpy as np
import pytest

from src.errors import DomainError
from src.figures import FIGURE_COLUMNS, FIGURES, LINE_AXIS, SURFACE_AXIS, build_figure
from src.ordering import surface_monotonicity
from src.output_utils import check_figures_exist, figure_path, figure_status


def test_registry_has_six_figures():
    assert sorted(FIGURES) == [1, 2, 3, 4, 5, 6]
    assert [len(FIGURES[i].panels) for i in sorted(FIGURES)] == [3, 9, 9, 4, 4, 4]


@pytest.mark.parametrize("fig_id", sorted(FIGURES))
def test_figure_table_layout(fig_id):
    table = build_figure(fig_id)
    assert list(table.columns) == FIGURE_COLUMNS
    assert set(table["figure"]) == {fig_id}
    assert list(table["panel"].unique()) == [panel.label for panel in FIGURES[fig_id].panels]
    assert np.all(np.isfinite(table["value"]))
    assert np.all(table["value"] >= 0)


def test_surface_panels_cover_unit_square():
    table = build_figure(1)
    panel = table[table["panel"] == "p=1/4"]
    assert len(panel) == len(SURFACE_AXIS) ** 2
    assert list(panel["t"].iloc[: len(SURFACE_AXIS)]) == [0.0] * len(SURFACE_AXIS)


def test_line_panels():
    fig2 = build_figure(2)
    panel = fig2[fig2["panel"] == "p=1/2, n_z=0.6"]
    assert len(panel) == len(LINE_AXIS)
    assert set(panel["n_z"]) == {0.6}
    fig3 = build_figure(3)
    panel = fig3[fig3["panel"] == "p=3/4, t=0.9"]
    assert set(panel["t"]) == {0.9}
    assert list(panel["n_z"]) == list(LINE_AXIS)


def test_tsallis_figures_carry_alpha():
    assert sorted(build_figure(5)["alpha"].unique()) == [0.25, 0.75, 1.25, 1.75]
    assert build_figure(4)["alpha"].unique().tolist() == [2.0]
    assert build_figure(1)["alpha"].isna().all()
    assert set(build_figure(6)["channel"]) == {"phase-damping"}


@pytest.mark.parametrize("fig_id", [1, 2, 4, 5, 6])
def test_figures_non_decreasing_in_t(fig_id):
    assert surface_monotonicity(build_figure(fig_id), "t", "increasing").empty


@pytest.mark.parametrize("fig_id", [2, 6])
def test_figures_non_increasing_in_n_z(fig_id):
    assert surface_monotonicity(build_figure(fig_id), "n_z", "decreasing").empty


@pytest.mark.parametrize("fig_id", [1, 3, 4, 5])
def test_amplitude_damping_figures_rise_near_equator(fig_id):
    # 振幅阻尼把 Bloch 向量推向 +z，n_z = 0 附近 C_r 与 C_α 随 n_z 先上升
    violations = surface_monotonicity(build_figure(fig_id), "n_z", "decreasing")
    assert not violations.empty
    assert (violations["delta"] > 0).all()
    assert violations["n_z_from"].min() == 0.0


def test_n_z_curve_rises_before_falling():
    # 图注称 C_r 随 n_z 单调递减，但 n_z = 0 附近实际是上升的
    fig3 = build_figure(3)
    panel = fig3[fig3["panel"] == "p=3/4, t=0.9"].set_index("n_z")["value"]
    assert panel.loc[0.01] > panel.loc[0.0]
    assert not surface_monotonicity(fig3, "n_z", "decreasing").empty


def test_unknown_figure():
    with pytest.raises(DomainError):
        build_figure(7)


def test_figure_status(tmp_path):
    assert not check_figures_exist(str(tmp_path))
    for fig_id in FIGURES:
        with open(figure_path(str(tmp_path), fig_id), "w", encoding="utf-8") as f:
            f.write("figure\n")
    (tmp_path / "figure_6.csv").write_text("", encoding="utf-8")
    status = figure_status(str(tmp_path))
    assert status[1] and not status[6]
    assert not check_figures_exist(str(tmp_path))
