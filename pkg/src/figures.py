"""
六幅图背后的数据：每幅图由若干面板组成，每个面板是 (t, n_z) 网格
或一条沿 t / n_z 的曲线，统一输出为一张整洁的表。
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from .channels import ChannelVariant, MarkovianKind
from .errors import DomainError
from .measures import CoherenceMeasureId
from .ordering import GridSpec, figure_surface

SURFACE_AXIS = tuple(float(v) for v in np.linspace(0.0, 1.0, 21))
LINE_AXIS = tuple(float(v) for v in np.linspace(0.0, 1.0, 101))

FIGURE_COLUMNS = ["figure", "panel", "channel", "p", "measure", "alpha", "t", "n_z", "value"]

_AD = ChannelVariant.AMPLITUDE_DAMPING
_PD = ChannelVariant.PHASE_DAMPING
_FRACTIONS = {0.125: "1/8", 0.25: "1/4", 0.375: "3/8", 0.5: "1/2", 0.625: "5/8", 0.75: "3/4", 0.875: "7/8"}


def _fraction(x: float) -> str:
    return _FRACTIONS.get(x, f"{x:g}")


@dataclass(frozen=True)
class FigurePanel:
    label: str
    kind: MarkovianKind
    measure: CoherenceMeasureId
    t_values: Tuple[float, ...]
    n_z_values: Tuple[float, ...]

    def table(self) -> pd.DataFrame:
        grid = GridSpec(
            t_values=self.t_values,
            n_z_values=self.n_z_values,
            azimuth_values=(0.0,),
            p_values=(self.kind.p,),
        )
        return figure_surface(self.kind, self.measure, g=grid)


@dataclass(frozen=True)
class FigureSpec:
    """
    图的定义

    claims 是图注中声称的单调性，每项为 (沿哪一列, increasing/decreasing)
    """

    figure_id: int
    caption: str
    panels: Tuple[FigurePanel, ...]
    claims: Tuple[Tuple[str, str], ...] = ()


def _surfaces(kind_p: List[Tuple[ChannelVariant, float]], measure: CoherenceMeasureId, label) -> Tuple[FigurePanel, ...]:
    return tuple(
        FigurePanel(label(p), MarkovianKind(variant, p), measure, SURFACE_AXIS, SURFACE_AXIS) for variant, p in kind_p
    )


def _build_registry() -> Dict[int, FigureSpec]:
    relative = CoherenceMeasureId.relative_entropy()
    alphas = (0.25, 0.75, 1.25, 1.75)
    quarter_p = (0.25, 0.5, 0.75)

    fig2 = tuple(
        FigurePanel(f"p={_fraction(p)}, n_z={n_z:g}", MarkovianKind(_AD, p), relative, LINE_AXIS, (n_z,))
        for p in quarter_p
        for n_z in (0.3, 0.6, 0.9)
    )
    fig3 = tuple(
        FigurePanel(f"p={_fraction(p)}, t={t:g}", MarkovianKind(_AD, p), relative, (t,), LINE_AXIS)
        for p in quarter_p
        for t in (0.3, 0.6, 0.9)
    )
    fig5 = tuple(
        FigurePanel(f"alpha={_fraction(a)}", MarkovianKind(_AD, 0.5), CoherenceMeasureId.tsallis(a), SURFACE_AXIS, SURFACE_AXIS)
        for a in alphas
    )
    fig6 = tuple(
        FigurePanel(f"alpha={_fraction(a)}", MarkovianKind(_PD, 0.5), CoherenceMeasureId.tsallis(a), SURFACE_AXIS, SURFACE_AXIS)
        for a in alphas
    )

    specs = [
        FigureSpec(
            1,
            "振幅阻尼下 C_r(ε(ρ)) 随 t、n_z 的变化，p = 1/4, 1/2, 3/4",
            _surfaces([(_AD, p) for p in quarter_p], relative, lambda p: f"p={_fraction(p)}"),
        ),
        FigureSpec(2, "振幅阻尼下 C_r(ε(ρ)) 随 t 的曲线，n_z = 0.3, 0.6, 0.9", fig2, (("t", "increasing"),)),
        FigureSpec(3, "振幅阻尼下 C_r(ε(ρ)) 随 n_z 的曲线，t = 0.3, 0.6, 0.9", fig3, (("n_z", "decreasing"),)),
        FigureSpec(
            4,
            "振幅阻尼下 C_2(ε(ρ)) 随 t、n_z 的变化，p = 1/8, 3/8, 5/8, 7/8",
            _surfaces([(_AD, p) for p in (0.125, 0.375, 0.625, 0.875)], CoherenceMeasureId.tsallis(2.0), lambda p: f"p={_fraction(p)}"),
        ),
        FigureSpec(5, "振幅阻尼 p = 1/2 下 C_α(ε(ρ))，α = 1/4, 3/4, 5/4, 7/4", fig5),
        FigureSpec(6, "相位阻尼 p = 1/2 下 C_α(ε(ρ))，α = 1/4, 3/4, 5/4, 7/4", fig6),
    ]
    return {spec.figure_id: spec for spec in specs}


FIGURES: Dict[int, FigureSpec] = _build_registry()


def build_figure(fig_id: int) -> pd.DataFrame:
    """
    生成某幅图的数据表

    返回:
        列为 figure, panel, channel, p, measure, alpha, t, n_z, value 的 DataFrame，
        面板顺序与注册表一致，面板内 t 外层、n_z 内层
    """
    if fig_id not in FIGURES:
        raise DomainError(f"未知的图编号: {fig_id}（可选 {sorted(FIGURES)}）")
    spec = FIGURES[fig_id]
    parts = []
    for panel in spec.panels:
        table = panel.table()
        table.insert(0, "figure", spec.figure_id)
        table.insert(1, "panel", panel.label)
        table.insert(2, "channel", panel.kind.variant.value)
        table.insert(3, "p", panel.kind.p)
        table.insert(4, "measure", panel.measure.kind.value)
        table.insert(5, "alpha", np.nan if panel.measure.alpha is None else panel.measure.alpha)
        parts.append(table)
    return pd.concat(parts, ignore_index=True)[FIGURE_COLUMNS]
