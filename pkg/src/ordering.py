"""
相干序扫描：成对比较信道前后的相干序、寻找反转见证、
有限差分单调性检验（并与解析导数对照）、图面数据生成、NC 信道反转搜索。

所有扫描都在网格上整体向量化计算，结果按网格顺序确定性地归并，
相同的 GridSpec 输入给出完全相同的报告。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import yaml
from tqdm import tqdm

from .channels import (
    ChannelVariant,
    KrausChannel,
    MarkovianKind,
    NCChannelParams,
    NCFamily,
    apply_channel,
    apply_channel_batch,
    closed_form_coherence_batch,
    direct_coherence_batch,
    is_incoherent,
    make_markovian,
    make_nc,
)
from .errors import DomainError
from .measures import CoherenceMeasureId, MeasureKind, evaluate, evaluate_batch, l1_batch
from .qubit_core import BlochState, DensityMatrix, bloch_to_matrix, matrices_from_bloch

logger = logging.getLogger(__name__)

TIE_TOL = 1e-9
SLOPE_TOL = 1e-8
FD_STEP = 1e-5
MAX_WITNESSES = 20
_ROW_CHUNK = 512
_LOG2 = math.log(2.0)


class Constraint(str, Enum):
    FIXED_T = "fixed-t"
    FIXED_NZ = "fixed-nz"
    NONE = "none"


class Axis(str, Enum):
    T = "t"
    NZ = "nz"
    NX = "nx"


def _steps(start: float, stop: float, step: float) -> Tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) + 0.0 for i in range(count))


def _expand_values(raw) -> Tuple[float, ...]:
    """YAML 中的取值：列表，或 {start, stop, num} 映射"""
    if isinstance(raw, dict):
        try:
            return tuple(float(v) for v in np.linspace(float(raw["start"]), float(raw["stop"]), int(raw["num"])))
        except KeyError as e:
            raise DomainError(f"网格区间缺少字段 {e}（需要 start, stop, num）") from e
    if isinstance(raw, (int, float)):
        return (float(raw),)
    return tuple(float(v) for v in raw)


@dataclass(frozen=True)
class GridSpec:
    """
    扫描网格

    参数:
        t_values: t ∈ [0,1]
        n_z_values: n_z ∈ [−1,1]
        azimuth_values: (n_x, n_y) 的方位角（弧度）
        p_values: 信道参数 p ∈ [0,1]
        n_x_values: 沿 n_x 方向单调性扫描用，n_x ∈ [−1,1]
    """

    t_values: Tuple[float, ...]
    n_z_values: Tuple[float, ...]
    azimuth_values: Tuple[float, ...]
    p_values: Tuple[float, ...]
    n_x_values: Tuple[float, ...] = _steps(0.05, 0.95, 0.05)

    def __post_init__(self):
        ranges = {
            "t_values": (0.0, 1.0),
            "n_z_values": (-1.0, 1.0),
            "azimuth_values": (-math.inf, math.inf),
            "p_values": (0.0, 1.0),
            "n_x_values": (-1.0, 1.0),
        }
        for name, (low, high) in ranges.items():
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise DomainError(f"网格 {name} 不能为空")
            for v in values:
                if not math.isfinite(v) or v < low or v > high:
                    raise DomainError(f"网格 {name} 的取值 {v} 超出 [{low}, {high}]")
            object.__setattr__(self, name, values)

    @classmethod
    def default(cls) -> "GridSpec":
        return cls(
            t_values=_steps(0.05, 0.95, 0.05),
            n_z_values=_steps(-0.95, 0.95, 0.05),
            azimuth_values=tuple(k * math.pi / 6.0 for k in range(13)),
            p_values=_steps(0.1, 0.9, 0.1),
        )

    @classmethod
    def from_dict(cls, data: dict, base: Optional["GridSpec"] = None) -> "GridSpec":
        """未给出的字段沿用 base（默认网格）"""
        base = base or cls.default()
        known = {"t_values", "n_z_values", "azimuth_values", "p_values", "n_x_values"}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"网格文件含有未知字段: {sorted(unknown)}")
        overrides = {key: _expand_values(value) for key, value in data.items()}
        return replace(base, **overrides)

    @classmethod
    def from_yaml(cls, path: Union[str, Path], base: Optional["GridSpec"] = None) -> "GridSpec":
        path = Path(path)
        if not path.exists():
            raise DomainError(f"网格文件不存在: {path}")
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise DomainError(f"网格文件 {path} 顶层必须是映射")
        return cls.from_dict(data, base)

    def to_dict(self) -> dict:
        return {
            "t_values": list(self.t_values),
            "n_z_values": list(self.n_z_values),
            "azimuth_values": list(self.azimuth_values),
            "p_values": list(self.p_values),
            "n_x_values": list(self.n_x_values),
        }

    def state_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """网格上所有态的 (t, n_x, n_y, n_z)，顺序为 t 最外层、n_z、方位角最内层"""
        t, n_z, az = np.meshgrid(
            np.asarray(self.t_values), np.asarray(self.n_z_values), np.asarray(self.azimuth_values), indexing="ij"
        )
        transverse = np.sqrt(np.clip(1.0 - n_z ** 2, 0.0, None))
        return t.ravel(), (transverse * np.cos(az)).ravel(), (transverse * np.sin(az)).ravel(), n_z.ravel()


@dataclass(frozen=True)
class ReversalWitness:
    """一对相干序被严格反转的态：before[0] > before[1]，after[0] < after[1]"""

    s1: BlochState
    s2: BlochState
    before: Tuple[float, float]
    after: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "s1": self.s1.as_dict(),
            "s2": self.s2.as_dict(),
            "before": list(self.before),
            "after": list(self.after),
        }


@dataclass
class OrderingReport:
    """成对相干序检查结果"""

    channel: MarkovianKind
    measure: CoherenceMeasureId
    constraint: Constraint
    pairs_checked: int
    reversals: List[ReversalWitness]
    tie_tolerance: float
    reversal_count: int = 0
    grid: Optional[GridSpec] = None

    @property
    def preserved(self) -> bool:
        return self.reversal_count == 0

    def to_dict(self) -> dict:
        data = {
            **self.channel.to_dict(),
            **self.measure.to_dict(),
            "constraint": self.constraint.value,
            "tie_tolerance": self.tie_tolerance,
            "pairs_checked": self.pairs_checked,
            "reversal_count": self.reversal_count,
            "preserved": self.preserved,
            "reversals": [w.to_dict() for w in self.reversals],
        }
        if self.grid is not None:
            data["grid"] = self.grid.to_dict()
        return data


@dataclass
class MonotonicityReport:
    """
    有限差分单调性检验结果

    signed slope = slope（声称递增）或 −slope（声称递减），
    violations 为 signed slope < −tolerance 的网格点
    """

    channel: MarkovianKind
    measure: CoherenceMeasureId
    p: float
    axis: Axis
    direction: str
    step: float
    tolerance: float
    points_checked: int
    min_signed_slope: float
    violations: List[Dict[str, float]] = field(default_factory=list)
    analytic_checked: int = 0
    max_analytic_error: Optional[float] = None
    analytic_mismatches: List[Dict[str, float]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations and not self.analytic_mismatches

    def to_dict(self) -> dict:
        return {
            **self.channel.to_dict(),
            **self.measure.to_dict(),
            "axis": self.axis.value,
            "direction": self.direction,
            "step": self.step,
            "tolerance": self.tolerance,
            "points_checked": self.points_checked,
            "min_signed_slope": self.min_signed_slope,
            "violations": self.violations,
            "analytic_checked": self.analytic_checked,
            "max_analytic_error": self.max_analytic_error,
            "analytic_mismatches": self.analytic_mismatches,
        }


@dataclass(frozen=True)
class NCReversal:
    params: NCChannelParams
    witness: ReversalWitness

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "witness": self.witness.to_dict()}


# ---------------------------------------------------------------------------
# 成对比较
# ---------------------------------------------------------------------------

def ordering_sign(m: CoherenceMeasureId, rho1: DensityMatrix, rho2: DensityMatrix, tol: float = TIE_TOL) -> int:
    """m(ρ₁) − m(ρ₂) 的符号，|差| ≤ tol 记为 0"""
    if tol <= 0.0:
        raise DomainError("容差必须为正")
    gap = evaluate(m, rho1) - evaluate(m, rho2)
    if gap > tol:
        return 1
    if gap < -tol:
        return -1
    return 0


def _group_indices(grid: GridSpec, constraint: Constraint) -> List[np.ndarray]:
    n_t, n_z, n_az = len(grid.t_values), len(grid.n_z_values), len(grid.azimuth_values)
    index = np.arange(n_t * n_z * n_az).reshape(n_t, n_z, n_az)
    if constraint is Constraint.FIXED_T:
        return [index[i].ravel() for i in range(n_t)]
    if constraint is Constraint.FIXED_NZ:
        return [index[:, j, :].ravel() for j in range(n_z)]
    return [index.ravel()]


def _signs(values: np.ndarray, rows: slice, tol: float) -> np.ndarray:
    gap = values[rows, None] - values[None, :]
    return np.where(gap > tol, 1, np.where(gap < -tol, -1, 0)).astype(np.int8)


def _reversal_pairs(
    before: np.ndarray, after: np.ndarray, groups: Sequence[np.ndarray], tol: float
) -> Iterator[Tuple[int, int]]:
    """按网格顺序逐个产出 (i, j)：before_i > before_j 而 after_i < after_j"""
    for idx in groups:
        b, a = before[idx], after[idx]
        for start in range(0, idx.size, _ROW_CHUNK):
            rows = slice(start, start + _ROW_CHUNK)
            mask = (_signs(b, rows, tol) > 0) & (_signs(a, rows, tol) < 0)
            for i, j in np.argwhere(mask):
                yield int(idx[start + i]), int(idx[j])


def _count_reversals(before: np.ndarray, after: np.ndarray, groups: Sequence[np.ndarray], tol: float) -> int:
    total = 0
    for idx in groups:
        b, a = before[idx], after[idx]
        for start in range(0, idx.size, _ROW_CHUNK):
            rows = slice(start, start + _ROW_CHUNK)
            total += int(np.count_nonzero((_signs(b, rows, tol) > 0) & (_signs(a, rows, tol) < 0)))
    return total


def _make_witness(arrays, before, after, i: int, j: int) -> ReversalWitness:
    t, n_x, n_y, n_z = arrays
    # 由 Bloch 向量重建，抵消三角函数舍入带来的 ‖n‖ 偏差
    s1 = BlochState.from_vector(t[i] * np.array([n_x[i], n_y[i], n_z[i]]))
    s2 = BlochState.from_vector(t[j] * np.array([n_x[j], n_y[j], n_z[j]]))
    return ReversalWitness(s1, s2, (float(before[i]), float(before[j])), (float(after[i]), float(after[j])))


def validate_witness(
    channel: KrausChannel, measure: CoherenceMeasureId, witness: ReversalWitness, tol: float = TIE_TOL
) -> bool:
    """只用 Kraus 直接作用与度量定义重新计算，确认反转确实成立"""
    rho1, rho2 = bloch_to_matrix(witness.s1), bloch_to_matrix(witness.s2)
    before_ok = evaluate(measure, rho1) > evaluate(measure, rho2) + tol
    after_ok = evaluate(measure, apply_channel(channel, rho1)) < evaluate(measure, apply_channel(channel, rho2)) - tol
    return before_ok and after_ok


def _pairs_in(groups: Sequence[np.ndarray]) -> int:
    return sum(idx.size * (idx.size - 1) // 2 for idx in groups)


def check_preservation(
    kind: MarkovianKind,
    m: CoherenceMeasureId,
    g: GridSpec,
    constraint: Constraint,
    tol: float = TIE_TOL,
    max_witnesses: int = MAX_WITNESSES,
) -> OrderingReport:
    """
    枚举网格上满足约束的所有态对（fixed-t: t 相同；fixed-nz: n_z 相同；方位角自由），
    比较信道前后的相干序，统计所有严格反转

    报告中最多保留 max_witnesses 个见证，且每个见证都经过重新验证
    """
    constraint = Constraint(constraint)
    arrays = g.state_arrays()
    before = evaluate_batch(m, matrices_from_bloch(*arrays))
    after = direct_coherence_batch(kind, m, *arrays)
    groups = _group_indices(g, constraint)

    count = _count_reversals(before, after, groups, tol)
    channel = make_markovian(kind)
    witnesses: List[ReversalWitness] = []
    if count:
        for i, j in _reversal_pairs(before, after, groups, tol):
            if len(witnesses) >= max_witnesses:
                break
            witness = _make_witness(arrays, before, after, i, j)
            if validate_witness(channel, m, witness, tol):
                witnesses.append(witness)
            else:
                logger.warning("见证 (%d, %d) 重新计算后不成立，已丢弃", i, j)

    logger.debug(
        "%s / %s / %s: %d 对中发现 %d 个反转", kind.variant.value, m.label, constraint.value, _pairs_in(groups), count
    )
    return OrderingReport(
        channel=kind,
        measure=m,
        constraint=constraint,
        pairs_checked=_pairs_in(groups),
        reversals=witnesses,
        tie_tolerance=tol,
        reversal_count=count,
        grid=g,
    )


def find_reversal(
    kind: MarkovianKind,
    m: CoherenceMeasureId,
    search: GridSpec,
    tol: float = TIE_TOL,
    constraint: Constraint = Constraint.NONE,
) -> Optional[ReversalWitness]:
    """按网格顺序返回第一个经过验证的反转见证，没有则返回 None"""
    arrays = search.state_arrays()
    before = evaluate_batch(m, matrices_from_bloch(*arrays))
    after = direct_coherence_batch(kind, m, *arrays)
    channel = make_markovian(kind)
    for i, j in _reversal_pairs(before, after, _group_indices(search, Constraint(constraint)), tol):
        witness = _make_witness(arrays, before, after, i, j)
        if validate_witness(channel, m, witness, tol):
            return witness
    return None


def sweep_preservation(
    variant: ChannelVariant,
    measure: CoherenceMeasureId,
    grid: GridSpec,
    constraint: Constraint,
    tol: float = TIE_TOL,
    max_witnesses: int = MAX_WITNESSES,
    progress: bool = False,
) -> List[OrderingReport]:
    """对 grid.p_values 中每个 p 运行 check_preservation"""
    reports = []
    for p in tqdm(grid.p_values, desc=f"{variant.value} / {measure.label}", disable=not progress):
        reports.append(check_preservation(MarkovianKind(variant, p), measure, grid, constraint, tol, max_witnesses))
    return reports


# ---------------------------------------------------------------------------
# 单调性
# ---------------------------------------------------------------------------

def _log2(x):
    return np.log(x) / _LOG2


def analytic_slope(
    kind: MarkovianKind, m: CoherenceMeasureId, axis: Axis, t: np.ndarray, coord: np.ndarray
) -> Optional[np.ndarray]:
    """
    已知的解析导数；coord 是 axis 对应的坐标（T/NZ 轴为 n_z，NX 轴为 n_x）

    - 相位阻尼 C_r 对 t、n_z
    - 退极化 C_r 对 t、n_z
    - p = ½ 比特翻转沿 n_x：C_l1、C_r、C_α
    没有解析式时返回 None
    """
    p = kind.p
    variant = kind.variant
    if variant is ChannelVariant.PHASE_DAMPING and m.kind is MeasureKind.RELATIVE_ENTROPY and axis is not Axis.NX:
        n_z = coord
        root_a = np.sqrt(1.0 + (p ** 2 - 1.0) * (1.0 - n_z ** 2))
        radius = t * root_a
        outer = _log2((1.0 + radius) / (1.0 - radius))
        diagonal = _log2((1.0 - t * n_z) / (1.0 + t * n_z))
        if axis is Axis.T:
            return n_z / 2.0 * diagonal + root_a / 2.0 * outer
        safe = np.where(root_a > 0.0, root_a, 1.0)
        return t / 2.0 * diagonal - np.where(root_a > 0.0, (p ** 2 - 1.0) * n_z * t / (2.0 * safe) * outer, 0.0)

    if variant is ChannelVariant.DEPOLARIZING and m.kind is MeasureKind.RELATIVE_ENTROPY and axis is not Axis.NX:
        n_z = coord
        x = t * n_z * (1.0 - p)
        if axis is Axis.NZ:
            return t * (1.0 - p) / 2.0 * _log2((1.0 - x) / (1.0 + x))
        y = t * (1.0 - p)
        return (1.0 - p) * n_z / 2.0 * _log2((1.0 - x) / (1.0 + x)) + (1.0 - p) / 2.0 * _log2((1.0 + y) / (1.0 - y))

    if variant is ChannelVariant.BIT_FLIP and p == 0.5 and axis is Axis.NX:
        n_x = coord
        if m.kind is MeasureKind.L1:
            return t * np.sign(n_x)
        if m.kind is MeasureKind.RELATIVE_ENTROPY:
            return t / 2.0 * _log2((1.0 + t * n_x) / (1.0 - t * n_x))
        if m.kind is MeasureKind.TSALLIS:
            alpha = m.alpha
            x_plus, x_minus = (1.0 + t * n_x) / 2.0, (1.0 - t * n_x) / 2.0
            s = 0.5 * x_plus ** alpha + 0.5 * x_minus ** alpha
            r = 2.0 * s ** (1.0 / alpha)
            return (
                alpha * t / (2.0 * (alpha - 1.0))
                * r ** (alpha - 1.0)
                * s ** (1.0 / alpha - 1.0)
                * (x_plus ** (alpha - 1.0) - x_minus ** (alpha - 1.0))
            )
    return None


def _axis_points(axis: Axis, g: GridSpec):
    """返回 (t, coord, 由坐标生成 (n_x,n_y,n_z) 的函数, 坐标下界, 上界)"""
    if axis is Axis.NX:
        t, n_x = np.meshgrid(np.asarray(g.t_values), np.asarray(g.n_x_values), indexing="ij")

        def direction(coord):
            return coord, np.sqrt(np.clip(1.0 - coord ** 2, 0.0, None)), np.zeros_like(coord)

        return t.ravel(), n_x.ravel(), direction, -1.0, 1.0

    azimuth = g.azimuth_values[0]
    t, n_z = np.meshgrid(np.asarray(g.t_values), np.asarray(g.n_z_values), indexing="ij")

    def direction(coord):
        transverse = np.sqrt(np.clip(1.0 - coord ** 2, 0.0, None))
        return transverse * math.cos(azimuth), transverse * math.sin(azimuth), coord

    # 信道前的度量关于 n_z 是偶函数，沿 n_z 的单调性只在 n_z ≥ 0 一侧讨论
    low = 0.0 if axis is Axis.NZ else -1.0
    return t.ravel(), n_z.ravel(), direction, low, 1.0


def monotonicity_scan(
    kind: MarkovianKind,
    m: CoherenceMeasureId,
    p: Optional[float] = None,
    axis: Axis = Axis.T,
    g: Optional[GridSpec] = None,
    step: float = FD_STEP,
    direction: Optional[str] = None,
    tol: float = SLOPE_TOL,
) -> MonotonicityReport:
    """
    沿 axis 做中心差分，检查信道后相干度的单调方向，并在有解析导数处比对

    参数:
        kind: 信道（p 给出时覆盖 kind.p）
        m: 相干度
        axis: T 使用 (t, n_z) 网格与第一个方位角；NZ 同一网格中 n_z ≥ 0 的部分；NX 使用 (t, n_x) 网格，n_z = 0
        step: 差分步长
        direction: "increasing" 或 "decreasing"，默认 T、NX 递增，NZ 递减
        tol: 斜率容差
    """
    axis = Axis(axis)
    if p is not None:
        kind = MarkovianKind(kind.variant, p)
    g = g or GridSpec.default()
    if step <= 0.0:
        raise DomainError("差分步长必须为正")
    direction = direction or ("decreasing" if axis is Axis.NZ else "increasing")
    if direction not in ("increasing", "decreasing"):
        raise DomainError(f"direction 只能是 increasing 或 decreasing，收到 {direction}")
    sign = 1.0 if direction == "increasing" else -1.0

    t, coord, to_direction, low, high = _axis_points(axis, g)
    if axis is Axis.T:
        interior = (t - step >= 0.0) & (t + step <= 1.0)
    else:
        interior = (coord - step >= low) & (coord + step <= high)
    t, coord = t[interior], coord[interior]

    def value(t_values, coords):
        n_x, n_y, n_z = to_direction(coords)
        return direct_coherence_batch(kind, m, t_values, n_x, n_y, n_z)

    if axis is Axis.T:
        slope = (value(t + step, coord) - value(t - step, coord)) / (2.0 * step)
    else:
        slope = (value(t, coord + step) - value(t, coord - step)) / (2.0 * step)
    signed = sign * slope
    coord_name = "n_x" if axis is Axis.NX else "n_z"

    violations = [
        {"t": float(ti), coord_name: float(ci), "slope": float(si)}
        for ti, ci, si, ok in zip(t, coord, slope, signed >= -tol)
        if not ok
    ]
    report = MonotonicityReport(
        channel=kind,
        measure=m,
        p=kind.p,
        axis=axis,
        direction=direction,
        step=step,
        tolerance=tol,
        points_checked=int(t.size),
        min_signed_slope=float(np.min(signed)) if signed.size else math.inf,
        violations=violations,
    )

    exact = analytic_slope(kind, m, axis, t, coord)
    if exact is not None and t.size:
        error = np.abs(slope - exact)
        allowed = np.maximum(1e-6, 1e-4 * np.abs(exact))
        report.analytic_checked = int(t.size)
        report.max_analytic_error = float(np.max(error))
        report.analytic_mismatches = [
            {"t": float(ti), coord_name: float(ci), "finite_difference": float(fd), "analytic": float(ex)}
            for ti, ci, fd, ex, bad in zip(t, coord, slope, exact, error > allowed)
            if bad
        ]
    logger.debug(
        "%s / %s / 沿 %s: 最小带号斜率 %.3e, %d 个违例",
        kind.variant.value,
        m.label,
        axis.value,
        report.min_signed_slope,
        len(violations),
    )
    return report


# ---------------------------------------------------------------------------
# 图面数据
# ---------------------------------------------------------------------------

def post_channel_coherence_batch(kind: MarkovianKind, m: CoherenceMeasureId, t, n_x, n_y, n_z) -> np.ndarray:
    """有闭式时用闭式，几何相干度走直接作用"""
    if m.kind is MeasureKind.GEOMETRIC:
        return direct_coherence_batch(kind, m, t, n_x, n_y, n_z)
    values, _ = closed_form_coherence_batch(kind, m, t, n_x, n_y, n_z)
    return values


def figure_surface(
    kind: MarkovianKind,
    m: CoherenceMeasureId,
    p: Optional[float] = None,
    g: Optional[GridSpec] = None,
    azimuth: Optional[float] = None,
) -> pd.DataFrame:
    """
    (t, n_z) 网格上信道后相干度的表，t 外层、n_z 内层

    azimuth 默认 0（n_y = 0）
    """
    if p is not None:
        kind = MarkovianKind(kind.variant, p)
    g = g or GridSpec.default()
    azimuth = 0.0 if azimuth is None else float(azimuth)
    t, n_z = np.meshgrid(np.asarray(g.t_values), np.asarray(g.n_z_values), indexing="ij")
    t, n_z = t.ravel(), n_z.ravel()
    transverse = np.sqrt(np.clip(1.0 - n_z ** 2, 0.0, None))
    values = post_channel_coherence_batch(
        kind, m, t, transverse * math.cos(azimuth), transverse * math.sin(azimuth), n_z
    )
    return pd.DataFrame({"t": t, "n_z": n_z, "value": values})


def surface_monotonicity(
    table: pd.DataFrame, along: str, direction: str = "increasing", tol: float = SLOPE_TOL
) -> pd.DataFrame:
    """
    检查表中沿某一列的相邻点是否单调

    其余列（除 along 与 value 外）作为分组键；返回违例的相邻点对
    """
    if along not in table.columns:
        raise DomainError(f"表中没有列 {along}")
    sign = 1.0 if direction == "increasing" else -1.0
    keys = [c for c in table.columns if c not in (along, "value")]
    rows = []
    grouped = table.groupby(keys, dropna=False, sort=False) if keys else [((), table)]
    for key, part in grouped:
        part = part.sort_values(along)
        coords = part[along].to_numpy()
        values = part["value"].to_numpy()
        delta = np.diff(values) * sign
        for k in np.flatnonzero(delta < -tol):
            row = dict(zip(keys, key if isinstance(key, tuple) else (key,)))
            row.update({f"{along}_from": coords[k], f"{along}_to": coords[k + 1], "delta": values[k + 1] - values[k]})
            rows.append(row)
    return pd.DataFrame(rows, columns=keys + [f"{along}_from", f"{along}_to", "delta"])


# ---------------------------------------------------------------------------
# NC 信道反转搜索
# ---------------------------------------------------------------------------

NC_ANGLES = tuple(k * math.pi / 8.0 for k in range(5))
NC_ETA_VALUES = (0.0,)


def nc_state_grid() -> GridSpec:
    return GridSpec(
        t_values=(0.3, 0.6, 0.9),
        n_z_values=(0.0, 0.5),
        azimuth_values=tuple(k * math.pi / 8.0 for k in range(9)),
        p_values=(0.5,),
    )


def _nc_candidates(family: NCFamily, angles: Sequence[float], eta_values: Sequence[float]) -> Iterator[NCChannelParams]:
    etas = eta_values if family is NCFamily.PHI1 else (0.0,)
    for theta in angles:
        for phi in angles:
            for xi in angles:
                for eta in etas:
                    yield NCChannelParams(family, theta, phi, xi, eta)


def nc_reversal_search(
    family: NCFamily,
    angles: Sequence[float] = NC_ANGLES,
    eta_values: Sequence[float] = NC_ETA_VALUES,
    states: Optional[GridSpec] = None,
    tol: float = TIE_TOL,
) -> Optional[NCReversal]:
    """
    在非相干的 NC 信道中寻找 C_l1 相干序反转

    参数网格按 θ、φ、ξ、η 的顺序遍历，跳过非相干条件不成立的 Φ⁽¹⁾；
    找到第一个经过验证的见证即返回，网格穷尽则返回 None
    """
    family = NCFamily(family)
    states = states or nc_state_grid()
    arrays = states.state_arrays()
    inputs = matrices_from_bloch(*arrays)
    before = l1_batch(inputs)
    groups = _group_indices(states, Constraint.NONE)
    measure = CoherenceMeasureId.l1()

    checked = 0
    for params in _nc_candidates(family, angles, eta_values):
        channel = make_nc(params)
        if not is_incoherent(channel):
            continue
        checked += 1
        after = l1_batch(apply_channel_batch(channel, inputs))
        for i, j in _reversal_pairs(before, after, groups, tol):
            witness = _make_witness(arrays, before, after, i, j)
            if validate_witness(channel, measure, witness, tol):
                logger.debug("NC 搜索: 检查 %d 组参数后找到见证", checked)
                return NCReversal(params, witness)
    logger.debug("NC 搜索: %d 组非相干参数均未发现反转", checked)
    return None
