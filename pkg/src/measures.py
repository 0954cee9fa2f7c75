"""
四种单比特相干度：l1 范数、相对熵、几何相干度（保真度优化）、Tsallis 相对 α 熵。

所有度量都以批量形式实现（输入 (..., 2, 2) 密度矩阵数组），
标量函数 c_l1 / c_r / c_g / c_alpha 只是包装。
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import entr

from .errors import DomainError, OptimizerFailure
from .qubit_core import (
    DensityMatrix,
    determinants,
    eigenvalues_batch,
    off_diagonal,
    power_batch,
    validate_alpha,
)

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# 几何相干度内层优化参数
GEOMETRIC_GRID_POINTS = 1001
GEOMETRIC_WIDTH = 1e-10
GEOMETRIC_MAX_ITER = 200
GEOMETRIC_CHUNK = 4096


class MeasureKind(str, Enum):
    L1 = "l1"
    RELATIVE_ENTROPY = "relative-entropy"
    GEOMETRIC = "geometric"
    TSALLIS = "tsallis"


_ALIASES = {
    "l1": MeasureKind.L1,
    "c_l1": MeasureKind.L1,
    "relative-entropy": MeasureKind.RELATIVE_ENTROPY,
    "relative_entropy": MeasureKind.RELATIVE_ENTROPY,
    "r": MeasureKind.RELATIVE_ENTROPY,
    "c_r": MeasureKind.RELATIVE_ENTROPY,
    "geometric": MeasureKind.GEOMETRIC,
    "g": MeasureKind.GEOMETRIC,
    "c_g": MeasureKind.GEOMETRIC,
    "tsallis": MeasureKind.TSALLIS,
    "alpha": MeasureKind.TSALLIS,
    "c_alpha": MeasureKind.TSALLIS,
}


@dataclass(frozen=True)
class CoherenceMeasureId:
    """
    相干度标识

    参数:
        kind: 度量种类
        alpha: 仅 Tsallis 使用，α ∈ (0,1)∪(1,2]
    """

    kind: MeasureKind
    alpha: Optional[float] = None

    def __post_init__(self):
        kind = MeasureKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MeasureKind.TSALLIS:
            if self.alpha is None:
                raise DomainError("Tsallis 相干度需要指定 α")
            object.__setattr__(self, "alpha", validate_alpha(self.alpha))
        else:
            object.__setattr__(self, "alpha", None)

    @classmethod
    def l1(cls) -> "CoherenceMeasureId":
        return cls(MeasureKind.L1)

    @classmethod
    def relative_entropy(cls) -> "CoherenceMeasureId":
        return cls(MeasureKind.RELATIVE_ENTROPY)

    @classmethod
    def geometric(cls) -> "CoherenceMeasureId":
        return cls(MeasureKind.GEOMETRIC)

    @classmethod
    def tsallis(cls, alpha: float) -> "CoherenceMeasureId":
        return cls(MeasureKind.TSALLIS, alpha)

    @classmethod
    def parse(cls, text: str, alpha: Optional[float] = None) -> "CoherenceMeasureId":
        """
        解析命令行写法：l1 / relative-entropy / geometric / tsallis，
        也接受 tsallis:0.75 这种带 α 的写法
        """
        name, _, inline_alpha = text.strip().lower().partition(":")
        if name not in _ALIASES:
            raise DomainError(f"未知的相干度: {text}（可选 l1, relative-entropy, geometric, tsallis）")
        kind = _ALIASES[name]
        if inline_alpha:
            try:
                alpha = float(inline_alpha)
            except ValueError as e:
                raise DomainError(f"无法解析 α: {inline_alpha}") from e
        return cls(kind, alpha if kind is MeasureKind.TSALLIS else None)

    @property
    def label(self) -> str:
        if self.kind is MeasureKind.TSALLIS:
            return f"tsallis(alpha={self.alpha:g})"
        return self.kind.value

    def to_dict(self) -> dict:
        return {"measure": self.kind.value, "alpha": self.alpha}


def _entropy_bits(probs: np.ndarray) -> np.ndarray:
    """最后一维为概率分布，返回以 2 为底的 Shannon 熵"""
    return np.sum(entr(np.clip(probs, 0.0, 1.0)), axis=-1) / _LN2


# ---------------------------------------------------------------------------
# 批量接口
# ---------------------------------------------------------------------------

def l1_batch(mats: np.ndarray) -> np.ndarray:
    """C_l1 = Σ_{i≠j}|ρ_ij| = 2|ρ₀₁|"""
    return 2.0 * np.abs(off_diagonal(mats))


def relative_entropy_batch(mats: np.ndarray) -> np.ndarray:
    """C_r = S(ρ_diag) − S(ρ)"""
    diagonal = np.stack([mats[..., 0, 0].real, mats[..., 1, 1].real], axis=-1)
    spectrum = eigenvalues_batch(mats)
    return np.maximum(_entropy_bits(diagonal) - _entropy_bits(spectrum), 0.0)


def tsallis_batch(mats: np.ndarray, alpha: float) -> np.ndarray:
    """
    C_α = (r^α − 1)/(α − 1)，r = Σ_i ⟨i|ρ^α|i⟩^{1/α}
    """
    alpha = validate_alpha(alpha)
    powered = power_batch(mats, alpha)
    d0 = np.maximum(powered[..., 0, 0].real, 0.0)
    d1 = np.maximum(powered[..., 1, 1].real, 0.0)
    r = d0 ** (1.0 / alpha) + d1 ** (1.0 / alpha)
    return np.maximum((r ** alpha - 1.0) / (alpha - 1.0), 0.0)


def _incoherent_fidelity(diag0: np.ndarray, diag1: np.ndarray, det: np.ndarray, q: np.ndarray) -> np.ndarray:
    """F(ρ, diag(q, 1−q))，q 的最后一维可以比 ρ 多"""
    return diag0 * q + diag1 * (1.0 - q) + 2.0 * np.sqrt(det * np.clip(q * (1.0 - q), 0.0, None))


def _max_incoherent_fidelity(diag0: np.ndarray, diag1: np.ndarray, det: np.ndarray) -> np.ndarray:
    """一维数组输入：粗网格定位最优区间，再做黄金分割细化"""
    q_grid = np.linspace(0.0, 1.0, GEOMETRIC_GRID_POINTS)
    coarse = _incoherent_fidelity(diag0[:, None], diag1[:, None], det[:, None], q_grid[None, :])
    best = np.argmax(coarse, axis=1)
    coarse_max = coarse[np.arange(best.size), best]

    low = q_grid[np.maximum(best - 1, 0)]
    high = q_grid[np.minimum(best + 1, GEOMETRIC_GRID_POINTS - 1)]

    def f(q):
        return _incoherent_fidelity(diag0, diag1, det, q)

    for _ in range(GEOMETRIC_MAX_ITER):
        if np.all(high - low <= GEOMETRIC_WIDTH):
            break
        c = high - _INV_GOLDEN * (high - low)
        d = low + _INV_GOLDEN * (high - low)
        # f(c) ≥ f(d) 时最大值在 [low, d]，否则在 [c, high]
        keep_left = f(c) >= f(d)
        high = np.where(keep_left, d, high)
        low = np.where(keep_left, low, c)

    if np.any(high - low > GEOMETRIC_WIDTH):
        raise OptimizerFailure(
            f"几何相干度优化 {GEOMETRIC_MAX_ITER} 次迭代后区间宽度仍为 {float(np.max(high - low)):.3e}"
        )

    refined = np.maximum.reduce([f(low), f(high), f((low + high) / 2.0), coarse_max])
    return np.clip(refined, 0.0, 1.0)


def geometric_batch(mats: np.ndarray) -> np.ndarray:
    """C_g = 1 − max_{σ 非相干} F(ρ, σ)，σ = diag(q, 1−q)"""
    mats = np.asarray(mats, dtype=np.complex128)
    shape = mats.shape[:-2]
    flat = mats.reshape((-1, 2, 2))
    diag0 = np.clip(flat[:, 0, 0].real, 0.0, 1.0)
    diag1 = np.clip(flat[:, 1, 1].real, 0.0, 1.0)
    det = np.maximum(determinants(flat), 0.0)

    best = np.empty(flat.shape[0])
    for start in range(0, flat.shape[0], GEOMETRIC_CHUNK):
        stop = start + GEOMETRIC_CHUNK
        best[start:stop] = _max_incoherent_fidelity(diag0[start:stop], diag1[start:stop], det[start:stop])
    logger.debug("几何相干度: 完成 %d 个态的内层优化", flat.shape[0])
    return np.clip(1.0 - best, 0.0, 0.5).reshape(shape)


def geometric_qubit_formula(mats: np.ndarray) -> np.ndarray:
    """单比特几何相干度闭式 (1 − √(1 − C_l1²))/2，只作交叉校验用"""
    l1 = np.clip(l1_batch(mats), 0.0, 1.0)
    return (1.0 - np.sqrt(1.0 - l1 ** 2)) / 2.0


def evaluate_batch(measure: CoherenceMeasureId, mats: np.ndarray) -> np.ndarray:
    """按度量标识分派到对应的批量实现"""
    if measure.kind is MeasureKind.L1:
        return l1_batch(mats)
    if measure.kind is MeasureKind.RELATIVE_ENTROPY:
        return relative_entropy_batch(mats)
    if measure.kind is MeasureKind.GEOMETRIC:
        return geometric_batch(mats)
    return tsallis_batch(mats, measure.alpha)


# ---------------------------------------------------------------------------
# 标量接口
# ---------------------------------------------------------------------------

def c_l1(rho: DensityMatrix) -> float:
    return float(l1_batch(rho.entries))


def c_r(rho: DensityMatrix) -> float:
    return float(relative_entropy_batch(rho.entries))


def c_g(rho: DensityMatrix) -> float:
    return float(geometric_batch(rho.entries))


def c_alpha(rho: DensityMatrix, alpha: float) -> float:
    return float(tsallis_batch(rho.entries, alpha))


def evaluate(measure: CoherenceMeasureId, rho: DensityMatrix) -> float:
    return float(evaluate_batch(measure, rho.entries))
