"""
单量子比特小矩阵数值核心：Bloch 参数与密度矩阵互转、闭式谱分解、
矩阵幂、熵与保真度。

约定：
- 对数一律以 2 为底（相干度单位为 bit）
- t = 0 时方向向量取 (0, 0, 1)
- 0·log0 = 0，0^α = 0；落在 [-1e-12, 0) 的本征值截断为 0

每个运算都有批量版本（输入形状 (..., 2, 2) 的数组），
标量接口只是对批量接口的一层包装，扫描时直接走批量路线。
"""

import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
from scipy.special import entr

from .errors import DomainError, InvalidMatrixError, InvalidStateError

ArrayLike = Union[float, np.ndarray]

STATE_TOL = 1e-12
EIGEN_CLAMP = 1e-12
_LN2 = math.log(2.0)

IDENTITY = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class BlochState:
    """
    Bloch 参数化的单比特态 ρ = (I + t n·σ)/2

    参数:
        t: 纯度半径，0 ≤ t ≤ 1
        n: 单位方向 (n_x, n_y, n_z)；t = 0 时统一取 (0, 0, 1)
    """

    t: float
    n: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t) or t < -STATE_TOL or t > 1.0 + STATE_TOL:
            raise InvalidStateError(f"t 必须位于 [0, 1]，收到 {self.t}")
        t = min(max(t, 0.0), 1.0)

        n = tuple(float(x) for x in self.n)
        if len(n) != 3 or not all(math.isfinite(x) for x in n):
            raise InvalidStateError(f"方向向量必须是 3 个有限实数，收到 {self.n}")
        if t == 0.0:
            n = (0.0, 0.0, 1.0)
        else:
            norm = math.sqrt(n[0] ** 2 + n[1] ** 2 + n[2] ** 2)
            if abs(norm - 1.0) > STATE_TOL:
                raise InvalidStateError(f"方向向量未归一化: ‖n‖ = {norm!r}")

        object.__setattr__(self, "t", t)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_angles(cls, t: float, n_z: float, azimuth: float = 0.0) -> "BlochState":
        """由 (t, n_z, 方位角) 构造，方位角是 (n_x, n_y) 的极角"""
        n_z = min(max(float(n_z), -1.0), 1.0)
        s = math.sqrt(max(0.0, 1.0 - n_z * n_z))
        return cls(t, (s * math.cos(azimuth), s * math.sin(azimuth), n_z))

    @classmethod
    def from_vector(cls, k) -> "BlochState":
        """由 Bloch 向量 k = t·n 构造"""
        k = np.asarray(k, dtype=float)
        t = float(np.linalg.norm(k))
        if t < 1e-15:
            return cls(0.0)
        return cls(t, tuple(k / t))

    @property
    def n_x(self) -> float:
        return self.n[0]

    @property
    def n_y(self) -> float:
        return self.n[1]

    @property
    def n_z(self) -> float:
        return self.n[2]

    @property
    def k(self) -> np.ndarray:
        return self.t * np.asarray(self.n)

    def as_dict(self) -> dict:
        return {"t": self.t, "n_x": self.n[0], "n_y": self.n[1], "n_z": self.n[2]}


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """2×2 密度矩阵（构造时校验厄米、单位迹、半正定）"""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        validate_density_array(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __getitem__(self, index):
        return self.entries[index]

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, other.entries, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """
    谱分解结果

    eigenvalues 为 (λ₊, λ₋)，λ₊ ≥ λ₋；eigenvectors 的第 0、1 列分别对应 λ₊、λ₋
    """

    eigenvalues: Tuple[float, float]
    eigenvectors: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((2, 2), dtype=np.complex128)
        for lam, vec in zip(self.eigenvalues, self.eigenvectors.T):
            out += lam * np.outer(vec, vec.conj())
        return out


def validate_density_array(arr: np.ndarray, tol: float = STATE_TOL) -> None:
    """校验 2×2 数组是否为合法密度矩阵，不合法时抛出 InvalidMatrixError"""
    if arr.shape != (2, 2):
        raise InvalidMatrixError(f"密度矩阵必须是 2×2，收到形状 {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrixError("密度矩阵含有非有限元素")
    if abs(arr[1, 0] - np.conj(arr[0, 1])) > tol:
        raise InvalidMatrixError("密度矩阵不是厄米的: ρ₁₀ ≠ conj(ρ₀₁)")
    if abs(arr[0, 0].imag) > tol or abs(arr[1, 1].imag) > tol:
        raise InvalidMatrixError("对角元含有虚部")
    trace = (arr[0, 0] + arr[1, 1]).real
    if abs(trace - 1.0) > tol:
        raise InvalidMatrixError(f"迹不为 1: {trace!r}")
    det = (arr[0, 0] * arr[1, 1] - arr[0, 1] * arr[1, 0]).real
    if det < -tol or arr[0, 0].real < -tol or arr[1, 1].real < -tol:
        raise InvalidMatrixError("密度矩阵不是半正定的")


def validate_alpha(alpha: float) -> float:
    """Tsallis 参数 α ∈ (0,1)∪(1,2]"""
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0 or alpha > 2.0 or alpha == 1.0:
        raise DomainError(f"α 必须位于 (0,1)∪(1,2]，收到 {alpha}")
    return alpha


# ---------------------------------------------------------------------------
# 批量接口
# ---------------------------------------------------------------------------

def matrices_from_bloch(t: ArrayLike, n_x: ArrayLike, n_y: ArrayLike, n_z: ArrayLike) -> np.ndarray:
    """批量 Bloch → 密度矩阵，返回形状 (..., 2, 2)"""
    t, n_x, n_y, n_z = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (t, n_x, n_y, n_z))
    )
    out = np.empty(t.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = (1.0 + t * n_z) / 2.0
    out[..., 0, 1] = t * (n_x - 1j * n_y) / 2.0
    out[..., 1, 0] = t * (n_x + 1j * n_y) / 2.0
    out[..., 1, 1] = (1.0 - t * n_z) / 2.0
    return out


def off_diagonal(mats: np.ndarray) -> np.ndarray:
    """取 ρ₀₁，对数值误差造成的非厄米部分做平均"""
    return (mats[..., 0, 1] + np.conj(mats[..., 1, 0])) / 2.0


def bloch_vectors(mats: np.ndarray) -> np.ndarray:
    """批量密度矩阵 → Bloch 向量 k，返回形状 (..., 3)"""
    b = off_diagonal(mats)
    k_z = (mats[..., 0, 0] - mats[..., 1, 1]).real
    return np.stack([2.0 * b.real, -2.0 * b.imag, k_z], axis=-1)


def _unit_directions(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """返回 (t, n)，t = 0 处方向取 (0,0,1)"""
    t = np.linalg.norm(k, axis=-1)
    safe = t > 1e-15
    n = np.where(safe[..., None], k / np.where(safe, t, 1.0)[..., None], np.array([0.0, 0.0, 1.0]))
    return t, n


def eigenvalues_batch(mats: np.ndarray) -> np.ndarray:
    """
    闭式（迹/行列式）求本征值，返回 (..., 2)，顺序为 (λ₊, λ₋)
    """
    half_trace = (mats[..., 0, 0] + mats[..., 1, 1]).real / 2.0
    half_gap = (mats[..., 0, 0] - mats[..., 1, 1]).real / 2.0
    root = np.hypot(half_gap, np.abs(off_diagonal(mats)))
    lam = np.stack([half_trace + root, half_trace - root], axis=-1)
    return np.where((lam < 0.0) & (lam >= -EIGEN_CLAMP), 0.0, lam)


def power_batch(mats: np.ndarray, alpha: float) -> np.ndarray:
    """批量 ρ^α = λ₊^α P₊ + λ₋^α P₋，P± = (I ± n·σ)/2"""
    alpha = validate_alpha(alpha)
    lam = np.maximum(eigenvalues_batch(mats), 0.0)
    powered = lam ** alpha
    _, n = _unit_directions(bloch_vectors(mats))
    mean = (powered[..., 0] + powered[..., 1]) / 2.0
    half = (powered[..., 0] - powered[..., 1]) / 2.0
    out = np.empty(mats.shape, dtype=np.complex128)
    out[..., 0, 0] = mean + half * n[..., 2]
    out[..., 1, 1] = mean - half * n[..., 2]
    out[..., 0, 1] = half * (n[..., 0] - 1j * n[..., 1])
    out[..., 1, 0] = half * (n[..., 0] + 1j * n[..., 1])
    return out


def determinants(mats: np.ndarray) -> np.ndarray:
    return (mats[..., 0, 0] * mats[..., 1, 1] - mats[..., 0, 1] * mats[..., 1, 0]).real


def fidelity_batch(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """单比特闭式保真度 F = Tr(ρσ) + 2√(det ρ · det σ)"""
    overlap = np.einsum("...ij,...ji->...", rho, sigma).real
    det_product = np.maximum(determinants(rho), 0.0) * np.maximum(determinants(sigma), 0.0)
    return np.clip(overlap + 2.0 * np.sqrt(det_product), 0.0, 1.0)


def random_bloch_arrays(rng: np.random.Generator, size: int) -> Tuple[np.ndarray, ...]:
    """在 Bloch 球内均匀采样，返回 (t, n_x, n_y, n_z)"""
    direction = rng.normal(size=(size, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    t = rng.random(size) ** (1.0 / 3.0)
    return t, direction[:, 0], direction[:, 1], direction[:, 2]


# ---------------------------------------------------------------------------
# 标量接口
# ---------------------------------------------------------------------------

def bloch_to_matrix(s: BlochState) -> DensityMatrix:
    """ρ = (I + t n·σ)/2"""
    return DensityMatrix(matrices_from_bloch(s.t, *s.n))


def matrix_to_bloch(rho: DensityMatrix) -> BlochState:
    """密度矩阵 → Bloch 参数；k_x = 2Re ρ₀₁, k_y = −2Im ρ₀₁, k_z = ρ₀₀ − ρ₁₁"""
    k = bloch_vectors(rho.entries)
    t = float(np.linalg.norm(k))
    if t < 1e-15:
        return BlochState(0.0)
    # 半正定容差内的纯态可能略超出单位球
    return BlochState(min(t, 1.0), tuple(k / t))


def eigendecompose(rho: DensityMatrix) -> SpectralDecomposition:
    """闭式谱分解，本征值 (1 ± t)/2"""
    lam = eigenvalues_batch(rho.entries)
    _, n = _unit_directions(bloch_vectors(rho.entries))
    n_x, n_y, n_z = (float(x) for x in n)

    # 在 n_z 较大的一侧取分母，避免 1 + n_z → 0 时失精
    if n_z >= 0.0:
        scale = math.sqrt(2.0 * (1.0 + n_z))
        v_plus = np.array([1.0 + n_z, n_x + 1j * n_y]) / scale
        v_minus = np.array([-(n_x - 1j * n_y), 1.0 + n_z]) / scale
    else:
        scale = math.sqrt(2.0 * (1.0 - n_z))
        v_plus = np.array([n_x - 1j * n_y, 1.0 - n_z]) / scale
        v_minus = np.array([1.0 - n_z, -(n_x + 1j * n_y)]) / scale

    return SpectralDecomposition(
        eigenvalues=(float(lam[0]), float(lam[1])),
        eigenvectors=np.column_stack([v_plus, v_minus]).astype(np.complex128),
    )


def matrix_power(rho: DensityMatrix, alpha: float) -> np.ndarray:
    """ρ^α，α ∈ (0,1)∪(1,2]，约定 0^α = 0"""
    return power_batch(rho.entries, alpha)


def binary_entropy(x: ArrayLike) -> ArrayLike:
    """
    二元熵 h(x) = −x log x − (1−x) log(1−x)，以 2 为底

    参数:
        x: [0,1] 内的实数或数组，超出 1e-12 以内的部分被截断

    返回:
        与输入同形的熵值
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -STATE_TOL) or np.any(arr > 1.0 + STATE_TOL) or np.any(np.isnan(arr)):
        raise DomainError(f"二元熵自变量必须位于 [0, 1]，收到 {x}")
    arr = np.clip(arr, 0.0, 1.0)
    h = (entr(arr) + entr(1.0 - arr)) / _LN2
    return float(h) if h.ndim == 0 else h


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(ρ) = −Tr ρ log ρ（以 2 为底）"""
    lam = np.maximum(eigenvalues_batch(rho.entries), 0.0)
    return float(np.sum(entr(lam)) / _LN2)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """F(ρ,σ) = (Tr√(√σ ρ √σ))²，单比特下用闭式计算"""
    return float(fidelity_batch(rho.entries, sigma.entries))
