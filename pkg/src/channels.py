"""
量子信道：四种 Markov 信道与两族 NC 信道的 Kraus 构造、作用，
以及 Markov 信道作用后的闭式密度矩阵与闭式相干度（附带中间量）。

闭式与直接 Kraus 作用的结果互为校验：verify_closed_forms 在随机态上
逐项比较二者并给出最大偏差。
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, InvalidChannelError, UnsupportedMeasureError
from .measures import CoherenceMeasureId, MeasureKind, evaluate_batch
from .qubit_core import (
    IDENTITY,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochState,
    DensityMatrix,
    binary_entropy,
    matrices_from_bloch,
    random_bloch_arrays,
    validate_alpha,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

COMPLETENESS_TOL = 1e-12
INCOHERENCE_TOL = 1e-12
OUTPUT_TOL = 1e-12
COHERENCE_TOL = 1e-10

DEFAULT_ORACLE_P = tuple(round(0.1 * i, 1) for i in range(11))
DEFAULT_ORACLE_ALPHAS = (0.25, 0.75, 1.25, 1.75, 2.0)

_KET0_BRA0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_KET1_BRA1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)
_KET0_BRA1 = np.array([[0, 1], [0, 0]], dtype=np.complex128)


class ChannelVariant(str, Enum):
    AMPLITUDE_DAMPING = "amplitude-damping"
    PHASE_DAMPING = "phase-damping"
    DEPOLARIZING = "depolarizing"
    BIT_FLIP = "bit-flip"

    @classmethod
    def parse(cls, text: str) -> "ChannelVariant":
        key = text.strip().lower().replace("_", "-")
        aliases = {"ad": cls.AMPLITUDE_DAMPING, "pd": cls.PHASE_DAMPING, "dep": cls.DEPOLARIZING, "bf": cls.BIT_FLIP}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError as e:
            choices = ", ".join(v.value for v in cls)
            raise DomainError(f"未知的信道: {text}（可选 {choices}）") from e


@dataclass(frozen=True)
class MarkovianKind:
    """Markov 信道种类与参数 p ∈ [0,1]"""

    variant: ChannelVariant
    p: float

    def __post_init__(self):
        variant = self.variant if isinstance(self.variant, ChannelVariant) else ChannelVariant.parse(self.variant)
        p = float(self.p)
        if not math.isfinite(p) or p < 0.0 or p > 1.0:
            raise DomainError(f"信道参数 p 必须位于 [0, 1]，收到 {self.p}")
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "p", p)

    def to_dict(self) -> dict:
        return {"channel": self.variant.value, "p": self.p}


class NCFamily(str, Enum):
    PHI1 = "phi1"
    PHI2 = "phi2"


@dataclass(frozen=True)
class NCChannelParams:
    """NC 信道参数（弧度），Φ⁽²⁾ 不使用 η"""

    family: NCFamily
    theta: float
    phi: float
    xi: float
    eta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", NCFamily(self.family))
        for name in ("theta", "phi", "xi", "eta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"NC 信道参数 {name} 必须是有限实数")
            object.__setattr__(self, name, value)

    @property
    def incoherence_factor(self) -> float:
        """sinθ cosθ sinφ cosφ，Φ⁽¹⁾ 为非相干信道当且仅当它为 0"""
        return math.sin(self.theta) * math.cos(self.theta) * math.sin(self.phi) * math.cos(self.phi)

    def to_dict(self) -> dict:
        data = {"family": self.family.value, "theta": self.theta, "phi": self.phi, "xi": self.xi}
        if self.family is NCFamily.PHI1:
            data["eta"] = self.eta
        return data


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Kraus 表示 Λ(ρ) = Σ K ρ K†"""

    operators: Tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        ops = []
        for op in self.operators:
            arr = np.array(op, dtype=np.complex128)
            if arr.shape != (2, 2):
                raise InvalidChannelError(f"Kraus 算子必须是 2×2，收到形状 {arr.shape}")
            arr.setflags(write=False)
            ops.append(arr)
        if not ops:
            raise InvalidChannelError("Kraus 算子列表为空")
        object.__setattr__(self, "operators", tuple(ops))

    @property
    def stacked(self) -> np.ndarray:
        return np.stack(self.operators)

    def completeness_error(self) -> float:
        """max |Σ K†K − I|"""
        ops = self.stacked
        total = np.einsum("kji,kjl->il", ops.conj(), ops)
        return float(np.max(np.abs(total - IDENTITY)))

    def check_completeness(self, tol: float = COMPLETENESS_TOL) -> None:
        error = self.completeness_error()
        if error > tol:
            raise InvalidChannelError(f"信道 {self.label or '<unnamed>'} 不满足完备性: 偏差 {error:.3e}")


# ---------------------------------------------------------------------------
# 闭式中间量
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeDampingAux:
    """振幅阻尼输出态的 Bloch 参数 t′, n′"""

    t_out: ArrayLike
    n_x_out: ArrayLike
    n_y_out: ArrayLike
    n_z_out: ArrayLike


@dataclass(frozen=True)
class PhaseDampingAux:
    """
    A = 1 + (p²−1)(1−n_z²)，B = (1 + t√A)/2，
    C = (√A + n_z)²，D = p²(1−n_z²)
    """

    A: ArrayLike
    B: ArrayLike
    C: ArrayLike
    D: ArrayLike


@dataclass(frozen=True)
class DepolarizingAux:
    """E = (1 + t(1−p))/2，F = (1 + n_z)/2"""

    E: ArrayLike
    F: ArrayLike


@dataclass(frozen=True)
class BitFlipAux:
    """
    G = 1 + 4(p²−p)(1−n_x²)，H = (1 + t√G)/2，
    M = n_x² + (2p−1)² n_y²，N = (√G − (2p−1) n_z)²
    """

    G: ArrayLike
    H: ArrayLike
    M: ArrayLike
    N: ArrayLike


@dataclass(frozen=True)
class NCAux:
    """
    NC 信道输出 [[A, B], [B*, 1−A]]（Φ⁽¹⁾）或 [[C, D], [D*, 1−C]]（Φ⁽²⁾）

    a = ρ₀₀ = (1 + t n_z)/2，b = ρ₀₁ = t(n_x − i n_y)/2 = |b|e^{iβ}
    """

    family: NCFamily
    a: float
    b: complex
    beta: float
    A: Optional[float] = None
    B: Optional[complex] = None
    C: Optional[float] = None
    D: Optional[complex] = None


ChannelAux = Union[AmplitudeDampingAux, PhaseDampingAux, DepolarizingAux, BitFlipAux, NCAux]


@dataclass(frozen=True)
class _Spectrum:
    """闭式相干度共用的量：l1、λ₊、ρ′₀₀ 与谱投影权重 (1+n_z′)/2"""

    l1: np.ndarray
    lam_plus: np.ndarray
    diag_plus: np.ndarray
    weight: np.ndarray


# ---------------------------------------------------------------------------
# 信道构造与作用
# ---------------------------------------------------------------------------

def make_markovian(kind: MarkovianKind) -> KrausChannel:
    """
    构造 Markov 信道的 Kraus 表示

    - 振幅阻尼: K₀ = |0⟩⟨0| + √(1−p)|1⟩⟨1|, K₁ = √p|0⟩⟨1|
    - 相位阻尼: K₀ = √p I, K₁ = √(1−p)|0⟩⟨0|, K₂ = √(1−p)|1⟩⟨1|
    - 退极化: √(1−3p/4) I, √(p/4) σ_x, √(p/4) σ_y, √(p/4) σ_z
    - 比特翻转: K₀ = √p I, K₁ = √(1−p) σ_x
    """
    p = kind.p
    variant = kind.variant
    if variant is ChannelVariant.AMPLITUDE_DAMPING:
        ops = (_KET0_BRA0 + math.sqrt(1.0 - p) * _KET1_BRA1, math.sqrt(p) * _KET0_BRA1)
    elif variant is ChannelVariant.PHASE_DAMPING:
        ops = (math.sqrt(p) * IDENTITY, math.sqrt(1.0 - p) * _KET0_BRA0, math.sqrt(1.0 - p) * _KET1_BRA1)
    elif variant is ChannelVariant.DEPOLARIZING:
        weight = math.sqrt(p / 4.0)
        ops = (math.sqrt(1.0 - 3.0 * p / 4.0) * IDENTITY, weight * PAULI_X, weight * PAULI_Y, weight * PAULI_Z)
    else:
        ops = (math.sqrt(p) * IDENTITY, math.sqrt(1.0 - p) * PAULI_X)
    return KrausChannel(ops, label=f"{variant.value}(p={p:g})")


def make_nc(params: NCChannelParams) -> KrausChannel:
    """构造 NC 信道 Φ⁽¹⁾ 或 Φ⁽²⁾ 的两个 Kraus 算子"""
    ct, st = math.cos(params.theta), math.sin(params.theta)
    cp, sp = math.cos(params.phi), math.sin(params.phi)
    e_xi = complex(math.cos(params.xi), math.sin(params.xi))
    e_eta = complex(math.cos(params.eta), math.sin(params.eta))

    if params.family is NCFamily.PHI1:
        e1 = np.array([[e_eta * ct * cp, 0.0], [-st * sp, e_xi * cp]], dtype=np.complex128)
        e2 = np.array([[st * cp, e_xi * sp], [e_eta.conjugate() * ct * sp, 0.0]], dtype=np.complex128)
    else:
        e1 = np.array([[ct, 0.0], [0.0, e_xi * cp]], dtype=np.complex128)
        e2 = np.array([[0.0, sp], [e_xi * st, 0.0]], dtype=np.complex128)

    label = f"{params.family.value}(θ={params.theta:.4g}, φ={params.phi:.4g}, ξ={params.xi:.4g})"
    return KrausChannel((e1, e2), label=label)


def apply_channel_batch(channel: KrausChannel, mats: np.ndarray) -> np.ndarray:
    """Σ_k K_k ρ K_k†，mats 形状 (..., 2, 2)"""
    ops = channel.stacked
    return np.einsum("kij,...jl,kml->...im", ops, mats, ops.conj())


def apply_channel(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Λ(ρ) = Σ K ρ K†，完备性不满足时抛出 InvalidChannelError"""
    channel.check_completeness()
    return DensityMatrix(apply_channel_batch(channel, rho.entries))


def is_incoherent(channel: KrausChannel, tol: float = INCOHERENCE_TOL) -> bool:
    """
    每个 K 把 |i⟩⟨i| 映到对角矩阵：K|i⟩⟨i|K† 的非对角元为 K₀ᵢ·conj(K₁ᵢ)，
    即每个 Kraus 算子的每一列至多一个非零元
    """
    ops = channel.stacked
    cross = np.abs(ops[:, 0, :] * np.conj(ops[:, 1, :]))
    return bool(np.all(cross <= tol))


def direct_coherence_batch(
    kind: MarkovianKind, measure: CoherenceMeasureId, t: ArrayLike, n_x: ArrayLike, n_y: ArrayLike, n_z: ArrayLike
) -> np.ndarray:
    """直接路线：Kraus 作用后再求相干度"""
    outputs = apply_channel_batch(make_markovian(kind), matrices_from_bloch(t, n_x, n_y, n_z))
    return evaluate_batch(measure, outputs)


# ---------------------------------------------------------------------------
# 闭式输出
# ---------------------------------------------------------------------------

def closed_form_output_batch(kind: MarkovianKind, t: ArrayLike, n_x: ArrayLike, n_y: ArrayLike, n_z: ArrayLike) -> np.ndarray:
    """信道作用后密度矩阵的闭式，形状 (..., 2, 2)"""
    t, n_x, n_y, n_z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (t, n_x, n_y, n_z)))
    p = kind.p
    variant = kind.variant
    coherence = t * (n_x - 1j * n_y) / 2.0
    upper = (1.0 + t * n_z) / 2.0
    lower = (1.0 - t * n_z) / 2.0

    if variant is ChannelVariant.AMPLITUDE_DAMPING:
        rho00 = upper + p * lower
        rho01 = math.sqrt(1.0 - p) * coherence
    elif variant is ChannelVariant.PHASE_DAMPING:
        rho00 = upper
        rho01 = p * coherence
    elif variant is ChannelVariant.DEPOLARIZING:
        rho00 = p / 2.0 + (1.0 - p) * upper
        rho01 = (1.0 - p) * coherence
    else:
        s = 2.0 * p - 1.0
        rho00 = (1.0 + s * t * n_z) / 2.0
        rho01 = (t * n_x - 1j * t * n_y * s) / 2.0

    out = np.empty(t.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = rho00
    out[..., 0, 1] = rho01
    out[..., 1, 0] = np.conj(rho01)
    out[..., 1, 1] = 1.0 - rho00
    return out


def closed_form_output(kind: MarkovianKind, s: BlochState) -> DensityMatrix:
    return DensityMatrix(closed_form_output_batch(kind, s.t, *s.n))


# ---------------------------------------------------------------------------
# 闭式相干度
# ---------------------------------------------------------------------------

def _closed_form_spectrum(kind: MarkovianKind, t, n_x, n_y, n_z) -> Tuple[ChannelAux, _Spectrum]:
    p = kind.p
    variant = kind.variant
    transverse = np.sqrt(np.clip(1.0 - n_z ** 2, 0.0, None))

    if variant is ChannelVariant.AMPLITUDE_DAMPING:
        k_z = p + (1.0 - p) * t * n_z
        t_out = np.sqrt((1.0 - p) * t ** 2 * (1.0 - n_z ** 2) + k_z ** 2)
        safe = t_out > 0.0
        denom = np.where(safe, t_out, 1.0)
        scale = math.sqrt(1.0 - p) * t
        aux = AmplitudeDampingAux(
            t_out=t_out,
            n_x_out=np.where(safe, scale * n_x / denom, 0.0),
            n_y_out=np.where(safe, scale * n_y / denom, 0.0),
            n_z_out=np.where(safe, k_z / denom, 1.0),
        )
        spectrum = _Spectrum(
            l1=math.sqrt(1.0 - p) * t * transverse,
            lam_plus=(1.0 + t_out) / 2.0,
            diag_plus=(1.0 + k_z) / 2.0,
            weight=(1.0 + np.clip(aux.n_z_out, -1.0, 1.0)) / 2.0,
        )
    elif variant is ChannelVariant.PHASE_DAMPING:
        A = 1.0 + (p ** 2 - 1.0) * (1.0 - n_z ** 2)
        root_a = np.sqrt(np.clip(A, 0.0, None))
        aux = PhaseDampingAux(
            A=A,
            B=(1.0 + t * root_a) / 2.0,
            C=(root_a + n_z) ** 2,
            D=p ** 2 * (1.0 - n_z ** 2),
        )
        # C/(C+D) = (1 + n_z/√A)/2，后者在 C+D → 0 时仍然稳定
        n_z_out = np.where(root_a > 0.0, n_z / np.where(root_a > 0.0, root_a, 1.0), 1.0)
        spectrum = _Spectrum(
            l1=p * t * transverse,
            lam_plus=aux.B,
            diag_plus=(1.0 + t * n_z) / 2.0,
            weight=(1.0 + np.clip(n_z_out, -1.0, 1.0)) / 2.0,
        )
    elif variant is ChannelVariant.DEPOLARIZING:
        aux = DepolarizingAux(E=(1.0 + t * (1.0 - p)) / 2.0, F=(1.0 + n_z) / 2.0)
        spectrum = _Spectrum(
            l1=(1.0 - p) * t * transverse,
            lam_plus=aux.E,
            diag_plus=(1.0 + (1.0 - p) * t * n_z) / 2.0,
            weight=aux.F,
        )
    else:
        s = 2.0 * p - 1.0
        G = 1.0 + 4.0 * (p ** 2 - p) * (1.0 - n_x ** 2)
        root_g = np.sqrt(np.clip(G, 0.0, None))
        M = n_x ** 2 + s ** 2 * n_y ** 2
        aux = BitFlipAux(G=G, H=(1.0 + t * root_g) / 2.0, M=M, N=(root_g - s * n_z) ** 2)
        # M/(M+N) = (1 + s n_z/√G)/2
        n_z_out = np.where(root_g > 0.0, s * n_z / np.where(root_g > 0.0, root_g, 1.0), 1.0)
        spectrum = _Spectrum(
            l1=t * np.sqrt(M),
            lam_plus=aux.H,
            diag_plus=(1.0 + s * t * n_z) / 2.0,
            weight=(1.0 + np.clip(n_z_out, -1.0, 1.0)) / 2.0,
        )
    return aux, spectrum


def tsallis_from_spectrum(lam_plus: ArrayLike, weight: ArrayLike, alpha: float) -> np.ndarray:
    """
    由 λ₊ 与权重 w = (1+n_z′)/2 计算 C_α：
    r = [λ₊^α w + λ₋^α (1−w)]^{1/α} + [λ₊^α (1−w) + λ₋^α w]^{1/α}
    """
    alpha = validate_alpha(alpha)
    lam_plus = np.clip(lam_plus, 0.0, 1.0)
    upper = lam_plus ** alpha
    lower = (1.0 - lam_plus) ** alpha
    r = (upper * weight + lower * (1.0 - weight)) ** (1.0 / alpha) + (
        upper * (1.0 - weight) + lower * weight
    ) ** (1.0 / alpha)
    return np.maximum((r ** alpha - 1.0) / (alpha - 1.0), 0.0)


def _coherence_from_spectrum(measure: CoherenceMeasureId, spectrum: _Spectrum) -> np.ndarray:
    if measure.kind is MeasureKind.L1:
        return np.asarray(spectrum.l1, dtype=float)
    if measure.kind is MeasureKind.RELATIVE_ENTROPY:
        value = binary_entropy(np.clip(spectrum.diag_plus, 0.0, 1.0)) - binary_entropy(
            np.clip(spectrum.lam_plus, 0.0, 1.0)
        )
        return np.maximum(value, 0.0)
    if measure.kind is MeasureKind.TSALLIS:
        return tsallis_from_spectrum(spectrum.lam_plus, spectrum.weight, measure.alpha)
    raise UnsupportedMeasureError("几何相干度没有信道后的闭式表达，请使用直接计算路线")


def closed_form_coherence_batch(
    kind: MarkovianKind,
    measure: CoherenceMeasureId,
    t: ArrayLike,
    n_x: ArrayLike,
    n_y: ArrayLike,
    n_z: ArrayLike,
) -> Tuple[np.ndarray, ChannelAux]:
    """
    批量闭式相干度

    返回:
        (相干度数组, 中间量)，中间量字段与输入同形
    """
    if measure.kind is MeasureKind.GEOMETRIC:
        raise UnsupportedMeasureError("几何相干度没有信道后的闭式表达，请使用直接计算路线")
    t, n_x, n_y, n_z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (t, n_x, n_y, n_z)))
    aux, spectrum = _closed_form_spectrum(kind, t, n_x, n_y, n_z)
    return _coherence_from_spectrum(measure, spectrum), aux


def _scalar_aux(aux: ChannelAux) -> ChannelAux:
    values = {name: float(value) for name, value in asdict(aux).items()}
    return type(aux)(**values)


def closed_form_coherence(kind: MarkovianKind, s: BlochState, measure: CoherenceMeasureId) -> Tuple[float, ChannelAux]:
    """
    信道作用后的闭式相干度

    参数:
        kind: Markov 信道
        s: 输入态
        measure: 相干度（几何相干度不支持）

    返回:
        (相干度, 中间量)
    """
    value, aux = closed_form_coherence_batch(kind, measure, s.t, *s.n)
    return float(value), _scalar_aux(aux)


def bit_flip_half_coherence(s: BlochState, measure: CoherenceMeasureId) -> float:
    """
    p = ½ 的比特翻转：输出 Bloch 向量为 (t n_x, 0, 0)

    C_l1 = t|n_x|，C_r = 1 − h((1+t n_x)/2)，r = 2[½x₊^α + ½x₋^α]^{1/α}，x± = (1 ± t n_x)/2
    """
    x_plus = (1.0 + s.t * s.n_x) / 2.0
    if measure.kind is MeasureKind.L1:
        return s.t * abs(s.n_x)
    if measure.kind is MeasureKind.RELATIVE_ENTROPY:
        return max(1.0 - binary_entropy(x_plus), 0.0)
    if measure.kind is MeasureKind.TSALLIS:
        alpha = measure.alpha
        r = 2.0 * (0.5 * x_plus ** alpha + 0.5 * (1.0 - x_plus) ** alpha) ** (1.0 / alpha)
        return max((r ** alpha - 1.0) / (alpha - 1.0), 0.0)
    raise UnsupportedMeasureError("几何相干度没有信道后的闭式表达，请使用直接计算路线")


# ---------------------------------------------------------------------------
# NC 信道
# ---------------------------------------------------------------------------

def nc_output_entries(params: NCChannelParams, s: BlochState) -> NCAux:
    """NC 信道输出矩阵的闭式元素"""
    a = (1.0 + s.t * s.n_z) / 2.0
    b = complex(s.t * s.n_x, -s.t * s.n_y) / 2.0
    beta = math.atan2(b.imag, b.real) if abs(b) > 0.0 else 0.0
    ct, st = math.cos(params.theta), math.sin(params.theta)
    cp, sp = math.cos(params.phi), math.sin(params.phi)
    e_xi = complex(math.cos(params.xi), math.sin(params.xi))

    if params.family is NCFamily.PHI1:
        e_eta = complex(math.cos(params.eta), math.sin(params.eta))
        A = a * cp ** 2 + 2.0 * (b.conjugate() * e_xi).real * st * sp * cp + (1.0 - a) * sp ** 2
        B = e_eta * ct * (b * e_xi.conjugate() * cp ** 2 + b.conjugate() * e_xi * sp ** 2)
        return NCAux(NCFamily.PHI1, a, b, beta, A=A, B=B)

    C = a * ct ** 2 + (1.0 - a) * sp ** 2
    D = e_xi.conjugate() * (b * ct * cp + b.conjugate() * st * sp)
    return NCAux(NCFamily.PHI2, a, b, beta, C=C, D=D)


def nc_l1_formula(params: NCChannelParams, s: BlochState) -> float:
    """
    NC 信道输出的 l1 相干度

    Φ⁽¹⁾: 2|B|；sinθ = 0 时化为 2|b|·|e^{i(β−ξ)}cos²φ + e^{i(ξ−β)}sin²φ|
    Φ⁽²⁾: 2|b|√(cos²β cos²(θ−φ) + sin²β cos²(θ+φ))
    """
    aux = nc_output_entries(params, s)
    magnitude = abs(aux.b)
    if params.family is NCFamily.PHI1:
        if abs(math.sin(params.theta)) <= INCOHERENCE_TOL:
            phase = complex(math.cos(aux.beta - params.xi), math.sin(aux.beta - params.xi))
            return 2.0 * magnitude * abs(phase * math.cos(params.phi) ** 2 + phase.conjugate() * math.sin(params.phi) ** 2)
        return 2.0 * abs(aux.B)
    radicand = (
        math.cos(aux.beta) ** 2 * math.cos(params.theta - params.phi) ** 2
        + math.sin(aux.beta) ** 2 * math.cos(params.theta + params.phi) ** 2
    )
    return 2.0 * magnitude * math.sqrt(radicand)


# ---------------------------------------------------------------------------
# 闭式与 Kraus 直接作用的交叉校验
# ---------------------------------------------------------------------------

@dataclass
class OracleReport:
    """闭式 vs 直接作用的最大偏差"""

    samples: int
    seed: int
    p_values: Tuple[float, ...]
    alphas: Tuple[float, ...]
    max_output_error: Dict[str, float] = field(default_factory=dict)
    max_coherence_error: Dict[str, Dict[str, float]] = field(default_factory=dict)
    output_tolerance: float = OUTPUT_TOL
    coherence_tolerance: float = COHERENCE_TOL

    @property
    def passed(self) -> bool:
        outputs_ok = all(err <= self.output_tolerance for err in self.max_output_error.values())
        coherence_ok = all(
            err <= self.coherence_tolerance
            for per_measure in self.max_coherence_error.values()
            for err in per_measure.values()
        )
        return outputs_ok and coherence_ok

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "p_values": list(self.p_values),
            "alphas": list(self.alphas),
            "output_tolerance": self.output_tolerance,
            "coherence_tolerance": self.coherence_tolerance,
            "max_output_error": dict(self.max_output_error),
            "max_coherence_error": {k: dict(v) for k, v in self.max_coherence_error.items()},
            "passed": self.passed,
        }


def verify_closed_forms(
    samples: int = 500,
    seed: int = 20240601,
    p_values: Sequence[float] = DEFAULT_ORACLE_P,
    alphas: Sequence[float] = DEFAULT_ORACLE_ALPHAS,
) -> OracleReport:
    """
    在随机态上比较闭式与 Kraus 直接作用（输出矩阵逐项、相干度逐个）

    参数:
        samples: 每个 (信道, p) 的随机态数目
        seed: 随机种子
        p_values: 信道参数网格
        alphas: 参与比较的 Tsallis α
    """
    rng = np.random.default_rng(seed)
    t, n_x, n_y, n_z = random_bloch_arrays(rng, samples)
    inputs = matrices_from_bloch(t, n_x, n_y, n_z)
    measures = [CoherenceMeasureId.l1(), CoherenceMeasureId.relative_entropy()]
    measures += [CoherenceMeasureId.tsallis(a) for a in alphas]

    report = OracleReport(samples=samples, seed=seed, p_values=tuple(p_values), alphas=tuple(alphas))
    for variant in ChannelVariant:
        output_error = 0.0
        coherence_error = {m.label: 0.0 for m in measures}
        for p in p_values:
            kind = MarkovianKind(variant, p)
            direct = apply_channel_batch(make_markovian(kind), inputs)
            closed = closed_form_output_batch(kind, t, n_x, n_y, n_z)
            output_error = max(output_error, float(np.max(np.abs(direct - closed))))
            for m in measures:
                value, _ = closed_form_coherence_batch(kind, m, t, n_x, n_y, n_z)
                err = float(np.max(np.abs(value - evaluate_batch(m, direct))))
                coherence_error[m.label] = max(coherence_error[m.label], err)
        report.max_output_error[variant.value] = output_error
        report.max_coherence_error[variant.value] = coherence_error
        logger.debug("%s: 输出最大偏差 %.3e, 相干度最大偏差 %.3e", variant.value, output_error, max(coherence_error.values()))

    if not report.passed:
        logger.warning("闭式与直接作用的偏差超出容差: %s", report.max_output_error)
    return report


def literal_amplitude_damping_l1(kind: MarkovianKind, s: BlochState) -> float:
    """
    振幅阻尼 l1 相干度的字面写法 (1−p) t √(1−n_z²)

    与 Kraus 直接作用给出的 √(1−p) t √(1−n_z²) 不一致，只保留作回归对照
    """
    return (1.0 - kind.p) * s.t * math.sqrt(max(0.0, 1.0 - s.n_z ** 2))
