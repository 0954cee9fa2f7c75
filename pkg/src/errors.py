"""
异常定义：库内所有错误都继承自 CoherenceError。

输入类错误同时继承 ValueError，调用方按 ValueError 捕获也能正常工作。
"""


class CoherenceError(Exception):
    """本项目所有异常的基类"""


class InvalidStateError(CoherenceError, ValueError):
    """Bloch 态参数非法（t 超出 [0,1] 或方向向量未归一化）"""


class InvalidMatrixError(CoherenceError, ValueError):
    """密度矩阵不满足厄米、单位迹或半正定条件"""


class DomainError(CoherenceError, ValueError):
    """参数超出定义域（如 p、α、熵的自变量）"""


class InvalidChannelError(CoherenceError, ValueError):
    """Kraus 算子不满足完备性 Σ K†K = I"""


class UnsupportedMeasureError(CoherenceError, NotImplementedError):
    """该度量没有闭式表达（几何相干度只能走直接计算路线）"""


class OptimizerFailure(CoherenceError, RuntimeError):
    """几何相干度的内层优化未在迭代上限内收敛"""
