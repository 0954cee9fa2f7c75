"""
全局配置：容差、默认步长、输出目录等。

与原先的 RAGConfig 一样用 dataclass 承载默认值，
环境变量（.env）只做可选覆盖，不配置也能运行。
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv


@dataclass
class CoherenceConfig:
    """相干序扫描配置类"""

    # 排序比较容差
    tie_tolerance: float = 1e-9
    slope_tolerance: float = 1e-8

    # 有限差分
    fd_step: float = 1e-5

    # 报告中最多保留的反转见证数（计数不受影响）
    max_witnesses: int = 20

    # Tsallis 默认 α
    default_alpha: float = 2.0

    # 输出与随机数
    output_dir: str = "data/figures"
    seed: int = 20240601

    @classmethod
    def from_env(cls) -> "CoherenceConfig":
        """
        读取 .env / 环境变量覆盖默认值

        支持:
            COHERENCE_OUTPUT_DIR: 图数据输出目录
            COHERENCE_MAX_WITNESSES: 报告保留的见证数
            COHERENCE_SEED: 随机扫描的种子
        """
        load_dotenv()
        config = cls()
        output_dir = os.getenv("COHERENCE_OUTPUT_DIR", "").strip()
        if output_dir:
            config.output_dir = output_dir
        max_witnesses = os.getenv("COHERENCE_MAX_WITNESSES", "").strip()
        if max_witnesses:
            config.max_witnesses = int(max_witnesses)
        seed = os.getenv("COHERENCE_SEED", "").strip()
        if seed:
            config.seed = int(seed)
        return config
