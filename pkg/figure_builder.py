"""
图数据构建器
专门负责重新生成六幅图背后的数据，并核对图注中的单调性说法
"""

import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
from tqdm import tqdm

# 加载环境变量
load_dotenv()

from src.cli import table_to_csv
from src.config import CoherenceConfig
from src.figures import FIGURES, build_figure
from src.ordering import surface_monotonicity
from src.output_utils import check_figures_exist, figure_path, figure_status


class FigureBuilder:
    """图数据构建器"""

    def __init__(self, config: Optional[CoherenceConfig] = None):
        """
        初始化图数据构建器

        参数:
            config: 配置（默认读取 .env）
        """
        self.config = config or CoherenceConfig.from_env()
        self.output_dir = self.config.output_dir

    def get_output_info(self) -> dict:
        """
        获取输出目录信息

        返回:
            dict: 输出目录状态
        """
        status = figure_status(self.output_dir)
        return {
            "exists": check_figures_exist(self.output_dir),
            "output_dir": self.output_dir,
            "generated": [fig_id for fig_id, ok in status.items() if ok],
            "missing": [fig_id for fig_id, ok in status.items() if not ok],
        }

    def build_one(self, fig_id: int) -> str:
        """生成一幅图的数据并写入 CSV，返回文件路径"""
        table = build_figure(fig_id)
        path = figure_path(self.output_dir, fig_id)
        os.makedirs(self.output_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(table_to_csv(table))
        return path

    def check_claims(self, fig_id: int) -> List[str]:
        """
        核对图注中声称的单调性

        返回:
            List[str]: 每条声称一行结果
        """
        spec = FIGURES[fig_id]
        table = build_figure(fig_id)
        lines = []
        for along, direction in spec.claims:
            violations = surface_monotonicity(table, along, direction, self.config.slope_tolerance)
            if violations.empty:
                lines.append(f"✅ 图 {fig_id}: 沿 {along} {direction} 成立")
            else:
                panels = sorted(violations["panel"].unique())
                lines.append(f"📊 图 {fig_id}: 沿 {along} {direction} 有 {len(violations)} 处违例（面板: {', '.join(panels)}）")
        return lines

    def build_all(self, figure_ids: Optional[List[int]] = None) -> bool:
        """
        完整的图数据构建流程

        参数:
            figure_ids: 要生成的图编号（默认全部）
        """
        figure_ids = figure_ids or sorted(FIGURES)
        print("🏗️  开始生成图数据...")
        print(f"📍 输出目录: {self.output_dir}")

        try:
            for fig_id in tqdm(figure_ids, desc="生成图数据"):
                self.build_one(fig_id)
        except Exception as e:
            print(f"❌ 图数据生成失败: {e}")
            return False

        print("\n🎉 图数据生成完成！")
        for fig_id in figure_ids:
            for line in self.check_claims(fig_id):
                print(f"  {line}")
        return True


def main():
    """主函数"""
    print("📈 图数据构建工具")
    print("=" * 50)

    try:
        builder = FigureBuilder()

        while True:
            print("\n📋 请选择操作:")
            print("1. 生成全部图数据")
            print("2. 生成单幅图数据")
            print("3. 查看输出状态")
            print("4. 退出")

            choice = input("\n请输入选择 (1-4): ").strip()

            if choice == '1':
                builder.build_all()

            elif choice == '2':
                raw = input(f"图编号 ({min(FIGURES)}-{max(FIGURES)}): ").strip()
                if not raw.isdigit() or int(raw) not in FIGURES:
                    print("❌ 无效的图编号")
                    continue
                builder.build_all([int(raw)])

            elif choice == '3':
                info = builder.get_output_info()
                print("\n📊 输出状态:")
                print(f"  全部生成: {'✅ 是' if info['exists'] else '❌ 否'}")
                print(f"  目录: {info['output_dir']}")
                print(f"  已生成: {info['generated'] or '无'}")
                print(f"  缺失: {info['missing'] or '无'}")

            elif choice == '4':
                print("👋 退出图数据构建工具")
                break

            else:
                print("❌ 无效选择，请重试")

    except KeyboardInterrupt:
        print("\n👋 退出图数据构建工具")
    except Exception as e:
        print(f"❌ 程序运行失败: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
