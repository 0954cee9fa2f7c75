"""
单比特相干序工具 - 统一入口

带参数运行时作为命令行工具 (src/cli.py)，例如:
    python main.py coherence --state 1,1,0,0
    python main.py ordering-check --channel bit-flip --measure l1 --p 0.5 --constraint fixed-t

不带参数运行时进入交互菜单：
1. 图数据生成 (figure_builder.py)
2. 闭式交叉校验
3. 相干序概览
"""

import subprocess
import sys

from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

from src.channels import ChannelVariant, MarkovianKind
from src.cli import run
from src.config import CoherenceConfig
from src.measures import CoherenceMeasureId
from src.ordering import Constraint, GridSpec, check_preservation
from src.output_utils import check_figures_exist


def show_menu(config: CoherenceConfig):
    """显示主菜单"""
    print("\n" + "=" * 60)
    print("⚛️  单比特相干度与相干序工具")
    print("=" * 60)

    if check_figures_exist(config.output_dir):
        print(f"✅ 图数据状态: 已生成 ({config.output_dir})")
    else:
        print("❌ 图数据状态: 未生成")

    print("\n📋 请选择功能:")
    print("1. 📈 生成/管理图数据")
    print("2. 🔬 闭式与 Kraus 直接作用交叉校验")
    print("3. 📊 相干序概览 (p = 1/2)")
    print("4. ❓ 帮助信息")
    print("5. 🚪 退出")


def run_figure_builder():
    """运行图数据构建器"""
    try:
        print("\n🏗️  启动图数据构建器...")
        result = subprocess.run([sys.executable, "figure_builder.py"], capture_output=False, text=True)
        return result.returncode == 0
    except Exception as e:
        print(f"❌ 启动图数据构建器失败: {e}")
        return False


def run_verification():
    """运行闭式交叉校验"""
    print("\n🔬 校验中（四种信道 × 11 个 p × 500 个随机态）...")
    code = run(["verify"])
    return code == 0


def run_ordering_overview(config: CoherenceConfig):
    """四种信道在 p = 1/2 下的相干序保持情况"""
    grid = GridSpec.default()
    measures = [
        CoherenceMeasureId.l1(),
        CoherenceMeasureId.relative_entropy(),
        CoherenceMeasureId.geometric(),
        CoherenceMeasureId.tsallis(config.default_alpha),
    ]
    print("\n📊 相干序概览 (p = 1/2，默认网格)")
    for variant in ChannelVariant:
        kind = MarkovianKind(variant, 0.5)
        print(f"\n🔹 {variant.value}")
        for measure in measures:
            cells = []
            for constraint in (Constraint.FIXED_T, Constraint.FIXED_NZ):
                report = check_preservation(kind, measure, grid, constraint, config.tie_tolerance, max_witnesses=1)
                mark = "✅" if report.preserved else f"❌{report.reversal_count}"
                cells.append(f"{constraint.value}: {mark}")
            print(f"   {measure.label:<22} " + "  ".join(cells))


def show_help():
    """显示帮助信息"""
    help_text = """
📖 使用指南：

📈 图数据 (选项1):
   - 重新生成六幅图背后的数据 (CSV)
   - 核对图注中的单调性说法

🔬 交叉校验 (选项2):
   - 比较闭式输出与 Kraus 直接作用
   - 覆盖 l1、相对熵与 Tsallis 相干度

📊 相干序概览 (选项3):
   - fixed-t / fixed-nz 两种约束下统计反转
   - ✅ 表示未发现反转，❌N 表示发现 N 个反转

⌨️  命令行:
   - python main.py --help 查看全部子命令
   - 退出码: 0 正常, 1 参数错误, 2 数值失败, 3 发现反转

🔧 配置文件:
   - .env: COHERENCE_OUTPUT_DIR / COHERENCE_MAX_WITNESSES / COHERENCE_SEED（均可选）
   - data/grids/: YAML 网格文件，配合 --grid-file 使用
   - src/: 核心代码模块
    """
    print(help_text)


def interactive():
    """交互菜单"""
    config = CoherenceConfig.from_env()
    try:
        while True:
            show_menu(config)

            choice = input("\n请输入选择 (1-5): ").strip()

            if choice == '1':
                run_figure_builder()

            elif choice == '2':
                run_verification()

            elif choice == '3':
                run_ordering_overview(config)

            elif choice == '4':
                show_help()

            elif choice == '5':
                print("👋 再见！")
                break

            else:
                print("❌ 无效选择，请输入1-5")

            print("\n" + "-" * 60)

    except KeyboardInterrupt:
        print("\n\n👋 再见！")
    except Exception as e:
        print(f"❌ 程序运行失败: {e}")


def main():
    """主函数"""
    if len(sys.argv) > 1:
        sys.exit(run(sys.argv[1:]))
    interactive()


if __name__ == "__main__":
    main()
