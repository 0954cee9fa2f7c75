"""
命令行入口

子命令:
    coherence       计算单个态的四种相干度
    evolve          信道作用后的密度矩阵与 Bloch 参数
    scan            (t, n_z) 网格上信道后相干度的表
    ordering-check  成对相干序检查（发现反转时退出码为 3）
    ordering-sweep  对网格中每个 p 做相干序检查（带进度条，任一 p 反转时退出码为 3）
    monotonicity    有限差分单调性检验
    figure          重新生成图 1–6 的数据
    nc-search       在非相干 NC 信道中搜索 C_l1 相干序反转
    verify          闭式与 Kraus 直接作用的交叉校验

退出码: 0 正常；1 参数错误；2 数值失败；3 ordering-check / ordering-sweep 发现反转
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
import yaml

from .channels import (
    ChannelVariant,
    MarkovianKind,
    NCFamily,
    apply_channel,
    make_markovian,
    verify_closed_forms,
)
from .config import CoherenceConfig
from .errors import CoherenceError, InvalidStateError, OptimizerFailure, UnsupportedMeasureError
from .figures import FIGURES, build_figure
from .measures import CoherenceMeasureId, evaluate
from .ordering import (
    Axis,
    Constraint,
    NC_ANGLES,
    NC_ETA_VALUES,
    GridSpec,
    check_preservation,
    figure_surface,
    monotonicity_scan,
    nc_reversal_search,
    nc_state_grid,
    sweep_preservation,
)
from .qubit_core import BlochState, bloch_to_matrix, matrix_to_bloch

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_REVERSAL = 3

STATE_NORMALIZE_TOL = 1e-6
CSV_FLOAT_FORMAT = "%.17g"


class CliUsageError(Exception):
    """命令行参数错误"""


class _Parser(argparse.ArgumentParser):
    # argparse 默认以退出码 2 结束进程，这里统一改为 1
    def error(self, message):
        raise CliUsageError(message)


def parse_state(text: str) -> BlochState:
    """
    解析 t,nx,ny,nz

    ‖n‖ 与 1 的偏差在 1e-6 以内时自动归一化，超出则报错
    """
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise InvalidStateError(f"无法解析态参数: {text}（格式 t,nx,ny,nz）") from e
    if len(values) != 4 or not all(math.isfinite(v) for v in values):
        raise InvalidStateError(f"态参数必须是 4 个有限实数: {text}")
    t, n = values[0], np.asarray(values[1:])
    if t == 0.0:
        return BlochState(0.0)
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > STATE_NORMALIZE_TOL:
        raise InvalidStateError(f"方向向量 ‖n‖ = {norm:.8g}，偏离 1 超过 {STATE_NORMALIZE_TOL:g}")
    return BlochState(t, tuple(n / norm))


def _measure(args, config: CoherenceConfig) -> CoherenceMeasureId:
    alpha = args.alpha if args.alpha is not None else config.default_alpha
    return CoherenceMeasureId.parse(args.measure, alpha)


def _grid(args) -> GridSpec:
    return GridSpec.from_yaml(args.grid_file) if args.grid_file else GridSpec.default()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(f"✅ 已写入 {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def dumps_json(data) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def table_to_csv(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_table(table: pd.DataFrame, out: Optional[str], fmt: Optional[str]) -> None:
    if fmt == "json":
        # NaN 写成 null，浮点数按 repr 输出，可逐位读回
        records = table.astype(object).where(table.notna(), None).to_dict("records")
        _emit(dumps_json(records), out)
    else:
        _emit(table_to_csv(table), out)


def read_table(path) -> pd.DataFrame:
    """读回本工具写出的 CSV，浮点数逐位还原"""
    return pd.read_csv(path, float_precision="round_trip")


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------

def _cmd_coherence(args, config: CoherenceConfig) -> int:
    state = parse_state(args.state)
    rho = bloch_to_matrix(state)
    alpha = args.alpha if args.alpha is not None else config.default_alpha
    measures = [
        CoherenceMeasureId.l1(),
        CoherenceMeasureId.relative_entropy(),
        CoherenceMeasureId.geometric(),
        CoherenceMeasureId.tsallis(alpha),
    ]
    table = pd.DataFrame(
        {
            "measure": [m.kind.value for m in measures],
            "alpha": [m.alpha if m.alpha is not None else np.nan for m in measures],
            "value": [evaluate(m, rho) for m in measures],
        }
    )
    if args.format == "json":
        data = {"command": "coherence", "state": state.as_dict(), "alpha": alpha}
        data["values"] = {m.kind.value: v for m, v in zip(measures, table["value"])}
        _emit(dumps_json(data), args.out)
    else:
        write_table(table, args.out, "csv")
    return EXIT_OK


def _cmd_evolve(args, config: CoherenceConfig) -> int:
    kind = MarkovianKind(ChannelVariant.parse(args.channel), args.p)
    state = parse_state(args.state)
    output = apply_channel(make_markovian(kind), bloch_to_matrix(state))
    bloch = matrix_to_bloch(output)
    entries = output.entries
    if (args.format or "json") == "csv":
        row = {"t": bloch.t, "n_x": bloch.n_x, "n_y": bloch.n_y, "n_z": bloch.n_z}
        for i in range(2):
            for j in range(2):
                row[f"rho{i}{j}_re"] = entries[i, j].real
                row[f"rho{i}{j}_im"] = entries[i, j].imag
        write_table(pd.DataFrame([row]), args.out, "csv")
    else:
        data = {
            "command": "evolve",
            **kind.to_dict(),
            "input": state.as_dict(),
            "matrix": [[[entries[i, j].real, entries[i, j].imag] for j in range(2)] for i in range(2)],
            "output": bloch.as_dict(),
        }
        _emit(dumps_json(data), args.out)
    return EXIT_OK


def _cmd_scan(args, config: CoherenceConfig) -> int:
    kind = MarkovianKind(ChannelVariant.parse(args.channel), args.p)
    measure = _measure(args, config)
    table = figure_surface(kind, measure, g=_grid(args), azimuth=args.azimuth)
    write_table(table, args.out, args.format)
    return EXIT_OK


def _cmd_ordering_check(args, config: CoherenceConfig) -> int:
    kind = MarkovianKind(ChannelVariant.parse(args.channel), args.p)
    measure = _measure(args, config)
    max_witnesses = args.max_witnesses if args.max_witnesses is not None else config.max_witnesses
    report = check_preservation(
        kind, measure, _grid(args), Constraint(args.constraint), config.tie_tolerance, max_witnesses
    )
    _emit(dumps_json({"command": "ordering-check", **report.to_dict()}), args.out)
    if report.preserved:
        print("✅ 未发现相干序反转", file=sys.stderr)
        return EXIT_OK
    print(f"📊 发现 {report.reversal_count} 个相干序反转", file=sys.stderr)
    return EXIT_REVERSAL


def _cmd_ordering_sweep(args, config: CoherenceConfig) -> int:
    variant = ChannelVariant.parse(args.channel)
    measure = _measure(args, config)
    grid = _grid(args)
    max_witnesses = args.max_witnesses if args.max_witnesses is not None else config.max_witnesses
    reports = sweep_preservation(
        variant, measure, grid, Constraint(args.constraint), config.tie_tolerance, max_witnesses, progress=True
    )
    reversed_p = [r.channel.p for r in reports if not r.preserved]
    data = {
        "command": "ordering-sweep",
        "channel": variant.value,
        **measure.to_dict(),
        "constraint": args.constraint,
        "grid": grid.to_dict(),
        "preserved": not reversed_p,
        "reports": [{k: v for k, v in r.to_dict().items() if k != "grid"} for r in reports],
    }
    _emit(dumps_json(data), args.out)
    if not reversed_p:
        print(f"✅ {len(reports)} 个 p 值下均未发现相干序反转", file=sys.stderr)
        return EXIT_OK
    print(f"📊 以下 p 值出现相干序反转: {reversed_p}", file=sys.stderr)
    return EXIT_REVERSAL


def _cmd_monotonicity(args, config: CoherenceConfig) -> int:
    kind = MarkovianKind(ChannelVariant.parse(args.channel), args.p)
    grid = _grid(args)
    report = monotonicity_scan(
        kind,
        _measure(args, config),
        axis=Axis(args.axis),
        g=grid,
        step=args.step if args.step is not None else config.fd_step,
        direction=args.direction,
        tol=config.slope_tolerance,
    )
    _emit(dumps_json({"command": "monotonicity", **report.to_dict(), "grid": grid.to_dict()}), args.out)
    return EXIT_OK


def _cmd_figure(args, config: CoherenceConfig) -> int:
    table = build_figure(args.id)
    out = args.out
    if out and Path(out).suffix.lower() not in (".csv", ".json"):
        out = str(Path(out) / f"figure_{args.id}.{args.format or 'csv'}")
    write_table(table, out, args.format)
    return EXIT_OK


def _cmd_nc_search(args, config: CoherenceConfig) -> int:
    states = GridSpec.from_yaml(args.grid_file, base=nc_state_grid()) if args.grid_file else nc_state_grid()
    found = nc_reversal_search(
        NCFamily(args.family), angles=NC_ANGLES, eta_values=NC_ETA_VALUES, states=states, tol=config.tie_tolerance
    )
    data = {
        "command": "nc-search",
        "family": args.family,
        "angles": list(NC_ANGLES),
        "eta_values": list(NC_ETA_VALUES),
        "tie_tolerance": config.tie_tolerance,
        "states": states.to_dict(),
        "found": found is not None,
    }
    if found is None:
        print("💡 网格已穷尽，未找到反转", file=sys.stderr)
    else:
        data.update(found.to_dict())
    _emit(dumps_json(data), args.out)
    return EXIT_OK


def _cmd_verify(args, config: CoherenceConfig) -> int:
    seed = args.seed if args.seed is not None else config.seed
    report = verify_closed_forms(samples=args.samples, seed=seed)
    _emit(dumps_json({"command": "verify", **report.to_dict()}), args.out)
    if report.passed:
        print("✅ 闭式与 Kraus 直接作用一致", file=sys.stderr)
        return EXIT_OK
    print("❌ 闭式与 Kraus 直接作用存在超出容差的偏差", file=sys.stderr)
    return EXIT_NUMERIC


# ---------------------------------------------------------------------------
# 解析器
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="输出文件（默认标准输出）")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="输出格式（evolve 默认 json，其余默认 csv）")
    common.add_argument("--verbose", action="store_true", help="输出调试日志")

    channel = _Parser(add_help=False)
    channel.add_argument("--channel", required=True, help="amplitude-damping | phase-damping | depolarizing | bit-flip")
    channel.add_argument("--p", type=float, required=True, help="信道参数 p ∈ [0,1]")

    measure = _Parser(add_help=False)
    measure.add_argument("--measure", required=True, help="l1 | relative-entropy | geometric | tsallis")
    measure.add_argument("--alpha", type=float, default=None, help="Tsallis α ∈ (0,1)∪(1,2]")

    grid = _Parser(add_help=False)
    grid.add_argument("--grid-file", default=None, help="YAML 网格文件，未给出的字段沿用默认网格")

    parser = _Parser(prog="main.py", description="单比特相干度与相干序扫描工具")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", parents=[common], help="计算四种相干度")
    p.add_argument("--state", required=True, help="t,nx,ny,nz")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(handler=_cmd_coherence)

    p = sub.add_parser("evolve", parents=[common, channel], help="信道作用")
    p.add_argument("--state", required=True, help="t,nx,ny,nz")
    p.set_defaults(handler=_cmd_evolve)

    p = sub.add_parser("scan", parents=[common, channel, measure, grid], help="(t, n_z) 网格扫描")
    p.add_argument("--azimuth", type=float, default=0.0, help="(n_x, n_y) 方位角，默认 0 即 n_y = 0")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("ordering-check", parents=[common, channel, measure, grid], help="成对相干序检查")
    p.add_argument("--constraint", choices=[c.value for c in Constraint], default=Constraint.FIXED_T.value)
    p.add_argument("--max-witnesses", type=int, default=None)
    p.set_defaults(handler=_cmd_ordering_check)

    channel_only = _Parser(add_help=False)
    channel_only.add_argument("--channel", required=True, help="amplitude-damping | phase-damping | depolarizing | bit-flip")

    p = sub.add_parser("ordering-sweep", parents=[common, channel_only, measure, grid], help="对网格中每个 p 做相干序检查")
    p.add_argument("--constraint", choices=[c.value for c in Constraint], default=Constraint.FIXED_T.value)
    p.add_argument("--max-witnesses", type=int, default=None)
    p.set_defaults(handler=_cmd_ordering_sweep)

    p = sub.add_parser("monotonicity", parents=[common, channel, measure, grid], help="有限差分单调性检验")
    p.add_argument("--axis", choices=[a.value for a in Axis], default=Axis.T.value)
    p.add_argument("--direction", choices=["increasing", "decreasing"], default=None)
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(handler=_cmd_monotonicity)

    p = sub.add_parser("figure", parents=[common], help="重新生成图数据")
    p.add_argument("--id", type=int, required=True, choices=sorted(FIGURES))
    p.set_defaults(handler=_cmd_figure)

    p = sub.add_parser("nc-search", parents=[common, grid], help="NC 信道反转搜索")
    p.add_argument("--family", choices=[f.value for f in NCFamily], required=True)
    p.set_defaults(handler=_cmd_nc_search)

    p = sub.add_parser("verify", parents=[common], help="闭式交叉校验")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_verify)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    执行一条命令

    参数:
        argv: 参数列表（不含程序名），None 时读取 sys.argv

    返回:
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except CliUsageError as e:
        print(f"❌ 参数错误: {e}", file=sys.stderr)
        print("💡 使用 --help 查看用法", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(asctime)s %(name)s %(levelname)s %(message)s")

    try:
        config = CoherenceConfig.from_env()
        return args.handler(args, config)
    except OptimizerFailure as e:
        print(f"❌ 数值计算失败: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, UnsupportedMeasureError, yaml.YAMLError) as e:
        # 输入类错误都继承 ValueError
        print(f"❌ 参数错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ 文件读写失败: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CoherenceError, ArithmeticError, np.linalg.LinAlgError) as e:
        print(f"❌ 数值计算失败: {e}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
