"""
相干度量工具箱 - 命令列介面

註冊所有子命令與全局錯誤處理：函式庫錯誤一律以退出碼 2 回報。
"""

import argparse
import logging
import sys

from src.commands.handlers import (
    EXIT_INPUT_ERROR,
    cmd_axioms,
    cmd_measure,
    cmd_random,
    cmd_sweep,
)
from src.core.errors import CoherenceError
from src.core.main_controller import CoherenceController
from src.core.measures import MEASURES
from src.data.report_writer import ReportWriter
from src.utils.config_manager import ConfigManager
from src.utils.logging_utils import setup_logging


def _add_optimizer_flags(parser):
    parser.add_argument('--seed', type=int, default=0, help='隨機種子')
    parser.add_argument('--tol', type=float, help='KKT 殘差容差')
    parser.add_argument('--restarts', type=int, help='重啟次數')
    parser.add_argument('--max-iters', type=int, help='每次重啟的最大迭代數')
    parser.add_argument('--oracle', choices=['mirror', 'grid'], default='mirror',
                        help='最佳化方式：鏡像上升或格點窮舉')


def init_parser():
    """建立命令列解析器

    返回:
        argparse.ArgumentParser: 解析器
    """
    parser = argparse.ArgumentParser(
        prog='coherence',
        description='Sandwiched Rényi 相干度量的計算與公理檢查'
    )
    parser.add_argument('--config', default='config.yaml', help='配置文件路徑')
    parser.add_argument('--log-level', help='日誌級別（覆寫配置文件）')
    parser.add_argument('--no-log-file', action='store_true', help='不寫日誌文件')
    sub = parser.add_subparsers(dest='command', required=True)

    measure = sub.add_parser('measure', help='計算態檔案的相干度量')
    measure.add_argument('--state', required=True, help='態檔案')
    measure.add_argument('--measure', required=True, choices=sorted(MEASURES))
    measure.add_argument('--alpha', type=float, help='Rényi 階數 α')
    measure.add_argument('--closed-form', action='store_true', help='純態使用封閉形式')
    _add_optimizer_flags(measure)
    measure.set_defaults(handler=cmd_measure)

    axioms = sub.add_parser('axioms', help='執行 C1–C5 公理檢查')
    axioms.add_argument('--measure', default='s1', choices=sorted(MEASURES))
    axioms.add_argument('--alpha', type=float, help='Rényi 階數 α')
    axioms.add_argument('--dim', type=int, required=True, help='維度')
    axioms.add_argument('--trials', type=int, help='每個公理的試驗次數')
    axioms.add_argument('--axioms', help='以逗號分隔的公理，例如 C1,C2')
    axioms.add_argument('--negative-control', action='store_true',
                        help='改用錯誤度量 tr ρ² - λ_min 作為負向對照')
    _add_optimizer_flags(axioms)
    axioms.set_defaults(handler=cmd_axioms)

    sweep = sub.add_parser('sweep', help='α 掃描')
    sweep.add_argument('--alphas', required=True, help='以逗號分隔的 α 值')
    sweep.add_argument('--measures', required=True, help='以逗號分隔的度量名稱')
    sweep.add_argument('--state', action='append', help='態檔案（可重複）')
    sweep.add_argument('--random', nargs=4, type=int, action='append',
                       metavar=('DIM', 'RANK', 'COUNT', 'SEED'), help='隨機態產生設定（可重複）')
    sweep.add_argument('--out', help='輸出 CSV 路徑，省略或 - 表示標準輸出')
    _add_optimizer_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    random = sub.add_parser('random', help='產生隨機態檔案')
    random.add_argument('--dim', type=int, required=True, help='維度')
    random.add_argument('--rank', type=int, default=None, help='秩（默認為滿秩）')
    random.add_argument('--seed', type=int, default=0, help='隨機種子')
    random.add_argument('--out', required=True, help='輸出態檔案')
    random.add_argument('--pure', action='store_true', help='產生純態（以 vector 儲存）')
    random.set_defaults(handler=cmd_random)

    return parser


def main(argv=None, out=None):
    """命令列入口

    參數:
        argv (list, 可選): 命令列參數
        out: 報告輸出串流，默認為標準輸出

    返回:
        int: 退出碼
    """
    out = out or sys.stdout
    args = init_parser().parse_args(argv)

    config_manager = ConfigManager(args.config)
    system = config_manager.get_system_settings()
    level = args.log_level or system.get('log_level', 'INFO')
    log_dir = None if args.no_log_file else system.get('log_dir', 'logs')

    try:
        setup_logging(log_dir=log_dir, log_level=level, console_level=level)
        if args.command == 'random' and args.rank is None:
            args.rank = args.dim

        controller = CoherenceController(
            config_manager,
            tol=getattr(args, 'tol', None),
            restarts=getattr(args, 'restarts', None),
            max_iters=getattr(args, 'max_iters', None),
        )
        output = config_manager.get_output_settings()
        writer = ReportWriter(output.get('float_format', '%.17g'), output.get('directory'))
        return args.handler(args, controller, writer, out)
    except (CoherenceError, OSError, ValueError) as e:
        logging.getLogger(__name__).debug("命令失敗", exc_info=True)
        sys.stderr.write(f"錯誤: {e}\n")
        return EXIT_INPUT_ERROR
