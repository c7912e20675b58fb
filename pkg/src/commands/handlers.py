#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 命令處理函數

每個處理函數接收解析後的參數、主控制器、報告輸出器與輸出串流，回傳退出碼。
"""

import logging
import os

from src.core.axioms import Axiom
from src.core.errors import AlphaOutOfRange, InvalidState
from src.core.main_controller import SweepSpec, generate_states
from src.core.measures import measure_by_name, measure_closed_form
from src.core.states import PureState, random_density, random_pure
from src.data.state_io import load_state, save_state

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_AXIOM_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3

CLOSED_FORM_FAMILIES = {'s1': 's1', 's': 's', 'geometric': 's1'}


def _report_alpha(name, alpha):
    """度量實際使用的 α；與 α 無關的度量不接受其他 α"""
    if measure_by_name(name).regime is not None:
        return alpha
    fixed = 0.5 if name == 'geometric' else None
    if alpha is not None and alpha != fixed:
        raise AlphaOutOfRange(f"度量 {name} 不接受 --alpha {alpha:g}")
    return fixed


def _split_list(text, convert=str):
    return [convert(item.strip()) for item in text.split(',') if item.strip()]


def cmd_measure(args, controller, writer, out):
    """計算單一態的度量，輸出一行 CSV

    參數:
        args (argparse.Namespace): 命令參數
        controller (CoherenceController): 主控制器
        writer (ReportWriter): 報告輸出器
        out: 輸出串流

    返回:
        int: 退出碼
    """
    state = load_state(args.state)
    alpha = _report_alpha(args.measure, args.alpha)

    if args.closed_form:
        if not isinstance(state, PureState):
            raise InvalidState(f"{args.state}: 封閉形式只適用於以 vector 儲存的純態")
        family = CLOSED_FORM_FAMILIES.get(args.measure)
        if family is None:
            raise InvalidState(f"度量 {args.measure} 沒有純態封閉形式")
        result = measure_closed_form(state, family, alpha)
    else:
        result = controller.evaluate(state, args.measure, alpha, args.oracle, args.seed)

    out.write(writer.to_text(writer.measure_frame([(args.measure, alpha, result)])))
    if not result.converged:
        logger.warning(f"{args.measure} 在 {args.state} 上未收斂，數值僅供參考")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_axioms(args, controller, writer, out):
    """執行公理檢查，每個公理輸出一行 CSV；全部通過時退出碼為 0"""
    name = 'broken' if args.negative_control else args.measure
    axioms = [Axiom(a) for a in _split_list(args.axioms)] if args.axioms else None
    suite = controller.run_axioms(name, args.alpha, args.dim, args.trials, args.seed, axioms)
    out.write(writer.to_text(writer.axiom_frame(suite.reports)))
    return EXIT_OK if suite.passed else EXIT_AXIOM_FAILURE


def cmd_sweep(args, controller, writer, out):
    """α 掃描，輸出 CSV（--out 指定文件，否則寫到標準輸出）"""
    states = [(os.path.basename(path), load_state(path)) for path in (args.state or [])]
    for dim, rank, count, seed in (args.random or []):
        states.extend(generate_states(dim, rank, count, seed))
    if not states:
        raise InvalidState("掃描至少需要一個 --state 或 --random")

    spec = SweepSpec(
        alphas=_split_list(args.alphas, float),
        measures=_split_list(args.measures),
        states=states,
    )
    frame = writer.sweep_frame(controller.sweep(spec, args.oracle, args.seed))
    if args.out and args.out != '-':
        writer.write_csv(frame, args.out)
    else:
        out.write(writer.to_text(frame))
    if not frame['converged'].eq('true').all():
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_random(args, controller, writer, out):
    """產生隨機態並寫入態檔案"""
    if args.pure:
        state = random_pure(args.dim, args.seed)
    else:
        state = random_density(args.dim, args.rank, args.seed)
    save_state(args.out, state)
    out.write(f"{args.out}\n")
    return EXIT_OK
