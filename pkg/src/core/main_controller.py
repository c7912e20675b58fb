#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 主控制器
"""

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

from src.core.axioms import as_measure_fn, run_suite
from src.core.errors import AlphaOutOfRange, CoherenceError
from src.core.measures import measure_by_name
from src.core.simplexopt import OptimizerConfig
from src.core.states import random_density, random_pure, spawn_seeds
from src.utils.config_manager import ConfigManager


@dataclasses.dataclass
class SweepSpec:
    """α 掃描的設定

    states 為 (state_id, 態) 列表；輸出順序為態、度量、遞增的 α。
    """
    alphas: Sequence[float]
    measures: Sequence[str]
    states: List[Tuple[str, object]]


def generate_states(dim, rank, count, seed):
    """依 (dim, rank, count, seed) 產生一組隨機態

    參數:
        dim (int): 維度
        rank (int): 秩，1 表示純態
        count (int): 數量
        seed (int): 根種子

    返回:
        list: (state_id, 態) 列表
    """
    states = []
    for index, child in enumerate(spawn_seeds(seed, count)):
        if rank == 1:
            state = random_pure(dim, child).to_density()
        else:
            state = random_density(dim, rank, child)
        states.append((f"random-d{dim}-r{rank}-s{seed}-{index}", state))
    return states


class CoherenceController:
    """主控制器類

    負責協調度量計算、α 掃描與公理檢查，並把配置文件中的參數傳遞給各模組。
    """

    def __init__(self, config_manager=None, **optimizer_overrides):
        """初始化主控制器

        參數:
            config_manager (ConfigManager, 可選): 配置管理器
            **optimizer_overrides: 覆寫最佳化器設定（tol, restarts, max_iters 等）
        """
        self.logger = logging.getLogger(__name__)
        self.config = config_manager or ConfigManager()
        self.optimizer_config = OptimizerConfig.from_settings(
            self.config.get_optimizer_settings(), **optimizer_overrides
        )
        self.axiom_settings = self.config.get_axiom_settings()
        self.max_workers = int(self.config.get_sweep_settings().get('max_workers', 4))

    def _options(self, dim, oracle, seed):
        options = {'cfg': self.optimizer_config, 'seed': seed, 'oracle': oracle}
        if oracle == 'grid':
            options['resolution'] = self.config.get_grid_resolution(dim)
        return options

    def evaluate(self, rho, name, alpha=None, oracle='mirror', seed=0):
        """計算單一度量

        參數:
            rho: 密度矩陣
            name (str): 度量名稱
            alpha (float, 可選): α
            oracle (str): 'mirror' 或 'grid'
            seed (int): 隨機重啟的種子

        返回:
            MeasureResult: 度量結果
        """
        measure = measure_by_name(name)
        if measure.regime is not None and alpha is None:
            raise AlphaOutOfRange(f"度量 {name} 需要指定 α")
        dim = getattr(rho, 'dim', None)
        result = measure.compute(rho, alpha, **self._options(dim, oracle, seed))
        self.logger.info(
            f"{name} (α={alpha}): {result.value:.12g} "
            f"[{result.method.value}, {'收斂' if result.converged else '未收斂'}]"
        )
        if not result.converged:
            self.logger.warning(f"{name} (α={alpha}) 最佳化未收斂")
        return result

    def _sweep_cells(self, spec):
        for state_id, state in spec.states:
            for name in spec.measures:
                measure = measure_by_name(name)
                if measure.regime is None:
                    yield state_id, state, name, None
                    continue
                for alpha in sorted(spec.alphas):
                    if measure.accepts(alpha):
                        yield state_id, state, name, alpha
                    else:
                        self.logger.warning(f"略過 {name} 在 α={alpha}：不在有效區段內")

    def _run_cell(self, cell, oracle, seed):
        state_id, state, name, alpha = cell
        row = {'state_id': state_id, 'measure': name, 'alpha': math.nan if alpha is None else alpha}
        try:
            result = self.evaluate(state, name, alpha, oracle, seed)
        except CoherenceError as e:
            self.logger.warning(f"掃描格 {state_id}/{name}/α={alpha} 失敗: {e}")
            row.update(value=math.nan, method='', converged=False)
            return row
        row.update(value=result.value, method=result.method.value, converged=result.converged)
        return row

    def sweep(self, spec, oracle='mirror', seed=0):
        """α 掃描，各格可並行計算，輸出順序固定

        參數:
            spec (SweepSpec): 掃描設定
            oracle (str): 'mirror' 或 'grid'
            seed (int): 隨機重啟的種子

        返回:
            list: 每格一個 dict（state_id, measure, alpha, value, method, converged）
        """
        cells = list(self._sweep_cells(spec))
        self.logger.info(f"開始 α 掃描: {len(cells)} 格, 最多 {self.max_workers} 個工作執行緒")
        with ThreadPoolExecutor(max_workers=max(1, self.max_workers)) as pool:
            futures = [pool.submit(self._run_cell, cell, oracle, seed) for cell in cells]
            rows = [future.result() for future in futures]
        return rows

    def run_axioms(self, name, alpha, dim, trials=None, seed=0, axioms=None):
        """對指定度量執行公理檢查

        參數:
            name (str): 度量名稱（負向對照用 'broken'）
            alpha (float, 可選): α
            dim (int): 維度
            trials (int, 可選): 每個公理的試驗次數，默認取配置
            seed (int): 根種子
            axioms (list, 可選): 要執行的公理

        返回:
            SuiteReport: 彙總結果
        """
        trials = int(trials or self.axiom_settings.get('trials', 200))
        measure = measure_by_name(name)
        m = as_measure_fn(measure, alpha, cfg=self.optimizer_config, seed=0)
        self.logger.info(f"開始公理檢查: {name} (α={m.alpha}), d={dim}, {trials} 次試驗, seed={seed}")
        suite = run_suite(
            m, dim, trials, seed, axioms,
            tol=float(self.axiom_settings.get('tol_axiom', 5e-6)),
            c5_max_dim=int(self.axiom_settings.get('c5_max_dim', 5)),
        )
        if suite.passed:
            self.logger.info(f"{name} (α={m.alpha}) 通過所有公理檢查")
        else:
            failing = ', '.join(r.axiom.value for r in suite.failing())
            self.logger.error(f"{name} (α={m.alpha}) 未通過: {failing}")
        return suite
