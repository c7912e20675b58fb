#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 相干度量

兩族 sandwiched Rényi 相干度量 C_{s1,α} 與 C_{s,α}、其純態封閉形式、
幾何相干度，以及 qubit 的 l1 範數相干度。
"""

import dataclasses
import enum
import logging
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from src.core import matcore
from src.core.entropy import Regime, as_alpha
from src.core.errors import NotQubit, SupportViolation, UnknownMeasure
from src.core.simplexopt import (
    OptimizationReport,
    OptimizerConfig,
    Sense,
    SimplexObjective,
    grid_search,
    mirror_ascend,
)
from src.core.states import ProbVector, PureState, dephase, to_density

logger = logging.getLogger(__name__)

GRID_RESOLUTION = {1: 1, 2: 10000, 3: 200, 4: 40}


class Method(enum.Enum):
    OPTIMIZER = 'optimizer'
    PURE_CLOSED_FORM = 'closed-form'
    GRID_ORACLE = 'grid'
    EXACT = 'exact'


@dataclasses.dataclass(frozen=True)
class MeasureResult:
    """度量值與最佳非相干態

    封閉形式與精確公式沒有最佳化報告，report 為 None。
    """
    value: float
    optimal_sigma: Optional[ProbVector]
    report: Optional[OptimizationReport]
    method: Method

    @property
    def converged(self):
        return True if self.report is None else self.report.converged

    @property
    def restarts_agreeing(self):
        return 1 if self.report is None else self.report.restarts_agreeing


def _optimize(obj, rho, cfg, seed, oracle, resolution):
    if oracle == 'grid':
        resolution = resolution or GRID_RESOLUTION.get(obj.dim)
        return grid_search(obj, resolution), Method.GRID_ORACLE
    cfg = cfg or OptimizerConfig()
    return mirror_ascend(obj, cfg, seed, starts=[dephase(rho)]), Method.OPTIMIZER


def c_s1(rho, alpha, cfg=None, seed=0, oracle='mirror', resolution=None):
    """C_{s1,α}(ρ) = 1 - max_σ {tr[(ρ^c σ ρ^c)^α]}^{1/(1-α)}

    外層次冪單調遞增，因此直接最大化內層跡泛函 Q。

    參數:
        rho: 密度矩陣
        alpha: α ∈ [1/2, 1)
        cfg (OptimizerConfig, 可選): 最佳化設定
        seed (int): 隨機重啟的種子
        oracle (str): 'mirror' 或 'grid'
        resolution (int, 可選): 格點解析度

    返回:
        MeasureResult: 度量結果
    """
    a = as_alpha(alpha, Regime.S1)
    rho = to_density(rho)
    mat = rho.mat
    rho_power = matcore.frac_power(mat, a.exponent)

    obj = SimplexObjective(
        rho.dim,
        evaluate=lambda x: matcore.q_rho_sandwich_grad(mat, x, a.value, rho_power),
        sense=Sense.MAXIMIZE,
        value=lambda x: matcore.q_rho_sandwich(mat, x, a.value, rho_power),
        name=f"C_s1(α={a.value:g})",
    )
    report, method = _optimize(obj, rho, cfg, seed, oracle, resolution)
    value = 1.0 - max(report.best_value, 0.0) ** (1.0 / (1.0 - a.value))
    return MeasureResult(value, report.best_point, report, method)


def _q_sigma_value(mat, a):
    def value(x):
        try:
            return matcore.q_sigma_sandwich(x, mat, a)
        except SupportViolation:
            return float('inf')
    return value


def c_s(rho, alpha, cfg=None, seed=0, oracle='mirror', resolution=None):
    """C_{s,α}(ρ) = min_σ ({tr[(σ^c ρ σ^c)^α]}^{1/α} - 1)/(α - 1)

    α < 1 時分母為負，最小化等同於最大化 Q̃；α > 1 時則最小化 Q̃。
    迭代點保持在單形內部，所以 α > 1 的支撐條件恆成立。

    參數:
        rho: 密度矩陣
        alpha: α ∈ [1/2, 1) ∪ (1, ∞)
        cfg (OptimizerConfig, 可選): 最佳化設定
        seed (int): 隨機重啟的種子
        oracle (str): 'mirror' 或 'grid'
        resolution (int, 可選): 格點解析度

    返回:
        MeasureResult: 度量結果
    """
    a = as_alpha(alpha, Regime.S)
    rho = to_density(rho)
    mat = rho.mat

    obj = SimplexObjective(
        rho.dim,
        evaluate=lambda x: matcore.q_sigma_sandwich_grad(x, mat, a.value),
        sense=Sense.MAXIMIZE if a.value < 1.0 else Sense.MINIMIZE,
        value=_q_sigma_value(mat, a.value),
        name=f"C_s(α={a.value:g})",
    )
    report, method = _optimize(obj, rho, cfg, seed, oracle, resolution)
    q = max(report.best_value, 0.0)
    value = (q ** (1.0 / a.value) - 1.0) / (a.value - 1.0)
    return MeasureResult(value, report.best_point, report, method)


def _populations(psi):
    amps = getattr(psi, 'amplitudes', None)
    if amps is None:
        amps = PureState(psi).amplitudes
    return np.abs(amps) ** 2


def c_s1_pure(psi, alpha):
    """純態的 C_{s1,α} = 1 - max_j |⟨j|ψ⟩|^{2α/(1-α)}"""
    a = as_alpha(alpha, Regime.S1).value
    p = _populations(psi)
    return float(1.0 - np.max(p) ** (a / (1.0 - a)))


def c_s_pure(psi, alpha):
    """純態的 C_{s,α} = [(Σ_j |⟨j|ψ⟩|^{2α/(2α-1)})^{(2α-1)/α} - 1]/(α - 1)

    α = 1/2 時指數發散，取極限值 2(1 - max_j |⟨j|ψ⟩|²) = 2·c_s1_pure(ψ, 1/2)。

    參數:
        psi (PureState): 純態
        alpha: α ∈ [1/2, 1) ∪ (1, ∞)

    返回:
        float: 度量值
    """
    a = as_alpha(alpha, Regime.S).value
    if a == 0.5:
        return 2.0 * c_s1_pure(psi, 0.5)
    p = _populations(psi)
    p = p[p > 0.0]
    # 兩個指數互為倒數，提出 max p 以免 α 接近 1/2 時下溢
    top = float(np.max(p))
    total = float(np.sum((p / top) ** (a / (2.0 * a - 1.0))))
    return float((top * total ** ((2.0 * a - 1.0) / a) - 1.0) / (a - 1.0))


def _closed_form_sigma(p, family, a):
    if family == 's1' or a == 0.5:
        sigma = np.zeros_like(p)
        sigma[int(np.argmax(p))] = 1.0
        return ProbVector(sigma)
    weights = np.where(p > 0.0, p, 0.0) ** (a / (2.0 * a - 1.0))
    return ProbVector(weights / np.sum(weights))


def measure_closed_form(psi, family, alpha):
    """純態封閉形式，連同解析的最佳 σ

    C_{s1} 的最佳 σ 為最大振幅所在的基底態；C_{s,α} 的最佳 σ_j ∝ |ψ_j|^{2α/(2α-1)}。

    參數:
        psi (PureState): 純態
        family (str): 's1' 或 's'
        alpha: α

    返回:
        MeasureResult: method 為 PURE_CLOSED_FORM
    """
    if family == 's1':
        value = c_s1_pure(psi, alpha)
        a = as_alpha(alpha, Regime.S1).value
    elif family == 's':
        value = c_s_pure(psi, alpha)
        a = as_alpha(alpha, Regime.S).value
    else:
        raise UnknownMeasure(f"沒有封閉形式的度量: {family}")
    sigma = _closed_form_sigma(_populations(psi), family, a)
    return MeasureResult(value, sigma, None, Method.PURE_CLOSED_FORM)


def non_equivalence_witness(psi, alpha):
    """同一 α 下 c_s1_pure - c_s_pure，非零即表示兩族度量不等價"""
    return c_s1_pure(psi, alpha) - c_s_pure(psi, alpha)


def geometric_coherence(rho, cfg=None, seed=0, oracle='mirror', resolution=None):
    """幾何相干度 1 - max_σ F(ρ, σ)²，即 C_{s1,1/2}"""
    return c_s1(rho, 0.5, cfg=cfg, seed=seed, oracle=oracle, resolution=resolution)


def l1_coherence_qubit(rho):
    """qubit 的 l1 範數相干度 2|ρ_01|

    參數:
        rho: 2×2 密度矩陣

    返回:
        float: 介於 [0, 1]
    """
    rho = to_density(rho)
    if rho.dim != 2:
        raise NotQubit(f"l1 相干度只適用於 qubit，收到 {rho.dim} 維")
    return float(2.0 * abs(rho.mat[0, 1]))


def broken_measure(rho):
    """tr ρ² - λ_min(ρ)：在對角態上不為 0 的錯誤度量（負向對照）"""
    mat = to_density(rho).mat
    purity = float(np.real(np.trace(mat @ mat)))
    return purity - float(scipy.linalg.eigvalsh(mat)[0])


@dataclasses.dataclass(frozen=True)
class NamedMeasure:
    """可依名稱呼叫的度量

    regime 為 None 表示與 α 無關；compute(rho, alpha, **options) 回傳 MeasureResult。
    """
    name: str
    regime: Optional[Regime]
    compute: Callable

    def accepts(self, alpha):
        if self.regime is None:
            return True
        try:
            as_alpha(alpha, self.regime)
        except ValueError:
            return False
        return True

    def scalar(self, **options):
        """轉成 (rho, alpha) → float 的回呼，供公理檢查使用"""
        def evaluate(rho, alpha):
            return self.compute(rho, alpha, **options).value
        return evaluate


def _exact(fn):
    def compute(rho, alpha=None, **_options):
        return MeasureResult(fn(rho), None, None, Method.EXACT)
    return compute


def _geometric(rho, alpha=None, **options):
    return geometric_coherence(rho, **options)


MEASURES = {
    's1': NamedMeasure('s1', Regime.S1, c_s1),
    's': NamedMeasure('s', Regime.S, c_s),
    'geometric': NamedMeasure('geometric', None, _geometric),
    'l1-qubit': NamedMeasure('l1-qubit', None, _exact(l1_coherence_qubit)),
    'broken': NamedMeasure('broken', None, _exact(broken_measure)),
}


def measure_by_name(name):
    """依名稱取得度量

    參數:
        name (str): s1、s、geometric、l1-qubit 或 broken

    返回:
        NamedMeasure: 度量
    """
    try:
        return MEASURES[name]
    except KeyError:
        raise UnknownMeasure(f"未知的度量: {name}（可用: {', '.join(MEASURES)}）") from None
