#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 機率單形上的最佳化

指數梯度（鏡像上升）加回溯線搜尋的多起點求解器、窮舉格點搜尋預言機，
以及 C5 證明中 Hölder 兩區塊聚合的封閉形式。
"""

import dataclasses
import enum
import logging
from typing import NamedTuple

import numpy as np

from src.core.entropy import Alpha, Regime
from src.core.errors import (
    AlphaOutOfRange,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidConfig,
    InvalidWeights,
    NonFiniteObjective,
    NonPositiveEntry,
    NonPositiveT,
)
from src.core.states import ProbVector, make_rng

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
MAX_HALVINGS = 60
MAX_STEP = 1e12
AGREEMENT_TOL = 1e-7
GRID_MAX_DIM = 4


class Sense(enum.Enum):
    MAXIMIZE = 'max'
    MINIMIZE = 'min'


class SimplexObjective:
    """單形上的目標函數

    evaluate(x) 回傳 (value, gradient)；value(x) 可選，只算函數值
    （格點搜尋用，可在不可行的邊界點回傳 +∞ / -∞）。
    """

    def __init__(self, dim, evaluate, sense=Sense.MAXIMIZE, value=None, name='objective'):
        self.dim = int(dim)
        self.evaluate = evaluate
        self.sense = Sense(sense)
        self.value = value
        self.name = name

    def value_at(self, x):
        if self.value is not None:
            return float(self.value(x))
        return float(self.evaluate(x)[0])


@dataclasses.dataclass(frozen=True)
class OptimizerConfig:
    """鏡像上升設定

    tol 作用在正規化後的 KKT 殘差（投影梯度的 sup-norm）。
    """
    max_iters: int = 5000
    tol: float = 1e-9
    restarts: int = 4
    interior_floor: float = 1e-9
    step_rule: str = 'backtracking'
    initial_step: float = 1.0

    @classmethod
    def from_settings(cls, settings=None, **overrides):
        """由 config.yaml 的 optimizer 區段建立設定

        參數:
            settings (dict, 可選): optimizer 區段
            **overrides: 覆寫個別欄位（值為 None 時忽略）

        返回:
            OptimizerConfig: 設定
        """
        fields = {f.name for f in dataclasses.fields(cls)}
        values = {k: v for k, v in (settings or {}).items() if k in fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def validate(self, dim):
        if not self.tol > 0:
            raise InvalidConfig(f"tol 必須為正，收到 {self.tol}")
        if not 0 < self.interior_floor < 1.0 / dim:
            raise InvalidConfig(f"interior_floor 必須介於 0 與 1/{dim} 之間，收到 {self.interior_floor}")
        if self.restarts < 1:
            raise InvalidConfig(f"restarts 必須 ≥ 1，收到 {self.restarts}")
        if self.max_iters < 1:
            raise InvalidConfig(f"max_iters 必須 ≥ 1，收到 {self.max_iters}")
        if self.step_rule not in ('fixed', 'backtracking'):
            raise InvalidConfig(f"未知的步長規則: {self.step_rule}")


@dataclasses.dataclass(frozen=True)
class OptimizationReport:
    """最佳化結果

    at_boundary 表示最佳點有分量停在內部下限，回報的是邊界最佳值的極限。
    """
    best_value: float
    best_point: ProbVector
    iterations: int
    converged: bool
    restarts_agreeing: int
    restarts: int = 1
    at_boundary: bool = False


class _RestartResult(NamedTuple):
    value: float
    point: np.ndarray
    iterations: int
    converged: bool


def _floor_normalize(x, floor):
    x = np.asarray(x, dtype=float)
    x = x / np.sum(x)
    x = np.maximum(x, floor)
    return x / np.sum(x)


def _evaluate(obj, x):
    value, grad = obj.evaluate(x)
    value = float(value)
    grad = np.asarray(grad, dtype=float)
    if grad.shape != (obj.dim,):
        raise NonFiniteObjective(f"梯度長度 {grad.shape} 與維度 {obj.dim} 不一致")
    if not np.isfinite(value) or not np.all(np.isfinite(grad)):
        raise NonFiniteObjective(f"{obj.name} 在內部點回傳非有限值: value={value}")
    return value, grad


def kkt_residual(x, g, floor):
    """正規化 KKT 殘差

    乘子 λ 取內部分量上以 x 加權的平均梯度。內部分量取 |g_j - λ|，
    停在下限的分量只計 (g_j - λ)⁺，再除以 max(1, |λ|)。
    g 為已依方向調整（一律視為最大化）的梯度。
    """
    at_floor = x <= 1.5 * floor
    free = ~at_floor
    lam = float(x[free] @ g[free] / np.sum(x[free])) if np.any(free) else float(np.max(g))
    r = g - lam
    interior = np.max(np.abs(r[~at_floor]), initial=0.0)
    boundary = np.max(np.clip(r[at_floor], 0.0, None), initial=0.0)
    return max(interior, boundary) / max(1.0, abs(lam))


def _eg_step(x, g, eta, floor):
    y = x * np.exp(eta * (g - np.max(g)))
    return _floor_normalize(y, floor)


def _ascend(obj, cfg, x0):
    """單一起點的指數梯度上升"""
    sign = 1.0 if obj.sense is Sense.MAXIMIZE else -1.0
    floor = cfg.interior_floor
    x = _floor_normalize(x0, floor)
    value, grad = _evaluate(obj, x)
    f, g = sign * value, sign * grad
    eta = cfg.initial_step / max(float(np.ptp(g)), 1e-12)

    converged = False
    stalled = False
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        if kkt_residual(x, g, floor) <= cfg.tol:
            converged = True
            break
        if cfg.step_rule == 'fixed':
            x = _eg_step(x, g, eta, floor)
            value, grad = _evaluate(obj, x)
            f, g = sign * value, sign * grad
            continue
        for _ in range(MAX_HALVINGS):
            x_new = _eg_step(x, g, eta, floor)
            if not np.array_equal(x_new, x):
                v_new, g_new = _evaluate(obj, x_new)
                if sign * v_new - f >= ARMIJO * float(g @ (x_new - x)):
                    break
            eta *= 0.5
        else:
            stalled = True
            break
        x, f, g = x_new, sign * v_new, sign * g_new
        eta = min(eta * 2.0, MAX_STEP)

    residual = kkt_residual(x, g, floor)
    if not converged:
        # 線搜尋在浮點解析度下無法再改進時，放寬到 √tol
        converged = residual <= cfg.tol or (stalled and residual <= np.sqrt(cfg.tol))
    logger.debug(
        f"{obj.name}: 迭代 {iterations} 次, 值 {sign * f:.15g}, KKT 殘差 {residual:.3e}, "
        f"{'收斂' if converged else '未收斂'}"
    )
    return _RestartResult(sign * f, x, iterations, converged)


def _merge(obj, results, floor):
    sign = 1.0 if obj.sense is Sense.MAXIMIZE else -1.0
    ordered = sorted(results, key=lambda r: (-sign * r.value, tuple(r.point)))
    best = ordered[0]
    agreeing = sum(1 for r in results if abs(r.value - best.value) <= AGREEMENT_TOL)
    return OptimizationReport(
        best_value=best.value,
        best_point=ProbVector(best.point),
        iterations=best.iterations,
        converged=best.converged,
        restarts_agreeing=agreeing,
        restarts=len(results),
        at_boundary=bool(np.any(best.point <= 1.5 * floor)),
    )


def mirror_ascend(obj, cfg, seed, starts=None):
    """多起點指數梯度求解

    起點依序為：均勻點、呼叫者提供的暖啟動點（例如 dephase(ρ)）、
    Dirichlet 隨機點，總數為 cfg.restarts。每步 σ_j ← σ_j·exp(±η g_j)/Z，
    夾到 interior_floor 後再歸一化；步長以 Armijo 回溯線搜尋決定。

    參數:
        obj (SimplexObjective): 目標函數
        cfg (OptimizerConfig): 設定
        seed (int): Dirichlet 起點的種子
        starts (list, 可選): 暖啟動點

    返回:
        OptimizationReport: 各起點中最佳的結果
    """
    cfg.validate(obj.dim)
    rng = make_rng(seed)
    points = [np.full(obj.dim, 1.0 / obj.dim)]
    points.extend(np.asarray(getattr(s, 'probs', s), dtype=float) for s in (starts or []))
    while len(points) < cfg.restarts:
        points.append(rng.dirichlet(np.ones(obj.dim)))
    points = points[:cfg.restarts]

    results = [_ascend(obj, cfg, x0) for x0 in points]
    report = _merge(obj, results, cfg.interior_floor)
    if report.restarts_agreeing < report.restarts:
        logger.info(
            f"{obj.name}: {report.restarts} 個起點中僅 {report.restarts_agreeing} 個與最佳值一致"
        )
    return report


def simplex_lattice(dim, resolution):
    """依字典序列出 {k/resolution} 格點的整數座標 (k_1, …, k_dim)"""
    if dim == 1:
        yield (resolution,)
        return
    for k in range(resolution + 1):
        for rest in simplex_lattice(dim - 1, resolution - k):
            yield (k,) + rest


def grid_search(obj, resolution):
    """在單形格點上窮舉，作為獨立的暴力預言機

    函數值非有限的格點（例如違反支撐條件）視為不可行而略過；
    同值時字典序在前的格點勝出。

    參數:
        obj (SimplexObjective): 目標函數
        resolution (int): 格點解析度

    返回:
        OptimizationReport: 最佳格點
    """
    if obj.dim > GRID_MAX_DIM:
        raise DimensionTooLarge(f"格點搜尋最多支援 {GRID_MAX_DIM} 維，收到 {obj.dim}")
    resolution = int(resolution)
    if resolution < 1:
        raise InvalidConfig(f"格點解析度必須為正整數，收到 {resolution}")
    sign = 1.0 if obj.sense is Sense.MAXIMIZE else -1.0

    best_value, best_point, count = None, None, 0
    for ks in simplex_lattice(obj.dim, resolution):
        point = np.asarray(ks, dtype=float) / resolution
        value = obj.value_at(point)
        count += 1
        if not np.isfinite(value):
            continue
        if best_value is None or sign * value > sign * best_value:
            best_value, best_point = value, point
    if best_value is None:
        raise NonFiniteObjective(f"{obj.name} 在所有格點上皆不可行")

    logger.debug(f"{obj.name}: 格點搜尋 {count} 點, 最佳值 {best_value:.15g}")
    return OptimizationReport(
        best_value=best_value,
        best_point=ProbVector(best_point),
        iterations=count,
        converged=True,
        restarts_agreeing=1,
        restarts=1,
        at_boundary=bool(np.any(best_point == 0.0)),
    )


def _check_weights(p1, p2):
    if not (p1 > 0 and p2 > 0 and abs(p1 + p2 - 1.0) <= 1e-10):
        raise InvalidWeights(f"權重必須為正且總和為 1，收到 p1={p1}, p2={p2}")


def holder_two_block(t1, t2, p1, p2, alpha):
    """max_q {p1^{1-α} q1^α t1 + p2^{1-α} q2^α t2} 的封閉形式

    最佳 q_i ∝ p_i t_i^{1/(1-α)}，最大值為
    (p1 t1^{1/(1-α)} + p2 t2^{1/(1-α)})^{1-α}，與
    p1^{1-α}p2^{1-α}t1t2(p1^{-1}t1^{1/(α-1)} + p2^{-1}t2^{1/(α-1)})^{1-α} 代數上相同。

    參數:
        t1 (float): 區塊 1 的內層最大值（> 0）
        t2 (float): 區塊 2 的內層最大值（> 0）
        p1 (float): 區塊 1 權重
        p2 (float): 區塊 2 權重
        alpha: S1 區段的 α

    返回:
        float: 最大值
    """
    a = Alpha(getattr(alpha, 'value', alpha), Regime.S1).value
    if not (t1 > 0 and t2 > 0):
        raise NonPositiveT(f"需要 t1 > 0 且 t2 > 0，收到 t1={t1}, t2={t2}")
    _check_weights(p1, p2)
    k = 1.0 / (1.0 - a)
    return float((p1 * t1 ** k + p2 * t2 ** k) ** (1.0 - a))


class HolderResult(NamedTuple):
    lhs: float
    rhs: float
    regime_satisfied: bool
    equality: bool


def holder_check(a, b, alpha):
    """Hölder 不等式 Σ a_j b_j 與 (Σ a_j^{1/α})^α (Σ b_j^{1/(1-α)})^{1-α} 的比較

    α ∈ (0, 1) 時應有 lhs ≤ rhs；其餘 α（> 1 或 < 0）為反向 Hölder，lhs ≥ rhs。
    等號條件為 a_j^{1/α} / b_j^{1/(1-α)} 為常數。

    參數:
        a (array_like): 正向量
        b (array_like): 正向量
        alpha (float): α ∉ {0, 1}

    返回:
        HolderResult: (lhs, rhs, regime_satisfied, equality)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"向量形狀不一致: {a.shape} 與 {b.shape}")
    if np.any(a <= 0) or np.any(b <= 0):
        raise NonPositiveEntry("Hölder 檢查要求所有分量為正")
    alpha = float(alpha)
    if alpha in (0.0, 1.0):
        raise AlphaOutOfRange(f"α 不可為 0 或 1，收到 {alpha}")

    p = 1.0 / alpha
    q = 1.0 / (1.0 - alpha)
    lhs = float(np.sum(a * b))
    rhs = float(np.sum(a ** p) ** alpha * np.sum(b ** q) ** (1.0 - alpha))
    if 0.0 < alpha < 1.0:
        satisfied = lhs <= rhs * (1.0 + 1e-12)
    else:
        satisfied = lhs >= rhs * (1.0 - 1e-12)
    ratios = a ** p / b ** q
    proportional = np.ptp(ratios) <= 1e-9 * np.max(ratios)
    equality = bool(abs(lhs - rhs) <= 1e-10 and proportional)
    return HolderResult(lhs, rhs, bool(satisfied), equality)
