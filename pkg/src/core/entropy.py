#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - Sandwiched Rényi 相對熵

F_α(σ||ρ) = ln tr[(ρ^c σ ρ^c)^α] / (α - 1)，c = (1-α)/(2α)，
參數順序與量測定義一致：第二個參數 ρ 被夾在兩側。
"""

import enum
import logging

import numpy as np

from src.core import matcore
from src.core.channels import apply_channel
from src.core.errors import AlphaOutOfRange, DimensionMismatch, SupportViolation

logger = logging.getLogger(__name__)

GUARD_BAND = matcore.ALPHA_GUARD


class Regime(enum.Enum):
    """α 的有效區段"""
    S1 = 's1'            # C_{s1,α}: [1/2, 1)
    S = 's'              # C_{s,α}: [1/2, 1) ∪ (1, ∞)
    ENTROPY = 'entropy'  # F_α: (0, ∞) \ {1}


class Alpha:
    """帶區段標記的 Rényi 階數

    |α - 1| < 1e-3 的保護帶一律拒絕；α → 1 的極限需要另一條公式，不在此實作。
    """

    def __init__(self, value, regime=Regime.ENTROPY):
        """初始化 α

        參數:
            value (float): α 的數值
            regime (Regime): 區段
        """
        value = float(value)
        regime = Regime(regime)
        if not self._in_range(value, regime):
            raise AlphaOutOfRange(f"α = {value} 不在 {regime.value} 區段的有效範圍內")
        self.value = value
        self.regime = regime

    @staticmethod
    def _in_range(value, regime):
        if not np.isfinite(value) or abs(value - 1.0) < GUARD_BAND:
            return False
        if regime is Regime.S1:
            return 0.5 <= value < 1.0
        if regime is Regime.S:
            return value >= 0.5
        return value > 0.0

    @property
    def exponent(self):
        """三明治次冪 c = (1-α)/(2α)"""
        return (1.0 - self.value) / (2.0 * self.value)

    def __float__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, Alpha):
            return self.value == other.value and self.regime is other.regime
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.regime))

    def __repr__(self):
        return f"Alpha({self.value}, {self.regime.value})"


def as_alpha(alpha, regime):
    """把浮點數或其他區段的 Alpha 轉為指定區段（重新驗證）"""
    return Alpha(matcore.alpha_value(alpha), regime)


def sandwiched_renyi(sigma_m, rho, alpha):
    """Sandwiched Rényi 相對熵 F_α(σ||ρ)

    α < 1 時跡泛函只在 supp(ρ) 上計算（夾擠運算會消去其補空間）；
    α > 1 時需要 supp(σ) ⊆ supp(ρ)。

    參數:
        sigma_m: 密度矩陣 σ
        rho: 密度矩陣 ρ
        alpha: ENTROPY 區段的 α

    返回:
        float: F_α(σ||ρ)；α < 1 且兩者支撐正交時為 +∞
    """
    a = as_alpha(alpha, Regime.ENTROPY)
    sigma = matcore.as_matrix(sigma_m)
    mat = matcore.as_matrix(rho)
    if sigma.shape != mat.shape:
        raise DimensionMismatch(f"維度不一致：{sigma.shape} 與 {mat.shape}")
    if a.value > 1.0:
        kernel = np.eye(mat.shape[0]) - matcore.support_projector(mat)
        leak = np.real(np.trace(kernel @ sigma @ kernel))
        if leak > 1e-10:
            raise SupportViolation(f"α > 1 時需要 supp(σ) ⊆ supp(ρ)，支撐外質量 {leak:.3e}")
    power = matcore.frac_power(mat, a.exponent)
    q = matcore.sandwich_trace(power @ sigma @ power, a.value)
    if q <= 0.0:
        return float('inf')
    return float(np.log(q) / (a.value - 1.0))


def classical_renyi(p, q, alpha):
    """古典 Rényi 散度 (α-1)^{-1} ln Σ_j p_j^α q_j^{1-α}

    參數:
        p (array_like): 機率向量
        q (array_like): 機率向量
        alpha (float): α

    返回:
        float: 散度
    """
    a = as_alpha(alpha, Regime.ENTROPY).value
    p = matcore.as_probs(p)
    q = matcore.as_probs(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"維度不一致：{p.shape} 與 {q.shape}")
    mask = (p > 0) & (q > 0)
    if a > 1.0 and np.any((p > 0) & (q <= 0)):
        raise SupportViolation("α > 1 時需要 supp(p) ⊆ supp(q)")
    total = float(np.sum(p[mask] ** a * q[mask] ** (1.0 - a)))
    return float(np.log(total) / (a - 1.0))


def data_processing_gap(channel, sigma_m, rho, alpha):
    """F_α(Φ(σ)||Φ(ρ)) - F_α(σ||ρ)，資料處理不等式要求其 ≤ 0

    參數:
        channel (KrausSet): CPTP 映射
        sigma_m: 密度矩陣 σ
        rho: 密度矩陣 ρ
        alpha: α

    返回:
        float: 差值
    """
    after = sandwiched_renyi(apply_channel(channel, sigma_m), apply_channel(channel, rho), alpha)
    before = sandwiched_renyi(sigma_m, rho, alpha)
    return after - before
