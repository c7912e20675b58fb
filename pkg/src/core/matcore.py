#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 稠密 Hermitian 線性代數

本徵分解、支撐上的分數次冪，以及兩種 sandwiched 跡泛函。
所有分數次冪都經由本徵分解計算（維度很小，不使用迭代開方法）。
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from src.core.errors import (
    AlphaOutOfRange,
    DimensionMismatch,
    InvalidDimension,
    NotHermitian,
    NotPSD,
    SupportViolation,
)

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-9
NEGATIVE_EIG_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
ALPHA_GUARD = 1e-3


class HermEigen(NamedTuple):
    """Hermitian 矩陣的本徵分解（本徵值遞增，V 的各行為本徵向量）"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m):
    """把 DensityMatrix 或陣列轉為 complex 方陣

    參數:
        m: 具有 mat 屬性的物件，或 array_like

    返回:
        numpy.ndarray: dim×dim complex 矩陣
    """
    arr = np.asarray(getattr(m, 'mat', m), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"需要方陣，收到形狀 {arr.shape}")
    if arr.shape[0] < 1:
        raise InvalidDimension("矩陣維度必須 ≥ 1")
    return arr


def as_probs(sigma):
    """把 ProbVector 或陣列轉為實數向量"""
    return np.asarray(getattr(sigma, 'probs', sigma), dtype=float)


def alpha_value(alpha):
    """取出 α 的數值（接受 Alpha 物件或浮點數）"""
    return float(getattr(alpha, 'value', alpha))


def herm_eig(m):
    """Hermitian 本徵分解

    先檢查 max|M - M†| ≤ 1e-9，通過後以 (M + M†)/2 對稱化再分解。

    參數:
        m: Hermitian 矩陣

    返回:
        HermEigen: 遞增本徵值與么正本徵向量矩陣
    """
    mat = as_matrix(m)
    asym = np.max(np.abs(mat - mat.conj().T))
    if asym > HERMITIAN_TOL:
        raise NotHermitian(f"矩陣非 Hermitian，max|M - M†| = {asym:.3e}")
    sym = (mat + mat.conj().T) / 2
    eigenvalues, eigenvectors = scipy.linalg.eigh(sym)
    return HermEigen(eigenvalues, eigenvectors)


def _clamped_spectrum(eigenvalues):
    """夾住捨入雜訊造成的負本徵值，並回傳 (本徵值, 支撐遮罩)"""
    largest = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    if largest == 0.0:
        return np.zeros_like(eigenvalues), np.zeros(eigenvalues.shape, dtype=bool)
    if np.min(eigenvalues) < -NEGATIVE_EIG_TOL * largest:
        raise NotPSD(f"矩陣非半正定，最小本徵值 {np.min(eigenvalues):.3e}")
    clamped = np.clip(eigenvalues, 0.0, None)
    support = clamped > SUPPORT_CUTOFF * np.max(clamped)
    return clamped, support


def frac_power(m, p):
    """半正定矩陣在支撐上的分數次冪

    0^p 一律定義為 0，也就是次冪只作用在支撐上（p ≤ 0 時亦然）。

    參數:
        m: 半正定矩陣
        p (float): 次冪

    返回:
        numpy.ndarray: Σ_{λ_k > τ} λ_k^p |v_k⟩⟨v_k|
    """
    eigenvalues, vectors = herm_eig(m)
    lam, support = _clamped_spectrum(eigenvalues)
    powered = np.zeros_like(lam)
    powered[support] = lam[support] ** p
    return (vectors * powered) @ vectors.conj().T


def support_projector(m):
    """支撐上的正交投影（等於 frac_power(m, 0)）"""
    return frac_power(m, 0.0)


def sandwich_trace(a, alpha):
    """tr[A^α]，A 為半正定（只在支撐上求和）"""
    mat = as_matrix(a)
    eigenvalues = scipy.linalg.eigvalsh((mat + mat.conj().T) / 2)
    lam, support = _clamped_spectrum(eigenvalues)
    return float(np.sum(lam[support] ** alpha))


def _check_dims(mat, probs):
    if probs.shape != (mat.shape[0],):
        raise DimensionMismatch(
            f"維度不一致：矩陣為 {mat.shape[0]} 維，機率向量長度 {probs.shape}"
        )


def _check_s1_alpha(a):
    if not (0.5 <= a <= 1.0 - ALPHA_GUARD):
        raise AlphaOutOfRange(f"α = {a} 不在 [1/2, 1) 內")


def _check_s_alpha(a):
    in_lower = 0.5 <= a <= 1.0 - ALPHA_GUARD
    in_upper = a >= 1.0 + ALPHA_GUARD
    if not (in_lower or in_upper) or not np.isfinite(a):
        raise AlphaOutOfRange(f"α = {a} 不在 [1/2, 1) ∪ (1, ∞) 內")


def _sandwich_value_and_grad(b, alpha):
    """B 的 tr[B^α]、本徵向量、支撐與 μ^{α-1}（支撐外為 0）"""
    b = (b + b.conj().T) / 2
    mu, w = scipy.linalg.eigh(b)
    mu, support = _clamped_spectrum(mu)
    value = float(np.sum(mu[support] ** alpha))
    deriv = np.zeros_like(mu)
    deriv[support] = mu[support] ** (alpha - 1.0)
    return value, w, deriv


def q_rho_sandwich_grad(rho, sigma, alpha, rho_power=None):
    """tr[(ρ^c σ ρ^c)^α] 及其對 σ_j 的解析梯度，c = (1-α)/(2α)

    梯度為 α⟨j|R B^{α-1} R|j⟩，B = RσR，B^{α-1} 只在支撐上取值；
    σ 在單形內部時 B 的支撐等於 ρ 的支撐，此公式即為真實導數。

    參數:
        rho: 密度矩陣
        sigma: 機率向量（非相干態 diag(σ)）
        alpha: α ∈ [1/2, 1)
        rho_power (numpy.ndarray, 可選): 預先算好的 ρ^c

    返回:
        tuple: (value, gradient)
    """
    a = alpha_value(alpha)
    _check_s1_alpha(a)
    mat = as_matrix(rho)
    probs = as_probs(sigma)
    _check_dims(mat, probs)
    if rho_power is None:
        rho_power = frac_power(mat, (1.0 - a) / (2.0 * a))
    b = (rho_power * probs) @ rho_power
    value, w, deriv = _sandwich_value_and_grad(b, a)
    rw = rho_power @ w
    grad = a * np.sum(np.abs(rw) ** 2 * deriv, axis=1)
    return value, grad


def q_rho_sandwich(rho, sigma, alpha, rho_power=None):
    """tr[(ρ^c σ ρ^c)^α]，值域 [0, 1]，σ = ρ 時等號成立

    參數:
        rho: 密度矩陣
        sigma: 機率向量
        alpha: α ∈ [1/2, 1)
        rho_power (numpy.ndarray, 可選): 預先算好的 ρ^c

    返回:
        float: 跡泛函值
    """
    a = alpha_value(alpha)
    _check_s1_alpha(a)
    mat = as_matrix(rho)
    probs = as_probs(sigma)
    _check_dims(mat, probs)
    if rho_power is None:
        rho_power = frac_power(mat, (1.0 - a) / (2.0 * a))
    return sandwich_trace((rho_power * probs) @ rho_power, a)


def _sigma_power(mat, probs, a):
    """對角 σ 的逐元次冪 σ_j^c，並於 α > 1 時檢查支撐條件"""
    c = (1.0 - a) / (2.0 * a)
    sigma_support = probs > SUPPORT_CUTOFF * np.max(probs)
    if a > 1.0:
        diag = np.real(np.diag(mat))
        rho_support = diag > SUPPORT_CUTOFF * max(np.max(diag), 0.0)
        if np.any(rho_support & ~sigma_support):
            raise SupportViolation("α > 1 時需要 supp(ρ) ⊆ supp(σ)")
    s = np.zeros_like(probs)
    s[sigma_support] = probs[sigma_support] ** c
    return s, c


def q_sigma_sandwich_grad(sigma, rho, alpha):
    """tr[(σ^c ρ σ^c)^α] 及其對 σ_j 的解析梯度，c = (1-α)/(2α)

    以 s_j = σ_j^c 表示，∂/∂s_j = 2α Re[(ρ S B^{α-1})_jj]，B = SρS，
    再乘上 dσ_j^c/dσ_j = c σ_j^{c-1}。σ 必須位於單形內部。

    參數:
        sigma: 機率向量
        rho: 密度矩陣
        alpha: α ∈ [1/2, 1) ∪ (1, ∞)

    返回:
        tuple: (value, gradient)
    """
    a = alpha_value(alpha)
    _check_s_alpha(a)
    mat = as_matrix(rho)
    probs = as_probs(sigma)
    _check_dims(mat, probs)
    s, c = _sigma_power(mat, probs, a)
    b = s[:, None] * mat * s[None, :]
    value, w, deriv = _sandwich_value_and_grad(b, a)
    rsw = mat @ (s[:, None] * w)
    grad_s = 2.0 * a * np.real(np.sum(rsw * deriv * w.conj(), axis=1))
    with np.errstate(divide='ignore', invalid='ignore'):
        grad = grad_s * c * probs ** (c - 1.0)
    return value, grad


def q_sigma_sandwich(sigma, rho, alpha):
    """tr[(σ^c ρ σ^c)^α]

    σ^c 逐元計算：c > 0 時 0^c = 0；c < 0 時限制在 σ 的支撐上。

    參數:
        sigma: 機率向量
        rho: 密度矩陣
        alpha: α ∈ [1/2, 1) ∪ (1, ∞)

    返回:
        float: 跡泛函值
    """
    a = alpha_value(alpha)
    _check_s_alpha(a)
    mat = as_matrix(rho)
    probs = as_probs(sigma)
    _check_dims(mat, probs)
    s, _ = _sigma_power(mat, probs, a)
    return sandwich_trace(s[:, None] * mat * s[None, :], a)


def fidelity(rho, sigma_m):
    """量子保真度 tr[(σ^{1/2} ρ σ^{1/2})^{1/2}]

    參數:
        rho: 密度矩陣
        sigma_m: 密度矩陣

    返回:
        float: 介於 [0, 1] 的保真度
    """
    a = as_matrix(rho)
    b = as_matrix(sigma_m)
    if a.shape != b.shape:
        raise DimensionMismatch(f"維度不一致：{a.shape} 與 {b.shape}")
    root = frac_power(b, 0.5)
    return sandwich_trace(root @ a @ root, 0.5)
