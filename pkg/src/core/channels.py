#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 量子通道

以 Kraus 集合表示的 CPTP 映射；非相干操作（ICPTP）的產生與驗證；
逐結果（選擇性）作用，用於強單調性檢查。只處理方形通道（dim_in = dim_out）。
"""

import logging
from typing import NamedTuple

import numpy as np

from src.core.errors import DimensionMismatch, InvalidChannel, InvalidDimension
from src.core.states import DensityMatrix, make_rng, to_density

logger = logging.getLogger(__name__)

COMPLETENESS_TOL = 1e-9
STRUCTURE_TOL = 1e-12
OUTCOME_CUTOFF = 1e-12


class Outcome(NamedTuple):
    """選擇性量測的單一結果"""
    probability: float
    state: DensityMatrix


def completeness_residual(kraus):
    """||Σ_n K_n†K_n - I||_F

    參數:
        kraus (list): Kraus 算子（或 KrausSet）

    返回:
        float: 完備性殘差
    """
    ops = getattr(kraus, 'kraus', kraus)
    dim_in = ops[0].shape[1]
    total = sum(k.conj().T @ k for k in ops)
    return float(np.linalg.norm(total - np.eye(dim_in)))


def _structurally_incoherent(ops, tol):
    return all(
        np.all(np.sum(np.abs(k) > tol, axis=0) <= 1)
        for k in ops
    )


class KrausSet:
    """CPTP 映射的 Kraus 集合

    incoherent 旗標在建構時重新驗證：標記為非相干卻不符合
    「每行至多一個非零元」的結構時拋出 InvalidChannel。
    """

    def __init__(self, kraus, incoherent=False):
        """初始化 Kraus 集合

        參數:
            kraus (list): dim×dim 複數矩陣列表
            incoherent (bool): 是否為非相干操作
        """
        ops = tuple(np.array(k, dtype=complex, copy=True) for k in kraus)
        if not ops:
            raise InvalidChannel("Kraus 集合不可為空")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1:
            raise InvalidChannel(f"Kraus 算子形狀不一致: {sorted(shapes)}")
        dim_out, dim_in = ops[0].shape
        if dim_out != dim_in:
            raise InvalidChannel(f"只支援方形通道，收到 {dim_out}×{dim_in}")
        residual = completeness_residual(ops)
        if residual > COMPLETENESS_TOL:
            raise InvalidChannel(f"Kraus 集合不完備，殘差 {residual:.3e}")
        if incoherent and not _structurally_incoherent(ops, STRUCTURE_TOL):
            raise InvalidChannel("標記為非相干，但有 Kraus 算子的某一行含多個非零元")
        for k in ops:
            k.flags.writeable = False
        self.kraus = ops
        self.dim_in = dim_in
        self.dim_out = dim_out
        self.incoherent = bool(incoherent)

    def __len__(self):
        return len(self.kraus)

    def __repr__(self):
        return f"KrausSet(dim={self.dim_in}, n={len(self.kraus)}, incoherent={self.incoherent})"


def _check_input(channel, rho):
    rho = to_density(rho)
    if rho.dim != channel.dim_in:
        raise DimensionMismatch(f"通道輸入維度 {channel.dim_in} 與態的維度 {rho.dim} 不一致")
    return rho


def apply_channel(channel, rho):
    """Φ(ρ) = Σ_n K_n ρ K_n†

    參數:
        channel (KrausSet): 通道
        rho: 密度矩陣

    返回:
        DensityMatrix: 輸出態
    """
    rho = _check_input(channel, rho)
    out = sum(k @ rho.mat @ k.conj().T for k in channel.kraus)
    return DensityMatrix((out + out.conj().T) / 2)


def is_incoherent_kraus(channel, tol=STRUCTURE_TOL):
    """結構性 ICPTP 判定：每個 Kraus 算子的每一行至多一個 |元素| > tol"""
    return _structurally_incoherent(getattr(channel, 'kraus', channel), tol)


def preserves_diagonal(channel, tol=1e-10):
    """行為性 ICPTP 判定：K_n|j⟩⟨j|K_n† 對所有 n, j 皆為對角

    與 is_incoherent_kraus 等價（|j⟩⟨j| 的像是 K_n 第 j 行的外積）。
    """
    for k in getattr(channel, 'kraus', channel):
        for j in range(k.shape[1]):
            col = k[:, j]
            image = np.outer(col, col.conj())
            off = image - np.diag(np.diag(image))
            if np.max(np.abs(off), initial=0.0) > tol:
                return False
    return True


def identity_channel(d):
    """恆等通道"""
    return KrausSet([np.eye(d, dtype=complex)], incoherent=True)


def dephasing_channel(d):
    """完全去相位通道 {|j⟩⟨j|}"""
    ops = []
    for j in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[j, j] = 1.0
        ops.append(k)
    return KrausSet(ops, incoherent=True)


def permutation_channel(perm):
    """基底置換么正通道 P|j⟩ = |perm[j]⟩"""
    perm = np.asarray(perm, dtype=int)
    d = perm.size
    k = np.zeros((d, d), dtype=complex)
    k[perm, np.arange(d)] = 1.0
    return KrausSet([k], incoherent=True)


def _check_sizes(d, n_kraus):
    if int(d) != d or d < 1:
        raise InvalidDimension(f"維度必須是正整數，收到 {d}")
    if int(n_kraus) != n_kraus or n_kraus < 1:
        raise InvalidDimension(f"Kraus 算子數量必須是正整數，收到 {n_kraus}")
    return int(d), int(n_kraus)


def random_incoherent_channel(d, n_kraus, seed):
    """隨機非相干操作

    每一行 j 抽一個長度 n_kraus 的隨機單位向量 v^(j) 與目標列 f_n(j)，
    令 K_n[f_n(j), j] = v^(j)_n。同一個 K_n 中若兩行落在同一列會破壞完備性，
    因此把每個 K_n 再拆成列單射的子算子（每片在每一列至多保留一行），
    拆分後各片仍是非相干的，且 Σ K†K = Σ_n diag(|v_n|²) = I。
    n_kraus = 1 時目標列取為置換，單一算子即為非相干么正。

    參數:
        d (int): 維度
        n_kraus (int): 抽樣的 Kraus 結果數
        seed (int): 種子

    返回:
        KrausSet: incoherent = True 的 Kraus 集合
    """
    d, n_kraus = _check_sizes(d, n_kraus)
    rng = make_rng(seed)
    vectors = rng.standard_normal((n_kraus, d)) + 1j * rng.standard_normal((n_kraus, d))
    vectors /= np.linalg.norm(vectors, axis=0, keepdims=True)
    if n_kraus == 1:
        targets = rng.permutation(d)[None, :]
    else:
        targets = rng.integers(0, d, size=(n_kraus, d))

    ops = []
    for n in range(n_kraus):
        pieces = []
        for j in range(d):
            row = int(targets[n, j])
            for piece in pieces:
                if row not in piece['rows']:
                    break
            else:
                piece = {'rows': {}, 'mat': np.zeros((d, d), dtype=complex)}
                pieces.append(piece)
            piece['rows'][row] = j
            piece['mat'][row, j] = vectors[n, j]
        ops.extend(p['mat'] for p in pieces)

    channel = KrausSet(ops, incoherent=True)
    logger.debug(f"產生隨機非相干通道: d={d}, 抽樣 {n_kraus} 個結果, 拆分後 {len(channel)} 個算子")
    return channel


def random_cptp_channel(d, n_kraus, seed):
    """一般隨機 CPTP 通道：隨機等距 V (n·d × d) 依列切成 n_kraus 塊

    n_kraus = 1 時即為 Haar 隨機么正通道。

    參數:
        d (int): 維度
        n_kraus (int): Kraus 算子數
        seed (int): 種子

    返回:
        KrausSet: Kraus 集合
    """
    d, n_kraus = _check_sizes(d, n_kraus)
    rng = make_rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    v = q * phases[None, :]
    ops = [v[n * d:(n + 1) * d, :] for n in range(n_kraus)]
    return KrausSet(ops, incoherent=False)


def selective_outcomes(channel, rho):
    """逐結果作用：p_n = tr(K_n ρ K_n†)，ρ_n = K_n ρ K_n† / p_n

    p_n < 1e-12 的結果略去（不重新分配其機率）。

    參數:
        channel (KrausSet): 通道
        rho: 密度矩陣

    返回:
        list: Outcome(probability, state) 列表
    """
    rho = _check_input(channel, rho)
    outcomes = []
    for k in channel.kraus:
        unnormalized = k @ rho.mat @ k.conj().T
        unnormalized = (unnormalized + unnormalized.conj().T) / 2
        p = float(np.real(np.trace(unnormalized)))
        if p < OUTCOME_CUTOFF:
            continue
        outcomes.append(Outcome(p, DensityMatrix(unnormalized / p)))
    return outcomes
