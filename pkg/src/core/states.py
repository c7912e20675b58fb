#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 量子態

在固定參考基底（計算基底）下建構、驗證與隨機產生密度矩陣、純態、
非相干態與區塊對角直和。

所有隨機產生器都以明確的 64 位元種子建立 numpy.random.Generator(PCG64)，
同一種子在任何平台上產生相同結果。
"""

import logging

import numpy as np
import scipy.linalg

from src.core.errors import (
    DimensionMismatch,
    InvalidDimension,
    InvalidRank,
    InvalidState,
    InvalidWeights,
)

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-9
NEGATIVE_EIG_TOL = 1e-10
TRACE_TOL = 1e-9
NORM_TOL = 1e-10
PROB_SUM_TOL = 1e-10
SEED_LIMIT = 2 ** 64


def make_rng(seed):
    """依種子建立可攜式亂數產生器

    參數:
        seed (int): 0 ≤ seed < 2^64

    返回:
        numpy.random.Generator: PCG64 產生器
    """
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"種子必須是 64 位元無號整數，收到 {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


def _check_dim(d):
    if int(d) != d or d < 1:
        raise InvalidDimension(f"維度必須是正整數，收到 {d}")
    return int(d)


class DensityMatrix:
    """密度矩陣 ρ：Hermitian、半正定、跡為 1

    建構後不可變，可在並行呼叫者之間共享。
    """

    def __init__(self, mat, validate=True):
        """初始化密度矩陣

        參數:
            mat (array_like): dim×dim 複數矩陣
            validate (bool): 是否檢查不變量
        """
        arr = np.asarray(mat, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidState(f"密度矩陣必須是非空方陣，收到形狀 {arr.shape}")
        if validate:
            self._validate(arr)
        self._mat = _frozen(arr)

    @staticmethod
    def _validate(arr):
        asym = np.max(np.abs(arr - arr.conj().T))
        if asym > HERMITIAN_TOL:
            raise InvalidState(f"密度矩陣非 Hermitian，max|ρ - ρ†| = {asym:.3e}")
        eigenvalues = scipy.linalg.eigvalsh((arr + arr.conj().T) / 2)
        if eigenvalues[0] < -NEGATIVE_EIG_TOL:
            raise InvalidState(f"密度矩陣非半正定，最小本徵值 {eigenvalues[0]:.3e}")
        trace = np.real(np.trace(arr))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidState(f"密度矩陣的跡必須為 1，收到 {trace:.12f}")

    @property
    def mat(self):
        return self._mat

    @property
    def dim(self):
        return self._mat.shape[0]

    def is_diagonal(self, tol=1e-12):
        """是否為非相干態（非對角元素的絕對值都 ≤ tol）"""
        off = self._mat - np.diag(np.diag(self._mat))
        return bool(np.max(np.abs(off), initial=0.0) <= tol)

    def off_diagonal_mass(self):
        """Σ_{j≠k} |ρ_jk|"""
        return float(np.sum(np.abs(self._mat)) - np.sum(np.abs(np.diag(self._mat))))

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class PureState:
    """純態 |ψ⟩，以振幅向量儲存"""

    def __init__(self, amplitudes, validate=True):
        arr = np.asarray(amplitudes, dtype=complex)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidState(f"純態必須是非空向量，收到形狀 {arr.shape}")
        if validate:
            norm = np.linalg.norm(arr)
            if abs(norm - 1.0) > NORM_TOL:
                raise InvalidState(f"純態必須歸一化，|ψ| = {norm:.12f}")
        self._amplitudes = _frozen(arr)

    @property
    def amplitudes(self):
        return self._amplitudes

    @property
    def dim(self):
        return self._amplitudes.size

    def to_density(self):
        """轉換為秩 1 密度矩陣 |ψ⟩⟨ψ|"""
        return DensityMatrix(np.outer(self._amplitudes, self._amplitudes.conj()))

    def __repr__(self):
        return f"PureState(dim={self.dim})"


class ProbVector:
    """機率向量，代表非相干態 σ = Σ_j σ_j|j⟩⟨j|"""

    def __init__(self, probs, validate=True):
        arr = np.asarray(probs, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidState(f"機率向量必須是非空一維陣列，收到形狀 {arr.shape}")
        if validate:
            if not np.all(np.isfinite(arr)) or np.min(arr) < 0.0:
                raise InvalidState("機率向量的分量必須為非負有限值")
            total = float(np.sum(arr))
            if abs(total - 1.0) > PROB_SUM_TOL:
                raise InvalidState(f"機率向量總和必須為 1，收到 {total:.12f}")
        self._probs = _frozen(arr)

    @property
    def probs(self):
        return self._probs

    @property
    def dim(self):
        return self._probs.size

    def to_density(self):
        """嵌入為對角密度矩陣"""
        return DensityMatrix(np.diag(self._probs.astype(complex)))

    def __repr__(self):
        return f"ProbVector({np.array2string(self._probs, precision=6)})"


def to_density(state):
    """把 PureState / ProbVector / DensityMatrix 統一轉為 DensityMatrix"""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, (PureState, ProbVector)):
        return state.to_density()
    return DensityMatrix(state)


def random_pure(d, seed):
    """Haar 隨機純態（複標準常態分量後歸一化）

    參數:
        d (int): 維度
        seed (int): 種子

    返回:
        PureState: 隨機純態
    """
    d = _check_dim(d)
    rng = make_rng(seed)
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(vec / np.linalg.norm(vec))


def random_density(d, rank, seed):
    """Ginibre 隨機密度矩陣 ρ = GG†/tr(GG†)，G 為 d×rank 複常態矩陣

    參數:
        d (int): 維度
        rank (int): 秩（1 ≤ rank ≤ d）
        seed (int): 種子

    返回:
        DensityMatrix: 隨機密度矩陣
    """
    d = _check_dim(d)
    if int(rank) != rank or not 1 <= rank <= d:
        raise InvalidRank(f"秩必須介於 1 與 {d} 之間，收到 {rank}")
    rng = make_rng(seed)
    g = rng.standard_normal((d, int(rank))) + 1j * rng.standard_normal((d, int(rank)))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.real(np.trace(rho)))


def random_probs(d, seed):
    """單形上均勻（Dirichlet(1,…,1)）的機率向量"""
    d = _check_dim(d)
    rng = make_rng(seed)
    return ProbVector(rng.dirichlet(np.ones(d)))


def random_diagonal(d, seed):
    """隨機非相干態"""
    return random_probs(d, seed).to_density()


def dephase(rho):
    """完全去相位：取出對角線 (⟨j|ρ|j⟩)_j

    參數:
        rho: 密度矩陣

    返回:
        ProbVector: 對角機率向量
    """
    rho = to_density(rho)
    diag = np.clip(np.real(np.diag(rho.mat)), 0.0, None)
    return ProbVector(diag / np.sum(diag))


def incoherent_state(probs):
    """由機率向量建立對角密度矩陣"""
    return ProbVector(probs).to_density()


def block_direct_sum(p1, rho1, p2, rho2):
    """區塊對角直和 p1ρ1 ⊕ p2ρ2

    參考基底排序為（區塊 1 的指標，接著區塊 2 的指標），非對角區塊恰為 0。

    參數:
        p1 (float): 區塊 1 權重
        rho1: 區塊 1 密度矩陣
        p2 (float): 區塊 2 權重
        rho2: 區塊 2 密度矩陣

    返回:
        DensityMatrix: (d1+d2) 維區塊對角密度矩陣
    """
    if not (p1 > 0 and p2 > 0 and abs(p1 + p2 - 1.0) <= PROB_SUM_TOL):
        raise InvalidWeights(f"權重必須為正且總和為 1，收到 p1={p1}, p2={p2}")
    a = to_density(rho1).mat
    b = to_density(rho2).mat
    d1, d2 = a.shape[0], b.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    out[:d1, :d1] = p1 * a
    out[d1:, d1:] = p2 * b
    return DensityMatrix(out)


def maximally_coherent(d):
    """最大相干態，振幅皆為 1/√d"""
    d = _check_dim(d)
    return PureState(np.full(d, 1.0 / np.sqrt(d), dtype=complex))


def basis_state(d, j):
    """參考基底向量 |j⟩（j 由 0 起算）"""
    d = _check_dim(d)
    if not 0 <= j < d:
        raise InvalidDimension(f"基底指標 {j} 超出 0..{d - 1}")
    vec = np.zeros(d, dtype=complex)
    vec[j] = 1.0
    return PureState(vec)


def mix(weights, states):
    """凸組合 Σ_n p_n ρ_n

    參數:
        weights (list): 機率權重
        states (list): 同維度的態

    返回:
        DensityMatrix: 混合態
    """
    weights = ProbVector(weights).probs
    mats = [to_density(s).mat for s in states]
    if len(mats) != weights.size:
        raise DimensionMismatch("權重數量與態的數量不一致")
    if len({m.shape for m in mats}) != 1:
        raise DimensionMismatch("混合的態必須同維度")
    out = sum(w * m for w, m in zip(weights, mats))
    return DensityMatrix(out)


def permute_basis(rho, perm):
    """同時置換參考基底：ρ ↦ PρP†，其中 P|j⟩ = |perm[j]⟩"""
    mat = to_density(rho).mat
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(mat.shape[0])):
        raise DimensionMismatch(f"{perm.tolist()} 不是 0..{mat.shape[0] - 1} 的置換")
    out = np.empty_like(mat)
    out[np.ix_(perm, perm)] = mat
    return DensityMatrix(out)


def spawn_seeds(seed, n):
    """由根種子確定性地分出 n 個 64 位元子種子（每個試驗一個）"""
    children = np.random.SeedSequence(int(seed)).spawn(int(n))
    return [int(child.generate_state(1, np.uint64)[0]) for child in children]


def split_seed(seed, k):
    """把單一試驗種子展開為 k 個獨立子種子"""
    return [int(s) for s in np.random.SeedSequence(int(seed)).generate_state(k, np.uint64)]
