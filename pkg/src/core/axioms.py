#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 公理檢查

對任意度量回呼以隨機試驗檢查 C1–C5（非負與忠實、單調、強單調、凸性、
區塊對角可加性）與資料處理不等式，並提供線性化定理的構造性反例
以及 qubit 函數度量的檢查。

違反量一律為「超出容差的帶號最大超額」：≤ 0 表示通過。
每個試驗的種子由根種子確定性分出，失敗的試驗會連同態一併寫入日誌以便重播。
"""

import dataclasses
import enum
import logging
from typing import Callable, List, Optional

import numpy as np

from src.core.channels import (
    apply_channel,
    random_cptp_channel,
    random_incoherent_channel,
    selective_outcomes,
)
from src.core.entropy import as_alpha, Regime, data_processing_gap
from src.core.errors import ConditionsViolated, DimensionTooSmall
from src.core.states import (
    basis_state,
    block_direct_sum,
    make_rng,
    maximally_coherent,
    mix,
    random_density,
    random_diagonal,
    random_pure,
    spawn_seeds,
    split_seed,
)
from src.data.state_io import dumps_state

logger = logging.getLogger(__name__)

TOL_AXIOM = 5e-6
TOL_DPI = 1e-8
TOL_DIAGONAL = 1e-7
TOL_NONNEGATIVE = 1e-9
FAITHFUL_FLOOR = 1e-5
FAITHFUL_MASS = 1e-2
C5_MAX_DIM = 5
LINEARIZATION_GRID = np.round(np.arange(0.1, 1.0, 0.1), 10)


class Axiom(enum.Enum):
    C1 = 'C1'
    C2 = 'C2'
    C3 = 'C3'
    C4 = 'C4'
    C5 = 'C5'
    DPI = 'DPI'


@dataclasses.dataclass(frozen=True)
class MeasureFn:
    """待檢查的度量 ρ ↦ C(ρ)

    evaluate(rho, alpha) 回傳實數；alpha 固定為建構時給定的值。
    """
    evaluate: Callable
    name: str
    alpha: Optional[float] = None

    def __call__(self, rho):
        return float(self.evaluate(rho, self.alpha))


class ScalarFn:
    """純量函數 f: [0, ∞) → [0, ∞)，建構時檢查 f(0) = 0 且取樣點上 f ≥ 0"""

    SAMPLES = np.concatenate([np.linspace(0.0, 1.0, 201), [1.5, 2.0, 5.0]])

    def __init__(self, evaluate, name):
        self.evaluate = evaluate
        self.name = name
        values = np.array([float(evaluate(x)) for x in self.SAMPLES])
        if values[0] != 0.0:
            raise ConditionsViolated(f"{name}: 需要 f(0) = 0，收到 {values[0]}")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise ConditionsViolated(f"{name}: 取樣點上 f 必須為非負有限值")
        self._values = values

    def is_faithful_monotone(self):
        """f(x) > 0（x > 0）且非遞減，在取樣格點上檢查"""
        positive = np.all(self._values[1:] > 0.0)
        monotone = np.all(np.diff(self._values) >= -1e-12)
        return bool(positive and monotone)

    def __call__(self, x):
        return float(self.evaluate(max(float(x), 0.0)))


@dataclasses.dataclass(frozen=True)
class AxiomReport:
    """單一公理的檢查結果"""
    axiom: Axiom
    trials: int
    max_violation: float
    worst_case_seed: Optional[int]
    passed: bool
    measure: str = ''
    alpha: Optional[float] = None
    skipped: bool = False

    def as_row(self):
        return {
            'measure': self.measure,
            'alpha': self.alpha,
            'axiom': self.axiom.value,
            'trials': self.trials,
            'max_violation': self.max_violation,
            'worst_seed': self.worst_case_seed,
            'passed': self.passed,
            'skipped': self.skipped,
        }


@dataclasses.dataclass
class SuiteReport:
    """多個公理檢查的彙總

    conclusive 為 False 表示「沒找到違反」不能解讀為通過
    （對不滿足條件的函數度量做探測時）。
    """
    measure: str
    alpha: Optional[float]
    reports: List[AxiomReport]
    conclusive: bool = True

    @property
    def passed(self):
        return all(r.passed for r in self.reports if not r.skipped)

    @property
    def max_violation(self):
        active = [r.max_violation for r in self.reports if not r.skipped]
        return max(active) if active else float('-inf')

    @property
    def worst_case_seed(self):
        active = [r for r in self.reports if not r.skipped]
        if not active:
            return None
        return max(active, key=lambda r: r.max_violation).worst_case_seed

    def failing(self):
        return [r for r in self.reports if not r.skipped and not r.passed]


class _Tracker:
    """累積各試驗的帶號超額，保留最差的種子"""

    def __init__(self, axiom, m, tol):
        self.axiom = axiom
        self.m = m
        self.tol = tol
        self.worst = float('-inf')
        self.worst_seed = None
        self.trials = 0

    def record(self, seed, excess, states):
        violation = excess - self.tol
        self.trials += 1
        if violation > self.worst:
            self.worst, self.worst_seed = violation, seed
        if violation > 0:
            dumped = ' | '.join(dumps_state(s) for s in states)
            logger.error(
                f"{self.axiom.value} 違反: measure={self.m.name}, α={self.m.alpha}, "
                f"seed={seed}, 超額={excess:.6e}, 態={dumped}"
            )

    def report(self):
        passed = self.worst <= 0.0
        logger.info(
            f"{self.axiom.value} {self.m.name} (α={self.m.alpha}): {self.trials} 次試驗, "
            f"最大違反 {self.worst:.3e}, {'通過' if passed else '失敗'}"
        )
        return AxiomReport(
            axiom=self.axiom,
            trials=self.trials,
            max_violation=float(self.worst),
            worst_case_seed=self.worst_seed,
            passed=passed,
            measure=self.m.name,
            alpha=self.m.alpha,
        )


def _random_state(d, seed):
    """依種子隨機選擇純態或任意秩的混合態"""
    pick, state_seed = split_seed(seed, 2)
    rank = int(make_rng(pick).integers(1, d + 1))
    if rank == 1:
        return random_pure(d, state_seed).to_density()
    return random_density(d, rank, state_seed)


def check_c1(m, d, trials, seed):
    """C1：對角態上 |C| ≤ 1e-7，相干態上 C ≥ 0，明顯相干時 C ≥ 1e-5

    參數:
        m (MeasureFn): 度量
        d (int): 維度
        trials (int): 試驗次數
        seed (int): 根種子

    返回:
        AxiomReport: 檢查結果
    """
    tracker = _Tracker(Axiom.C1, m, 0.0)
    for trial_seed in spawn_seeds(seed, trials):
        s_diag, s_pure, s_mixed = split_seed(trial_seed, 3)
        diag = random_diagonal(d, s_diag)
        excess = abs(m(diag)) - TOL_DIAGONAL
        states = [diag]
        for rho in (random_pure(d, s_pure).to_density(), random_density(d, d, s_mixed)):
            value = m(rho)
            excess = max(excess, -TOL_NONNEGATIVE - value)
            if rho.off_diagonal_mass() > FAITHFUL_MASS:
                excess = max(excess, FAITHFUL_FLOOR - value)
            states.append(rho)
        tracker.record(trial_seed, excess, states)
    return tracker.report()


def check_c2(m, d, trials, seed, tol=TOL_AXIOM):
    """C2：非相干操作下 C(Φ(ρ)) ≤ C(ρ)"""
    tracker = _Tracker(Axiom.C2, m, tol)
    for trial_seed in spawn_seeds(seed, trials):
        s_state, s_kraus, s_channel = split_seed(trial_seed, 3)
        rho = _random_state(d, s_state)
        n_kraus = int(make_rng(s_kraus).integers(1, 4))
        channel = random_incoherent_channel(d, n_kraus, s_channel)
        excess = m(apply_channel(channel, rho)) - m(rho)
        tracker.record(trial_seed, excess, [rho])
    return tracker.report()


def check_c3(m, d, trials, seed, tol=TOL_AXIOM):
    """C3：逐結果平均 Σ_n p_n C(ρ_n) ≤ C(ρ)"""
    tracker = _Tracker(Axiom.C3, m, tol)
    for trial_seed in spawn_seeds(seed, trials):
        s_state, s_kraus, s_channel = split_seed(trial_seed, 3)
        rho = _random_state(d, s_state)
        n_kraus = int(make_rng(s_kraus).integers(1, 4))
        channel = random_incoherent_channel(d, n_kraus, s_channel)
        average = sum(o.probability * m(o.state) for o in selective_outcomes(channel, rho))
        tracker.record(trial_seed, average - m(rho), [rho])
    return tracker.report()


def convexity_excess(m, weights, states):
    """C(Σ p_n ρ_n) - Σ p_n C(ρ_n)，凸性要求其 ≤ 0"""
    mixture = mix(weights, states)
    return m(mixture) - float(sum(p * m(s) for p, s in zip(weights, states)))


def check_c4(m, d, trials, seed, tol=TOL_AXIOM):
    """C4：k ∈ {2, 3} 個態的 Dirichlet 權重混合不增加平均相干度"""
    tracker = _Tracker(Axiom.C4, m, tol)
    for trial_seed in spawn_seeds(seed, trials):
        s_mix, *s_states = split_seed(trial_seed, 4)
        rng = make_rng(s_mix)
        k = int(rng.integers(2, 4))
        weights = rng.dirichlet(np.ones(k))
        states = [_random_state(d, s) for s in s_states[:k]]
        tracker.record(trial_seed, convexity_excess(m, weights, states), states)
    return tracker.report()


def check_c5(m, trials, seed, tol=TOL_AXIOM, max_dim=C5_MAX_DIM):
    """C5：|C(p1ρ1 ⊕ p2ρ2) - p1C(ρ1) - p2C(ρ2)| ≤ tol

    直和在完整的 (d1 + d2) 維上重新最佳化，不經由兩區塊聚合公式。

    參數:
        m (MeasureFn): 度量
        trials (int): 試驗次數
        seed (int): 根種子
        tol (float): 容差
        max_dim (int): d1 + d2 的上限

    返回:
        AxiomReport: 檢查結果
    """
    if max_dim < 2:
        raise DimensionTooSmall(f"C5 需要 d1 + d2 ≥ 2，上限為 {max_dim}")
    tracker = _Tracker(Axiom.C5, m, tol)
    for trial_seed in spawn_seeds(seed, trials):
        s_shape, s1, s2 = split_seed(trial_seed, 3)
        rng = make_rng(s_shape)
        total = int(rng.integers(2, max_dim + 1))
        d1 = int(rng.integers(1, total))
        p1 = float(rng.uniform(0.05, 0.95))
        rho1 = _random_state(d1, s1)
        rho2 = _random_state(total - d1, s2)
        joint = block_direct_sum(p1, rho1, 1.0 - p1, rho2)
        excess = abs(m(joint) - p1 * m(rho1) - (1.0 - p1) * m(rho2))
        tracker.record(trial_seed, excess, [joint])
    return tracker.report()


def check_dpi(alpha, d, trials, seed, tol=TOL_DPI):
    """資料處理不等式 F_α(Φσ||Φρ) ≤ F_α(σ||ρ)，Φ 為隨機 CPTP 通道

    參數:
        alpha (float): ENTROPY 區段的 α
        d (int): 維度
        trials (int): 試驗次數
        seed (int): 根種子
        tol (float): 容差

    返回:
        AxiomReport: axiom 標記為 DPI
    """
    a = as_alpha(alpha, Regime.ENTROPY)
    label = MeasureFn(lambda rho, _a: 0.0, 'F_alpha', a.value)
    tracker = _Tracker(Axiom.DPI, label, tol)
    for trial_seed in spawn_seeds(seed, trials):
        s_sigma, s_rho, s_kraus, s_channel = split_seed(trial_seed, 4)
        sigma = random_density(d, d, s_sigma)
        rho = random_density(d, d, s_rho)
        n_kraus = int(make_rng(s_kraus).integers(1, 4))
        channel = random_cptp_channel(d, n_kraus, s_channel)
        gap = data_processing_gap(channel, sigma, rho, a)
        tracker.record(trial_seed, gap, [sigma, rho])
    return tracker.report()


def _skipped(axiom, m):
    return AxiomReport(axiom, 0, float('-inf'), None, True, m.name, m.alpha, skipped=True)


def run_suite(m, d, trials, seed, axioms=None, tol=TOL_AXIOM, c5_max_dim=C5_MAX_DIM):
    """依序執行多個公理檢查

    d < 3 時 C5 標記為略過（qubit 上的區塊對角可加性是平凡的）。

    參數:
        m (MeasureFn): 度量
        d (int): 維度
        trials (int): 每個公理的試驗次數
        seed (int): 根種子
        axioms (list, 可選): 要執行的公理，預設 C1–C5
        tol (float): C2–C5 的容差
        c5_max_dim (int): C5 的 d1 + d2 上限

    返回:
        SuiteReport: 彙總結果
    """
    axioms = [Axiom(a) for a in (axioms or [Axiom.C1, Axiom.C2, Axiom.C3, Axiom.C4, Axiom.C5])]
    reports = []
    for axiom in axioms:
        if axiom is Axiom.C1:
            reports.append(check_c1(m, d, trials, seed))
        elif axiom is Axiom.C2:
            reports.append(check_c2(m, d, trials, seed, tol))
        elif axiom is Axiom.C3:
            reports.append(check_c3(m, d, trials, seed, tol))
        elif axiom is Axiom.C4:
            reports.append(check_c4(m, d, trials, seed, tol))
        elif axiom is Axiom.C5:
            if d < 3:
                reports.append(_skipped(axiom, m))
            else:
                reports.append(check_c5(m, trials, seed, tol, c5_max_dim))
        else:
            reports.append(check_dpi(m.alpha, d, trials, seed))
    return SuiteReport(m.name, m.alpha, reports)


def linearization_counterexample(f, m, d):
    """對 ρ = p1ρ1 ⊕ p2ρ2（C(ρ1) = 0、C(ρ2) = μ > 0）檢查 f(p2μ) = p2 f(μ)

    ρ1 為 d-2 維的基底態，ρ2 為 |+⟩。違反量 > 0 表示 f∘C 不滿足 C5。

    參數:
        f (ScalarFn): 純量函數
        m (MeasureFn): 度量
        d (int): 總維度（≥ 3）

    返回:
        tuple: (最大違反量, 達到最大值的直和態)
    """
    if d < 3:
        raise DimensionTooSmall(f"線性化構造需要 d ≥ 3，收到 {d}")
    rho1 = basis_state(d - 2, 0).to_density()
    rho2 = maximally_coherent(2).to_density()
    f1, f2 = f(m(rho1)), f(m(rho2))

    violation, witness = -1.0, None
    for p2 in LINEARIZATION_GRID:
        p1 = 1.0 - p2
        rho = block_direct_sum(p1, rho1, p2, rho2)
        gap = abs(f(m(rho)) - p1 * f1 - p2 * f2)
        if gap > violation:
            violation, witness = gap, rho
    logger.info(f"線性化檢查 {f.name}∘{m.name}: 最大違反 {violation:.6e}")
    return float(violation), witness


def _compose(f, m):
    return MeasureFn(lambda rho, _a: f(m(rho)), f"{f.name}∘{m.name}", m.alpha)


QUBIT_AXIOMS = [Axiom.C1, Axiom.C2, Axiom.C3, Axiom.C4]


def qubit_function_measure(f, m, trials=200, seed=0, tol=TOL_AXIOM):
    """在 d = 2 上檢查 f∘C 的 C1–C4

    f 須滿足 f(x) > 0（x > 0）且非遞減，否則拋出 ConditionsViolated。
    這兩個條件不保證凸性，結果由實際試驗決定。

    參數:
        f (ScalarFn): 純量函數
        m (MeasureFn): qubit 上的度量
        trials (int): 每個公理的試驗次數
        seed (int): 根種子
        tol (float): 容差

    返回:
        SuiteReport: C1–C4 的彙總
    """
    if not f.is_faithful_monotone():
        raise ConditionsViolated(f"{f.name} 不滿足忠實性與單調性條件")
    return run_suite(_compose(f, m), 2, trials, seed, QUBIT_AXIOMS, tol)


def probe_function_measure(f, m, trials=200, seed=0, tol=TOL_AXIOM):
    """以不滿足條件的 f 探測 f∘C 的違反

    找到違反即為結論；沒找到時 conclusive = False，不視為通過。
    """
    suite = run_suite(_compose(f, m), 2, trials, seed, QUBIT_AXIOMS, tol)
    suite.conclusive = not suite.passed
    if suite.passed:
        logger.warning(f"{f.name}∘{m.name}: {trials} 次試驗未找到違反（不構成通過）")
    return suite


def as_measure_fn(named, alpha=None, **options):
    """把 measures 的 NamedMeasure 包成 MeasureFn"""
    if named.regime is not None:
        alpha = as_alpha(alpha, named.regime).value
    return MeasureFn(named.scalar(**options), named.name, alpha)
