"""
共用的測試設定與 fixture
"""

import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from src.core.simplexopt import OptimizerConfig
from src.core.states import mix, random_density


@pytest.fixture
def fast_cfg():
    """較少重啟次數的最佳化設定"""
    return OptimizerConfig(restarts=2)


@pytest.fixture
def conditioned_state():
    """條件良好的混合態 0.7·ρ_rand + 0.3·I/d"""
    def build(d, seed, weight=0.7):
        return mix([weight, 1.0 - weight], [random_density(d, d, seed), np.eye(d) / d])
    return build


@pytest.fixture
def plus_state():
    return np.full((2, 2), 0.5, dtype=complex)


@pytest.fixture
def restore_root_logger():
    """setup_logging 會替換根日誌器的處理器，測試後還原"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)
