#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 例外類型

所有函式庫錯誤都繼承自 CoherenceError，命令列前端統一以退出碼 2 回報。
"""


class CoherenceError(ValueError):
    """工具箱所有輸入/前置條件錯誤的基底類別"""


class NotHermitian(CoherenceError):
    """矩陣不是 Hermitian（max|M - M†| 超過容差）"""


class NotPSD(CoherenceError):
    """矩陣含有明顯為負的本徵值"""


class DimensionMismatch(CoherenceError):
    """兩個物件的維度不一致"""


class InvalidState(CoherenceError):
    """密度矩陣、純態或機率向量未通過不變量檢查"""


class AlphaOutOfRange(CoherenceError):
    """Rényi 階數 α 不在所屬區段的有效範圍內"""


class SupportViolation(CoherenceError):
    """α > 1 時不滿足支撐條件 supp(ρ) ⊆ supp(σ)"""


class InvalidDimension(CoherenceError):
    """維度必須為正整數"""


class InvalidRank(CoherenceError):
    """秩必須介於 1 與維度之間"""


class InvalidWeights(CoherenceError):
    """權重必須為正且總和為 1"""


class NonFiniteObjective(CoherenceError):
    """目標函數在單形內部回傳 NaN 或無窮大"""


class UnknownMeasure(CoherenceError):
    """沒有這個名稱的度量"""


class InvalidConfig(CoherenceError):
    """最佳化器設定不合法"""


class DimensionTooLarge(CoherenceError):
    """格點搜尋的維度超過上限"""


class DimensionTooSmall(CoherenceError):
    """構造需要更高的維度"""


class NonPositiveT(CoherenceError):
    """Hölder 兩區塊聚合要求 t1, t2 > 0"""


class NonPositiveEntry(CoherenceError):
    """Hölder 檢查要求所有分量為正"""


class NotQubit(CoherenceError):
    """僅適用於二維（qubit）態"""


class InvalidChannel(CoherenceError):
    """Kraus 集合不完備，或標記為非相干卻不符合結構"""


class ConditionsViolated(CoherenceError):
    """純量函數 f 不滿足定理所需的條件"""


class StateFileError(CoherenceError):
    """態/通道檔案無法讀取或解析

    參數:
        message (str): 錯誤說明
        path (str, 可選): 檔案路徑
        line (int, 可選): 行號
        column (int, 可選): 欄號
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
                if column is not None:
                    location += f":{column}"
            location += ": "
        super().__init__(f"{location}{message}")
