#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 報告輸出

以 pandas DataFrame 組裝度量結果、公理報告與 α 掃描，輸出為 CSV。
所有浮點數以 %.17g 寫出，可完整往返。
"""

import io
import os
import logging

import pandas as pd

MEASURE_COLUMNS = ['measure', 'alpha', 'value', 'converged', 'restarts_agreeing', 'method']
AXIOM_COLUMNS = ['measure', 'alpha', 'axiom', 'trials', 'max_violation', 'worst_seed', 'passed', 'skipped']
SWEEP_COLUMNS = ['state_id', 'measure', 'alpha', 'value', 'method', 'converged']


def _flag(value):
    return 'true' if value else 'false'


class ReportWriter:
    """報告輸出器

    負責把計算結果整理為表格並寫成 CSV（文件或標準輸出）。
    """

    def __init__(self, float_format='%.17g', output_dir=None):
        """初始化報告輸出器

        參數:
            float_format (str): 浮點數格式
            output_dir (str, 可選): 相對路徑的輸出目錄
        """
        self.logger = logging.getLogger(__name__)
        self.float_format = float_format
        self.output_dir = output_dir

    def measure_frame(self, rows):
        """度量結果表

        參數:
            rows (list): (measure, alpha, MeasureResult) 列表

        返回:
            pandas.DataFrame: 度量結果
        """
        records = [
            {
                'measure': name,
                'alpha': alpha,
                'value': result.value,
                'converged': _flag(result.converged),
                'restarts_agreeing': result.restarts_agreeing,
                'method': result.method.value,
            }
            for name, alpha, result in rows
        ]
        return pd.DataFrame(records, columns=MEASURE_COLUMNS)

    def axiom_frame(self, reports):
        """公理報告表，種子以字串保存（64 位元整數不能轉成浮點數）"""
        records = []
        for report in reports:
            row = report.as_row()
            row['worst_seed'] = '' if row['worst_seed'] is None else str(row['worst_seed'])
            row['passed'] = _flag(row['passed'])
            row['skipped'] = _flag(row['skipped'])
            records.append(row)
        return pd.DataFrame(records, columns=AXIOM_COLUMNS)

    def sweep_frame(self, cells):
        """α 掃描表，行的順序即輸入順序

        參數:
            cells (list): dict 列表，鍵為 SWEEP_COLUMNS

        返回:
            pandas.DataFrame: 掃描結果
        """
        frame = pd.DataFrame(list(cells), columns=SWEEP_COLUMNS)
        frame['converged'] = frame['converged'].map(_flag)
        return frame

    def to_text(self, frame):
        """DataFrame 轉為 CSV 文字"""
        buffer = io.StringIO()
        frame.to_csv(
            buffer, index=False, float_format=self.float_format,
            na_rep='NaN', lineterminator='\n'
        )
        return buffer.getvalue()

    def write_csv(self, frame, path):
        """寫出 CSV 文件

        參數:
            frame (pandas.DataFrame): 表格
            path (str): 文件路徑（相對路徑放在 output_dir 下）

        返回:
            str: 實際寫入的路徑
        """
        if self.output_dir and not os.path.isabs(path) and not os.path.dirname(path):
            path = os.path.join(self.output_dir, path)
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(self.to_text(frame))
        self.logger.info(f"報告已寫入 {path}，共 {len(frame)} 行")
        return path
