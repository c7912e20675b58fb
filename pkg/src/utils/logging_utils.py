#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 日誌工具
"""

import os
import sys
import logging
import logging.handlers
from datetime import datetime

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def parse_level(level):
    """把 'INFO' 之類的名稱或整數轉為 logging 級別"""
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).upper())
    if not isinstance(value, int):
        raise ValueError(f"未知的日誌級別: {level}")
    return value


def setup_logging(log_dir='logs', log_level=logging.INFO, console_level=logging.INFO):
    """設置日誌系統

    控制台輸出寫到 stderr，stdout 保留給 CSV 報告。

    參數:
        log_dir (str): 日誌目錄，None 表示不寫日誌文件
        log_level (int): 文件日誌級別
        console_level (int): 控制台日誌級別
    """
    log_level = parse_level(log_level)
    console_level = parse_level(console_level)

    # 獲取根日誌器
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)

    # 清除現有處理器
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_dir is not None:
        os.makedirs(log_dir, exist_ok=True)
        today = datetime.now().strftime('%Y-%m-%d')
        log_file = os.path.join(log_dir, f'app_{today}.log')

        file_handler = logging.handlers.TimedRotatingFileHandler(
            log_file, when='midnight', interval=1, backupCount=30, encoding='utf-8'
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logging.debug("日誌系統已設置")
    return logger
