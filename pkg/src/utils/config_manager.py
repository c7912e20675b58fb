#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 配置管理器
"""

import copy
import os
import json
import yaml
import logging

DEFAULT_CONFIG = {
    'optimizer': {
        'max_iters': 5000,
        'tol': 1e-9,
        'restarts': 4,
        'interior_floor': 1e-9,
        'step_rule': 'backtracking',
        'initial_step': 1.0
    },
    'grid': {
        'resolution_d2': 10000,
        'resolution_d3': 200,
        'resolution_d4': 40
    },
    'axioms': {
        'tol_axiom': 5e-6,
        'trials': 200,
        'c5_max_dim': 5
    },
    'sweep': {
        'max_workers': 4
    },
    'output': {
        'directory': 'output',
        'float_format': '%.17g'
    },
    'system': {
        'log_level': 'INFO',
        'log_dir': 'logs'
    }
}


class ConfigManager:
    """配置管理器類

    負責加載和管理系統配置，包括最佳化器參數、格點解析度、公理檢查與輸出設置。
    配置文件缺少的章節或欄位以默認值補齊。
    """

    def __init__(self, config_path=None):
        """初始化配置管理器

        參數:
            config_path (str, 可選): 配置文件路徑，默認為'config.yaml'
        """
        self.config_path = config_path or os.path.join(os.getcwd(), 'config.yaml')
        self.logger = logging.getLogger(__name__)
        self.config = self.load_config()

    def load_config(self):
        """加載配置文件

        返回:
            dict: 配置字典
        """
        if not os.path.exists(self.config_path):
            self.logger.warning(f"找不到配置文件 {self.config_path}，使用默認配置")
            return self._create_default_config()

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                if self.config_path.endswith('.yaml') or self.config_path.endswith('.yml'):
                    loaded = yaml.safe_load(f)
                else:
                    loaded = json.load(f)
        except (OSError, ValueError, yaml.YAMLError) as e:
            self.logger.error(f"讀取配置文件時出錯: {e}")
            return self._create_default_config()
        return self._merge_defaults(loaded or {})

    def _create_default_config(self):
        """創建默認配置"""
        return copy.deepcopy(DEFAULT_CONFIG)

    def _merge_defaults(self, loaded):
        config = self._create_default_config()
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(config.get(section), dict):
                config[section].update(values)
            else:
                config[section] = values
        return config

    # 獲取配置的便捷方法
    def get_optimizer_settings(self):
        """獲取最佳化器設置"""
        return self.config.get('optimizer', {})

    def get_grid_settings(self):
        """獲取格點搜尋設置"""
        return self.config.get('grid', {})

    def get_grid_resolution(self, dim):
        """依維度取得格點解析度，沒有設定的維度回傳 None"""
        return self.get_grid_settings().get(f'resolution_d{dim}')

    def get_axiom_settings(self):
        """獲取公理檢查設置"""
        return self.config.get('axioms', {})

    def get_sweep_settings(self):
        """獲取掃描設置"""
        return self.config.get('sweep', {})

    def get_output_settings(self):
        """獲取輸出設置"""
        return self.config.get('output', {})

    def get_system_settings(self):
        """獲取系統設置"""
        return self.config.get('system', {})
