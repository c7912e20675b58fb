#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 命令列入口
"""

import sys
import os

# 添加當前目錄到Python路徑
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.commands import main

if __name__ == '__main__':
    sys.exit(main())
