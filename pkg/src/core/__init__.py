"""
相干度量工具箱 - 核心模組
"""
