"""
相干度量工具箱
"""
