"""
相干度量工具箱 - 檔案格式與報告
"""
