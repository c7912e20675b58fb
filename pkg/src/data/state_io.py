#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
相干度量工具箱 - 態與通道檔案

文字格式（JSON）：
    態:   {"dim": d, "matrix": [[[re, im], ...], ...]}
    純態: {"dim": d, "vector": [[re, im], ...]}
    通道: {"dim": d, "kraus": [matrix, ...], "incoherent": true}

浮點數以完整精度（repr）寫出，讀回後逐位元相同。
"""

import json
import logging
import os

import numpy as np

from src.core.channels import KrausSet
from src.core.errors import CoherenceError, StateFileError
from src.core.states import DensityMatrix, PureState, to_density

logger = logging.getLogger(__name__)


def _encode_entries(arr):
    return np.stack([np.real(arr), np.imag(arr)], axis=-1).tolist()


def _decode_entries(data, shape, field, path):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise StateFileError(f"欄位 {field} 含有非數值的元素", path) from None
    if arr.shape != shape + (2,):
        raise StateFileError(
            f"欄位 {field} 的形狀應為 {shape + (2,)}，收到 {arr.shape}", path
        )
    if not np.all(np.isfinite(arr)):
        raise StateFileError(f"欄位 {field} 含有非有限值", path)
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_document(text, path):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StateFileError(e.msg, path, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise StateFileError("檔案頂層必須是物件", path, 1, 1)
    dim = doc.get('dim')
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise StateFileError(f"dim 必須是正整數，收到 {dim!r}", path)
    return doc, dim


def parse_state(text, path=None):
    """解析態的文字表示

    參數:
        text (str): 檔案內容
        path (str, 可選): 錯誤訊息中使用的路徑

    返回:
        DensityMatrix 或 PureState: 態
    """
    doc, dim = _parse_document(text, path)
    has_matrix, has_vector = 'matrix' in doc, 'vector' in doc
    if has_matrix == has_vector:
        raise StateFileError("必須恰好提供 matrix 或 vector 其中之一", path)
    try:
        if has_matrix:
            return DensityMatrix(_decode_entries(doc['matrix'], (dim, dim), 'matrix', path))
        return PureState(_decode_entries(doc['vector'], (dim,), 'vector', path))
    except StateFileError:
        raise
    except CoherenceError as e:
        raise StateFileError(str(e), path) from e


def dumps_state(state):
    """態的文字表示（單行，供日誌重播）"""
    if isinstance(state, PureState):
        doc = {'dim': state.dim, 'vector': _encode_entries(state.amplitudes)}
    else:
        rho = to_density(state)
        doc = {'dim': rho.dim, 'matrix': _encode_entries(rho.mat)}
    return json.dumps(doc)


def load_state(path):
    """讀取態檔案

    參數:
        path (str): 檔案路徑

    返回:
        DensityMatrix 或 PureState: 態
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise StateFileError(f"無法讀取檔案: {e.strerror}", path) from None
    state = parse_state(text, path)
    logger.debug(f"讀取態檔案 {path}: {state!r}")
    return state


def _write(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
        f.write('\n')


def save_state(path, state):
    """寫出態檔案"""
    _write(path, dumps_state(state))
    logger.info(f"態已寫入 {path}")
    return path


def parse_channel(text, path=None):
    """解析通道的文字表示；incoherent 旗標由 KrausSet 重新驗證"""
    doc, dim = _parse_document(text, path)
    ops = doc.get('kraus')
    if not isinstance(ops, list) or not ops:
        raise StateFileError("kraus 必須是非空的矩陣陣列", path)
    incoherent = doc.get('incoherent', False)
    if not isinstance(incoherent, bool):
        raise StateFileError(f"incoherent 必須是布林值，收到 {incoherent!r}", path)
    mats = [_decode_entries(op, (dim, dim), f'kraus[{n}]', path) for n, op in enumerate(ops)]
    try:
        return KrausSet(mats, incoherent=incoherent)
    except CoherenceError as e:
        raise StateFileError(str(e), path) from e


def load_channel(path):
    """讀取通道檔案"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise StateFileError(f"無法讀取檔案: {e.strerror}", path) from None
    return parse_channel(text, path)


def save_channel(path, channel):
    """寫出通道檔案"""
    doc = {
        'dim': channel.dim_in,
        'kraus': [_encode_entries(k) for k in channel.kraus],
        'incoherent': channel.incoherent,
    }
    _write(path, json.dumps(doc))
    logger.info(f"通道已寫入 {path}")
    return path
