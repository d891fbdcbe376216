# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2020-2023 Alexander Hering        *
****************************************************
"""
import json
from typing import Any
import numpy as np


class NumpyEncoder(json.JSONEncoder):
    """
    Encoder for numpy scalars and arrays.
    """

    def default(self, obj: Any) -> Any:
        if isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, tuple):
            return list(obj)
        return super().default(obj)


def dumps(data: Any) -> str:
    """
    Function for encoding data with a stable key order.
    :param data: Data.
    :return: JSON text.
    """
    return json.dumps(data, indent=4, ensure_ascii=False, sort_keys=True, cls=NumpyEncoder)


def save(data: dict, path: str) -> None:
    """
    Function for saving dict data to path (UTF-8, sorted keys, LF line endings).
    :param data: Data as dictionary.
    :param path: Save path.
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as out_file:
        out_file.write(dumps(data))
        out_file.write("\n")


def load(path: str) -> dict:
    """
    Function for loading json data from path.
    :param path: Save path.
    :return: Dictionary containing data.
    """
    with open(path, 'r', encoding='utf-8') as in_file:
        return json.load(in_file)
