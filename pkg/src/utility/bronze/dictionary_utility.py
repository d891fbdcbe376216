# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2020-2023 Alexander Hering        *
****************************************************
"""
import copy
import json
from typing import Any, List


def set_and_extend_nested_field(data: dict, key_list: list, value: Any) -> None:
    """
    Function for setting a nested dictionary value, creating missing levels.
    :param data: Dictionary to set field in.
    :param key_list: List of keys as path to target field.
    :param value: Value to set field to.
    """
    if len(key_list) == 1:
        data[key_list[0]] = value
    elif len(key_list) > 1:
        if not isinstance(data.get(key_list[0]), dict):
            data[key_list[0]] = {}
        set_and_extend_nested_field(data[key_list[0]], key_list[1:], value)


def parse_override(assignment: str) -> tuple:
    """
    Function for parsing a dotted override "a.b.c=value".
    The value is read as JSON and falls back to a plain string.
    :param assignment: Override text.
    :return: Key path and value.
    """
    if "=" not in assignment:
        raise ValueError(f"override '{assignment}' is not of the form key.path=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return [part for part in key.strip().split(".") if part], value


def apply_overrides(data: dict, assignments: List[str]) -> dict:
    """
    Function for applying dotted overrides to a copy of a nested dictionary.
    :param data: Nested dictionary.
    :param assignments: Override texts.
    :return: Updated copy.
    """
    updated = copy.deepcopy(data)
    for assignment in assignments:
        key_list, value = parse_override(assignment)
        set_and_extend_nested_field(updated, key_list, value)
    return updated


def without_keys(data: dict, field_paths: List[List[str]]) -> dict:
    """
    Function for copying a nested dictionary without the given field paths.
    :param data: Nested dictionary.
    :param field_paths: Field paths to drop.
    :return: Reduced copy.
    """
    reduced = copy.deepcopy(data)
    for path in field_paths:
        target = reduced
        for key in path[:-1]:
            target = target.get(key, {}) if isinstance(target, dict) else {}
        if isinstance(target, dict):
            target.pop(path[-1], None)
    return reduced
