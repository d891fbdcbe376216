# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import os
import sys
import logging
from dotenv import dotenv_values
from . import paths as PATHS


"""
Environment file
"""
ENV = dotenv_values(os.path.join(PATHS.PACKAGE_PATH, ".env"))


def get_setting(key: str, default: str = None) -> str:
    """
    Function for reading a setting, the process environment takes precedence over the environment file.
    :param key: Setting key.
    :param default: Default value if the key is set nowhere.
    :return: Setting value.
    """
    value = os.environ.get(key)
    if value is None:
        value = ENV.get(key)
    return default if value is None else value


"""
Logger
"""
LOGGER = logging.getLogger("KINETICWALLS")
if not LOGGER.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(
        "%(asctime)s [%(levelname)s] %(message)s"))
    LOGGER.addHandler(_handler)
    LOGGER.propagate = False
LOGGER.setLevel(level=get_setting("KW_LOG_LEVEL", "INFO").upper())
SHOW_PROGRESS = get_setting("KW_PROGRESS", "1") not in ["0", "false", "False"]


"""
Simulation defaults
"""
VERSION = "0.3.0"
OUTPUT_ROOT = get_setting("KW_OUT_DIR", PATHS.OUTPUT_PATH)
DEFAULT_BLOCK_SIZE = 4096
DEFAULT_V_MAX = 6.0
SPEED_FLOOR = 1e-12
GRAZING_TOLERANCE = 1e-10
