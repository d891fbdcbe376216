# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2022-2023 Alexander Hering        *
****************************************************
"""
import os
import shutil


def safely_create_path(path: str) -> None:
    """
    Function for safely creating folder path.
    :param path: Folder path to create.
    """
    if not os.path.exists(path):
        os.makedirs(path)


def safely_remove_path(path: str) -> None:
    """
    Function for removing a folder tree if it exists.
    :param path: Folder path to remove.
    """
    if os.path.isdir(path):
        shutil.rmtree(path)


def staging_path(target: str) -> str:
    """
    Function for deriving the staging folder of an output folder.
    :param target: Final output folder.
    :return: Staging folder next to the target.
    """
    target = os.path.abspath(target)
    return os.path.join(os.path.dirname(target), f".{os.path.basename(target)}.staging")


def promote_staging(staging: str, target: str) -> None:
    """
    Function for moving a finished staging folder into place, replacing an earlier output.
    :param staging: Staging folder.
    :param target: Final output folder.
    """
    safely_remove_path(target)
    safely_create_path(os.path.dirname(os.path.abspath(target)))
    os.replace(staging, target)
