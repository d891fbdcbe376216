# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Any, List


class GeometryException(Exception):
    """
    GeometryException class.
    """

    def __init__(self, shape: str, point: Any = None, message: str = "invalid geometric query") -> None:
        """
        Initiation method.
        :param shape: Shape descriptor of the domain.
        :param point: Offending point, if any.
        :param message: Message to include in exception.
        """
        self.shape = shape
        self.point = point
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.point} on {self.shape}"


class WallParameterException(Exception):
    """
    WallParameterException class.
    """

    def __init__(self, parameter: str, value: Any, message: str = "wall parameter out of range") -> None:
        """
        Initiation method.
        :param parameter: Parameter name.
        :param value: Rejected value.
        :param message: Message to include in exception.
        """
        self.parameter = parameter
        self.value = value
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.parameter} = {self.value}"


class CollisionModelException(Exception):
    """
    CollisionModelException class.
    """

    def __init__(self, model: str, message: str = "invalid collision model") -> None:
        """
        Initiation method.
        :param model: Collision model or rate field descriptor.
        :param message: Message to include in exception.
        """
        self.model = model
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.model}"


class GridMismatchException(Exception):
    """
    GridMismatchException class.
    """

    def __init__(self, first: Any, second: Any, message: str = "fields live on different grids") -> None:
        """
        Initiation method.
        :param first: Descriptor of the first grid.
        :param second: Descriptor of the second grid.
        :param message: Message to include in exception.
        """
        self.first = first
        self.second = second
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.first} vs {self.second}"


class RateFitException(Exception):
    """
    RateFitException class.
    """

    def __init__(self, mode: str, usable_points: int, message: str = "not enough usable points for rate fit") -> None:
        """
        Initiation method.
        :param mode: Fit mode.
        :param usable_points: Number of points left after windowing and floor exclusion.
        :param message: Message to include in exception.
        """
        self.mode = mode
        self.usable_points = usable_points
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.usable_points} points in {self.mode} mode"


class ExperimentException(Exception):
    """
    ExperimentException class.
    """

    def __init__(self, experiment: str, message: str = "experiment precondition violated") -> None:
        """
        Initiation method.
        :param experiment: Experiment name.
        :param message: Message to include in exception.
        """
        self.experiment = experiment
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.experiment}"


class ConfigurationException(Exception):
    """
    ConfigurationException class.
    """

    def __init__(self, violations: List[str], source: str = None, message: str = "invalid run configuration") -> None:
        """
        Initiation method.
        :param violations: All collected constraint violations.
        :param source: Configuration source, usually a file path.
        :param message: Message to include in exception.
        """
        self.violations = list(violations)
        self.source = source
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        listing = "\n".join(f"  - {violation}" for violation in self.violations)
        return f"{self.message} : {self.source}\n{listing}"
