#!/usr/bin/env python3

"""
Experiment File Loading Module

This module loads TOML experiment files into validated ``ExperimentSpec``
objects and applies command-line overrides to them.
"""

import logging
import os
import tomllib
from typing import Any, Dict

from pydantic import ValidationError

from rcrm_ia.errors import InvalidConfig
from rcrm_ia.schemas.experiment import ExperimentSpec

logger = logging.getLogger(__name__)


def parse_experiment(data: Dict[str, Any]) -> ExperimentSpec:
    """Validate a mapping into an ``ExperimentSpec``.

    Raises:
        InvalidConfig: listing every validation error.
    """
    try:
        return ExperimentSpec.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors())
        raise InvalidConfig(f"invalid experiment: {problems}") from exc


def load_experiment(path: str) -> ExperimentSpec:
    """Load an experiment file.

    Args:
        path (str): Path to a TOML experiment file with ``schema = 1``.

    Returns:
        ExperimentSpec: The validated experiment.

    Raises:
        FileNotFoundError: if ``path`` does not exist.
        InvalidConfig: if the file is not valid TOML or fails validation.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"experiment file not found: {path}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"{path} is not valid TOML: {exc}") from exc
    spec = parse_experiment(data)
    logger.info(f"Loaded experiment {spec.name!r} from {path}")
    return spec


def with_overrides(spec: ExperimentSpec, **overrides: Any) -> ExperimentSpec:
    """Copy of ``spec`` with the non-None overrides applied and revalidated."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    if not changes:
        return spec
    data = spec.model_dump()
    data["system"] = spec.system
    data["solver"] = spec.solver
    data.update(changes)
    return parse_experiment(data)
