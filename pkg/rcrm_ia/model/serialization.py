#!/usr/bin/env python3

"""
Channel Serialization Module

This module handles saving channel realizations to JSON documents and
loading them back bit-exactly, so that a Monte-Carlo run can be replayed
on identical channels.
"""

import json
import logging
import os
from typing import Any, Dict, List

import numpy as np

from rcrm_ia.errors import InvalidConfig
from rcrm_ia.model.channels import ChannelSet
from rcrm_ia.schemas.system import ChannelKind

DUMP_SCHEMA = 1

logger = logging.getLogger(__name__)


def channels_to_json(ch: ChannelSet) -> Dict[str, Any]:
    """Convert a channel set to a JSON-ready document.

    Matrices are listed in row-major (k, l) order, each as rows of
    ``[re, im]`` pairs. Python floats serialize with ``repr`` precision, so
    the round trip is exact.
    """
    matrices = []
    for k in range(ch.K):
        for l in range(ch.K):
            H = ch.H[k, l]
            matrices.append([[[float(z.real), float(z.imag)] for z in row] for row in H])
    return {"K": ch.K, "M_r": ch.M_r, "M_t": ch.M_t, "kind": ch.kind.value, "matrices": matrices}


def channels_from_json(doc: Dict[str, Any]) -> ChannelSet:
    """Rebuild a channel set from :func:`channels_to_json` output.

    Raises:
        InvalidConfig: if the document is malformed.
    """
    try:
        K, M_r, M_t = int(doc["K"]), int(doc["M_r"]), int(doc["M_t"])
        pairs = np.asarray(doc["matrices"], dtype=float)
        if pairs.shape != (K * K, M_r, M_t, 2):
            raise ValueError(f"matrices have shape {pairs.shape}, expected {(K * K, M_r, M_t, 2)}")
        H = (pairs[..., 0] + 1j * pairs[..., 1]).reshape(K, K, M_r, M_t)
        return ChannelSet(H=H, kind=ChannelKind(doc["kind"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfig(f"malformed channel document: {exc}") from exc


def dump_channels(path: str, channel_sets: List[ChannelSet]) -> None:
    """Write the channels of every trial of a run to ``path``.

    Raises:
        OSError: if the file cannot be written; the message names the path.
    """
    doc = {"schema": DUMP_SCHEMA, "trials": [channels_to_json(ch) for ch in channel_sets]}
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(doc, f)
        logger.info("Saved %d channel realizations to %s", len(channel_sets), path)
    except OSError as exc:
        logger.error("Error saving channels to %s: %s", path, exc)
        raise OSError(f"cannot write channel dump {path}: {exc}") from exc


def load_channels(path: str) -> List[ChannelSet]:
    """Load a channel dump written by :func:`dump_channels`.

    Raises:
        FileNotFoundError: if ``path`` does not exist.
        InvalidConfig: if the file is not a valid dump.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"channel dump not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"channel dump {path} is not valid JSON: {exc}") from exc
    if doc.get("schema") != DUMP_SCHEMA:
        raise InvalidConfig(f"channel dump {path} has schema {doc.get('schema')}, expected {DUMP_SCHEMA}")
    channel_sets = [channels_from_json(t) for t in doc.get("trials", [])]
    logger.info("Loaded %d channel realizations from %s", len(channel_sets), path)
    return channel_sets
