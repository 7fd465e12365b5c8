"""JSON channel files.

Layout (``format_version`` "1")::

    {
      "format_version": "1",
      "dim": 2,
      "kraus": [[[[re, im], [re, im]], [[re, im], [re, im]]], ...],
      "metadata": {"name": "...", "seed": 0}
    }

Floats are written with ``repr``, the shortest decimal string that parses
back to the same double, so files round-trip bit-exactly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import KrausChannel

FORMAT_VERSION = "1"


class ChannelFileError(ValueError):
    """A channel file is malformed or does not match the schema."""


def channel_to_dict(channel: KrausChannel, metadata: Optional[dict] = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "dim": channel.dim,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in k]
            for k in channel.kraus
        ],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def dumps(channel: KrausChannel, metadata: Optional[dict] = None) -> str:
    return json.dumps(channel_to_dict(channel, metadata), indent=1) + "\n"


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ChannelFileError(f"{where}: expected a number, got {x!r}")
    return float(x)


def channel_from_dict(doc) -> KrausChannel:
    """Validate a parsed document and build the channel.

    Schema problems raise :class:`ChannelFileError`; a well-formed document
    whose numbers are not finite raises ``ValueError`` from the channel
    constructor.
    """
    if not isinstance(doc, dict):
        raise ChannelFileError("top level must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ChannelFileError(f"unsupported format_version {version!r}")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ChannelFileError(f"dim must be a positive integer, got {dim!r}")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise ChannelFileError("kraus must be a nonempty list")
    ops = []
    for idx, mat in enumerate(kraus):
        if not isinstance(mat, list) or len(mat) != dim:
            raise ChannelFileError(f"kraus[{idx}] must have {dim} rows")
        arr = np.empty((dim, dim), dtype=complex)
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != dim:
                raise ChannelFileError(f"kraus[{idx}][{i}] must have {dim} entries")
            for j, z in enumerate(row):
                if not isinstance(z, list) or len(z) != 2:
                    raise ChannelFileError(f"kraus[{idx}][{i}][{j}] must be a [re, im] pair")
                where = f"kraus[{idx}][{i}][{j}]"
                arr[i, j] = complex(_number(z[0], where), _number(z[1], where))
        ops.append(arr)
    meta = doc.get("metadata")
    if meta is not None and not isinstance(meta, dict):
        raise ChannelFileError("metadata must be an object")
    return KrausChannel(ops)


def loads(text: str) -> KrausChannel:
    try:
        doc = json.loads(text, parse_constant=lambda c: math.nan)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"invalid JSON: {exc}") from exc
    return channel_from_dict(doc)


def save_channel(path, channel: KrausChannel, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(dumps(channel, metadata))


def load_channel(path) -> KrausChannel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ChannelFileError(f"cannot read {path}: {exc}") from exc
    return loads(text)
