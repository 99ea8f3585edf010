"""Shipped experiment presets: instances, weights, and run settings."""

from __future__ import annotations

import json
from importlib import resources

from .errors import DomainError
from .instances import load_instance_dict

PRESETS = {
    "ossp224": "ossp224.json",
    "ossp133": "ossp133.json",
    "ossp133-restricted": "ossp133_restricted.json",
}


def list_presets() -> list[str]:
    return sorted(PRESETS)


def load_preset(name: str) -> dict:
    """Raw preset document: instance fields plus a 'run' block."""
    try:
        fname = PRESETS[name]
    except KeyError:
        raise DomainError(
            f"unknown preset {name!r}; available: {', '.join(list_presets())}"
        ) from None
    text = resources.files("ossvqa").joinpath("data", fname).read_text("utf-8")
    return json.loads(text)


def resolve_preset(name: str):
    """Return (instance, objective, run settings) for a named preset."""
    doc = load_preset(name)
    instance, objective = load_instance_dict(doc)
    return instance, objective, doc.get("run", {})
