"""Size caps guarding every enumeration.

Defaults can be overridden with the ``OPTIKIT_CAPS`` environment variable,
either as JSON (``{"reps": 100000}``) or as ``key=value`` pairs separated by
commas (``reps=100000,funlist=3``).
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from .errors import Overflow


@dataclass(frozen=True)
class Caps:
    carrier: int = 10**6      # largest materialised carrier or hom-set
    reps: int = 3 * 10**6     # representatives in one quotient table
    edges: int = 4 * 10**7    # generating relation instances per build
    funlist: int = 4          # longest FunList branch
    universe: int = 2         # largest generic object in a profunctor universe
    onthenose: int = 64       # rewrite budget of the on-the-nose search

    def replace(self, **kw: int) -> "Caps":
        return dataclasses.replace(self, **kw)


def parse_caps(text: str) -> dict[str, int]:
    text = text.strip()
    if not text:
        return {}
    if text.startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for item in text.split(","):
            key, _, value = item.partition("=")
            raw[key.strip()] = value.strip()
    known = {f.name for f in dataclasses.fields(Caps)}
    out = {}
    for key, value in raw.items():
        if key not in known:
            raise ValueError(f"unknown cap {key!r}")
        out[key] = int(value)
    return out


def default_caps() -> Caps:
    return Caps(**parse_caps(os.environ.get("OPTIKIT_CAPS", "")))


def check_cap(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise Overflow(f"{what} of size {value} exceeds cap {cap}")
