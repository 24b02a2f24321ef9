"""Bundled example algebras in the JSON input format.

``k``, ``k_x_k``, ``dual_numbers``, ``exterior`` (one generator in degree
-1), ``upper_triangular`` (2×2), ``truncated_poly`` (k[t]/t³) and
``massey_dga`` (a DG path algebra with a nonvanishing triple Massey
product).
"""

from __future__ import annotations

import json
from importlib import resources

NAMES = ("k", "k_x_k", "dual_numbers", "exterior", "upper_triangular", "truncated_poly", "massey_dga")


def path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.json")


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def data(name: str) -> dict:
    return json.loads(text(name))
