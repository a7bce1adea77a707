"""Bundled graph fixtures (the worked examples plus a few small graphs)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graph import FeynGraph, parse_graph

FIXTURES = (
    "fig1",
    "fig2",
    "fig3-G",
    "fig3-Gprime",
    "bubble",
    "bubble-massive",
    "triangle",
    "path3",
    "two-triangles",
    "box",
)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("symforge") / "data" / f"{name}.graph"))


def load_fixture(name: str) -> FeynGraph:
    path = fixture_path(name)
    return parse_graph(path.read_text(encoding="utf-8"), source=path.name)
