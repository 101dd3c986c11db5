"""Bundled example instances and the matches reported for them."""
from __future__ import annotations

from importlib import resources

from .model import Instance, Match
from .textio import parse_instance, parse_match

INSTANCES = {
    "EX1": "ex1.txt",
    "EX1-STRICT": "ex1_strict.txt",
    "EX1-COARSE": "ex1_coarse.txt",
    "EX2": "ex2.txt",
}

MATCHES = {
    "GS": ("EX1", "ex1_gs.match"),
    "UC": ("EX1", "ex1_uc.match"),
    "RTZ": ("EX1", "ex1_rtz.match"),
    "DA": ("EX2", "ex2_da.match"),
}


def fixture_text(filename: str) -> str:
    return resources.files("unicore.fixtures").joinpath(filename).read_text(encoding="utf-8")


def load_instance(name: str) -> Instance:
    return parse_instance(fixture_text(INSTANCES[name]))


def load_match(name: str, inst: Instance | None = None) -> Match:
    """Named reference match; ``inst`` defaults to the instance it was reported for."""
    owner, filename = MATCHES[name]
    return parse_match(fixture_text(filename), inst or load_instance(owner))
