"""Bundled desk-scale Turtle fixtures used by the tests and runnable demos.

An optional vendored-full mode is supported: point PROVALIGN_VENDORED_DIR at
a directory holding the real published ontologies and alignment files and
call vendored_path() to locate them; the bundled files remain the default.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Optional

from ..owl import OntologyModel, extract_axioms
from ..rdf import Graph
from ..turtle import parse_turtle

FIXTURE_NAMES = (
    "prov-mini.ttl",
    "bfo-mini.ttl",
    "cco-mini.ttl",
    "ro-mini.ttl",
    "align-paper.ttl",
    "align-counterexample.ttl",
    "align-plan-incoherent.ttl",
    "prov-tiny.ttl",
)

INSTANCE_NAMES = (
    "instances/fig7.ttl",
    "instances/fig9.ttl",
    "instances/fig10.ttl",
    "instances/fig11.ttl",
    "instances/fig12.ttl",
    "instances/example4.ttl",
    "instances/revision.ttl",
)

PROV_NS = "http://www.w3.org/ns/prov#"
OBO_NS = "http://purl.obolibrary.org/obo/"
CCO_NS = "https://www.commoncoreontologies.org/"

SOURCE_NAMESPACES = (PROV_NS,)
TARGET_NAMESPACES = (OBO_NS, CCO_NS)


def fixture_text(name: str) -> str:
    base = resources.files(__package__)
    return (base / name).read_text(encoding="utf-8")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__package__) / name))


def load_graph(name: str) -> Graph:
    return parse_turtle(fixture_text(name))


def load_model(name: str) -> OntologyModel:
    return extract_axioms(load_graph(name), source_label=name)


def vendored_path(name: str) -> Optional[Path]:
    root = os.environ.get("PROVALIGN_VENDORED_DIR")
    if not root:
        return None
    candidate = Path(root) / name
    return candidate if candidate.exists() else None
