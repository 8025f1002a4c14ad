"""RDF data model: terms, triples, graphs, prefix resolution, graph equality.

Terms come in three kinds (IRI, blank node, literal). Blank node identity is
scoped to the graph that minted it, so merging graphs never conflates labels.
Graphs are plain triple sets with a prefix map; they are built single-writer
and treated as immutable once loaded.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple
from urllib.parse import urljoin


class RdfError(Exception):
    """Base class for RDF model errors."""


class UnknownPrefixError(RdfError):
    """A prefixed name used a label that is not declared."""


class MissingBaseError(RdfError):
    """A relative IRI reference was used with no base IRI in effect."""


class IsomorphismLimitError(RdfError):
    """Blank-node matching exceeded the configured search bound."""


_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not _SCHEME_RE.match(self.value):
            raise RdfError(f"IRI is not absolute: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    node_id: str
    scope: int

    def __repr__(self) -> str:
        return f"_:{self.node_id}"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.language is not None:
            raise RdfError("literal cannot carry both a datatype and a language tag")

    def __repr__(self) -> str:
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


Term = Iri | BlankNode | Literal

_IRI_CACHE: Dict[str, Iri] = {}


def iri(value: str) -> Iri:
    """Interned IRI constructor; repeated calls return the same object."""
    cached = _IRI_CACHE.get(value)
    if cached is None:
        cached = Iri(value)
        _IRI_CACHE[value] = cached
    return cached


_scope_counter = itertools.count(1)


def new_scope() -> int:
    """Allocate a fresh blank-node scope (one per graph/document)."""
    return next(_scope_counter)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, Iri):
            raise RdfError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if isinstance(self.subject, Literal):
            raise RdfError("triple subject cannot be a literal")

    def terms(self) -> Tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)


def term_sort_key(t: Term) -> Tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, BlankNode):
        return (1, t.scope, t.node_id)
    return (2, t.lexical, t.datatype or "", t.language or "")


def triple_sort_key(t: Triple) -> Tuple:
    return (term_sort_key(t.subject), term_sort_key(t.predicate), term_sort_key(t.object))


class Graph:
    """A set of triples plus the prefix map and base recorded at parse time."""

    def __init__(self, prefixes: Optional[Dict[str, str]] = None, base: Optional[str] = None):
        self.triples: Set[Triple] = set()
        self.prefixes: Dict[str, str] = dict(prefixes or {})
        self.base: Optional[str] = base
        self._spo: Optional[Dict[Term, Dict[str, List[Term]]]] = None

    def add(self, t: Triple) -> None:
        self.triples.add(t)
        self._spo = None

    def add_triple(self, s: Term, p: Iri, o: Term) -> None:
        self.add(Triple(s, p, o))

    def bind(self, label: str, namespace: str) -> None:
        self.prefixes[label] = namespace

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self.triples

    def spo(self) -> Dict[Term, Dict[str, List[Term]]]:
        """Subject -> predicate IRI -> object list index, built on first use."""
        if self._spo is None:
            index: Dict[Term, Dict[str, List[Term]]] = {}
            for t in self.triples:
                index.setdefault(t.subject, {}).setdefault(t.predicate.value, []).append(t.object)
            for props in index.values():
                for objects in props.values():
                    objects.sort(key=term_sort_key)
            self._spo = index
        return self._spo

    def objects(self, subject: Term, predicate: str) -> List[Term]:
        return self.spo().get(subject, {}).get(predicate, [])

    def object(self, subject: Term, predicate: str) -> Optional[Term]:
        values = self.objects(subject, predicate)
        return values[0] if values else None

    def subjects_with(self, predicate: str, obj: Optional[Term] = None) -> List[Term]:
        found = [
            t.subject
            for t in self.triples
            if t.predicate.value == predicate and (obj is None or t.object == obj)
        ]
        found.sort(key=term_sort_key)
        return found

    def blank_nodes(self) -> Set[BlankNode]:
        nodes: Set[BlankNode] = set()
        for t in self.triples:
            for term in t.terms():
                if isinstance(term, BlankNode):
                    nodes.add(term)
        return nodes


def iri_resolve(prefixes: Dict[str, str], name: str, base: Optional[str] = None) -> Iri:
    """Resolve a prefixed name or IRI reference to an absolute IRI term.

    Bracketed references (``<...>``) resolve against ``base`` when relative;
    anything containing a colon is treated as a prefixed name whose label must
    be declared; bare names are relative references.
    """
    if name.startswith("<") and name.endswith(">"):
        ref = name[1:-1]
        if _SCHEME_RE.match(ref):
            return iri(ref)
        if base is None:
            raise MissingBaseError(f"relative IRI {ref!r} with no base")
        return iri(urljoin(base, ref))
    if ":" in name:
        label, local = name.split(":", 1)
        if label not in prefixes:
            raise UnknownPrefixError(f"unknown prefix {label!r} in {name!r}")
        return iri(prefixes[label] + local)
    if base is None:
        raise MissingBaseError(f"relative name {name!r} with no base")
    return iri(urljoin(base, name))


# ---------------------------------------------------------------------------
# Blank-node aware graph equality
# ---------------------------------------------------------------------------

def _ground(t: Triple) -> bool:
    return not any(isinstance(x, BlankNode) for x in t.terms())


def _term_key_fixed(t: Term) -> Tuple:
    # Used inside refinement signatures; blank nodes are represented by color.
    if isinstance(t, Iri):
        return ("i", t.value)
    return ("l", t.lexical, t.datatype or "", t.language or "")


def _refine_colors(triples: Set[Triple], nodes: List[BlankNode]) -> Dict[BlankNode, int]:
    """Iterative color refinement by incident-triple signatures."""
    colors: Dict[BlankNode, int] = {n: 0 for n in nodes}
    incident: Dict[BlankNode, List[Triple]] = {n: [] for n in nodes}
    for t in triples:
        for term in set(t.terms()):
            if isinstance(term, BlankNode):
                incident[term].append(t)
    while True:
        signatures = {}
        for n in nodes:
            sig = []
            for t in incident[n]:
                row = []
                for pos, term in zip("spo", t.terms()):
                    if term == n:
                        row.append((pos, "self"))
                    elif isinstance(term, BlankNode):
                        row.append((pos, "peer", colors[term]))
                    else:
                        row.append((pos, *_term_key_fixed(term)))
                sig.append(tuple(row))
            sig.sort()
            signatures[n] = (colors[n], tuple(sig))
        distinct = sorted(set(signatures.values()))
        remap = {s: i for i, s in enumerate(distinct)}
        new_colors = {n: remap[signatures[n]] for n in nodes}
        if new_colors == colors:
            return colors
        colors = new_colors


def _apply_mapping(triples: Iterable[Triple], mapping: Dict[BlankNode, BlankNode]) -> Set[Triple]:
    def sub(term: Term) -> Term:
        return mapping[term] if isinstance(term, BlankNode) else term

    return {Triple(sub(t.subject), t.predicate, sub(t.object)) for t in triples}


def graph_isomorphic(a: Graph, b: Graph, max_blank_nodes: int = 64) -> bool:
    """True iff some blank-node bijection makes the triple sets equal.

    IRIs and literals compare by value. Raises IsomorphismLimitError when the
    graphs have more than ``max_blank_nodes`` blank nodes and color refinement
    leaves ambiguous classes that would need brute-force search.
    """
    if len(a.triples) != len(b.triples):
        return False
    ground_a = {t for t in a.triples if _ground(t)}
    ground_b = {t for t in b.triples if _ground(t)}
    if ground_a != ground_b:
        return False
    rest_a = a.triples - ground_a
    rest_b = b.triples - ground_b
    nodes_a = sorted({n for t in rest_a for n in t.terms() if isinstance(n, BlankNode)},
                     key=term_sort_key)
    nodes_b = sorted({n for t in rest_b for n in t.terms() if isinstance(n, BlankNode)},
                     key=term_sort_key)
    if len(nodes_a) != len(nodes_b):
        return False
    if not nodes_a:
        return rest_a == rest_b

    colors_a = _refine_colors(rest_a, nodes_a)
    colors_b = _refine_colors(rest_b, nodes_b)
    hist_a = sorted(colors_a.values())
    hist_b = sorted(colors_b.values())
    if hist_a != hist_b:
        return False

    classes_b: Dict[int, List[BlankNode]] = {}
    for n in nodes_b:
        classes_b.setdefault(colors_b[n], []).append(n)

    ambiguous = any(len(v) > 1 for v in classes_b.values())
    if ambiguous and len(nodes_a) > max_blank_nodes:
        raise IsomorphismLimitError(
            f"{len(nodes_a)} blank nodes exceed the bound of {max_blank_nodes} "
            "and refinement left ambiguous classes"
        )

    # Assign most-constrained nodes first so forced choices propagate early.
    order = sorted(nodes_a, key=lambda n: (len(classes_b.get(colors_a[n], [])), term_sort_key(n)))
    incident_a: Dict[BlankNode, List[Triple]] = {n: [] for n in nodes_a}
    for t in rest_a:
        for term in set(t.terms()):
            if isinstance(term, BlankNode):
                incident_a[term].append(t)

    mapping: Dict[BlankNode, BlankNode] = {}
    used: Set[BlankNode] = set()

    def consistent(n: BlankNode) -> bool:
        for t in incident_a[n]:
            terms = t.terms()
            if any(isinstance(x, BlankNode) and x not in mapping for x in terms):
                continue
            image = Triple(
                mapping[t.subject] if isinstance(t.subject, BlankNode) else t.subject,
                t.predicate,
                mapping[t.object] if isinstance(t.object, BlankNode) else t.object,
            )
            if image not in rest_b:
                return False
        return True

    def assign(i: int) -> bool:
        if i == len(order):
            return _apply_mapping(rest_a, mapping) == rest_b
        n = order[i]
        for candidate in classes_b.get(colors_a[n], []):
            if candidate in used:
                continue
            mapping[n] = candidate
            used.add(candidate)
            if consistent(n) and assign(i + 1):
                return True
            del mapping[n]
            used.discard(candidate)
        return False

    return assign(0)
