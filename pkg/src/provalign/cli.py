"""Command-line entry point with CI-friendly exit codes.

Exit codes: 0 when the requested check passes (no findings), 1 when the
check produced findings (unmapped terms, clashes, violations), 2 on usage
or load errors. Reports are deterministic: identical inputs and flags
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence, Tuple

from . import vocab
from .alignment import Alignment, extract_mappings, export_sssom
from .checks import (
    alignment_stats,
    check_coherence,
    check_conservativity,
    check_consistency,
    check_totality,
    report_text,
)
from .matcher import UnknownPropertyError, suggest_property_mappings
from .owl import NamedClass, NamedProperty, OntologyModel, extract_axioms, merge_models
from .rdf import BlankNode, Graph, Literal, iri, new_scope
from .reasoner import FactCapExceededError, entailed_taxonomy
from .turtle import TurtleParseError, parse_turtle, serialize_turtle


class UsageError(Exception):
    pass


DEFAULT_FACT_CAP = 1_000_000
FACT_CAP_ENV = "PROVALIGN_FACT_CAP"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="provalign",
        description="Verify ontology alignments: totality, coherence, consistency, conservativity.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    commands = (
        "check-totality", "check-coherence", "check-consistency",
        "check-conservativity", "check-all", "suggest", "materialize",
        "export-sssom", "stats",
    )
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--source", action="append", default=[], metavar="PATH")
        p.add_argument("--target", action="append", default=[], metavar="PATH")
        p.add_argument("--alignment", action="append", default=[], metavar="PATH")
        p.add_argument("--instances", metavar="PATH")
        p.add_argument("--source-ns", action="append", default=[], metavar="IRI")
        p.add_argument("--target-ns", action="append", default=[], metavar="IRI")
        p.add_argument("--skolem-depth", type=int, default=3, metavar="N")
        p.add_argument("--fact-cap", type=int, default=None, metavar="N")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH")
        if name == "suggest":
            p.add_argument("--property", required=True, metavar="IRI")
    return parser


def _load_graph(path: str) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_turtle(text)
    except TurtleParseError as exc:
        details = "; ".join(str(d) for d in exc.diagnostics)
        raise UsageError(f"parse failure in {path}: {details}") from exc


def _load_models(paths: Sequence[str]) -> List[OntologyModel]:
    return [extract_axioms(_load_graph(p), source_label=os.path.basename(p)) for p in paths]


def _require(args, *roles: str) -> None:
    missing = [r for r in roles if not getattr(args, r.replace("-", "_"))]
    if missing:
        raise UsageError(f"{args.subcommand} requires --" + ", --".join(missing))


def _fact_cap(args) -> int:
    if args.fact_cap is not None:
        return args.fact_cap
    env = os.environ.get(FACT_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{FACT_CAP_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_FACT_CAP


def _alignment(args) -> Alignment:
    _require(args, "alignment", "source-ns", "target-ns")
    merged = merge_models(_load_models(args.alignment), source_label="alignment")
    return extract_mappings(merged, args.source_ns, args.target_ns)


def _alignment_models(args) -> List[OntologyModel]:
    return _load_models(args.alignment)


def _write(args, payload: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _emit_report(args, doc: dict) -> int:
    if args.format == "json":
        _write(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        if "checks" in doc:
            payload = "".join(report_text(d) + "\n" for d in doc["checks"])
            payload += f"overall: {doc['status']}\n"
        else:
            payload = report_text(doc)
        _write(args, payload)
    return {"pass": 0, "fail": 1, "error": 2}[doc["status"]]


def _doc_totality(args) -> dict:
    _require(args, "source")
    source = merge_models(_load_models(args.source), source_label="source")
    others = _load_models(args.target)
    alignment = _alignment(args)
    return check_totality(source, others, alignment).as_dict()


def _merged_stack(args) -> List[OntologyModel]:
    models = _load_models(args.source) + _load_models(args.target)
    models += _alignment_models(args)
    if not models:
        raise UsageError(f"{args.subcommand} needs at least one --source/--target/--alignment file")
    return models


def _doc_coherence(args) -> dict:
    models = _merged_stack(args)
    return check_coherence(models, skolem_depth=args.skolem_depth,
                           fact_cap=_fact_cap(args)).as_dict()


def _doc_consistency(args) -> dict:
    _require(args, "instances")
    models = _merged_stack(args)
    instances = extract_axioms(_load_graph(args.instances), source_label="instances")
    return check_consistency(models, instances, skolem_depth=args.skolem_depth,
                             fact_cap=_fact_cap(args)).as_dict()


def _doc_conservativity(args) -> dict:
    _require(args, "source")
    source = merge_models(_load_models(args.source), source_label="source")
    others = _load_models(args.target)
    alignment = _alignment(args)
    return check_conservativity(source, others, alignment).as_dict()


def _doc_check_all(args) -> dict:
    docs = [_doc_totality(args), _doc_coherence(args)]
    if args.instances:
        docs.append(_doc_consistency(args))
    else:
        # Consistency needs instance data; without any it trivially passes.
        models = _merged_stack(args)
        empty = OntologyModel(source_label="instances")
        docs.append(check_consistency(models, empty, skolem_depth=args.skolem_depth,
                                      fact_cap=_fact_cap(args)).as_dict())
    docs.append(_doc_conservativity(args))
    docs.sort(key=lambda d: d["check"])
    status = "pass"
    if any(d["status"] == "error" for d in docs):
        status = "error"
    elif any(d["status"] == "fail" for d in docs):
        status = "fail"
    return {"check": "check-all", "status": status, "checks": docs}


def _doc_suggest(args) -> dict:
    _require(args, "source", "target")
    source = merge_models(_load_models(args.source), source_label="source")
    targets = _load_models(args.target)
    alignment = _alignment(args)
    try:
        result = suggest_property_mappings(args.property, source, targets, alignment)
    except UnknownPropertyError as exc:
        raise UsageError(str(exc)) from exc
    return result.as_dict()


def _doc_stats(args) -> dict:
    alignment = _alignment(args)
    totality = None
    if args.source:
        source = merge_models(_load_models(args.source), source_label="source")
        totality = check_totality(source, _load_models(args.target), alignment)
    return alignment_stats(alignment, totality)


def _run_export_sssom(args) -> int:
    alignment = _alignment(args)
    _write(args, export_sssom(alignment))
    return 0


def _run_materialize(args) -> int:
    """Write the alignment plus every entailed cross-namespace mapping as Turtle."""
    _require(args, "source", "alignment", "source-ns", "target-ns")
    source_models = _load_models(args.source)
    target_models = _load_models(args.target)
    align_models = _alignment_models(args)
    alignment = extract_mappings(merge_models(align_models, source_label="alignment"),
                                 args.source_ns, args.target_ns)
    taxonomy = entailed_taxonomy(source_models + target_models + align_models)

    def group(name: str) -> Optional[str]:
        if name.startswith(tuple(args.source_ns)):
            return "source"
        if name.startswith(tuple(args.target_ns)):
            return "target"
        return None

    asserted: set = set()
    for m in alignment.mappings:
        if m.is_simple() and isinstance(m.subject, (NamedClass, NamedProperty)) \
                and isinstance(m.object, (NamedClass, NamedProperty)):
            asserted.add((m.predicate, m.subject.iri.value, m.object.iri.value))

    out = Graph(prefixes={"owl": vocab.OWL, "rdfs": vocab.RDFS, "rdf": vocab.RDF})
    scope = new_scope()
    emitted = 0

    def emit(predicate_iri: str, a: str, b: str, derived: bool) -> None:
        nonlocal emitted
        node_id = f"m{emitted}"
        emitted += 1
        node = BlankNode(node_id, scope)
        out.add_triple(node, iri(vocab.RDF_TYPE), iri(vocab.OWL_AXIOM))
        out.add_triple(node, iri(vocab.OWL_ANNOTATED_SOURCE), iri(a))
        out.add_triple(node, iri(vocab.OWL_ANNOTATED_PROPERTY), iri(predicate_iri))
        out.add_triple(node, iri(vocab.OWL_ANNOTATED_TARGET), iri(b))
        comment = "entailed by the asserted alignment" if derived else "asserted mapping"
        out.add_triple(node, iri(vocab.RDFS_COMMENT), Literal(comment))

    pairs: List[Tuple[str, str, str, str]] = []
    for a, b in sorted(taxonomy.equivalent_class_pairs):
        pairs.append((vocab.OWL_EQUIVALENT_CLASS, a, b, "equivalent-class"))
    for a, b in sorted(taxonomy.equivalent_property_pairs):
        pairs.append((vocab.OWL_EQUIVALENT_PROPERTY, a, b, "equivalent-property"))
    equiv_class = taxonomy.equivalent_class_pairs
    equiv_prop = taxonomy.equivalent_property_pairs
    for a, b in sorted(taxonomy.subclass_pairs):
        if tuple(sorted((a, b))) not in equiv_class:
            pairs.append((vocab.RDFS_SUBCLASSOF, a, b, "sub-class-of"))
    for a, b in sorted(taxonomy.subproperty_pairs):
        if tuple(sorted((a, b))) not in equiv_prop:
            pairs.append((vocab.RDFS_SUBPROPERTYOF, a, b, "sub-property-of"))

    for predicate_iri, a, b, predicate in pairs:
        ga, gb = group(a), group(b)
        if ga is None or gb is None or ga == gb:
            continue
        derived = (predicate, a, b) not in asserted and (
            predicate not in ("equivalent-class", "equivalent-property")
            or (predicate, b, a) not in asserted)
        emit(predicate_iri, a, b, derived)

    _write(args, serialize_turtle(out))
    return 0


_DOC_COMMANDS = {
    "check-totality": _doc_totality,
    "check-coherence": _doc_coherence,
    "check-consistency": _doc_consistency,
    "check-conservativity": _doc_conservativity,
    "check-all": _doc_check_all,
    "suggest": _doc_suggest,
    "stats": _doc_stats,
}


def run(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.subcommand == "export-sssom":
            return _run_export_sssom(args)
        if args.subcommand == "materialize":
            return _run_materialize(args)
        doc = _DOC_COMMANDS[args.subcommand](args)
        return _emit_report(args, doc)
    except UsageError as exc:
        print(f"provalign: error: {exc}", file=sys.stderr)
        return 2
    except FactCapExceededError as exc:
        print(f"provalign: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
