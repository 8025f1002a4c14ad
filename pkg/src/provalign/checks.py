"""The four alignment criteria as executable verdicts.

Totality: every source class and object property is credited by the
alignment, directly or through entailment (superterm, inverse, property
chain, or rule). Coherence: every named class in the merged ontologies can
have an instance. Consistency: merged ontologies plus instance data entail
no contradiction. Conservativity: the alignment adds no subsumption or
equivalence between terms of a single input ontology's signature (new
disjointness is counted but is not a violation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .alignment import (
    Alignment,
    COMPLEX_PREDICATES,
    EQUIVALENT_CLASS,
    EQUIVALENT_PROPERTY,
    Mapping,
    SIMPLE_PREDICATES,
    SWRL_RULE,
    render_side,
)
from .owl import (
    Axiom,
    NamedClass,
    NamedProperty,
    OntologyModel,
    SwrlRule,
    merged_signature,
    render_class_expression,
    signature,
)
from .rdf import BlankNode, Iri, Literal, Term, iri
from .reasoner import (
    Clash,
    ClosedKB,
    FactCapExceededError,
    TBoxIndex,
    Taxonomy,
    class_satisfiable,
    check_clash,
    entailed_taxonomy,
    explain,
    materialize,
)


def unmodeled_total(models: Sequence[OntologyModel]) -> int:
    """Triples outside the supported fragment, kept but not reasoned over."""
    return sum(len(m.unmodeled) for m in models)


def alignment_axiom_model(alignment: Alignment) -> OntologyModel:
    """The alignment's logical content as one model (mapping payloads only)."""
    model = OntologyModel(source_label="alignment")
    for m in alignment.mappings:
        if m.predicate == "skos-related":
            continue  # metadata only, no logical force
        if isinstance(m.payload, SwrlRule):
            model.rules.append(m.payload)
        elif isinstance(m.payload, Axiom):
            model.axioms.append(m.payload)
    return model


# ---------------------------------------------------------------------------
# Totality
# ---------------------------------------------------------------------------

@dataclass
class CreditEntry:
    kind: str  # direct | via-superterm | via-inverse | via-chain | via-rule
    witness: str
    predicate: Optional[str] = None


@dataclass
class TotalityReport:
    unmapped: List[Tuple[str, str]]  # (term, category)
    credit_trace: Dict[str, CreditEntry]
    mapped_count: int
    source_total: int
    unmodeled_count: int = 0

    def as_dict(self) -> dict:
        return {
            "check": "totality",
            "status": "pass" if not self.unmapped else "fail",
            "findings": [{"term": t, "category": c} for t, c in self.unmapped],
            "counts": {
                "source_terms": self.source_total,
                "mapped": self.mapped_count,
                "unmapped": len(self.unmapped),
                "unmodeled_axioms": self.unmodeled_count,
                "credited_by_kind": _credit_histogram(self.credit_trace),
            },
        }


def _credit_histogram(trace: Dict[str, CreditEntry]) -> Dict[str, int]:
    hist: Dict[str, int] = {}
    for entry in trace.values():
        hist[entry.kind] = hist.get(entry.kind, 0) + 1
    return dict(sorted(hist.items()))


def _top_level_names(side) -> List[str]:
    if isinstance(side, NamedClass):
        return [side.iri.value]
    if isinstance(side, NamedProperty):
        return [side.iri.value]
    if isinstance(side, tuple):
        return list(side)
    return []


def check_totality(source: OntologyModel, others: Sequence[OntologyModel],
                   alignment: Alignment) -> TotalityReport:
    """Credit every source class/object property or list it as unmapped.

    Credit closure runs over the source axioms plus the alignment's own
    axioms; SKOS mappings give no credit. 'others' supplies extra inverse
    declarations but does not add source terms.
    """
    sig = signature(source, alignment.source_namespaces)
    categories: Dict[str, str] = {}
    for c in sig["classes"]:
        categories[c] = "class"
    for p in sig["object_properties"]:
        categories[p] = "object-property"
    terms = set(categories)
    credit: Dict[str, CreditEntry] = {}

    def credit_term(term: str, entry: CreditEntry) -> None:
        if term in terms and term not in credit:
            credit[term] = entry

    # Direct credit, equivalences first so the synonymy statistics see them.
    ordered = sorted(alignment.mappings, key=Mapping.sort_key)
    for round_predicates in ((EQUIVALENT_CLASS, EQUIVALENT_PROPERTY), SIMPLE_PREDICATES):
        for m in ordered:
            if m.predicate not in round_predicates or m.predicate not in SIMPLE_PREDICATES:
                continue
            for own, other in ((m.subject, m.object), (m.object, m.subject)):
                for name in _top_level_names(own):
                    credit_term(name, CreditEntry("direct", render_side(other), m.predicate))
    # Property-chain and SWRL-rule mappings credit every source term they use.
    for m in ordered:
        if m.predicate not in COMPLEX_PREDICATES:
            continue
        kind = "via-rule" if m.predicate == SWRL_RULE else "via-chain"
        for name in _top_level_names(m.subject):
            credit_term(name, CreditEntry(kind, render_side(m.object), m.predicate))

    align_model = alignment_axiom_model(alignment)
    taxonomy = entailed_taxonomy([source, align_model])
    inverse_pairs: Dict[str, Set[str]] = {}
    for model in (source, align_model, *others):
        for ax in model.axioms:
            if ax.kind != "inverse-properties":
                continue
            a, b = ax.args
            if isinstance(a, NamedProperty) and isinstance(b, NamedProperty):
                inverse_pairs.setdefault(a.iri.value, set()).add(b.iri.value)
                inverse_pairs.setdefault(b.iri.value, set()).add(a.iri.value)

    up_edges: Dict[str, Set[str]] = {}
    for a, b in taxonomy.subclass_pairs | taxonomy.subproperty_pairs:
        up_edges.setdefault(a, set()).add(b)

    changed = True
    while changed:
        changed = False
        for term in sorted(terms - set(credit)):
            supers = sorted(u for u in up_edges.get(term, ()) if u in credit and u in terms)
            if supers:
                credit[term] = CreditEntry("via-superterm", supers[0])
                changed = True
                continue
            inverses = sorted(q for q in inverse_pairs.get(term, ()) if q in credit)
            if inverses:
                credit[term] = CreditEntry("via-inverse", inverses[0])
                changed = True

    unmapped = sorted((t, categories[t]) for t in terms - set(credit))
    return TotalityReport(unmapped=unmapped, credit_trace=credit,
                          mapped_count=len(credit), source_total=len(terms),
                          unmodeled_count=unmodeled_total([source, *others]))


# ---------------------------------------------------------------------------
# Coherence
# ---------------------------------------------------------------------------

@dataclass
class CoherenceReport:
    unsatisfiable: List[str]
    undetermined: List[Tuple[str, str]]  # (class, reason)
    probed: int
    unmodeled_count: int = 0

    def as_dict(self) -> dict:
        status = "fail" if self.unsatisfiable else ("error" if self.undetermined else "pass")
        findings = [{"unsatisfiable_class": c} for c in self.unsatisfiable]
        findings += [{"undetermined_class": c, "reason": r} for c, r in self.undetermined]
        return {
            "check": "coherence",
            "status": status,
            "findings": findings,
            "counts": {
                "probed_classes": self.probed,
                "unsatisfiable": len(self.unsatisfiable),
                "undetermined": len(self.undetermined),
                "unmodeled_axioms": self.unmodeled_count,
            },
        }


def check_coherence(models: Sequence[OntologyModel], *, skolem_depth: int = 3,
                    fact_cap: int = 1_000_000) -> CoherenceReport:
    """Probe satisfiability of every named class in the merged signature."""
    models = list(models)
    seen_classes = sorted(merged_signature(models)["classes"])
    seed = OntologyModel(source_label="probe-seeds")
    probe = Iri("urn:probe:individual")
    seed.axioms = [Axiom("class-assertion", (probe, NamedClass(iri(c)))) for c in seen_classes]
    tbox = TBoxIndex(models + [seed])
    unsat: List[str] = []
    undetermined: List[Tuple[str, str]] = []
    for c in seen_classes:
        try:
            ok = class_satisfiable(models, NamedClass(iri(c)), skolem_depth=skolem_depth,
                                   fact_cap=fact_cap, tbox=tbox)
        except FactCapExceededError as exc:
            undetermined.append((c, str(exc)))
            continue
        if not ok:
            unsat.append(c)
    return CoherenceReport(unsatisfiable=unsat, undetermined=undetermined,
                           probed=len(seen_classes), unmodeled_count=unmodeled_total(models))


# ---------------------------------------------------------------------------
# Consistency
# ---------------------------------------------------------------------------

def _term_text(t: Term) -> str:
    if isinstance(t, Iri):
        return t.value
    if isinstance(t, BlankNode):
        return f"_:{t.node_id}"
    return t.lexical


def _fact_text(fact) -> str:
    if fact[0] == "class":
        return f"{_term_text(fact[1])} a {render_class_expression(fact[2])}"
    return f"{_term_text(fact[2])} {fact[1]} {_term_text(fact[3])}"


def trace_tree_dict(kb: ClosedKB, fact) -> dict:
    node = explain(kb, fact)

    def walk(n) -> dict:
        return {
            "fact": _fact_text(n.fact),
            "rule": n.rule,
            "detail": n.detail,
            "premises": [walk(child) for child in n.children],
        }

    return walk(node)


def clash_finding(kb: ClosedKB, clash: Clash) -> dict:
    return {
        "kind": clash.kind,
        "individual": _term_text(clash.individual),
        "participants": [render_class_expression(p) for p in clash.participants],
        "traces": [trace_tree_dict(kb, fact) for fact in clash.trace_facts],
    }


@dataclass
class ConsistencyReport:
    clashes: List[Clash]
    instance_count: int
    kb: ClosedKB = field(repr=False)
    unmodeled_count: int = 0

    def as_dict(self) -> dict:
        return {
            "check": "consistency",
            "status": "pass" if not self.clashes else "fail",
            "findings": [clash_finding(self.kb, c) for c in self.clashes],
            "counts": {
                "instances": self.instance_count,
                "clashes": len(self.clashes),
                "derived_facts": self.kb.derived_count,
                "skolem_budget_exceeded": self.kb.skolem_budget_exceeded,
                "unmodeled_axioms": self.unmodeled_count,
            },
        }


def count_individuals(abox: OntologyModel) -> int:
    """Named plus anonymous individuals mentioned in assertions."""
    individuals: Set[Term] = set()
    for ax in abox.axioms:
        if ax.kind == "class-assertion":
            individuals.add(ax.args[0])
        elif ax.kind == "property-assertion":
            individuals.add(ax.args[1])
            if not isinstance(ax.args[2], Literal):
                individuals.add(ax.args[2])
    for name in abox.declared_individuals:
        individuals.add(Iri(name))
    return len(individuals)


def check_consistency(models: Sequence[OntologyModel], instances: OntologyModel, *,
                      skolem_depth: int = 3, fact_cap: int = 1_000_000) -> ConsistencyReport:
    """Materialize ontologies plus instance data and report every clash."""
    kb = materialize(list(models) + [instances], skolem_depth=skolem_depth, fact_cap=fact_cap)
    clashes = check_clash(kb)
    return ConsistencyReport(clashes=clashes, instance_count=count_individuals(instances), kb=kb,
                             unmodeled_count=unmodeled_total(list(models) + [instances]))


# ---------------------------------------------------------------------------
# Conservativity
# ---------------------------------------------------------------------------

@dataclass
class ConservativityReport:
    new_subsumptions: List[Tuple[str, str, str]]  # (sub, super, signature label)
    new_equivalences: List[Tuple[str, str, str]]
    new_disjointness_count: int  # informational, not a violation

    def as_dict(self) -> dict:
        ok = not self.new_subsumptions and not self.new_equivalences
        return {
            "check": "conservativity",
            "status": "pass" if ok else "fail",
            "findings": (
                [{"new_subsumption": {"sub": a, "super": b, "signature": s}}
                 for a, b, s in self.new_subsumptions]
                + [{"new_equivalence": {"a": a, "b": b, "signature": s}}
                   for a, b, s in self.new_equivalences]
            ),
            "counts": {
                "new_subsumptions": len(self.new_subsumptions),
                "new_equivalences": len(self.new_equivalences),
                "new_disjointness_informational": self.new_disjointness_count,
            },
        }


def _taxonomy_pairs(t: Taxonomy) -> Set[Tuple[str, str]]:
    return t.subclass_pairs | t.subproperty_pairs


def _equiv_pairs(t: Taxonomy) -> Set[Tuple[str, str]]:
    return t.equivalent_class_pairs | t.equivalent_property_pairs


def _named_disjoint_pairs(tbox: TBoxIndex, names: Set[str]) -> Set[Tuple[str, str]]:
    out: Set[Tuple[str, str]] = set()
    classes = [NamedClass(iri(n)) for n in sorted(names)]
    for i, c in enumerate(classes):
        if c not in tbox.universe:
            continue
        for d in classes[i + 1:]:
            if d not in tbox.universe:
                continue
            for a, b in tbox.disjoint_pairs:
                if (tbox.subsumed(c, a) and tbox.subsumed(d, b)) or \
                   (tbox.subsumed(c, b) and tbox.subsumed(d, a)):
                    out.add((c.iri.value, d.iri.value))
                    break
    return out


def check_conservativity(o1: OntologyModel, o2: Sequence[OntologyModel],
                         alignment: Alignment) -> ConservativityReport:
    """Approximate deductive difference of the merge against each input.

    Reports subsumptions/equivalences between same-signature terms that the
    merge entails but the input alone does not. Newly entailed disjointness
    between same-ontology terms is counted informationally only.
    """
    align_model = alignment_axiom_model(alignment)
    o2 = list(o2)
    tbox_m = TBoxIndex([o1, *o2, align_model])
    tm = entailed_taxonomy([], tbox=tbox_m)
    new_subs: List[Tuple[str, str, str]] = []
    new_equivs: List[Tuple[str, str, str]] = []
    disjoint_note = 0

    sides = [
        ("o1", [o1]),
        ("o2", o2),
    ]
    for label, side_models in sides:
        if not side_models:
            continue
        tbox_own = TBoxIndex(side_models)
        own = entailed_taxonomy([], tbox=tbox_own)
        sig = merged_signature(side_models)
        names = sig["classes"] | sig["object_properties"]
        own_pairs = _taxonomy_pairs(own)
        own_equivs = _equiv_pairs(own)
        merged_pairs = _taxonomy_pairs(tm)
        merged_equivs = _equiv_pairs(tm)
        for a, b in sorted(merged_equivs - own_equivs):
            if a in names and b in names:
                new_equivs.append((a, b, label))
        equiv_members = {tuple(sorted((a, b))) for a, b, _ in new_equivs}
        for a, b in sorted(merged_pairs - own_pairs):
            if a in names and b in names and tuple(sorted((a, b))) not in equiv_members:
                new_subs.append((a, b, label))
        disjoint_note += len(
            _named_disjoint_pairs(tbox_m, sig["classes"]) - _named_disjoint_pairs(tbox_own, sig["classes"]))

    return ConservativityReport(new_subsumptions=new_subs, new_equivalences=new_equivs,
                                new_disjointness_count=disjoint_note)


# ---------------------------------------------------------------------------
# Descriptive statistics
# ---------------------------------------------------------------------------

def alignment_stats(alignment: Alignment, totality: Optional[TotalityReport] = None) -> dict:
    """Counts per mapping predicate plus the equivalence-coverage ratio.

    The ratio is the fraction of credited source terms whose credit came from
    an equivalence mapping: a rough progress measure toward a fully
    synonymous alignment, not a decision of interpretability or synonymy.
    """
    per_predicate: Dict[str, int] = {}
    for m in alignment.mappings:
        per_predicate[m.predicate] = per_predicate.get(m.predicate, 0) + 1
    simple = sum(per_predicate.get(p, 0) for p in SIMPLE_PREDICATES)
    complex_count = sum(per_predicate.get(p, 0) for p in COMPLEX_PREDICATES)
    equivalence_ratio = 0.0
    if totality is not None and totality.mapped_count:
        credited_equiv = sum(
            1 for entry in totality.credit_trace.values()
            if entry.predicate in (EQUIVALENT_CLASS, EQUIVALENT_PROPERTY))
        equivalence_ratio = credited_equiv / totality.mapped_count
    return {
        "check": "stats",
        "status": "pass",
        "findings": [],
        "counts": {
            "mappings": len(alignment.mappings),
            "per_predicate": dict(sorted(per_predicate.items())),
            "simple": simple,
            "complex": complex_count,
            "equivalence_coverage": round(equivalence_ratio, 6),
        },
    }


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

def _flatten(value, prefix: str = "") -> List[str]:
    lines: List[str] = []
    if isinstance(value, dict):
        for key in sorted(value):
            lines.extend(_flatten(value[key], f"{prefix}{key}."))
    elif isinstance(value, list):
        for i, item in enumerate(value):
            lines.extend(_flatten(item, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix[:-1]}: {value}")
    return lines


def report_text(doc: dict) -> str:
    """Stable, diff-friendly text rendering of a report document."""
    lines = [f"check: {doc['check']}", f"status: {doc['status']}"]
    for line in _flatten(doc.get("counts", {}), "counts."):
        lines.append(line)
    findings = doc.get("findings", [])
    lines.append(f"findings: {len(findings)}")
    for i, finding in enumerate(findings):
        for line in _flatten(finding, f"finding.{i}."):
            lines.append(line)
    return "\n".join(lines) + "\n"
