"""Semi-automated candidate suggestion for object property mappings.

Given a source property whose (possibly inherited) domain and range classes
are already mapped, find target object properties whose effective domain and
range subsume the translated classes. Selection among the candidates remains
a human decision; this module only narrows the field. Lexical similarity is
deliberately not used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import vocab
from .alignment import Alignment, EQUIVALENT_CLASS, SUB_CLASS_OF
from .owl import (
    Axiom,
    ClassExpression,
    Intersection,
    InverseProperty,
    NamedClass,
    NamedProperty,
    OntologyModel,
    merged_signature,
    render_class_expression,
)
from .rdf import Iri, iri
from .reasoner import TBoxIndex, entailed_taxonomy


class MatcherError(Exception):
    pass


class UnknownPropertyError(MatcherError):
    """The queried property is not an object property of any given model."""


THING = NamedClass(Iri(vocab.OWL_THING))


@dataclass
class Candidate:
    prop: str
    domain_match: Tuple[ClassExpression, ClassExpression]  # (translated, candidate's)
    range_match: Tuple[ClassExpression, ClassExpression]
    match_kind: str  # exact | inherited

    def as_dict(self) -> dict:
        return {
            "property": self.prop,
            "match_kind": self.match_kind,
            "domain": {
                "translated": render_class_expression(self.domain_match[0]),
                "candidate": render_class_expression(self.domain_match[1]),
            },
            "range": {
                "translated": render_class_expression(self.range_match[0]),
                "candidate": render_class_expression(self.range_match[1]),
            },
        }


@dataclass
class SuggestionResult:
    candidates: List[Candidate]
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "check": "suggest",
            "status": "pass",
            "findings": [c.as_dict() for c in self.candidates],
            "counts": {"candidates": len(self.candidates), "notes": self.notes},
        }


def _declared_domain_range(name: str, models: Sequence[OntologyModel]) -> Tuple[Optional[ClassExpression], Optional[ClassExpression]]:
    domains: List[ClassExpression] = []
    ranges: List[ClassExpression] = []
    for model in models:
        for ax in model.axioms:
            if ax.kind not in ("property-domain", "property-range"):
                continue
            pe, ce = ax.args
            if isinstance(pe, NamedProperty) and pe.iri.value == name:
                (domains if ax.kind == "property-domain" else ranges).append(ce)
            elif isinstance(pe, InverseProperty) and pe.operand.iri.value == name:
                (ranges if ax.kind == "property-domain" else domains).append(ce)

    def pick(values: List[ClassExpression]) -> Optional[ClassExpression]:
        if not values:
            return None
        if len(values) == 1:
            return values[0]
        unique = sorted(set(values), key=render_class_expression)
        return unique[0] if len(unique) == 1 else Intersection(tuple(unique))

    return pick(domains), pick(ranges)


def _super_properties(name: str, models: Sequence[OntologyModel]) -> List[str]:
    out: Set[str] = set()
    for model in models:
        for ax in model.axioms:
            if ax.kind != "sub-property-of":
                continue
            sub, sup = ax.args
            if isinstance(sub, NamedProperty) and sub.iri.value == name and isinstance(sup, NamedProperty):
                out.add(sup.iri.value)
    return sorted(out)


def _inverses(name: str, models: Sequence[OntologyModel]) -> List[str]:
    out: Set[str] = set()
    for model in models:
        for ax in model.axioms:
            if ax.kind != "inverse-properties":
                continue
            a, b = ax.args
            if isinstance(a, NamedProperty) and isinstance(b, NamedProperty):
                if a.iri.value == name:
                    out.add(b.iri.value)
                if b.iri.value == name:
                    out.add(a.iri.value)
    return sorted(out)


def effective_domain_range(prop: str, models: Sequence[OntologyModel]) -> Tuple[ClassExpression, ClassExpression]:
    """The most specific declared domain/range, inherited when undeclared.

    Resolution order per slot: own declaration, nearest declaring ancestor in
    the subproperty hierarchy, the inverse property's declaration with the
    pair swapped, and finally owl:Thing.
    """
    models = list(models)
    known = merged_signature(models)["object_properties"]
    if prop not in known:
        raise UnknownPropertyError(f"{prop} is not an object property of the given models")

    def resolve(name: str, slot: int, visited: Set[str]) -> Optional[ClassExpression]:
        if name in visited:
            return None
        visited.add(name)
        declared = _declared_domain_range(name, models)
        if declared[slot] is not None:
            return declared[slot]
        for sup in _super_properties(name, models):
            found = resolve(sup, slot, visited)
            if found is not None:
                return found
        for inv in _inverses(name, models):
            found = resolve(inv, 1 - slot, visited)
            if found is not None:
                return found
        return None

    domain = resolve(prop, 0, set()) or THING
    range_ = resolve(prop, 1, set()) or THING
    return domain, range_


def _translations(term: str, source: OntologyModel, alignment: Alignment) -> List[ClassExpression]:
    """Target-side class expressions the source class translates to.

    Uses mappings on the class itself, else on the nearest mapped ancestor in
    the source hierarchy (an upper approximation, which is the right direction
    for checking whether a property can accept the translated instances).
    """
    by_term: Dict[str, List[ClassExpression]] = {}
    for m in alignment.mappings:
        if m.predicate == EQUIVALENT_CLASS:
            if isinstance(m.subject, NamedClass):
                by_term.setdefault(m.subject.iri.value, []).append(m.object)
            if isinstance(m.object, NamedClass):
                by_term.setdefault(m.object.iri.value, []).append(m.subject)
        elif m.predicate == SUB_CLASS_OF and isinstance(m.subject, NamedClass):
            by_term.setdefault(m.subject.iri.value, []).append(m.object)

    def target_only(exprs: List[ClassExpression]) -> List[ClassExpression]:
        return [e for e in exprs
                if not isinstance(e, NamedClass)
                or e.iri.value.startswith(tuple(alignment.target_namespaces))]

    direct = target_only(by_term.get(term, []))
    if direct:
        return sorted(direct, key=render_class_expression)
    taxonomy = entailed_taxonomy([source])
    ancestors = sorted(b for a, b in taxonomy.subclass_pairs if a == term)
    collected: List[ClassExpression] = []
    for ancestor in ancestors:
        collected.extend(target_only(by_term.get(ancestor, [])))
    return sorted(set(collected), key=render_class_expression)


def _compatible(tbox: TBoxIndex, translated: ClassExpression, candidate: ClassExpression) -> bool:
    if tbox.subsumed(translated, candidate):
        return True
    if isinstance(translated, Intersection):
        # A conjunction translates to its conjunct set; any subsumed conjunct
        # is accepted and left for the human reviewer to judge.
        return any(tbox.subsumed(op, candidate) for op in translated.operands)
    return False


def suggest_property_mappings(prop: str, source: OntologyModel,
                              targets: Sequence[OntologyModel],
                              alignment: Alignment) -> SuggestionResult:
    """Target object properties usable in place of the given source property.

    Every candidate's effective domain and range must equal or subsume the
    translated domain/range of the source property under the targets'
    entailed taxonomy. Inverse target properties are not considered as
    candidates; the output notes that restriction.
    """
    targets = list(targets)
    notes = ["inverse target properties are not considered as candidates"]
    domain, range_ = effective_domain_range(prop, [source])
    translations = {}
    for slot_name, ce in (("domain", domain), ("range", range_)):
        if isinstance(ce, NamedClass):
            found = _translations(ce.iri.value, source, alignment)
        else:
            found = []
        if not found:
            notes.append(f"unmapped-domain-or-range: no alignment translation for the {slot_name} "
                         f"{render_class_expression(ce)}")
            return SuggestionResult(candidates=[], notes=notes)
        translations[slot_name] = found

    # Seed the comparison index so translated expressions join the universe.
    seed = OntologyModel(source_label="translation-seeds")
    probe = Iri("urn:probe:translation")
    for exprs in translations.values():
        for e in exprs:
            seed.axioms.append(Axiom("class-assertion", (probe, e)))
    tbox = TBoxIndex(targets + [seed])

    candidates: List[Candidate] = []
    for target_prop in sorted(merged_signature(targets)["object_properties"]):
        cand_domain, cand_range = effective_domain_range(target_prop, targets)
        domain_hit = next((t for t in translations["domain"]
                           if _compatible(tbox, t, cand_domain)), None)
        if domain_hit is None:
            continue
        range_hit = next((t for t in translations["range"]
                          if _compatible(tbox, t, cand_range)), None)
        if range_hit is None:
            continue
        exact = domain_hit == cand_domain and range_hit == cand_range
        candidates.append(Candidate(
            prop=target_prop,
            domain_match=(domain_hit, cand_domain),
            range_match=(range_hit, cand_range),
            match_kind="exact" if exact else "inherited",
        ))
    candidates.sort(key=lambda c: (c.match_kind != "exact", c.prop))
    return SuggestionResult(candidates=candidates, notes=notes)
