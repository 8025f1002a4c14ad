"""Structured OWL content extracted from RDF graphs.

The extractor folds the RDF encoding of the supported OWL fragment into
axiom objects: subclass/equivalence/disjointness, property hierarchy and
inverses, domains and ranges, property chains, disjoint unions, class and
property assertions, reified (annotated) axioms, and SWRL rules. Triples
that fit no recognized pattern are kept in an ``unmodeled`` list rather
than rejected, since real ontologies carry annotation vocabulary that is
irrelevant to verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from . import vocab
from .rdf import BlankNode, Graph, Iri, Literal, Term, Triple, iri, new_scope, term_sort_key, triple_sort_key


class OwlError(Exception):
    """Base class for OWL extraction errors."""


class MalformedExpressionError(OwlError):
    """An OWL expression node is structurally broken (bad list, cycle, ...)."""


class UnsupportedExpressionError(OwlError):
    """An expression uses a construct outside the supported fragment."""


class UnsafeRuleError(OwlError):
    """A SWRL rule has a head variable that never occurs in its body."""


class UnsupportedAtomError(OwlError):
    """A SWRL atom kind outside class/individual-property atoms."""


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class NamedClass:
    iri: Iri


@dataclass(frozen=True, slots=True)
class Intersection:
    operands: Tuple["ClassExpression", ...]


@dataclass(frozen=True, slots=True)
class UnionOf:
    operands: Tuple["ClassExpression", ...]


@dataclass(frozen=True, slots=True)
class DisjointUnionOf:
    operands: Tuple["ClassExpression", ...]


@dataclass(frozen=True, slots=True)
class Complement:
    operand: "ClassExpression"


@dataclass(frozen=True, slots=True)
class SomeValuesFrom:
    prop: "PropertyExpression"
    filler: "ClassExpression"


ClassExpression = Union[NamedClass, Intersection, UnionOf, DisjointUnionOf, Complement, SomeValuesFrom]


@dataclass(frozen=True, slots=True)
class NamedProperty:
    iri: Iri


@dataclass(frozen=True, slots=True)
class InverseProperty:
    operand: NamedProperty


PropertyExpression = Union[NamedProperty, InverseProperty]

THING = NamedClass(iri(vocab.OWL_THING))
NOTHING = NamedClass(iri(vocab.OWL_NOTHING))


def named(value: str) -> NamedClass:
    return NamedClass(iri(value))


def named_prop(value: str) -> NamedProperty:
    return NamedProperty(iri(value))


def inverse_of(p: PropertyExpression) -> PropertyExpression:
    """Inverse with normalization: the inverse of an inverse is the named property."""
    if isinstance(p, InverseProperty):
        return p.operand
    return InverseProperty(p)


def class_expression_names(ce: ClassExpression) -> Set[str]:
    """All named class and property IRIs occurring in an expression tree."""
    out: Set[str] = set()
    stack: List[ClassExpression] = [ce]
    while stack:
        e = stack.pop()
        if isinstance(e, NamedClass):
            out.add(e.iri.value)
        elif isinstance(e, (Intersection, UnionOf, DisjointUnionOf)):
            stack.extend(e.operands)
        elif isinstance(e, Complement):
            stack.append(e.operand)
        elif isinstance(e, SomeValuesFrom):
            out.add(property_name(e.prop))
            stack.append(e.filler)
    return out


def property_name(pe: PropertyExpression) -> str:
    if isinstance(pe, NamedProperty):
        return pe.iri.value
    return pe.operand.iri.value


def render_class_expression(ce: ClassExpression, compress=None) -> str:
    """Deterministic compact text form, used in reports and CSV cells."""
    def name(value: str) -> str:
        if compress is not None:
            short = compress(value)
            if short is not None:
                return short
        return value

    if isinstance(ce, NamedClass):
        return name(ce.iri.value)
    if isinstance(ce, Intersection):
        return "(" + " and ".join(render_class_expression(o, compress) for o in ce.operands) + ")"
    if isinstance(ce, UnionOf):
        return "(" + " or ".join(render_class_expression(o, compress) for o in ce.operands) + ")"
    if isinstance(ce, DisjointUnionOf):
        return "DisjointUnion(" + ", ".join(render_class_expression(o, compress) for o in ce.operands) + ")"
    if isinstance(ce, Complement):
        return "(not " + render_class_expression(ce.operand, compress) + ")"
    return "(" + render_property_expression(ce.prop, compress) + " some " + render_class_expression(ce.filler, compress) + ")"


def render_property_expression(pe: PropertyExpression, compress=None) -> str:
    if isinstance(pe, NamedProperty):
        if compress is not None:
            short = compress(pe.iri.value)
            if short is not None:
                return short
        return pe.iri.value
    return "inverse(" + render_property_expression(pe.operand, compress) + ")"


# ---------------------------------------------------------------------------
# Axioms and rules
# ---------------------------------------------------------------------------

# Axiom kinds and their argument shapes:
#   sub-class-of          (sub: CE, sup: CE)
#   equivalent-classes    (a: CE, b: CE)
#   disjoint-classes      (a: CE, b: CE)
#   disjoint-union        (cls: NamedClass, operands: tuple[CE, ...])
#   sub-property-of       (sub: PE, sup: PE)
#   equivalent-properties (a: PE, b: PE)
#   inverse-properties    (a: PE, b: PE)
#   property-domain       (p: PE, c: CE)
#   property-range        (p: PE, c: CE)
#   property-chain        (chain: tuple[PE, ...], sup: PE)
#   class-assertion       (individual: Term, c: CE)
#   property-assertion    (p: PE, subject: Term, object: Term)
#   skos-related          (predicate: str, subject: Term, object: Term)

Annotation = Tuple[str, Term]


@dataclass(frozen=True, slots=True)
class Axiom:
    kind: str
    args: Tuple
    annotations: Tuple[Annotation, ...] = field(default=(), compare=False)

    def with_annotations(self, extra: Iterable[Annotation]) -> "Axiom":
        merged = sorted(set(self.annotations) | set(extra),
                        key=lambda kv: (kv[0], term_sort_key(kv[1])))
        return Axiom(self.kind, self.args, tuple(merged))


@dataclass(frozen=True, slots=True)
class ClassAtom:
    cls: ClassExpression
    var: str


@dataclass(frozen=True, slots=True)
class PropertyAtom:
    prop: PropertyExpression
    var1: str
    var2: str


Atom = Union[ClassAtom, PropertyAtom]


@dataclass(frozen=True, slots=True)
class SwrlRule:
    body: Tuple[Atom, ...]
    head: Tuple[Atom, ...]
    annotations: Tuple[Annotation, ...] = field(default=(), compare=False)

    def variables(self) -> Set[str]:
        out: Set[str] = set()
        for atom in self.body + self.head:
            if isinstance(atom, ClassAtom):
                out.add(atom.var)
            else:
                out.update((atom.var1, atom.var2))
        return out


@dataclass
class OntologyModel:
    """Axioms, rules, and declarations extracted from one graph."""

    axioms: List[Axiom] = field(default_factory=list)
    rules: List[SwrlRule] = field(default_factory=list)
    source_label: str = ""
    declared_classes: Set[str] = field(default_factory=set)
    declared_object_properties: Set[str] = field(default_factory=set)
    declared_data_properties: Set[str] = field(default_factory=set)
    declared_annotation_properties: Set[str] = field(default_factory=set)
    declared_individuals: Set[str] = field(default_factory=set)
    unmodeled: List[Triple] = field(default_factory=list)
    ontology_iri: Optional[str] = None
    version_iri: Optional[str] = None
    derived_from: Tuple[str, ...] = ()
    _signature_cache: Optional[Dict[str, Set[str]]] = field(default=None, repr=False)

    def signature_sets(self) -> Dict[str, Set[str]]:
        if self._signature_cache is None:
            self._signature_cache = _compute_signature(self)
        return self._signature_cache


def _is_builtin(value: str) -> bool:
    return value.startswith(vocab.BUILTIN_NAMESPACES) or value in (vocab.OWL_THING, vocab.OWL_NOTHING)


def _compute_signature(model: OntologyModel) -> Dict[str, Set[str]]:
    classes: Set[str] = set(model.declared_classes)
    props: Set[str] = set(model.declared_object_properties)
    individuals: Set[str] = set(model.declared_individuals)

    def add_ce(ce: ClassExpression) -> None:
        stack: List[ClassExpression] = [ce]
        while stack:
            e = stack.pop()
            if isinstance(e, NamedClass):
                classes.add(e.iri.value)
            elif isinstance(e, (Intersection, UnionOf, DisjointUnionOf)):
                stack.extend(e.operands)
            elif isinstance(e, Complement):
                stack.append(e.operand)
            elif isinstance(e, SomeValuesFrom):
                add_pe(e.prop)
                stack.append(e.filler)

    def add_pe(pe: PropertyExpression) -> None:
        props.add(property_name(pe))

    def add_individual(term: Term) -> None:
        if isinstance(term, Iri):
            individuals.add(term.value)

    for ax in model.axioms:
        kind, args = ax.kind, ax.args
        if kind in ("sub-class-of", "equivalent-classes", "disjoint-classes"):
            add_ce(args[0])
            add_ce(args[1])
        elif kind == "disjoint-union":
            add_ce(args[0])
            for op in args[1]:
                add_ce(op)
        elif kind in ("sub-property-of", "equivalent-properties", "inverse-properties"):
            add_pe(args[0])
            add_pe(args[1])
        elif kind in ("property-domain", "property-range"):
            add_pe(args[0])
            add_ce(args[1])
        elif kind == "property-chain":
            for pe in args[0]:
                add_pe(pe)
            add_pe(args[1])
        elif kind == "class-assertion":
            add_individual(args[0])
            add_ce(args[1])
        elif kind == "property-assertion":
            add_pe(args[0])
            add_individual(args[1])
            add_individual(args[2])
        # skos-related axioms are metadata and contribute nothing

    for rule in model.rules:
        for atom in rule.body + rule.head:
            if isinstance(atom, ClassAtom):
                add_ce(atom.cls)
            else:
                add_pe(atom.prop)

    props -= model.declared_data_properties
    props -= model.declared_annotation_properties
    classes = {c for c in classes if not _is_builtin(c)}
    props = {p for p in props if not _is_builtin(p)}
    individuals = {i for i in individuals if not _is_builtin(i)}
    return {"classes": classes, "object_properties": props, "individuals": individuals}


def signature(model: OntologyModel, namespace_filter: Optional[Sequence[str]] = None) -> Dict[str, Set[str]]:
    """Class/object-property/individual term sets used by the model.

    Built-in vocabulary (rdf/rdfs/owl/swrl/xsd plus owl:Thing and owl:Nothing)
    is excluded; declared data and annotation properties never count as object
    properties. With ``namespace_filter``, only IRIs starting with one of the
    given namespaces are returned.
    """
    sets = model.signature_sets()
    if namespace_filter is None:
        return {k: set(v) for k, v in sets.items()}
    prefixes = tuple(namespace_filter)
    return {k: {t for t in v if t.startswith(prefixes)} for k, v in sets.items()}


def merge_models(models: Sequence[OntologyModel], source_label: str = "merged") -> OntologyModel:
    """Combine several models into one (axioms deduplicated, annotations merged)."""
    merged = OntologyModel(source_label=source_label)
    index: Dict[Tuple, Axiom] = {}
    for m in models:
        for ax in m.axioms:
            key = (ax.kind, ax.args)
            existing = index.get(key)
            index[key] = ax if existing is None else existing.with_annotations(ax.annotations)
        merged.rules.extend(m.rules)
        merged.declared_classes |= m.declared_classes
        merged.declared_object_properties |= m.declared_object_properties
        merged.declared_data_properties |= m.declared_data_properties
        merged.declared_annotation_properties |= m.declared_annotation_properties
        merged.declared_individuals |= m.declared_individuals
        merged.unmodeled.extend(m.unmodeled)
        merged.derived_from = tuple(sorted(set(merged.derived_from) | set(m.derived_from)))
    merged.axioms = sorted(index.values(), key=lambda a: repr((a.kind, a.args)))
    return merged


def merged_signature(models: Sequence[OntologyModel],
                     namespace_filter: Optional[Sequence[str]] = None) -> Dict[str, Set[str]]:
    out: Dict[str, Set[str]] = {"classes": set(), "object_properties": set(), "individuals": set()}
    for m in models:
        for key, terms in signature(m, namespace_filter).items():
            out[key] |= terms
    return out


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

_DECLARATION_TYPES = {
    vocab.OWL_CLASS: "class",
    vocab.RDFS + "Class": "class",
    vocab.OWL_OBJECT_PROPERTY: "object_property",
    vocab.OWL_DATATYPE_PROPERTY: "data_property",
    vocab.OWL_ANNOTATION_PROPERTY: "annotation_property",
    vocab.OWL_NAMED_INDIVIDUAL: "individual",
    vocab.RDF + "Property": "object_property",
}

# Annotation-ish predicates that are recognized plumbing, not unmodeled content.
_BENIGN_ANNOTATIONS = {
    vocab.RDFS_LABEL,
    vocab.RDFS_COMMENT,
    vocab.RDFS + "seeAlso",
    vocab.RDFS + "isDefinedBy",
    vocab.OWL + "versionInfo",
}

_REIFIED_KIND = {
    vocab.OWL_EQUIVALENT_CLASS: "equivalent-classes",
    vocab.RDFS_SUBCLASSOF: "sub-class-of",
    vocab.OWL_DISJOINT_WITH: "disjoint-classes",
    vocab.OWL_EQUIVALENT_PROPERTY: "equivalent-properties",
    vocab.RDFS_SUBPROPERTYOF: "sub-property-of",
    vocab.OWL_INVERSE_OF: "inverse-properties",
    vocab.RDFS_DOMAIN: "property-domain",
    vocab.RDFS_RANGE: "property-range",
    vocab.OWL_PROPERTY_CHAIN: "property-chain",
}


class _Extractor:
    def __init__(self, graph: Graph, source_label: str):
        self.graph = graph
        self.spo = graph.spo()
        self.model = OntologyModel(source_label=source_label)
        self.consumed: Set[Triple] = set()
        self.axiom_index: Dict[Tuple, Axiom] = {}
        self.swrl_variables: Set[Term] = set()

    # -- bookkeeping -------------------------------------------------------

    def consume(self, s: Term, p: str, o: Term) -> None:
        self.consumed.add(Triple(s, iri(p), o))

    def consume_all(self, subject: Term) -> None:
        for pred, objects in self.spo.get(subject, {}).items():
            for o in objects:
                self.consume(subject, pred, o)

    def add_axiom(self, axiom: Axiom) -> None:
        key = (axiom.kind, axiom.args)
        existing = self.axiom_index.get(key)
        if existing is None:
            self.axiom_index[key] = axiom
        elif axiom.annotations:
            self.axiom_index[key] = existing.with_annotations(axiom.annotations)

    # -- lists and expressions ---------------------------------------------

    def read_list(self, node: Term) -> List[Term]:
        items: List[Term] = []
        seen: Set[Term] = set()
        while True:
            if isinstance(node, Iri) and node.value == vocab.RDF_NIL:
                return items
            if node in seen:
                raise MalformedExpressionError("cyclic RDF list")
            seen.add(node)
            first = self.graph.object(node, vocab.RDF_FIRST)
            rest = self.graph.object(node, vocab.RDF_REST)
            if first is None or rest is None:
                raise MalformedExpressionError("RDF list node missing rdf:first/rdf:rest")
            self.consume(node, vocab.RDF_FIRST, first)
            self.consume(node, vocab.RDF_REST, rest)
            items.append(first)
            node = rest

    def class_expression(self, node: Term, _visiting: Optional[Set[Term]] = None) -> ClassExpression:
        if isinstance(node, Literal):
            raise MalformedExpressionError("literal in class expression position")
        if isinstance(node, Iri):
            return NamedClass(node)
        visiting = _visiting if _visiting is not None else set()
        if node in visiting:
            raise MalformedExpressionError("cyclic class expression structure")
        visiting.add(node)
        props = self.spo.get(node, {})

        def decode_operands(list_head: Term) -> Tuple[ClassExpression, ...]:
            items = self.read_list(list_head)
            if not items:
                raise MalformedExpressionError("empty operand list in class expression")
            return tuple(self.class_expression(i, visiting) for i in items)

        if vocab.OWL_INTERSECTION_OF in props:
            head = props[vocab.OWL_INTERSECTION_OF][0]
            self.consume(node, vocab.OWL_INTERSECTION_OF, head)
            self._consume_expression_type(node)
            ops = decode_operands(head)
            return ops[0] if len(ops) == 1 else Intersection(ops)
        if vocab.OWL_UNION_OF in props:
            head = props[vocab.OWL_UNION_OF][0]
            self.consume(node, vocab.OWL_UNION_OF, head)
            self._consume_expression_type(node)
            ops = decode_operands(head)
            return ops[0] if len(ops) == 1 else UnionOf(ops)
        if vocab.OWL_DISJOINT_UNION_OF in props:
            head = props[vocab.OWL_DISJOINT_UNION_OF][0]
            self.consume(node, vocab.OWL_DISJOINT_UNION_OF, head)
            self._consume_expression_type(node)
            ops = decode_operands(head)
            return ops[0] if len(ops) == 1 else DisjointUnionOf(ops)
        if vocab.OWL_COMPLEMENT_OF in props:
            operand = props[vocab.OWL_COMPLEMENT_OF][0]
            self.consume(node, vocab.OWL_COMPLEMENT_OF, operand)
            self._consume_expression_type(node)
            return Complement(self.class_expression(operand, visiting))
        if vocab.OWL_ON_PROPERTY in props:
            prop_node = props[vocab.OWL_ON_PROPERTY][0]
            filler = props.get(vocab.OWL_SOME_VALUES_FROM)
            if filler is None:
                raise UnsupportedExpressionError(
                    "restriction without owl:someValuesFrom is outside the supported fragment")
            self.consume(node, vocab.OWL_ON_PROPERTY, prop_node)
            self.consume(node, vocab.OWL_SOME_VALUES_FROM, filler[0])
            self._consume_expression_type(node)
            return SomeValuesFrom(self.property_expression(prop_node),
                                  self.class_expression(filler[0], visiting))
        raise UnsupportedExpressionError("blank node does not root a supported class expression")

    def _consume_expression_type(self, node: Term) -> None:
        for obj in self.graph.objects(node, vocab.RDF_TYPE):
            if isinstance(obj, Iri) and obj.value in (vocab.OWL_CLASS, vocab.OWL_RESTRICTION):
                self.consume(node, vocab.RDF_TYPE, obj)

    def property_expression(self, node: Term) -> PropertyExpression:
        if isinstance(node, Iri):
            return NamedProperty(node)
        if isinstance(node, BlankNode):
            inv = self.graph.object(node, vocab.OWL_INVERSE_OF)
            if inv is not None:
                self.consume(node, vocab.OWL_INVERSE_OF, inv)
                return inverse_of(self.property_expression(inv))
        raise MalformedExpressionError("node does not root a property expression")

    # -- passes --------------------------------------------------------------

    def run(self) -> OntologyModel:
        self._ontology_header()
        self._declarations()
        self._swrl_rules()
        self._reified_axioms()
        self._all_disjoint_classes()
        self._plain_triples()
        self._finish()
        return self.model

    def _declarations(self) -> None:
        """Record entity declarations up front so later passes can consult them."""
        for t in self.graph.triples:
            if t.predicate.value != vocab.RDF_TYPE or not isinstance(t.object, Iri):
                continue
            decl = _DECLARATION_TYPES.get(t.object.value)
            if decl is None:
                continue
            if isinstance(t.subject, Iri):
                target = {
                    "class": self.model.declared_classes,
                    "object_property": self.model.declared_object_properties,
                    "data_property": self.model.declared_data_properties,
                    "annotation_property": self.model.declared_annotation_properties,
                    "individual": self.model.declared_individuals,
                }[decl]
                target.add(t.subject.value)
            if decl != "data_property":
                # Data-property declarations stay visible as unmodeled content:
                # their mapping semantics are out of scope.
                self.consumed.add(t)

    def _ontology_header(self) -> None:
        for subject in self.graph.subjects_with(vocab.RDF_TYPE, iri(vocab.OWL_ONTOLOGY)):
            self.consume(subject, vocab.RDF_TYPE, iri(vocab.OWL_ONTOLOGY))
            if isinstance(subject, Iri):
                self.model.ontology_iri = subject.value
            version = self.graph.object(subject, vocab.OWL_VERSION_IRI)
            if isinstance(version, Iri):
                self.model.version_iri = version.value
                self.consume(subject, vocab.OWL_VERSION_IRI, version)
            derived = []
            for o in self.graph.objects(subject, vocab.PROV_WAS_DERIVED_FROM):
                if isinstance(o, Iri):
                    derived.append(o.value)
                    self.consume(subject, vocab.PROV_WAS_DERIVED_FROM, o)
            self.model.derived_from = tuple(sorted(derived))
            for o in self.graph.objects(subject, vocab.OWL_IMPORTS):
                self.consume(subject, vocab.OWL_IMPORTS, o)
            for pred in list(self.spo.get(subject, {})):
                if pred in _BENIGN_ANNOTATIONS:
                    for o in self.graph.objects(subject, pred):
                        self.consume(subject, pred, o)

    def _swrl_rules(self) -> None:
        variable_terms = set(self.graph.subjects_with(vocab.RDF_TYPE, iri(vocab.SWRL_VARIABLE)))
        self.swrl_variables = variable_terms
        for var in variable_terms:
            self.consume(var, vocab.RDF_TYPE, iri(vocab.SWRL_VARIABLE))
        for imp in self.graph.subjects_with(vocab.RDF_TYPE, iri(vocab.SWRL_IMP)):
            self.consume(imp, vocab.RDF_TYPE, iri(vocab.SWRL_IMP))
            body_head = []
            for slot in (vocab.SWRL_BODY, vocab.SWRL_HEAD):
                head_node = self.graph.object(imp, slot)
                if head_node is None:
                    raise MalformedExpressionError("swrl:Imp missing body or head")
                self.consume(imp, slot, head_node)
                atoms = []
                for atom_node in self._read_atom_list(head_node):
                    atoms.append(self._swrl_atom(atom_node))
                body_head.append(tuple(atoms))
            annotations = self._collect_annotations(
                imp, exclude={vocab.RDF_TYPE, vocab.SWRL_BODY, vocab.SWRL_HEAD})
            rule = SwrlRule(body=body_head[0], head=body_head[1], annotations=annotations)
            body_vars = set()
            for atom in rule.body:
                if isinstance(atom, ClassAtom):
                    body_vars.add(atom.var)
                else:
                    body_vars.update((atom.var1, atom.var2))
            head_vars = rule.variables() - body_vars
            for atom in rule.head:
                names = {atom.var} if isinstance(atom, ClassAtom) else {atom.var1, atom.var2}
                if names - body_vars:
                    raise UnsafeRuleError(
                        f"head variable(s) {sorted(names - body_vars)} never occur in the rule body")
            self.model.rules.append(rule)

    def _read_atom_list(self, node: Term) -> List[Term]:
        # Atom lists may carry rdf:type swrl:AtomList on each cons cell.
        items: List[Term] = []
        seen: Set[Term] = set()
        while True:
            if isinstance(node, Iri) and node.value == vocab.RDF_NIL:
                return items
            if node in seen:
                raise MalformedExpressionError("cyclic SWRL atom list")
            seen.add(node)
            for obj in self.graph.objects(node, vocab.RDF_TYPE):
                if isinstance(obj, Iri) and obj.value in (vocab.SWRL_ATOM_LIST, vocab.RDF + "List"):
                    self.consume(node, vocab.RDF_TYPE, obj)
            first = self.graph.object(node, vocab.RDF_FIRST)
            rest = self.graph.object(node, vocab.RDF_REST)
            if first is None or rest is None:
                raise MalformedExpressionError("SWRL atom list node missing rdf:first/rdf:rest")
            self.consume(node, vocab.RDF_FIRST, first)
            self.consume(node, vocab.RDF_REST, rest)
            items.append(first)
            node = rest

    def _swrl_variable_name(self, term: Optional[Term]) -> str:
        if term is None or term not in self.swrl_variables:
            raise UnsupportedAtomError(
                "SWRL atom argument is not a declared swrl:Variable")
        if isinstance(term, Iri):
            return term.value
        return f"_:{term.node_id}"

    def _swrl_atom(self, node: Term) -> Atom:
        types = [o.value for o in self.graph.objects(node, vocab.RDF_TYPE) if isinstance(o, Iri)]
        if vocab.SWRL_CLASS_ATOM in types:
            self.consume(node, vocab.RDF_TYPE, iri(vocab.SWRL_CLASS_ATOM))
            cls_node = self.graph.object(node, vocab.SWRL_CLASS_PREDICATE)
            arg1 = self.graph.object(node, vocab.SWRL_ARGUMENT1)
            if cls_node is None:
                raise MalformedExpressionError("SWRL class atom missing classPredicate")
            self.consume(node, vocab.SWRL_CLASS_PREDICATE, cls_node)
            if arg1 is not None:
                self.consume(node, vocab.SWRL_ARGUMENT1, arg1)
            return ClassAtom(self.class_expression(cls_node), self._swrl_variable_name(arg1))
        if vocab.SWRL_INDIVIDUAL_PROPERTY_ATOM in types:
            self.consume(node, vocab.RDF_TYPE, iri(vocab.SWRL_INDIVIDUAL_PROPERTY_ATOM))
            prop_node = self.graph.object(node, vocab.SWRL_PROPERTY_PREDICATE)
            arg1 = self.graph.object(node, vocab.SWRL_ARGUMENT1)
            arg2 = self.graph.object(node, vocab.SWRL_ARGUMENT2)
            if prop_node is None:
                raise MalformedExpressionError("SWRL property atom missing propertyPredicate")
            self.consume(node, vocab.SWRL_PROPERTY_PREDICATE, prop_node)
            if arg1 is not None:
                self.consume(node, vocab.SWRL_ARGUMENT1, arg1)
            if arg2 is not None:
                self.consume(node, vocab.SWRL_ARGUMENT2, arg2)
            return PropertyAtom(self.property_expression(prop_node),
                                self._swrl_variable_name(arg1),
                                self._swrl_variable_name(arg2))
        raise UnsupportedAtomError(
            f"unsupported SWRL atom type(s) {sorted(types)}; only class and "
            "individual-property atoms are handled")

    def _collect_annotations(self, node: Term, exclude: Set[str]) -> Tuple[Annotation, ...]:
        pairs: List[Annotation] = []
        for pred, objects in self.spo.get(node, {}).items():
            if pred in exclude:
                continue
            for o in objects:
                pairs.append((pred, o))
                self.consume(node, pred, o)
        pairs.sort(key=lambda kv: (kv[0], term_sort_key(kv[1])))
        return tuple(pairs)

    def _reified_axioms(self) -> None:
        for node in self.graph.subjects_with(vocab.RDF_TYPE, iri(vocab.OWL_AXIOM)):
            source = self.graph.object(node, vocab.OWL_ANNOTATED_SOURCE)
            prop = self.graph.object(node, vocab.OWL_ANNOTATED_PROPERTY)
            target = self.graph.object(node, vocab.OWL_ANNOTATED_TARGET)
            if source is None or prop is None or target is None or not isinstance(prop, Iri):
                continue  # incomplete reification: leave its triples unmodeled
            structural = {vocab.RDF_TYPE, vocab.OWL_ANNOTATED_SOURCE,
                          vocab.OWL_ANNOTATED_PROPERTY, vocab.OWL_ANNOTATED_TARGET}
            try:
                axiom = self._decode_statement(source, prop.value, target)
            except UnsupportedExpressionError:
                continue  # outside the fragment: the node's triples stay unmodeled
            if axiom is None:
                continue
            self.consume(node, vocab.RDF_TYPE, iri(vocab.OWL_AXIOM))
            self.consume(node, vocab.OWL_ANNOTATED_SOURCE, source)
            self.consume(node, vocab.OWL_ANNOTATED_PROPERTY, prop)
            self.consume(node, vocab.OWL_ANNOTATED_TARGET, target)
            annotations = self._collect_annotations(node, exclude=structural)
            if isinstance(axiom, SwrlRule):
                self.model.rules.append(SwrlRule(axiom.body, axiom.head, annotations))
            else:
                self.add_axiom(axiom.with_annotations(annotations))

    def _decode_statement(self, s: Term, p: str, o: Term) -> Optional[Axiom]:
        """Fold one (s, p, o) with a recognized axiom predicate into an Axiom."""
        kind = _REIFIED_KIND.get(p)
        if p in vocab.SKOS_MAPPING_PREDICATES:
            return Axiom("skos-related", (p, s, o))
        if kind is None:
            return None
        if kind in ("sub-class-of", "equivalent-classes", "disjoint-classes"):
            return Axiom(kind, (self.class_expression(s), self.class_expression(o)))
        if kind in ("sub-property-of", "equivalent-properties", "inverse-properties"):
            return Axiom(kind, (self.property_expression(s), self.property_expression(o)))
        if kind in ("property-domain", "property-range"):
            return Axiom(kind, (self.property_expression(s), self.class_expression(o)))
        if kind == "property-chain":
            chain = tuple(self.property_expression(x) for x in self.read_list(o))
            if len(chain) < 2:
                raise MalformedExpressionError("property chain needs at least two links")
            return Axiom("property-chain", (chain, self.property_expression(s)))
        return None

    def _all_disjoint_classes(self) -> None:
        for node in self.graph.subjects_with(vocab.RDF_TYPE, iri(vocab.OWL_ALL_DISJOINT_CLASSES)):
            members = self.graph.object(node, vocab.OWL_MEMBERS)
            if members is None:
                continue
            try:
                classes = [self.class_expression(x) for x in self.read_list(members)]
            except UnsupportedExpressionError:
                continue
            self.consume(node, vocab.RDF_TYPE, iri(vocab.OWL_ALL_DISJOINT_CLASSES))
            self.consume(node, vocab.OWL_MEMBERS, members)
            for i in range(len(classes)):
                for j in range(i + 1, len(classes)):
                    self.add_axiom(Axiom("disjoint-classes", (classes[i], classes[j])))

    def _plain_triples(self) -> None:
        for t in sorted(self.graph.triples, key=triple_sort_key):
            if t in self.consumed:
                continue
            s, p, o = t.subject, t.predicate.value, t.object
            try:
                handled = self._plain_triple(s, p, o)
            except UnsupportedExpressionError:
                handled = False  # outside the fragment: keep the triple unmodeled
            if handled:
                self.consume(s, p, o)

    def _plain_triple(self, s: Term, p: str, o: Term) -> bool:
        if p == vocab.RDF_TYPE:
            return self._type_triple(s, o)
        if p == vocab.OWL_DISJOINT_UNION_OF and isinstance(s, Iri):
            ops = tuple(self.class_expression(x) for x in self.read_list(o))
            if len(ops) < 2:
                raise MalformedExpressionError("owl:disjointUnionOf needs at least two operands")
            self.add_axiom(Axiom("disjoint-union", (NamedClass(s), ops)))
            return True
        if p == vocab.OWL_INVERSE_OF and isinstance(s, BlankNode):
            return False  # anonymous inverse: consumed by expression decoding when referenced
        axiom = self._decode_statement(s, p, o)
        if axiom is not None:
            self.add_axiom(axiom)
            return True
        if p in _BENIGN_ANNOTATIONS or p in self.model.declared_annotation_properties:
            return True
        if _is_builtin(p):
            return False
        if isinstance(s, Literal):
            return False
        # Everything else with a non-vocabulary predicate is a property assertion.
        self.add_axiom(Axiom("property-assertion", (NamedProperty(iri(p)), s, o)))
        return True

    def _type_triple(self, s: Term, o: Term) -> bool:
        if isinstance(o, Iri):
            if o.value in _DECLARATION_TYPES:
                return False  # handled by the declarations pass
            if _is_builtin(o.value):
                return False
            self.add_axiom(Axiom("class-assertion", (s, NamedClass(o))))
            return True
        if isinstance(o, BlankNode):
            ce = self.class_expression(o)
            self.add_axiom(Axiom("class-assertion", (s, ce)))
            return True
        return False

    def _finish(self) -> None:
        self.model.axioms = sorted(self.axiom_index.values(), key=lambda a: repr((a.kind, a.args)))
        self.model.unmodeled = sorted(
            (t for t in self.graph.triples if t not in self.consumed), key=triple_sort_key)


def extract_axioms(graph: Graph, source_label: str = "") -> OntologyModel:
    """Extract the structured OWL content of a parsed graph."""
    return _Extractor(graph, source_label).run()


def parse_class_expression(graph: Graph, node: Term) -> ClassExpression:
    """Decode the class expression rooted at ``node``.

    Named IRIs decode to named classes; blank nodes must root a supported
    expression (intersection, union, disjoint union, complement, or an
    existential restriction).
    """
    return _Extractor(graph, "").class_expression(node)


def extract_swrl_rules(graph: Graph) -> List[SwrlRule]:
    """Extract every swrl:Imp in the graph as a rule, preserving atom order."""
    extractor = _Extractor(graph, "")
    extractor._swrl_rules()
    return extractor.model.rules


# ---------------------------------------------------------------------------
# Expression encoding (inverse of parse_class_expression)
# ---------------------------------------------------------------------------

class _Encoder:
    def __init__(self, graph: Graph, scope: int):
        self.graph = graph
        self.scope = scope
        self.count = 0

    def fresh(self) -> BlankNode:
        node = BlankNode(f"e{self.count}", self.scope)
        self.count += 1
        return node

    def encode_list(self, items: Sequence[Term]) -> Term:
        if not items:
            return iri(vocab.RDF_NIL)
        head = self.fresh()
        current = head
        for i, item in enumerate(items):
            self.graph.add_triple(current, iri(vocab.RDF_FIRST), item)
            if i + 1 < len(items):
                nxt = self.fresh()
                self.graph.add_triple(current, iri(vocab.RDF_REST), nxt)
                current = nxt
            else:
                self.graph.add_triple(current, iri(vocab.RDF_REST), iri(vocab.RDF_NIL))
        return head

    def class_expression(self, ce: ClassExpression) -> Term:
        if isinstance(ce, NamedClass):
            return ce.iri
        node = self.fresh()
        if isinstance(ce, (Intersection, UnionOf, DisjointUnionOf)):
            pred = {
                Intersection: vocab.OWL_INTERSECTION_OF,
                UnionOf: vocab.OWL_UNION_OF,
                DisjointUnionOf: vocab.OWL_DISJOINT_UNION_OF,
            }[type(ce)]
            self.graph.add_triple(node, iri(vocab.RDF_TYPE), iri(vocab.OWL_CLASS))
            members = self.encode_list([self.class_expression(o) for o in ce.operands])
            self.graph.add_triple(node, iri(pred), members)
            return node
        if isinstance(ce, Complement):
            self.graph.add_triple(node, iri(vocab.RDF_TYPE), iri(vocab.OWL_CLASS))
            self.graph.add_triple(node, iri(vocab.OWL_COMPLEMENT_OF), self.class_expression(ce.operand))
            return node
        self.graph.add_triple(node, iri(vocab.RDF_TYPE), iri(vocab.OWL_RESTRICTION))
        self.graph.add_triple(node, iri(vocab.OWL_ON_PROPERTY), self.property_expression(ce.prop))
        self.graph.add_triple(node, iri(vocab.OWL_SOME_VALUES_FROM), self.class_expression(ce.filler))
        return node

    def property_expression(self, pe: PropertyExpression) -> Term:
        if isinstance(pe, NamedProperty):
            return pe.iri
        node = self.fresh()
        self.graph.add_triple(node, iri(vocab.OWL_INVERSE_OF), pe.operand.iri)
        return node


def encode_class_expression(graph: Graph, ce: ClassExpression, scope: Optional[int] = None) -> Term:
    """Emit the RDF encoding of an expression into ``graph``; returns its root."""
    return _Encoder(graph, scope if scope is not None else new_scope()).class_expression(ce)
