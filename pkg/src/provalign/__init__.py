"""Verification toolkit for ontology alignments over OWL/RDF Turtle.

Parses the ontologies and the alignment, materializes their consequences
with a forward-chaining reasoner, and checks the alignment for totality,
coherence, consistency (against instance data), and conservativity. Also
suggests candidate object-property mappings by domain/range compatibility
and exports simple mappings to SSSOM-style CSV.
"""

from .rdf import (
    BlankNode,
    Graph,
    Iri,
    IsomorphismLimitError,
    Literal,
    MissingBaseError,
    Term,
    Triple,
    UnknownPrefixError,
    graph_isomorphic,
    iri,
    iri_resolve,
)
from .turtle import ParseDiagnostic, TurtleParseError, parse_turtle, serialize_turtle
from .owl import (
    Axiom,
    ClassAtom,
    Complement,
    DisjointUnionOf,
    Intersection,
    InverseProperty,
    MalformedExpressionError,
    NamedClass,
    NamedProperty,
    OntologyModel,
    PropertyAtom,
    SomeValuesFrom,
    SwrlRule,
    UnionOf,
    UnsafeRuleError,
    UnsupportedAtomError,
    encode_class_expression,
    extract_axioms,
    extract_swrl_rules,
    merge_models,
    parse_class_expression,
    signature,
)
from .reasoner import (
    Clash,
    ClosedKB,
    FactCapExceededError,
    Taxonomy,
    TBoxIndex,
    UnknownFactError,
    class_satisfiable,
    check_clash,
    class_fact,
    entailed_taxonomy,
    explain,
    materialize,
    prop_fact,
)
from .alignment import (
    Alignment,
    Mapping,
    NamespaceOverlapError,
    UnsupportedPredicateError,
    export_sssom,
    extract_mappings,
    serialize_mapping,
)
from .checks import (
    CoherenceReport,
    ConservativityReport,
    ConsistencyReport,
    TotalityReport,
    alignment_stats,
    check_coherence,
    check_conservativity,
    check_consistency,
    check_totality,
    report_text,
)
from .matcher import (
    Candidate,
    SuggestionResult,
    UnknownPropertyError,
    effective_domain_range,
    suggest_property_mappings,
)

__version__ = "0.1.0"
