"""Well-known namespace IRIs used throughout the toolkit."""

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SWRL = "http://www.w3.org/2003/11/swrl#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
SSSOM = "https://w3id.org/sssom/"
PROV = "http://www.w3.org/ns/prov#"
OBO = "http://purl.obolibrary.org/obo/"
CCO = "https://www.commoncoreontologies.org/"

RDF_TYPE = RDF + "type"
RDF_FIRST = RDF + "first"
RDF_REST = RDF + "rest"
RDF_NIL = RDF + "nil"
RDF_LANG_STRING = RDF + "langString"

RDFS_SUBCLASSOF = RDFS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS + "subPropertyOf"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
RDFS_COMMENT = RDFS + "comment"
RDFS_LABEL = RDFS + "label"

OWL_THING = OWL + "Thing"
OWL_NOTHING = OWL + "Nothing"
OWL_CLASS = OWL + "Class"
OWL_OBJECT_PROPERTY = OWL + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL + "DatatypeProperty"
OWL_ANNOTATION_PROPERTY = OWL + "AnnotationProperty"
OWL_NAMED_INDIVIDUAL = OWL + "NamedIndividual"
OWL_ONTOLOGY = OWL + "Ontology"
OWL_AXIOM = OWL + "Axiom"
OWL_EQUIVALENT_CLASS = OWL + "equivalentClass"
OWL_EQUIVALENT_PROPERTY = OWL + "equivalentProperty"
OWL_DISJOINT_WITH = OWL + "disjointWith"
OWL_DISJOINT_UNION_OF = OWL + "disjointUnionOf"
OWL_ALL_DISJOINT_CLASSES = OWL + "AllDisjointClasses"
OWL_MEMBERS = OWL + "members"
OWL_INVERSE_OF = OWL + "inverseOf"
OWL_PROPERTY_CHAIN = OWL + "propertyChainAxiom"
OWL_INTERSECTION_OF = OWL + "intersectionOf"
OWL_UNION_OF = OWL + "unionOf"
OWL_COMPLEMENT_OF = OWL + "complementOf"
OWL_RESTRICTION = OWL + "Restriction"
OWL_ON_PROPERTY = OWL + "onProperty"
OWL_SOME_VALUES_FROM = OWL + "someValuesFrom"
OWL_ANNOTATED_SOURCE = OWL + "annotatedSource"
OWL_ANNOTATED_PROPERTY = OWL + "annotatedProperty"
OWL_ANNOTATED_TARGET = OWL + "annotatedTarget"
OWL_VERSION_IRI = OWL + "versionIRI"
OWL_IMPORTS = OWL + "imports"

SWRL_IMP = SWRL + "Imp"
SWRL_BODY = SWRL + "body"
SWRL_HEAD = SWRL + "head"
SWRL_VARIABLE = SWRL + "Variable"
SWRL_CLASS_ATOM = SWRL + "ClassAtom"
SWRL_INDIVIDUAL_PROPERTY_ATOM = SWRL + "IndividualPropertyAtom"
SWRL_CLASS_PREDICATE = SWRL + "classPredicate"
SWRL_PROPERTY_PREDICATE = SWRL + "propertyPredicate"
SWRL_ARGUMENT1 = SWRL + "argument1"
SWRL_ARGUMENT2 = SWRL + "argument2"
SWRL_ATOM_LIST = SWRL + "AtomList"

SKOS_MAPPING_PREDICATES = frozenset({
    SKOS + "relatedMatch",
    SKOS + "closeMatch",
    SKOS + "exactMatch",
    SKOS + "broadMatch",
    SKOS + "narrowMatch",
})

SSSOM_SUBJECT_LABEL = SSSOM + "subject_label"
SSSOM_OBJECT_LABEL = SSSOM + "object_label"
SSSOM_MAPPING_JUSTIFICATION = SSSOM + "mapping_justification"

PROV_WAS_DERIVED_FROM = PROV + "wasDerivedFrom"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
XSD_DATETIME = XSD + "dateTime"

# Namespaces whose terms never count as ontology signature vocabulary.
BUILTIN_NAMESPACES = (RDF, RDFS, OWL, SWRL, XSD)
