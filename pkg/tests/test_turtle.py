import pytest

from provalign import vocab
from provalign.fixtures import FIXTURE_NAMES, INSTANCE_NAMES, fixture_text
from provalign.rdf import BlankNode, Literal, Triple, graph_isomorphic, iri
from provalign.turtle import ParseDiagnostic, TurtleParseError, parse_turtle, serialize_turtle

PREFIXES = """
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix ex: <http://example.org/> .
"""


def test_empty_document():
    assert len(parse_turtle("")) == 0


def test_comment_only_document():
    assert len(parse_turtle("# nothing here\n")) == 0


def test_reified_axiom_block():
    doc = """
    @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
    @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
    @prefix owl: <http://www.w3.org/2002/07/owl#> .
    @prefix prov: <http://www.w3.org/ns/prov#> .
    @prefix obo: <http://purl.obolibrary.org/obo/> .
    @prefix sssom: <https://w3id.org/sssom/> .

    [ ] rdf:type owl:Axiom ;
        owl:annotatedSource    prov:Activity ;
        owl:annotatedProperty  owl:equivalentClass ;
        owl:annotatedTarget    obo:BFO_0000015 ;
        sssom:object_label      "process" ;
        rdfs:comment "An activity happens over time without being a temporal region."@en .
    """
    g = parse_turtle(doc)
    assert len(g) == 6
    subjects = {t.subject for t in g}
    assert len(subjects) == 1
    (node,) = subjects
    assert isinstance(node, BlankNode)
    preds = {t.predicate.value for t in g}
    assert vocab.OWL_ANNOTATED_SOURCE in preds
    assert vocab.OWL_ANNOTATED_PROPERTY in preds
    assert vocab.OWL_ANNOTATED_TARGET in preds


def test_fig7_snippet_types_and_datetime():
    g = parse_turtle(fixture_text("instances/fig7.ttl"))
    illustration = iri("https://example.org/provalign/examples/chart#illustration")
    instantaneous = iri("http://www.w3.org/ns/prov#InstantaneousEvent")
    assert Triple(illustration, iri(vocab.RDF_TYPE), instantaneous) in g
    datetimes = [t.object for t in g
                 if isinstance(t.object, Literal) and t.object.datatype == vocab.XSD_DATETIME]
    assert Literal("2012-04-03T00:00:11Z", datatype=vocab.XSD_DATETIME) in datetimes


def test_collection_expands_to_first_rest_chain():
    g = parse_turtle(PREFIXES + "ex:s ex:p ( ex:a ex:b ) .")
    firsts = [t for t in g if t.predicate.value == vocab.RDF_FIRST]
    rests = [t for t in g if t.predicate.value == vocab.RDF_REST]
    assert len(firsts) == 2 and len(rests) == 2
    assert any(t.object == iri(vocab.RDF_NIL) for t in rests)
    assert len(g) == 5  # 4 list triples + the containing statement


def test_empty_collection_is_nil():
    g = parse_turtle(PREFIXES + "ex:s ex:p ( ) .")
    assert Triple(iri("http://example.org/s"), iri("http://example.org/p"),
                  iri(vocab.RDF_NIL)) in g


def test_object_and_predicate_lists():
    g = parse_turtle(PREFIXES + "ex:s ex:p ex:a , ex:b ; ex:q ex:c .")
    assert len(g) == 3


def test_literal_forms():
    g = parse_turtle(PREFIXES + """
    ex:s ex:int 42 ;
         ex:neg -7 ;
         ex:dec 4.25 ;
         ex:dbl 4.2e1 ;
         ex:flag true ;
         ex:plain "hello" ;
         ex:tagged "bonjour"@fr ;
         ex:typed "2012-04-03T00:00:11Z"^^xsd:dateTime ;
         ex:long \"\"\"line one
line two\"\"\" ;
         ex:escaped "tab\\there \\"quoted\\" back\\\\slash \\u00e9" .
    """)
    objects = {t.predicate.value.split("/")[-1]: t.object for t in g}
    assert objects["int"] == Literal("42", datatype=vocab.XSD_INTEGER)
    assert objects["neg"] == Literal("-7", datatype=vocab.XSD_INTEGER)
    assert objects["dec"] == Literal("4.25", datatype=vocab.XSD_DECIMAL)
    assert objects["dbl"] == Literal("4.2e1", datatype=vocab.XSD_DOUBLE)
    assert objects["flag"] == Literal("true", datatype=vocab.XSD_BOOLEAN)
    assert objects["plain"] == Literal("hello", datatype=vocab.XSD_STRING)
    assert objects["tagged"] == Literal("bonjour", language="fr")
    assert objects["typed"].datatype == vocab.XSD_DATETIME
    assert objects["long"].lexical == "line one\nline two"
    assert objects["escaped"].lexical == 'tab\there "quoted" back\\slash é'


def test_anonymous_bnode_and_nesting():
    g = parse_turtle(PREFIXES + "ex:s ex:p [ ex:q [ ex:r ex:o ] ] .")
    assert len(g) == 3
    assert len(g.blank_nodes()) == 2


def test_labelled_bnodes_are_shared():
    g = parse_turtle(PREFIXES + "_:x ex:p ex:a . _:x ex:q ex:b .")
    assert len(g.blank_nodes()) == 1


def test_base_resolution():
    g = parse_turtle("@base <http://example.org/data/> . <chart> a <Chart> .")
    assert Triple(iri("http://example.org/data/chart"), iri(vocab.RDF_TYPE),
                  iri("http://example.org/data/Chart")) in g


def test_sparql_style_directives():
    g = parse_turtle("PREFIX ex: <http://e/>\nBASE <http://b/>\nex:s ex:p <rel> .")
    assert Triple(iri("http://e/s"), iri("http://e/p"), iri("http://b/rel")) in g


@pytest.mark.parametrize("doc,fragment", [
    ("ex:s ex:p ex:o .", "unknown prefix"),
    ('@prefix ex: <http://e/> . ex:s ex:p "unterminated .', "unterminated literal"),
    ("@prefix ex: <http://e/> . ex:s ex:p .", "expected"),
    ("@prefix ex: <http://e/> . ex:s ex:p ex:o", "expected '.'"),
    ("<< ex:a ex:b ex:c >> ex:p ex:o .", "quoted triples"),
    ("{ ex:a ex:b ex:c } => { ex:d ex:e ex:f } .", "TriG"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(TurtleParseError) as err:
        parse_turtle(doc)
    diag = err.value.diagnostics[0]
    assert isinstance(diag, ParseDiagnostic)
    assert fragment.lower() in diag.message.lower()
    assert diag.line >= 1 and diag.column >= 1


def test_diagnostic_position_points_at_offender():
    with pytest.raises(TurtleParseError) as err:
        parse_turtle('@prefix ex: <http://e/> .\nex:s ex:p "oops .')
    diag = err.value.diagnostics[0]
    assert diag.line == 2


@pytest.mark.parametrize("name", list(FIXTURE_NAMES) + list(INSTANCE_NAMES))
def test_fixture_round_trip(name):
    original = parse_turtle(fixture_text(name))
    replayed = parse_turtle(serialize_turtle(original))
    assert graph_isomorphic(parse_turtle(serialize_turtle(replayed)), original)


def test_serializer_is_deterministic():
    g = parse_turtle(fixture_text("align-paper.ttl"))
    assert serialize_turtle(g) == serialize_turtle(g)


def test_serialize_empty_graph():
    g = parse_turtle("")
    assert serialize_turtle(g) == ""
    g2 = parse_turtle("@prefix ex: <http://e/> .")
    assert serialize_turtle(g2).startswith("@prefix ex:")


def test_serialize_single_triple_round_trips():
    g = parse_turtle(PREFIXES + "ex:a a ex:B .")
    out = serialize_turtle(g)
    assert graph_isomorphic(parse_turtle(out), g)
