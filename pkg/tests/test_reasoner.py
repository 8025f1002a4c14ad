import random

import pytest

from provalign import vocab
from provalign.fixtures import load_model
from provalign.owl import (
    Axiom,
    Intersection,
    NamedClass,
    NamedProperty,
    OntologyModel,
    extract_axioms,
)
from provalign.rdf import iri
from provalign.reasoner import (
    FactCapExceededError,
    UnknownFactError,
    check_clash,
    class_fact,
    class_satisfiable,
    entailed_taxonomy,
    explain,
    materialize,
    prop_fact,
)
from provalign.turtle import parse_turtle

HEADER = """
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix swrl: <http://www.w3.org/2003/11/swrl#> .
@prefix prov: <http://www.w3.org/ns/prov#> .
@prefix obo: <http://purl.obolibrary.org/obo/> .
@prefix ex: <http://example.org/> .
"""

EX = "http://example.org/"
PROV = "http://www.w3.org/ns/prov#"
OBO = "http://purl.obolibrary.org/obo/"


def model_of(body):
    return extract_axioms(parse_turtle(HEADER + body))


def kb_of(tbox_body, abox_body="", **options):
    tbox = model_of(tbox_body)
    abox = parse_turtle(HEADER + abox_body) if abox_body else None
    return materialize([tbox], abox, **options)


def has_class(kb, individual, class_iri):
    return kb.has_class(iri(individual), NamedClass(iri(class_iri)))


def test_empty_inputs_empty_closure():
    kb = materialize([OntologyModel()])
    assert kb.derived_count == 0
    assert check_clash(kb) == []


def test_subclass_and_equivalence_propagation():
    kb = kb_of("ex:A rdfs:subClassOf ex:B . ex:B owl:equivalentClass ex:C .",
               "ex:i a ex:A .")
    assert has_class(kb, EX + "i", EX + "B")
    assert has_class(kb, EX + "i", EX + "C")


def test_subproperty_and_inverse():
    kb = kb_of("ex:p rdfs:subPropertyOf ex:q . ex:q owl:inverseOf ex:r .",
               "ex:a ex:p ex:b .")
    assert kb.has_prop(EX + "q", iri(EX + "a"), iri(EX + "b"))
    assert kb.has_prop(EX + "r", iri(EX + "b"), iri(EX + "a"))


def test_domain_and_range():
    kb = kb_of("ex:p rdfs:domain ex:C . ex:p rdfs:range ex:D .", "ex:a ex:p ex:b .")
    assert has_class(kb, EX + "a", EX + "C")
    assert has_class(kb, EX + "b", EX + "D")


def test_domain_fires_on_literal_object_range_does_not():
    kb = kb_of("ex:p rdfs:domain ex:C . ex:p rdfs:range ex:D .", 'ex:a ex:p "1952" .')
    assert has_class(kb, EX + "a", EX + "C")
    assert all(f[0] != "class" or f[1] != iri(EX + "D") for f in kb.fact_keys())


def test_fig9_domain_inference_yields_entity_influence(prov):
    abox = parse_turtle(HEADER + "ex:d prov:entity ex:s .")
    kb = materialize([prov], abox)
    assert has_class(kb, EX + "d", PROV + "EntityInfluence")
    trace = explain(kb, class_fact(iri(EX + "d"), NamedClass(iri(PROV + "EntityInfluence"))))
    assert trace.rule == "domain"
    assert trace.children[0].rule == "asserted"


def test_intersection_decomposition_and_composition():
    kb = kb_of("ex:E owl:equivalentClass [ owl:intersectionOf ( ex:A ex:B ) ] .",
               "ex:i a ex:A . ex:i a ex:B . ex:j a ex:E .")
    assert has_class(kb, EX + "i", EX + "E")
    assert has_class(kb, EX + "j", EX + "A")
    assert has_class(kb, EX + "j", EX + "B")


def test_existential_superclass_skolemizes_with_memo():
    kb = kb_of("""
    ex:A rdfs:subClassOf [ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:B ] .
    """, "ex:i a ex:A .")
    witnesses = [o for s, o in kb.prop_index.get(EX + "p", []) if s == iri(EX + "i")]
    assert len(witnesses) == 1
    assert kb.has_class(witnesses[0], NamedClass(iri(EX + "B")))


def test_skolem_depth_bound_reports_budget():
    looping = """
    ex:A rdfs:subClassOf [ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:A ] .
    """
    kb = kb_of(looping, "ex:i a ex:A .", skolem_depth=3)
    assert kb.skolem_budget_exceeded
    depths = [d for d in kb.skolem_depths.values()]
    assert depths and max(depths) == 3


def test_existential_subclass_rule():
    kb = kb_of("""
    [ a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:B ] rdfs:subClassOf ex:E .
    """, "ex:a ex:p ex:b . ex:b a ex:B .")
    assert has_class(kb, EX + "a", EX + "E")


def test_property_chain():
    kb = kb_of("ex:r owl:propertyChainAxiom ( ex:p ex:q ) .",
               "ex:a ex:p ex:b . ex:b ex:q ex:c .")
    assert kb.has_prop(EX + "r", iri(EX + "a"), iri(EX + "c"))


def test_swrl_rule_fires(align_model, prov):
    abox = parse_turtle(HEADER + "ex:run a prov:Activity ; prov:atLocation ex:lab .")
    kb = materialize([prov, align_model], abox)
    assert kb.has_prop(OBO + "BFO_0000066", iri(EX + "run"), iri(EX + "lab"))
    trace = explain(kb, prop_fact(OBO + "BFO_0000066", iri(EX + "run"), iri(EX + "lab")))
    assert trace.rule.startswith("swrl-rule")
    assert len(trace.children) == 2


def test_swrl_converse_rule_fires(align_model, prov):
    abox = parse_turtle(HEADER + "ex:run obo:BFO_0000066 ex:lab . ex:lab a prov:Location .")
    kb = materialize([prov, align_model], abox)
    assert kb.has_prop(PROV + "atLocation", iri(EX + "run"), iri(EX + "lab"))


def test_union_subclass_at_tbox_level_no_instance_case_split():
    kb = kb_of("""
    ex:A rdfs:subClassOf [ owl:unionOf ( ex:B ex:C ) ] .
    ex:B rdfs:subClassOf ex:D . ex:C rdfs:subClassOf ex:D .
    """, "ex:i a ex:A .")
    assert has_class(kb, EX + "i", EX + "D")
    # but membership in a specific disjunct is never invented
    assert not has_class(kb, EX + "i", EX + "B")
    assert not has_class(kb, EX + "i", EX + "C")


# -- clash detection -----------------------------------------------------------

def test_disjointness_clash_from_domains():
    kb = kb_of("""
    ex:C owl:disjointWith ex:D .
    ex:p rdfs:domain ex:C .
    """, "ex:a a ex:D . ex:a ex:p ex:b .")
    (clash,) = check_clash(kb)
    assert clash.kind == "disjointness-violation"
    assert clash.individual == iri(EX + "a")


def test_fig9_pattern_clash(prov, bfo, cco, ro, align_model):
    inst = load_model("instances/fig9.ttl")
    kb = materialize([prov, bfo, cco, ro, align_model, inst])
    clashes = check_clash(kb)
    assert len(clashes) == 1
    clash = clashes[0]
    assert clash.individual.value.endswith("digestedProteinSample1")
    participants = {ce.iri.value for ce in clash.participants}
    assert participants == {OBO + "BFO_0000002", OBO + "BFO_0000003"}
    rules = set()
    for fact in clash.trace_facts:
        rules |= explain(kb, fact).rules_used()
    assert "domain" in rules


def test_fig11_pattern_clash(prov, bfo, cco, ro, align_model):
    inst = load_model("instances/fig11.ttl")
    kb = materialize([prov, bfo, cco, ro, align_model, inst])
    clashes = check_clash(kb)
    assert len(clashes) == 1
    participants = {ce.iri.value for ce in clashes[0].participants}
    assert participants == {OBO + "BFO_0000015", OBO + "BFO_0000035"}
    rules = set()
    for fact in clashes[0].trace_facts:
        rules |= explain(kb, fact).rules_used()
    assert "domain" in rules and "subsumption" in rules


def test_complement_clash():
    kb = kb_of("""
    ex:A rdfs:subClassOf [ owl:complementOf ex:B ] .
    """, "ex:i a ex:A . ex:i a ex:B .")
    clashes = check_clash(kb)
    assert any(c.kind == "complement-violation" for c in clashes)


def test_nothing_membership_clash():
    kb = kb_of("ex:A rdfs:subClassOf owl:Nothing .", "ex:i a ex:A .")
    assert any(c.kind == "nothing-membership" for c in check_clash(kb))


def test_clash_free_fixture(prov, bfo, cco, ro, align_model):
    inst = load_model("instances/fig12.ttl")
    kb = materialize([prov, bfo, cco, ro, align_model, inst])
    assert check_clash(kb) == []


# -- satisfiability -------------------------------------------------------------

def test_intersection_of_disjoints_unsatisfiable(bfo):
    probe = Intersection((NamedClass(iri(OBO + "BFO_0000002")),
                          NamedClass(iri(OBO + "BFO_0000003"))))
    assert class_satisfiable([bfo], probe) is False


def test_thing_satisfiable(bfo):
    assert class_satisfiable([bfo], NamedClass(iri(vocab.OWL_THING))) is True


def test_every_named_class_satisfiable_in_clash_free_stack(full_stack):
    from provalign.owl import merged_signature
    names = sorted(merged_signature(full_stack)["classes"])
    assert names  # enumeration oracle: every single named class probes clean
    for name in names:
        assert class_satisfiable(full_stack, NamedClass(iri(name))), name


# -- taxonomy -------------------------------------------------------------------

def test_transitivity():
    tax = entailed_taxonomy([model_of("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C .")])
    assert (EX + "A", EX + "C") in tax.subclass_pairs


def test_counterexample_agent_under_entity(bfo):
    align = model_of("""
    prov:Entity owl:equivalentClass obo:BFO_0000002 .
    prov:Agent rdfs:subClassOf obo:BFO_0000002 .
    """)
    tax = entailed_taxonomy([align, bfo])
    assert (PROV + "Agent", PROV + "Entity") in tax.subclass_pairs


def test_equivalence_members_subsume_both_ways():
    tax = entailed_taxonomy([model_of("ex:A owl:equivalentClass ex:B .")])
    assert (EX + "A", EX + "B") in tax.subclass_pairs
    assert (EX + "B", EX + "A") in tax.subclass_pairs
    assert (EX + "A", EX + "B") in tax.equivalent_class_pairs


def test_property_hierarchy_with_inverse_symmetry():
    tax = entailed_taxonomy([model_of("""
    ex:p rdfs:subPropertyOf ex:r .
    ex:q owl:inverseOf ex:p .
    ex:s owl:inverseOf ex:r .
    """)])
    assert (EX + "p", EX + "r") in tax.subproperty_pairs
    assert (EX + "q", EX + "s") in tax.subproperty_pairs


def _random_tbox_models(rng, n_classes):
    names = [f"{EX}C{i}" for i in range(n_classes)]
    model = OntologyModel()
    edges = []
    for _ in range(rng.randrange(0, 2 * n_classes)):
        a, b = rng.sample(names, 2)
        if rng.random() < 0.2:
            model.axioms.append(Axiom("equivalent-classes",
                                      (NamedClass(iri(a)), NamedClass(iri(b)))))
            edges.append((a, b))
            edges.append((b, a))
        else:
            model.axioms.append(Axiom("sub-class-of",
                                      (NamedClass(iri(a)), NamedClass(iri(b)))))
            edges.append((a, b))
    return model, names, edges


def _reachability_closure(names, edges):
    """Independent oracle: per-node BFS over the subsumption digraph."""
    adjacency = {n: set() for n in names}
    for a, b in edges:
        adjacency[a].add(b)
    pairs = set()
    for start in names:
        seen = set()
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        for other in seen:
            if other != start:
                pairs.add((start, other))
    return pairs


def test_taxonomy_matches_reachability_oracle_on_random_tboxes():
    rng = random.Random(20240113)
    for trial in range(200):
        model, names, edges = _random_tbox_models(rng, rng.randrange(2, 21))
        expected = _reachability_closure(names, edges)
        actual = entailed_taxonomy([model]).subclass_pairs
        assert actual == expected, f"trial {trial}"


# -- closure properties ----------------------------------------------------------

def test_monotonicity_of_materialization(prov, align_model):
    base = parse_turtle(HEADER + "ex:d prov:entity ex:s .")
    bigger = parse_turtle(HEADER + "ex:d prov:entity ex:s . ex:d a prov:Entity .")
    kb_small = materialize([prov, align_model], base)
    kb_big = materialize([prov, align_model], bigger)
    assert set(kb_small.fact_keys()) <= set(kb_big.fact_keys())


def test_idempotence_second_run_adds_nothing(prov, bfo, align_model):
    inst = load_model("instances/fig9.ttl")
    kb = materialize([prov, bfo, align_model, inst])
    replay = OntologyModel(source_label="replay")
    for fact in kb.fact_keys():
        if fact[0] == "class":
            replay.axioms.append(Axiom("class-assertion", (fact[1], fact[2])))
        else:
            replay.axioms.append(Axiom("property-assertion",
                                       (NamedProperty(iri(fact[1])), fact[2], fact[3])))
    kb2 = materialize([prov, bfo, align_model, replay])
    assert set(kb2.fact_keys()) == set(kb.fact_keys())


def test_soundness_every_trace_premise_is_in_kb(prov, bfo, cco, ro, align_model):
    inst = load_model("instances/fig9.ttl")
    kb = materialize([prov, bfo, cco, ro, align_model, inst])
    facts = set(kb.fact_keys())
    for fact in facts:
        for premise in kb.traces[fact].premises:
            assert premise in facts


def test_determinism_same_inputs_same_closure(prov, bfo, cco, ro, align_model):
    inst = load_model("instances/fig9.ttl")
    kb1 = materialize([prov, bfo, cco, ro, align_model, inst])
    kb2 = materialize([prov, bfo, cco, ro, align_model, inst])
    assert kb1.fact_keys() == kb2.fact_keys()
    assert kb1.traces == kb2.traces


def test_fact_cap_raises():
    with pytest.raises(FactCapExceededError):
        kb_of("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C .",
              "ex:i a ex:A .", fact_cap=2)


def test_explain_asserted_fact_is_leaf(prov):
    abox = parse_turtle(HEADER + "ex:i a prov:Entity .")
    kb = materialize([prov], abox)
    node = explain(kb, class_fact(iri(EX + "i"), NamedClass(iri(PROV + "Entity"))))
    assert node.rule == "asserted" and node.children == []


def test_explain_unknown_fact(prov):
    kb = materialize([prov])
    with pytest.raises(UnknownFactError):
        explain(kb, class_fact(iri(EX + "ghost"), NamedClass(iri(PROV + "Entity"))))


def test_fig11_trace_cites_domain_then_equivalence(prov, bfo, align_model):
    inst = load_model("instances/fig11.ttl")
    kb = materialize([prov, bfo, align_model, inst])
    sort_activity = iri("https://example.org/provalign/examples/sort#sortActivity")
    fact = class_fact(sort_activity, NamedClass(iri(OBO + "BFO_0000035")))
    node = explain(kb, fact)
    # follow recorded premises: process-boundary <- InstantaneousEvent <- atTime domain
    assert node.rule == "subsumption"
    chain = node
    rules = []
    while chain.children:
        rules.append(chain.rule)
        chain = chain.children[0]
    rules.append(chain.rule)
    assert rules[-1] == "asserted"
    assert "domain" in rules
