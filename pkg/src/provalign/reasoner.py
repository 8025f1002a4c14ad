"""Forward-chaining materialization over the supported OWL fragment plus SWRL.

The engine precomputes a subsumption closure over every class expression
occurring in the loaded axioms (asserted subsumptions and equivalences,
intersection decomposition and composition, union introduction, and the
union-subclass rule "a union is below anything all its operands are below").
Instance reasoning then propagates memberships along that closure and applies
the Horn-style rules for property hierarchy, inverses, domains and ranges,
existential restrictions (with depth-bounded skolem witnesses), property
chains, and SWRL rules, to fixpoint.

There is deliberately no instance-level case split on unions: the engine is
sound but incomplete relative to OWL 2 DL, which is sufficient for the clash
patterns this toolkit checks. Every derived fact records the rule and premise
facts that produced it, so verdicts can be explained.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from . import vocab
from .owl import (
    Axiom,
    ClassAtom,
    ClassExpression,
    Complement,
    DisjointUnionOf,
    Intersection,
    NamedClass,
    NamedProperty,
    OntologyModel,
    PropertyExpression,
    SomeValuesFrom,
    SwrlRule,
    UnionOf,
    extract_axioms,
    render_class_expression,
)
from .rdf import Graph, Iri, Literal, Term, term_sort_key


class ReasonerError(Exception):
    pass


class FactCapExceededError(ReasonerError):
    """The derived-fact count hit the nontermination guard."""


class UnknownFactError(ReasonerError):
    """explain() was asked about a fact that is not in the closure."""


# Fact keys: ("class", individual, expression) and ("prop", property-iri, s, o)
FactKey = Tuple


def class_fact(individual: Term, ce: ClassExpression) -> FactKey:
    return ("class", individual, ce)


def prop_fact(prop_iri: str, subject: Term, obj: Term) -> FactKey:
    return ("prop", prop_iri, subject, obj)


@dataclass(frozen=True, slots=True)
class Trace:
    rule: str
    premises: Tuple[FactKey, ...]
    detail: str = ""


@dataclass
class TraceNode:
    fact: FactKey
    rule: str
    detail: str
    children: List["TraceNode"] = field(default_factory=list)

    def rules_used(self) -> Set[str]:
        out = {self.rule}
        for child in self.children:
            out |= child.rules_used()
        return out


def _ce_key(ce: ClassExpression) -> str:
    return render_class_expression(ce)


def _expr_sort_key(ce: ClassExpression) -> Tuple:
    return (_ce_key(ce),)


# ---------------------------------------------------------------------------
# TBox index
# ---------------------------------------------------------------------------

PropKey = Tuple[str, bool]  # (property IRI, inverted?)


def _prop_key(pe: PropertyExpression) -> PropKey:
    if isinstance(pe, NamedProperty):
        return (pe.iri.value, False)
    return (pe.operand.iri.value, True)


def _flip(key: PropKey) -> PropKey:
    return (key[0], not key[1])


def _subexpressions(ce: ClassExpression) -> Iterable[ClassExpression]:
    yield ce
    if isinstance(ce, (Intersection, UnionOf, DisjointUnionOf)):
        for op in ce.operands:
            yield from _subexpressions(op)
    elif isinstance(ce, Complement):
        yield from _subexpressions(ce.operand)
    elif isinstance(ce, SomeValuesFrom):
        yield from _subexpressions(ce.filler)


class TBoxIndex:
    """Schema-level closure shared by every materialization over the same models."""

    def __init__(self, models: Sequence[OntologyModel]):
        self.universe: Set[ClassExpression] = {NamedClass(Iri(vocab.OWL_THING))}
        self.edges: Dict[ClassExpression, Set[ClassExpression]] = {}
        self.disjoint_pairs: Set[Tuple[ClassExpression, ClassExpression]] = set()
        self.domains: Dict[str, List[ClassExpression]] = {}
        self.ranges: Dict[str, List[ClassExpression]] = {}
        self.inverse_pairs: Dict[str, Set[str]] = {}
        self.prop_edges: Dict[PropKey, Set[PropKey]] = {}
        self.prop_keys: Set[PropKey] = set()
        self.chains: List[Tuple[Tuple[PropKey, ...], PropKey]] = []
        self.rules: List[SwrlRule] = []
        self.gated_intersections: List[Intersection] = []
        self._load(models)
        self._close_classes()
        self._close_properties()
        self.existentials: List[SomeValuesFrom] = sorted(
            (e for e in self.universe if isinstance(e, SomeValuesFrom)), key=_expr_sort_key)
        self.complements: List[Complement] = sorted(
            (e for e in self.universe if isinstance(e, Complement)), key=_expr_sort_key)

    # -- loading -------------------------------------------------------------

    def _see(self, ce: ClassExpression) -> None:
        for sub in _subexpressions(ce):
            self.universe.add(sub)
            if isinstance(sub, SomeValuesFrom):
                self._see_prop(sub.prop)

    def _see_prop(self, pe: PropertyExpression) -> None:
        key = _prop_key(pe)
        self.prop_keys.add(key)
        self.prop_keys.add(_flip(key))

    def _edge(self, a: ClassExpression, b: ClassExpression) -> None:
        self.edges.setdefault(a, set()).add(b)

    def _prop_edge(self, a: PropKey, b: PropKey) -> None:
        self.prop_edges.setdefault(a, set()).add(b)
        self.prop_edges.setdefault(_flip(a), set()).add(_flip(b))

    def _mark_disjoint(self, a: ClassExpression, b: ClassExpression) -> None:
        pair = tuple(sorted((a, b), key=_expr_sort_key))
        if pair[0] != pair[1]:
            self.disjoint_pairs.add(pair)  # type: ignore[arg-type]

    def _gate(self, ce: ClassExpression) -> None:
        if isinstance(ce, Intersection) and ce not in self.gated_intersections:
            self.gated_intersections.append(ce)

    def _load(self, models: Sequence[OntologyModel]) -> None:
        for model in models:
            self.rules.extend(model.rules)
            for ax in model.axioms:
                kind, args = ax.kind, ax.args
                if kind == "sub-class-of":
                    self._see(args[0]); self._see(args[1])
                    self._edge(args[0], args[1])
                elif kind == "equivalent-classes":
                    self._see(args[0]); self._see(args[1])
                    self._edge(args[0], args[1])
                    self._edge(args[1], args[0])
                    self._gate(args[0]); self._gate(args[1])
                elif kind == "disjoint-classes":
                    self._see(args[0]); self._see(args[1])
                    self._mark_disjoint(args[0], args[1])
                elif kind == "disjoint-union":
                    union = DisjointUnionOf(args[1])
                    self._see(args[0]); self._see(union)
                    self._edge(args[0], union)
                    self._edge(union, args[0])
                elif kind == "sub-property-of":
                    self._prop_edge(_prop_key(args[0]), _prop_key(args[1]))
                    self._see_prop(args[0]); self._see_prop(args[1])
                elif kind == "equivalent-properties":
                    a, b = _prop_key(args[0]), _prop_key(args[1])
                    self._prop_edge(a, b); self._prop_edge(b, a)
                    self._see_prop(args[0]); self._see_prop(args[1])
                elif kind == "inverse-properties":
                    a, b = _prop_key(args[0]), _prop_key(args[1])
                    self._prop_edge(_flip(a), b); self._prop_edge(b, _flip(a))
                    self._see_prop(args[0]); self._see_prop(args[1])
                    if not a[1] and not b[1]:
                        self.inverse_pairs.setdefault(a[0], set()).add(b[0])
                        self.inverse_pairs.setdefault(b[0], set()).add(a[0])
                elif kind == "property-domain":
                    p, c = args
                    self._see(c); self._see_prop(p)
                    name, inverted = _prop_key(p)
                    (self.ranges if inverted else self.domains).setdefault(name, []).append(c)
                elif kind == "property-range":
                    p, c = args
                    self._see(c); self._see_prop(p)
                    name, inverted = _prop_key(p)
                    (self.domains if inverted else self.ranges).setdefault(name, []).append(c)
                elif kind == "property-chain":
                    links = tuple(_prop_key(pe) for pe in args[0])
                    self.chains.append((links, _prop_key(args[1])))
                    for pe in args[0]:
                        self._see_prop(pe)
                    self._see_prop(args[1])
                elif kind == "class-assertion":
                    self._see(args[1])
                elif kind == "property-assertion":
                    self._see_prop(args[0])
            for rule in model.rules:
                for atom in rule.body + rule.head:
                    if isinstance(atom, ClassAtom):
                        self._see(atom.cls)
                    else:
                        self._see_prop(atom.prop)

        # Structural edges and disjointness contributed by expression shapes.
        for ce in list(self.universe):
            if isinstance(ce, Intersection):
                for op in ce.operands:
                    self._edge(ce, op)
            elif isinstance(ce, (UnionOf, DisjointUnionOf)):
                for op in ce.operands:
                    self._edge(op, ce)
                if isinstance(ce, DisjointUnionOf):
                    for i in range(len(ce.operands)):
                        for j in range(i + 1, len(ce.operands)):
                            self._mark_disjoint(ce.operands[i], ce.operands[j])
        for values in self.domains.values():
            values.sort(key=_expr_sort_key)
        for values in self.ranges.values():
            values.sort(key=_expr_sort_key)

    # -- closures --------------------------------------------------------------

    def _close_classes(self) -> None:
        reach: Dict[ClassExpression, Set[ClassExpression]] = {
            ce: {ce} | self.edges.get(ce, set()) for ce in self.universe}
        unions = [ce for ce in self.universe if isinstance(ce, (UnionOf, DisjointUnionOf))]
        intersections = [ce for ce in self.universe if isinstance(ce, Intersection)]
        changed = True
        while changed:
            changed = False
            for ce in self.universe:
                current = reach[ce]
                extra: Set[ClassExpression] = set()
                for sup in current:
                    extra |= reach.get(sup, set())
                if not extra <= current:
                    current |= extra
                    changed = True
            for u in unions:
                common: Optional[Set[ClassExpression]] = None
                for op in u.operands:
                    common = set(reach[op]) if common is None else common & reach[op]
                if common and not common <= reach[u]:
                    reach[u] |= common
                    changed = True
            for i in intersections:
                ops = set(i.operands)
                for ce in self.universe:
                    if i not in reach[ce] and ops <= reach[ce]:
                        reach[ce].add(i)
                        changed = True
        self._reach = reach
        self._supers_sorted: Dict[ClassExpression, Tuple[ClassExpression, ...]] = {
            ce: tuple(sorted(sups - {ce}, key=_expr_sort_key)) for ce, sups in reach.items()}

    def _close_properties(self) -> None:
        reach: Dict[PropKey, Set[PropKey]] = {
            k: {k} | self.prop_edges.get(k, set()) for k in set(self.prop_edges) | self.prop_keys}
        changed = True
        while changed:
            changed = False
            for k in reach:
                current = reach[k]
                extra: Set[PropKey] = set()
                for sup in current:
                    extra |= reach.get(sup, set())
                if not extra <= current:
                    current |= extra
                    changed = True
        self._prop_reach = reach
        self._named_prop_supers: Dict[str, Tuple[str, ...]] = {}
        for key, sups in reach.items():
            name, inverted = key
            if inverted:
                continue
            named = sorted(q for q, inv in sups if not inv and q != name)
            self._named_prop_supers[name] = tuple(named)

    # -- queries ---------------------------------------------------------------

    def supers(self, ce: ClassExpression) -> Tuple[ClassExpression, ...]:
        """Strict superexpressions of ``ce`` within the loaded universe."""
        cached = self._supers_sorted.get(ce)
        if cached is not None:
            return cached
        return ()

    def subsumed(self, sub: ClassExpression, sup: ClassExpression) -> bool:
        if sub == sup:
            return True
        return sup in self._reach.get(sub, ())

    def named_prop_supers(self, name: str) -> Tuple[str, ...]:
        return self._named_prop_supers.get(name, ())

    def prop_subsumed(self, sub: str, sup: str) -> bool:
        return sub == sup or sup in self._named_prop_supers.get(sub, ())

    def named_classes(self) -> List[NamedClass]:
        return sorted((ce for ce in self.universe if isinstance(ce, NamedClass)
                       and ce.iri.value not in (vocab.OWL_THING, vocab.OWL_NOTHING)),
                      key=_expr_sort_key)


@dataclass
class Taxonomy:
    """Entailed named-term hierarchy: reflexive pairs are excluded."""

    subclass_pairs: Set[Tuple[str, str]] = field(default_factory=set)
    equivalent_class_pairs: Set[Tuple[str, str]] = field(default_factory=set)
    subproperty_pairs: Set[Tuple[str, str]] = field(default_factory=set)
    equivalent_property_pairs: Set[Tuple[str, str]] = field(default_factory=set)


@dataclass
class Clash:
    kind: str  # disjointness-violation | complement-violation | nothing-membership
    individual: Term
    participants: Tuple[ClassExpression, ...]
    trace_facts: Tuple[FactKey, ...]

    def sort_key(self) -> Tuple:
        return (term_sort_key(self.individual), self.kind,
                tuple(_ce_key(p) for p in self.participants))


@dataclass
class ClosedKB:
    """Fixpoint of asserted plus derived facts, with derivation traces."""

    tbox: TBoxIndex
    memberships: Dict[Term, Set[ClassExpression]]
    prop_index: Dict[str, List[Tuple[Term, Term]]]
    traces: Dict[FactKey, Trace]
    skolem_depths: Dict[Term, int]
    skolem_budget_exceeded: bool
    derived_count: int
    instance_count: int

    def has_class(self, individual: Term, ce: ClassExpression) -> bool:
        return ce in self.memberships.get(individual, ())

    def has_prop(self, prop_iri: str, s: Term, o: Term) -> bool:
        return (s, o) in set(self.prop_index.get(prop_iri, ()))

    def individuals(self) -> List[Term]:
        return sorted(self.memberships.keys(), key=term_sort_key)

    def fact_keys(self) -> List[FactKey]:
        return list(self.traces.keys())


class _Engine:
    def __init__(self, tbox: TBoxIndex, skolem_depth: int, fact_cap: int):
        self.tbox = tbox
        self.max_depth = skolem_depth
        self.fact_cap = fact_cap
        self.memberships: Dict[Term, Set[ClassExpression]] = {}
        self.prop_set: Set[Tuple[str, Term, Term]] = set()
        self.prop_index: Dict[str, List[Tuple[Term, Term]]] = {}
        self.traces: Dict[FactKey, Trace] = {}
        self.depths: Dict[Term, int] = {}
        self.skolem_memo: Set[Tuple[Term, SomeValuesFrom]] = set()
        self.skolem_budget_exceeded = False
        self.derived_count = 0

    def _bump(self) -> None:
        self.derived_count += 1
        if self.derived_count > self.fact_cap:
            raise FactCapExceededError(
                f"derived-fact cap of {self.fact_cap} exceeded; closure aborted")

    def add_class(self, x: Term, ce: ClassExpression, rule: str,
                  premises: Tuple[FactKey, ...], detail: str = "") -> bool:
        if isinstance(x, Literal):
            return False
        members = self.memberships.setdefault(x, set())
        if ce in members:
            return False
        self._bump()
        members.add(ce)
        self.traces[class_fact(x, ce)] = Trace(rule, premises, detail)
        premise = (class_fact(x, ce),)
        for sup in self.tbox.supers(ce):
            if sup not in members:
                self.add_class(x, sup, "subsumption", premise,
                               detail=f"{_ce_key(ce)} is below {_ce_key(sup)}")
        return True

    def add_prop(self, name: str, s: Term, o: Term, rule: str,
                 premises: Tuple[FactKey, ...], detail: str = "") -> bool:
        key = (name, s, o)
        if key in self.prop_set:
            return False
        self._bump()
        self.prop_set.add(key)
        self.prop_index.setdefault(name, []).append((s, o))
        self.traces[prop_fact(name, s, o)] = Trace(rule, premises, detail)
        premise = (prop_fact(name, s, o),)
        for sup in self.tbox.named_prop_supers(name):
            self.add_prop(sup, s, o, "subproperty", premise,
                          detail=f"{name} is below {sup}")
        if not isinstance(o, Literal):
            for q in sorted(self.tbox.inverse_pairs.get(name, ())):
                self.add_prop(q, o, s, "inverse", premise,
                              detail=f"{q} is the inverse of {name}")
        for c in self.tbox.domains.get(name, ()):
            self.add_class(s, c, "domain", premise, detail=f"domain of {name}")
        if not isinstance(o, Literal):
            for c in self.tbox.ranges.get(name, ()):
                self.add_class(o, c, "range", premise, detail=f"range of {name}")
        return True

    # -- rule passes -----------------------------------------------------------

    def _pass_compose_intersections(self) -> bool:
        changed = False
        for inter in self.tbox.gated_intersections:
            ops = inter.operands
            for x in list(self.memberships.keys()):
                members = self.memberships[x]
                if inter in members:
                    continue
                if all(op in members for op in ops):
                    premises = tuple(class_fact(x, op) for op in ops)
                    changed |= self.add_class(x, inter, "intersection-composition", premises)
        return changed

    def _pass_skolemize(self) -> bool:
        changed = False
        pending: List[Tuple[Term, SomeValuesFrom]] = []
        for x in list(self.memberships.keys()):
            for ce in self.memberships[x]:
                if isinstance(ce, SomeValuesFrom) and (x, ce) not in self.skolem_memo:
                    pending.append((x, ce))
        pending.sort(key=lambda pair: (term_sort_key(pair[0]), _expr_sort_key(pair[1])))
        for x, ce in pending:
            self.skolem_memo.add((x, ce))
            depth = self.depths.get(x, 0) + 1
            if depth > self.max_depth:
                self.skolem_budget_exceeded = True
                continue
            digest = hashlib.sha1(
                (repr(term_sort_key(x)) + "|" + _ce_key(ce)).encode("utf-8")).hexdigest()[:16]
            witness = Iri("urn:skolem:" + digest)
            self.depths[witness] = depth
            premise = (class_fact(x, ce),)
            name, inverted = _prop_key(ce.prop)
            if inverted:
                changed |= self.add_prop(name, witness, x, "existential-witness", premise,
                                         detail=f"witness for {_ce_key(ce)}")
            else:
                changed |= self.add_prop(name, x, witness, "existential-witness", premise,
                                         detail=f"witness for {_ce_key(ce)}")
            changed |= self.add_class(witness, ce.filler, "existential-witness", premise,
                                      detail=f"witness for {_ce_key(ce)}")
        return changed

    def _pass_existential_membership(self) -> bool:
        # p(x, y) and y : D  =>  x : (p some D), for restrictions in the universe.
        changed = False
        for ce in self.tbox.existentials:
            name, inverted = _prop_key(ce.prop)
            facts = self.prop_index.get(name, ())
            for s, o in list(facts):
                x, y = (o, s) if inverted else (s, o)
                if isinstance(y, Literal) or isinstance(x, Literal):
                    continue
                if ce in self.memberships.get(x, ()):
                    continue
                if ce.filler in self.memberships.get(y, ()):
                    premises = (prop_fact(name, s, o), class_fact(y, ce.filler))
                    changed |= self.add_class(x, ce, "existential-membership", premises)
        return changed

    def _pass_chains(self) -> bool:
        changed = False
        for links, sup in self.tbox.chains:
            # walks: (start, current end, premise facts)
            walks: List[Tuple[Term, Term, Tuple[FactKey, ...]]] = []
            first_name, first_inv = links[0]
            for s, o in list(self.prop_index.get(first_name, ())):
                x, y = (o, s) if first_inv else (s, o)
                walks.append((x, y, (prop_fact(first_name, s, o),)))
            for name, inverted in links[1:]:
                next_walks: List[Tuple[Term, Term, Tuple[FactKey, ...]]] = []
                facts = list(self.prop_index.get(name, ()))
                for x, y, premises in walks:
                    for s, o in facts:
                        a, b = (o, s) if inverted else (s, o)
                        if a == y:
                            next_walks.append((x, b, premises + (prop_fact(name, s, o),)))
                walks = next_walks
            sup_name, sup_inv = sup
            for x, z, premises in walks:
                if isinstance(x, Literal) or isinstance(z, Literal):
                    continue
                s, o = (z, x) if sup_inv else (x, z)
                changed |= self.add_prop(sup_name, s, o, "property-chain", premises,
                                         detail=f"chain into {sup_name}")
        return changed

    def _pass_swrl(self) -> bool:
        changed = False
        for index, rule in enumerate(self.tbox.rules):
            label = ""
            for pred, value in rule.annotations:
                if pred == vocab.RDFS_COMMENT and isinstance(value, Literal):
                    label = value.lexical
                    break
            bindings: List[Tuple[Dict[str, Term], Tuple[FactKey, ...]]] = [({}, ())]
            for atom in rule.body:
                next_bindings: List[Tuple[Dict[str, Term], Tuple[FactKey, ...]]] = []
                if isinstance(atom, ClassAtom):
                    for binding, premises in bindings:
                        bound = binding.get(atom.var)
                        if bound is not None:
                            if atom.cls in self.memberships.get(bound, ()):
                                next_bindings.append(
                                    (binding, premises + (class_fact(bound, atom.cls),)))
                        else:
                            for x in sorted(self.memberships.keys(), key=term_sort_key):
                                if atom.cls in self.memberships[x]:
                                    nb = dict(binding)
                                    nb[atom.var] = x
                                    next_bindings.append(
                                        (nb, premises + (class_fact(x, atom.cls),)))
                else:
                    name, inverted = _prop_key(atom.prop)
                    facts = sorted(self.prop_index.get(name, ()),
                                   key=lambda so: (term_sort_key(so[0]), term_sort_key(so[1])))
                    for binding, premises in bindings:
                        for s, o in facts:
                            a, b = (o, s) if inverted else (s, o)
                            if binding.get(atom.var1, a) != a or binding.get(atom.var2, b) != b:
                                continue
                            nb = dict(binding)
                            nb[atom.var1] = a
                            nb[atom.var2] = b
                            next_bindings.append((nb, premises + (prop_fact(name, s, o),)))
                bindings = next_bindings
                if not bindings:
                    break
            rule_name = f"swrl-rule-{index + 1}"
            for binding, premises in bindings:
                for atom in rule.head:
                    if isinstance(atom, ClassAtom):
                        changed |= self.add_class(binding[atom.var], atom.cls,
                                                  rule_name, premises, detail=label)
                    else:
                        name, inverted = _prop_key(atom.prop)
                        a, b = binding[atom.var1], binding[atom.var2]
                        s, o = (b, a) if inverted else (a, b)
                        if isinstance(s, Literal):
                            continue
                        changed |= self.add_prop(name, s, o, rule_name, premises, detail=label)
        return changed

    def run(self) -> None:
        changed = True
        while changed:
            changed = False
            changed |= self._pass_compose_intersections()
            changed |= self._pass_skolemize()
            changed |= self._pass_existential_membership()
            changed |= self._pass_chains()
            changed |= self._pass_swrl()


def _load_assertions(engine: _Engine, models: Sequence[OntologyModel]) -> Set[Term]:
    individuals: Set[Term] = set()
    for model in models:
        for ax in model.axioms:
            if ax.kind == "class-assertion":
                individuals.add(ax.args[0])
                engine.add_class(ax.args[0], ax.args[1], "asserted", ())
            elif ax.kind == "property-assertion":
                name, inverted = _prop_key(ax.args[0])
                s, o = ax.args[1], ax.args[2]
                if inverted:
                    s, o = o, s
                individuals.add(s)
                if not isinstance(o, Literal):
                    individuals.add(o)
                engine.add_prop(name, s, o, "asserted", ())
        for name in sorted(model.declared_individuals):
            individuals.add(Iri(name))
    return individuals


def materialize(models: Sequence[OntologyModel], abox: Optional[Graph] = None, *,
                skolem_depth: int = 3, fact_cap: int = 1_000_000,
                tbox: Optional[TBoxIndex] = None) -> ClosedKB:
    """Compute the closure of the models plus (optional) instance graph.

    ``tbox`` may be passed to reuse a precomputed schema index across many
    materializations over the same models (satisfiability probing does this).
    """
    all_models = list(models)
    if abox is not None:
        all_models.append(extract_axioms(abox, source_label="instances"))
    if tbox is None:
        tbox = TBoxIndex(all_models)
    engine = _Engine(tbox, skolem_depth, fact_cap)
    individuals = _load_assertions(engine, all_models)
    engine.run()
    return ClosedKB(
        tbox=tbox,
        memberships=engine.memberships,
        prop_index=engine.prop_index,
        traces=engine.traces,
        skolem_depths=engine.depths,
        skolem_budget_exceeded=engine.skolem_budget_exceeded,
        derived_count=engine.derived_count,
        instance_count=len(individuals),
    )


def check_clash(kb: ClosedKB) -> List[Clash]:
    """All contradictions present in a completed closure (collect-all)."""
    clashes: List[Clash] = []
    nothing = NamedClass(Iri(vocab.OWL_NOTHING))
    for x in kb.individuals():
        members = kb.memberships[x]
        for a, b in sorted(kb.tbox.disjoint_pairs, key=lambda p: (_ce_key(p[0]), _ce_key(p[1]))):
            if a in members and b in members:
                clashes.append(Clash("disjointness-violation", x, (a, b),
                                     (class_fact(x, a), class_fact(x, b))))
        for comp in kb.tbox.complements:
            if comp in members and comp.operand in members:
                clashes.append(Clash("complement-violation", x, (comp.operand, comp),
                                     (class_fact(x, comp.operand), class_fact(x, comp))))
        if nothing in members:
            clashes.append(Clash("nothing-membership", x, (nothing,),
                                 (class_fact(x, nothing),)))
    clashes.sort(key=Clash.sort_key)
    return clashes


_PROBE = Iri("urn:probe:individual")


def class_satisfiable(models: Sequence[OntologyModel], ce: ClassExpression, *,
                      skolem_depth: int = 3, fact_cap: int = 1_000_000,
                      tbox: Optional[TBoxIndex] = None) -> bool:
    """Probe satisfiability: assert a fresh individual into ``ce`` and look for clashes.

    The probe and its skolem descendants live only in this closure and are
    discarded afterwards.
    """
    if tbox is None or ce not in tbox.universe:
        seed = OntologyModel(source_label="probe-seed")
        seed.axioms = [Axiom("class-assertion", (_PROBE, ce))]
        tbox = TBoxIndex(list(models) + [seed])
    engine = _Engine(tbox, skolem_depth, fact_cap)
    _load_assertions(engine, models)
    engine.add_class(_PROBE, ce, "asserted", ())
    engine.run()
    kb = ClosedKB(
        tbox=tbox,
        memberships=engine.memberships,
        prop_index=engine.prop_index,
        traces=engine.traces,
        skolem_depths=engine.depths,
        skolem_budget_exceeded=engine.skolem_budget_exceeded,
        derived_count=engine.derived_count,
        instance_count=0,
    )
    return not check_clash(kb)


def entailed_taxonomy(models: Sequence[OntologyModel],
                      tbox: Optional[TBoxIndex] = None) -> Taxonomy:
    """Named-class and named-property subsumption/equivalence closure."""
    if tbox is None:
        tbox = TBoxIndex(list(models))
    taxonomy = Taxonomy()
    named = tbox.named_classes()
    for c in named:
        for sup in tbox.supers(c):
            if isinstance(sup, NamedClass) and sup.iri.value not in (vocab.OWL_THING, vocab.OWL_NOTHING):
                taxonomy.subclass_pairs.add((c.iri.value, sup.iri.value))
    for a, b in list(taxonomy.subclass_pairs):
        if (b, a) in taxonomy.subclass_pairs:
            taxonomy.equivalent_class_pairs.add(tuple(sorted((a, b))))  # type: ignore[arg-type]
    for name in sorted(tbox._named_prop_supers):
        for sup in tbox.named_prop_supers(name):
            taxonomy.subproperty_pairs.add((name, sup))
    for a, b in list(taxonomy.subproperty_pairs):
        if (b, a) in taxonomy.subproperty_pairs:
            taxonomy.equivalent_property_pairs.add(tuple(sorted((a, b))))  # type: ignore[arg-type]
    return taxonomy


def explain(kb: ClosedKB, fact: FactKey) -> TraceNode:
    """Finite derivation tree for a fact, bottoming out at asserted facts."""
    trace = kb.traces.get(fact)
    if trace is None:
        raise UnknownFactError(f"fact not present in the closure: {fact!r}")
    node = TraceNode(fact=fact, rule=trace.rule, detail=trace.detail)
    for premise in trace.premises:
        node.children.append(explain(kb, premise))
    return node
