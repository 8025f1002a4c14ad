"""RDF Turtle parsing and serialization.

The parser is a hand-written tokenizer plus recursive descent over the Turtle
subset used by OWL ontologies and alignment files: prefix/base directives
(both '@' and SPARQL spellings), prefixed names, IRI references, blank node
labels and anonymous property lists, collections, 'a', predicate-object and
object lists, string/typed/language literals, numeric and boolean shorthand,
and comments. Quoted triples and TriG blocks are hard errors: silently
dropping triples would corrupt verification verdicts downstream.

Serialization is semantic, not byte-preserving: output re-parses to a graph
isomorphic to the input, with deterministic ordering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import vocab
from .rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    iri,
    iri_resolve,
    new_scope,
    triple_sort_key,
    MissingBaseError,
    UnknownPrefixError,
)


@dataclass
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class TurtleParseError(Exception):
    def __init__(self, diagnostics: List[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass
class _Token:
    kind: str  # iriref pname bnode_label string lang number boolean punct word eof
    value: object
    line: int
    column: int


_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}

_DOUBLE_RE = re.compile(r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)")
_DECIMAL_RE = re.compile(r"[+-]?\d*\.\d+")
_INTEGER_RE = re.compile(r"[+-]?\d+")
_LANGTAG_RE = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
_PN_PREFIX_RE = re.compile(r"[A-Za-zÀ-￿][\wÀ-￿.\-]*")
_LOCAL_CHAR_RE = re.compile(r"[\wÀ-￿\-:%]")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        raise TurtleParseError([ParseDiagnostic(line or self.line, col or self.col, message)])

    def _advance(self, n: int = 1) -> str:
        chunk = self.text[self.pos:self.pos + n]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return chunk

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _skip_ws_and_comments(self) -> None:
        while self.pos < len(self.text):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _read_unicode_escape(self, width: int) -> str:
        digits = self.text[self.pos:self.pos + width]
        if len(digits) < width or any(c not in "0123456789abcdefABCDEF" for c in digits):
            self.error(f"bad \\{'u' if width == 4 else 'U'} escape")
        self._advance(width)
        return chr(int(digits, 16))

    def _read_string(self, quote: str, long: bool, start_line: int, start_col: int) -> str:
        out: List[str] = []
        terminator = quote * 3 if long else quote
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated literal", start_line, start_col)
            if self.text.startswith(terminator, self.pos):
                self._advance(len(terminator))
                return "".join(out)
            ch = self._peek()
            if not long and ch == "\n":
                self.error("unterminated literal", start_line, start_col)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc == "u":
                    self._advance()
                    out.append(self._read_unicode_escape(4))
                elif esc == "U":
                    self._advance()
                    out.append(self._read_unicode_escape(8))
                elif esc in _ESCAPES:
                    self._advance()
                    out.append(_ESCAPES[esc])
                else:
                    self.error(f"unknown escape \\{esc}")
            else:
                out.append(self._advance())

    def _read_iriref(self, start_line: int, start_col: int) -> str:
        out: List[str] = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated IRI reference", start_line, start_col)
            ch = self._peek()
            if ch == ">":
                self._advance()
                return "".join(out)
            if ch in " \n\t\r<\"{}|^`":
                self.error(f"character {ch!r} not allowed inside IRI reference")
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc == "u":
                    self._advance()
                    out.append(self._read_unicode_escape(4))
                elif esc == "U":
                    self._advance()
                    out.append(self._read_unicode_escape(8))
                else:
                    self.error(f"unknown escape \\{esc} in IRI reference")
            else:
                out.append(self._advance())

    def _read_local(self) -> str:
        # PN_LOCAL: word chars, digits, '-', ':', '%XX', '\' escapes; dots only medially.
        out: List[str] = []
        while self.pos < len(self.text):
            ch = self._peek()
            if ch == ".":
                nxt = self._peek(1)
                if nxt and (_LOCAL_CHAR_RE.match(nxt) or nxt == "."):
                    out.append(self._advance())
                    continue
                break
            if ch == "\\":
                self._advance()
                out.append(self._advance())
                continue
            if _LOCAL_CHAR_RE.match(ch):
                out.append(self._advance())
                continue
            break
        return "".join(out)

    def next_token(self) -> _Token:
        self._skip_ws_and_comments()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("eof", None, line, col)
        ch = self._peek()

        if self.text.startswith("<<", self.pos):
            self.error("quoted triples are not supported", line, col)
        if ch in "{}":
            self.error("TriG graph blocks are not supported", line, col)
        if ch in ".;,[]()":
            self._advance()
            return _Token("punct", ch, line, col)
        if ch == "<":
            self._advance()
            return _Token("iriref", self._read_iriref(line, col), line, col)
        if ch in "\"'":
            if self.text.startswith(ch * 3, self.pos):
                self._advance(3)
                value = self._read_string(ch, True, line, col)
            else:
                self._advance()
                value = self._read_string(ch, False, line, col)
            return _Token("string", value, line, col)
        if ch == "_" and self._peek(1) == ":":
            self._advance(2)
            label = self._read_local()
            if not label:
                self.error("empty blank node label", line, col)
            return _Token("bnode_label", label, line, col)
        if ch == "@":
            self._advance()
            m = _LANGTAG_RE.match(self.text, self.pos)
            if not m:
                self.error("bad @ directive or language tag", line, col)
            word = m.group(0)
            self._advance(len(word))
            if word in ("prefix", "base"):
                return _Token("word", "@" + word, line, col)
            return _Token("lang", word, line, col)
        if ch == "^" and self._peek(1) == "^":
            self._advance(2)
            return _Token("punct", "^^", line, col)

        for regex, datatype in ((_DOUBLE_RE, vocab.XSD_DOUBLE),
                                (_DECIMAL_RE, vocab.XSD_DECIMAL),
                                (_INTEGER_RE, vocab.XSD_INTEGER)):
            m = regex.match(self.text, self.pos)
            if m:
                self._advance(len(m.group(0)))
                return _Token("number", (m.group(0), datatype), line, col)

        if ch == ":":
            self._advance()
            return _Token("pname", ("", self._read_local()), line, col)
        m = _PN_PREFIX_RE.match(self.text, self.pos)
        if m:
            word = m.group(0)
            # A prefix label cannot end with '.'; give trailing dots back.
            while word.endswith("."):
                word = word[:-1]
            self._advance(len(word))
            if self._peek() == ":":
                self._advance()
                return _Token("pname", (word, self._read_local()), line, col)
            if word in ("true", "false"):
                return _Token("boolean", word, line, col)
            return _Token("word", word, line, col)
        self.error(f"unexpected character {ch!r}")


class _Parser:
    def __init__(self, text: str, base: Optional[str]):
        self.lexer = _Lexer(text)
        self.graph = Graph(base=base)
        self.base = base
        self.scope = new_scope()
        self.labelled: Dict[str, BlankNode] = {}
        self.anon_count = 0
        self.token = self.lexer.next_token()

    def _error(self, message: str, token: Optional[_Token] = None):
        t = token or self.token
        raise TurtleParseError([ParseDiagnostic(t.line, t.column, message)])

    def _next(self) -> _Token:
        current = self.token
        self.token = self.lexer.next_token()
        return current

    def _expect_punct(self, value: str) -> None:
        if self.token.kind != "punct" or self.token.value != value:
            self._error(f"expected {value!r}, found {self._describe(self.token)}")
        self._next()

    @staticmethod
    def _describe(token: _Token) -> str:
        if token.kind == "eof":
            return "end of input"
        return repr(token.value)

    def _fresh_bnode(self) -> BlankNode:
        node = BlankNode(f"b{self.anon_count}", self.scope)
        self.anon_count += 1
        return node

    def _labelled_bnode(self, label: str) -> BlankNode:
        node = self.labelled.get(label)
        if node is None:
            node = BlankNode(label, self.scope)
            self.labelled[label] = node
        return node

    def _resolve(self, name: str, token: _Token) -> Iri:
        try:
            return iri_resolve(self.graph.prefixes, name, self.base)
        except (UnknownPrefixError, MissingBaseError) as exc:
            raise TurtleParseError(
                [ParseDiagnostic(token.line, token.column, str(exc))]
            ) from exc

    def parse(self) -> Graph:
        while self.token.kind != "eof":
            if self.token.kind == "word":
                word = str(self.token.value)
                if word == "@prefix" or word.lower() == "prefix":
                    self._directive_prefix(sparql=not word.startswith("@"))
                    continue
                if word == "@base" or word.lower() == "base":
                    self._directive_base(sparql=not word.startswith("@"))
                    continue
            self._triples()
            self._expect_punct(".")
        return self.graph

    def _directive_prefix(self, sparql: bool) -> None:
        self._next()
        if self.token.kind != "pname":
            self._error("expected prefix label ending in ':'")
        label, local = self.token.value
        if local:
            self._error("prefix label must end with ':'")
        self._next()
        if self.token.kind != "iriref":
            self._error("expected namespace IRI")
        ns_token = self._next()
        namespace = self._resolve(f"<{ns_token.value}>", ns_token).value
        self.graph.bind(label, namespace)
        if not sparql:
            self._expect_punct(".")

    def _directive_base(self, sparql: bool) -> None:
        self._next()
        if self.token.kind != "iriref":
            self._error("expected base IRI")
        base_token = self._next()
        self.base = self._resolve(f"<{base_token.value}>", base_token).value
        self.graph.base = self.base
        if not sparql:
            self._expect_punct(".")

    def _triples(self) -> None:
        if self.token.kind == "punct" and self.token.value == "[":
            subject = self._bnode_property_list()
            if self.token.kind == "punct" and self.token.value == ".":
                return  # bare [ ... ] . statement
            self._predicate_object_list(subject)
            return
        subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self) -> Term:
        t = self.token
        if t.kind == "iriref":
            self._next()
            return self._resolve(f"<{t.value}>", t)
        if t.kind == "pname":
            self._next()
            label, local = t.value
            return self._resolve(f"{label}:{local}", t)
        if t.kind == "bnode_label":
            self._next()
            return self._labelled_bnode(str(t.value))
        if t.kind == "punct" and t.value == "(":
            return self._collection()
        self._error(f"expected subject, found {self._describe(t)}")

    def _verb(self) -> Iri:
        t = self.token
        if t.kind == "word" and t.value == "a":
            self._next()
            return iri(vocab.RDF_TYPE)
        if t.kind == "iriref":
            self._next()
            return self._resolve(f"<{t.value}>", t)
        if t.kind == "pname":
            self._next()
            label, local = t.value
            return self._resolve(f"{label}:{local}", t)
        self._error(f"expected predicate, found {self._describe(t)}")

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            if self.token.kind == "punct" and self.token.value == ";":
                self._next()
                # Trailing ';' before '.' or ']' is legal.
                while self.token.kind == "punct" and self.token.value == ";":
                    self._next()
                if self.token.kind == "punct" and self.token.value in (".", "]"):
                    return
                continue
            return

    def _object_list(self, subject: Term, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.graph.add(Triple(subject, predicate, obj))
            if self.token.kind == "punct" and self.token.value == ",":
                self._next()
                continue
            return

    def _object(self) -> Term:
        t = self.token
        if t.kind == "punct" and t.value == "[":
            return self._bnode_property_list()
        if t.kind == "punct" and t.value == "(":
            return self._collection()
        if t.kind == "string":
            return self._string_literal()
        if t.kind == "number":
            self._next()
            lexical, datatype = t.value
            return Literal(lexical, datatype=datatype)
        if t.kind == "boolean":
            self._next()
            return Literal(str(t.value), datatype=vocab.XSD_BOOLEAN)
        return self._subject()

    def _string_literal(self) -> Literal:
        t = self._next()
        lexical = str(t.value)
        if self.token.kind == "lang":
            lang = str(self._next().value)
            return Literal(lexical, language=lang)
        if self.token.kind == "punct" and self.token.value == "^^":
            self._next()
            dt = self.token
            if dt.kind == "iriref":
                self._next()
                datatype = self._resolve(f"<{dt.value}>", dt).value
            elif dt.kind == "pname":
                self._next()
                label, local = dt.value
                datatype = self._resolve(f"{label}:{local}", dt).value
            else:
                self._error("expected datatype IRI after '^^'")
            return Literal(lexical, datatype=datatype)
        return Literal(lexical, datatype=vocab.XSD_STRING)

    def _bnode_property_list(self) -> BlankNode:
        self._expect_punct("[")
        node = self._fresh_bnode()
        if self.token.kind == "punct" and self.token.value == "]":
            self._next()
            return node
        self._predicate_object_list(node)
        self._expect_punct("]")
        return node

    def _collection(self) -> Term:
        self._expect_punct("(")
        items: List[Term] = []
        while not (self.token.kind == "punct" and self.token.value == ")"):
            if self.token.kind == "eof":
                self._error("unterminated collection")
            items.append(self._object())
        self._next()
        if not items:
            return iri(vocab.RDF_NIL)
        head = self._fresh_bnode()
        current = head
        for i, item in enumerate(items):
            self.graph.add(Triple(current, iri(vocab.RDF_FIRST), item))
            if i + 1 < len(items):
                nxt = self._fresh_bnode()
                self.graph.add(Triple(current, iri(vocab.RDF_REST), nxt))
                current = nxt
            else:
                self.graph.add(Triple(current, iri(vocab.RDF_REST), iri(vocab.RDF_NIL)))
        return head


def parse_turtle(text: str, base: Optional[str] = None) -> Graph:
    """Parse a Turtle document into a Graph.

    Raises TurtleParseError carrying positioned diagnostics on any syntax
    error, unknown prefix, or unterminated literal.
    """
    return _Parser(text, base).parse()


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_LOCAL_OK_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-.]*$")
_INT_SHORT_RE = re.compile(r"[+-]?\d+$")
_DECIMAL_SHORT_RE = re.compile(r"[+-]?\d*\.\d+$")


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def serialize_turtle(graph: Graph) -> str:
    """Render a graph as Turtle text.

    Deterministic: triples sort by canonical term order and blank nodes are
    relabelled in order of first appearance. Output re-parses to a graph
    isomorphic to the input.
    """
    namespaces = sorted(graph.prefixes.items(), key=lambda kv: (kv[1], kv[0]))

    def compress(value: str) -> Optional[str]:
        best: Optional[Tuple[str, str]] = None
        for label, ns in namespaces:
            if value.startswith(ns):
                local = value[len(ns):]
                if local and (not _LOCAL_OK_RE.match(local) or local.endswith(".")):
                    continue
                if best is None or len(ns) > len(graph.prefixes[best[0]]):
                    best = (label, local)
        if best is None:
            return None
        label, local = best
        return f"{label}:{local}"

    bnode_names: Dict[BlankNode, str] = {}

    def render(term: Term) -> str:
        if isinstance(term, Iri):
            short = compress(term.value)
            return short if short is not None else f"<{term.value}>"
        if isinstance(term, BlankNode):
            name = bnode_names.get(term)
            if name is None:
                name = f"b{len(bnode_names)}"
                bnode_names[term] = name
            return f"_:{name}"
        lex = term.lexical
        if term.language:
            return f'"{_escape_string(lex)}"@{term.language}'
        dt = term.datatype
        if dt == vocab.XSD_INTEGER and _INT_SHORT_RE.match(lex):
            return lex
        if dt == vocab.XSD_DECIMAL and _DECIMAL_SHORT_RE.match(lex):
            return lex
        if dt == vocab.XSD_BOOLEAN and lex in ("true", "false"):
            return lex
        if dt is None or dt == vocab.XSD_STRING:
            return f'"{_escape_string(lex)}"'
        dt_short = compress(dt)
        dt_text = dt_short if dt_short is not None else f"<{dt}>"
        return f'"{_escape_string(lex)}"^^{dt_text}'

    lines: List[str] = []
    for label, ns in sorted(graph.prefixes.items()):
        lines.append(f"@prefix {label}: <{ns}> .")
    if lines:
        lines.append("")
    for t in sorted(graph.triples, key=triple_sort_key):
        lines.append(f"{render(t.subject)} {render(t.predicate)} {render(t.object)} .")
    return "\n".join(lines) + ("\n" if lines else "")
