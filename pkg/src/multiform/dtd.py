"""DTD parsing and document validation.

The accepted subset is element declarations only: sequences, choices and
the ``?``/``*``/``+`` multiplicities, plus ``(#PCDATA)`` leaves. Attribute
lists, entities, notations, mixed content and the EMPTY/ANY keywords are
rejected; comments are skipped. This is enough to express a content model
as an ordinary regular expression over child element names, so validation
is plain regular-language matching with a recorded failure position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import (
    DtdSyntaxError,
    DuplicateDeclaration,
    MixedContent,
    NoRootElement,
    UndeclaredReference,
)

# -- content model AST ---------------------------------------------------------


@dataclass(frozen=True)
class PCData:
    """Leaf marker: the element holds character data only."""


@dataclass(frozen=True)
class ElementRef:
    name: str


@dataclass(frozen=True)
class Sequence:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Choice:
    alternatives: tuple

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))


@dataclass(frozen=True)
class Repeat:
    inner: object
    mult: str  # one of "?", "*", "+"


@dataclass(frozen=True)
class DtdSchema:
    names: tuple[str, ...]      # declaration order
    elements: dict              # name -> content model
    root: str

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))

    def is_leaf(self, name: str) -> bool:
        return isinstance(self.elements[name], PCData)


# -- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment><!--.*?-->)
      | (?P<element><!ELEMENT(?=[\s(]))
      | (?P<decl><!-?[A-Za-z\[]+)
      | (?P<pcdata>\#PCDATA)
      | (?P<pe>%[^\s>]*)
      | (?P<name>[A-Za-z_:][-\w.:]*)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<comma>,)
      | (?P<pipe>\|)
      | (?P<qmark>\?)
      | (?P<star>\*)
      | (?P<plus>\+)
      | (?P<gt>>)
    """,
    re.VERBOSE | re.DOTALL,
)


def _lex(text: str):
    tokens = []
    pos = 0
    line = 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DtdSyntaxError(line, "a DTD token", found=text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, value, line))
        line += value.count("\n")
        pos = m.end()
    return tokens


# -- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    @property
    def line(self):
        tok = self.peek()
        if tok is not None:
            return tok[2]
        return self.tokens[-1][2] if self.tokens else 1

    def expect(self, kind, what):
        tok = self.next()
        if tok is None:
            raise DtdSyntaxError(self.line, what, found="end of input")
        if tok[0] != kind:
            raise DtdSyntaxError(tok[2], what, found=tok[1])
        return tok

    def parse(self):
        decls = []
        while self.peek() is not None:
            decls.append(self.declaration())
        if not decls:
            raise DtdSyntaxError(1, "at least one <!ELEMENT declaration",
                                 found="end of input")
        return decls

    def declaration(self):
        kind, value, line = self.next()
        if kind == "decl":
            raise DtdSyntaxError(line, "<!ELEMENT", found=value)
        if kind == "pe":
            raise DtdSyntaxError(line, "<!ELEMENT (parameter entities are not supported)",
                                 found=value)
        if kind != "element":
            raise DtdSyntaxError(line, "<!ELEMENT", found=value)
        name = self.expect("name", "an element name")[1]
        model = self.model(name)
        self.expect("gt", ">")
        return name, model, line

    def model(self, element):
        tok = self.peek()
        if tok is None:
            raise DtdSyntaxError(self.line, "a content model", found="end of input")
        if tok[0] == "name" and tok[1] in ("EMPTY", "ANY"):
            raise DtdSyntaxError(tok[2], f"a parenthesized content model "
                                         f"({tok[1]} is not supported)", found=tok[1])
        if tok[0] != "lparen":
            raise DtdSyntaxError(tok[2], "'('", found=tok[1])
        base = self.group(element, top=True)
        if isinstance(base, PCData):
            return base
        mult = self.multiplicity()
        return Repeat(base, mult) if mult else base

    def group(self, element, top=False):
        self.expect("lparen", "'('")
        tok = self.peek()
        if tok is not None and tok[0] == "pcdata":
            line = tok[2]
            self.next()
            after = self.peek()
            if after is not None and after[0] == "pipe":
                raise MixedContent(element, line)
            if not top:
                raise MixedContent(element, line)
            self.expect("rparen", "')'")
            return PCData()
        parts = [self.particle(element)]
        sep = None
        while True:
            tok = self.peek()
            if tok is None:
                raise DtdSyntaxError(self.line, "',', '|' or ')'", found="end of input")
            if tok[0] == "rparen":
                self.next()
                break
            if tok[0] not in ("comma", "pipe"):
                raise DtdSyntaxError(tok[2], "',', '|' or ')'", found=tok[1])
            if sep is None:
                sep = tok[0]
            elif tok[0] != sep:
                raise DtdSyntaxError(tok[2], f"'{',' if sep == 'comma' else '|'}'",
                                     found=tok[1])
            self.next()
            parts.append(self.particle(element))
        if sep == "pipe":
            return Choice(tuple(parts))
        if len(parts) == 1:
            return parts[0]
        flat = []
        for p in parts:
            if isinstance(p, Sequence):
                flat.extend(p.parts)
            else:
                flat.append(p)
        return Sequence(tuple(flat))

    def particle(self, element):
        tok = self.peek()
        if tok is None:
            raise DtdSyntaxError(self.line, "an element name or '('",
                                 found="end of input")
        if tok[0] == "pcdata":
            raise MixedContent(element, tok[2])
        if tok[0] == "name":
            self.next()
            base = ElementRef(tok[1])
        elif tok[0] == "lparen":
            base = self.group(element)
        else:
            raise DtdSyntaxError(tok[2], "an element name or '('", found=tok[1])
        mult = self.multiplicity()
        return Repeat(base, mult) if mult else base

    def multiplicity(self):
        tok = self.peek()
        if tok is not None and tok[0] in ("qmark", "star", "plus"):
            self.next()
            return tok[1]
        return None


def parse_dtd(text: str) -> DtdSchema:
    """Parse element declarations into a schema.

    The root is the first declared element no other element references.
    """
    decls = _Parser(text).parse()
    elements = {}
    order = []
    for name, model, line in decls:
        if name in elements:
            raise DuplicateDeclaration(name, line)
        elements[name] = model
        order.append(name)

    referenced = set()

    def refs(model):
        if isinstance(model, ElementRef):
            yield model.name
        elif isinstance(model, Sequence):
            for p in model.parts:
                yield from refs(p)
        elif isinstance(model, Choice):
            for a in model.alternatives:
                yield from refs(a)
        elif isinstance(model, Repeat):
            yield from refs(model.inner)

    for name, model in elements.items():
        for ref in refs(model):
            if ref not in elements:
                raise UndeclaredReference(name, ref)
            referenced.add(ref)

    for name in order:
        if name not in referenced:
            return DtdSchema(names=tuple(order), elements=elements, root=name)
    raise NoRootElement()


# -- pretty printer ---------------------------------------------------------------


def _render(model) -> str:
    if isinstance(model, ElementRef):
        return model.name
    if isinstance(model, Repeat):
        inner = _render(model.inner)
        if isinstance(model.inner, Repeat):  # (X?)* must not print as X?*
            inner = "(" + inner + ")"
        return inner + model.mult
    if isinstance(model, Sequence):
        return "(" + ", ".join(_render(p) for p in model.parts) + ")"
    if isinstance(model, Choice):
        return "(" + " | ".join(_render(a) for a in model.alternatives) + ")"
    raise TypeError(f"cannot render {model!r}")


def render_model(model) -> str:
    """Render a content model the way it appears in a declaration."""
    if isinstance(model, PCData):
        return "(#PCDATA)"
    if isinstance(model, (Sequence, Choice)):
        return _render(model)
    if isinstance(model, Repeat) and isinstance(model.inner, (Sequence, Choice)):
        return _render(model.inner) + model.mult
    # a bare reference (possibly repeated) still needs the outer parentheses
    return "(" + _render(model) + ")"


def format_dtd(schema: DtdSchema) -> str:
    """Print a schema as declarations; parsing the output yields an equal schema."""
    lines = [
        f"<!ELEMENT {name} {render_model(schema.elements[name])}>"
        for name in schema.names
    ]
    return "\n".join(lines) + "\n"


# -- content model matching ---------------------------------------------------------


@dataclass(frozen=True)
class MRef:
    index: int


@dataclass(frozen=True)
class MSeq:
    parts: tuple


@dataclass(frozen=True)
class MChoice:
    alt: int
    inner: object


@dataclass(frozen=True)
class MRep:
    iterations: tuple


def nullable(model) -> bool:
    if isinstance(model, ElementRef):
        return False
    if isinstance(model, Sequence):
        return all(nullable(p) for p in model.parts)
    if isinstance(model, Choice):
        return any(nullable(a) for a in model.alternatives)
    if isinstance(model, Repeat):
        return model.mult in ("?", "*") or nullable(model.inner)
    return True  # PCData


class _Failure:
    """Deepest failure position and the names that would have matched there."""

    __slots__ = ("pos", "expected")

    def __init__(self):
        self.pos = -1
        self.expected = set()

    def note(self, pos, name):
        if pos > self.pos:
            self.pos = pos
            self.expected = {name}
        elif pos == self.pos:
            self.expected.add(name)


def _matches(model, names, pos, fail):
    """Yield (end position, match tree) for every way model matches names[pos:]."""
    if isinstance(model, ElementRef):
        if pos < len(names) and names[pos] == model.name:
            yield pos + 1, MRef(pos)
        else:
            fail.note(pos, model.name)
    elif isinstance(model, Sequence):
        def seq(k, at):
            if k == len(model.parts):
                yield at, ()
                return
            for p1, t1 in _matches(model.parts[k], names, at, fail):
                for p2, rest in seq(k + 1, p1):
                    yield p2, (t1,) + rest
        for end, parts in seq(0, pos):
            yield end, MSeq(parts)
    elif isinstance(model, Choice):
        for k, alt in enumerate(model.alternatives):
            for end, tree in _matches(alt, names, pos, fail):
                yield end, MChoice(k, tree)
    elif isinstance(model, Repeat):
        if model.mult == "?":
            for end, tree in _matches(model.inner, names, pos, fail):
                if end > pos:
                    yield end, MRep((tree,))
            yield pos, MRep(())
        else:
            def reps(at, acc):
                for end, tree in _matches(model.inner, names, at, fail):
                    if end > at:  # zero-width iterations add nothing
                        yield from reps(end, acc + (tree,))
                yield at, acc
            allow_empty = model.mult == "*" or nullable(model.inner)
            for end, acc in reps(pos, ()):
                if acc or allow_empty:
                    yield end, MRep(acc)
    else:
        raise TypeError(f"cannot match against {model!r}")


def match_children(model, names, fail=None):
    """First full match of the child name sequence, or None."""
    if fail is None:
        fail = _Failure()
    for end, tree in _matches(model, names, 0, fail):
        if end == len(names):
            return tree
        fail.note(end, "end of children")
    return None


# -- validation -------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    path: str
    message: str
    expected: str | None = None

    def __str__(self):
        tail = f" (expected {self.expected})" if self.expected else ""
        return f"{self.path}: {self.message}{tail}"


@dataclass(frozen=True)
class ValidationReport:
    document: object
    valid: bool
    violations: tuple[Violation, ...]

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))


def _child_path(parent_path, element, siblings):
    same = [c for c in siblings if c.tag == element.tag]
    if len(same) > 1:
        k = 1 + next(i for i, c in enumerate(same) if c is element)
        return f"{parent_path}/{element.tag}[{k}]"
    return f"{parent_path}/{element.tag}"


def validate(document, schema: DtdSchema) -> ValidationReport:
    """Check an element tree against the schema.

    The report lists every violation found; whitespace-only text between
    child elements is formatting and is ignored.
    """
    violations = []
    path = "/" + document.tag
    if document.tag != schema.root:
        violations.append(Violation(path, f"root element must be {schema.root}",
                                    expected=schema.root))
    if document.tag in schema.elements:
        _validate_element(document, path, schema, violations)
    return ValidationReport(document=document, valid=not violations,
                            violations=tuple(violations))


def _validate_element(element, path, schema, out):
    model = schema.elements[element.tag]
    children = list(element)

    if isinstance(model, PCData):
        if children:
            out.append(Violation(path, "leaf element must not contain child elements",
                                 expected="(#PCDATA)"))
        return

    if element.text and element.text.strip():
        out.append(Violation(path, "character data is not allowed between child elements",
                             expected=render_model(model)))
    for child in children:
        if child.tail and child.tail.strip():
            out.append(Violation(path, "character data is not allowed between child elements",
                                 expected=render_model(model)))
            break

    fail = _Failure()
    names = [c.tag for c in children]
    tree = match_children(model, names, fail)
    if tree is None:
        at = fail.pos if fail.pos >= 0 else len(names)
        found = names[at] if at < len(names) else "end of children"
        expected = ", ".join(sorted(fail.expected)) or render_model(model)
        out.append(Violation(
            path,
            f"children do not match the content model: at child {at + 1} "
            f"expected one of {{{expected}}}, found {found}",
            expected=render_model(model),
        ))

    for child in children:
        if child.tag not in schema.elements:
            out.append(Violation(_child_path(path, child, children),
                                 f"element {child.tag} is not declared"))
            continue
        _validate_element(child, _child_path(path, child, children), schema, out)


# -- bundled schema -----------------------------------------------------------------


def builtin_dtd_text() -> str:
    """Text of the DTD shipped with the package (mlfd.dtd)."""
    return resources.files("multiform").joinpath("mlfd.dtd").read_text("utf-8")


@lru_cache(maxsize=1)
def builtin_schema() -> DtdSchema:
    """Parsed form of the bundled DTD."""
    return parse_dtd(builtin_dtd_text())
