"""Compilation of a DTD schema into a relational schema.

Every complex element becomes a table; leaf children become columns or,
when repeated, tables of their own; choices become discriminator columns;
repeated groups become synthetic tables. The compiler also produces a
layout tree per complex element, mirroring its content model node for
node, which the shredder and the exporter both walk. The mapping only
works for tree-shaped DTDs: an element stored in two places would need
two parent links, so sharing reports a NameCollision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dtd import Choice, DtdSchema, ElementRef, PCData, Repeat, render_model
from .errors import NameCollision


@dataclass(frozen=True)
class Column:
    name: str
    affinity: str  # "integer" or "text"
    origin: str    # where the column came from, for collision reports


@dataclass
class Table:
    name: str
    origin: str
    element: str | None = None   # element this table stores, None for synthetic
    parent: str | None = None
    fk: str | None = None
    single_per_parent: bool = False
    columns: list = field(default_factory=list)

    def column_names(self):
        return [c.name for c in self.columns]


# Layout nodes. One per content-model node; each says where that part of
# the model lives relationally.

@dataclass(frozen=True)
class TextCol:
    """Text content of a leaf root element, held in its own table."""
    column: str


@dataclass(frozen=True)
class LeafCol:
    """Leaf element occurring at most once: a column on the current row."""
    element: str
    column: str


@dataclass(frozen=True)
class TableRef:
    """Complex element: rows of its own table linked to the current row."""
    element: str
    table: str


@dataclass(frozen=True)
class LeafTable:
    """Repeated leaf element: one row per occurrence."""
    element: str
    table: str


@dataclass(frozen=True)
class GroupTable:
    """Repeated group: one row per iteration, content laid out on that row."""
    table: str
    inner: object


@dataclass(frozen=True)
class Seq:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    """Choice: the discriminator column holds the chosen alternative's token."""
    column: str
    tokens: tuple
    alternatives: tuple


@dataclass(frozen=True)
class Rep:
    mult: str
    inner: object


@dataclass(frozen=True)
class RelationalSchema:
    tables: tuple
    by_name: dict
    layouts: dict        # complex element name -> layout tree of its model
    root_element: str
    root_table: str

    def table(self, name: str) -> Table:
        return self.by_name[name]


def _alt_token(model) -> str:
    # Bare element alternatives are named by the element; anything fancier
    # is named by its rendered model text, which is just as deterministic.
    if isinstance(model, ElementRef):
        return model.name
    return render_model(model)


class _Builder:
    def __init__(self, schema: DtdSchema):
        self.schema = schema
        self.tables = []
        self.by_name = {}
        self.layouts = {}
        self.choice_count = {}
        self.group_count = {}

    def new_table(self, name, origin, element=None) -> Table:
        other = self.by_name.get(name)
        if other is not None:
            raise NameCollision("table", name, other.origin, origin)
        table = Table(name=name, origin=origin, element=element)
        self.tables.append(table)
        self.by_name[name] = table
        return table

    def add_column(self, table: Table, name, affinity, origin):
        for col in table.columns:
            if col.name == name:
                raise NameCollision("column", f"{table.name}.{name}",
                                    col.origin, origin)
        table.columns.append(Column(name, affinity, origin))

    def link(self, table: Table, parent: Table):
        table.parent = parent.name
        table.fk = f"{parent.name}_id"
        self.add_column(table, table.fk, "integer", f"link to {parent.name}")
        self.add_column(table, "pos", "integer", "sibling order")

    def element_table(self, name, parent: Table | None, single: bool) -> Table:
        table = self.new_table(name.lower(), f"element {name}", element=name)
        table.single_per_parent = single and parent is not None
        self.add_column(table, "id", "integer", "surrogate key")
        if parent is not None:
            self.link(table, parent)
        model = self.schema.elements[name]
        if isinstance(model, PCData):
            # only reachable for a leaf root; other leaves never get tables here
            self.add_column(table, "value", "text", f"text of {name}")
            self.layouts[name] = TextCol("value")
        else:
            self.layouts[name] = self.compile(model, table)
        return table

    def leaf_table(self, name, parent: Table) -> Table:
        table = self.new_table(name.lower(), f"repeated leaf {name}", element=name)
        self.add_column(table, "id", "integer", "surrogate key")
        self.link(table, parent)
        self.add_column(table, "value", "text", f"text of {name}")
        return table

    def group_table(self, parent: Table) -> Table:
        k = self.group_count.get(parent.name, 0) + 1
        self.group_count[parent.name] = k
        origin = f"repeated group {k} under {parent.element or parent.name}"
        table = self.new_table(f"{parent.name}_g{k}", origin)
        self.add_column(table, "id", "integer", "surrogate key")
        self.link(table, parent)
        return table

    def compile(self, model, table: Table):
        """Lay the model out on `table`, creating child tables as needed."""
        if isinstance(model, ElementRef):
            return self.place(model.name, table, single=True)
        if isinstance(model, Choice):
            k = self.choice_count.get(table.name, 0) + 1
            self.choice_count[table.name] = k
            column = f"choice{k}"
            self.add_column(table, column, "text", f"choice {k} discriminator")
            alts = tuple(self.compile(a, table) for a in model.alternatives)
            tokens = tuple(_alt_token(a) for a in model.alternatives)
            return Alt(column, tokens, alts)
        if isinstance(model, Repeat):
            if model.mult == "?":
                return Rep("?", self.compile(model.inner, table))
            if isinstance(model.inner, ElementRef):
                return Rep(model.mult,
                           self.place(model.inner.name, table, single=False))
            group = self.group_table(table)
            return Rep(model.mult, GroupTable(group.name,
                                              self.compile(model.inner, group)))
        # Sequence; PCData cannot appear inside element content
        return Seq(tuple(self.compile(p, table) for p in model.parts))

    def place(self, name, table: Table, single: bool):
        """A reference to element `name` occurring on rows of `table`."""
        if not self.schema.is_leaf(name):
            child = self.element_table(name, table, single)
            return TableRef(name, child.name)
        if single:
            column = name.lower()
            self.add_column(table, column, "text", f"leaf {name}")
            return LeafCol(name, column)
        return LeafTable(name, self.leaf_table(name, table).name)


def map_schema(schema: DtdSchema) -> RelationalSchema:
    """Compile the DTD into tables, depth-first from the root element."""
    builder = _Builder(schema)
    builder.element_table(schema.root, None, single=False)
    return RelationalSchema(tables=tuple(builder.tables),
                            by_name=builder.by_name,
                            layouts=builder.layouts,
                            root_element=schema.root,
                            root_table=schema.root.lower())


def emit_ddl(rschema: RelationalSchema) -> str:
    """CREATE TABLE statements, one per line, parents before children."""
    lines = []
    for table in rschema.tables:
        rendered = []
        for col in table.columns:
            if col.name == "id":
                rendered.append("id INTEGER PRIMARY KEY")
            elif col.name == table.fk:
                rendered.append(
                    f"{col.name} INTEGER REFERENCES {table.parent}(id)")
            elif col.affinity == "integer":
                rendered.append(f"{col.name} INTEGER")
            else:
                rendered.append(f"{col.name} TEXT")
        lines.append(f"CREATE TABLE {table.name} ({', '.join(rendered)});")
    return "".join(line + "\n" for line in lines)
