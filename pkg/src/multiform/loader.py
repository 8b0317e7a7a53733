"""Shredding documents into rows, the backing store, loading, and export.

shred turns a validated element tree into ordered inserts by walking the
content model, its relational layout, and the match tree in lockstep.
load applies a RowSet to a store atomically, offsetting ids so documents
accumulate. export inverts the layout walk and hands the rebuilt tree to
the canonical formatter, which is what makes round-trip checks byte-exact.
"""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass, field

import xml.etree.ElementTree as ET

from .dtd import DtdSchema, match_children
from .errors import IntegrityViolation, NotValidated, SchemaMismatch, UnknownId
from .mapper import (
    Alt,
    GroupTable,
    LeafCol,
    LeafTable,
    RelationalSchema,
    Rep,
    Seq,
    TableRef,
    TextCol,
    emit_ddl,
)
from .xmldoc import DEFAULT_SYSTEM_ID, format_document


@dataclass
class RowSet:
    """Ordered inserts; parent rows always precede their children."""

    inserts: list = field(default_factory=list)

    def add(self, table: str) -> dict:
        row = {}
        self.inserts.append((table, row))
        return row

    def counts(self) -> dict:
        out = {}
        for table, _ in self.inserts:
            out[table] = out.get(table, 0) + 1
        return out


class _Shredder:
    """One document walk. Context is (current row, its per-child position counters)."""

    def __init__(self, schema, rschema, rows):
        self.schema = schema
        self.rschema = rschema
        self.rows = rows
        self.next_id = {}

    def new_row(self, table_name, ctx):
        n = self.next_id.get(table_name, 0) + 1
        self.next_id[table_name] = n
        row = self.rows.add(table_name)
        row["id"] = n
        if ctx is not None:
            parent_row, counters = ctx
            table = self.rschema.table(table_name)
            row[table.fk] = parent_row["id"]
            counters[table_name] = counters.get(table_name, 0) + 1
            row["pos"] = counters[table_name]
        return row

    def element(self, node, table_name, ctx):
        row = self.new_row(table_name, ctx)
        name = self.rschema.table(table_name).element
        layout = self.rschema.layouts[name]
        if isinstance(layout, TextCol):
            row[layout.column] = node.text or ""
            return
        children = list(node)
        tree = match_children(self.schema.elements[name],
                              [c.tag for c in children])
        self.walk(layout, tree, children, (row, {}))

    def walk(self, layout, mtree, children, ctx):
        row, _ = ctx
        if isinstance(layout, LeafCol):
            row[layout.column] = children[mtree.index].text or ""
        elif isinstance(layout, TableRef):
            self.element(children[mtree.index], layout.table, ctx)
        elif isinstance(layout, LeafTable):
            leaf = self.new_row(layout.table, ctx)
            leaf["value"] = children[mtree.index].text or ""
        elif isinstance(layout, GroupTable):
            group = self.new_row(layout.table, ctx)
            self.walk(layout.inner, mtree, children, (group, {}))
        elif isinstance(layout, Seq):
            for part, sub in zip(layout.parts, mtree.parts):
                self.walk(part, sub, children, ctx)
        elif isinstance(layout, Alt):
            row[layout.column] = layout.tokens[mtree.alt]
            self.walk(layout.alternatives[mtree.alt], mtree.inner, children, ctx)
        else:  # Rep: one walk per iteration of the repetition
            for iteration in mtree.iterations:
                self.walk(layout.inner, iteration, children, ctx)


def shred(document: ET.Element, schema: DtdSchema, rschema: RelationalSchema,
          report) -> RowSet:
    """Turn a validated element tree into inserts.

    The ValidationReport for this exact tree must be supplied; shredding
    leans on the document being valid, so unvalidated input is refused.
    """
    if report is None or report.document is not document:
        raise NotValidated()
    if not report.valid:
        raise NotValidated("document failed validation; refusing to shred it")
    rows = RowSet()
    _Shredder(schema, rschema, rows).element(document, rschema.root_table, None)
    return rows


# -- the store ---------------------------------------------------------------------


def _quote(value) -> str:
    if value is None:
        return "NULL"
    if isinstance(value, int):
        return str(value)
    return "'" + str(value).replace("'", "''") + "'"


class OdsStore:
    """Relational staging store for shredded documents, backed by sqlite.

    Opening a path that already holds data checks the tables against the
    schema instead of recreating them, so a store can be filled over
    several runs. to_script() renders the whole store as portable SQL.
    """

    def __init__(self, rschema: RelationalSchema, path: str = ":memory:"):
        self.rschema = rschema
        self.conn = sqlite3.connect(path, isolation_level=None)
        self.conn.execute("PRAGMA foreign_keys = ON")
        existing = {
            name for (name,) in self.conn.execute(
                "SELECT name FROM sqlite_master WHERE type = 'table'")
        }
        if not existing:
            self.conn.executescript(emit_ddl(rschema))
            return
        expected = {t.name for t in rschema.tables}
        if existing != expected:
            raise SchemaMismatch(
                f"store tables {sorted(existing)} do not match the schema "
                f"tables {sorted(expected)}")
        for table in rschema.tables:
            have = [row[1] for row in
                    self.conn.execute(f"PRAGMA table_info({table.name})")]
            if have != table.column_names():
                raise SchemaMismatch(
                    f"table {table.name} has columns {have}, "
                    f"schema expects {table.column_names()}")

    def close(self):
        self.conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def max_id(self, table: str) -> int:
        cur = self.conn.execute(f"SELECT COALESCE(MAX(id), 0) FROM {table}")
        return cur.fetchone()[0]

    def to_script(self) -> str:
        """The store as SQL text: schema first, then every row in id order."""
        lines = [emit_ddl(self.rschema).rstrip("\n")] if self.rschema.tables else []
        for table in self.rschema.tables:
            names = table.column_names()
            cur = self.conn.execute(
                f"SELECT {', '.join(names)} FROM {table.name} ORDER BY id")
            for row in cur:
                values = ", ".join(_quote(v) for v in row)
                lines.append(
                    f"INSERT INTO {table.name} ({', '.join(names)}) "
                    f"VALUES ({values});")
        return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class LoadReport:
    """Rows inserted per table, zeros included."""

    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def load(rows: RowSet, store: OdsStore) -> LoadReport:
    """Apply a RowSet to the store, all rows or none.

    Ids in the RowSet start at 1; here they are offset by each table's
    current maximum so repeated loads accumulate instead of clashing.
    """
    rschema = store.rschema
    for table_name, row in rows.inserts:
        table = rschema.by_name.get(table_name)
        if table is None:
            raise SchemaMismatch(f"RowSet names unknown table {table_name!r}")
        unknown = set(row) - set(table.column_names())
        if unknown:
            raise SchemaMismatch(
                f"RowSet names unknown column {table_name}."
                f"{sorted(unknown)[0]}")

    single_seen = {}
    for table_name, row in rows.inserts:
        table = rschema.by_name[table_name]
        if table.single_per_parent:
            key = (table_name, row.get(table.fk))
            if key in single_seen:
                raise IntegrityViolation(
                    f"table {table_name} allows one row per parent; "
                    f"parent id {row.get(table.fk)} got two")
            single_seen[key] = True

    offsets = {t.name: store.max_id(t.name) for t in rschema.tables}
    counts = {t.name: 0 for t in rschema.tables}
    store.conn.execute("BEGIN")
    try:
        for table_name, row in rows.inserts:
            table = rschema.by_name[table_name]
            shifted = dict(row)
            shifted["id"] = row["id"] + offsets[table_name]
            if table.fk and table.fk in row:
                shifted[table.fk] = row[table.fk] + offsets[table.parent]
            names = list(shifted)
            store.conn.execute(
                f"INSERT INTO {table_name} ({', '.join(names)}) "
                f"VALUES ({', '.join('?' for _ in names)})",
                [shifted[n] for n in names])
            counts[table_name] += 1
    except sqlite3.IntegrityError as exc:
        store.conn.execute("ROLLBACK")
        raise IntegrityViolation(str(exc)) from None
    except Exception:
        store.conn.execute("ROLLBACK")
        raise
    store.conn.execute("COMMIT")
    return LoadReport(counts=counts)


# -- export ------------------------------------------------------------------------


class _Exporter:
    def __init__(self, store):
        self.store = store
        self.rschema = store.rschema

    def select(self, table_name, fk_value):
        table = self.rschema.table(table_name)
        names = table.column_names()
        cur = self.store.conn.execute(
            f"SELECT {', '.join(names)} FROM {table_name} "
            f"WHERE {table.fk} = ? ORDER BY pos", (fk_value,))
        return [dict(zip(names, row)) for row in cur]

    def element(self, table_name, row) -> ET.Element:
        table = self.rschema.table(table_name)
        node = ET.Element(table.element)
        layout = self.rschema.layouts[table.element]
        if isinstance(layout, TextCol):
            node.text = row[layout.column] or ""
        else:
            node.extend(self.walk(layout, table_name, row))
        return node

    def leaf(self, name, text) -> ET.Element:
        node = ET.Element(name)
        node.text = text
        return node

    def walk(self, layout, table_name, row) -> list:
        """Children encoded by `layout` on this row, in document order."""
        if isinstance(layout, LeafCol):
            value = row[layout.column]
            return [] if value is None else [self.leaf(layout.element, value)]
        if isinstance(layout, TableRef):
            return [self.element(layout.table, child)
                    for child in self.select(layout.table, row["id"])]
        if isinstance(layout, LeafTable):
            return [self.leaf(layout.element, child["value"])
                    for child in self.select(layout.table, row["id"])]
        if isinstance(layout, GroupTable):
            out = []
            for child in self.select(layout.table, row["id"]):
                out.extend(self.walk(layout.inner, layout.table, child))
            return out
        if isinstance(layout, Seq):
            out = []
            for part in layout.parts:
                out.extend(self.walk(part, table_name, row))
            return out
        if isinstance(layout, Alt):
            token = row[layout.column]
            if token is None:
                return []
            if token not in layout.tokens:
                raise IntegrityViolation(
                    f"{table_name}.{layout.column} holds {token!r}, which "
                    f"names no alternative of the choice")
            return self.walk(layout.alternatives[layout.tokens.index(token)],
                             table_name, row)
        # Rep: cardinality is carried by the row sets selected above
        return self.walk(layout.inner, table_name, row)


def export(store: OdsStore, object_id: int, schema: DtdSchema,
           rschema: RelationalSchema, system_id: str = DEFAULT_SYSTEM_ID) -> str:
    """Rebuild one loaded document and render it canonically."""
    root_table = rschema.table(rschema.root_table)
    names = root_table.column_names()
    cur = store.conn.execute(
        f"SELECT {', '.join(names)} FROM {rschema.root_table} WHERE id = ?",
        (object_id,))
    found = cur.fetchone()
    if found is None:
        raise UnknownId(rschema.root_table, object_id)
    row = dict(zip(names, found))
    tree = _Exporter(store).element(rschema.root_table, row)
    return format_document(tree, system_id)
