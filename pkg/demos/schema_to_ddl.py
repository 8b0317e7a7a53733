"""Compile DTDs into relational schemas.

Shows the bundled document type first, then a small custom DTD, to make
the mapping rules visible: elements with structure become tables, leaf
elements become columns or child tables depending on how often they can
repeat, and choices become discriminator columns.
"""

from multiform import builtin_dtd_text, emit_ddl, map_schema, parse_dtd

RECIPE_DTD = """\
<!ELEMENT RECIPE (TITLE, SERVES?, INGREDIENT+, (OVEN | STOVE), STEP*)>
<!ELEMENT TITLE (#PCDATA)>
<!ELEMENT SERVES (#PCDATA)>
<!ELEMENT INGREDIENT (AMOUNT, NAME)>
<!ELEMENT AMOUNT (#PCDATA)>
<!ELEMENT NAME (#PCDATA)>
<!ELEMENT OVEN (#PCDATA)>
<!ELEMENT STOVE (#PCDATA)>
<!ELEMENT STEP (#PCDATA)>
"""


def show(title, dtd_text):
    schema = parse_dtd(dtd_text)
    rschema = map_schema(schema)
    print(f"-- {title}: root {schema.root}, "
          f"{len(schema.elements)} elements -> {len(rschema.tables)} tables")
    print(emit_ddl(rschema))


def main():
    show("bundled document type", builtin_dtd_text())
    show("recipe card", RECIPE_DTD)


if __name__ == "__main__":
    main()
