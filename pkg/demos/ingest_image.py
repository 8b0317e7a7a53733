"""Extract one image file into an XML complex object.

Builds a small GIF on the fly so the demo has no external inputs,
captures its metadata plus a sidecar, and prints the document.
"""

import os
import struct
import tempfile

from multiform import (
    builtin_schema,
    extract_subdocument,
    make_complex_object,
    parse_sidecar,
    serialize,
    validate,
)
from multiform.xmldoc import parse_document


def tiny_gif(width, height):
    # header + screen descriptor + 2-color table + one-pixel image data
    head = b"GIF89a" + struct.pack("<HH", width, height) + b"\x80\x00\x00"
    palette = b"\x00\x00\x00\xff\xff\xff"
    image = (b"\x2c" + struct.pack("<HHHH", 0, 0, width, height) + b"\x00"
             + b"\x02\x02\x44\x01\x00")
    return head + palette + image + b"\x3b"


SIDECAR = """\
name: Surfer
keyword: surf
keyword: wave
resolution: 72dpi
compression: lzw
"""


def main():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "surfer.gif")
        with open(path, "wb") as fh:
            fh.write(tiny_gif(344, 219))

        record = parse_sidecar(SIDECAR)
        sub = extract_subdocument(path, sidecar=record)
        print(f"extracted {sub.doc_name!r}: type={sub.type} "
              f"size={sub.size} {sub.payload.width}x{sub.payload.length}")

        obj = make_complex_object("Surf session", "2002-06-15", "Local", [sub])
        text = serialize(obj, builtin_schema())

        report = validate(parse_document(text).root, builtin_schema())
        print(f"document valid: {report.valid}")
        print()
        print(text, end="")


if __name__ == "__main__":
    main()
