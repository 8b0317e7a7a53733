import pytest

from imagegen import make_gif, make_png
from multiform.errors import (
    CorruptHeader,
    EmptyHeader,
    FileNotReadable,
    InvalidEncoding,
    MissingSidecarField,
    RaggedRow,
    UnknownExtension,
    UnsupportedFormat,
)
from multiform.extract import (
    KIND_IMAGE,
    KIND_RELATIONAL_VIEW,
    KIND_SOUND,
    KIND_TAGGED_TEXT,
    KIND_TEXT,
    KIND_VIDEO,
    detect_kind,
    extract_common,
    extract_continuous,
    extract_image,
    extract_links,
    extract_subdocument,
    extract_text,
    ingest_relational_view,
)
from multiform.model import PlainText, Sound, TaggedText, Video
from multiform.sidecar import parse_sidecar


def jpeg_bytes(length, width, frame_marker=0xC0, segments=(), tail=b"\xff\xd9"):
    """Assemble a marker stream; only the metadata walk has to accept it."""
    out = bytearray(b"\xff\xd8")
    for marker, payload in segments:
        out += bytes([0xFF, marker])
        out += (len(payload) + 2).to_bytes(2, "big") + payload
    frame = bytes([8]) + length.to_bytes(2, "big") + width.to_bytes(2, "big") + b"\x01"
    out += bytes([0xFF, frame_marker])
    out += (len(frame) + 2).to_bytes(2, "big") + frame
    return bytes(out) + tail


# -- classification --------------------------------------------------------------


@pytest.mark.parametrize("name,kind", [
    ("a.txt", KIND_TEXT),
    ("a.htm", KIND_TAGGED_TEXT),
    ("a.html", KIND_TAGGED_TEXT),
    ("a.xml", KIND_TAGGED_TEXT),
    ("a.sgml", KIND_TAGGED_TEXT),
    ("a.gif", KIND_IMAGE),
    ("a.png", KIND_IMAGE),
    ("a.jpg", KIND_IMAGE),
    ("a.jpeg", KIND_IMAGE),
    ("a.csv", KIND_RELATIONAL_VIEW),
    ("a.tsv", KIND_RELATIONAL_VIEW),
    ("a.wav", KIND_SOUND),
    ("a.mp3", KIND_SOUND),
    ("a.avi", KIND_VIDEO),
    ("a.mpg", KIND_VIDEO),
    ("a.mpeg", KIND_VIDEO),
    ("a.mp4", KIND_VIDEO),
])
def test_kind_by_extension(name, kind):
    assert detect_kind(name) == kind


def test_kind_ignores_case_and_directories():
    assert detect_kind("/data/Pics/Wave.GIF") == KIND_IMAGE


def test_unknown_extension_lists_what_is_supported():
    with pytest.raises(UnknownExtension) as err:
        detect_kind("notes.docx")
    assert err.value.path == "notes.docx"
    assert "txt" in err.value.supported
    assert list(err.value.supported) == sorted(err.value.supported)


def test_common_fields(write):
    path = write("essay.txt", "hello\n")
    name, type_, size, location = extract_common(path)
    assert name == "essay"
    assert type_ == "Text"
    assert size == 6
    assert location == path


def test_common_accepts_an_explicit_name(write):
    path = write("essay.txt", "x")
    assert extract_common(path, "My Essay")[0] == "My Essay"


def test_missing_file_is_reported_with_its_path(tmp_path):
    with pytest.raises(FileNotReadable) as err:
        extract_common(str(tmp_path / "gone.txt"))
    assert "gone.txt" in err.value.path


# -- text ------------------------------------------------------------------------


@pytest.mark.parametrize("content,nb_char,nb_lines", [
    ("ab\ncd\n", 6, 2),
    ("", 0, 0),
    ("hello", 5, 1),
    ("a\nb", 3, 2),        # unterminated final fragment still counts
    ("\n\n", 2, 2),
])
def test_text_metrics(write, content, nb_char, nb_lines):
    payload = extract_text(write("t.txt", content))
    assert (payload.nb_char, payload.nb_lines) == (nb_char, nb_lines)


def test_plain_text_body(write):
    payload = extract_text(write("t.txt", "no <a href='x'> scan here"))
    assert isinstance(payload.body, PlainText)
    assert payload.body.content == "no <a href='x'> scan here"


def test_tagged_text_collects_links(write):
    payload = extract_text(write("t.html", '<a href="u1">x</a>'))
    assert isinstance(payload.body, TaggedText)
    assert payload.body.links == ("u1",)


def test_character_count_is_in_characters_not_bytes(write):
    payload = extract_text(write("t.txt", "héllo\n"))
    assert payload.nb_char == 6


def test_bad_encoding_reports_the_byte_offset(write):
    path = write("t.txt", b"ok\xffbad")
    with pytest.raises(InvalidEncoding) as err:
        extract_text(path)
    assert err.value.offset == 2


def test_extract_text_refuses_other_kinds(write):
    with pytest.raises(UnknownExtension):
        extract_text(write("t.csv", "a,b\n"))


@pytest.mark.parametrize("markup,links", [
    ('<a href="u">x</a>', ("u",)),
    ("<a href='u'>x</a>", ("u",)),
    ("<a href=u>x</a>", ("u",)),
    ('<A HREF="u">x</A>', ("u",)),
    ('<img src="p.gif">', ("p.gif",)),
    ('<a href="u1"><a href="u2">', ("u1", "u2")),
    ('<a href="u"><a href="u">', ("u", "u")),           # duplicates kept
    ('<x data-src="skip" src="keep">', ("keep",)),
    ('outside href="nope" <a href="yes">', ("yes",)),   # only inside tags
    ('<a href="a&amp;b">', ("a&amp;b",)),               # verbatim, no unescaping
    ("plain text with no markup", ()),
    ('<a\nhref = "u">', ("u",)),
])
def test_link_extraction(markup, links):
    assert extract_links(markup) == links


def test_links_come_back_in_document_order(write):
    markup = '<img src="1"> text <a href="2">x</a> <link href="3">'
    assert extract_links(markup) == ("1", "2", "3")


# -- images ----------------------------------------------------------------------


def test_gif_dimensions(write):
    meta = extract_image(write("w.gif", make_gif(344, 219)))
    assert (meta.width, meta.length, meta.format) == (344, 219, "Gif")
    assert meta.compression is None and meta.resolution is None


def test_gif87a_is_accepted(write):
    meta = extract_image(write("old.gif", make_gif(2, 3, version=b"87a")))
    assert (meta.width, meta.length) == (2, 3)


def test_truncated_gif(write):
    with pytest.raises(CorruptHeader):
        extract_image(write("w.gif", b"GIF89a\x01\x00"))


def test_gif_with_zero_dimension(write):
    with pytest.raises(CorruptHeader) as err:
        extract_image(write("w.gif", b"GIF89a\x00\x00\x05\x00rest"))
    assert "0x5" in str(err.value)


def test_png_dimensions(write):
    meta = extract_image(write("p.png", make_png(640, 480)))
    assert (meta.width, meta.length, meta.format) == (640, 480, "Png")


def test_png_with_a_mangled_header_chunk(write):
    data = bytearray(make_png(10, 10))
    data[12:16] = b"XXXX"
    with pytest.raises(CorruptHeader):
        extract_image(write("p.png", bytes(data)))


def test_baseline_jpeg_dimensions(write):
    data = jpeg_bytes(219, 344, segments=[(0xE0, b"JFIF\x00")])
    meta = extract_image(write("p.jpg", data))
    assert (meta.width, meta.length, meta.format) == (344, 219, "Jpeg")


def test_progressive_jpeg_dimensions(write):
    data = jpeg_bytes(100, 200, frame_marker=0xC2)
    meta = extract_image(write("p.jpg", data))
    assert (meta.width, meta.length) == (200, 100)


def test_jpeg_skips_fill_bytes_and_standalone_markers(write):
    body = jpeg_bytes(5, 6)[2:]
    data = b"\xff\xd8" + b"\xff\x01" + b"\xff\xff\xff\xd0" + body
    assert extract_image(write("p.jpg", data)).width == 6


def test_jpeg_without_a_frame_header(write):
    with pytest.raises(CorruptHeader) as err:
        extract_image(write("p.jpg", b"\xff\xd8\xff\xd9"))
    assert "frame header" in str(err.value)


def test_jpeg_scan_data_before_frame(write):
    data = b"\xff\xd8\xff\xda\x00\x04\x01\x00"
    with pytest.raises(CorruptHeader):
        extract_image(write("p.jpg", data))


def test_jpeg_with_garbage_between_segments(write):
    data = b"\xff\xd8" + b"\x00\x00\x00"
    with pytest.raises(CorruptHeader):
        extract_image(write("p.jpg", data))


def test_unrecognized_signature(write):
    with pytest.raises(UnsupportedFormat):
        extract_image(write("p.gif", b"BM\x00\x00 not a gif"))


def test_generated_images_agree_with_a_reference_decoder(write):
    PIL = pytest.importorskip("PIL.Image")
    for w, h in [(1, 1), (344, 219), (2, 900)]:
        for data, ext in [(make_gif(w, h), "gif"), (make_png(w, h), "png")]:
            path = write(f"ref_{w}x{h}.{ext}", data)
            meta = extract_image(path)
            with PIL.open(path) as img:
                assert (meta.width, meta.length) == img.size


# -- relational views -------------------------------------------------------------


def test_csv_ingestion(write):
    view = ingest_relational_view(write("t.csv", "name,age\nAda,36\nAlan,41\n"))
    assert [a.att_name for a in view.attributes] == ["name", "age"]
    assert [a.domain for a in view.attributes] == ["string", "string"]
    assert [[c.value for c in t.cells] for t in view.tuples] == \
        [["Ada", "36"], ["Alan", "41"]]
    assert view.query is None


def test_tsv_uses_tab_delimiters(write):
    view = ingest_relational_view(write("t.tsv", "a\tb\n1,5\t2\n"))
    assert [c.value for c in view.tuples[0].cells] == ["1,5", "2"]


def test_quoted_cells_may_contain_delimiters_and_newlines(write):
    view = ingest_relational_view(write("t.csv", 'a,b\n"x,y","l1\nl2"\n'))
    assert [c.value for c in view.tuples[0].cells] == ["x,y", "l1\nl2"]


@pytest.mark.parametrize("content", ["", "\n", "\na,b\n"])
def test_empty_header_is_rejected(write, content):
    with pytest.raises(EmptyHeader):
        ingest_relational_view(write("t.csv", content))


def test_ragged_row_reports_its_data_row_number(write):
    with pytest.raises(RaggedRow) as err:
        ingest_relational_view(write("t.csv", "a,b\n1,2\n3\n"))
    assert err.value.row == 2
    assert "expected 2 cells, got 1" in str(err.value)


def test_domains_come_from_the_sidecar(write):
    record = parse_sidecar("domain.age: integer\n")
    view = ingest_relational_view(write("t.csv", "name,age\n"), sidecar=record)
    assert [a.domain for a in view.attributes] == ["string", "integer"]


def test_intention_only_keeps_attributes_drops_rows(write):
    view = ingest_relational_view(write("t.csv", "a,b\n1,2\n"),
                                  intention_only=True)
    assert len(view.attributes) == 2
    assert view.tuples == ()


def test_intention_only_skips_ragged_data(write):
    view = ingest_relational_view(write("t.csv", "a,b\nlone\n"),
                                  intention_only=True)
    assert view.tuples == ()


def test_query_argument_beats_the_sidecar(write):
    record = parse_sidecar("query: SELECT * FROM t\n")
    path = write("t.csv", "a\n1\n")
    assert ingest_relational_view(path, sidecar=record).query == "SELECT * FROM t"
    assert ingest_relational_view(path, query="SELECT a FROM t",
                                  sidecar=record).query == "SELECT a FROM t"


def test_view_ingestion_refuses_other_extensions(write):
    with pytest.raises(UnknownExtension):
        ingest_relational_view(write("t.txt", "a,b\n"))


# -- continuous media --------------------------------------------------------------


def test_sound_and_video_need_duration_and_speed():
    with pytest.raises(MissingSidecarField) as err:
        extract_continuous("a.wav", sidecar=parse_sidecar("speed: 44.1 kHz\n"))
    assert err.value.field == "duration"
    with pytest.raises(MissingSidecarField) as err:
        extract_continuous("a.wav", sidecar=parse_sidecar("duration: 3\n"))
    assert err.value.field == "speed"


def test_sound_extraction(write):
    record = parse_sidecar("duration: 3.5\nspeed: 44.1 kHz\n")
    meta = extract_continuous("clip.wav", sidecar=record)
    assert meta == (  # dataclass equality
        type(meta)(duration="3.5", speed="44.1 kHz", media=Sound("clip.wav")))


def test_video_extraction():
    record = parse_sidecar("duration: 90\nspeed: 25 fps\n")
    meta = extract_continuous("film.mp4", sidecar=record)
    assert meta.media == Video("film.mp4")


# -- whole subdocuments -------------------------------------------------------------


def test_subdocument_from_a_text_file(write):
    path = write("story.txt", "once\nupon\n")
    sub = extract_subdocument(path)
    assert sub.doc_name == "story"
    assert sub.type == "Text"
    assert sub.size == 10
    assert sub.location == path
    assert sub.payload.nb_lines == 2


def test_subdocument_overlays_sidecar_metadata(write):
    record = parse_sidecar(
        "keyword: surf\nkeyword: wave\nlanguage: English\nname: Surfing\n")
    sub = extract_subdocument(write("s.txt", "x"), sidecar=record)
    assert sub.doc_name == "Surfing"
    assert sub.keywords == ("surf", "wave")
    assert sub.language == "English"


def test_explicit_name_beats_the_sidecar(write):
    record = parse_sidecar("name: FromSidecar\n")
    sub = extract_subdocument(write("s.txt", "x"), doc_name="Given",
                              sidecar=record)
    assert sub.doc_name == "Given"


def test_image_subdocument_takes_sidecar_compression(write):
    record = parse_sidecar("compression: lzw\nresolution: 72dpi\n")
    sub = extract_subdocument(write("w.gif", make_gif(4, 5)), sidecar=record)
    assert sub.payload.compression == "lzw"
    assert sub.payload.resolution == "72dpi"
    assert sub.size == len(make_gif(4, 5))


def test_view_subdocument_takes_query_and_domains(write):
    record = parse_sidecar("domain.n: integer\nquery: SELECT n FROM t\n")
    path = write("v.csv", "n\n4\n")
    sub = extract_subdocument(path, sidecar=record)
    assert sub.type == "Relational view"
    assert sub.payload.query == "SELECT n FROM t"
    assert sub.payload.attributes[0].domain == "integer"


def test_query_argument_reaches_the_view(write):
    sub = extract_subdocument(write("v.csv", "n\n"), query="Q1",
                              intention_only=True)
    assert sub.payload.query == "Q1"
    assert sub.payload.tuples == ()


def test_continuous_subdocument(write):
    record = parse_sidecar("duration: 3\nspeed: 8 kHz\n")
    path = write("c.wav", b"RIFFxxxx")
    sub = extract_subdocument(path, sidecar=record)
    assert sub.type == "Sound"
    assert sub.payload.media.ref == path
