"""Markup stripping, word counting, link extraction, feature computation."""

import pytest

from hoaxlens.wikitext import (
    ArticleSource,
    EmptyArticle,
    compute_features,
    count_words,
    extract_external_links,
    extract_wikilinks,
    fixture_filename,
    load_article,
    strip_markup,
)


def test_strip_bold_and_links():
    assert strip_markup("'''Alpha''' is [[Beta]]") == "Alpha is Beta"


def test_strip_template():
    assert strip_markup("{{Infobox|x=1}}Text") == "Text"


def test_strip_labeled_link_and_external():
    assert strip_markup("[[Gamma|G]] [http://e.com site]") == "G site"


def test_strip_nested_templates():
    assert strip_markup("{{Outer|a={{Inner|b=2}}}}After") == "After"


def test_strip_table():
    text = "{| class=\"wikitable\"\n|-\n| cell\n|}\nBody"
    assert strip_markup(text) == "Body"


def test_strip_headings_keep_text():
    assert strip_markup("== History ==\nEarly days.") == "History\nEarly days."


def test_strip_comments_and_refs():
    text = "Start<!-- hidden -->middle<ref>cite this</ref> end<ref name=a/>."
    assert strip_markup(text) == "Startmiddle end."


def test_strip_unclosed_template_to_end_of_line():
    text = "Alpha {{broken here\nBeta survives."
    assert strip_markup(text) == "Alpha \nBeta survives."


def test_strip_unclosed_link_to_end_of_line():
    text = "See [[dangling target\nNext line stays."
    assert strip_markup(text) == "See \nNext line stays."


def test_strip_italic_quotes():
    assert strip_markup("''slanted'' and '''heavy'''") == "slanted and heavy"


def test_strip_html_tags():
    assert strip_markup("a <div class=x>b</div> c") == "a b c"


def test_strip_nested_link_in_caption():
    text = "[[File:Pic.png|thumb|A [[topic]] caption]] rest"
    assert strip_markup(text) == "A topic caption rest"


def test_count_words_basics():
    assert count_words("Alpha is Beta") == 3
    assert count_words("") == 0
    assert count_words("  \n\t ") == 0
    # Underscores separate words instead of joining them.
    assert count_words("snake_case_name") == 3
    assert count_words("C3PO says hi") == 3
    assert count_words("don't stop") == 3  # "don" + "t" + "stop"


def test_count_words_unicode():
    assert count_words("café au lait") == 3
    assert count_words("中文 words") == 2


def test_extract_wikilinks_basic_and_order():
    markup = "See [[Beta]] then [[Gamma|the gamma]] then [[Beta]] again."
    assert extract_wikilinks(markup) == ["Beta", "Gamma", "Beta"]


def test_extract_wikilinks_cleaning_applied():
    assert extract_wikilinks("[[main page]]") == ["Main_page"]
    assert extract_wikilinks("[[Alpha#History]]") == ["Alpha"]
    assert extract_wikilinks("[[Main%20Page]]") == ["Main_Page"]
    assert extract_wikilinks("[[#section-only]]") == []
    assert extract_wikilinks("[[]]") == []


def test_extract_wikilinks_skips_organizational():
    markup = (
        "[[Category:Things]] [[File:Pic.png|thumb]] [[Image:Old.jpg]] "
        "[[fr:Sujet]] [[zh-min:X]] [[:Category:Visible]] [[Real_topic]]"
    )
    assert extract_wikilinks(markup) == ["Real_topic"]


def test_extract_wikilinks_canonical_outputs():
    markup = "[[a b]] [[x#y]] [[C%2B%2B]] [[ok|label]]"
    for title in extract_wikilinks(markup):
        assert title
        assert " " not in title
        assert "#" not in title
        assert not any(c in title for c in "<>[]{}|")
        assert title[0] == title[0].upper()


def test_extract_external_links_counts():
    markup = (
        "[http://example.com label] and [https://two.example] plus "
        "bare http://bare.example/path and ftp://files.example/x "
        "but not [[Beta]] or example.com"
    )
    assert extract_external_links(markup) == 4


def test_extract_external_links_none():
    assert extract_external_links("no links here [[Beta]]") == 0


def test_compute_features_worked_example():
    source = ArticleSource("T", "'''Alpha''' links to [[Beta]] and [[Gamma|G]].")
    f = compute_features(source)
    assert f.plain_length == 6
    assert f.plain_to_markup_ratio == pytest.approx(6 / 7)
    assert f.wikilink_density == pytest.approx(200 / 7)
    assert f.extlink_density == 0.0


def test_compute_features_empty_raises():
    with pytest.raises(EmptyArticle):
        compute_features(ArticleSource("T", "{{}} ''''''"))
    with pytest.raises(EmptyArticle):
        compute_features(ArticleSource("T", ""))


def test_compute_features_prefers_supplied_plain():
    source = ArticleSource("T", "'''Alpha''' is [[Beta]].", plain="Exactly two")
    f = compute_features(source)
    assert f.plain_length == 2


def test_features_doubling_invariance():
    markup = "'''Alpha''' sees [[Beta]] at [http://e.com spot] twice."
    single = compute_features(ArticleSource("T", markup))
    doubled = compute_features(ArticleSource("T", markup + "\n" + markup))
    assert doubled.plain_length == 2 * single.plain_length
    assert doubled.plain_to_markup_ratio == single.plain_to_markup_ratio
    assert doubled.wikilink_density == single.wikilink_density
    assert doubled.extlink_density == single.extlink_density


def test_fixture_roundtrip(tmp_path):
    (tmp_path / "Some_Page.wiki").write_text("'''Some Page''' body [[Link]].")
    (tmp_path / "Some_Page.txt").write_text("Some Page body Link.")
    source = load_article(tmp_path, "Some_Page")
    assert source.plain == "Some Page body Link."
    assert "[[Link]]" in source.markup
    with pytest.raises(FileNotFoundError):
        load_article(tmp_path, "Absent")


def test_fixture_filename_encodes_slash():
    assert fixture_filename("AC/DC", ".wiki") == "AC%2FDC.wiki"
