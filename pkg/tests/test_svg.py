import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, strategies as st

from crisis_pulse.svg import HEIGHT, MARGIN_TOP, PLOT_H, WIDTH, render_svg_bar, svg_bar_chart

NS = "{http://www.w3.org/2000/svg}"
# Elements and attributes this renderer may emit, all of which SVG 1.1 defines.
ALLOWED = {
    "svg": {"xmlns", "version", "width", "height", "viewBox", "font-family"},
    "title": set(),
    "g": {"class", "stroke", "stroke-width", "font-size", "text-anchor", "fill"},
    "line": {"x1", "y1", "x2", "y2"},
    "text": {"x", "y", "font-size", "text-anchor", "transform"},
    "rect": {"class", "x", "y", "width", "height", "fill"},
}
NUMERIC = {"x", "y", "x1", "y1", "x2", "y2", "width", "height", "font-size", "stroke-width"}


def validate_svg11(text):
    """Structural check against the SVG 1.1 vocabulary (the DTD is not fetched)."""
    assert text.startswith('<?xml version="1.0" encoding="UTF-8"')
    assert '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"' in text
    root = ET.fromstring(text.encode("utf-8"))
    assert root.tag == NS + "svg"
    assert root.get("version") == "1.1"
    assert (root.get("width"), root.get("height"), root.get("viewBox")) == (str(WIDTH), str(HEIGHT), f"0 0 {WIDTH} {HEIGHT}")
    for el in root.iter():
        name = el.tag.removeprefix(NS)
        assert name in ALLOWED, name
        assert set(el.attrib) <= ALLOWED[name] | {"xmlns"}, (name, el.attrib)
        for attr in NUMERIC & set(el.attrib):
            value = float(el.get(attr))
            if attr in {"width", "height"}:
                assert value >= 0
    return root


def bars(root):
    return [el for el in root.iter(NS + "rect") if el.get("class") == "bar"]


def test_single_bar_spans_full_height():
    root = validate_svg11(svg_bar_chart([("a", 1)], "tek"))
    [bar] = bars(root)
    assert float(bar.get("height")) == PLOT_H
    assert float(bar.get("y")) == MARGIN_TOP


def test_all_zero_series():
    root = validate_svg11(svg_bar_chart([("a", 0), ("b", 0)], "sıfır"))
    assert [float(b.get("height")) for b in bars(root)] == [0.0, 0.0]
    assert len(list(root.iter(NS + "line"))) == 2


def test_empty_and_negative_rejected():
    with pytest.raises(ValueError):
        svg_bar_chart([], "boş")
    with pytest.raises(ValueError):
        svg_bar_chart([("a", -1)], "negatif")


def test_grouped_series_and_escaping(tmp_path):
    series = {"negative": [("2020-10-30", 3), ("2020-10-31", 1)],
              "positive": [("2020-10-30", 0), ("2020-10-31", 4)]}
    path = render_svg_bar(series, "günlük <duygu> & dağılım", tmp_path / "c" / "d.svg")
    root = validate_svg11(path.read_text("utf-8"))
    assert len(bars(root)) == 4
    assert root.find(NS + "title").text == "günlük <duygu> & dağılım"
    with pytest.raises(ValueError):
        svg_bar_chart({"a": [("x", 1)], "b": [("y", 1)]}, "mismatch")


@given(st.lists(st.tuples(st.text(min_size=1, max_size=12).filter(lambda s: re.fullmatch(r"[^\x00-\x08\x0b\x0c\x0e-\x1f\ud800-\udfff￾￿]+", s)),
                          st.integers(0, 10_000)), min_size=1, max_size=40))
def test_charts_valid_and_deterministic(series):
    text = svg_bar_chart(series, "t")
    assert text == svg_bar_chart(series, "t")
    root = validate_svg11(text)
    heights = [float(b.get("height")) for b in bars(root)]
    assert all(0 <= h <= PLOT_H for h in heights)
    peak = max(v for _, v in series)
    if peak:
        assert max(heights) == PLOT_H
