from fractions import Fraction
import xml.etree.ElementTree as ET

from exppair_lp.pairs import ExponentPair
from exppair_lp.plot import plot_generations, plotted_points, render_svg

GEN = ExponentPair(Fraction(1, 6), Fraction(2, 3))
NS = "{http://www.w3.org/2000/svg}"


def test_depth_six_has_126_points(tmp_path):
    assert plot_generations(GEN, 6, tmp_path / "g.svg") == 126
    root = ET.parse(tmp_path / "g.svg").getroot()
    assert root.tag == NS + "svg" and root.get("version") == "1.1"
    assert len(root.findall(NS + "circle")) == 126
    assert len(root.findall(NS + "rect")) == 3  # background and the two outlines


def test_depth_zero_single_point():
    assert plotted_points(GEN, 0) == [GEN.point]
    assert render_svg(GEN, 0).count("<circle") == 1


def test_byte_deterministic(tmp_path):
    plot_generations(GEN, 5, tmp_path / "a.svg")
    plot_generations(GEN, 5, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_points_inside_rectangles():
    # shifted coordinates land in (0,1/6)x(1/6,1/2) or (1/6,1/2)x(0,1/6)
    for k, l in plotted_points(GEN, 6):
        y = l - Fraction(1, 2)
        assert (0 <= k <= Fraction(1, 6) <= y <= Fraction(1, 2)) or \
            (Fraction(1, 6) <= k <= Fraction(1, 2) and 0 <= y <= Fraction(1, 6))
