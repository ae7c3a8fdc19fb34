import pytest

from rotorsand.multigraph import Multigraph
from rotorsand.ribbon import RibbonGraph


@pytest.fixture
def square_graph():
    """Diamond with one diagonal (the five-edge near-complete graph),
    drawn on the unit square: a=(0,0), b=(1,0), s=(0,1), c=(1,1)."""
    return Multigraph(
        ["a", "b", "c", "s"],
        {
            "sa": ("s", "a"),
            "ab": ("a", "b"),
            "ac": ("a", "c"),
            "bc": ("b", "c"),
            "cs": ("c", "s"),
        },
    )


@pytest.fixture
def square_ribbon(square_graph):
    return RibbonGraph(
        square_graph,
        {
            "a": ("ab", "ac", "sa"),
            "b": ("bc", "ab"),
            "c": ("cs", "ac", "bc"),
            "s": ("cs", "sa"),
        },
    )


@pytest.fixture
def fig_graph():
    """The same graph with the labels of the tree-count example:
    a=(0,0), b=(0,3), c=(3,3), d=(3,0); no edge between b and d."""
    return Multigraph(
        ["a", "b", "c", "d"],
        {
            "ab": ("a", "b"),
            "bc": ("b", "c"),
            "cd": ("c", "d"),
            "ac": ("a", "c"),
            "ad": ("a", "d"),
        },
    )


@pytest.fixture
def fig_ribbon(fig_graph):
    return RibbonGraph(
        fig_graph,
        {
            "a": ("ad", "ac", "ab"),
            "b": ("bc", "ab"),
            "c": ("bc", "ac", "cd"),
            "d": ("cd", "ad"),
        },
    )


@pytest.fixture
def triangle():
    return Multigraph(
        ["u", "v", "w"], {"uv": ("u", "v"), "vw": ("v", "w"), "uw": ("u", "w")}
    )


@pytest.fixture
def triangle_ribbon(triangle):
    return RibbonGraph(
        triangle, {"u": ("uv", "uw"), "v": ("uv", "vw"), "w": ("vw", "uw")}
    )
