"""
Shared pytest fixtures for the metaphor-hierarchy test suite.

Provides the shipped verb lexicon, small hand-built distribution matrices,
a short raw-text corpus directory and a TreeTagger-style annotated file.
"""

import sys
from collections import Counter
from pathlib import Path

import pytest

# Ensure the project root is importable
PROJECT_ROOT = str(Path(__file__).resolve().parent.parent)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from scripts.distributions import DistributionMatrix
from scripts.lingpipe import VerbLexicon


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def lexicon():
    """The shipped UP/DOWN verb lexicon."""
    return VerbLexicon.default()


# ---------------------------------------------------------------------------
# Hand-built distribution matrices
# ---------------------------------------------------------------------------

@pytest.fixture
def toy_matrix():
    """Three verbs over a small vocabulary.

    ``rise`` holds ten types; ``climb`` five of them plus one of its own;
    ``soar`` two of rise's and three of its own.
    """
    rise = Counter({f"n{i}": 10 - i for i in range(10)})
    climb = Counter({"n0": 4, "n1": 3, "n2": 2, "n3": 1, "n4": 1, "c0": 1})
    soar = Counter({"n0": 2, "n9": 1, "s0": 3, "s1": 2, "s2": 1})
    return DistributionMatrix(
        counts={"rise": rise, "climb": climb, "soar": soar},
        verb_occurrences=Counter({"rise": 55, "climb": 12, "soar": 9}),
        corpus_open_class_total=1000,
    )


# ---------------------------------------------------------------------------
# Hand-counted headline sentences
# ---------------------------------------------------------------------------

HEADLINE_SENTENCES = [
    "Shares rose 2 percent.",
    "Oil prices rose.",
    "Gold rose 10 points.",
    "Profits rose sharply.",
    "The index rose 3 points.",
    "Bond yields rose.",
    "Inflation rose to 4 percent.",
    "Shares rose in early trading.",
    "Prices rose again.",
    "The dollar rose against the euro.",
    "Gold fell 5 points.",
    "Shares fell.",
    "Oil fell below 80 dollars.",
    "Profits fell sharply.",
    "The euro fell.",
    "Stocks climbed 2 percent.",
    "Prices rose 1 percent.",
    "Shares rose 4 percent.",
    "Gold rose.",
    "The pound fell 1 cent.",
]


@pytest.fixture
def headline_text():
    """Twenty one-clause sentences with hand-counted arguments.

    rise: percent 4, price 3, share 3, gold 2, point 2 and one each of
    dollar, euro, index, inflation, profit, trading, yield (21 tokens).
    fall: one each of cent, dollar, euro, gold, oil, point, pound, profit,
    share (9 tokens).  climb: percent 1, stock 1.
    """
    return " ".join(HEADLINE_SENTENCES)


# ---------------------------------------------------------------------------
# Raw-text corpus directory
# ---------------------------------------------------------------------------

_ARTICLE_BODIES = [
    "The FTSE rose 120 points to close at a record high on Monday.",
    "Gold fell sharply as the dollar strengthened against the euro.",
    "Shares in the bank climbed after profits beat forecasts.",
    "Oil prices slipped while traders watched the inventory report.",
    "The Dow gained 1.5 percent in heavy trading.",
    "Bond yields dropped to their lowest level in a decade.",
    "Copper surged on strong demand from factories.",
]


@pytest.fixture
def corpus_dir(tmp_path):
    """Ten documents; three share their first 50 characters.

    Two of the ten are near-copies of the first article (same opening,
    different ending), so eight distinct articles survive deduplication.
    """
    directory = tmp_path / "corpus"
    directory.mkdir()
    for i, body in enumerate(_ARTICLE_BODIES):
        (directory / f"a{i:02d}.txt").write_text(body, encoding="utf-8")
    prefix = _ARTICLE_BODIES[0]
    (directory / "b00.txt").write_text(prefix + " Analysts were surprised.", encoding="utf-8")
    (directory / "b01.html").write_text(
        f"<html><body><p>{prefix}</p><p>Volumes were thin.</p></body></html>", encoding="utf-8"
    )
    (directory / "c00.html").write_text(
        "<html><head><style>p {color: red}</style></head>"
        "<body><p>Silver advanced &amp; platinum eased in quiet trade.</p></body></html>",
        encoding="utf-8",
    )
    return directory


# ---------------------------------------------------------------------------
# Annotated (vertical) input
# ---------------------------------------------------------------------------

ANNOTATED_ROWS = """<doc id="wire-1">
<s>
The\tDT\tthe
FTSE\tNP\tFTSE
rose\tVVD\trise
120\tCD\t@card@
points\tNNS\tpoint
.\tSENT\t.
</s>
<s>
Gold\tNN\tgold
fell\tVVD\tfall
sharply\tRB\tsharply
.\tSENT\t.
</s>
</doc>
"""


@pytest.fixture
def annotated_file(tmp_path):
    path = tmp_path / "wire.vert"
    path.write_text(ANNOTATED_ROWS, encoding="utf-8")
    return path
