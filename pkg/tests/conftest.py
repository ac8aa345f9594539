from __future__ import annotations

from pathlib import Path

import pytest

from mscompress.corpus import (Cluster, StopwordList, load_stopwords,
                               parse_cluster, sentence_from_pairs)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def lonesome_cluster() -> Cluster:
    return parse_cluster(DATA_DIR.joinpath("lonesome_george.json").read_bytes())


@pytest.fixture(scope="session")
def pt_stopwords() -> StopwordList:
    return load_stopwords(DATA_DIR.joinpath("stopwords_pt.txt").read_bytes())


@pytest.fixture
def micro_cluster() -> Cluster:
    # two sentences "a b c" / "a b d", all content words
    return Cluster(
        id="micro",
        language="und",
        sentences=(
            sentence_from_pairs([("a", "X"), ("b", "X"), ("c", "X")]),
            sentence_from_pairs([("a", "X"), ("b", "X"), ("d", "X")]),
        ),
    )
