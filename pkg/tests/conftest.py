import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
REPO_ROOT = TESTS_DIR.parent

sys.path.insert(0, str(TESTS_DIR))          # bruteforce / oracles helpers
sys.path.insert(0, str(REPO_ROOT / "scripts"))  # synthetic corpus generator


@pytest.fixture(scope="session")
def fixture_corpus():
    """Hand-annotated methods: [{id, domain, code, expect}, ...]."""
    records = []
    path = TESTS_DIR / "fixtures" / "fixture_corpus.jsonl"
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        assert header == {"format": "corpus@1"}
        for line in fh:
            records.append(json.loads(line))
    assert len(records) == 50
    return records


@pytest.fixture(scope="session")
def mini_corpus_path(tmp_path_factory):
    """Synthetic ~1k-method corpus written once per session."""
    import make_mini_corpus

    path = tmp_path_factory.mktemp("corpus") / "mini.jsonl"
    make_mini_corpus.write_corpus(make_mini_corpus.build_corpus(seed=97), path)
    return path
