import sys
from pathlib import Path

import pytest

TESTS_DIR = str(Path(__file__).resolve().parent)
if TESTS_DIR not in sys.path:
    sys.path.insert(0, TESTS_DIR)

from spanhelpers import write_tokenizer_files  # noqa: E402

from spantrainer.tokenizer import Tokenizer, load_tokenizer  # noqa: E402


@pytest.fixture()
def byte_tokenizer(tmp_path) -> Tokenizer:
    """Merge-free tokenizer: every non-special id is one byte."""
    return load_tokenizer(write_tokenizer_files(tmp_path / "bpe"))
