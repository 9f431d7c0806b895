import json

import pytest

from gesera.corpus import Document, DocumentCollection

_ACCEPTANCE = []


class _Criterion:
    def __init__(self, label):
        self.label = label
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        _ACCEPTANCE.append((self.label, ok, self.detail if ok else f"{exc_type.__name__}: {exc}"))
        return False


@pytest.fixture
def criterion():
    """``with criterion("C2 ...") as c:`` records one pass/fail acceptance line."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


TOY_DOCS = [
    ("d01", "Cats and dogs", "the cat chased the dog around the garden"),
    ("d02", "", "a dog ran fast across the park and the dog barked"),
    ("d03", "Garden plants", "green plants grow in the garden near the house"),
    ("d04", "", "the president announced a new economic policy"),
    ("d05", "Economy news", "economic growth slowed as the market fell"),
    ("d06", "", "the cat slept on the warm window"),
    ("d07", "Dog training", "training a young dog requires patience and time"),
    ("d08", "", "the market rose after the policy change"),
    ("d09", "House prices", "house prices in the city rose fast"),
    ("d10", "", "a black cat and a white dog played in the garden"),
]


@pytest.fixture
def toy_collection():
    return DocumentCollection(
        [Document(i, body, title) for i, title, body in TOY_DOCS], source_label="toy"
    )


@pytest.fixture
def toy_corpus_file(tmp_path):
    path = tmp_path / "toy.jsonl"
    with open(path, "w") as fh:
        for i, title, body in TOY_DOCS:
            fh.write(json.dumps({"id": i, "title": title, "body": body}) + "\n")
    return path
