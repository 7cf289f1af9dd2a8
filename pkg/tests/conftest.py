import random

import pytest

from lexbias import kernels
from lexbias.corpus import Corpus


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Run the test once per available kernel backend."""
    with kernels.use_backend(request.param):
        yield request.param


def random_sentences(rng: random.Random, max_tokens=200, max_alphabet=20, max_len=12):
    alphabet = [f"t{i}" for i in range(rng.randint(1, max_alphabet))]
    n_tokens = rng.randint(1, max_tokens)
    sentences = []
    while n_tokens > 0:
        k = min(n_tokens, rng.randint(1, max_len))
        sentences.append([rng.choice(alphabet) for _ in range(k)])
        n_tokens -= k
    return sentences


@pytest.fixture
def write_lines(tmp_path):
    def _write(name, lines, newline="\n"):
        path = tmp_path / name
        path.write_bytes(newline.join(lines).encode("utf-8") + (newline.encode() if lines else b""))
        return str(path)

    return _write


def corpus_of(*sentences, label=""):
    return Corpus.from_sentences([s.split() if isinstance(s, str) else s for s in sentences], label)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
