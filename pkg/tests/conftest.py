import random
import string
from pathlib import Path

import pytest

from masc.catalog import load_catalog
from masc.operators import build_misuse_case
from masc.plugins import load_plugins

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
HEXENCODE_PLUGIN = REPO_ROOT / "demo" / "plugins" / "hexencode"
DEMO_APP = REPO_ROOT / "demo" / "app"


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture()
def registry():
    return load_plugins([])


@pytest.fixture()
def cipher_case(catalog):
    return build_misuse_case(catalog.lookup("javax.crypto.Cipher"), catalog)


@pytest.fixture()
def digest_case(catalog):
    return build_misuse_case(catalog.lookup("java.security.MessageDigest"), catalog)


@pytest.fixture()
def tm_case(catalog):
    return build_misuse_case(catalog.lookup("javax.net.ssl.X509TrustManager"), catalog)


ALGO_CHARS = string.ascii_letters + string.digits + "/-_."


def algorithm_corpus(n: int, seed: int = 7) -> list[str]:
    """Deterministic fuzz corpus of plausible algorithm-name strings."""
    rng = random.Random(seed)
    corpus = ["DES", "MD5", "AES/ECB/PKCS5Padding", "a", "Aa", "x/Y"]
    while len(corpus) < n:
        length = rng.randint(1, 24)
        corpus.append("".join(rng.choice(ALGO_CHARS) for _ in range(length)))
    return corpus[:n]


# one line per acceptance criterion, shown at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
