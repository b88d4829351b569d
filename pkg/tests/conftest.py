import numpy as np
import pytest


def index_tensor_2x2x2():
    """x(i1, i2, i3) = i1 + 2(i2 - 1) + 4(i3 - 1) with 1-based indices, built entry by entry."""
    x = np.zeros((2, 2, 2))
    for i1 in range(1, 3):
        for i2 in range(1, 3):
            for i3 in range(1, 3):
                x[i1 - 1, i2 - 1, i3 - 1] = i1 + 2 * (i2 - 1) + 4 * (i3 - 1)
    return x


def rank1_tensor(a, b, c):
    return np.einsum("i,j,k->ijk", a, b, c)


def tucker_tensor(rng, dims, ranks):
    """A tensor that is exactly representable at ``ranks``."""
    core = rng.standard_normal(ranks)
    factors = [np.linalg.qr(rng.standard_normal((d, r)))[0] for d, r in zip(dims, ranks)]
    return np.einsum("abc,ia,jb,kc->ijk", core, *factors), factors, core


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def index_tensor():
    return index_tensor_2x2x2()


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, title, detail = results[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({detail})")
