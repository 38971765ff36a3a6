import random

import pytest

from tileverify.core import Assembly, TileSet, TileType

DEFAULT_SEED = 20240611


def pytest_addoption(parser):
    parser.addoption("--rng-seed", type=int, default=DEFAULT_SEED,
                     help="seed for randomized tests (printed for replay)")


@pytest.fixture
def rng_seed(request):
    seed = request.config.getoption("--rng-seed")
    print(f"rng seed: {seed}")
    return seed


@pytest.fixture
def rng(rng_seed):
    return random.Random(rng_seed)


def square_2x2(strength=1):
    """2x2 block, four private strength-``strength`` bonds around the cycle."""
    ts = TileSet([
        TileType.make("A", E=("ab", strength), N=("ac", strength)),
        TileType.make("B", W=("ab", strength), N=("bd", strength)),
        TileType.make("C", S=("ac", strength), E=("cd", strength)),
        TileType.make("D", S=("bd", strength), W=("cd", strength)),
    ])
    alpha = Assembly({(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3})
    return ts, alpha


def domino(strength=1):
    ts = TileSet([TileType.make("A", E=("g", strength)), TileType.make("B", W=("g", strength))])
    return ts, Assembly({(0, 0): 0, (1, 0): 1})


_ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict; the line is printed now and again in the summary."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        _ACCEPTANCE.append((number, ok, detail))
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
