import pytest

from bogomolov import catalog

SMALL_NAMES = [
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C12", "C16",
    "V4", "E(2,3)", "E(2,4)", "E(3,2)",
    "D2", "D3", "D4", "D5", "D6", "D7", "D8",
    "Q8", "A4", "C4xC2", "C4xC4", "C8xC2", "C2xC6", "C2xQ8", "C2xD4", "C4xC2xC2", "C3xC5",
]


@pytest.fixture(scope="session")
def small_groups():
    return {n: catalog.named(n) for n in SMALL_NAMES}


@pytest.fixture(scope="session")
def a5():
    return catalog.named("A5")


@pytest.fixture(scope="session")
def s4():
    return catalog.named("S4")
