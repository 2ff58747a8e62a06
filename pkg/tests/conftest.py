import pytest

from connmat.partitions import CoherentOrder, Partition, conjugation_classes

# Part_3 listed as in the worked n=3 example: singletons, 1|23, 13|2, 12|3, one block
PAPER_ORDER_3 = ["1|2|3", "1|2 3", "1 3|2", "1 2|3", "1 2 3"]

# connectivity matrix, pi-matrix and B^t A for PAPER_ORDER_3
PAPER_A = [
    [0, 0, 0, 0, 1],
    [0, 0, 1, 1, 1],
    [0, 1, 0, 1, 1],
    [0, 1, 1, 0, 1],
    [1, 1, 1, 1, 1],
]
PAPER_B = [
    [1, 0, 0, 0, 0],
    [-1, 1, 0, 0, 0],
    [-1, 0, 1, 0, 0],
    [-1, 0, 0, 1, 0],
    [2, -1, -1, -1, 1],
]
PAPER_BTA = [
    [2, 0, 0, 0, 0],
    [-1, -1, 0, 0, 0],
    [-1, 0, -1, 0, 0],
    [-1, 0, 0, -1, 0],
    [1, 1, 1, 1, 1],
]


def reversed_order(n):
    """A second coherent order: same-level classes in reverse signature order, members reversed."""
    classes = conjugation_classes(n)
    levels = {}
    for c in classes:
        levels.setdefault(c.num_blocks, []).append(c)
    seq = []
    for m in sorted(levels, reverse=True):
        for c in reversed(levels[m]):
            seq.extend(reversed(c.members))
    return CoherentOrder.from_sequence(seq, n)


@pytest.fixture
def paper_order_3():
    return CoherentOrder.from_sequence([Partition.parse(t) for t in PAPER_ORDER_3])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
