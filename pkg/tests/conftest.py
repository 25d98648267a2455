import random

import pytest
from hypothesis import strategies as st

from stepdet import Instance, Job


def e2() -> Instance:
    return Instance((Job(1, a=2, b=3, d=2, h=1, w=1), Job(2, a=2, b=1, d=5, h=3, w=2)))


@pytest.fixture
def inst_e2() -> Instance:
    return e2()


def random_instance(rng: random.Random, n: int, amax: int = 20, zero_due: bool = False) -> Instance:
    a = [rng.randint(1, amax) for _ in range(n)]
    total = sum(a)
    return Instance.from_arrays(
        a,
        [rng.randint(1, amax // 2 + 1) for _ in range(n)],
        [0 if zero_due else rng.randint(0, total) for _ in range(n)],
        [rng.randint(0, total) for _ in range(n)],
        [rng.randint(1, 10) for _ in range(n)],
    )


@st.composite
def instances(draw, min_n: int = 1, max_n: int = 7):
    n = draw(st.integers(min_n, max_n))
    cols = {
        "a": st.integers(1, 30),
        "b": st.integers(1, 30),
        "d": st.integers(0, 150),
        "h": st.integers(0, 150),
        "w": st.integers(1, 10),
    }
    jobs = tuple(Job(k + 1, **{f: draw(s) for f, s in cols.items()}) for k in range(n))
    return Instance(jobs)


@st.composite
def instance_and_permutation(draw, min_n: int = 1, max_n: int = 7):
    inst = draw(instances(min_n, max_n))
    perm = draw(st.permutations(list(range(1, inst.n + 1))))
    return inst, perm


ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> None:
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def record_note(label: str, detail: str) -> None:
    line = f"criterion {label}: note - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
