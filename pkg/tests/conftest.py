import pytest

from ggc.graph import complete, disjoint_union, path, star

# acceptance criteria outcomes, printed after the run
CRITERIA: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")


@pytest.fixture
def criterion():
    def record(name: str, ok: bool, detail: str = ""):
        CRITERIA[name] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
        assert ok, f"criterion {name}: {detail}"

    return record


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k3k1():
    return disjoint_union(complete(3), complete(1))


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def k14():
    return star(4)
