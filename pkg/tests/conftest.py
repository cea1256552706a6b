import pytest

from fusionkit import (
    Field,
    cyclic,
    detect_feudal,
    group_rule,
    klein_four,
    moore_read,
    tambara_yamagami,
)


@pytest.fixture(scope="session")
def f17():
    return Field(17)


@pytest.fixture(scope="session")
def f5():
    return Field(5)


@pytest.fixture(scope="session")
def f7():
    return Field(7)


@pytest.fixture(scope="session")
def f13():
    return Field(13)


@pytest.fixture(scope="session")
def mr():
    return moore_read()


@pytest.fixture(scope="session")
def ty2():
    return tambara_yamagami(cyclic(2))


@pytest.fixture(scope="session")
def ty3():
    return tambara_yamagami(cyclic(3))


@pytest.fixture(scope="session")
def z4_graded():
    return detect_feudal(group_rule(cyclic(4, labels=["1", "i", "-1", "-i"])))


@pytest.fixture(scope="session")
def v4_rule():
    return group_rule(klein_four())
