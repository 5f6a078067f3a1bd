import pytest

from finsheaf import fixtures as fx


@pytest.fixture(scope="session")
def sierp():
    return fx.sierpinski()[0]


@pytest.fixture(scope="session")
def sierp_basis():
    return fx.sierpinski()[1]


@pytest.fixture(scope="session")
def disc2():
    return fx.disc2()[0]


@pytest.fixture(scope="session")
def disc2_basis():
    return fx.disc2()[1]


@pytest.fixture(scope="session")
def pc4():
    return fx.pseudocircle()[0]


@pytest.fixture(scope="session")
def pc4_basis():
    return fx.pseudocircle()[1]


@pytest.fixture(scope="session")
def pt():
    return fx.point_space()


@pytest.fixture(scope="session")
def sierp_sheaf():
    return fx.sierp_two_section_sheaf()


@pytest.fixture(scope="session")
def g2_failure():
    return fx.disc2_g2_failure()


@pytest.fixture(scope="session")
def skyscraper():
    return fx.sierp_z2_skyscraper()
