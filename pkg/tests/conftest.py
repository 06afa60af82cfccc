import pytest

from skelet.core.seeds import seed


@pytest.fixture
def theta_txi():
    return seed("product_theta_TxI")


@pytest.fixture
def theta_kxi():
    return seed("product_theta_KxI")


@pytest.fixture
def sigma_kxi():
    return seed("product_sigma_KxI")


@pytest.fixture
def one_tet():
    return seed("one_tet_closed")


@pytest.fixture(params=["product_theta_TxI", "product_theta_KxI", "product_sigma_KxI"])
def product(request):
    return seed(request.param)
