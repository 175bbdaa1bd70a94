import pytest

from reeskit.polyring import make_ring


@pytest.fixture
def A2():
    """GF(101)[x,y], grevlex."""
    return make_ring(101, ["x", "y"])


@pytest.fixture
def A3():
    return make_ring(101, ["x", "y", "z"])


@pytest.fixture
def artinian5():
    """GF(5)[x,y,z] / ((x^5, y^5) + (x,y,z)^6)."""
    from reeskit.gb import Ideal
    R0 = make_ring(5, ["x", "y", "z"])
    x, y, z = R0.gens()
    m6 = Ideal(R0, (x, y, z)) ** 6
    return make_ring(5, ["x", "y", "z"],
                     quotient=[x ** 5, y ** 5] + list(m6.gens))
