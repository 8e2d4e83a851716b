import pytest

from intcert.algebra import SparsePoly


@pytest.fixture
def xy():
    return (
        SparsePoly.variable("x", ("x", "y")),
        SparsePoly.variable("y", ("x", "y")),
    )


@pytest.fixture
def one():
    return SparsePoly.constant(1, ("x", "y"))
