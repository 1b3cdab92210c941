import numpy as np
import pytest

from twrc import db_to_linear, validate_gains


@pytest.fixture(scope="session")
def case_a():
    return validate_gains(db_to_linear(10), db_to_linear(15), db_to_linear(3))


@pytest.fixture(scope="session")
def case_b():
    return validate_gains(db_to_linear(20), db_to_linear(20), db_to_linear(8))


@pytest.fixture(scope="session")
def case_c():
    return validate_gains(db_to_linear(30), db_to_linear(35), db_to_linear(13))


@pytest.fixture(scope="session")
def low_snr():
    return validate_gains(db_to_linear(0), db_to_linear(5), db_to_linear(-7))


def random_gains(rng, n):
    """n random valid gain triples spanning low to high SNR."""
    out = []
    for _ in range(n):
        g2 = db_to_linear(rng.uniform(-10.0, 35.0))
        g1 = g2 * db_to_linear(-rng.uniform(0.0, 10.0))
        g3 = g1 * db_to_linear(-rng.uniform(0.0, 15.0))
        out.append(validate_gains(g1, g2, g3))
    return out
