import numpy as np
import pytest

from mloop import loop_core, mult_group, structure

# Order-6 commutative loop violating the Moufang condition, found by
# exhaustive search over symmetric Latin squares with identity 0.
NONCML6 = np.array(
    [
        [0, 1, 2, 3, 4, 5],
        [1, 0, 3, 2, 5, 4],
        [2, 3, 4, 5, 0, 1],
        [3, 2, 5, 4, 1, 0],
        [4, 5, 0, 1, 3, 2],
        [5, 4, 1, 0, 2, 3],
    ]
)

# Symmetric group on 3 points, elements enumerated lexicographically,
# table[i][j] = p_i o p_j.  Associative but not commutative.
S3_TABLE = np.array(
    [
        [0, 1, 2, 3, 4, 5],
        [1, 0, 4, 5, 2, 3],
        [2, 3, 0, 1, 5, 4],
        [3, 2, 5, 4, 0, 1],
        [4, 5, 1, 0, 3, 2],
        [5, 4, 3, 2, 1, 0],
    ]
)


@pytest.fixture(scope="session")
def z81():
    return loop_core.gen_zassenhaus81()


@pytest.fixture(scope="session")
def e27():
    return loop_core.gen_abelian((3, 3, 3))


@pytest.fixture(scope="session")
def z81_lattice(z81):
    return structure.all_subloops(z81)


@pytest.fixture(scope="session")
def z81_bundle(z81):
    return mult_group.multiplication_group(z81)


@pytest.fixture()
def noncml6():
    return loop_core.CayleyLoop(NONCML6, name="noncml6")


@pytest.fixture()
def s3_loop():
    return loop_core.CayleyLoop(S3_TABLE, name="sym3")
