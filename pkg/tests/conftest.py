import numpy as np
import pytest

from morphocomp.measures import IntrinsicModel
from morphocomp.prob import Alphabet, Distribution, Joint3, Kernel2, Kernel3


def random_distribution(rng, alphabet: Alphabet) -> Distribution:
    return Distribution(alphabet, rng.dirichlet(np.ones(alphabet.size)))


def random_kernel2(rng, source: Alphabet, target: Alphabet) -> Kernel2:
    rows = rng.dirichlet(np.ones(target.size), size=source.size)
    return Kernel2(source, target, rows)


def random_kernel3(rng, s1: Alphabet, s2: Alphabet, target: Alphabet) -> Kernel3:
    entries = rng.dirichlet(np.ones(target.size), size=(s1.size, s2.size))
    return Kernel3(s1, s2, target, entries)


def random_joint(rng, nx: int, ny: int, nz: int) -> Joint3:
    probs = rng.dirichlet(np.ones(nx * ny * nz)).reshape(nx, ny, nz)
    return Joint3(Alphabet(nx), Alphabet(ny), Alphabet(nz), probs)


def random_model(rng, n_sensors: int = 3, n_actions: int = 2) -> IntrinsicModel:
    s = Alphabet(n_sensors)
    a = Alphabet(n_actions)
    return IntrinsicModel(
        random_distribution(rng, s),
        random_kernel2(rng, s, a),
        random_kernel3(rng, s, a, s),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
