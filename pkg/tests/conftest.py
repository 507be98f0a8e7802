import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from essnormal import AugmentationChain, CFData, RationalMap, chain_matrix, generate_ess_normal, jet_of_rational, lft_apply
from essnormal.essnorm import pole_superposition_map

# p/q with p = (z+1)^2, q = z^2 - 2z + 5
GOLDEN = RationalMap([1, 2, 1], [5, -2, 1])
# tau_1^{-1} ∘ (w -> w/(1 - i w)) ∘ tau_1
PARABOLIC = RationalMap([1, 1], [3, -1])

TWO_CONTACT = [
    (([-1.0, 1.0], [1.0, 1.0]), {}),
    (([-2.0, 0.5], [0.5, 2.0]), {"c": 1.5}),
    (([0.0, 3.0], [1.0, 0.7]), {"theta": 0.4}),
]


def two_contact_maps():
    return [pole_superposition_map(*a, **kw) for a, kw in TWO_CONTACT]


def random_steps(rng, m):
    return [(float(rng.uniform(-1.5, 1.5)), float(rng.uniform(0.3, 3.0))) for _ in range(m)]


def random_generated(rng, m):
    """``(phi, zeta, steps, w, n)`` for a generated map with ``m`` augmentation steps."""
    zeta = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    steps = random_steps(rng, m)
    w = complex(rng.uniform(-1, 1), rng.uniform(0.3, 2))
    return generate_ess_normal(zeta, steps, w), zeta, steps, w, 2 * (m + 1)


def chain_cf_data(rng, m=None):
    """CF data read off the jet of a solution built from a random chain.

    Returns ``(data, steps, tail)``; the Hankel matrix is positive definite
    by construction and is re-checked independently by the caller.
    """
    m = int(rng.integers(1, 5)) if m is None else m
    steps = tuple((float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2))) for _ in range(m))
    tail = complex(rng.uniform(-1, 1), rng.uniform(0.3, 2))
    F = lft_apply(chain_matrix(AugmentationChain(steps, tail)), tail)
    return CFData.from_jet(jet_of_rational(F, 0.0, 2 * m), 2 * m), steps, tail


def leading_minors(H):
    return [float(np.linalg.det(H[:k, :k])) for k in range(1, H.shape[0] + 1)]


def break_hankel(rng, data):
    """Perturb CF data so some leading Hankel minor turns negative."""
    a = [c.real for c in data.a[:-1]]
    m = data.m
    k = int(rng.integers(1, m + 1))
    if k == 1:
        a[1] = -abs(a[1]) - rng.uniform(0.1, 1)
    else:
        # lower the corner entry a_{2k-1} of the k-th minor below its Schur bound
        from essnormal import hankel_matrix

        H = hankel_matrix(np.array(a[1 : 2 * k]))
        B, c = H[: k - 1, : k - 1], H[: k - 1, k - 1]
        bound = float(c @ np.linalg.solve(B, c))
        a[2 * k - 1] = bound - rng.uniform(0.1, 1)
    return CFData(data.n, tuple(a) + (data.a[-1],))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def load_schema(name):
    return json.loads(resources.files("essnormal").joinpath("schemas", f"{name}.json").read_text())


@pytest.fixture
def validate():
    def check(obj, name):
        jsonschema.validate(obj, load_schema(name))
        return obj

    return check


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
