import numpy as np
import pytest

SEEDS = [0, 1, 2, 3, 4]


def rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_hermitian(rng, n):
    Z = rand_complex(rng, n, n)
    return 0.5 * (Z + Z.conj().T)


def haar_unitary(rng, n):
    Q, R = np.linalg.qr(rand_complex(rng, n, n))
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def jordan():
    return np.array([[0, 1], [0, 0]], dtype=complex)


def jordan_plus(lam):
    T = np.zeros((3, 3), dtype=complex)
    T[0, 1] = 1.0
    T[2, 2] = lam
    return T


@pytest.fixture(params=SEEDS)
def rng(request):
    return np.random.default_rng(request.param)


# outcomes of every module test in this session, consulted by the acceptance suite
SESSION_OUTCOMES = {}


def pytest_collection_modifyitems(session, config, items):
    # the property-suite criterion summarizes the others, so it runs last
    last = [it for it in items if "criterion_10" in it.name]
    items[:] = [it for it in items if it not in last] + last


def pytest_runtest_logreport(report):
    if report.when == "call" or report.outcome == "failed":
        prev = SESSION_OUTCOMES.get(report.nodeid)
        if prev != "failed":
            SESSION_OUTCOMES[report.nodeid] = report.outcome
