import numpy as np
import pytest
import scipy.linalg

from hypermono import dynamics as dyn
from hypermono import fuchsian as fox
from hypermono import monodromy as mono
from hypermono import params as par


@pytest.fixture(scope="session")
def mq():
    return par.MIRROR_QUINTIC


@pytest.fixture(scope="session")
def mq_rep(mq):
    return mono.build_rep(mq)


@pytest.fixture(scope="session")
def mq_std(mq_rep):
    std, S = mq_rep.standardized()
    return std


@pytest.fixture(scope="session")
def mq_sig(mq):
    return fox.orbifold_signature(mq)


@pytest.fixture(scope="session")
def modular_sig():
    return fox.OrbifoldSignature(2, 3, fox.INF)


@pytest.fixture(scope="session")
def modular_dom(modular_sig):
    return fox.build_domain(modular_sig)


@pytest.fixture(scope="session")
def ideal_sig():
    return fox.OrbifoldSignature(fox.INF, fox.INF, fox.INF)


def ball_for(p_or_rep, L, with_fuchs=False, params=None):
    """Word ball of a rank-4 parameter set in the standardized frame."""
    if isinstance(p_or_rep, par.HypergeomParams):
        rep = mono.build_rep(p_or_rep)
        params = p_or_rep
    else:
        rep = p_or_rep
    std, _ = rep.standardized()
    sig = fox.orbifold_signature(params if params is not None else rep.params)
    gens = {"0": std.h0, "inf": std.hinf}
    orders = {"0": sig.e0, "inf": sig.einf}
    fuchs = None
    if with_fuchs:
        dom = fox.build_domain(sig)
        fuchs = {"0": dom.gens["0"], "inf": dom.gens["inf"]}
    return dyn.enumerate_ball(gens, orders, L, fuchs_gens=fuchs), std, sig


@pytest.fixture(scope="session")
def mq_ball8(mq_rep, mq):
    ball, std, sig = ball_for(mq_rep, 8, params=mq)
    return ball


def random_symplectic(rng, scale=0.4):
    a = rng.normal(size=(2, 2)) * scale
    b = rng.normal(size=(2, 2)) * scale
    b = (b + b.T) / 2
    c = rng.normal(size=(2, 2)) * scale
    c = (c + c.T) / 2
    x = np.block([[a, b], [c, -a.T]])
    return scipy.linalg.expm(x)


def random_nilpotent(rng, n=4):
    """Well-conditioned random nilpotent: strict upper triangular, rotated."""
    m = np.triu(rng.normal(size=(n, n)), k=1)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q @ m @ q.T
