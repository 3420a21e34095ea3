"""The Sp4 <-> SO(2,3) dictionary on the reduced exterior square.

Coordinates on the five-dimensional space W use the basis

    a = e1^e2, b = e1^f2, c = e1^f1 - e2^f2, d = f1^e2, e = f1^f2

for a symplectic basis (e1, e2, f1, f2) with <e_i, f_i> = 1.  The invariant
quadratic form is Q(w, w) = -a*e + b*d - c^2, of signature (2, 3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    null_space,
    numerical_rank,
    orth_basis,
    projective_normalize,
    subspace_intersection,
)
from .monodromy import STANDARD_J4

# index pairs of the 6-dim exterior square, basis order (01, 02, 03, 12, 13, 23)
_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

# W basis vectors inside Lambda^2 (columns), order (a, b, c, d, e)
_W_EMBED = np.array(
    [
        # 01   02   03   12   13   23
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],  # a = e1^e2
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],  # b = e1^f2
        [0.0, 1.0, 0.0, 0.0, -1.0, 0.0],  # c = e1^f1 - e2^f2
        [0.0, 0.0, 0.0, -1.0, 0.0, 0.0],  # d = f1^e2 = -e2^f1
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],  # e = f1^f2
    ]
).T

# dual symplectic bivector e1^f1 + e2^f2, completing the basis of Lambda^2
_J_BIVECTOR = np.array([0.0, 1.0, 0.0, 0.0, 1.0, 0.0])

_BASIS6 = np.column_stack([_W_EMBED, _J_BIVECTOR])
_BASIS6_INV = np.linalg.inv(_BASIS6)

GRAM_Q = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, -0.5],
        [0.0, 0.0, 0.0, 0.5, 0.0],
        [0.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0, 0.0],
        [-0.5, 0.0, 0.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class QuadSpaceW:
    """Basis labels and Gram matrix of Q on the reduced exterior square."""

    labels: tuple = ("a", "b", "c", "d", "e")
    gram: np.ndarray = None

    def __post_init__(self):
        if self.gram is None:
            object.__setattr__(self, "gram", GRAM_Q.copy())


def q_value(w, w2=None):
    """Q(w, w2), defaulting to the quadratic value Q(w, w)."""
    w = np.asarray(w, dtype=float)
    w2 = w if w2 is None else np.asarray(w2, dtype=float)
    return float(w @ GRAM_Q @ w2)


def wedge_vec(u, v):
    """u ^ v in the 6-dim coordinates."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.array([u[i] * v[j] - u[j] * v[i] for i, j in _PAIRS])


def _wedge_matrix(g):
    g = np.asarray(g, dtype=float)
    m = np.empty((6, 6))
    for col, (k, l) in enumerate(_PAIRS):
        m[:, col] = wedge_vec(g[:, k], g[:, l])
    return m


def is_symplectic(g, rtol=1e-9):
    g = np.asarray(g, dtype=float)
    return np.linalg.norm(g.T @ STANDARD_J4 @ g - STANDARD_J4) <= rtol * max(
        1.0, np.linalg.norm(g) ** 2
    )


def reduced_exterior_square(g, rtol=1e-8):
    """Action of g on W in the (a, b, c, d, e) coordinates.

    Requires g symplectic for the standard form; the result preserves Q.
    """
    if not is_symplectic(g, rtol):
        raise ValueError("matrix is not symplectic for the standard form")
    m6 = _wedge_matrix(g)
    coords = _BASIS6_INV @ m6 @ _W_EMBED
    return coords[:5].copy()


def wedge_to_w(x6, rtol=1e-9):
    """Coordinates of a Lambda^2 vector on the W basis; errors off W."""
    coords = _BASIS6_INV @ np.asarray(x6, dtype=float)
    if abs(coords[5]) > rtol * max(1.0, np.linalg.norm(coords)):
        raise ValueError("vector has a component along the symplectic bivector")
    return coords[:5].copy()


def reduced_exterior_square_batch(gs):
    """Batched W-action of symplectic matrices, shape (N, 4, 4) -> (N, 5, 5).

    The symplectic precondition is not rechecked per element.
    """
    gs = np.asarray(gs, dtype=float)
    single = gs.ndim == 2
    if single:
        gs = gs[None]
    i = np.array([p[0] for p in _PAIRS])
    j = np.array([p[1] for p in _PAIRS])
    m6 = (
        gs[:, i[:, None], i[None, :]] * gs[:, j[:, None], j[None, :]]
        - gs[:, i[:, None], j[None, :]] * gs[:, j[:, None], i[None, :]]
    )
    w = _BASIS6_INV[:5] @ m6 @ _W_EMBED
    return w[0] if single else w


# rescaling (a, b, c, d, e) -> (a, b, sqrt2 c, d, e) makes the maximal compact
# of Sp4 act by genuinely orthogonal matrices on W
W_ISOMETRY_SCALE = np.array([1.0, 1.0, np.sqrt(2.0), 1.0, 1.0])


@dataclass(frozen=True)
class LagrangianPlane:
    """A Lagrangian 2-plane, spanned by the columns of ``span``."""

    span: np.ndarray

    def __init__(self, u, v=None, rtol=1e-9):
        if v is None:
            m = np.asarray(u, dtype=float).reshape(4, 2)
        else:
            m = np.column_stack([u, v]).astype(float)
        if numerical_rank(m, rtol) != 2:
            raise ValueError("spanning vectors are dependent")
        pairing = float(m[:, 0] @ STANDARD_J4 @ m[:, 1])
        if abs(pairing) > rtol * np.linalg.norm(m[:, 0]) * np.linalg.norm(m[:, 1]):
            raise ValueError(f"not Lagrangian: <u, v> = {pairing}")
        object.__setattr__(self, "span", m)

    def transformed(self, g):
        return LagrangianPlane(np.asarray(g) @ self.span)


def pluecker(L: LagrangianPlane):
    """Normalized Q-isotropic 5-vector of a Lagrangian plane."""
    w = wedge_to_w(wedge_vec(L.span[:, 0], L.span[:, 1]))
    return projective_normalize(w)


def symplectic_perp(l, rtol=1e-9):
    """Orthonormal basis (columns) of the symplectic orthogonal of the line l."""
    l = np.ravel(np.asarray(l, dtype=float))
    return null_space((STANDARD_J4 @ l)[None, :], rtol)


def photon(l):
    """The isotropic 2-plane l ^ l^perp in W, as a 5x2 orthonormal matrix."""
    l = np.ravel(np.asarray(l, dtype=float))
    if np.linalg.norm(l) == 0:
        raise ValueError("need a nonzero line")
    perp = symplectic_perp(l)
    cols = []
    for j in range(perp.shape[1]):
        x = wedge_vec(l, perp[:, j])
        if np.linalg.norm(x) > 1e-12:
            cols.append(wedge_to_w(x))
    return orth_basis(np.column_stack(cols))


def photon_lagrangian(l, t):
    """The Lagrangian on the photon of l at parameter direction t in l^perp/l."""
    l = np.ravel(np.asarray(l, dtype=float))
    perp = symplectic_perp(l)
    # directions transverse to l inside l^perp
    proj = perp - np.outer(l, l @ perp) / float(l @ l)
    dirs = orth_basis(proj)
    t = np.ravel(np.asarray(t, dtype=float))
    x = dirs @ t[: dirs.shape[1]]
    return LagrangianPlane(l, x)


def hermitian_pairing(u, v):
    """H(u, v) = i <u, conj v> for the standard symplectic form."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return 1j * (u @ STANDARD_J4 @ np.conjugate(v))


def _check_f2(F2, rtol=1e-9):
    F2 = np.asarray(F2, dtype=complex).reshape(4, 2)
    pair = F2[:, 0] @ STANDARD_J4 @ F2[:, 1]
    if abs(pair) > rtol * np.linalg.norm(F2[:, 0]) * np.linalg.norm(F2[:, 1]):
        raise ValueError("F2 is not Lagrangian")
    H = np.array(
        [[hermitian_pairing(F2[:, i], F2[:, j]) for j in range(2)] for i in range(2)]
    )
    H = 0.5 * (H + H.conj().T)
    w = np.linalg.eigvalsh(H)
    if not (w[0] < -rtol and w[1] > rtol):
        raise ValueError(f"hermitian form on F2 has signature != (1,1): eigenvalues {w}")
    return F2, H


def electron_membership(F2, L: LagrangianPlane, rtol=1e-9) -> bool:
    """True iff the complexification of L meets F2 nontrivially."""
    F2, _ = _check_f2(F2, rtol)
    stacked = np.column_stack([L.span.astype(complex), F2])
    return numerical_rank(stacked, rtol) <= 3


def electron_circle(F2, m: int, rtol=1e-9):
    """m real Lagrangians sampled from the null circle of P(F2).

    Walks alpha = u_+ + e^{i theta} u_- over an H-orthogonal basis with
    H(u_+, u_+) = 1 = -H(u_-, u_-); each span(Re alpha, Im alpha) is a real
    Lagrangian whose complexification contains alpha.
    """
    F2, H = _check_f2(F2, rtol)
    w, vec = np.linalg.eigh(H)
    u_minus = F2 @ vec[:, 0] / np.sqrt(-w[0])
    u_plus = F2 @ vec[:, 1] / np.sqrt(w[1])
    out = []
    for j in range(m):
        theta = 2.0 * np.pi * j / max(m, 1)
        alpha = u_plus + np.exp(1j * theta) * u_minus
        out.append(LagrangianPlane(alpha.real, alpha.imag))
    return out
