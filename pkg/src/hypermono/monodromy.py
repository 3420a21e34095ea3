"""Monodromy and reflection matrices from exponent parameters.

Generators follow the companion-matrix normal form: h_inf has characteristic
polynomial prod(t - exp(2 pi i alpha_j)), h_0 the conjugate-beta one, and
h_1 = h_0^{-1} h_inf.  For self-dual parameters the group is real and embeds
with index 2 in the group generated by three involutions R_A, R_B, R_C.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._linalg import null_space, numerical_rank, projective_normalize
from .params import HypergeomParams

IM_TOL = 1e-10


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Coefficients (A_1..A_n), (B_1..B_n) of the two characteristic polynomials."""

    A: np.ndarray
    B: np.ndarray
    real_A: bool
    real_B: bool

    @property
    def n(self) -> int:
        return len(self.A)


def _poly_from_exponents(exps):
    roots = np.exp(2j * np.pi * np.array([float(x) for x in exps]))
    coeffs = np.poly(roots)[1:]  # drop the leading 1
    real = bool(np.max(np.abs(coeffs.imag)) < IM_TOL)
    if real:
        c = coeffs.real.copy()
        # snap coefficients that are integers up to roundoff (exact parameter sets)
        snapped = np.rint(c)
        c[np.abs(c - snapped) < 1e-12] = snapped[np.abs(c - snapped) < 1e-12]
        return c, True
    return coeffs, False


def char_polys(p: HypergeomParams) -> CharPolyCoeffs:
    """Coefficients of prod(t - e^{2 pi i alpha_j}) and prod(t - e^{2 pi i beta_j})."""
    A, real_A = _poly_from_exponents(p.alpha)
    B, real_B = _poly_from_exponents(p.beta)
    return CharPolyCoeffs(A=A, B=B, real_A=real_A, real_B=real_B)


def _companion(last_col):
    n = len(last_col)
    m = np.zeros((n, n), dtype=np.asarray(last_col).dtype)
    for i in range(1, n):
        m[i, i - 1] = 1.0
    m[:, -1] = last_col
    return m


def levelt_matrices(c: CharPolyCoeffs):
    """(h_inf, h_0) in companion form: last columns (-A_n..-A_1), (-conj(B_n)..-conj(B_1))."""
    A = np.asarray(c.A)
    B = np.conjugate(np.asarray(c.B))
    h_inf = _companion(-A[::-1])
    h_0 = _companion(-B[::-1])
    return h_inf, h_0


def monodromy_at_one(h_0, h_inf, rtol=1e-9):
    """h_1 = h_0^{-1} h_inf with a structure report on h_1 - id."""
    h_0 = np.asarray(h_0)
    if abs(np.linalg.det(h_0)) < 1e-14:
        raise ValueError("h_0 is singular")
    h_1 = np.linalg.solve(h_0, np.asarray(h_inf))
    u = h_1 - np.eye(h_1.shape[0])
    rank = numerical_rank(u, rtol)
    sq = u @ u
    sq_zero = bool(np.linalg.norm(sq) <= rtol * max(1.0, np.linalg.norm(u)) ** 2)
    return h_1, {"rank_h1_minus_id": rank, "square_is_zero": sq_zero}


def reflection_matrices(c: CharPolyCoeffs):
    """The three involutions with R_C R_B = h_0, R_C R_A = h_inf, R_B R_A = h_1.

    Shapes: R_A and R_B carry antidiagonal ones over the first n-1 columns
    and last column -(A_1..A_n) resp. -(conj B_1..conj B_n); R_C is the full
    antidiagonal identity.  Requires real coefficients (self-dual parameters).
    """
    if not (c.real_A and c.real_B):
        raise ValueError("reflection matrices need real coefficients (self-dual parameters)")
    n = c.n
    A = np.asarray(c.A, dtype=float)
    B = np.asarray(c.B, dtype=float)

    def refl(coeffs):
        m = np.zeros((n, n))
        for i in range(n - 1):
            m[i, n - 2 - i] = 1.0
        m[:, -1] = -coeffs
        return m

    R_A = refl(A)
    R_B = refl(B)  # real B, conjugation is a no-op
    R_C = np.fliplr(np.eye(n))
    return R_A, R_B, R_C


def reflection_eigenvector(c: CharPolyCoeffs):
    """The distinguished eigenvector (A_{n-1},...,A_1,2) of R_A, eigenvalue -A_n."""
    A = np.asarray(c.A, dtype=float)
    v = np.concatenate([A[:-1][::-1], [2.0]])
    return v, -A[-1]


def invariant_bilinear_form(mats, rtol=1e-9):
    """The bilinear form J with h^T J h = J for every generator, by null space.

    The solution space must be one-dimensional (irreducibility); J is
    normalized to unit largest entry with the first nonzero entry positive,
    and symmetrized to its dominant (anti)symmetric part.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    n = mats[0].shape[0]
    blocks = []
    eye = np.eye(n * n)
    for h in mats:
        # vec(h^T J h) = (h^T kron h^T) vec(J)
        blocks.append(np.kron(h.T, h.T) - eye)
    system = np.vstack(blocks)
    ns = null_space(system, rtol)
    if ns.shape[1] != 1:
        raise ValueError(
            f"invariant form space has dimension {ns.shape[1]}, expected 1 "
            "(reducible or degenerate input)"
        )
    J = ns[:, 0].reshape(n, n)
    sym = 0.5 * (J + J.T)
    anti = 0.5 * (J - J.T)
    symmetric = np.linalg.norm(sym) >= np.linalg.norm(anti)
    J = sym if symmetric else anti
    J = J / np.max(np.abs(J))
    if symmetric:
        # orthogonal case: orient like the W-model form of signature (2, 3)
        pos, neg = form_signature(J)
        if pos > neg:
            J = -J
    else:
        for x in J.ravel():
            if abs(x) > 1e-12:
                if x < 0:
                    J = -J
                break
    return J


def form_signature(J, zero_tol=1e-10):
    """(n_plus, n_minus) eigenvalue signs of a symmetric form."""
    w = np.linalg.eigvalsh(0.5 * (J + J.T))
    scale = max(1.0, np.max(np.abs(w)))
    pos = int(np.sum(w > zero_tol * scale))
    neg = int(np.sum(w < -zero_tol * scale))
    return pos, neg


def symplectic_basis(J, rtol=1e-9):
    """Columns (e1, e2, f1, f2) with <e_i, f_i>_J = 1 and all other pairings 0."""
    J = np.asarray(J, dtype=float)
    n = J.shape[0]
    if n != 4 or np.linalg.norm(J + J.T) > rtol * np.linalg.norm(J):
        raise ValueError("need an antisymmetric 4x4 form")
    if abs(np.linalg.det(J)) < 1e-14:
        raise ValueError("degenerate form")

    def omega(u, v):
        return float(u @ J @ v)

    basis = [np.eye(n)[:, i] for i in range(n)]
    es, fs = [], []
    pool = basis
    for _ in range(2):
        e = pool[0]
        f = next(v for v in pool[1:] if abs(omega(e, v)) > rtol)
        f = f / omega(e, f)
        rest = []
        for v in pool[1:]:
            if v is f:
                continue
            w = v - omega(v, f) * e + omega(v, e) * f
            if np.linalg.norm(w) > rtol:
                rest.append(w)
        es.append(e)
        fs.append(f)
        pool = rest
    S = np.column_stack(es + fs)
    return S


STANDARD_J4 = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)


@dataclass
class MonodromyRep:
    """Generators h_0, h_1, h_inf (h_0 h_1 = h_inf) with optional reflection data."""

    params: Optional[HypergeomParams]
    h0: np.ndarray
    h1: np.ndarray
    hinf: np.ndarray
    R_A: Optional[np.ndarray] = None
    R_B: Optional[np.ndarray] = None
    R_C: Optional[np.ndarray] = None
    J: Optional[np.ndarray] = None
    h1_report: Optional[dict] = None

    @property
    def n(self) -> int:
        return self.h0.shape[0]

    def standardized(self):
        """Conjugate into the frame where J is the standard symplectic form.

        Returns (rep, S) with rep.J = STANDARD_J4 and rep.h = S^{-1} h S.
        Only defined for n = 4 with an antisymmetric invariant form.
        """
        if self.J is None or self.n != 4:
            raise ValueError("standardization needs a 4x4 rep with invariant form")
        S = symplectic_basis(self.J)
        Si = np.linalg.inv(S)
        conj = lambda m: Si @ m @ S
        rep = MonodromyRep(
            params=self.params,
            h0=conj(self.h0),
            h1=conj(self.h1),
            hinf=conj(self.hinf),
            J=STANDARD_J4.copy(),
            h1_report=self.h1_report,
        )
        return rep, S


def build_rep(p: HypergeomParams, with_form=True) -> MonodromyRep:
    """Full monodromy package for a parameter set."""
    c = char_polys(p)
    h_inf, h_0 = levelt_matrices(c)
    h_1, report = monodromy_at_one(h_0, h_inf)
    R_A = R_B = R_C = None
    if c.real_A and c.real_B:
        R_A, R_B, R_C = reflection_matrices(c)
    J = None
    if with_form:
        J = invariant_bilinear_form([h_0.real if c.real_B else h_0,
                                     h_inf.real if c.real_A else h_inf])
    return MonodromyRep(
        params=p,
        h0=h_0.real if c.real_B else h_0,
        h1=h_1.real if (c.real_A and c.real_B) else h_1,
        hinf=h_inf.real if c.real_A else h_inf,
        R_A=R_A,
        R_B=R_B,
        R_C=R_C,
        J=J,
        h1_report=report,
    )
