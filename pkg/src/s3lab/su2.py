"""Irreducible representations of SU(2): group elements, representation
matrices, Lie-algebra ladder coefficients, characters, and Haar quadrature.

Conventions
-----------
A group element is stored by its first row (a, b), i.e. the unitary matrix

    [[a, b], [-conj(b), conj(a)]],   |a|^2 + |b|^2 = 1,

which doubles as a point of the unit three-sphere.  The (m+1)-dimensional
irreducible representation acts on homogeneous polynomials of degree m in
two variables; weight labels run over alpha = -m, -m+2, ..., m with monomial
index j = (alpha + m) / 2.  Representation matrices are indexed

    D[alpha, alpha'] = <pi_m(g) v_{m,alpha}, v_{m,alpha'}>,

rows indexed by the input basis vector alpha, columns by alpha'.  This index
order is fixed here once and used by every downstream module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class GroupElement:
    """Point of SU(2) given by its first row (a, b), renormalized on construction."""

    a: complex
    b: complex

    def __post_init__(self):
        norm = np.sqrt(abs(self.a) ** 2 + abs(self.b) ** 2)
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize zero or non-finite group element")
        if abs(norm - 1.0) > _NORM_TOL:
            object.__setattr__(self, "a", complex(self.a) / norm)
            object.__setattr__(self, "b", complex(self.b) / norm)
        else:
            object.__setattr__(self, "a", complex(self.a))
            object.__setattr__(self, "b", complex(self.b))

    @staticmethod
    def identity() -> "GroupElement":
        return GroupElement(1.0 + 0.0j, 0.0 + 0.0j)

    def inverse(self) -> "GroupElement":
        # Conjugate transpose of [[a, b], [-conj(b), conj(a)]] has first row
        # (conj(a), -b).
        return GroupElement(np.conj(self.a), -self.b)

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]], dtype=complex
        )

    def rotation_angle(self) -> float:
        """Angle theta in [0, pi] such that the eigenvalues are exp(+-i theta)."""
        return float(np.arccos(np.clip(self.a.real, -1.0, 1.0)))


def from_angles(theta: float, phi1: float, phi2: float) -> GroupElement:
    """Element with a = cos(theta) e^{i phi1}, b = sin(theta) e^{i phi2}."""
    return GroupElement(
        np.cos(theta) * np.exp(1j * phi1), np.sin(theta) * np.exp(1j * phi2)
    )


def group_mul(g: GroupElement, h: GroupElement) -> GroupElement:
    """SU(2) matrix product, renormalized."""
    a = g.a * h.a - g.b * np.conj(h.b)
    b = g.a * h.b + g.b * np.conj(h.a)
    return GroupElement(a, b)


def haar_sample(seed) -> GroupElement:
    """Haar-distributed element from a normalized 4-dimensional standard Gaussian.

    ``seed`` may be an integer seed or a ``numpy.random.Generator``.
    """
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    x = rng.standard_normal(4)
    return GroupElement(complex(x[0], x[1]), complex(x[2], x[3]))


def haar_samples(count: int, seed) -> list[GroupElement]:
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    x = rng.standard_normal((count, 4))
    return [GroupElement(complex(r[0], r[1]), complex(r[2], r[3])) for r in x]


def weights(m: int) -> np.ndarray:
    """Weight labels -m, -m+2, ..., m of the degree-m representation."""
    return np.arange(-m, m + 1, 2)


def is_valid_weight(m: int, alpha: int) -> bool:
    return m >= 0 and -m <= alpha <= m and (alpha - m) % 2 == 0


def ladder_coeff(m: int, alpha: int, direction: str) -> float:
    """Ladder coefficients c_+(m, alpha), c_-(m, alpha) of the raising and
    lowering generators on the orthonormal weight basis:

        c_+(m, alpha) = sqrt((m + alpha + 2) (m - alpha)) / 2
        c_-(m, alpha) = sqrt((m - alpha + 2) (m + alpha)) / 2
    """
    if not is_valid_weight(m, alpha):
        raise ValueError(f"invalid weight (m={m}, alpha={alpha})")
    if direction == "raise":
        return 0.5 * np.sqrt((m + alpha + 2.0) * (m - alpha))
    if direction == "lower":
        return 0.5 * np.sqrt((m - alpha + 2.0) * (m + alpha))
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


@lru_cache(maxsize=None)
def _log_factorials(n: int) -> np.ndarray:
    return gammaln(np.arange(n + 1) + 1.0)


@lru_cache(maxsize=None)
def _binom_rows(m: int) -> tuple:
    lf = _log_factorials(m)
    return tuple(
        np.exp(lf[j] - lf[np.arange(j + 1)] - lf[j - np.arange(j + 1)]) for j in range(m + 1)
    )


@lru_cache(maxsize=None)
def _rotation_eig(m: int) -> tuple:
    """Eigendecomposition of i (E - F)^T on the weight basis.

    At a = cos(theta), b = sin(theta) the representation matrix is
    exp(theta K) with K the transposed skew generator, so exp is evaluated
    through this Hermitian tridiagonal eigensystem; the result is orthogonal
    to machine precision at every m.
    """
    sup = np.array([ladder_coeff(m, alpha, "raise") for alpha in range(-m, m, 2)])
    H = np.zeros((m + 1, m + 1), dtype=complex)
    idx = np.arange(m)
    H[idx, idx + 1] = 1j * sup
    H[idx + 1, idx] = -1j * sup
    evals, evecs = np.linalg.eigh(H)
    return evals, evecs


def _rotation_block(m: int, theta: float) -> np.ndarray:
    evals, evecs = _rotation_eig(m)
    return ((evecs * np.exp(-1j * theta * evals)) @ evecs.conj().T).real


def irrep_matrix(m: int, g: GroupElement) -> np.ndarray:
    """Matrix of the degree-m irreducible representation at g.

    Entries come from expanding (a u + c v)^j (b u + d v)^{m-j} with
    (c, d) = (-conj(b), conj(a)) and rescaling by the Gaussian-integral
    monomial norms; that expansion factors exactly as

        D[j, j'] = exp(i (j+j'-m) phi1) exp(i (j'-j) phi2) d[j, j'](theta)

    with a = cos(theta) e^{i phi1}, b = sin(theta) e^{i phi2}, and the real
    block d(theta) is evaluated as a one-parameter rotation group (see
    ``_rotation_eig``): no factorial ratio is ever formed, and unitarity
    holds to machine precision through m ~ 60 and beyond.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return np.ones((1, 1), dtype=complex)
    theta = np.arctan2(abs(g.b), abs(g.a))
    phi1, phi2 = np.angle(g.a), np.angle(g.b)
    block = _rotation_block(m, theta)
    j = np.arange(m + 1)
    phase = np.exp(1j * ((j[:, None] + j[None, :] - m) * phi1 + (j[None, :] - j[:, None]) * phi2))
    return block * phase


def irrep_matrix_binomial(m: int, g: GroupElement) -> np.ndarray:
    """Direct binomial-expansion evaluation of the same matrix.

    Slightly less accurate for large m (term cancellation); kept as an
    independent cross-check of ``irrep_matrix``.  Factorial ratios are
    accumulated in log space.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    a, b = g.a, g.b
    c, d = -np.conj(b), np.conj(a)
    lf = _log_factorials(m)
    binoms = _binom_rows(m)
    apow = a ** np.arange(m + 1)
    bpow = b ** np.arange(m + 1)
    cpow = c ** np.arange(m + 1)
    dpow = d ** np.arange(m + 1)
    half_lognorm = 0.5 * (lf + lf[::-1])  # log sqrt(j! (m-j)!)
    out = np.empty((m + 1, m + 1), dtype=complex)
    for j in range(m + 1):
        pa = binoms[j] * apow[: j + 1] * cpow[: j + 1][::-1]
        pb = binoms[m - j] * bpow[: m - j + 1] * dpow[: m - j + 1][::-1]
        row = np.convolve(pa, pb)
        out[j, :] = row * np.exp(half_lognorm - half_lognorm[j])
    return out


@lru_cache(maxsize=None)
def _wigner_d_cached(m: int, theta_key: tuple) -> np.ndarray:
    thetas = np.array(theta_key)
    out = np.empty((len(thetas), m + 1, m + 1))
    for i, th in enumerate(thetas):
        out[i] = _rotation_block(m, th) if m else np.ones((1, 1))
    return out


def wigner_d(m: int, thetas: np.ndarray) -> np.ndarray:
    """Real reduced matrices d^m(theta) at a = cos(theta), b = sin(theta).

    At these elements the full matrix factors as
    D[j, j'] = d[j, j'](theta) * exp(i (j+j'-m) phi1) * exp(i (j'-j) phi2),
    which is what the tensor-grid evaluation paths rely on.
    """
    return _wigner_d_cached(m, tuple(np.asarray(thetas, dtype=float).tolist()))


def character(m: int, g: GroupElement) -> float:
    """Trace of the degree-m representation: sin((m+1) theta) / sin(theta)
    with exp(+-i theta) the eigenvalues of g; the theta -> 0 (and pi)
    singularity is replaced by its limit."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    theta = g.rotation_angle()
    s = np.sin(theta)
    if abs(s) < 1e-8:
        return float((m + 1) * np.cos((m + 1) * theta) / np.cos(theta))
    return float(np.sin((m + 1) * theta) / s)


@dataclass(frozen=True)
class HaarQuadrature:
    """Tensor-product quadrature for the normalized Haar measure.

    Parameterization a = cos(theta) e^{i phi1}, b = sin(theta) e^{i phi2},
    theta in [0, pi/2], phi_i in [0, 2 pi), density cos(theta) sin(theta) / (2 pi^2):
    Gauss-Legendre in theta, uniform (trapezoid on the circle) in phi1, phi2.
    Weights are normalized to sum to exactly 1.
    """

    theta: np.ndarray
    theta_weight: np.ndarray  # sums to 1; per-node weight is theta_weight/(nphi1*nphi2)
    nphi1: int
    nphi2: int
    _weights: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        w = np.repeat(self.theta_weight / (self.nphi1 * self.nphi2), self.nphi1 * self.nphi2)
        object.__setattr__(self, "_weights", w)

    @property
    def levels(self) -> tuple[int, int, int]:
        return (len(self.theta), self.nphi1, self.nphi2)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def node_count(self) -> int:
        return len(self.theta) * self.nphi1 * self.nphi2

    def phi1(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.nphi1) / self.nphi1

    def phi2(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.nphi2) / self.nphi2

    def nodes(self) -> list[GroupElement]:
        """Materialized node list; intended for small levels only."""
        out = []
        for th in self.theta:
            for p1 in self.phi1():
                for p2 in self.phi2():
                    out.append(from_angles(th, p1, p2))
        return out

    def integrate(self, values: np.ndarray) -> complex:
        """Integrate values sampled on the (theta, phi1, phi2) tensor grid."""
        if values.shape != (len(self.theta), self.nphi1, self.nphi2):
            raise ValueError("values shape does not match quadrature grid")
        per_phi = values.sum(axis=(1, 2)) / (self.nphi1 * self.nphi2)
        return np.dot(self.theta_weight, per_phi)


def haar_quadrature(levels: tuple[int, int, int]) -> HaarQuadrature:
    ntheta, nphi1, nphi2 = levels
    if min(ntheta, nphi1, nphi2) < 2:
        raise ValueError("all quadrature levels must be >= 2")
    x, w = np.polynomial.legendre.leggauss(ntheta)
    theta = 0.25 * np.pi * (x + 1.0)
    wt = w * np.cos(theta) * np.sin(theta)
    wt /= wt.sum()
    return HaarQuadrature(theta=theta, theta_weight=wt, nphi1=nphi1, nphi2=nphi2)
