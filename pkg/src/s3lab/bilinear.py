"""Eigenfunctions of the three-sphere Laplacian in the matrix-entry basis,
their pointwise products, exact product L2 norms through Clebsch-Gordan
sums, quadrature oracles, and sharpness/ratio experiments.

A degree-m eigenfunction (eigenvalue -m(m+2)) is

    f(g) = sum_{alpha, alpha'} a_{alpha,alpha'} sqrt(m+1) D^m(g)[alpha, alpha'],

so ||f||_{L2} equals the Frobenius norm of the coefficient matrix.  For
f of degree m and g of degree n <= m the product decomposes over degrees
k = m+n, m+n-2, ..., m-n with component coefficients

    b^{(k)}_{gamma,gamma'} = sqrt((m+1)(n+1)/(k+1)) S(k, gamma, gamma'),
    S(k, M, M') = sum_{alpha+beta=M, alpha'+beta'=M'}
                  a_{alpha,alpha'} b_{beta,beta'} C^{k,M} C^{k,M'},

and ||fg||^2 = (n+1) sum_{k,M,M'} (m+1)/(k+1) |S(k,M,M')|^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .clebsch import CGTable, cg_table
from .su2 import GroupElement, HaarQuadrature, from_angles, haar_samples, irrep_matrix, wigner_d


class UnderResolvedQuadratureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Eigenfunction:
    """Degree m plus the (m+1) x (m+1) coefficient matrix a_{alpha,alpha'}."""

    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.m + 1, self.m + 1):
            raise ValueError(f"coefficient matrix must be {self.m + 1} x {self.m + 1}")
        object.__setattr__(self, "coeffs", c)

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def zonal(n: int) -> Eigenfunction:
    """Unit-norm central eigenfunction; evaluates to the degree-n character."""
    return Eigenfunction(n, np.eye(n + 1) / np.sqrt(n + 1.0))


def random_eigenfunction(m: int, rng) -> Eigenfunction:
    """i.i.d. complex standard Gaussian coefficients, normalized to unit L2."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    c = rng.standard_normal((m + 1, m + 1)) + 1j * rng.standard_normal((m + 1, m + 1))
    return Eigenfunction(m, c / np.linalg.norm(c))


def evaluate(f: Eigenfunction, g: GroupElement) -> complex:
    return complex(np.sqrt(f.m + 1.0) * np.sum(f.coeffs * irrep_matrix(f.m, g)))


def evaluate_on_grid(f: Eigenfunction, quad: HaarQuadrature) -> np.ndarray:
    """Values on the quadrature's (theta, phi1, phi2) tensor grid.

    Uses the single-Fourier-mode structure of the matrix entries in the
    angles: D[j, j'] = d[j, j'](theta) e^{i (j+j'-m) phi1} e^{i (j'-j) phi2},
    so each theta slice is one zero-padded 2-D inverse FFT.
    """
    m = f.m
    n1, n2 = quad.nphi1, quad.nphi2
    if n1 < 2 * m + 1 or n2 < 2 * m + 1:
        raise ValueError(f"phi levels ({n1}, {n2}) cannot hold degree-{m} modes")
    dmats = wigner_d(m, quad.theta)
    j = np.arange(m + 1)
    pidx = (j[:, None] + j[None, :] - m) % n1
    qidx = (j[None, :] - j[:, None]) % n2
    scale = np.sqrt(m + 1.0)
    out = np.empty((len(quad.theta), n1, n2), dtype=complex)
    freq = np.zeros((n1, n2), dtype=complex)
    for i in range(len(quad.theta)):
        freq[:] = 0.0
        freq[pidx, qidx] = scale * f.coeffs * dmats[i]
        out[i] = np.fft.ifft2(freq) * (n1 * n2)
    return out


def recommended_levels(degree_sum: int) -> tuple[int, int, int]:
    """Resolution rule: levels = max(32, 4 * degree_sum + 8) in each angle."""
    size = max(32, 4 * degree_sum + 8)
    return (size, size, size)


def product_l2_quadrature(f: Eigenfunction, g: Eigenfunction, quad: HaarQuadrature) -> float:
    """Haar-quadrature oracle for ||fg||_{L2}; warns when under-resolved."""
    need = max(32, 4 * (f.m + g.m) + 8)
    if min(quad.levels) < need:
        warnings.warn(
            f"quadrature levels {quad.levels} below the resolution rule "
            f"({need}) for degrees ({f.m}, {g.m})",
            UnderResolvedQuadratureWarning,
        )
    vals = evaluate_on_grid(f, quad) * evaluate_on_grid(g, quad)
    return float(np.sqrt(quad.integrate(np.abs(vals) ** 2).real))


def multilinear_l2_quadrature(fs: list[Eigenfunction], quad: HaarQuadrature) -> float:
    """Quadrature value of || f_1 ... f_k ||_{L2}."""
    total = sum(f.m for f in fs)
    need = max(32, 4 * total + 8)
    if min(quad.levels) < need:
        warnings.warn(
            f"quadrature levels {quad.levels} below the resolution rule ({need})",
            UnderResolvedQuadratureWarning,
        )
    vals = evaluate_on_grid(fs[0], quad)
    for f in fs[1:]:
        vals = vals * evaluate_on_grid(f, quad)
    return float(np.sqrt(quad.integrate(np.abs(vals) ** 2).real))


# -- exact product machinery --------------------------------------------------

@dataclass(frozen=True)
class ProductDecomposition:
    """Components of fg per degree k, plus the intermediate sums S(k, M, M')."""

    m: int
    n: int
    components: dict          # k -> Eigenfunction
    s_sums: dict              # k -> (k+1, k+1) complex matrix over gamma ascending

    def component_norms(self) -> dict:
        return {k: comp.l2_norm() for k, comp in self.components.items()}

    def total_norm(self) -> float:
        return float(np.sqrt(sum(c.l2_norm() ** 2 for c in self.components.values())))

    def evaluate(self, g: GroupElement) -> complex:
        return sum(evaluate(comp, g) for comp in self.components.values())


def _check_degree_order(f: Eigenfunction, g: Eigenfunction) -> None:
    if f.m < g.m:
        raise ValueError(f"need deg(f) >= deg(g); got ({f.m}, {g.m}); swap the arguments")


def product_decompose(f: Eigenfunction, g: Eigenfunction, table: CGTable | None = None) -> ProductDecomposition:
    """Decompose fg into eigenfunction components of degree k.

    Pointwise, evaluate(f, .) * evaluate(g, .) equals the sum of the
    component evaluations.
    """
    _check_degree_order(f, g)
    m, n = f.m, g.m
    table = table if table is not None else cg_table(m, n)
    a, b = f.coeffs, g.coeffs
    components, s_sums = {}, {}
    for k in table.kvals:
        k = int(k)
        gammas = np.arange(-k, k + 1, 2)
        S = np.zeros((k + 1, k + 1), dtype=complex)
        vecs = []
        for gamma in gammas:
            alphas, coeffs = table.chain_vector(k, int(gamma))
            arow = (alphas + m) // 2
            brow = (gamma - alphas + n) // 2
            vecs.append((arow, brow, coeffs))
        for i, (ar1, br1, c1) in enumerate(vecs):
            for j, (ar2, br2, c2) in enumerate(vecs):
                X = a[np.ix_(ar1, ar2)] * b[np.ix_(br1, br2)]
                S[i, j] = c1 @ X @ c2
        s_sums[k] = S
        bk = np.sqrt((m + 1.0) * (n + 1.0) / (k + 1.0)) * S
        components[k] = Eigenfunction(k, bk)
    return ProductDecomposition(m=m, n=n, components=components, s_sums=s_sums)


class _FastTable:
    """Per-table arrays for the batched S-sum norm: per weight gamma the
    coefficient block (K, d) plus concatenated index maps into a and b."""

    def __init__(self, table: CGTable):
        m, n = table.m, table.n
        self.K = len(table.kvals)
        self.wk = (m + 1.0) / (np.asarray(table.kvals, dtype=float) + 1.0)
        self.alpha_rows = [(sup + m) // 2 for sup in table.alphas]
        self.beta_rows = [
            (gamma - sup + n) // 2 for gamma, sup in zip(table.gammas, table.alphas)
        ]
        self.a_cols = np.concatenate(self.alpha_rows)
        self.b_cols = np.concatenate(self.beta_rows)
        seg_len = np.array([len(s) for s in table.alphas])
        self.seg_starts = np.concatenate([[0], np.cumsum(seg_len)[:-1]])
        self.width = self.a_cols.shape[0]
        self._typed = {}

    def typed_blocks(self, dtype):
        got = self._typed.get(dtype)
        if got is None:
            got = (
                [blk.astype(dtype) for blk in self._raw_blocks],
                np.concatenate(self._raw_blocks, axis=1).astype(dtype),
                self.wk.astype(dtype),
            )
            self._typed[dtype] = got
        return got


def _fast(table: CGTable) -> _FastTable:
    ft = table._cache.get("fast")
    if ft is None:
        ft = _FastTable(table)
        ft._raw_blocks = table.blocks
        table._cache["fast"] = ft
    return ft


def product_norm2_batch(
    table: CGTable, abatch: np.ndarray, bbatch: np.ndarray, dtype=np.float64
) -> np.ndarray:
    """||f_i g_i||^2 for a batch of coefficient matrices, via the S-sums.

    abatch has shape (B, m+1, m+1) and bbatch (B, n+1, n+1).  The float32
    path exists for the large ratio scans (relative error ~1e-6, far below
    the scan tolerances); exactness checks use the default float64.
    """
    ft = _fast(table)
    blocks, block_cat, wk = ft.typed_blocks(dtype)
    nbatch = abatch.shape[0]
    T = ft.width
    a2r = np.ascontiguousarray(abatch.real.transpose(1, 2, 0), dtype=dtype)
    a2i = np.ascontiguousarray(abatch.imag.transpose(1, 2, 0), dtype=dtype)
    b2r = np.ascontiguousarray(bbatch.real.transpose(1, 2, 0), dtype=dtype)
    b2i = np.ascontiguousarray(bbatch.imag.transpose(1, 2, 0), dtype=dtype)
    # column gathers are shared by every gamma; do them once
    a3r, a3i = a2r[:, ft.a_cols, :], a2i[:, ft.a_cols, :]
    b3r, b3i = b2r[:, ft.b_cols, :], b2i[:, ft.b_cols, :]
    acc = np.zeros(nbatch, dtype=np.float64)
    for t in range(len(ft.alpha_rows)):
        ar, br = ft.alpha_rows[t], ft.beta_rows[t]
        d = len(ar)
        Ar, Ai = a3r[ar], a3i[ar]
        Br, Bi = b3r[br], b3i[br]
        Xr = (Ar * Br - Ai * Bi).reshape(d, T * nbatch)
        Xi = (Ar * Bi + Ai * Br).reshape(d, T * nbatch)
        Wr = (blocks[t] @ Xr).reshape(ft.K, T, nbatch)
        Wi = (blocks[t] @ Xi).reshape(ft.K, T, nbatch)
        Wr *= block_cat[:, :, None]
        Wi *= block_cat[:, :, None]
        Sr = np.add.reduceat(Wr, ft.seg_starts, axis=1)
        Si = np.add.reduceat(Wi, ft.seg_starts, axis=1)
        acc += np.einsum("k,kgb->b", wk, Sr * Sr + Si * Si)
    return (table.n + 1.0) * acc


def product_l2_exact(f: Eigenfunction, g: Eigenfunction, table: CGTable | None = None) -> float:
    """Exact ||fg||_{L2} through the Clebsch-Gordan S-sum."""
    _check_degree_order(f, g)
    table = table if table is not None else cg_table(f.m, g.m)
    val = product_norm2_batch(table, f.coeffs[None], g.coeffs[None])[0]
    return float(np.sqrt(val))


def bilinear_ratio(f: Eigenfunction, g: Eigenfunction, table: CGTable | None = None) -> float:
    """||fg|| / (||f|| ||g|| sqrt(n+1)) with n the smaller degree."""
    _check_degree_order(f, g)
    nf, ng = f.l2_norm(), g.l2_norm()
    if nf == 0.0 or ng == 0.0:
        raise ValueError("bilinear ratio undefined for zero eigenfunctions")
    return product_l2_exact(f, g, table) / (nf * ng * np.sqrt(g.m + 1.0))


def sup_norm_estimate(f: Eigenfunction, samples: int, seed) -> float:
    """Lower bound on sup |f| from Haar Monte-Carlo plus a local refinement.

    Refinement: 20 iterations of coordinate-wise golden-section search in
    (theta, phi1, phi2) around the best sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    best_val = abs(evaluate(f, GroupElement.identity()))
    best_angles = np.array([0.0, 0.0, 0.0])
    for g in haar_samples(samples, rng):
        v = abs(evaluate(f, g))
        if v > best_val:
            theta = np.arccos(np.clip(abs(g.a), 0.0, 1.0))
            best_val = v
            best_angles = np.array([theta, np.angle(g.a), np.angle(g.b)])

    invphi = (np.sqrt(5.0) - 1.0) / 2.0

    def val_at(angles):
        return abs(evaluate(f, from_angles(*angles)))

    widths = [np.pi / 4, np.pi, np.pi]
    for coord in range(3):
        lo = best_angles[coord] - widths[coord]
        hi = best_angles[coord] + widths[coord]
        if coord == 0:
            lo, hi = max(lo, 0.0), min(hi, np.pi / 2)
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        p1, p2 = best_angles.copy(), best_angles.copy()
        p1[coord], p2[coord] = x1, x2
        f1, f2 = val_at(p1), val_at(p2)
        for _ in range(20):
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + invphi * (hi - lo)
                p2[coord] = x2
                f2 = val_at(p2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - invphi * (hi - lo)
                p1[coord] = x1
                f1 = val_at(p1)
        pick, pickval = (x1, f1) if f1 >= f2 else (x2, f2)
        if pickval > best_val:
            best_val = pickval
            best_angles[coord] = pick
    return float(best_val)


# -- scans --------------------------------------------------------------------

def bilinear_ratio_scan(m: int, n: int, n_pairs: int, seed, batch: int = 16) -> np.ndarray:
    """Ratios for n_pairs random unit-norm coefficient pairs at degrees (m, n).

    Large cells run in float32 (ratio error ~1e-6, irrelevant at the scan
    tolerances); small cells stay in float64.
    """
    table = cg_table(m, n)
    dtype = np.float32 if (m + 1) * (n + 1) >= 2048 else np.float64
    rng = np.random.default_rng(seed)
    out = np.empty(n_pairs)
    done = 0
    while done < n_pairs:
        b = min(batch, n_pairs - done)
        A = rng.standard_normal((b, m + 1, m + 1)) + 1j * rng.standard_normal((b, m + 1, m + 1))
        B = rng.standard_normal((b, n + 1, n + 1)) + 1j * rng.standard_normal((b, n + 1, n + 1))
        A /= np.linalg.norm(A, axis=(1, 2))[:, None, None]
        B /= np.linalg.norm(B, axis=(1, 2))[:, None, None]
        out[done:done + b] = np.sqrt(product_norm2_batch(table, A, B, dtype) / (n + 1.0))
        done += b
    return out


def zonal_pair_ratio(m: int, n: int) -> float:
    """Ratio of the zonal witness pair at degrees (m, n).

    The character product rule makes chi_m chi_n a sum of n+1 orthonormal
    characters, so this equals 1 at every (m, n): the sharpness witness for
    the bilinear bound template and the flat reference the no-growth fit
    runs against.
    """
    table = cg_table(m, n)
    dtype = np.float32 if (m + 1) * (n + 1) >= 2048 else np.float64
    a = (np.eye(m + 1) / np.sqrt(m + 1.0)).astype(complex)
    b = (np.eye(n + 1) / np.sqrt(n + 1.0)).astype(complex)
    val = product_norm2_batch(table, a[None], b[None], dtype)[0]
    return float(np.sqrt(val / (n + 1.0)))


def zonal_ratio(n: int) -> float:
    """Saturation ratio of the zonal pair (m, n) = (2n, n)."""
    return zonal_pair_ratio(2 * n, n)


def fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of y against x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
