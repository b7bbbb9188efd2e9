"""Model geometries and maps.

* the indefinite Hermitian form b_{s,n} and its null cone,
* the indefinite Hopf chart (deck-invariant metric on the quotient of
  the off-cone region by z -> lambda z), with closed-form metric
  derivatives, connection coefficients and Lee form,
* the flat indefinite Kahler chart and the upper-half-space auxiliary
  Kahler chart,
* the Tricerri-family chart on C_+ x C^n_s with nonparallel Lee form,
* quotient bookkeeping: deck equivalence, the diffeomorphism onto
  Sigma^{2n-1} x S^1 and its inverse, torus-action isometry residuals,
  the vertical/horizontal split over the pseudosphere, fibre-invariance
  residuals for the projective-space submersion, the block retraction
  and the Cayley transform onto the Siegel-domain boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .charts import ChartDomainError, MetricChart, TangentVector, metric_inner
from .lck import LCKStructure, lee_data
from .semieuclid import FrameSubspace, orthogonal_complement, signature_of

__all__ = [
    "HopfModel", "SiegelBoundaryPoint", "eps_signs", "b_form",
    "hopf_chart", "flat_chart", "halfplane_kahler_chart", "tricerri_chart",
    "synthetic_null_structure", "deck_equivalent", "hopf_diffeo",
    "hopf_diffeo_inv", "torus_pullback_isometry_residual", "fibration_split",
    "submersion_isometry_residual", "retraction", "cayley",
    "gab_invariance_residual",
]

# Samplers stay clear of the null cone: |b(z,z)| must exceed this times
# the Euclidean |z|^2.  Charts themselves only exclude the cone.
CONE_MARGIN = 0.05


def eps_signs(n: int, s: int) -> np.ndarray:
    """Diagonal signs (-1 for the first s slots, +1 after)."""
    eps = np.ones(n)
    eps[:s] = -1.0
    return eps


def b_form(s: int, n: int, z, w) -> complex:
    """Hermitian form -sum_{j<=s} z_j conj(w_j) + sum_{j>s} z_j conj(w_j)."""
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape != (n,) or w.shape != (n,):
        raise ValueError(f"arguments must be vectors of length {n}")
    return complex(np.sum(eps_signs(n, s) * z * w.conj()))


@dataclass(frozen=True)
class HopfModel:
    """Quotient of the off-cone region of C^n_s by z -> lambda^m z.

    Points are represented by covering-space representatives; deck
    equivalence is the identification oracle.  region '+' selects the
    component where b_{s,n}(z,z) > 0, region '-' the one where it is
    negative.
    """

    n: int
    s: int
    lam: float
    region: str = "+"

    def __post_init__(self):
        if self.n < 2 or not 0 < self.s < self.n:
            raise ValueError("need n >= 2 and 0 < s < n")
        if not 0.0 < self.lam < 1.0:
            raise ValueError("need 0 < lambda < 1")
        if self.region not in ("+", "-"):
            raise ValueError("region must be '+' or '-'")

    @property
    def sign(self) -> float:
        return 1.0 if self.region == "+" else -1.0

    def b(self, z) -> float:
        return b_form(self.s, self.n, z, z).real

    def norm_sn(self, z) -> float:
        """|z|_{s,n} = |b(z,z)|^(1/2)."""
        return float(np.sqrt(abs(self.b(z))))

    def a(self, z) -> float:
        """Sign of b(z,z); raises on the null cone."""
        b = self.b(z)
        if b == 0.0:
            raise ChartDomainError("point lies on the null cone")
        return 1.0 if b > 0 else -1.0

    def in_region(self, z, margin: float = 0.0) -> bool:
        b = self.b(z)
        zz = float(np.vdot(z, z).real)
        return self.sign * b > margin * zz and zz > 0.0


def _hopf_metric_fns(n: int, s: int):
    eps = eps_signs(n, s)

    def metric(z):
        b = float(np.sum(eps * np.abs(z) ** 2))
        return np.diag(0.5 * eps / abs(b)).astype(complex)

    def deriv(z):
        b = float(np.sum(eps * np.abs(z) ** 2))
        a = 1.0 if b > 0 else -1.0
        r2 = abs(b)
        base = 0.5 * eps  # diagonal of r2 * H
        dH_dz = np.zeros((n, n, n), dtype=complex)
        dH_dzb = np.zeros((n, n, n), dtype=complex)
        for l in range(n):
            fac = -a * eps[l] / r2 ** 2
            dH_dz[l][np.diag_indices(n)] = base * fac * np.conj(z[l])
            dH_dzb[l][np.diag_indices(n)] = base * fac * z[l]
        return dH_dz, dH_dzb

    def gamma(z):
        z = np.asarray(z, dtype=complex)
        b = float(np.sum(eps * np.abs(z) ** 2))
        a = 1.0 if b > 0 else -1.0
        r2 = abs(b)
        q = a / (2.0 * r2)
        G = np.zeros((2 * n, 2 * n, 2 * n), dtype=complex)
        ez = eps * z.conj()          # eps_j zbar_j
        for l in range(n):
            for j in range(n):
                for k in range(n):
                    # Gamma^l_{jk} = -q (eps_j zbar_j d^l_k + eps_k zbar_k d^l_j)
                    G[l, j, k] = -q * (ez[j] * (l == k) + ez[k] * (l == j))
                    # Gamma^l_{j kbar} = q (eps_j d_{jk} z^l - eps_k z_k d^l_j)
                    G[l, j, n + k] = q * (eps[j] * (j == k) * z[l]
                                          - eps[k] * z[k] * (l == j))
                    G[l, n + k, j] = G[l, j, n + k]
                    # Gamma^lbar_{j kbar} = q (eps_j d_{jk} zbar^l - eps_j zbar_j d^l_k)
                    G[n + l, j, n + k] = q * (eps[j] * (j == k) * np.conj(z[l])
                                              - ez[j] * (l == k))
                    G[n + l, n + k, j] = G[n + l, j, n + k]
        # conjugation symmetry fills the all-barred block; the remaining
        # blocks Gamma^lbar_{jk} and Gamma^l_{jbar kbar} vanish identically.
        G[n:, n:, n:] = G[:n, :n, :n].conj()
        return G

    return metric, deriv, gamma


def hopf_chart(model: HopfModel) -> LCKStructure:
    """Chart of the deck-invariant metric with analytic derivative data.

    Metric components g_{j kbar} = (1/2) |z|_{s,n}^{-2} eps_j delta_{jk};
    Lee form omega = -d log |z|^2_{s,n}.
    """
    n, s = model.n, model.s
    eps = eps_signs(n, s)
    metric, deriv, gamma = _hopf_metric_fns(n, s)

    def domain(z):
        z = np.asarray(z, dtype=complex)
        b = float(np.sum(eps * np.abs(z) ** 2))
        zz = float(np.vdot(z, z).real)
        return zz > 0.0 and model.sign * b > 1e-12 * zz

    chart = MetricChart(n=n, s=s, metric_eval=metric, domain_pred=domain,
                        metric_deriv=deriv, christoffel_analytic=gamma,
                        name=f"hopf(n={n},s={s},{model.region})")

    def lee(z):
        z = np.asarray(z, dtype=complex)
        b = float(np.sum(eps * np.abs(z) ** 2))
        a = 1.0 if b > 0 else -1.0
        return -a * eps * z.conj() / abs(b)

    def factor(z):
        b = float(np.sum(eps * np.abs(np.asarray(z)) ** 2))
        return -float(np.log(abs(b)))

    return LCKStructure(chart=chart, lee_form_eval=lee,
                        conformal_factor_eval=factor, parallel_lee=True,
                        name=chart.name)


def flat_chart(n: int, s: int) -> LCKStructure:
    """Flat indefinite Kahler chart: g_{j kbar} = (1/2) eps_j delta_{jk}."""
    eps = eps_signs(n, s)
    H = np.diag(0.5 * eps).astype(complex)
    zero3 = np.zeros((n, n, n), dtype=complex)
    chart = MetricChart(
        n=n, s=s,
        metric_eval=lambda z: H,
        domain_pred=lambda z: True,
        metric_deriv=lambda z: (zero3, zero3),
        christoffel_analytic=lambda z: np.zeros((2 * n, 2 * n, 2 * n), dtype=complex),
        name=f"flat(n={n},s={s})")
    return LCKStructure(chart=chart, lee_form_eval=lambda z: np.zeros(n, dtype=complex),
                        conformal_factor_eval=lambda z: 0.0, parallel_lee=True,
                        name=chart.name)


def synthetic_null_structure(n: int, s: int, B_hol=None) -> LCKStructure:
    """Flat chart with a constant null Lee covector (pointwise test data).

    The default Lee field is d/dx_1 + d/dx_{s+1}, which is null for any
    0 < s < n.  The constant 1-form is closed and parallel, so the c = 0
    branches of the foliation and CR machinery run on honest data even
    though no model manifold with a parallel lightlike Lee field exists.
    """
    if not 0 < s < n:
        raise ValueError("need 0 < s < n for a nonzero null vector")
    eps = eps_signs(n, s)
    if B_hol is None:
        B_hol = np.zeros(n, dtype=complex)
        B_hol[0] = 1.0
        B_hol[s] = 1.0
    B_hol = np.asarray(B_hol, dtype=complex)
    omega_hol = 0.5 * eps * B_hol.conj()   # lowering with H = diag(eps)/2
    base = flat_chart(n, s)
    return LCKStructure(chart=base.chart,
                        lee_form_eval=lambda z: omega_hol,
                        conformal_factor_eval=None, parallel_lee=True,
                        name=f"synthetic-null(n={n},s={s})")


def halfplane_kahler_chart(n: int, s: int) -> LCKStructure:
    """Auxiliary Kahler metric Im(w)^{-3} dw.dwbar + sum eps_j dz.dzbar.

    Coordinates (w, z^1..z^n) with Im(w) > 0; chart dimension n + 1.
    Rescaling by Im(w) produces the Tricerri-family metric.
    """
    eps = eps_signs(n, s)
    m = n + 1

    def metric(p):
        v = float(p[0].imag)
        H = np.zeros((m, m), dtype=complex)
        H[0, 0] = 0.5 / v ** 3
        H[1:, 1:] = np.diag(0.5 * eps)
        return H

    chart = MetricChart(n=m, s=s, metric_eval=metric,
                        domain_pred=lambda p: float(np.asarray(p)[0].imag) > 0.0,
                        name=f"halfplane-kahler(n={n},s={s})")
    return LCKStructure(chart=chart,
                        lee_form_eval=lambda p: np.zeros(m, dtype=complex),
                        parallel_lee=False, name=chart.name)


def tricerri_chart(n: int, s: int) -> LCKStructure:
    """Indefinite Hermitian family metric on C_+ x C^n_s.

    g = Im(w)^{-2} dw.dwbar + Im(w) sum_j eps_j dz^j.dzbar^j, a globally
    conformal Kahler metric with exact Lee form d log Im(w) and a
    nonparallel, spacelike Lee field.  Coordinate 0 is w.
    """
    if n < 1 or not 0 <= s < n:
        raise ValueError("need n >= 1 and 0 <= s < n")
    eps = eps_signs(n, s)
    m = n + 1

    def metric(p):
        v = float(p[0].imag)
        H = np.zeros((m, m), dtype=complex)
        H[0, 0] = 0.5 / v ** 2
        H[1:, 1:] = np.diag(0.5 * v * eps)
        return H

    def deriv(p):
        v = float(p[0].imag)
        dH_dz = np.zeros((m, m, m), dtype=complex)
        dH_dzb = np.zeros((m, m, m), dtype=complex)
        # d v/dw = -i/2, d v/dwbar = i/2
        dH_dz[0, 0, 0] = 0.5 * (-2.0 / v ** 3) * (-0.5j)
        dH_dzb[0, 0, 0] = 0.5 * (-2.0 / v ** 3) * (0.5j)
        dH_dz[0, 1:, 1:] = np.diag(0.5 * eps * (-0.5j))
        dH_dzb[0, 1:, 1:] = np.diag(0.5 * eps * (0.5j))
        return dH_dz, dH_dzb

    def gamma_full(p):
        """All nonzero connection coefficients in closed form."""
        v = float(p[0].imag)
        G = np.zeros((2 * m, 2 * m, 2 * m), dtype=complex)
        w, wb = 0, m
        G[w, w, w] = 1j / v
        G[wb, wb, wb] = -1j / v
        for j in range(1, m):
            jb = m + j
            G[j, j, w] = G[j, w, j] = -0.25j / v
            G[jb, jb, wb] = G[jb, wb, jb] = 0.25j / v
            G[j, j, wb] = G[j, wb, j] = 0.25j / v
            G[jb, jb, w] = G[jb, w, jb] = -0.25j / v
            G[w, j, jb] = G[w, jb, j] = -0.25j * eps[j - 1] * v ** 2
            G[wb, j, jb] = G[wb, jb, j] = 0.25j * eps[j - 1] * v ** 2
        return G

    chart = MetricChart(n=m, s=s, metric_eval=metric,
                        domain_pred=lambda p: float(np.asarray(p)[0].imag) > 0.0,
                        metric_deriv=deriv, christoffel_analytic=gamma_full,
                        name=f"tricerri(n={n},s={s})")

    def lee(p):
        out = np.zeros(m, dtype=complex)
        out[0] = 1.0 / (p[0] - np.conj(p[0]))    # = -i / (2 Im w)
        return out

    return LCKStructure(chart=chart, lee_form_eval=lee,
                        conformal_factor_eval=lambda p: float(np.log(p[0].imag)),
                        parallel_lee=False, name=chart.name)


# ---------------------------------------------------------------------------
# quotient structure
# ---------------------------------------------------------------------------

def deck_equivalent(model: HopfModel, z, zp, tol: float = 1e-9) -> Optional[int]:
    """Integer m with zp = lambda^m z componentwise, or None."""
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)
    nz, nzp = np.linalg.norm(z), np.linalg.norm(zp)
    if nz == 0.0 or nzp == 0.0:
        return None
    m0 = np.log(nzp / nz) / np.log(model.lam)
    for m in {int(np.floor(m0)), int(np.ceil(m0)), int(round(m0))}:
        if np.abs(zp - model.lam ** m * z).max() <= tol * max(1.0, nzp):
            return m
    return None


def hopf_diffeo(model: HopfModel, z) -> tuple[np.ndarray, complex]:
    """Representative z -> (zeta, w) on Sigma^{2n-1} x S^1."""
    z = np.asarray(z, dtype=complex)
    r = model.norm_sn(z)
    if r == 0.0:
        raise ChartDomainError("point lies on the null cone")
    zeta = z / r
    w = np.exp(2j * np.pi * np.log(r) / np.log(model.lam))
    return zeta, complex(w)


def hopf_diffeo_inv(model: HopfModel, zeta, w) -> np.ndarray:
    """Orbit representative lambda^(arg(w)/2pi) zeta, arg in [0, 2pi)."""
    zeta = np.asarray(zeta, dtype=complex)
    arg = float(np.angle(w)) % (2.0 * np.pi)
    return model.lam ** (arg / (2.0 * np.pi)) * zeta


def torus_pullback_isometry_residual(model: HopfModel, t: complex, z) -> float:
    """Max component difference between the metric and its pullback under
    the torus translation z -> exp(t) z."""
    z = np.asarray(z, dtype=complex)
    lck = hopf_chart(model)
    zt = np.exp(t) * z
    if not lck.chart.domain_pred(zt):
        raise ChartDomainError("translated point leaves the chart domain")
    H = lck.chart.hermitian(z)
    Ht = lck.chart.hermitian(zt)
    pullback = Ht * np.exp(t) * np.conj(np.exp(t))
    return float(np.abs(pullback - H).max())


def fibration_split(model: HopfModel, z) -> tuple[FrameSubspace, FrameSubspace]:
    """Vertical span{A, B} and its orthogonal complement at a pseudosphere
    point (b(z,z) = 1)."""
    z = np.asarray(z, dtype=complex)
    if abs(model.b(z) - 1.0) > 1e-9:
        raise ValueError("point must satisfy b(z, z) = 1")
    lck = hopf_chart(model)
    data = lee_data(lck, z)
    form = lck.chart.real_form(z)
    V0 = FrameSubspace.from_vectors(form, [data.A.real_coords(), data.B.real_coords()])
    sig = signature_of(form, V0)
    if sig.null:
        raise ValueError("vertical space is degenerate")
    H0 = orthogonal_complement(form, V0)
    return V0, H0


def submersion_isometry_residual(model: HopfModel, z, u: TangentVector,
                                 v: TangentVector) -> float:
    """Fibre-invariance of horizontal Gram entries.

    Transports u, v by the differential of the torus flows z -> e^t z and
    z -> e^{it} z (whose orbit tangents span the vertical space) and
    returns the larger |d/dt g(u_t, v_t)| at t = 0 by central differences.
    Inputs must be horizontal: orthogonal to both A and B.
    """
    z = np.asarray(z, dtype=complex)
    lck = hopf_chart(model)
    data = lee_data(lck, z)
    gA = metric_inner(lck.chart, z, u, data.A)
    gB = metric_inner(lck.chart, z, u, data.B)
    gA2 = metric_inner(lck.chart, z, v, data.A)
    gB2 = metric_inner(lck.chart, z, v, data.B)
    scale = max(1.0, u.norm() * v.norm())
    if max(abs(gA), abs(gB), abs(gA2), abs(gB2)) > 1e-6 * scale:
        raise ValueError("inputs are not horizontal at z")

    def gram_along(flow_dir: complex):
        def f(t):
            fac = np.exp(t * flow_dir)
            zt = fac * z
            ut = TangentVector(fac * u.hol, np.conj(fac) * u.antihol)
            vt = TangentVector(fac * v.hol, np.conj(fac) * v.antihol)
            return np.array([metric_inner(lck.chart, zt, ut, vt)])
        h = 1e-5
        d1 = (f(h) - f(-h)) / (2 * h)
        d2 = (f(h / 2) - f(-h / 2)) / h
        return float(np.abs((4 * d2 - d1) / 3).max())

    return max(gram_along(1.0 + 0j), gram_along(1j))


def retraction(model: HopfModel, t: float, z) -> np.ndarray:
    """Block retraction F_t(z) = ((1-t) z', z'') on the positive region."""
    z = np.asarray(z, dtype=complex)
    if model.b(z) <= 0.0:
        raise ChartDomainError("retraction is defined on the positive region only")
    if not 0.0 <= t <= 1.0:
        raise ValueError("need 0 <= t <= 1")
    out = z.copy()
    out[:model.s] = (1.0 - t) * out[:model.s]
    return out


@dataclass(frozen=True)
class SiegelBoundaryPoint:
    """Image point of the Cayley transform with its defining residual
    Im(zeta_n) - sum_{a<n} eps_a |zeta_a|^2."""

    zeta: np.ndarray
    residual: float


def cayley(s: int, r: float, z) -> SiegelBoundaryPoint:
    """Cayley transform (z', z_n) -> (z'/(r+z_n), i(r-z_n)/(r+z_n)).

    For z on the pseudosphere b(z,z) = r^2 the image lies on the boundary
    of the Siegel domain: Im(zeta_n) = sum eps_a |zeta_a|^2.
    """
    z = np.asarray(z, dtype=complex)
    n = z.size
    if abs(z[-1] + r) <= 1e-9:
        raise ZeroDivisionError("Cayley pole: z_n + r = 0")
    denom = r + z[-1]
    zeta = np.empty(n, dtype=complex)
    zeta[:-1] = z[:-1] / denom
    zeta[-1] = 1j * (r - z[-1]) / denom
    eps = eps_signs(n, s)[:-1]
    residual = float(zeta[-1].imag - np.sum(eps * np.abs(zeta[:-1]) ** 2))
    return SiegelBoundaryPoint(zeta=zeta, residual=residual)


def gab_invariance_residual(n: int, s: int, alpha: float, beta: complex,
                            w: complex, z) -> float:
    """Pullback residual of the family metric under F_0(w, z) = (alpha w, beta z).

    Requires alpha |beta|^2 = 1, the relation that makes the metric
    invariant under the generated group.
    """
    if abs(alpha * abs(beta) ** 2 - 1.0) > 1e-12:
        raise ValueError("invariance requires alpha |beta|^2 = 1")
    z = np.asarray(z, dtype=complex)
    lck = tricerri_chart(n, s)
    p = np.concatenate([[complex(w)], z])
    if not lck.chart.domain_pred(p):
        raise ChartDomainError("need Im(w) > 0")
    pt = np.concatenate([[alpha * complex(w)], beta * z])
    H = lck.chart.hermitian(p)
    Ht = lck.chart.hermitian(pt)
    jac = np.concatenate([[alpha], np.full(n, beta)])
    pullback = Ht * np.outer(jac, jac.conj())
    return float(np.abs(pullback - H).max())
