"""CR structures on leaves of the Lee-form foliation.

Each leaf is a real hypersurface; its CR bundle is the intersection of
the holomorphic tangent bundle with the complexified leaf tangent.  This
module computes that bundle pointwise, evaluates the tangential CR
operator on ambient functions, values the Levi form against a fixed
characteristic generator, detects Levi-flatness, and implements the
explicit leaf bookkeeping on the positive Hopf region: leaf labels on
the unit circle, chart-image radii inside the fundamental annulus, and
the Cayley picture of the leaves as Siegel-domain boundaries with their
Levi signature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import ChartDomainError, TangentVector, lie_bracket, wirtinger_derivative, fd_step
from .lck import SINGULAR_LEE_TOL, LCKStructure, lee_data
from .models import HopfModel, cayley, eps_signs
from .semieuclid import FrameSubspace

__all__ = [
    "CRFibre", "LeafLabel", "cr_fibre", "tangential_cr_residual",
    "levi_form", "levi_flat_detector", "leaf_label", "label_from_w",
    "leaf_chart_image_check", "siegel_levi_matrix", "siegel_levi_signature",
    "cayley_cr_residual", "leaf_extension_hypothesis",
]


@dataclass(frozen=True)
class CRFibre:
    """Pointwise CR data of the leaf through z.

    t10 columns are holomorphic components of a basis of the CR bundle
    (complex dimension n-1); levi_H is the real (2n-2)-dimensional
    maximal complex distribution; characteristic spans the line
    complementing levi_H inside the leaf tangent.
    """

    point: np.ndarray
    t10: np.ndarray
    levi_H: FrameSubspace
    characteristic: TangentVector


def _t10_basis(omega_hol: np.ndarray) -> np.ndarray:
    """Orthonormal (Euclidean) basis of {v : omega_hol . v = 0} as columns."""
    n = omega_hol.size
    row = omega_hol.reshape(1, n)
    _, sv, vt = np.linalg.svd(row, full_matrices=True)
    rank = int(np.sum(sv > 1e-13 * max(sv[0], 1.0)))
    return vt[rank:].conj().T


def cr_fibre(lck: LCKStructure, z) -> CRFibre:
    """CR bundle, Levi distribution and characteristic direction at z.

    The characteristic generator is the anti-Lee vector when c != 0 (it
    lies in the leaf tangent and is g-orthogonal to the Levi
    distribution); for null Lee data the leaf tangent degenerates onto
    the Levi distribution plus the Lee line, and the Lee field itself is
    used as the marker of the quotient direction.
    """
    z = np.asarray(z, dtype=complex)
    data = lee_data(lck, z)
    if data.B.norm() < SINGULAR_LEE_TOL:
        raise ValueError(f"Lee field vanishes at {z}")
    omega_hol = lck.lee_hol(z)
    t10 = _t10_basis(omega_hol)
    chart = lck.chart
    form = chart.real_form(z)
    rows = []
    for k in range(t10.shape[1]):
        v = TangentVector.real(t10[:, k])
        rows.append(v.real_coords())
        rows.append(v.j().real_coords())
    levi_H = FrameSubspace.from_vectors(form, rows)
    scale = max(1.0, data.B.norm() ** 2)
    marker = data.A if abs(data.c) > 1e-10 * scale else data.B
    return CRFibre(point=z, t10=t10, levi_H=levi_H, characteristic=marker)


def tangential_cr_residual(lck: LCKStructure, z, f) -> float:
    """max |Zbar(f)| over a basis of the conjugate CR bundle at z.

    f is an ambient function near z; its restriction to the leaf is CR
    at z iff the residual vanishes.
    """
    z = np.asarray(z, dtype=complex)
    fib = cr_fibre(lck, z)
    h = fd_step(z)
    _, d_dzb = wirtinger_derivative(lambda p: np.asarray(f(p), dtype=complex), z, h)
    # T01 = conj(T10): Zbar(f) contracts conj components with dzbar
    vals = fib.t10.conj().T @ d_dzb.ravel()
    return float(np.abs(vals).max()) if vals.size else 0.0


def _t10_projected_field(lck: LCKStructure, v0: np.ndarray):
    """Type-(1,0) section of the CR bundle through v0, by Euclidean
    projection onto ker(omega_hol) pointwise."""
    def field(p):
        w = lck.lee_hol(p)
        denom = float(np.vdot(w, w).real)
        v = v0 - (w @ v0) * w.conj() / denom
        return TangentVector.complexified(v, np.zeros_like(v))
    return field


def levi_form(lck: LCKStructure, z, V, W) -> complex:
    """Levi form L(V, Wbar) = i * (characteristic component of [V, Wbar]).

    V, W are type-(1,0) vectors in the CR fibre at z (holomorphic
    component arrays or TangentVectors); they are extended as CR
    sections by pointwise projection and the bracket is computed by
    central differences.  The value is taken against the fixed
    characteristic generator of the leaf tangent modulo the Levi
    distribution, so only signs and zeros are geometrically meaningful.
    """
    z = np.asarray(z, dtype=complex)
    fib = cr_fibre(lck, z)
    vh = V.hol if isinstance(V, TangentVector) else np.asarray(V, dtype=complex)
    wh = W.hol if isinstance(W, TangentVector) else np.asarray(W, dtype=complex)
    Vf = _t10_projected_field(lck, vh)
    Wf = _t10_projected_field(lck, wh)

    def Wbar(p):
        return Wf(p).conj()

    br = lie_bracket(Vf, Wbar, z)
    # decompose against (complexified) H basis + characteristic generator
    cols = [TangentVector.real(fib.t10[:, k]).components for k in range(fib.t10.shape[1])]
    cols += [TangentVector.real(fib.t10[:, k]).j().components for k in range(fib.t10.shape[1])]
    cols.append(fib.characteristic.components)
    M = np.stack(cols, axis=1)
    coeff, *_ = np.linalg.lstsq(M, br.components, rcond=None)
    return complex(1j * coeff[-1])


def levi_flat_detector(lck: LCKStructure, z, tol: float = 1e-6) -> bool:
    """True iff the Levi form vanishes on a full CR basis at z."""
    z = np.asarray(z, dtype=complex)
    fib = cr_fibre(lck, z)
    worst = 0.0
    for a in range(fib.t10.shape[1]):
        for b in range(fib.t10.shape[1]):
            worst = max(worst, abs(levi_form(lck, z, fib.t10[:, a], fib.t10[:, b])))
    return worst < tol


# ---------------------------------------------------------------------------
# leaf space of the positive Hopf region
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeafLabel:
    """Circle label of a leaf, with its chart-image radius data.

    Labels are deck invariant; two labels name the same leaf iff they
    differ by a rotation exp(2 pi i m log(lambda)).
    """

    w: complex
    a: float
    chart_radius: float
    lam: float

    def same_leaf(self, other: "LeafLabel", m_max: int = 8,
                  tol: float = 1e-9) -> bool:
        for m in range(-m_max, m_max + 1):
            if abs(self.w * np.exp(2j * np.pi * m * np.log(self.lam)) - other.w) <= tol:
                return True
        return False


def leaf_label(model: HopfModel, z) -> LeafLabel:
    """Label of the leaf through z: w = exp(2 pi i log|z|_{s,n} / log lambda).

    a = arg(w) / (2 pi log lambda) and the chart radius is
    lambda^{-floor(a)} e^{arg(w)/(2 pi)}, the radius of the pseudosphere
    the leaf traces inside the fundamental annulus chart.
    """
    z = np.asarray(z, dtype=complex)
    b = model.b(z)
    if b <= 0.0:
        raise ChartDomainError("leaf labels require b(z, z) > 0")
    r = np.sqrt(b)
    w = complex(np.exp(2j * np.pi * np.log(r) / np.log(model.lam)))
    arg = float(np.angle(w)) % (2.0 * np.pi)
    a = arg / (2.0 * np.pi * np.log(model.lam))
    radius = model.lam ** (-np.floor(a)) * np.exp(arg / (2.0 * np.pi))
    return LeafLabel(w=w, a=float(a), chart_radius=float(radius), lam=model.lam)


def label_from_w(model: HopfModel, w: complex) -> LeafLabel:
    """Label built directly from a unit-circle value."""
    w = complex(w)
    if abs(abs(w) - 1.0) > 1e-9:
        raise ValueError("leaf labels lie on the unit circle")
    arg = float(np.angle(w)) % (2.0 * np.pi)
    a = arg / (2.0 * np.pi * np.log(model.lam))
    radius = model.lam ** (-np.floor(a)) * np.exp(arg / (2.0 * np.pi))
    return LeafLabel(w=w, a=float(a), chart_radius=float(radius), lam=model.lam)


def leaf_chart_image_check(model: HopfModel, w: complex, samples,
                           tol_excluded: float = 1e-9) -> float:
    """Max residual of the chart-image radius over pseudosphere samples.

    For each unit-pseudosphere sample zeta, the representative
    (chart_radius * zeta) must have |.|_{s,n} equal to the radius and lie
    strictly inside the fundamental annulus lambda < |.|_{s,n} < 1.
    Labels with integer a (the leaf of the unit pseudosphere itself) are
    excluded: that leaf needs the shifted-annulus chart instead.
    """
    w = complex(w)
    if abs(abs(w) - 1.0) > 1e-9:
        raise ValueError("leaf labels lie on the unit circle")
    arg = float(np.angle(w)) % (2.0 * np.pi)
    a = arg / (2.0 * np.pi * np.log(model.lam))
    if min(a - np.floor(a), np.ceil(a) - a) <= tol_excluded:
        raise ValueError("excluded leaf: use the shifted annulus chart "
                         "(integer chart index)")
    radius = model.lam ** (-np.floor(a)) * np.exp(arg / (2.0 * np.pi))
    worst = 0.0
    for zeta in np.atleast_2d(np.asarray(samples, dtype=complex)):
        x = radius * zeta
        worst = max(worst, abs(model.norm_sn(x) - radius))
        if not model.lam < model.norm_sn(x) < 1.0:
            worst = max(worst, 1.0)
    return worst


def leaf_extension_hypothesis(n: int, s: int) -> bool:
    """Parameter gate for the full-leaf CR extension statement.

    Requires n >= 2, 0 < s < n and excludes n = 2s + 1, where the Cayley
    pole set can swallow a whole null direction of the leaf.  Pointwise
    constructions (labels, radii, Cayley residuals, Levi signatures) do
    not need this hypothesis.
    """
    return n >= 2 and 0 < s < n and n != 2 * s + 1


# ---------------------------------------------------------------------------
# Siegel-domain boundary
# ---------------------------------------------------------------------------

def siegel_levi_matrix(n: int, s: int) -> np.ndarray:
    """Levi form of the Siegel-domain boundary in its CR frame.

    The CR bundle of the boundary Im(zeta_n) = sum eps_a |zeta_a|^2 is
    spanned by L_a = d/dzeta^a + 2 i eps_a conj(zeta_a) d/dzeta^n; the
    brackets [L_a, conj(L_b)] = -2 i eps_a delta_ab d/d(Re zeta_n) are
    exact, so the Levi matrix against the generator d/d(Re zeta_n) is
    the constant diagonal 2 eps_a (a < n).
    """
    if not 0 < s < n:
        raise ValueError("need 0 < s < n")
    return np.diag(2.0 * eps_signs(n, s)[:-1]).astype(complex)


def siegel_levi_signature(n: int, s: int) -> tuple[int, int]:
    """(negative, positive) eigenvalue counts of the boundary Levi form."""
    evals = np.linalg.eigvalsh(siegel_levi_matrix(n, s))
    return int(np.sum(evals < 0)), int(np.sum(evals > 0))


def cayley_cr_residual(model: HopfModel, r: float, z) -> float:
    """CR compatibility of the Cayley transform at a pseudosphere point.

    Pushes every CR-fibre generator at z through the holomorphic
    Jacobian of the transform and measures how far the image is from
    annihilating the holomorphic differential of the Siegel boundary
    defining function.
    """
    z = np.asarray(z, dtype=complex)
    n = model.n
    if abs(model.b(z) - r * r) > 1e-8:
        raise ValueError("point must lie on the pseudosphere of radius r")
    lck_omega = eps_signs(n, model.s) * z.conj()   # proportional to the Lee form
    t10 = _t10_basis(lck_omega)
    denom = r + z[-1]
    if abs(denom) <= 1e-9:
        raise ZeroDivisionError("Cayley pole: z_n + r = 0")
    jac = np.zeros((n, n), dtype=complex)
    for a in range(n - 1):
        jac[a, a] = 1.0 / denom
        jac[a, -1] = -z[a] / denom ** 2
    jac[-1, -1] = -2j * r / denom ** 2
    zeta = cayley(model.s, r, z).zeta
    eps = eps_signs(n, model.s)
    # d rho in holomorphic components: rho = Im(zeta_n) - sum eps_a |zeta_a|^2
    drho = np.empty(n, dtype=complex)
    drho[:-1] = -eps[:-1] * zeta[:-1].conj()
    drho[-1] = -0.5j
    worst = 0.0
    for k in range(t10.shape[1]):
        pushed = jac @ t10[:, k]
        worst = max(worst, abs(complex(drho @ pushed)))
    return worst
