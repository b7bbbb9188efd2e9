"""Canonical foliations and their extrinsic geometry.

First foliation: kernel of the Lee form (a hyperplane distribution),
with the nondegenerate splitting when c != 0 and the screen/lightlike
transversal construction when the Lee field is null.  Second foliation:
the plane spanned by the Lee and anti-Lee fields, its integrability,
the isotropic transversal pair for null Lee data, and the vanishing of
second fundamental forms.  Also the complex-submanifold second
fundamental form law and the mean curvature it forces.

Tangent/transversal decompositions at a point are done against the real
interleaved coordinates of the chart (semieuclid.FrameSubspace); vector
fields entering covariant derivatives are extended off the fibre by
pointwise projection, which is legitimate because second fundamental
forms are tensorial in their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .charts import (
    TangentVector,
    christoffel,
    covariant_derivative,
    lie_bracket,
)
from .lck import SINGULAR_LEE_TOL, LCKStructure, LeeData, lee_data
from .semieuclid import (
    FrameSubspace,
    SemiEuclideanForm,
    inner,
    orthogonal_complement,
)

__all__ = [
    "FoliationFibre", "SecondFundamentalData", "IsotropicTransversalPair",
    "first_foliation_fibre", "lightlike_transversal", "gauss_weingarten",
    "second_foliation_fibre", "integrability_residual",
    "isotropic_transversal_pair", "h_P_residual", "ComplexImmersion",
    "complex_submanifold_mean_curvature",
]

NULL_C_TOL = 1e-10  # |c| below this (times scale) counts as a null Lee field


class SingularLeeError(ValueError):
    """Lee field vanishes at the point; foliations are undefined there."""


def _kernel_rows(rows: np.ndarray, dim: int) -> np.ndarray:
    if rows.size == 0:
        return np.eye(dim)
    _, sv, vt = np.linalg.svd(np.atleast_2d(rows), full_matrices=True)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1.0)))
    return vt[rank:]


def _euclid_complement_within(space: np.ndarray, inside: np.ndarray) -> np.ndarray:
    """Basis of the Euclidean orthocomplement of span(space) inside
    span(inside); both inputs are row-bases."""
    if space.size == 0:
        return inside
    q, _ = np.linalg.qr(space.T)
    proj = inside - (inside @ q) @ q.T
    _, sv, vt = np.linalg.svd(proj, full_matrices=False)
    rank = int(np.sum(sv > 1e-12 * max(sv[0] if sv.size else 0.0, 1.0)))
    return vt[:rank]


@dataclass(frozen=True)
class FoliationFibre:
    """Pointwise data of a foliation: tangent fibre and its splitting."""

    point: np.ndarray
    c: float
    tangent: FrameSubspace
    radical: FrameSubspace
    screen: FrameSubspace
    transversal: FrameSubspace
    form: SemiEuclideanForm

    def split_residual(self) -> float:
        """Max Gram residual of screen-perp-radical orthogonality."""
        if self.screen.dim == 0 or self.radical.dim == 0:
            return 0.0
        cross = self.screen.basis @ self.form.gram @ self.radical.basis.T
        return float(np.abs(cross).max())


def _lck_point(lck: LCKStructure, z: np.ndarray) -> tuple[LeeData, SemiEuclideanForm]:
    data = lee_data(lck, z)
    if data.B.norm() < SINGULAR_LEE_TOL:
        raise SingularLeeError(f"Lee field vanishes at {z}")
    return data, lck.chart.real_form(z)


def _omega_real(lck: LCKStructure, z: np.ndarray, form: SemiEuclideanForm,
                data: LeeData) -> np.ndarray:
    """Lee form as a real covector in interleaved coordinates."""
    return form.gram @ data.B.real_coords()


def first_foliation_fibre(lck: LCKStructure, z) -> FoliationFibre:
    """Fibre of the hyperplane foliation omega = 0 at z.

    c != 0: the fibre is nondegenerate, the Lee line is transversal and
    the screen is the whole fibre.  c = 0: the Lee line is the radical,
    the screen is its Euclidean orthocomplement inside the fibre, and the
    transversal is the canonical null line normalized against omega.
    """
    z = np.asarray(z, dtype=complex)
    data, form = _lck_point(lck, z)
    omega = _omega_real(lck, z, form, data)
    Breal = data.B.real_coords()
    tangent = FrameSubspace.from_vectors(form, _kernel_rows(omega, form.dim))
    scale = max(1.0, float(Breal @ Breal))
    if abs(data.c) > NULL_C_TOL * scale:
        return FoliationFibre(point=z, c=data.c, tangent=tangent,
                              radical=FrameSubspace.zero(form),
                              screen=tangent,
                              transversal=FrameSubspace.from_vectors(form, [Breal]),
                              form=form)
    rad = FrameSubspace.from_vectors(form, [Breal])
    screen_rows = _euclid_complement_within(rad.basis, tangent.basis)
    screen = FrameSubspace.from_vectors(form, screen_rows)
    screen_perp = orthogonal_complement(form, screen)
    V_rows = _euclid_complement_within(rad.basis, screen_perp.basis)
    if V_rows.shape[0] != 1:
        raise ValueError("could not isolate a complement of the Lee line")
    N = lightlike_transversal(form, omega, Breal, screen, V_rows[0])
    return FoliationFibre(point=z, c=data.c, tangent=tangent, radical=rad,
                          screen=screen,
                          transversal=FrameSubspace.from_vectors(form, [N]),
                          form=form)


def lightlike_transversal(form: SemiEuclideanForm, omega: np.ndarray,
                          B: np.ndarray, screen: FrameSubspace,
                          V: np.ndarray) -> np.ndarray:
    """Canonical null transversal N_V = (1/omega(V)) {V - g(V,V)/(2 omega(V)) B}.

    V must span a complement of the Lee line inside the orthocomplement
    of the screen: it is checked to be g-orthogonal to the screen and
    independent of B.  omega(V) != 0 then holds automatically for valid
    inputs; a vanishing value signals an invalid complement.  The output
    satisfies g(N_V, N_V) = 0 and omega(N_V) = 1 and does not depend on
    the choice of V.
    """
    V = np.asarray(V, dtype=float)
    B = np.asarray(B, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if screen.dim:
        cross = np.abs(screen.basis @ form.gram @ V).max()
        if cross > 1e-8 * max(1.0, float(np.abs(V).max())):
            raise ValueError("V is not orthogonal to the screen")
    pair = np.vstack([B, V])
    sv = np.linalg.svd(pair, compute_uv=False)
    if sv[-1] <= 1e-10 * max(sv[0], 1.0):
        raise ValueError("V lies on the Lee line")
    wV = float(omega @ V)
    if abs(wV) <= 1e-12 * max(1.0, float(np.abs(omega).max()) * float(np.abs(V).max())):
        raise ValueError("omega(V) = 0: V does not span a valid complement")
    gVV = inner(form, V, V)
    return (V - (gVV / (2.0 * wV)) * B) / wV


@dataclass(frozen=True)
class SecondFundamentalData:
    """Gauss-Weingarten split samples for one (X, Y, V) triple."""

    induced: np.ndarray          # tan(nabla_X Y)
    h: np.ndarray                # tra(nabla_X Y)
    shape_operator: np.ndarray   # A_V X = -tan(nabla_X V)
    transversal_connection: np.ndarray  # tra(nabla_X V)
    h_symmetry_residual: float


def _tangential_extension(lck: LCKStructure, vec: np.ndarray) -> Callable:
    """Extend a tangent vector to a section of ker(omega) by projecting a
    coordinate-constant field pointwise (g-projection along the Lee line
    when c != 0, Euclidean kernel projection when c = 0)."""
    def field(p):
        data = lee_data(lck, p)
        form = lck.chart.real_form(p)
        omega = form.gram @ data.B.real_coords()
        Breal = data.B.real_coords()
        scale = max(1.0, float(Breal @ Breal))
        if abs(data.c) > NULL_C_TOL * scale:
            proj = vec - (float(omega @ vec) / data.c) * Breal
        else:
            proj = vec - (float(omega @ vec) / float(omega @ omega)) * omega
        return TangentVector.from_real_coords(proj)
    return field


def _split_first(lck: LCKStructure, fibre: FoliationFibre, w: np.ndarray,
                 z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a real vector against tangent + transversal of the first
    foliation using the omega-normalization of the transversal."""
    data = lee_data(lck, z)
    form = fibre.form
    omega = form.gram @ data.B.real_coords()
    scale = max(1.0, float(data.B.real_coords() @ data.B.real_coords()))
    if abs(fibre.c) > NULL_C_TOL * scale:
        coeff = float(omega @ w) / fibre.c
    else:
        coeff = float(omega @ w)   # omega(N_V) = 1
    tra = coeff * fibre.transversal.basis[0]
    return w - tra, tra


def gauss_weingarten(lck: LCKStructure, fibre: FoliationFibre, X, Y, V,
                     z) -> SecondFundamentalData:
    """Split nabla_X Y and nabla_X V against the fibre decomposition.

    X, Y are tangent vectors at z (real interleaved coordinates or
    TangentVector), extended as sections of the tangent distribution by
    pointwise projection; V is a transversal vector extended likewise
    along the transversal line.
    """
    z = np.asarray(z, dtype=complex)
    chart = lck.chart
    gamma = christoffel(chart, z)

    def as_real(vec) -> np.ndarray:
        return vec.real_coords() if isinstance(vec, TangentVector) else np.asarray(vec, dtype=float)

    Xr, Yr, Vr = as_real(X), as_real(Y), as_real(V)
    cond = np.linalg.cond(fibre.form.gram)
    if not np.isfinite(cond) or cond > 1e12:
        raise ValueError("fibre decomposition is ill-conditioned")

    Xfield = _tangential_extension(lck, Xr)
    Yfield = _tangential_extension(lck, Yr)
    nXY = covariant_derivative(chart, Xfield, Yfield, z, gamma=gamma)
    nYX = covariant_derivative(chart, Yfield, Xfield, z, gamma=gamma)
    tanXY, traXY = _split_first(lck, fibre, nXY.real_coords(), z)
    _, traYX = _split_first(lck, fibre, nYX.real_coords(), z)

    scale = max(1.0, float(np.abs(fibre.transversal.basis).max()))
    # coefficient of V against the transversal generator, so the shape
    # operator scales linearly with the supplied V
    alpha = float(np.linalg.lstsq(fibre.transversal.basis.T,
                                  Vr, rcond=None)[0][0])
    gen_resid = np.abs(alpha * fibre.transversal.basis[0] - Vr).max()
    if gen_resid > 1e-8 * max(1.0, np.abs(Vr).max()):
        raise ValueError("V is not a transversal vector at z")

    def Vfield(p):
        d = lee_data(lck, p)
        s = max(1.0, d.B.real_coords() @ d.B.real_coords())
        if abs(d.c) > NULL_C_TOL * s:
            return alpha * d.B
        fb = first_foliation_fibre(lck, p)
        return alpha * TangentVector.from_real_coords(fb.transversal.basis[0])

    nXV = covariant_derivative(chart, Xfield, Vfield, z, gamma=gamma)
    tanXV, traXV = _split_first(lck, fibre, nXV.real_coords(), z)
    return SecondFundamentalData(
        induced=tanXY, h=traXY, shape_operator=-tanXV,
        transversal_connection=traXV,
        h_symmetry_residual=float(np.abs(traXY - traYX).max()) / scale)


def second_foliation_fibre(lck: LCKStructure, z) -> FoliationFibre:
    """Fibre of the Lee/anti-Lee plane foliation at z.

    c != 0: a definite plane (sign c) with the orthocomplement as
    transversal.  c = 0: the plane is its own radical (isotropic for
    n >= 3, totally lightlike for n = 2); the transversal combines the
    isotropic pair with the screen of the orthocomplement when n >= 3
    and falls back to a Euclidean complement for n = 2.
    """
    z = np.asarray(z, dtype=complex)
    data, form = _lck_point(lck, z)
    A, B = data.A.real_coords(), data.B.real_coords()
    tangent = FrameSubspace.from_vectors(form, [A, B])
    scale = max(1.0, float(B @ B))
    if abs(data.c) > NULL_C_TOL * scale:
        return FoliationFibre(point=z, c=data.c, tangent=tangent,
                              radical=FrameSubspace.zero(form),
                              screen=tangent,
                              transversal=orthogonal_complement(form, tangent),
                              form=form)
    perp = orthogonal_complement(form, tangent)
    screen_rows = _euclid_complement_within(tangent.basis, perp.basis)
    screen = FrameSubspace.from_vectors(form, screen_rows) if screen_rows.size \
        else FrameSubspace.zero(form)
    if lck.chart.n >= 3:
        omega = _omega_real(lck, z, form, data)
        theta = form.gram @ A
        sperp = orthogonal_complement(form, screen)
        E_rows = _euclid_complement_within(tangent.basis, sperp.basis)
        pair = isotropic_transversal_pair(form, omega, theta, A, B, screen,
                                          E_rows[0], E_rows[1])
        trans_rows = np.vstack([pair.N1, pair.N2, screen.basis]) if screen.dim \
            else np.vstack([pair.N1, pair.N2])
    else:
        trans_rows = _euclid_complement_within(tangent.basis, np.eye(form.dim))
    return FoliationFibre(point=z, c=data.c, tangent=tangent, radical=tangent,
                          screen=FrameSubspace.zero(form),
                          transversal=FrameSubspace.from_vectors(form, trans_rows),
                          form=form)


def integrability_residual(lck: LCKStructure, z) -> float:
    """Euclidean norm of [A, B] after projecting out span{A, B}."""
    z = np.asarray(z, dtype=complex)
    data, form = _lck_point(lck, z)

    def Afield(p):
        return lee_data(lck, p).A

    def Bfield(p):
        return lee_data(lck, p).B

    br = lie_bracket(Afield, Bfield, z).real_coords()
    plane = np.vstack([data.A.real_coords(), data.B.real_coords()])
    q, _ = np.linalg.qr(plane.T)
    resid = br - q @ (q.T @ br)
    return float(np.linalg.norm(resid))


@dataclass(frozen=True)
class IsotropicTransversalPair:
    """Null transversal pair with its derived combination coefficients."""

    N1: np.ndarray
    N2: np.ndarray
    lam: np.ndarray  # 2x2, lam[0,0]=lam11, lam[0,1]=lam12=lam21, lam[1,1]=lam22


def isotropic_transversal_pair(form: SemiEuclideanForm, omega: np.ndarray,
                               theta: np.ndarray, A: np.ndarray, B: np.ndarray,
                               screen: FrameSubspace, V1, V2) -> IsotropicTransversalPair:
    """Transversal pair normalized by theta(N1) = omega(N2) = 1.

    {V1, V2} must frame a complement of span{A, B} inside the
    orthocomplement of the screen's orthocomplement... i.e. inside
    S-perp-perp; validity is certified by D = theta(V1) omega(V2) -
    omega(V1) theta(V2) being nonzero.  The lambda coefficients are
    derived from the isotropy constraints g(N_i, N_j) = 0 with
    lam12 = lam21, giving lam11 = -g(W1,W1)/2, lam22 = -g(W2,W2)/2,
    lam12 = -g(W1,W2)/2.  The pair is invariant under frame changes of
    {V1, V2}.
    """
    V1 = np.asarray(V1, dtype=float)
    V2 = np.asarray(V2, dtype=float)
    if screen.dim:
        cross = np.abs(screen.basis @ form.gram @ np.vstack([V1, V2]).T).max()
        if cross > 1e-8 * max(1.0, float(np.abs(V1).max()), float(np.abs(V2).max())):
            raise ValueError("V1, V2 must be orthogonal to the screen")
    w1, w2 = float(omega @ V1), float(omega @ V2)
    t1, t2 = float(theta @ V1), float(theta @ V2)
    D = t1 * w2 - w1 * t2
    scale = max(1.0, float(np.abs(omega).max()) * float(np.abs(V1).max()),
                float(np.abs(theta).max()) * float(np.abs(V2).max()))
    if abs(D) < 1e-10 * scale:
        raise ValueError("D = 0: {V1, V2} do not frame a valid complement")
    W1 = (w2 * V1 - w1 * V2) / D
    W2 = -(t2 * V1 - t1 * V2) / D
    lam11 = -0.5 * inner(form, W1, W1)
    lam22 = -0.5 * inner(form, W2, W2)
    lam12 = -0.5 * inner(form, W1, W2)
    N1 = lam11 * A + lam12 * B + W1
    N2 = lam12 * A + lam22 * B + W2
    return IsotropicTransversalPair(N1=N1, N2=N2,
                                    lam=np.array([[lam11, lam12], [lam12, lam22]]))


def h_P_residual(lck: LCKStructure, z) -> float:
    """Max transversal component of nabla_X Y over X, Y in {A, B}.

    On parallel-Lee charts with c != 0 this is the second fundamental
    form of the Lee/anti-Lee plane and must vanish; nabla_A A = 0 is part
    of the same bound since the full covariant derivatives are measured.
    """
    z = np.asarray(z, dtype=complex)
    fibre = second_foliation_fibre(lck, z)
    chart = lck.chart
    gamma = christoffel(chart, z)

    def Afield(p):
        return lee_data(lck, p).A

    def Bfield(p):
        return lee_data(lck, p).B

    worst = 0.0
    plane = fibre.tangent.basis
    q, _ = np.linalg.qr(plane.T)
    for X in (Afield, Bfield):
        for Y in (Afield, Bfield):
            nXY = covariant_derivative(chart, X, Y, z, gamma=gamma).real_coords()
            if abs(fibre.c) > NULL_C_TOL:
                # g-projection onto the plane, remainder is transversal
                coeffA = inner(fibre.form, nXY, fibre.tangent.basis[0]) / fibre.c
                coeffB = inner(fibre.form, nXY, fibre.tangent.basis[1]) / fibre.c
                resid = nXY - coeffA * fibre.tangent.basis[0] - coeffB * fibre.tangent.basis[1]
            else:
                resid = nXY - q @ (q.T @ nXY)
            worst = max(worst, float(np.abs(resid).max()))
    return worst


# ---------------------------------------------------------------------------
# complex submanifolds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexImmersion:
    """Holomorphic parametrization u in C^m -> z in C^n of a complex
    submanifold; `tangent` returns the n x m Jacobian d z / d u."""

    m: int
    chart_map: Callable[[np.ndarray], np.ndarray]
    tangent: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        if self.tangent is not None:
            return np.asarray(self.tangent(u), dtype=complex)
        h = 1e-5 * max(1.0, float(np.linalg.norm(u)))
        cols = []
        for a in range(self.m):
            e = np.zeros(self.m, dtype=complex)
            e[a] = 1.0
            d1 = (self.chart_map(u + h * e) - self.chart_map(u - h * e)) / (2 * h)
            d2 = (self.chart_map(u + h / 2 * e) - self.chart_map(u - h / 2 * e)) / h
            cols.append((4 * d2 - d1) / 3)
        return np.stack(cols, axis=1)


def _hermitian_orthonormal_frame(H: np.ndarray, cols: np.ndarray):
    """Gram-Schmidt for the (indefinite) Hermitian pairing 2 v^T H conj(w).

    Returns (frame columns, signs); raises if a pivot degenerates.
    """
    m = cols.shape[1]
    frame = []
    signs = []

    def pair(v, w):
        return 2.0 * complex(v @ H @ w.conj())

    for a in range(m):
        v = cols[:, a].astype(complex)
        for f, sgn in zip(frame, signs):
            v = v - sgn * pair(v, f) * f
        nrm = pair(v, v).real
        if abs(nrm) < 1e-10 * max(1.0, float(np.abs(v).max()) ** 2):
            raise ValueError("degenerate induced metric on the submanifold")
        frame.append(v / np.sqrt(abs(nrm)))
        signs.append(1.0 if nrm > 0 else -1.0)
    return np.stack(frame, axis=1), np.array(signs)


def complex_submanifold_mean_curvature(lck: LCKStructure,
                                       immersion: ComplexImmersion,
                                       u) -> tuple[float, float]:
    """Second-fundamental-form law and mean curvature of a complex
    submanifold.

    Returns (eq_residual, mean_offset): the first is the worst residual
    of h(JX, JY) + h(X, Y) + g(X, Y) Bperp over frame pairs, the second
    is |H + Bperp/2| for the mean curvature vector H.  Both vanish for
    complex submanifolds of an l.c.K. ambient space; H = 0 exactly when
    the submanifold is tangent to the Lee field.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    z = immersion.chart_map(u)
    chart = lck.chart
    gamma = christoffel(chart, z)
    data = lee_data(lck, z)
    H = chart.hermitian(z)
    jac = immersion.jacobian(u)
    frame_cols, signs = _hermitian_orthonormal_frame(H, jac)
    m = immersion.m

    # real orthonormal tangent frame {X_a, J X_a}
    reals = []
    for a in range(m):
        E = TangentVector.real(frame_cols[:, a])
        reals.extend([E, E.j()])

    G = chart.gram_full(z)

    def tan(vcomp: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vcomp)
        for a in range(m):
            for Xa in (reals[2 * a], reals[2 * a + 1]):
                coeff = (vcomp @ G @ Xa.components) * signs[a]
                out = out + coeff * Xa.components
        return out

    def nor(vcomp: np.ndarray) -> np.ndarray:
        return vcomp - tan(vcomp)

    # parameter-space frame fields (constant coefficients in u): the
    # second fundamental form is tensorial, so pointwise frames suffice;
    # derivatives along the submanifold use the pulled-back fields.
    ucoeff = np.linalg.lstsq(jac, frame_cols, rcond=None)[0]

    def h_of(Xi: TangentVector, Yi: TangentVector, ycoeff_u: np.ndarray,
             y_is_j: bool) -> np.ndarray:
        # field along the submanifold with constant u-coefficients
        def Yfield_param(t, direction):
            up = u + t * direction
            zp = immersion.chart_map(up)
            jp = immersion.jacobian(up)
            hol = jp @ ycoeff_u
            vec = TangentVector.real(1j * hol if y_is_j else hol)
            return vec.components

        # direction of X in parameter space
        xcoeff = np.linalg.lstsq(jac, Xi.hol, rcond=None)[0]
        h = 1e-5 * max(1.0, float(np.linalg.norm(u)))
        d1 = (Yfield_param(h, xcoeff) - Yfield_param(-h, xcoeff)) / (2 * h)
        d2 = (Yfield_param(h / 2, xcoeff) - Yfield_param(-h / 2, xcoeff)) / h
        dY = (4 * d2 - d1) / 3
        # X must also move the conjugate part: the parameter curve is
        # holomorphic, so the real curve velocity is X itself only when
        # X.hol lies in the column span of jac: guaranteed for tangent X.
        nabla = dY + np.einsum("abc,b,c->a", gamma.gamma, Xi.components,
                               Yi.components)
        return nor(nabla)

    Bperp = nor(data.B.components)
    eq_residual = 0.0
    for a in range(m):
        Ea = reals[2 * a]
        for b in range(m):
            Eb = reals[2 * b]
            yc = ucoeff[:, b]
            hXY = h_of(Ea, Eb, yc, False)
            hJXJY = h_of(Ea.j(), Eb.j(), yc, True)
            gXY = float((Ea.components @ G @ Eb.components).real)
            resid = hJXJY + hXY + gXY * Bperp
            eq_residual = max(eq_residual, float(np.abs(resid).max()))
            # mixed pairs: substituting (X, JY) into the law and using
            # J^2 = -1 gives h(X, JY) - h(JX, Y) + g(X, JY) Bperp = 0
            hXJY = h_of(Ea, Eb.j(), yc, True)
            hJXY = h_of(Ea.j(), Eb, yc, False)
            gXJY = float((Ea.components @ G @ Eb.j().components).real)
            resid = hXJY - hJXY + gXJY * Bperp
            eq_residual = max(eq_residual, float(np.abs(resid).max()))

    Hmean = np.zeros(2 * chart.n, dtype=complex)
    for a in range(m):
        Ea = reals[2 * a]
        yc = ucoeff[:, a]
        Hmean = Hmean + signs[a] * (h_of(Ea, Ea, yc, False)
                                    + h_of(Ea.j(), Ea.j(), yc, True))
    Hmean = Hmean / (2.0 * m)
    mean_offset = float(np.abs(Hmean + 0.5 * Bperp).max())
    return eq_residual, mean_offset
