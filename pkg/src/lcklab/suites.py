"""Named verification suites mapping onto the numbered statements.

Each suite draws its own sample from a per-point random generator and
returns one scalar residual, so the runner can parallelize over points
while keeping index-ordered (deterministic) aggregation.  Direction
"le" means the aggregated maximum must stay below tolerance; "ge" marks
witness suites whose aggregated minimum must exceed the threshold
(e.g. exhibiting a nonparallel Lee form).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cr as crmod
from . import foliations as fol
from .charts import TangentVector, christoffel, covariant_derivative, lie_bracket
from .lck import lee_data, lee_form_components, nabla_J_defect, parallel_lee_residual, weyl_connection
from .models import (
    HopfModel, cayley, deck_equivalent, eps_signs, fibration_split,
    flat_chart, gab_invariance_residual, hopf_chart, hopf_diffeo,
    hopf_diffeo_inv, retraction, submersion_isometry_residual,
    synthetic_null_structure, torus_pullback_isometry_residual, tricerri_chart,
)
from .report import RunConfig, SuiteResult, VerificationReport
from .sampling import (
    sample_complement_vector, sample_flat, sample_hopf, sample_null_config,
    sample_pair_frame, sample_pseudosphere, sample_tricerri, sample_unit_circle,
)
from .semieuclid import FrameSubspace, contains_span, inner, same_span, signature_of

__all__ = ["SUITES", "Suite", "suites_for", "run_config", "UsageError"]


class UsageError(ValueError):
    """Invalid configuration or suite selection."""


@dataclass(frozen=True)
class Suite:
    name: str
    anchor: str
    models: frozenset
    tolerance: Callable[[RunConfig], float]
    point_fn: Callable[[RunConfig, np.random.Generator], float]
    direction: str = "le"
    min_n: int = 1   # per-model dimension floors live in config validation

    def applicable(self, cfg: RunConfig) -> bool:
        return cfg.model in self.models and cfg.n >= self.min_n


def _hopf(cfg: RunConfig, region: str = "+") -> HopfModel:
    return HopfModel(n=cfg.n, s=cfg.s, lam=cfg.lam, region=region)


def _rand_real_vector(rng, n: int) -> TangentVector:
    return TangentVector.real(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _chart_point(cfg: RunConfig, rng):
    """Model-appropriate (lck, point) pair."""
    if cfg.model == "hopf":
        region = "+" if rng.uniform() < 0.5 else "-"
        model = _hopf(cfg, region)
        return hopf_chart(model), sample_hopf(model, rng)
    if cfg.model == "tricerri":
        return tricerri_chart(cfg.n, cfg.s), sample_tricerri(cfg.n, rng)
    if cfg.model == "flat":
        return flat_chart(cfg.n, cfg.s), sample_flat(cfg.n, rng)
    raise UsageError(f"suite has no chart for model {cfg.model!r}")


# ---------------------------------------------------------------------------
# point functions
# ---------------------------------------------------------------------------

def _pt_christoffel_oracle(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    cc = christoffel(lck.chart, z, derivatives="fd")
    scale = max(1.0, float(np.abs(cc.gamma).max()))
    return float(np.abs(cc.gamma - cc.solved).max()) / scale


def _pt_prop1_lee(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    data = lee_data(lck, z)
    a = model.a(z)
    expect_hol = -2.0 * a * z
    resid = abs(data.c - 4.0 * a)
    resid = max(resid, float(np.abs(data.B.hol - expect_hol).max()))
    # raising round trip: lowering B reproduces omega
    omega = lee_form_components(lck, z)
    lowered = lck.chart.gram_full(z) @ data.B.components
    resid = max(resid, float(np.abs(lowered - omega).max()))
    # theta/omega identities
    resid = max(resid, abs(complex(data.theta @ data.B.components)))
    resid = max(resid, abs(complex(data.theta @ data.A.components) - data.c))
    return resid


def _pt_prop2_lee(cfg, rng):
    lck = tricerri_chart(cfg.n, cfg.s)
    p = sample_tricerri(cfg.n, rng)
    data = lee_data(lck, p)
    expect = np.zeros(cfg.n + 1, dtype=complex)
    expect[0] = 1j * p[0].imag
    resid = abs(data.c - 1.0)
    return max(resid, float(np.abs(data.B.hol - expect).max()))


def _pt_parallel_lee(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    return parallel_lee_residual(lck, z)


def _pt_nonparallel_lee(cfg, rng):
    lck = tricerri_chart(cfg.n, cfg.s)
    p = sample_tricerri(cfg.n, rng)
    p[0] = p[0].real + 1j  # witness at Im(w) = 1
    return parallel_lee_residual(lck, p)


def _pt_prop2_nabla_b(cfg, rng):
    lck = tricerri_chart(cfg.n, cfg.s)
    p = sample_tricerri(cfg.n, rng)
    m = cfg.n + 1
    worst = 0.0
    Bf = lambda q: lee_data(lck, q).B
    for j in range(1, m):   # z-block frame fields only (coordinate 0 is w)
        X = TangentVector.complexified(np.eye(m)[j], np.zeros(m))
        out = covariant_derivative(lck.chart, X, Bf, p)
        expect = np.zeros(2 * m, dtype=complex)
        expect[j] = 0.5
        worst = max(worst, float(np.abs(out.components - expect).max()))
    return worst


def _pt_thm1_geodesic(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    fib = fol.first_foliation_fibre(lck, z)
    k = fib.tangent.dim
    coeffs = rng.standard_normal((2, k))
    X = coeffs[0] @ fib.tangent.basis
    Y = coeffs[1] @ fib.tangent.basis
    sfd = fol.gauss_weingarten(lck, fib, X, Y, fib.transversal.basis[0], z)
    return max(float(np.abs(sfd.h).max()), sfd.h_symmetry_residual)


def _pt_eq1_signature(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    fib = fol.first_foliation_fibre(lck, z)
    sig = signature_of(fib.form, fib.tangent)
    expect = 2 * cfg.s if region == "+" else 2 * cfg.s - 1
    return float(abs(sig.index - expect) + sig.null)


def _pt_eq8_transversal(cfg, rng):
    c = sample_null_config(cfg.n, cfg.s, rng)
    V = sample_complement_vector(c, rng)
    # first-foliation screen for the check
    tangent_rows = _null_tangent(c)
    screen = _null_screen(c, tangent_rows)
    N = fol.lightlike_transversal(c.form, c.omega, c.B, screen, V)
    resid = abs(inner(c.form, N, N))
    resid = max(resid, abs(float(c.omega @ N) - 1.0))
    # Lee line and transversal line span the screen orthocomplement
    if screen.dim:
        cross = np.abs(screen.basis @ c.form.gram @ N).max()
        resid = max(resid, float(cross))
    return resid


def _null_tangent(c) -> np.ndarray:
    from .sampling import _kernel
    return _kernel(c.omega.reshape(1, -1), 2 * c.n)


def _null_screen(c, tangent_rows) -> FrameSubspace:
    qB, _ = np.linalg.qr(c.B.reshape(-1, 1))
    proj = tangent_rows - (tangent_rows @ qB) @ qB.T
    _, sv, vt = np.linalg.svd(proj, full_matrices=False)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    return FrameSubspace.from_vectors(c.form, vt[:rank])


def _pt_eq5_invariance(cfg, rng):
    c = sample_null_config(cfg.n, cfg.s, rng)
    tangent_rows = _null_tangent(c)
    screen = _null_screen(c, tangent_rows)
    V = sample_complement_vector(c, rng)
    V2 = sample_complement_vector(c, rng)
    N = fol.lightlike_transversal(c.form, c.omega, c.B, screen, V)
    scale = rng.uniform(0.2, 5.0) * (1.0 if rng.uniform() < 0.5 else -1.0)
    Nscaled = fol.lightlike_transversal(c.form, c.omega, c.B, screen, scale * V)
    Nshift = fol.lightlike_transversal(c.form, c.omega, c.B, screen,
                                       V + rng.standard_normal() * c.B)
    Nother = fol.lightlike_transversal(c.form, c.omega, c.B, screen, V2)
    resid = float(np.abs(N - Nscaled).max())
    resid = max(resid, float(np.abs(N - Nshift).max()))
    return max(resid, float(np.abs(N - Nother).max()))


def _pt_thm4_integrability(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    return fol.integrability_residual(lck, z)


def _pt_thm4_plane_gram(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    fib = fol.second_foliation_fibre(lck, z)
    expect = fib.c * np.eye(2)
    return float(np.abs(fib.tangent.gram_restricted - expect).max())


def _pt_thm4_hp(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    resid = fol.h_P_residual(lck, z)
    # nabla_A A = 0 is part of the proof: check it in full, not just its
    # transversal part
    gamma = christoffel(lck.chart, z)
    Af = lambda p: lee_data(lck, p).A
    nAA = covariant_derivative(lck.chart, Af, Af, z, gamma=gamma)
    return max(resid, float(np.abs(nAA.components).max()))


def _pt_lemma6_pair(cfg, rng):
    c = sample_null_config(cfg.n, cfg.s, rng)
    V1, V2 = sample_pair_frame(c, rng)
    pair = fol.isotropic_transversal_pair(c.form, c.omega, c.theta, c.A, c.B,
                                          c.screen, V1, V2)
    resid = abs(float(c.theta @ pair.N1) - 1.0)
    resid = max(resid, abs(float(c.omega @ pair.N2) - 1.0))
    resid = max(resid, abs(float(c.theta @ pair.N2)))
    resid = max(resid, abs(float(c.omega @ pair.N1)))
    for u in (pair.N1, pair.N2):
        for v in (pair.N1, pair.N2):
            resid = max(resid, abs(inner(c.form, u, v)))
    if c.screen.dim:
        cross = np.abs(c.screen.basis @ c.form.gram @ np.vstack([pair.N1, pair.N2]).T)
        resid = max(resid, float(cross.max()))
    return resid


def _pt_lemma6_invariance(cfg, rng):
    c = sample_null_config(cfg.n, cfg.s, rng)
    V1, V2 = sample_pair_frame(c, rng)
    pair = fol.isotropic_transversal_pair(c.form, c.omega, c.theta, c.A, c.B,
                                          c.screen, V1, V2)
    for _ in range(50):
        f = rng.standard_normal((2, 2))
        if abs(np.linalg.det(f)) > 0.1:
            break
    W1 = f[0, 0] * V1 + f[0, 1] * V2
    W2 = f[1, 0] * V1 + f[1, 1] * V2
    other = fol.isotropic_transversal_pair(c.form, c.omega, c.theta, c.A, c.B,
                                           c.screen, W1, W2)
    return float(max(np.abs(pair.N1 - other.N1).max(),
                     np.abs(pair.N2 - other.N2).max()))


def _pt_screen_splits(cfg, rng):
    """Dimension and orthogonality bookkeeping of the null splittings."""
    c = sample_null_config(cfg.n, cfg.s, rng)
    tangent_rows = _null_tangent(c)
    screen = _null_screen(c, tangent_rows)
    resid = 0.0 if screen.dim == 2 * c.n - 2 else 1.0
    # screen orthogonal to the radical (the Lee line)
    resid = max(resid, float(np.abs(screen.basis @ c.form.gram @ c.B).max()))
    # span{B} + span{N_V} is the screen orthocomplement and meets trivially
    V = sample_complement_vector(c, rng)
    N = fol.lightlike_transversal(c.form, c.omega, c.B, screen, V)
    pairsp = FrameSubspace.from_vectors(c.form, [c.B, N])
    resid = max(resid, 0.0 if pairsp.dim == 2 else 1.0)
    full = FrameSubspace.from_vectors(c.form, np.vstack([screen.basis, c.B, N]))
    resid = max(resid, 0.0 if full.dim == 2 * c.n else 1.0)
    if cfg.n >= 3:
        # S(P-perp)-perp has rank 4 and contains the plane
        resid = max(resid, 0.0 if c.screen_perp_basis.shape[0] == 4 else 1.0)
        plane = FrameSubspace.from_vectors(c.form, [c.A, c.B])
        sperp = FrameSubspace.from_vectors(c.form, c.screen_perp_basis)
        resid = max(resid, 0.0 if contains_span(sperp, plane, 1e-9) else 1.0)
        V1, V2 = sample_pair_frame(c, rng)
        pair = fol.isotropic_transversal_pair(c.form, c.omega, c.theta, c.A,
                                              c.B, c.screen, V1, V2)
        rebuilt = FrameSubspace.from_vectors(
            c.form, np.vstack([c.A, c.B, pair.N1, pair.N2]))
        resid = max(resid, 0.0 if same_span(rebuilt, sperp, 1e-8) else 1.0)
    return resid


def _pt_eq18_mean_curvature(cfg, rng):
    model = _hopf(cfg, "+")
    lck = hopf_chart(model)
    n, s = cfg.n, cfg.s
    c0 = 0.3
    u = (0.9 + 0.6 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform())

    def offset_map(uu):
        z = np.full(n, c0, dtype=complex)
        z[-1] = uu[0]
        return z

    jac = np.zeros((n, 1), dtype=complex)
    jac[-1, 0] = 1.0
    offset = fol.ComplexImmersion(m=1, chart_map=offset_map, tangent=lambda uu: jac)
    eq_resid, mean_off = fol.complex_submanifold_mean_curvature(lck, offset, [u])

    def through_map(uu):
        z = np.zeros(n, dtype=complex)
        z[-1] = uu[0]
        return z

    through = fol.ComplexImmersion(m=1, chart_map=through_map, tangent=lambda uu: jac)
    _, mean_through = fol.complex_submanifold_mean_curvature(lck, through, [u])
    return max(eq_resid, mean_off, mean_through)


def _pt_eq20_nabla_j(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    X = _rand_real_vector(rng, lck.chart.n)
    Y = _rand_real_vector(rng, lck.chart.n)
    return float(np.abs(nabla_J_defect(lck, X, Y, z).components).max())


def _pt_weyl_dj(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    n = lck.chart.n
    X = _rand_real_vector(rng, n)
    Yv = _rand_real_vector(rng, n)
    gamma = christoffel(lck.chart, z)
    DJY = weyl_connection(lck, X, Yv.j(), z, gamma=gamma)
    JDY = weyl_connection(lck, X, Yv, z, gamma=gamma).j()
    return float(np.abs(DJY.components - JDY.components).max())


def _pt_connection_identities(cfg, rng):
    lck, z = _chart_point(cfg, rng)
    chart = lck.chart
    n = chart.n
    gamma = christoffel(chart, z)
    resid = max(gamma.symmetry_residual(), gamma.conjugation_residual())
    X = _rand_real_vector(rng, n)
    Y = _rand_real_vector(rng, n)
    W = _rand_real_vector(rng, n)
    # metric compatibility X(g(Y, W)) = g(nabla_X Y, W) + g(Y, nabla_X W)
    from .charts import wirtinger_derivative, fd_step

    def gYW(p):
        return np.array([Y.components @ chart.gram_full(p) @ W.components])

    h = fd_step(z)
    d_dz, d_dzb = wirtinger_derivative(gYW, z, h)
    df = np.concatenate([d_dz.ravel(), d_dzb.ravel()])
    lhs = complex(df @ X.components)
    nXY = covariant_derivative(chart, X, Y, z, gamma=gamma)
    nXW = covariant_derivative(chart, X, W, z, gamma=gamma)
    G = chart.gram_full(z)
    rhs = complex(nXY.components @ G @ W.components + Y.components @ G @ nXW.components)
    resid = max(resid, abs(lhs - rhs))
    # torsion on linear (z-dependent) fields
    M1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    M2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    F1 = lambda p: TangentVector.real(M1 @ p)
    F2 = lambda p: TangentVector.real(M2 @ p)
    tors = covariant_derivative(chart, F1, F2, z, gamma=gamma).components \
        - covariant_derivative(chart, F2, F1, z, gamma=gamma).components \
        - lie_bracket(F1, F2, z).components
    return max(resid, float(np.abs(tors).max()))


def _pt_deck_pullback(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    H = lck.chart.hermitian(z)
    Hl = lck.chart.hermitian(model.lam * z)
    return float(np.abs(Hl * model.lam ** 2 - H).max())


def _pt_diffeo_roundtrip(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    z = sample_hopf(model, rng)
    zeta, w = hopf_diffeo(model, z)
    back = hopf_diffeo_inv(model, zeta, w)
    m = deck_equivalent(model, z, back)
    if m is None:
        return 1.0
    resid = float(np.abs(back - model.lam ** m * z).max())
    # forward round trip on the product side
    zeta2, w2 = hopf_diffeo(model, back)
    resid = max(resid, float(np.abs(zeta2 - zeta).max()), abs(w2 - w))
    resid = max(resid, abs(abs(w) - 1.0), abs(model.b(zeta) - model.sign))
    return resid


def _pt_torus_isometry(cfg, rng):
    region = "+" if rng.uniform() < 0.5 else "-"
    model = _hopf(cfg, region)
    z = sample_hopf(model, rng)
    t = complex(rng.standard_normal() * 0.5, rng.standard_normal() * 2.0)
    return torus_pullback_isometry_residual(model, t, z)


def _pt_submersion(cfg, rng):
    model = _hopf(cfg, "+")
    z = sample_pseudosphere(cfg.n, cfg.s, rng)
    V0, H0 = fibration_split(model, z)
    coeffs = rng.standard_normal((2, H0.dim))
    u = TangentVector.from_real_coords(coeffs[0] @ H0.basis)
    v = TangentVector.from_real_coords(coeffs[1] @ H0.basis)
    return submersion_isometry_residual(model, z, u, v)


def _pt_fibration_split(cfg, rng):
    model = _hopf(cfg, "+")
    z = sample_pseudosphere(cfg.n, cfg.s, rng)
    V0, H0 = fibration_split(model, z)
    resid = float(np.abs(V0.gram_restricted - 4.0 * np.eye(2)).max())
    resid = max(resid, 0.0 if V0.dim + H0.dim == 2 * cfg.n else 1.0)
    form = hopf_chart(model).chart.real_form(z)
    sig = signature_of(form, H0)
    expect = (2 * (cfg.n - cfg.s) - 2, 2 * cfg.s, 0)
    resid = max(resid, 0.0 if sig.as_tuple() == expect else 1.0)
    return resid


def _pt_retraction(cfg, rng):
    model = _hopf(cfg, "+")
    z = sample_hopf(model, rng)
    t = rng.uniform()
    zt = retraction(model, t, z)
    resid = max(0.0, model.b(z) - model.b(zt))
    resid = max(resid, float(np.abs(retraction(model, 0.0, z) - z).max()))
    resid = max(resid, float(np.abs(retraction(model, 1.0, z)[:cfg.s]).max()))
    return resid


def _pt_leaf_space(cfg, rng):
    model = _hopf(cfg, "+")
    z = sample_hopf(model, rng)
    lab = crmod.leaf_label(model, z)
    resid = 0.0
    for m in range(-3, 4):
        lab_m = crmod.leaf_label(model, model.lam ** m * z)
        resid = max(resid, abs(lab_m.w - lab.w))
        if not lab.same_leaf(lab_m):
            resid = max(resid, 1.0)
    other = crmod.leaf_label(model, np.exp(0.1) * z)
    if lab.same_leaf(other):
        resid = max(resid, 1.0)
    return resid


def _pt_leaf_radius(cfg, rng):
    model = _hopf(cfg, "+")
    w = sample_unit_circle(rng)
    arg = float(np.angle(w)) % (2 * np.pi)
    a = arg / (2 * np.pi * np.log(model.lam))
    if min(a - np.floor(a), np.ceil(a) - a) < 1e-3:
        w = complex(np.exp(1j * (arg + 0.5)))  # nudge off the excluded leaf
        arg = float(np.angle(w)) % (2 * np.pi)
        a = arg / (2 * np.pi * np.log(model.lam))
    label = crmod.label_from_w(model, w)
    # independent oracle: deck-reduce the sample-point norm into the annulus
    x = float(np.exp(arg / (2 * np.pi)))
    while x >= 1.0:
        x *= model.lam
    while x <= model.lam:
        x /= model.lam
    resid = abs(x - label.chart_radius)
    zetas = [sample_pseudosphere(cfg.n, cfg.s, rng) for _ in range(3)]
    return max(resid, crmod.leaf_chart_image_check(model, w, zetas))


def _pt_cayley_boundary(cfg, rng):
    model = _hopf(cfg, "+")
    z = sample_pseudosphere(cfg.n, cfg.s, rng)
    if abs(z[-1] + 1.0) < 1e-6:   # dodge the transform's pole
        z = -z
    point = cayley(cfg.s, 1.0, z)
    return max(abs(point.residual), crmod.cayley_cr_residual(model, 1.0, z))


def _pt_levi_signature(cfg, rng):
    sig = crmod.siegel_levi_signature(cfg.n, cfg.s)
    return 0.0 if sig == (cfg.s, cfg.n - cfg.s - 1) else 1.0


def _pt_levi_hopf(cfg, rng):
    model = _hopf(cfg, "+")
    lck = hopf_chart(model)
    z = sample_pseudosphere(cfg.n, cfg.s, rng)
    fib = crmod.cr_fibre(lck, z)
    worst = 0.0
    for k in range(fib.t10.shape[1]):
        worst = max(worst, abs(crmod.levi_form(lck, z, fib.t10[:, k], fib.t10[:, k])))
    return worst


def _pt_prop4_null(cfg, rng):
    c = sample_null_config(cfg.n, cfg.s, rng)
    lck = synthetic_null_structure(cfg.n, cfg.s,
                                   B_hol=c.B[0::2] + 1j * c.B[1::2])
    z = np.zeros(cfg.n, dtype=complex)
    data = lee_data(lck, z)
    Z = data.B.hol + 1j * data.A.hol
    resid = abs(complex(lck.lee_hol(z) @ Z))        # Z is type (1,0) in ker omega
    resid = max(resid, abs(crmod.levi_form(lck, z, Z, Z)))
    fib = fol.first_foliation_fibre(lck, z)
    plane = FrameSubspace.from_vectors(fib.form, [data.A.real_coords(),
                                                  data.B.real_coords()])
    resid = max(resid, 0.0 if contains_span(fib.tangent, plane, 1e-9) else 1.0)
    if cfg.n == 2:
        cfib = crmod.cr_fibre(lck, z)
        resid = max(resid, 0.0 if same_span(cfib.levi_H, plane, 1e-9) else 1.0)
        resid = max(resid, 0.0 if crmod.levi_flat_detector(lck, z) else 1.0)
    return resid


def _pt_cr_tangential(cfg, rng):
    model = _hopf(cfg, "+")
    lck = hopf_chart(model)
    z = sample_hopf(model, rng)
    coeffs = rng.standard_normal(cfg.n) + 1j * rng.standard_normal(cfg.n)

    def holo(p):
        return np.prod(p) + coeffs @ p

    resid = crmod.tangential_cr_residual(lck, z, holo)
    eps = eps_signs(cfg.n, cfg.s)

    def leaf_constant(p):
        return abs(np.sum(eps * np.abs(p) ** 2))

    return max(resid, crmod.tangential_cr_residual(lck, z, leaf_constant))


def _pt_gab_invariance(cfg, rng):
    p = sample_tricerri(cfg.n, rng)
    alpha = 1.0 + 3.0 * rng.uniform()
    beta = np.exp(2j * np.pi * rng.uniform()) / np.sqrt(alpha)
    return gab_invariance_residual(cfg.n, cfg.s, alpha, beta, p[0], p[1:])


def _fixed(value: float) -> Callable[[RunConfig], float]:
    return lambda cfg: value


SUITES: tuple[Suite, ...] = (
    Suite("christoffel-oracle", "Propositions 1-2 (proofs)",
          frozenset({"hopf", "tricerri", "flat"}), lambda c: c.tol_fd,
          _pt_christoffel_oracle),
    Suite("prop1-lee-field", "Proposition 1", frozenset({"hopf"}),
          _fixed(1e-10), _pt_prop1_lee),
    Suite("prop2-lee-field", "Proposition 2", frozenset({"tricerri"}),
          _fixed(1e-10), _pt_prop2_lee),
    Suite("parallel-lee", "Proposition 1", frozenset({"hopf", "flat"}),
          lambda c: c.tol_fd, _pt_parallel_lee),
    Suite("nonparallel-lee", "Proposition 2", frozenset({"tricerri"}),
          _fixed(0.01), _pt_nonparallel_lee, direction="ge"),
    Suite("prop2-nabla-b", "Proposition 2 (proof)", frozenset({"tricerri"}),
          lambda c: c.tol_fd, _pt_prop2_nabla_b),
    Suite("thm1-totally-geodesic", "Theorem 1", frozenset({"hopf"}),
          _fixed(1e-5), _pt_thm1_geodesic),
    Suite("eq1-leaf-signature", "Equation (1)", frozenset({"hopf"}),
          _fixed(0.0), _pt_eq1_signature),
    Suite("eq8-transversal", "Equation (8)", frozenset({"synthetic-null"}),
          _fixed(1e-10), _pt_eq8_transversal),
    Suite("eq5-nv-invariance", "Lemma 1", frozenset({"synthetic-null"}),
          _fixed(1e-9), _pt_eq5_invariance),
    Suite("screen-splits", "Equations (3)-(9), (21)-(26)",
          frozenset({"synthetic-null"}), _fixed(1e-9), _pt_screen_splits),
    Suite("thm4-integrability", "Theorem 4", frozenset({"hopf", "tricerri"}),
          _fixed(1e-5), _pt_thm4_integrability),
    Suite("thm4-plane-gram", "Theorem 4", frozenset({"hopf", "tricerri"}),
          lambda c: c.tol_analytic, _pt_thm4_plane_gram),
    Suite("thm4-hp", "Theorem 4", frozenset({"hopf"}), _fixed(1e-5),
          _pt_thm4_hp),
    Suite("lemma6-pair", "Lemma 6", frozenset({"synthetic-null"}),
          _fixed(1e-10), _pt_lemma6_pair, min_n=3),
    Suite("lemma6-invariance", "Lemma 6", frozenset({"synthetic-null"}),
          _fixed(1e-9), _pt_lemma6_invariance, min_n=3),
    Suite("eq18-mean-curvature", "Proposition 3 / Equation (18)",
          frozenset({"hopf"}), _fixed(1e-5), _pt_eq18_mean_curvature),
    Suite("eq20-nabla-j", "Equation (20)",
          frozenset({"hopf", "tricerri", "flat"}), lambda c: c.tol_fd,
          _pt_eq20_nabla_j),
    Suite("weyl-dj", "Weyl connection", frozenset({"hopf", "tricerri", "flat"}),
          lambda c: c.tol_fd, _pt_weyl_dj),
    Suite("connection-identities", "Levi-Civita connection",
          frozenset({"hopf", "tricerri", "flat"}), lambda c: c.tol_fd,
          _pt_connection_identities),
    Suite("thm2-deck-pullback", "Theorem 2", frozenset({"hopf"}),
          _fixed(1e-12), _pt_deck_pullback),
    Suite("hopf-diffeo-roundtrip", "Theorem 2", frozenset({"hopf"}),
          _fixed(1e-9), _pt_diffeo_roundtrip),
    Suite("torus-isometry", "Lemma 4", frozenset({"hopf"}), _fixed(1e-12),
          _pt_torus_isometry),
    Suite("submersion-fibre-invariance", "Equation (17)", frozenset({"hopf"}),
          lambda c: c.tol_fd, _pt_submersion),
    Suite("fibration-split", "Lemma 3", frozenset({"hopf"}), _fixed(1e-9),
          _pt_fibration_split),
    Suite("retraction-monotonicity", "Theorem 3 (proof)", frozenset({"hopf"}),
          _fixed(1e-12), _pt_retraction),
    Suite("thm5-leaf-space", "Theorem 5 / Equation (28)", frozenset({"hopf"}),
          _fixed(1e-9), _pt_leaf_space),
    Suite("lemma7-leaf-radius", "Lemma 7", frozenset({"hopf"}), _fixed(1e-9),
          _pt_leaf_radius),
    Suite("cayley-boundary", "Cayley transform", frozenset({"hopf"}),
          _fixed(1e-9), _pt_cayley_boundary),
    Suite("levi-signature", "Theorem 5 (proof)", frozenset({"hopf"}),
          _fixed(0.0), _pt_levi_signature),
    # witness threshold sits three decades above the flatness cutoff; the
    # raw Levi value decays with the sample's Euclidean distance from the
    # cone, so the sharp 0.1 bound is asserted at a pinned point in tests
    Suite("levi-hopf-leaf", "Levi form", frozenset({"hopf"}), _fixed(1e-3),
          _pt_levi_hopf, direction="ge"),
    Suite("prop4-null-leaf", "Proposition 4", frozenset({"synthetic-null"}),
          _fixed(1e-10), _pt_prop4_null),
    Suite("cr-tangential", "Tangential CR operator", frozenset({"hopf"}),
          _fixed(1e-8), _pt_cr_tangential),
    Suite("gab-invariance", "Proposition 2", frozenset({"tricerri"}),
          _fixed(1e-12), _pt_gab_invariance),
)

_BY_NAME = {s.name: s for s in SUITES}


def suites_for(cfg: RunConfig) -> tuple[Suite, ...]:
    """Resolve the configured suite names against the registry."""
    if len(cfg.suites) == 1 and cfg.suites[0] == "all":
        chosen = tuple(s for s in SUITES if s.applicable(cfg))
        if not chosen:
            raise UsageError(f"no suites applicable to model {cfg.model!r}")
        return chosen
    out = []
    for name in cfg.suites:
        if name not in _BY_NAME:
            raise UsageError(f"unknown suite {name!r}")
        suite = _BY_NAME[name]
        if not suite.applicable(cfg):
            raise UsageError(
                f"suite {name!r} is not applicable to model={cfg.model} n={cfg.n}")
        out.append(suite)
    return tuple(out)


def _validate(cfg: RunConfig) -> None:
    if cfg.model not in ("hopf", "flat", "tricerri", "synthetic-null"):
        raise UsageError(f"unknown model {cfg.model!r}")
    if cfg.points < 1:
        raise UsageError("points must be >= 1")
    if cfg.tol_analytic <= 0 or cfg.tol_fd <= 0:
        raise UsageError("tolerances must be positive")
    if cfg.threads < 1:
        raise UsageError("threads must be >= 1")
    if cfg.model == "hopf":
        if cfg.n < 2 or not 0 < cfg.s < cfg.n:
            raise UsageError("hopf model needs n >= 2 and 0 < s < n")
        if not 0.0 < cfg.lam < 1.0:
            raise UsageError("hopf model needs 0 < lambda < 1")
    if cfg.model == "tricerri" and not (cfg.n >= 1 and 0 <= cfg.s < cfg.n):
        raise UsageError("tricerri model needs n >= 1 and 0 <= s < n")
    if cfg.model == "synthetic-null" and not 0 < cfg.s < cfg.n:
        raise UsageError("synthetic-null model needs 0 < s < n")
    if cfg.model == "flat" and not 0 <= cfg.s <= cfg.n:
        raise UsageError("flat model needs 0 <= s <= n")


def _run_suite(cfg: RunConfig, suite: Suite, suite_idx: int) -> SuiteResult:
    tol = float(suite.tolerance(cfg))

    def one(i: int) -> float:
        rng = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(suite_idx, i)))
        return float(suite.point_fn(cfg, rng))

    try:
        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                residuals = list(pool.map(one, range(cfg.points)))
        else:
            residuals = [one(i) for i in range(cfg.points)]
    except Exception as exc:  # suite runtime error: recorded, not fatal
        return SuiteResult(name=suite.name, anchor=suite.anchor, points=0,
                           max_residual=float("nan"), tolerance=tol,
                           direction=suite.direction, verdict="error",
                           error=f"{type(exc).__name__}: {exc}")
    if suite.direction == "le":
        agg = max(residuals)
        verdict = "pass" if agg <= tol else "fail"
    else:
        agg = min(residuals)
        verdict = "pass" if agg >= tol else "fail"
    return SuiteResult(name=suite.name, anchor=suite.anchor, points=cfg.points,
                       max_residual=agg, tolerance=tol,
                       direction=suite.direction, verdict=verdict)


def run_config(cfg: RunConfig) -> VerificationReport:
    """Execute the configured suites and assemble the report."""
    _validate(cfg)
    chosen = suites_for(cfg)
    index_of = {s.name: i for i, s in enumerate(SUITES)}
    results = tuple(_run_suite(cfg, s, index_of[s.name]) for s in chosen)
    expanded = RunConfig(model=cfg.model, n=cfg.n, s=cfg.s, lam=cfg.lam,
                         points=cfg.points, tol_analytic=cfg.tol_analytic,
                         tol_fd=cfg.tol_fd, seed=cfg.seed,
                         suites=tuple(s.name for s in chosen),
                         threads=cfg.threads)
    return VerificationReport(schema=1, config=expanded, results=results)
