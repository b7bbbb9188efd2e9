"""Rejection samplers for domain points and synthetic null-Lee data.

Every sampler takes a numpy Generator so runs are reproducible from a
seed.  Hopf samples keep a relative margin away from the null cone
(metric components blow up there) which also keeps difference stencils
inside the chart domain; half-space samples keep Im(w) bounded away
from the boundary for the same reason.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import CONE_MARGIN, HopfModel
from .semieuclid import FrameSubspace, SemiEuclideanForm

__all__ = [
    "sample_hopf", "sample_pseudosphere", "sample_tricerri", "sample_flat",
    "sample_unit_circle", "NullLeeConfig", "sample_null_config",
]

_MAX_TRIES = 10_000


def _complex_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def sample_hopf(model: HopfModel, rng: np.random.Generator,
                margin: float = CONE_MARGIN) -> np.ndarray:
    """One point of the selected region with |b(z,z)| > margin * |z|^2."""
    for _ in range(_MAX_TRIES):
        z = _complex_normal(rng, model.n)
        zz = float(np.vdot(z, z).real)
        if zz < 0.1:
            continue
        if model.sign * model.b(z) > margin * zz:
            return z
    raise RuntimeError("rejection sampling failed for the Hopf region")


def sample_pseudosphere(n: int, s: int, rng: np.random.Generator,
                        margin: float = CONE_MARGIN) -> np.ndarray:
    """One point with b(z, z) = 1 (unit pseudosphere)."""
    model = HopfModel(n=n, s=s, lam=0.5)
    z = sample_hopf(model, rng, margin=margin)
    return z / model.norm_sn(z)


def sample_tricerri(n: int, rng: np.random.Generator,
                    min_im: float = 0.2) -> np.ndarray:
    """One point (w, z^1..z^n) with Im(w) >= min_im."""
    w = rng.standard_normal() + 1j * (min_im + abs(rng.standard_normal()))
    return np.concatenate([[w], _complex_normal(rng, n)])


def sample_flat(n: int, rng: np.random.Generator) -> np.ndarray:
    return _complex_normal(rng, n)


def sample_unit_circle(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


@dataclass(frozen=True)
class NullLeeConfig:
    """Synthetic pointwise data with a null Lee vector in C^n_s.

    Real interleaved coordinates; B and A = -JB are null and mutually
    orthogonal, omega and theta are their metric duals, and the screen
    is the Euclidean orthocomplement of span{A, B} inside its own
    g-orthocomplement.
    """

    n: int
    s: int
    form: SemiEuclideanForm
    B: np.ndarray
    A: np.ndarray
    omega: np.ndarray
    theta: np.ndarray
    screen: FrameSubspace
    screen_perp_basis: np.ndarray  # basis rows of (screen)^perp, contains A, B


def _apply_J(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    out[0::2] = -v[1::2]
    out[1::2] = v[0::2]
    return out


def sample_null_config(n: int, s: int, rng: np.random.Generator) -> NullLeeConfig:
    """Random null-Lee configuration in real dimension 2n, index 2s."""
    if not 0 < s < n:
        raise ValueError("need 0 < s < n")
    form = SemiEuclideanForm.standard(2 * s, 2 * n)
    for _ in range(_MAX_TRIES):
        neg = rng.standard_normal(2 * s)
        pos = rng.standard_normal(2 * (n - s))
        nn, pn = np.linalg.norm(neg), np.linalg.norm(pos)
        if nn < 0.3 or pn < 0.3:
            continue
        B = np.concatenate([neg / nn, pos / pn])
        break
    else:
        raise RuntimeError("could not sample a null Lee vector")
    A = -_apply_J(B)
    omega = form.gram @ B
    theta = form.gram @ A
    plane = FrameSubspace.from_vectors(form, [A, B])
    # P-perp via kernel of the Gram constraints
    constraints = plane.basis @ form.gram
    _, sv, vt = np.linalg.svd(constraints, full_matrices=True)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1.0)))
    perp_rows = vt[rank:]
    # screen: Euclidean complement of span{A, B} inside P-perp
    q, _ = np.linalg.qr(plane.basis.T)
    proj = perp_rows - (perp_rows @ q) @ q.T
    _, sv2, vt2 = np.linalg.svd(proj, full_matrices=False)
    rank2 = int(np.sum(sv2 > 1e-10 * max(sv2[0], 1.0)))
    screen_rows = vt2[:rank2]
    screen = FrameSubspace.from_vectors(form, screen_rows) if rank2 \
        else FrameSubspace.zero(form)
    sperp_constraints = screen_rows @ form.gram if rank2 else np.zeros((0, 2 * n))
    _, sv3, vt3 = np.linalg.svd(sperp_constraints, full_matrices=True) \
        if rank2 else (None, np.zeros(0), np.eye(2 * n))
    rank3 = int(np.sum(sv3 > 1e-12 * max(sv3[0], 1.0))) if rank2 else 0
    sperp_rows = vt3[rank3:]
    return NullLeeConfig(n=n, s=s, form=form, B=B, A=A, omega=omega,
                         theta=theta, screen=screen,
                         screen_perp_basis=sperp_rows)


def sample_complement_vector(cfg: NullLeeConfig, rng: np.random.Generator) -> np.ndarray:
    """Random vector spanning a complement of the Lee line inside the
    orthocomplement of the first-foliation screen (which is 2-dimensional
    and contains B)."""
    # screen = Euclidean complement of B inside ker(omega)
    tangent_rows = _kernel(cfg.omega.reshape(1, -1), 2 * cfg.n)
    qB, _ = np.linalg.qr(cfg.B.reshape(-1, 1))
    proj = tangent_rows - (tangent_rows @ qB) @ qB.T
    _, sv, vt = np.linalg.svd(proj, full_matrices=False)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    screen_rows = vt[:rank]
    sperp = _kernel(screen_rows @ cfg.form.gram, 2 * cfg.n)
    for _ in range(_MAX_TRIES):
        coeff = rng.standard_normal(sperp.shape[0])
        V = coeff @ sperp
        wV = float(cfg.omega @ V)
        if abs(wV) > 0.1 * np.linalg.norm(V):
            return V
    raise RuntimeError("could not sample a complement vector")


def sample_pair_frame(cfg: NullLeeConfig, rng: np.random.Generator
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Random frame {V1, V2} of a complement of the plane inside
    S(P-perp)-perp, rejecting frames with small normalization
    determinant."""
    sperp = cfg.screen_perp_basis
    for _ in range(_MAX_TRIES):
        V1 = rng.standard_normal(sperp.shape[0]) @ sperp
        V2 = rng.standard_normal(sperp.shape[0]) @ sperp
        t1, w1 = float(cfg.theta @ V1), float(cfg.omega @ V1)
        t2, w2 = float(cfg.theta @ V2), float(cfg.omega @ V2)
        D = t1 * w2 - w1 * t2
        scale = max(np.linalg.norm(V1) * np.linalg.norm(V2), 1e-30)
        if abs(D) > 0.05 * scale:
            return V1, V2
    raise RuntimeError("could not sample a complement frame")


def _kernel(rows: np.ndarray, dim: int) -> np.ndarray:
    if rows.size == 0:
        return np.eye(dim)
    _, sv, vt = np.linalg.svd(np.atleast_2d(rows), full_matrices=True)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1.0)))
    return vt[rank:]
