"""Locally conformal Kahler apparatus over a metric chart.

Bundles a chart with its Lee form and derives the pointwise data the
foliation and CR layers consume: Lee field B (metric dual of the Lee
form), anti-Lee field A = -JB, anti-Lee form theta = omega o J, Kahler
2-form Omega(X, Y) = g(X, JY) and the causal character c = g(B, B).
Also implements the Weyl connection shift, the closed-form identity for
(nabla_X J)Y and the parallelism residual of the Lee form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .charts import (
    ConnectionCoefficients,
    MetricChart,
    TangentVector,
    _as_field,
    christoffel,
    covariant_derivative,
    fd_step,
    wirtinger_derivative,
)

__all__ = ["LCKStructure", "LeeData", "lee_data", "weyl_connection",
           "nabla_J_defect", "parallel_lee_residual", "lee_form_components"]

SINGULAR_LEE_TOL = 1e-8  # Euclidean threshold below which B counts as singular


@dataclass(frozen=True)
class LCKStructure:
    """Chart plus Lee form; the complex structure acts as J Z_j = i Z_j.

    lee_form_eval(z) returns the n holomorphic components (omega(Z_j))_j;
    the antiholomorphic components are their conjugates since omega is a
    real 1-form.  conformal_factor_eval, when present, is a local f with
    omega = df.  parallel_lee marks charts whose Lee form is parallel, on
    which c is a constant worth asserting.
    """

    chart: MetricChart
    lee_form_eval: Callable[[np.ndarray], np.ndarray]
    conformal_factor_eval: Optional[Callable[[np.ndarray], float]] = None
    parallel_lee: bool = False
    name: str = "lck"

    @property
    def n(self) -> int:
        return self.chart.n

    def lee_hol(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.lee_form_eval(np.asarray(z, dtype=complex)), dtype=complex)


def lee_form_components(lck: LCKStructure, z: np.ndarray) -> np.ndarray:
    """Full 2n frame components (omega(Z_A))_A of the Lee form."""
    hol = lck.lee_hol(z)
    return np.concatenate([hol, hol.conj()])


def eval_form(components: np.ndarray, v: TangentVector) -> complex:
    return complex(np.asarray(components) @ v.components)


@dataclass(frozen=True)
class LeeData:
    """Pointwise Lee apparatus at z."""

    point: np.ndarray
    B: TangentVector
    A: TangentVector
    theta: np.ndarray   # frame components of the anti-Lee form
    Omega: np.ndarray   # frame components Omega_{AB} of the Kahler 2-form
    c: float            # g(B, B)

    @property
    def is_null(self) -> bool:
        return abs(self.c) < 1e-10 * max(1.0, self.B.norm() ** 2)


def lee_data(lck: LCKStructure, z: np.ndarray) -> LeeData:
    """Raise the Lee form and assemble A, theta, Omega and c."""
    z = np.asarray(z, dtype=complex)
    chart = lck.chart
    n = chart.n
    omega = lee_form_components(lck, z)
    G = chart.gram_full(z)
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        raise np.linalg.LinAlgError(f"metric Gram singular at {z}")
    B = TangentVector.from_components(np.linalg.solve(G, omega))
    A = -1.0 * B.j()                      # A = -J B
    theta = G @ A.components              # theta(X) = g(X, A)
    H = chart.hermitian(z)
    Om = np.zeros((2 * n, 2 * n), dtype=complex)
    Om[:n, n:] = -1j * H
    Om[n:, :n] = 1j * H.conj()
    c = float((omega @ B.components).real)
    return LeeData(point=z, B=B, A=A, theta=theta, Omega=Om, c=c)


def lee_field(lck: LCKStructure) -> Callable[[np.ndarray], TangentVector]:
    """The Lee field as a vector field."""
    return lambda z: lee_data(lck, z).B


def anti_lee_field(lck: LCKStructure) -> Callable[[np.ndarray], TangentVector]:
    return lambda z: lee_data(lck, z).A


def weyl_connection(lck: LCKStructure, X, Y, z: np.ndarray,
                    gamma: ConnectionCoefficients | None = None) -> TangentVector:
    """D_X Y = nabla_X Y - (1/2){omega(X) Y + omega(Y) X - g(X,Y) B}."""
    z = np.asarray(z, dtype=complex)
    base = covariant_derivative(lck.chart, X, Y, z, gamma=gamma)
    Xv, Yv = _as_field(X)(z), _as_field(Y)(z)
    data = lee_data(lck, z)
    omega = lee_form_components(lck, z)
    wX, wY = eval_form(omega, Xv), eval_form(omega, Yv)
    gXY = Xv.components @ lck.chart.gram_full(z) @ Yv.components
    shift = wX * Yv.components + wY * Xv.components - gXY * data.B.components
    return TangentVector.from_components(base.components - 0.5 * shift)


def nabla_J_defect(lck: LCKStructure, X, Y, z: np.ndarray,
                   gamma: ConnectionCoefficients | None = None) -> TangentVector:
    """Defect of the closed-form expression for (nabla_X J) Y.

    Returns (nabla_X(JY) - J nabla_X Y)
      - (1/2){theta(Y) X - omega(Y) JX - g(X,Y) A - Omega(X,Y) B};
    the residual vanishes on any l.c.K. chart.
    """
    z = np.asarray(z, dtype=complex)
    chart = lck.chart
    if gamma is None:
        gamma = christoffel(chart, z)
    Xf, Yf = _as_field(X), _as_field(Y)
    JY = Yf(z).j() if isinstance(Y, TangentVector) else (lambda p: Yf(p).j())
    lhs = covariant_derivative(chart, X, JY, z, gamma=gamma) \
        - covariant_derivative(chart, X, Y, z, gamma=gamma).j()
    Xv, Yv = Xf(z), Yf(z)
    data = lee_data(lck, z)
    omega = lee_form_components(lck, z)
    thY = eval_form(data.theta, Yv)
    wY = eval_form(omega, Yv)
    gXY = Xv.components @ chart.gram_full(z) @ Yv.components
    OmXY = Xv.components @ data.Omega @ Yv.components
    rhs = 0.5 * (thY * Xv.components - wY * Xv.j().components
                 - gXY * data.A.components - OmXY * data.B.components)
    return TangentVector.from_components(lhs.components - rhs)


def parallel_lee_residual(lck: LCKStructure, z: np.ndarray,
                          gamma: ConnectionCoefficients | None = None) -> float:
    """max_{A,B} |(nabla_{Z_A} omega)(Z_B)| over the coordinate frame.

    (nabla_X omega)(Y) = X(omega(Y)) - omega(nabla_X Y); for frame fields
    the second term contracts the connection coefficients with omega.
    """
    z = np.asarray(z, dtype=complex)
    chart = lck.chart
    if gamma is None:
        gamma = christoffel(chart, z)
    h = fd_step(z)
    d_dz, d_dzb = wirtinger_derivative(lambda p: lee_form_components(lck, p), z, h)
    grad = np.vstack([d_dz, d_dzb])             # grad[A, B] = Z_A(omega_B)
    omega = lee_form_components(lck, z)
    contracted = np.einsum("cab,c->ab", gamma.gamma, omega)
    return float(np.abs(grad - contracted).max())
