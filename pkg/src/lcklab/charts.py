"""Metric charts on complex coordinate domains.

A chart carries the Hermitian component matrix g_{j kbar}(z) of a
semi-Riemannian metric in the complexified coordinate frame
{Z_1..Z_n, Zbar_1..Zbar_n} (Z_j = d/dz^j).  Levi-Civita connection
coefficients are solved from the Koszul identity

    2 g_{AD} Gamma^A_{BC} = Z_B(g_{CD}) + Z_C(g_{BD}) - Z_D(g_{BC})

with indices A,B,C,D running over both holomorphic and antiholomorphic
slots.  Metric derivatives come from an analytic evaluator when the
chart supplies one, otherwise from Richardson-extrapolated central
differences, so every closed-form quantity has a finite-difference
oracle.

Conventions
-----------
* A complexified tangent vector is a pair (hol, antihol) of n complex
  component arrays; real vectors have antihol = conj(hol).
* Real coordinates interleave: (x_1, y_1, ..., x_n, y_n) with
  z^j = x_j + i y_j, so d/dx_j = Z_j + Zbar_j and d/dy_j = i(Z_j - Zbar_j).
* Index order in Gamma[A, B, C] and all frame-indexed arrays:
  0..n-1 holomorphic, n..2n-1 antiholomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .semieuclid import SemiEuclideanForm

__all__ = [
    "MetricChart",
    "TangentVector",
    "ConnectionCoefficients",
    "ChartDomainError",
    "fd_step",
    "wirtinger_derivative",
    "christoffel",
    "covariant_derivative",
    "gradient",
    "lie_bracket",
    "exterior_derivative_1form",
    "exterior_derivative_2form",
    "conformal_connection_shift",
    "metric_inner",
    "kahler_form",
]

FD_STEP_BASE = 1e-5  # relative central-difference step


class ChartDomainError(ValueError):
    """Point (or its difference stencil) leaves the chart domain."""


class SingularMetricError(np.linalg.LinAlgError):
    """Metric Gram matrix is singular at the evaluation point."""


# ---------------------------------------------------------------------------
# tangent vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentVector:
    """Complexified tangent vector in the frame {Z_j, Zbar_j}."""

    hol: np.ndarray
    antihol: np.ndarray

    @classmethod
    def real(cls, hol) -> "TangentVector":
        h = np.asarray(hol, dtype=complex)
        return cls(hol=h, antihol=h.conj())

    @classmethod
    def complexified(cls, hol, antihol) -> "TangentVector":
        return cls(hol=np.asarray(hol, dtype=complex),
                   antihol=np.asarray(antihol, dtype=complex))

    @classmethod
    def from_components(cls, comps) -> "TangentVector":
        comps = np.asarray(comps, dtype=complex)
        n = comps.size // 2
        return cls(hol=comps[:n], antihol=comps[n:])

    @classmethod
    def from_real_coords(cls, x) -> "TangentVector":
        """Interleaved real coordinates (x_1, y_1, ...) to a real vector."""
        x = np.asarray(x, dtype=float)
        return cls.real(x[0::2] + 1j * x[1::2])

    @property
    def n(self) -> int:
        return self.hol.size

    @property
    def components(self) -> np.ndarray:
        return np.concatenate([self.hol, self.antihol])

    @property
    def is_real(self) -> bool:
        scale = max(1.0, float(np.abs(self.components).max()))
        return bool(np.abs(self.antihol - self.hol.conj()).max() <= 1e-12 * scale)

    def real_coords(self) -> np.ndarray:
        """Interleaved real coordinates; only meaningful for real vectors."""
        if not self.is_real:
            raise ValueError("vector is not real")
        out = np.empty(2 * self.n)
        out[0::2] = self.hol.real
        out[1::2] = self.hol.imag
        return out

    def j(self) -> "TangentVector":
        """Apply the standard complex structure: J Z_j = i Z_j."""
        return TangentVector(hol=1j * self.hol, antihol=-1j * self.antihol)

    def conj(self) -> "TangentVector":
        return TangentVector(hol=self.antihol.conj(), antihol=self.hol.conj())

    def norm(self) -> float:
        """Euclidean norm of the component vector (not the metric norm)."""
        return float(np.linalg.norm(self.components))

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.hol + other.hol, self.antihol + other.antihol)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.hol - other.hol, self.antihol - other.antihol)

    def __mul__(self, c) -> "TangentVector":
        return TangentVector(c * self.hol, c * self.antihol)

    __rmul__ = __mul__

    def __neg__(self) -> "TangentVector":
        return TangentVector(-self.hol, -self.antihol)


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricChart:
    """Hermitian metric chart on a domain in C^n.

    metric_eval(z) returns the n x n Hermitian matrix H with
    H[j, k] = g(Z_j, Zbar_k).  metric_deriv(z), when present, returns
    (dH_dz, dH_dzbar) with dH_dz[l, j, k] = dH[j, k]/dz^l.
    christoffel_analytic(z), when present, returns the full (2n, 2n, 2n)
    coefficient array in the frame-index convention of this module.
    """

    n: int
    s: int
    metric_eval: Callable[[np.ndarray], np.ndarray]
    domain_pred: Callable[[np.ndarray], bool]
    metric_deriv: Optional[Callable[[np.ndarray], tuple]] = None
    christoffel_analytic: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "chart"

    def hermitian(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.metric_eval(np.asarray(z, dtype=complex)), dtype=complex)

    def gram_full(self, z: np.ndarray) -> np.ndarray:
        """Complexified 2n x 2n Gram matrix [[0, H], [conj(H), 0]]."""
        H = self.hermitian(z)
        n = self.n
        G = np.zeros((2 * n, 2 * n), dtype=complex)
        G[:n, n:] = H
        G[n:, :n] = H.conj()
        return G

    def real_gram(self, z: np.ndarray) -> np.ndarray:
        """Real 2n x 2n Gram in interleaved coordinates (x_1, y_1, ...)."""
        H = self.hermitian(z)
        n = self.n
        G = np.empty((2 * n, 2 * n))
        re, im = 2.0 * H.real, 2.0 * H.imag
        G[0::2, 0::2] = re
        G[1::2, 1::2] = re
        G[0::2, 1::2] = im
        G[1::2, 0::2] = -im
        return G

    def real_form(self, z: np.ndarray) -> SemiEuclideanForm:
        """Pointwise SemiEuclideanForm of signature (2(n-s), 2s)."""
        return SemiEuclideanForm(dim=2 * self.n, index=2 * self.s, gram=self.real_gram(z))


def metric_inner(chart: MetricChart, z: np.ndarray, u: TangentVector, v: TangentVector):
    """g(u, v) at z; real (float) for real arguments, complex otherwise."""
    val = u.components @ chart.gram_full(z) @ v.components
    if u.is_real and v.is_real:
        return float(val.real)
    return complex(val)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def fd_step(z: np.ndarray) -> float:
    return FD_STEP_BASE * max(1.0, float(np.linalg.norm(np.atleast_1d(z))))


def _richardson(fn: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    """4th-order derivative of fn at 0 from two central differences."""
    d1 = (fn(h) - fn(-h)) / (2.0 * h)
    d2 = (fn(h / 2.0) - fn(-h / 2.0)) / h
    return (4.0 * d2 - d1) / 3.0


def wirtinger_derivative(fn: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                         h: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(d fn/dz^l, d fn/dzbar^l) for an array-valued function of z.

    Returns arrays with a leading axis of length n indexing l.
    """
    z = np.asarray(z, dtype=complex)
    h = fd_step(z) if h is None else h
    n = z.size
    f0 = np.asarray(fn(z))
    d_dz = np.empty((n,) + f0.shape, dtype=complex)
    d_dzb = np.empty((n,) + f0.shape, dtype=complex)
    for l in range(n):
        e = np.zeros(n, dtype=complex)
        e[l] = 1.0
        dx = _richardson(lambda t: np.asarray(fn(z + t * e), dtype=complex), h)
        dy = _richardson(lambda t: np.asarray(fn(z + 1j * t * e), dtype=complex), h)
        d_dz[l] = 0.5 * (dx - 1j * dy)
        d_dzb[l] = 0.5 * (dx + 1j * dy)
    return d_dz, d_dzb


def _require_stencil_domain(chart: MetricChart, z: np.ndarray, h: float) -> None:
    if not chart.domain_pred(z):
        raise ChartDomainError(f"point {z} outside domain of {chart.name}")
    for l in range(chart.n):
        e = np.zeros(chart.n, dtype=complex)
        e[l] = 1.0
        for step in (h, -h, 1j * h, -1j * h):
            if not chart.domain_pred(z + step * e):
                raise ChartDomainError(
                    f"stencil around {z} leaves domain of {chart.name}")


# ---------------------------------------------------------------------------
# connection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionCoefficients:
    """Gamma^A_{BC} at a point, with the numerically solved oracle kept
    alongside whenever a closed form was returned."""

    point: np.ndarray
    gamma: np.ndarray                 # (2n, 2n, 2n), gamma[A, B, C]
    solved: Optional[np.ndarray]      # Koszul solve, None if gamma IS the solve
    analytic: bool

    def symmetry_residual(self) -> float:
        return float(np.abs(self.gamma - self.gamma.transpose(0, 2, 1)).max())

    def conjugation_residual(self) -> float:
        n = self.gamma.shape[0] // 2
        sw = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
        flipped = self.gamma[np.ix_(sw, sw, sw)].conj()
        return float(np.abs(self.gamma - flipped).max())


def _metric_derivative_tensor(chart: MetricChart, z: np.ndarray,
                              use_analytic: bool) -> np.ndarray:
    """T[E, C, D] = Z_E(g_{CD}) over full frame indices E, C, D."""
    n = chart.n
    if use_analytic and chart.metric_deriv is not None:
        dH_dz, dH_dzb = chart.metric_deriv(z)
        dH_dz = np.asarray(dH_dz, dtype=complex)
        dH_dzb = np.asarray(dH_dzb, dtype=complex)
    else:
        h = fd_step(z)
        _require_stencil_domain(chart, z, h)
        dH_dz, dH_dzb = wirtinger_derivative(chart.hermitian, z, h)
    T = np.zeros((2 * n, 2 * n, 2 * n), dtype=complex)
    # g_{j kbar} = H[j, k]; g_{jbar k} = conj(H[k, j]); pure blocks vanish.
    for l in range(n):
        T[l, :n, n:] = dH_dz[l]
        T[l, n:, :n] = dH_dzb[l].conj().transpose()  # d(conj H[k,j])/dz^l
        T[n + l, :n, n:] = dH_dzb[l]
        T[n + l, n:, :n] = dH_dz[l].conj().transpose()
    return T


def _solve_koszul(chart: MetricChart, z: np.ndarray, use_analytic_deriv: bool) -> np.ndarray:
    n = chart.n
    T = _metric_derivative_tensor(chart, z, use_analytic_deriv)
    # rhs[D, B, C] = Z_B g_{CD} + Z_C g_{BD} - Z_D g_{BC}
    rhs = np.empty((2 * n, 2 * n, 2 * n), dtype=complex)
    for D in range(2 * n):
        rhs[D] = T[:, :, D] + T[:, :, D].T - T[D]
    G = chart.gram_full(z)
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMetricError(f"metric Gram singular at {z}")
    gamma = 0.5 * np.linalg.solve(G, rhs.reshape(2 * n, -1)).reshape(2 * n, 2 * n, 2 * n)
    return gamma


def christoffel(chart: MetricChart, z: np.ndarray,
                derivatives: str = "auto") -> ConnectionCoefficients:
    """Connection coefficients at z.

    derivatives: "auto" uses the chart's analytic metric derivatives when
    available, "fd" forces the central-difference path (the independent
    oracle for closed forms), "analytic" requires the analytic evaluator.

    When the chart carries closed-form coefficients they are returned as
    `gamma` and the Koszul solve is kept in `solved` for comparison.
    """
    z = np.asarray(z, dtype=complex)
    if not chart.domain_pred(z):
        raise ChartDomainError(f"point {z} outside domain of {chart.name}")
    if derivatives not in ("auto", "fd", "analytic"):
        raise ValueError(f"unknown derivatives mode {derivatives!r}")
    if derivatives == "analytic" and chart.metric_deriv is None:
        raise ValueError("chart has no analytic metric derivatives")
    use_analytic = derivatives != "fd" and chart.metric_deriv is not None
    solved = _solve_koszul(chart, z, use_analytic)
    if chart.christoffel_analytic is not None:
        gamma = np.asarray(chart.christoffel_analytic(z), dtype=complex)
        return ConnectionCoefficients(point=z, gamma=gamma, solved=solved, analytic=True)
    return ConnectionCoefficients(point=z, gamma=solved, solved=None, analytic=False)


def _as_field(obj) -> Callable[[np.ndarray], TangentVector]:
    if isinstance(obj, TangentVector):
        return lambda _z, _v=obj: _v
    return obj


def _field_derivative_along(X: TangentVector,
                            field: Callable[[np.ndarray], TangentVector],
                            z: np.ndarray, h: float) -> np.ndarray:
    """X(Y^A) for a possibly complexified direction X, via Wirtinger FD."""
    d_dz, d_dzb = wirtinger_derivative(lambda p: field(p).components, z, h)
    return np.einsum("l,la->a", X.hol, d_dz) + np.einsum("l,la->a", X.antihol, d_dzb)


def covariant_derivative(chart: MetricChart, X, Y, z: np.ndarray,
                         gamma: ConnectionCoefficients | None = None) -> TangentVector:
    """(nabla_X Y)^A = X(Y^A) + Gamma^A_{BC} X^B Y^C at z.

    X may be a fixed TangentVector or a field; Y must be a field (a fixed
    vector is treated as a constant field).  Directional derivatives use
    central differences with one Richardson step unless Y is constant.
    """
    z = np.asarray(z, dtype=complex)
    Xf, Yf = _as_field(X), _as_field(Y)
    Xv, Yv = Xf(z), Yf(z)
    if gamma is None:
        gamma = christoffel(chart, z)
    if isinstance(Y, TangentVector):
        dY = np.zeros(2 * chart.n, dtype=complex)
    else:
        h = fd_step(z)
        _require_stencil_domain(chart, z, h)
        dY = _field_derivative_along(Xv, Yf, z, h)
    out = dY + np.einsum("abc,b,c->a", gamma.gamma, Xv.components, Yv.components)
    return TangentVector.from_components(out)


def gradient(chart: MetricChart, f: Callable[[np.ndarray], complex],
             z: np.ndarray) -> TangentVector:
    """Index-raised differential: g(grad f, X) = X(f) for all X."""
    z = np.asarray(z, dtype=complex)
    h = fd_step(z)
    _require_stencil_domain(chart, z, h)
    d_dz, d_dzb = wirtinger_derivative(lambda p: np.asarray(f(p), dtype=complex), z, h)
    df = np.concatenate([d_dz.ravel(), d_dzb.ravel()])
    G = chart.gram_full(z)
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMetricError(f"metric Gram singular at {z}")
    return TangentVector.from_components(np.linalg.solve(G, df))


def lie_bracket(X, Y, z: np.ndarray, h: float | None = None) -> TangentVector:
    """[X, Y]^A = X(Y^A) - Y(X^A); metric independent."""
    z = np.asarray(z, dtype=complex)
    h = fd_step(z) if h is None else h
    Xf, Yf = _as_field(X), _as_field(Y)
    Xv, Yv = Xf(z), Yf(z)
    dY = np.zeros(Xv.components.size, dtype=complex) if isinstance(Y, TangentVector) \
        else _field_derivative_along(Xv, Yf, z, h)
    dX = np.zeros(Yv.components.size, dtype=complex) if isinstance(X, TangentVector) \
        else _field_derivative_along(Yv, Xf, z, h)
    return TangentVector.from_components(dY - dX)


def exterior_derivative_1form(alpha: Callable[[np.ndarray], np.ndarray],
                              z: np.ndarray, h: float | None = None) -> np.ndarray:
    """(d alpha)_{AB} = Z_A(alpha_B) - Z_B(alpha_A) on frame pairs.

    alpha(z) returns the 2n frame components (alpha(Z_A))_A.
    """
    z = np.asarray(z, dtype=complex)
    h = fd_step(z) if h is None else h
    d_dz, d_dzb = wirtinger_derivative(lambda p: np.asarray(alpha(p), dtype=complex), z, h)
    grad = np.vstack([d_dz, d_dzb])  # grad[A, B] = Z_A(alpha_B)
    return grad - grad.T


def exterior_derivative_2form(omega: Callable[[np.ndarray], np.ndarray],
                              z: np.ndarray, h: float | None = None) -> np.ndarray:
    """(d Omega)_{ABC} by the alternating sum over coordinate triples.

    omega(z) returns the antisymmetric 2n x 2n frame component matrix.
    Coordinate frame fields commute, so no bracket terms appear.
    """
    z = np.asarray(z, dtype=complex)
    h = fd_step(z) if h is None else h
    d_dz, d_dzb = wirtinger_derivative(lambda p: np.asarray(omega(p), dtype=complex), z, h)
    grad = np.concatenate([d_dz, d_dzb], axis=0)  # grad[E, A, B] = Z_E(Omega_AB)
    # (d Omega)_{ABC} = grad[A,B,C] - grad[B,A,C] + grad[C,A,B]
    return grad - grad.transpose(1, 0, 2) + grad.transpose(1, 2, 0)


def kahler_form(chart: MetricChart) -> Callable[[np.ndarray], np.ndarray]:
    """Frame components of Omega(X, Y) = g(X, JY) as a matrix field."""
    n = chart.n

    def omega(z):
        H = chart.hermitian(z)
        out = np.zeros((2 * n, 2 * n), dtype=complex)
        out[:n, n:] = -1j * H            # Omega_{j kbar} = -i g_{j kbar}
        out[n:, :n] = 1j * H.conj()      # Omega_{jbar k} = i conj(g_{j kbar})
        return out

    return omega


def conformal_connection_shift(chart: MetricChart, f, X, Y, z: np.ndarray,
                               gamma: ConnectionCoefficients | None = None) -> TangentVector:
    """Levi-Civita connection of the rescaled metric exp(-f) g.

    Returns nabla_X Y - (1/2){X(f) Y + Y(f) X - g(X,Y) grad f}, the
    conformal-change law written with the base metric's gradient.
    """
    z = np.asarray(z, dtype=complex)
    base = covariant_derivative(chart, X, Y, z, gamma=gamma)
    Xv, Yv = _as_field(X)(z), _as_field(Y)(z)
    h = fd_step(z)
    d_dz, d_dzb = wirtinger_derivative(lambda p: np.asarray(f(p), dtype=complex), z, h)
    df = np.concatenate([d_dz.ravel(), d_dzb.ravel()])
    Xf = complex(df @ Xv.components)
    Yf = complex(df @ Yv.components)
    gXY = Xv.components @ chart.gram_full(z) @ Yv.components
    gradf = gradient(chart, f, z)
    shift = Xf * Yv.components + Yf * Xv.components - gXY * gradf.components
    return TangentVector.from_components(base.components - 0.5 * shift)
