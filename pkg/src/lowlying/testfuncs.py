"""Even test functions with compactly supported Fourier transform, and density kernels.

Fourier convention: phi_hat(xi) = integral of phi(x) exp(-2 pi i xi x) dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .numeric import DomainError

__all__ = [
    "TestFunction",
    "DensityKernel",
    "W_U",
    "W_U1",
    "HypothesisError",
    "triangle",
    "triangle_conv",
    "zero_function",
    "parse_phi",
    "kernel_eval",
    "kernel_integral",
    "abs_moment",
    "window_transforms",
    "x_side_kernel_integral",
    "fourier_quadrature",
]

QUAD_TOL = 1e-10


class HypothesisError(DomainError):
    """A theorem's support hypothesis is not met."""


@dataclass(frozen=True)
class TestFunction:
    """A pair (phi, phi_hat) with supp phi_hat in [-alpha, alpha].

    |phi(x)| <= decay_const * |x|**(-decay_order) for all x != 0.
    `kinks` lists the points where phi_hat is not smooth (used to split quadrature).
    """

    __test__ = False  # not a pytest class

    name: str
    alpha: float
    phi: Callable
    phi_hat: Callable
    decay_order: int
    decay_const: float
    kinks: tuple[float, ...] = ()

    def tail_integral(self, x0: float) -> float:
        """Bound on the integral of |phi| over |x| > x0."""
        d = self.decay_order
        return 2 * self.decay_const * x0 ** (1 - d) / (d - 1)

    @property
    def spec(self) -> str:
        return self.name


def triangle(beta: float) -> TestFunction:
    """phi_hat(xi) = max(0, 1 - |xi|/beta); phi(x) = beta sinc(beta x)^2."""
    beta = float(beta)
    if beta <= 0:
        raise DomainError("triangle width must be positive")

    def phi(x):
        return beta * np.sinc(beta * np.asarray(x, dtype=float)) ** 2

    def phi_hat(xi):
        return np.maximum(0.0, 1.0 - np.abs(np.asarray(xi, dtype=float)) / beta)

    return TestFunction(f"triangle:{beta:g}", beta, phi, phi_hat, 2,
                        1.0 / (math.pi**2 * beta), (-beta, 0.0, beta))


def _cubic_bspline(u):
    """Self-convolution of the unit triangle; supported on [-2, 2], integral 1."""
    u = np.abs(np.asarray(u, dtype=float))
    inner = 2.0 / 3.0 - u**2 + 0.5 * u**3
    outer = (2.0 - u) ** 3 / 6.0
    return np.where(u <= 1.0, inner, np.where(u < 2.0, outer, 0.0))


def triangle_conv(beta: float) -> TestFunction:
    """Triangle convolved with itself, normalized to phi_hat(0) = 1.

    phi_hat(xi) = (3/2) B(xi/beta) with B the cubic B-spline, so alpha = 2 beta;
    phi(x) = (3 beta / 2) sinc(beta x)^4.
    """
    beta = float(beta)
    if beta <= 0:
        raise DomainError("triangle width must be positive")

    def phi(x):
        return 1.5 * beta * np.sinc(beta * np.asarray(x, dtype=float)) ** 4

    def phi_hat(xi):
        return 1.5 * _cubic_bspline(np.asarray(xi, dtype=float) / beta)

    return TestFunction(f"triangle2:{beta:g}", 2 * beta, phi, phi_hat, 4,
                        1.5 / (math.pi**4 * beta**3),
                        (-2 * beta, -beta, 0.0, beta, 2 * beta))


def zero_function() -> TestFunction:
    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return TestFunction("zero", 0.0, zero, zero, 2, 0.0, ())


def parse_phi(spec: str) -> TestFunction:
    """'triangle:<beta>' or 'triangle2:<beta>'."""
    kind, _, arg = spec.partition(":")
    try:
        beta = float(arg)
    except ValueError:
        raise DomainError(f"bad test-function spec {spec!r}") from None
    if kind == "triangle":
        return triangle(beta)
    if kind == "triangle2":
        return triangle_conv(beta)
    raise DomainError(f"unknown test-function family {kind!r}")


# -- kernels --------------------------------------------------------------------

@dataclass(frozen=True)
class DensityKernel:
    name: str
    evaluate: Callable

    def __call__(self, x):
        return self.evaluate(x)


def _w_u(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _w_u1(x):
    # np.sinc fills the removable singularity at 0
    return 1.0 - np.sinc(np.asarray(x, dtype=float)) ** 2


W_U = DensityKernel("W_U", _w_u)
W_U1 = DensityKernel("W_U1", _w_u1)


def kernel_eval(k: DensityKernel, x):
    out = k(x)
    return float(out) if np.ndim(out) == 0 else out


def _support_quad(f, phi: TestFunction, lo: float, hi: float) -> float:
    pts = [p for p in phi.kinks if lo < p < hi]
    val, _ = integrate.quad(f, lo, hi, points=pts or None, epsabs=QUAD_TOL, epsrel=0, limit=200)
    return val


def abs_moment(phi: TestFunction) -> float:
    """Integral of phi_hat(x) |x| over the support."""
    if phi.alpha == 0:
        return 0.0
    # phi_hat is even
    return 2 * _support_quad(lambda x: float(phi.phi_hat(x)) * x, phi, 0.0, phi.alpha)


def kernel_integral(phi: TestFunction, k: DensityKernel) -> float:
    """Integral of phi * k, computed from phi_hat.

    W_U:  phi_hat(0).
    W_U1: phi_hat(0) - phi(0) + integral phi_hat(x)|x| dx, valid when alpha <= 1.
    """
    if k.name == "W_U":
        return float(phi.phi_hat(0.0))
    if k.name == "W_U1":
        if phi.alpha > 1:
            raise HypothesisError(f"W_U1 identity needs supp phi_hat in [-1, 1]; alpha = {phi.alpha}")
        return float(phi.phi_hat(0.0)) - float(phi.phi(0.0)) + abs_moment(phi)
    raise DomainError(f"unknown kernel {k.name!r}")


def window_transforms(xi: float) -> tuple[float, float]:
    """Fourier transforms of the window eta = 1_[-1,1] and of |x| eta(x)."""
    xi = float(xi)
    eta_hat = 2.0 * float(np.sinc(2.0 * xi))
    return eta_hat, eta_hat - float(np.sinc(xi)) ** 2


def fourier_quadrature(f, xi: float, lo: float, hi: float, points=None) -> float:
    """Real part of the integral of f(x) exp(-2 pi i xi x) over [lo, hi] (f even)."""
    val, _ = integrate.quad(lambda x: f(x) * math.cos(2 * math.pi * xi * x), lo, hi,
                            points=points, epsabs=1e-12, epsrel=1e-12, limit=400)
    return val


def x_side_kernel_integral(phi: TestFunction, k: DensityKernel, x_max: float = 10000.0,
                           panels_per_unit: int = 4, order: int = 20) -> tuple[float, float]:
    """Integral of phi(x) k(x) over |x| <= x_max by Gauss-Legendre panels.

    Returns (value, tail_bound), the bound covering |x| > x_max with |k| <= 1.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    n_panels = int(math.ceil(x_max * panels_per_unit))
    edges = np.linspace(0.0, x_max, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    x = mid + half * nodes
    vals = phi.phi(x) * k(x)
    total = 2.0 * float(np.sum(half * weights * vals))
    return total, phi.tail_integral(x_max) if phi.decay_const else 0.0
