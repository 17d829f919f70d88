"""Spectral solution of the heat-conduction-type tree equation
u_t = (d^m1/dx_1^m1 + sum over edges (i,j) of x_i d^mj/dx_j^mj) u
on a box [-a_1, a_1] x ... x [-a_n, a_n].

Derivative symbols commute, so the evolution of a plane wave is governed
by the polynomial family xi~: tips carry t*z_r^{m_r} and an interior node
integrates (z_i + sum of the children's xi~)^{m_i} from 0 to t. The full
exponent of a mode is E = xi~_1 + sum over i >= 2 of x_parent(i)*xi~_i
with z_r replaced by 2*pi*k_r*sqrt(-1)/a_r; its real part is the growth
exponent A and its imaginary part the phase shift B, both affine in x.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np

from . import expressions
from .polynomials import IMAG_UNIT, MultiPoly
from .trees import TreeDiagram

__all__ = [
    "XiFamily",
    "AffineForm",
    "FourierMode",
    "HeatSolution",
    "ModeCheck",
    "xi_family",
    "mode_exponent",
    "mode_exponent_symbolic",
    "mode_weight",
    "fourier_coefficients",
    "solve_heat",
    "verify_modes",
]


@dataclass(frozen=True)
class XiFamily:
    """Per-node polynomials in t and the commuting derivative symbols z_s
    of the node and its descendants; zero at t = 0 away from constants."""

    tree: TreeDiagram
    orders: Tuple[int, ...]
    xi_tilde: Dict[int, MultiPoly]
    parent_factor: Dict[int, int]


def xi_family(tree: TreeDiagram, orders: Sequence[int]) -> XiFamily:
    orders = tuple(int(m) for m in orders)
    if len(orders) != tree.n:
        raise ValueError(f"expected {tree.n} orders, got {len(orders)}")
    if any(m < 1 for m in orders):
        raise ValueError("orders must be positive integers")
    t = MultiPoly.var("t")
    y = MultiPoly.var("y1")
    xi: Dict[int, MultiPoly] = {}
    for i in range(tree.n, 0, -1):
        kids = tree.children(i)
        if not kids:
            xi[i] = t * MultiPoly.term(1, **{f"z{i}": orders[i - 1]})
        else:
            inner = MultiPoly.var(f"z{i}")
            for s in kids:
                inner = inner + xi[s].substitute({"t": y})
            xi[i] = (inner ** orders[i - 1]).integrate_from_zero("y1", "t")
    parent_factor = {i: tree.parent(i) for i in range(2, tree.n + 1)}
    return XiFamily(tree=tree, orders=orders, xi_tilde=xi, parent_factor=parent_factor)


@dataclass(frozen=True)
class AffineForm:
    """const + sum of coeffs[j] * x_{j+1}."""

    const: float
    coeffs: Tuple[float, ...]

    def __call__(self, x: Sequence[float]) -> float:
        return self.const + float(np.dot(self.coeffs, np.asarray(x, dtype=float)))


def _complex_exponent_parts(xi: XiFamily, kappa: Sequence[complex]):
    """Per-node values xi~_i(t -> polynomial, z_r -> i*kappa_r) as numpy
    polynomial coefficient arrays in t (index = power of t)."""
    n = xi.tree.n
    out = {}
    for i in range(1, n + 1):
        poly = xi.xi_tilde[i]
        deg = 0
        for exps in poly.terms:
            ti = poly.variables.index("t") if "t" in poly.variables else None
            deg = max(deg, exps[ti] if ti is not None else 0)
        coeffs = np.zeros(deg + 1, dtype=complex)
        for exps, c in poly.terms.items():
            val = complex(c)
            tpow = 0
            for v, e in zip(poly.variables, exps):
                if v == "t":
                    tpow = e
                elif e:
                    r = int(v[1:])
                    val *= (1j * kappa[r - 1]) ** e
            coeffs[tpow] += val
        out[i] = coeffs
    return out


def _eval_tpoly(coeffs: np.ndarray, t: float) -> complex:
    return complex(np.polyval(coeffs[::-1], t))


def mode_exponent(
    xi: XiFamily, k: Sequence[int], box: Sequence[float], t: float
) -> Tuple[AffineForm, AffineForm]:
    """Growth exponent A and phase shift B of the plane-wave mode with
    frequency vector k at time t; both affine in x, both zero at t = 0."""
    n = xi.tree.n
    if len(k) != n or len(box) != n:
        raise ValueError(f"expected {n}-vectors for k and box")
    if any(a <= 0 for a in box):
        raise ValueError("box half-widths must be positive")
    kappa = [2.0 * np.pi * k[i] / box[i] for i in range(n)]
    parts = _complex_exponent_parts(xi, kappa)
    const = _eval_tpoly(parts[1], t)
    coeffs = np.zeros(n, dtype=complex)
    for i in range(2, n + 1):
        coeffs[xi.parent_factor[i] - 1] += _eval_tpoly(parts[i], t)
    A = AffineForm(const.real, tuple(coeffs.real))
    B = AffineForm(const.imag, tuple(coeffs.imag))
    return A, B


def mode_exponent_symbolic(xi: XiFamily) -> Tuple[MultiPoly, MultiPoly]:
    """A and B as exact polynomials in t, x, and the frequency symbols
    k1..kn, split from the Gaussian-rational exponent."""
    E = _symbolic_exponent(xi)
    return E.real_part(), E.imag_part()


def _symbolic_exponent(xi: XiFamily) -> MultiPoly:
    n = xi.tree.n
    sub = {
        f"z{r}": MultiPoly.term(IMAG_UNIT, **{f"k{r}": 1}) for r in range(1, n + 1)
    }
    E = xi.xi_tilde[1].substitute(sub)
    for i in range(2, n + 1):
        E = E + MultiPoly.var(f"x{xi.parent_factor[i]}") * xi.xi_tilde[i].substitute(sub)
    return E


@dataclass(frozen=True)
class ModeCheck:
    ok: bool
    residual: MultiPoly


def verify_modes(tree: TreeDiagram, orders: Sequence[int]) -> ModeCheck:
    """Exact symbolic check that every plane wave solves the equation.

    With E(t, x, k) the mode exponent and c_j(t, k) the coefficient of x_j
    in E, time differentiation must equal the symbol of the operator:
    dE/dt = (c_1 + i k_1)^{m_1} + sum over edges (i, j) of
    x_i (c_j + i k_j)^{m_j}, exactly over the Gaussian rationals.
    """
    xi = xi_family(tree, orders)
    E = _symbolic_exponent(xi)
    lhs = E.differentiate("t")
    iu = MultiPoly.const(IMAG_UNIT)
    c1 = E.coeff_of("x1", 1)
    rhs = (c1 + iu * MultiPoly.var("k1")) ** xi.orders[0]
    for p, c, _ in tree.edges():
        cj = E.coeff_of(f"x{c}", 1)
        rhs = rhs + MultiPoly.var(f"x{p}") * (
            cj + iu * MultiPoly.var(f"k{c}")
        ) ** xi.orders[c - 1]
    residual = lhs - rhs
    return ModeCheck(ok=residual.is_zero, residual=residual)


def mode_weight(k: Sequence[int]) -> float:
    """Half-weighting per zero frequency component, which removes the
    overcounting of the nonnegative-frequency mode sum."""
    return 2.0 ** (-sum(1 for v in k if v == 0))


GridFunction = Union[str, expressions.ExprNode, Callable, np.ndarray]


def _grid_values(f: GridFunction, box: Sequence[float], samples: int) -> np.ndarray:
    n = len(box)
    if isinstance(f, np.ndarray):
        if f.shape != (samples,) * n:
            raise ValueError(f"gridded samples must have shape {(samples,) * n}")
        return np.asarray(f, dtype=float)
    axes = [(-a + 2.0 * a * np.arange(samples) / samples) for a in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    if isinstance(f, str):
        f = expressions.parse_expression(f, n)
    if isinstance(f, (expressions.Num, expressions.Pi, expressions.Var,
                      expressions.Neg, expressions.BinOp, expressions.Call)):
        values = expressions.evaluate(f, mesh)
        return np.broadcast_to(np.asarray(values, dtype=float), mesh[0].shape).copy()
    if callable(f):
        values = f(*mesh)
        return np.broadcast_to(np.asarray(values, dtype=float), mesh[0].shape).copy()
    raise TypeError(f"unsupported initial data {type(f).__name__}")


def fourier_coefficients(
    f: GridFunction, box: Sequence[float], cutoff: int, samples: int
) -> Dict[Tuple[int, ...], Tuple[float, float]]:
    """Weighted cosine and sine coefficients of f for all frequency vectors
    with entries up to the cutoff.

    The box quadrature is the periodic tensor trapezoid rule on a uniform
    grid, evaluated through the FFT (on this grid the two coincide), which
    is exact to rounding for band-limited trigonometric data. Each pair is
    then scaled by the zero-component half-weighting.
    """
    n = len(box)
    if samples < 4 * max(cutoff, 1) or samples & (samples - 1):
        raise ValueError("samples must be a power of two with samples >= 4*cutoff")
    values = _grid_values(f, box, samples)
    spectrum = np.fft.fftn(values) * (2.0 ** n / samples ** n)
    out: Dict[Tuple[int, ...], Tuple[float, float]] = {}
    for k in iproduct(range(cutoff + 1), repeat=n):
        z = spectrum[tuple(2 * kv for kv in k)]
        w = mode_weight(k)
        out[k] = (w * z.real, -w * z.imag)
    return out


@dataclass(frozen=True)
class FourierMode:
    """One mode: frequency vector, weighted coefficients, and the complex
    t-polynomials (constant part and per-x-variable parts) that produce
    the growth exponent A and phase shift B at any time."""

    k: Tuple[int, ...]
    b: float
    c: float
    weight: float
    const_tpoly: np.ndarray
    coeff_tpolys: Tuple[Tuple[int, np.ndarray], ...]  # (x index, poly)

    def exponent(self, t: float) -> Tuple[AffineForm, AffineForm]:
        const = _eval_tpoly(self.const_tpoly, t)
        n = len(self.k)
        coeffs = np.zeros(n, dtype=complex)
        for j, poly in self.coeff_tpolys:
            coeffs[j - 1] += _eval_tpoly(poly, t)
        return (
            AffineForm(const.real, tuple(coeffs.real)),
            AffineForm(const.imag, tuple(coeffs.imag)),
        )

    def pair(self, t: float, x: Sequence[float], box: Sequence[float]):
        """(phi, psi) values of the cosine and sine modes at (t, x)."""
        A, B = self.exponent(t)
        base = 2.0 * np.pi * sum(
            kv * xv / av for kv, xv, av in zip(self.k, x, box)
        )
        growth = np.exp(A(x))
        angle = base + B(x)
        return growth * np.cos(angle), growth * np.sin(angle)


@dataclass(frozen=True)
class HeatSolution:
    tree: TreeDiagram
    orders: Tuple[int, ...]
    box: Tuple[float, ...]
    cutoff: int
    modes: Tuple[FourierMode, ...]

    def __call__(self, t: float, x: Sequence[float]) -> float:
        if len(x) != self.tree.n:
            raise ValueError(f"expected {self.tree.n} coordinates, got {len(x)}")
        total = 0.0
        for mode in self.modes:
            phi, psi = mode.pair(t, x, self.box)
            total += mode.b * phi + mode.c * psi
        return float(total)

    @property
    def modes_used(self) -> int:
        return len(self.modes)


def solve_heat(
    tree: TreeDiagram,
    orders: Sequence[int],
    f: GridFunction,
    box: Sequence[float],
    cutoff: int,
    samples: int,
) -> HeatSolution:
    """Truncated mode-sum solution with initial data f on the box.

    At t = 0 the sum reproduces the weighted trigonometric interpolant of
    f through the cutoff; each mode then evolves by its exact exponent.
    """
    box = tuple(float(a) for a in box)
    if len(box) != tree.n or any(a <= 0 for a in box):
        raise ValueError("box must list one positive half-width per node")
    xi = xi_family(tree, orders)
    coeffs = fourier_coefficients(f, box, cutoff, samples)
    modes = []
    for k in sorted(coeffs):
        b, c = coeffs[k]
        kappa = [2.0 * np.pi * k[i] / box[i] for i in range(tree.n)]
        parts = _complex_exponent_parts(xi, kappa)
        coeff_polys = tuple(
            (xi.parent_factor[i], parts[i]) for i in range(2, tree.n + 1)
        )
        modes.append(
            FourierMode(
                k=k,
                b=b,
                c=c,
                weight=mode_weight(k),
                const_tpoly=parts[1],
                coeff_tpolys=coeff_polys,
            )
        )
    return HeatSolution(
        tree=tree,
        orders=tuple(int(m) for m in orders),
        box=box,
        cutoff=cutoff,
        modes=tuple(modes),
    )
