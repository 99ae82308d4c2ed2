"""Windowed realizations of convolution operators.

The right-convolution action of f on a bounded function g is
(act g)(x) = sum_y g(x*y) f(y); with a weight w the summand picks up the
ratio w(x*y)/w(x).  A window W of output points needs input values on
W_in = W*supp(f) union W; the input window is always enlarged to that set,
boundary values are never invented.  The same action can be materialized
as a dense |W| x |W_in| matrix for inspection and linear algebra.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import AlgebraElement, convolve, delta
from .errors import ResourceLimitError, UsageError
from .groups import (
    CayleyGroup,
    GroupSpec,
    LatticeGroup,
    Window,
    _check_moduli,
    cyclic_product,
    quotient_map,
)
from .weights import Weight


def _lookup(g, x):
    """Value of a window function given as a mapping or a callable."""
    if isinstance(g, Mapping):
        try:
            return g[x]
        except KeyError:
            raise UsageError(f"function is missing the required point {x!r}") from None
    if callable(g):
        return g(x)
    raise UsageError(f"cannot read values from {type(g).__name__}")


def input_window(f: AlgebraElement, window: Window) -> Window:
    """W * supp(f) union W: every point the action reads when writing on W."""
    if f.group != window.group:
        raise UsageError("element and window live over different groups")
    mul = window.group.mul
    pts = set(window.elements)
    for x in window:
        for y, _ in f.items():
            pts.add(mul(x, y))
    return Window(window.group, pts, sort=True)


def apply_convolution_action(f: AlgebraElement, g, window: Window,
                             weight: Weight | None = None) -> dict:
    """Apply the (weighted) action of f to g on the window; returns {x: value}.

    g must cover input_window(f, window); a mapping that misses a point
    raises UsageError naming it.  Exact amplitudes and exact g values keep
    the result exact when no weight is involved.
    """
    if f.group != window.group:
        raise UsageError("element and window live over different groups")
    group = window.group
    mul = group.mul
    out = {}
    for x in window:
        total = 0
        for y, amp in f.items():
            xy = mul(x, y)
            val = _lookup(g, xy) * amp
            if weight is not None:
                val = complex(val) * (weight.value(group, xy) / weight.value(group, x))
            total = total + val
        out[x] = total
    return out


def pairing(h: AlgebraElement, g) -> complex:
    """Bilinear pairing sum_x h(x) g(x); no conjugation."""
    total = 0
    for x, amp in h.items():
        total = total + amp * _lookup(g, x)
    return total


@dataclass
class WindowedOperator:
    """Dense matrix realization of the action on a window.

    matrix[i, j] holds the coefficient with which input point
    input_window[j] contributes to output point window[i]:
    (w(z)/w(x)) * f(x^-1 z) at x = window[i], z = input_window[j].
    """

    element: AlgebraElement
    window: Window
    input_window: Window
    matrix: np.ndarray
    weight: Weight | None = None

    def apply(self, g) -> np.ndarray:
        vec = np.array([complex(_lookup(g, z)) for z in self.input_window])
        return self.matrix @ vec

    def to_json(self):
        return {
            "window": [self.window.group.element_to_json(x) for x in self.window],
            "input_window": [
                self.window.group.element_to_json(x) for x in self.input_window
            ],
            "matrix": [
                [[v.real, v.imag] for v in row] for row in self.matrix
            ],
        }


def action_matrix(f: AlgebraElement, window: Window, weight: Weight | None = None,
                  *, entry_cap: int = 10**7) -> WindowedOperator:
    """Materialize the windowed action as a dense complex matrix."""
    win_in = input_window(f, window)
    if len(window) * len(win_in) > entry_cap:
        raise ResourceLimitError(
            f"matrix would hold {len(window) * len(win_in)} entries, cap is {entry_cap}"
        )
    group = window.group
    mul = group.mul
    mat = np.zeros((len(window), len(win_in)), dtype=complex)
    for i, x in enumerate(window):
        if weight is None:
            for y, amp in f.items():
                mat[i, win_in.position(mul(x, y))] += complex(amp)
        else:
            wx = weight.value(group, x)
            for y, amp in f.items():
                z = mul(x, y)
                mat[i, win_in.position(z)] += complex(amp) * (weight.value(group, z) / wx)
    return WindowedOperator(element=f, window=window, input_window=win_in,
                            matrix=mat, weight=weight)


def weight_isometry(values: Mapping, weight: Weight, window: Window,
                    *, inverse: bool = False) -> dict:
    """Multiply (or divide) a window function pointwise by the weight.

    This is the isometry between the sup-norm dual pictures of the plain
    and weighted algebras; the round trip is the identity.
    """
    group = window.group
    out = {}
    for t in window:
        w = weight.value(group, t)
        v = _lookup(values, t)
        out[t] = v / w if inverse else v * w
    return out


def conjugation_deviation(f: AlgebraElement, weight: Weight | None, window: Window) -> float:
    """Max entry gap between the two constructions of the weighted action.

    Construction one: the direct weighted matrix (w-ratio formula).
    Construction two: transpose the right-convolution matrix built column
    by column from actual convolutions delta_x * f, then conjugate by the
    diagonal weight matrices.  The two agree exactly in exact arithmetic;
    the return value is the float deviation.
    """
    direct = action_matrix(f, window, weight)
    win_in = direct.input_window
    group = window.group
    # Right-convolution matrix on coefficients: column x holds delta_x * f.
    conv = np.zeros((len(win_in), len(window)), dtype=complex)
    for j, x in enumerate(window):
        col = convolve(delta(group, x, 1, exact=f.exact), f)
        for z, amp in col.items():
            conv[win_in.position(z), j] = complex(amp)
    if weight is None:
        w_out = np.ones(len(window))
        w_in = np.ones(len(win_in))
    else:
        w_out = np.array([float(weight.value(group, x)) for x in window])
        w_in = np.array([float(weight.value(group, z)) for z in win_in])
    conjugated = (conv.T * w_in[None, :]) / w_out[:, None]
    return float(np.max(np.abs(conjugated - direct.matrix)))


# ---------------------------------------------------------------------------
# Fourier side (lattices)


def fourier_eval(f: AlgebraElement, angles: Sequence[float]) -> complex:
    """Symbol value sum_n f(n) exp(i <n, angles>)."""
    if not isinstance(f.group, LatticeGroup):
        raise UsageError("fourier_eval needs a lattice element")
    if len(angles) != f.group.rank:
        raise UsageError(f"expected {f.group.rank} angles, got {len(angles)}")
    total = 0j
    for n, amp in f.items():
        phase = sum(ni * ti for ni, ti in zip(n, angles))
        total += complex(amp) * cmath.exp(1j * phase)
    return total


def symbol_grid(f: AlgebraElement, sizes: Sequence[int]) -> np.ndarray:
    """Symbol sampled on the uniform grid theta_j = 2 pi k_j / sizes_j.

    Returns an array of shape sizes; entry k equals the symbol at the
    frequencies 2 pi k / sizes, computed by an FFT of the coefficient
    array folded modulo the grid.
    """
    if not isinstance(f.group, LatticeGroup):
        raise UsageError("symbol_grid needs a lattice element")
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != f.group.rank or any(s < 1 for s in sizes):
        raise UsageError(f"bad grid sizes {sizes!r} for rank {f.group.rank}")
    arr = np.zeros(sizes, dtype=complex)
    for n, amp in f.items():
        idx = tuple(ni % s for ni, s in zip(n, sizes))
        arr[idx] += complex(amp)
    scale = 1
    for s in sizes:
        scale *= s
    return np.fft.ifftn(arr) * scale


class FourierSymbol:
    """Callable wrapper around the symbol of a lattice element."""

    def __init__(self, f: AlgebraElement):
        if not isinstance(f.group, LatticeGroup):
            raise UsageError("FourierSymbol needs a lattice element")
        self.element = f

    def eval(self, angles: Sequence[float]) -> complex:
        return fourier_eval(self.element, angles)

    __call__ = eval

    def grid(self, size: int) -> np.ndarray:
        return symbol_grid(self.element, (size,) * self.element.group.rank)


# ---------------------------------------------------------------------------
# finite quotients (lattices)


def quotient_push(f: AlgebraElement, moduli: Sequence[int],
                  *, order_cap: int = 4096) -> AlgebraElement:
    """Push a lattice element forward to the product of cyclic groups."""
    if not isinstance(f.group, LatticeGroup):
        raise UsageError("quotient_push needs a lattice element")
    mods = _check_moduli(moduli)
    if len(mods) != f.group.rank:
        raise UsageError(f"moduli {mods!r} do not match rank {f.group.rank}")
    target = cyclic_product(mods, order_cap=order_cap)
    terms: dict = {}
    for n, amp in f.items():
        idx = quotient_map(n, mods)
        cur = terms.get(idx)
        terms[idx] = amp if cur is None else cur + amp
    return AlgebraElement(target, terms, f.exact)


@dataclass
class QuotientOperator:
    """Right-convolution matrix of the pushforward on a finite quotient."""

    group: CayleyGroup
    pushforward: AlgebraElement
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


def quotient_operator(f: AlgebraElement, moduli: Sequence[int],
                      *, order_cap: int = 1024) -> QuotientOperator:
    """Matrix of convolution by the pushforward of f on the cyclic quotient.

    For rank 1 this is a circulant whose eigenvalues are the symbol values
    at the N-th roots of unity.
    """
    fq = quotient_push(f, moduli, order_cap=order_cap)
    group = fq.group
    n = group.order
    mat = np.zeros((n, n), dtype=complex)
    for u in range(n):
        for y, amp in fq.items():
            mat[group.mul(u, y), u] += complex(amp)
    return QuotientOperator(group=group, pushforward=fq, matrix=mat)
