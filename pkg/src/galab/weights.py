"""Submultiplicative weights, characters, and character domination.

A weight is a strictly positive function on a group with
w(x*y) <= w(x) * w(y).  The weighted algebra carries the norm
sum |f(x)| w(x).  Characters are the multiplicative weights
exp(<c, x>) on a lattice; dominate_character finds a character lying
below a given weight on a ball, which in turn yields a rescaling of the
weight with values >= 1 and a multiplicative change of variables
(character_twist) between the two weighted algebras.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import AlgebraElement
from .errors import ContractViolationError, ResourceLimitError, UsageError
from .groups import GroupSpec, LatticeGroup, Window, ball

_REL_TOL = 1e-12


class Weight:
    """Base class; subclasses implement value(group, x) > 0."""

    kind = "abstract"

    def value(self, group: GroupSpec, x):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __mul__(self, other):
        if isinstance(other, Weight):
            return ProductWeight((self, other))
        return NotImplemented


class ConstantWeight(Weight):
    """w(x) = value, a constant >= 1 (1 gives the plain l1 algebra)."""

    kind = "constant"

    def __init__(self, value=1):
        if value < 1:
            raise UsageError(f"a constant weight below 1 is not submultiplicative: {value}")
        self.constant = value

    def value(self, group, x):
        return self.constant

    def to_json(self):
        return {"kind": "constant", "value": self.constant}


class ExpSymmetricWeight(Weight):
    """w(x) = base ** length(x); symmetric since length(x) = length(x^-1)."""

    kind = "exp_symmetric"

    def __init__(self, base):
        if base <= 0:
            raise UsageError(f"exp_symmetric base must be positive, got {base}")
        self.base = base

    def value(self, group, x):
        return self.base ** group.word_length(x)

    def to_json(self):
        return {"kind": "exp_symmetric", "base": self.base}


class PolynomialWeight(Weight):
    """w(x) = (1 + length(x)) ** beta with beta >= 0."""

    kind = "polynomial"

    def __init__(self, beta):
        if beta < 0:
            raise UsageError(f"polynomial weight needs beta >= 0, got {beta}")
        self.beta = beta

    def value(self, group, x):
        return (1 + group.word_length(x)) ** self.beta

    def to_json(self):
        return {"kind": "polynomial", "beta": self.beta}


class ExpDirectionalWeight(Weight):
    """Lattice-only w(x) = exp(sum_i a_i * x_i^+), or exp(<a, x>) if rectified=False.

    The rectified form grows in the positive directions and is flat in the
    negative ones, so it is genuinely one-sided (and not symmetric).
    """

    kind = "exp_directional"

    def __init__(self, coefficients: Sequence[float], *, rectified: bool = True):
        self.coefficients = tuple(float(c) for c in coefficients)
        self.rectified = rectified

    def value(self, group, x):
        if not isinstance(group, LatticeGroup) or len(x) != len(self.coefficients):
            raise UsageError("exp_directional weights are defined on matching lattices only")
        if self.rectified:
            s = sum(c * max(v, 0) for c, v in zip(self.coefficients, x))
        else:
            s = sum(c * v for c, v in zip(self.coefficients, x))
        return math.exp(s)

    def to_json(self):
        return {
            "kind": "exp_directional",
            "coefficients": list(self.coefficients),
            "rectified": self.rectified,
        }


class TableWeight(Weight):
    """Weight given by explicit values on a finite table of elements.

    extension="error" refuses evaluation outside the table;
    extension="envelope" extends by the cheapest product of table factors,
    which keeps submultiplicativity relative to the tabulated values.
    """

    kind = "table"

    def __init__(self, values: Mapping, *, extension: str = "error", radius: int | None = None):
        if extension not in ("error", "envelope"):
            raise UsageError(f"unknown table extension rule {extension!r}")
        if not values:
            raise UsageError("table weight needs at least one entry")
        for v in values.values():
            if v <= 0:
                raise UsageError(f"weights must be strictly positive, got {v}")
        self.values = dict(values)
        self.extension = extension
        self.radius = radius
        self._envelope_cache: dict = {}

    def value(self, group, x):
        if x in self.values:
            return self.values[x]
        if self.extension == "error":
            raise UsageError(f"element {x!r} is outside the weight table")
        return self._envelope(group, x)

    def _envelope(self, group, x):
        if x in self._envelope_cache:
            return self._envelope_cache[x]
        target_len = group.word_length(x)
        best = None
        for u, wu in self.values.items():
            if u == group.identity:
                continue
            rest = group.mul(group.inv(u), x)
            if group.word_length(rest) >= target_len:
                continue
            wrest = self.values.get(rest)
            if wrest is None:
                try:
                    wrest = self._envelope(group, rest)
                except UsageError:
                    continue
            cand = wu * wrest
            if best is None or cand < best:
                best = cand
        if best is None:
            raise UsageError(f"element {x!r} is not reachable by products of table entries")
        self._envelope_cache[x] = best
        return best

    def to_json(self):
        # Values listed in canonical ball order when a radius is recorded;
        # otherwise as explicit (element, value) pairs.
        if self.radius is not None:
            return {
                "kind": "table",
                "ball_radius": self.radius,
                "values": list(self.values.values()),
                "extension": self.extension,
            }
        return {
            "kind": "table",
            "entries": [[x, v] for x, v in self.values.items()],
            "extension": self.extension,
        }

    @staticmethod
    def on_ball(group: GroupSpec, radius: int, values: Sequence[float], *,
                extension: str = "error") -> "TableWeight":
        window = ball(group, radius)
        if len(values) != len(window):
            raise UsageError(
                f"expected {len(window)} values for ball({radius}), got {len(values)}"
            )
        mapping = dict(zip(window.elements, values))
        return TableWeight(mapping, extension=extension, radius=radius)


@dataclass(frozen=True)
class Character:
    """Multiplicative lattice weight exp(<c, x>)."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))

    def value(self, x) -> float:
        if len(x) != len(self.c):
            raise UsageError(f"character of rank {len(self.c)} applied to {x!r}")
        return math.exp(sum(ci * xi for ci, xi in zip(self.c, x)))

    def to_json(self):
        return {"c": list(self.c)}


class QuotientWeight(Weight):
    """w(x) / phi(x) for a weight w and character phi; the rescaled weight."""

    kind = "quotient"

    def __init__(self, numerator: Weight, character: Character):
        self.numerator = numerator
        self.character = character

    def value(self, group, x):
        return self.numerator.value(group, x) / self.character.value(x)

    def to_json(self):
        return {
            "kind": "quotient",
            "weight": self.numerator.to_json(),
            "character": self.character.to_json(),
        }


class ProductWeight(Weight):
    """Pointwise product of weights (submultiplicative whenever the factors are)."""

    kind = "product"

    def __init__(self, factors: Sequence[Weight]):
        flat = []
        for f in factors:
            if isinstance(f, ProductWeight):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if not flat:
            raise UsageError("product weight needs at least one factor")
        self.factors = tuple(flat)

    def value(self, group, x):
        out = 1
        for f in self.factors:
            out = out * f.value(group, x)
        return out

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


def weight_from_json(obj: dict, group: GroupSpec | None = None) -> Weight:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise UsageError(f"not a weight description: {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "constant":
            return ConstantWeight(obj.get("value", 1))
        if kind == "exp_symmetric":
            return ExpSymmetricWeight(obj["base"])
        if kind == "polynomial":
            return PolynomialWeight(obj["beta"])
        if kind == "exp_directional":
            return ExpDirectionalWeight(
                obj["coefficients"], rectified=obj.get("rectified", True)
            )
        if kind == "table":
            extension = obj.get("extension", "error")
            if "ball_radius" in obj:
                if group is None:
                    raise UsageError("ball-aligned weight tables need the group to decode")
                return TableWeight.on_ball(
                    group, obj["ball_radius"], obj["values"], extension=extension
                )
            mapping = {}
            for x, v in obj["entries"]:
                key = tuple(x) if isinstance(x, list) else x
                mapping[key] = v
            return TableWeight(mapping, extension=extension)
        if kind == "quotient":
            return QuotientWeight(
                weight_from_json(obj["weight"], group),
                Character(tuple(obj["character"]["c"])),
            )
        if kind == "product":
            return ProductWeight([weight_from_json(f, group) for f in obj["factors"]])
    except KeyError as exc:
        raise UsageError(f"weight description of kind {kind!r} is missing field {exc}") from None
    raise UsageError(f"unknown weight kind {kind!r}")


# ---------------------------------------------------------------------------
# checks


@dataclass
class WeightCheckReport:
    submultiplicative: bool
    symmetric: bool
    min_value: float
    min_at: object
    worst_ratio: float
    worst_pair: tuple | None
    window_size: int

    def to_json(self):
        def enc(x):
            return list(x) if isinstance(x, tuple) else x

        return {
            "submultiplicative": self.submultiplicative,
            "symmetric": self.symmetric,
            "min_value": self.min_value,
            "min_at": enc(self.min_at),
            "worst_ratio": self.worst_ratio,
            "worst_pair": [enc(x) for x in self.worst_pair] if self.worst_pair else None,
            "window_size": self.window_size,
        }


def check_weight(weight: Weight, window: Window, *, rel_tol: float = _REL_TOL) -> WeightCheckReport:
    """Exhaustive submultiplicativity and symmetry scan over a window.

    Pairs whose product leaves the window are skipped; the report carries
    the minimum value and, if violated, the worst offending pair.
    """
    group = window.group
    vals = {x: weight.value(group, x) for x in window}
    for x, v in vals.items():
        if v <= 0:
            raise UsageError(f"weight is not strictly positive at {x!r}: {v}")
    min_at = min(vals, key=lambda x: (vals[x], group.sort_key(x)))
    min_value = vals[min_at]

    worst_ratio = 0.0
    worst_pair = None
    for x in window:
        wx = vals[x]
        for y in window:
            z = group.mul(x, y)
            if z not in window:
                continue
            ratio = float(vals[z] / (wx * vals[y]))
            if ratio > worst_ratio:
                worst_ratio = ratio
                worst_pair = (x, y)
    submultiplicative = worst_ratio <= 1 + rel_tol

    symmetric = True
    for x in window:
        xi = group.inv(x)
        if xi not in window:
            continue
        a, b = float(vals[x]), float(vals[xi])
        if abs(a - b) > rel_tol * max(abs(a), abs(b)):
            symmetric = False
            break

    return WeightCheckReport(
        submultiplicative=submultiplicative,
        symmetric=symmetric,
        min_value=float(min_value),
        min_at=min_at,
        worst_ratio=worst_ratio,
        worst_pair=worst_pair if worst_ratio > 1 + rel_tol else None,
        window_size=len(window),
    )


@dataclass
class DominationResult:
    feasible: bool
    character: Character | None
    radius: int
    lower: float | None = None
    upper: float | None = None
    certificate_pair: tuple | None = None

    def to_json(self):
        out = {"feasible": self.feasible, "radius": self.radius}
        if self.character is not None:
            out["character"] = self.character.to_json()
        if self.lower is not None:
            out["lower"] = self.lower
        if self.upper is not None:
            out["upper"] = self.upper
        if self.certificate_pair is not None:
            out["certificate_pair"] = [list(x) for x in self.certificate_pair]
        return out


def dominate_character(weight: Weight, group: LatticeGroup, radius: int,
                       *, cap: int = 200000) -> DominationResult:
    """Find a character phi = exp(<c, x>) with phi <= weight on ball(radius).

    Solves the linear constraints <c, x> <= log w(x) over the punctured
    ball.  Rank 1 intersects intervals and returns the midpoint; higher
    rank solves a Chebyshev-center linear program so the choice stays
    deterministic.  Infeasibility comes back with a certifying pair of
    constraints rather than an exception.
    """
    if not isinstance(group, LatticeGroup):
        raise UsageError("character domination is available on lattices only")
    if radius < 1:
        raise UsageError(f"radius must be >= 1, got {radius}")
    window = ball(group, radius, cap=cap)
    points = [x for x in window if x != group.identity]
    logs = {x: math.log(weight.value(group, x)) for x in points}

    if group.rank == 1:
        lower, lower_at = -math.inf, None
        upper, upper_at = math.inf, None
        for x in points:
            bound = logs[x] / x[0]
            if x[0] > 0:
                if bound < upper:
                    upper, upper_at = bound, x
            else:
                if bound > lower:
                    lower, lower_at = bound, x
        if lower > upper:
            return DominationResult(
                feasible=False, character=None, radius=radius,
                lower=lower, upper=upper, certificate_pair=(lower_at, upper_at),
            )
        if math.isinf(lower) and math.isinf(upper):
            c = 0.0
        elif math.isinf(lower):
            c = upper
        elif math.isinf(upper):
            c = lower
        else:
            c = (lower + upper) / 2
        return DominationResult(
            feasible=True, character=Character((c,)), radius=radius,
            lower=None if math.isinf(lower) else lower,
            upper=None if math.isinf(upper) else upper,
        )

    import numpy as np
    from scipy.optimize import linprog

    d = group.rank
    # Chebyshev center: maximize t with <c, x> + t * |x|_2 <= log w(x).
    a_ub = []
    b_ub = []
    for x in points:
        row = [float(v) for v in x] + [math.hypot(*[float(v) for v in x])]
        a_ub.append(row)
        b_ub.append(logs[x])
    cost = [0.0] * d + [-1.0]
    res = linprog(
        cost, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
        bounds=[(None, None)] * d + [(None, None)], method="highs",
    )
    if not res.success:
        raise ResourceLimitError(f"character domination LP failed: {res.message}")
    c = tuple(float(v) for v in res.x[:d])
    t = float(res.x[d])
    if t < 0:
        # Infeasible: report the two constraints most violated at the center.
        viol = sorted(points, key=lambda x: logs[x] - sum(ci * xi for ci, xi in zip(c, x)))
        return DominationResult(
            feasible=False, character=None, radius=radius,
            certificate_pair=(viol[0], viol[1] if len(viol) > 1 else viol[0]),
        )
    return DominationResult(feasible=True, character=Character(c), radius=radius)


def character_twist(character: Character, element: AlgebraElement, *,
                    inverse: bool = False) -> AlgebraElement:
    """Multiply each amplitude by phi(x); an isomorphism of the two algebras.

    The twist intertwines convolution because phi is multiplicative:
    twist(a*b) = twist(a) * twist(b).  inverse=True divides instead.
    """
    out = {}
    for x, v in element.items():
        factor = character.value(x)
        if inverse:
            factor = 1.0 / factor
        out[x] = complex(v) * factor
    return AlgebraElement(element.group, out, False)


@dataclass
class RescaleResult:
    rescaled: QuotientWeight
    twisted: AlgebraElement
    min_rescaled: float
    domination_ok: bool
    twist_residuals: list

    def to_json(self):
        return {
            "rescaled": self.rescaled.to_json(),
            "min_rescaled": self.min_rescaled,
            "domination_ok": self.domination_ok,
            "twist_residuals": self.twist_residuals,
        }


def rescale_by_character(weight: Weight, character: Character, element: AlgebraElement,
                         window: Window, pairs: Sequence = ()) -> RescaleResult:
    """Build the rescaled weight w/phi and the twisted element, with checks.

    Verifies phi <= w on the window (raising ContractViolationError
    otherwise), reports min w/phi over the window, and measures
    twist(a*b) - twist(a)*twist(b) for each supplied pair (a, b).
    """
    group = window.group
    if not isinstance(group, LatticeGroup):
        raise UsageError("character rescaling is available on lattices only")
    rescaled = QuotientWeight(weight, character)
    min_val = math.inf
    for x in window:
        ratio = float(rescaled.value(group, x))
        if ratio < 1 - 1e-9:
            raise ContractViolationError(
                f"character exceeds the weight at {x!r}: w/phi = {ratio}"
            )
        min_val = min(min_val, ratio)
    residuals = []
    for a, b in pairs:
        direct = character_twist(character, a * b)
        split = character_twist(character, a) * character_twist(character, b)
        scale = max(1.0, float((a * b).to_float().norm()))
        residuals.append(float((direct - split).norm()) / scale)
    return RescaleResult(
        rescaled=rescaled,
        twisted=character_twist(character, element),
        min_rescaled=min_val,
        domination_ok=True,
        twist_residuals=residuals,
    )
