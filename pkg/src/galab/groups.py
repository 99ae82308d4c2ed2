"""Discrete group carriers and finite windows.

Three kinds of group cover everything downstream: integer lattices Z^d,
finite groups given by Cayley tables, and free groups on k generators.
Elements are plain hashable encodings (int tuples for lattice points, int
indices for Cayley groups, reduced words as tuples of signed generator
numbers for free groups).  All structure lives on the GroupSpec object, so
operations read as ``spec.mul(a, b)``.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from typing import Iterable, Sequence

from .errors import ResourceLimitError, UsageError

DEFAULT_BALL_CAP = 10**6


class GroupSpec(ABC):
    """Shared interface of the concrete group carriers."""

    kind = "abstract"

    @property
    @abstractmethod
    def identity(self):
        """Encoding of the identity element."""

    @abstractmethod
    def mul(self, a, b):
        """Group product a*b.  Raises UsageError on foreign operands."""

    @abstractmethod
    def inv(self, a):
        """Two-sided inverse of a."""

    @abstractmethod
    def validate(self, a):
        """Raise UsageError unless a is a valid element encoding."""

    @abstractmethod
    def word_length(self, a):
        """Canonical length of a: L1 norm, word length, or 0/1 on Cayley groups."""

    @abstractmethod
    def sort_key(self, a):
        """Key for the deterministic element order used by windows."""

    @abstractmethod
    def ball(self, radius, *, cap=DEFAULT_BALL_CAP):
        """Window of all elements of length <= radius (box on lattices)."""

    @abstractmethod
    def to_json(self):
        """JSON-ready dict describing this group."""

    def element_to_json(self, a):
        return list(a) if isinstance(a, tuple) else a

    def element_from_json(self, obj):
        a = tuple(obj) if isinstance(obj, (list, tuple)) else obj
        self.validate(a)
        return a


class LatticeGroup(GroupSpec):
    """The lattice Z^d written additively; elements are length-d int tuples."""

    kind = "Z"
    __slots__ = ("rank", "_identity")

    def __init__(self, rank: int):
        rank = int(rank)
        if rank < 1:
            raise UsageError(f"lattice rank must be >= 1, got {rank}")
        self.rank = rank
        self._identity = (0,) * rank

    @property
    def identity(self):
        return self._identity

    def mul(self, a, b):
        if len(a) != self.rank or len(b) != self.rank:
            raise UsageError(f"operands {a!r}, {b!r} do not belong to Z^{self.rank}")
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        if len(a) != self.rank:
            raise UsageError(f"element {a!r} does not belong to Z^{self.rank}")
        return tuple(-x for x in a)

    def validate(self, a):
        if (
            not isinstance(a, tuple)
            or len(a) != self.rank
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in a)
        ):
            raise UsageError(f"{a!r} is not a valid Z^{self.rank} element")

    def word_length(self, a):
        return sum(abs(x) for x in a)

    def sort_key(self, a):
        return a

    def ball(self, radius, *, cap=DEFAULT_BALL_CAP):
        if radius < 0:
            raise UsageError(f"ball radius must be >= 0, got {radius}")
        size = (2 * radius + 1) ** self.rank
        if size > cap:
            raise ResourceLimitError(f"ball would hold {size} elements, cap is {cap}")
        span = range(-radius, radius + 1)
        elements = itertools.product(span, repeat=self.rank)
        return Window(self, elements, sort=False)

    def to_json(self):
        return {"kind": "Z", "rank": self.rank}

    def __eq__(self, other):
        return self is other or (isinstance(other, LatticeGroup) and other.rank == self.rank)

    def __hash__(self):
        return hash(("Z", self.rank))

    def __repr__(self):
        return f"LatticeGroup(rank={self.rank})"


class FreeGroup(GroupSpec):
    """Free group on k generators; elements are reduced words.

    A word is a tuple of nonzero ints, +i for the i-th generator and -i for
    its inverse, with no adjacent cancelling pair.  Multiplication reduces
    eagerly, so every stored word stays reduced.
    """

    kind = "free"
    __slots__ = ("rank",)

    def __init__(self, rank: int):
        rank = int(rank)
        if rank < 1:
            raise UsageError(f"free group rank must be >= 1, got {rank}")
        self.rank = rank

    @property
    def identity(self):
        return ()

    def mul(self, a, b):
        i = len(a)
        j = 0
        nb = len(b)
        while i > 0 and j < nb and a[i - 1] == -b[j]:
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def validate(self, a):
        if not isinstance(a, tuple):
            raise UsageError(f"{a!r} is not a valid free group word")
        for x in a:
            if not isinstance(x, int) or isinstance(x, bool) or x == 0 or abs(x) > self.rank:
                raise UsageError(f"letter {x!r} out of range for rank {self.rank}")
        for u, v in zip(a, a[1:]):
            if u == -v:
                raise UsageError(f"word {a!r} is not reduced")

    def word_length(self, a):
        return len(a)

    def sort_key(self, a):
        return (len(a), a)

    def _letters(self):
        k = self.rank
        return list(range(-k, 0)) + list(range(1, k + 1))

    def ball_size(self, radius: int) -> int:
        if radius < 0:
            raise UsageError(f"ball radius must be >= 0, got {radius}")
        total = 1
        sphere = 2 * self.rank
        for _ in range(radius):
            total += sphere
            sphere *= 2 * self.rank - 1
        return total

    def ball(self, radius, *, cap=DEFAULT_BALL_CAP):
        size = self.ball_size(radius)
        if size > cap:
            raise ResourceLimitError(f"ball would hold {size} elements, cap is {cap}")
        letters = self._letters()
        words = [()]
        level = [()]
        for _ in range(radius):
            nxt = []
            for w in level:
                last = w[-1] if w else 0
                for letter in letters:
                    if letter == -last:
                        continue
                    nxt.append(w + (letter,))
            level = nxt
            words.extend(nxt)
        return Window(self, words, sort=True)

    def to_json(self):
        return {"kind": "free", "rank": self.rank}

    def __eq__(self, other):
        return self is other or (isinstance(other, FreeGroup) and other.rank == self.rank)

    def __hash__(self):
        return hash(("free", self.rank))

    def __repr__(self):
        return f"FreeGroup(rank={self.rank})"


class CayleyGroup(GroupSpec):
    """Finite group presented by a full multiplication table.

    The table must be a Latin square whose identity row and column act
    trivially; the constructor verifies this and precomputes the two-sided
    inverse of every element.  Elements are row/column indices.
    """

    kind = "cayley"
    __slots__ = ("table", "order", "_identity", "_inverse", "name", "_hash")

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, name: str | None = None):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0:
            raise UsageError("Cayley table must be nonempty")
        full = frozenset(range(n))
        for i, row in enumerate(rows):
            if len(row) != n:
                raise UsageError(f"row {i} has length {len(row)}, expected {n}")
            if frozenset(row) != full:
                raise UsageError(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if frozenset(row[j] for row in rows) != full:
                raise UsageError(f"column {j} is not a permutation of 0..{n - 1}")
        identity = int(identity)
        if not 0 <= identity < n:
            raise UsageError(f"identity index {identity} out of range")
        for j in range(n):
            if rows[identity][j] != j or rows[j][identity] != j:
                raise UsageError(f"index {identity} does not act as an identity")
        inverse = [0] * n
        for i in range(n):
            j = rows[i].index(identity)
            if rows[j][i] != identity:
                raise UsageError(f"element {i} has no two-sided inverse")
            inverse[i] = j
        self.table = rows
        self.order = n
        self._identity = identity
        self._inverse = tuple(inverse)
        self.name = name
        self._hash = hash(("cayley", rows, identity))

    @property
    def identity(self):
        return self._identity

    def mul(self, a, b):
        try:
            return self.table[a][b]
        except (IndexError, TypeError):
            raise UsageError(f"operands {a!r}, {b!r} do not index this Cayley group") from None

    def inv(self, a):
        try:
            return self._inverse[a]
        except (IndexError, TypeError):
            raise UsageError(f"element {a!r} does not index this Cayley group") from None

    def validate(self, a):
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.order:
            raise UsageError(f"{a!r} is not a valid index into a group of order {self.order}")

    def word_length(self, a):
        return 0 if a == self._identity else 1

    def sort_key(self, a):
        return a

    def ball(self, radius, *, cap=DEFAULT_BALL_CAP):
        if radius < 0:
            raise UsageError(f"ball radius must be >= 0, got {radius}")
        if self.order > cap:
            raise ResourceLimitError(f"group order {self.order} exceeds cap {cap}")
        if radius == 0:
            return Window(self, [self._identity], sort=False)
        return Window(self, range(self.order), sort=False)

    def is_associative(self) -> bool:
        """Full O(n^3) associativity scan; the constructor does not run it."""
        t = self.table
        rng = range(self.order)
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in rng for b in rng for c in rng)

    def to_json(self):
        payload = {
            "kind": "cayley",
            "order": self.order,
            "table": [list(row) for row in self.table],
            "identity": self._identity,
        }
        if self.name:
            payload["name"] = self.name
        return payload

    def __eq__(self, other):
        return self is other or (
            isinstance(other, CayleyGroup)
            and other.table == self.table
            and other._identity == self._identity
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = self.name or f"order {self.order}"
        return f"CayleyGroup({label})"


class Window:
    """Ordered finite set of distinct group elements with positional lookup."""

    __slots__ = ("group", "elements", "_pos")

    def __init__(self, group: GroupSpec, elements: Iterable, *, sort: bool = True):
        elems = list(elements)
        for x in elems:
            group.validate(x)
        if sort:
            elems.sort(key=group.sort_key)
        pos = {}
        for i, x in enumerate(elems):
            if x in pos:
                raise UsageError(f"duplicate window element {x!r}")
            pos[x] = i
        self.group = group
        self.elements = tuple(elems)
        self._pos = pos

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._pos

    def position(self, x) -> int:
        try:
            return self._pos[x]
        except KeyError:
            raise UsageError(f"element {x!r} is not in the window") from None

    def union(self, extra: Iterable) -> "Window":
        merged = set(self.elements)
        merged.update(extra)
        return Window(self.group, merged, sort=True)

    def __eq__(self, other):
        return (
            isinstance(other, Window)
            and other.group == self.group
            and other.elements == self.elements
        )

    def __repr__(self):
        return f"Window({len(self.elements)} elements of {self.group!r})"


def ball(spec: GroupSpec, radius: int, *, cap: int = DEFAULT_BALL_CAP) -> Window:
    """Ball window of the given radius; see GroupSpec.ball for conventions."""
    return spec.ball(radius, cap=cap)


def multiply(spec: GroupSpec, a, b):
    return spec.mul(a, b)


def inverse(spec: GroupSpec, a):
    return spec.inv(a)


# ---------------------------------------------------------------------------
# standard finite groups


def cyclic_group(n: int, name: str | None = None) -> CayleyGroup:
    """Z/nZ with addition mod n."""
    n = int(n)
    if n < 1:
        raise UsageError(f"cyclic group order must be >= 1, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return CayleyGroup(table, identity=0, name=name or f"C{n}")


def _mixed_radix_encode(values: Sequence[int], moduli: Sequence[int]) -> int:
    idx = 0
    for v, m in zip(values, moduli):
        idx = idx * m + (v % m)
    return idx


def _mixed_radix_decode(idx: int, moduli: Sequence[int]) -> tuple:
    out = []
    for m in reversed(moduli):
        out.append(idx % m)
        idx //= m
    return tuple(reversed(out))


def _check_moduli(moduli: Sequence[int]) -> tuple:
    mods = tuple(int(m) for m in moduli)
    if not mods or any(m < 1 for m in mods):
        raise UsageError(f"moduli must be positive integers, got {moduli!r}")
    return mods


def cyclic_product(moduli: Sequence[int], *, order_cap: int = 4096) -> CayleyGroup:
    """Direct product of cyclic groups Z/m1 x ... x Z/mk as a Cayley table.

    Element i encodes the mixed-radix digits of i with respect to moduli,
    matching quotient_map.
    """
    mods = _check_moduli(moduli)
    order = 1
    for m in mods:
        order *= m
    if order > order_cap:
        raise ResourceLimitError(f"product order {order} exceeds cap {order_cap}")
    digits = [_mixed_radix_decode(i, mods) for i in range(order)]
    table = [
        [
            _mixed_radix_encode([x + y for x, y in zip(digits[i], digits[j])], mods)
            for j in range(order)
        ]
        for i in range(order)
    ]
    name = "x".join(f"C{m}" for m in mods)
    return CayleyGroup(table, identity=0, name=name)


def quotient_map(a: Sequence[int], moduli: Sequence[int]) -> int:
    """Image of a lattice element in the product of cyclic groups.

    Returns the element index in cyclic_product(moduli); reduction is
    coordinatewise mod the respective modulus.
    """
    mods = _check_moduli(moduli)
    if len(a) != len(mods):
        raise UsageError(f"element {a!r} and moduli {mods!r} have different ranks")
    return _mixed_radix_encode([int(x) for x in a], mods)


def symmetric_group(n: int) -> CayleyGroup:
    """S_n on {0..n-1}; element i is the i-th permutation in lexicographic order.

    The product p*q composes right-to-left: (p*q)(x) = p(q(x)).
    """
    n = int(n)
    if not 1 <= n <= 6:
        raise UsageError(f"symmetric_group supports 1 <= n <= 6, got {n}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[x]] for x in range(n))] for q in perms]
        for p in perms
    ]
    return CayleyGroup(table, identity=0, name=f"S{n}")


def dihedral_group(n: int) -> CayleyGroup:
    """Symmetries of the regular n-gon, order 2n.

    Index j*n + i encodes r^i s^j with r the rotation and s a reflection,
    so s r s = r^-1.
    """
    n = int(n)
    if n < 1:
        raise UsageError(f"dihedral_group needs n >= 1, got {n}")

    def mul(e1, e2):
        i1, j1 = e1 % n, e1 // n
        i2, j2 = e2 % n, e2 // n
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return ((j1 + j2) % 2) * n + i

    order = 2 * n
    table = [[mul(a, b) for b in range(order)] for a in range(order)]
    return CayleyGroup(table, identity=0, name=f"D{n}")


def quaternion_group() -> CayleyGroup:
    """The quaternion group {1,-1,i,-i,j,-j,k,-k} of order 8."""
    units = [
        (1, 0, 0, 0),
        (-1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, -1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, -1, 0),
        (0, 0, 0, 1),
        (0, 0, 0, -1),
    ]
    index = {q: i for i, q in enumerate(units)}

    def hamilton(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    table = [[index[hamilton(p, q)] for q in units] for p in units]
    return CayleyGroup(table, identity=0, name="Q8")


# ---------------------------------------------------------------------------
# JSON


def spec_from_json(obj: dict) -> GroupSpec:
    """Rebuild a group from its JSON description."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise UsageError(f"not a group description: {obj!r}")
    kind = obj["kind"]
    if kind == "Z":
        return LatticeGroup(obj["rank"])
    if kind == "free":
        return FreeGroup(obj["rank"])
    if kind == "cayley":
        group = CayleyGroup(obj["table"], identity=obj.get("identity", 0), name=obj.get("name"))
        if "order" in obj and int(obj["order"]) != group.order:
            raise UsageError(f"declared order {obj['order']} != table size {group.order}")
        return group
    raise UsageError(f"unknown group kind {kind!r}")


def spec_to_json(spec: GroupSpec) -> dict:
    return spec.to_json()
