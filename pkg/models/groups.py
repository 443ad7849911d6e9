"""
Finite groups as Cayley tables, and the group data behind a transporter category
"""

from functools import cached_property
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import factorint
from sympy.combinatorics import PermutationGroup
from models.covers import AcMorphism, AcObject


class FiniteGroup(BaseModel):
    """
    A group on the elements 0..n-1; table[a][b] is the product ab
    """

    model_config = ConfigDict(frozen=True)

    name: str = ""
    table: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def axioms(self) -> Self:
        n = len(self.table)
        if n == 0:
            raise ValueError("a group needs at least one element")
        for a, row in enumerate(self.table):
            if len(row) != n:
                raise ValueError(f"row {a} has {len(row)} entries, expected {n}")
            if any(not 0 <= c < n for c in row):
                raise ValueError(f"row {a} names an element outside 0..{n - 1}")
        units = [e for e in range(n) if all(self.table[e][a] == a == self.table[a][e] for a in range(n))]
        if not units:
            raise ValueError("the table has no identity element")
        e = units[0]
        for a in range(n):
            if not any(self.table[a][b] == e for b in range(n)):
                raise ValueError(f"element {a} has no inverse")
        for a, b, c in product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValueError(f"the product is not associative at ({a}, {b}, {c})")
        return self

    @classmethod
    def from_permutations(cls, group: PermutationGroup, name: str = "") -> Self:
        """
        The Cayley table of a sympy permutation group, elements in sympy's order
        with the identity moved to 0
        """
        elements = list(group.elements)
        elements.sort(key=lambda g: (not g.is_Identity, g.array_form))
        index = {g: k for k, g in enumerate(elements)}
        table = tuple(tuple(index[a * b] for b in elements) for a in elements)
        return cls(name=name, table=table)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def identity(self) -> int:
        return next(e for e in self.elements if all(self.table[e][a] == a for a in self.elements))

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        return tuple(next(b for b in self.elements if self.table[a][b] == self.identity) for a in self.elements)

    def mul(self, *factors: int) -> int:
        result = self.identity
        for factor in factors:
            result = self.table[result][factor]
        return result

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, x: int, g: int) -> int:
        """
        x g x⁻¹
        """
        return self.mul(x, g, self.inv(x))

    def conjugate(self, x: int, subgroup: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.conj(x, g) for g in subgroup)

    def generated(self, generators: Iterable[int]) -> FrozenSet[int]:
        result = {self.identity}
        frontier = [self.identity]
        gens = list(generators)
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = self.mul(current, g)
                if nxt not in result:
                    result.add(nxt)
                    frontier.append(nxt)
        return frozenset(result)

    def is_subgroup(self, members: Iterable[int]) -> bool:
        members = frozenset(members)
        if self.identity not in members:
            return False
        return all(self.mul(a, self.inv(b)) in members for a in members for b in members)

    def subgroups(self, within: Optional[Iterable[int]] = None) -> List[FrozenSet[int]]:
        """
        Every subgroup of a subgroup, by iterated closure, ordered by size then elements
        """
        ambient = frozenset(self.elements if within is None else within)
        found = {frozenset({self.identity})}
        frontier = list(found)
        while frontier:
            current = frontier.pop()
            for g in sorted(ambient - current):
                bigger = self.generated(current | {g})
                if bigger not in found:
                    found.add(bigger)
                    frontier.append(bigger)
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    def centralizer(self, subset: Iterable[int]) -> FrozenSet[int]:
        subset = list(subset)
        return frozenset(x for x in self.elements if all(self.mul(x, g) == self.mul(g, x) for g in subset))

    def transporter(self, src: FrozenSet[int], dst: FrozenSet[int]) -> List[int]:
        """
        T_G(src, dst) = {x | x src x⁻¹ ⊆ dst}
        """
        return [x for x in self.elements if self.conjugate(x, src) <= dst]

    def double_cosets(self, left: FrozenSet[int], right: FrozenSet[int], within: FrozenSet[int]) -> List[int]:
        """
        Least representatives of left \\ within / right
        """
        seen = set()
        reps = []
        for w in sorted(within):
            if w in seen:
                continue
            reps.append(w)
            seen |= {self.mul(a, w, b) for a in left for b in right}
        return reps


class GroupData(BaseModel):
    """
    A finite group G, a p-subgroup P, and a finite set Ω with a left G-action and a right P-action
    that commute

    left[x][ω] is x·ω; right[u][ω] is ω·u for u in P.
    """

    model_config = ConfigDict(frozen=True)

    name: str = ""
    group: FiniteGroup
    p_subgroup: Tuple[int, ...]
    points: int
    left: Tuple[Tuple[int, ...], ...]
    right: Dict[int, Tuple[int, ...]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def actions(self) -> Self:
        G = self.group
        P = frozenset(self.p_subgroup)
        if not P <= frozenset(G.elements) or not G.is_subgroup(P):
            raise ValueError(f"{sorted(P)} is not a subgroup of {G.name or 'G'}")
        primes = factorint(len(P))
        if len(primes) > 1:
            raise ValueError(f"P has order {len(P)}, which is not a prime power")
        if self.points < 1:
            raise ValueError("Ω needs at least one point")
        if len(self.left) != G.order:
            raise ValueError(f"the left action lists {len(self.left)} elements, G has {G.order}")
        if set(self.right) != P:
            raise ValueError("the right action must list exactly the elements of P")
        omega = range(self.points)
        for x, images in enumerate(self.left):
            if sorted(images) != list(omega):
                raise ValueError(f"left action of {x} is not a permutation of Ω")
        for u, images in self.right.items():
            if sorted(images) != list(omega):
                raise ValueError(f"right action of {u} is not a permutation of Ω")
        for x, y, w in product(G.elements, G.elements, omega):
            if self.left[G.mul(x, y)][w] != self.left[x][self.left[y][w]]:
                raise ValueError(f"the left action fails (xy)·ω = x·(y·ω) at x={x}, y={y}, ω={w}")
        for u, v, w in product(P, P, omega):
            if self.right[G.mul(u, v)][w] != self.right[v][self.right[u][w]]:
                raise ValueError(f"the right action fails ω·(uv) = (ω·u)·v at u={u}, v={v}, ω={w}")
        for x, u, w in product(G.elements, P, omega):
            if self.left[x][self.right[u][w]] != self.right[u][self.left[x][w]]:
                raise ValueError(f"the actions do not commute at x={x}, u={u}, ω={w}")
        return self

    @property
    def P(self) -> FrozenSet[int]:
        return frozenset(self.p_subgroup)

    @property
    def prime(self) -> Optional[int]:
        primes = factorint(len(self.p_subgroup))
        return next(iter(primes), None)

    @property
    def omega(self) -> range:
        return range(self.points)

    def act(self, x: int, point: int, u: int) -> int:
        """
        x·ω·u⁻¹
        """
        return self.left[x][self.right[self.group.inv(u)][point]]

    def orbits(self, Q: FrozenSet[int]) -> List[Tuple[int, ...]]:
        """
        The Q×P-orbits of Ω, each sorted, ordered by least point
        """
        seen = set()
        result = []
        for w in self.omega:
            if w in seen:
                continue
            orbit = tuple(sorted({self.act(q, w, u) for q in Q for u in self.P}))
            seen |= set(orbit)
            result.append(orbit)
        return result


class Stabilizer(BaseModel):
    """
    The stabilizer of ω in Q×P seen as the graph of a conjugation: (Q×P)_ω = {(t v t⁻¹, v) | v in Q_ω}
    """

    model_config = ConfigDict(frozen=True)

    obj: Any
    point: int
    subgroup: FrozenSet[int]
    label: Any
    twist: int


class SpecialSquare(BaseModel):
    """
    A commutative square α∘γ = β∘δ of the additive cover with apex ⊕_w U_w
    """

    model_config = ConfigDict(frozen=True)

    alpha: int
    beta: int
    x: int
    y: int
    words: Tuple[int, ...]
    apex: AcObject
    gamma: AcMorphism
    delta: AcMorphism
