"""
Coefficient rings, finitely generated modules and module homomorphisms

A module is kept as a diagonal presentation: one cyclic factor per coordinate, where order 0
stands for a copy of Z. Product modules therefore keep the coordinates of their factors, while
`canonical()` gives the invariant-factor form used to compare modules.
"""

import itertools
import math
import re
from collections import defaultdict
from typing import Iterator, List, Literal, Optional, Sequence, Tuple

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint


def int_matrix(rows: Sequence[Sequence[int]], nrows: int, ncols: int) -> np.ndarray:
    """
    Build an object-dtype integer matrix, valid also when a dimension is zero
    """
    if len(rows) != nrows:
        raise ValueError(f"expected {nrows} rows, got {len(rows)}")
    matrix = np.zeros((nrows, ncols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ValueError(f"row {i} has {len(row)} entries, expected {ncols}")
        for j, value in enumerate(row):
            matrix[i, j] = int(value)
    return matrix


def identity_matrix(n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def zero_vector(n: int) -> np.ndarray:
    return np.zeros(n, dtype=object)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Exact product of object-dtype integer arrays; empty inner dimensions give zeros
    """
    if b.ndim == 1:
        if a.shape[0] == 0 or a.shape[1] == 0:
            return np.zeros(a.shape[0], dtype=object)
        return a.dot(b)
    if a.shape[0] == 0 or a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    return a.dot(b)


def invariant_factors(orders: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """
    Rank and invariant factors d_1 | d_2 | ... of a direct sum of cyclic groups
    :param orders: orders of the cyclic summands, 0 for Z
    :return: (rank, ascending divisor chain with every entry > 1)
    """
    rank = sum(1 for d in orders if d == 0)
    powers = defaultdict(list)
    for d in orders:
        if d > 1:
            for prime, exponent in factorint(d).items():
                powers[prime].append(exponent)
    length = max((len(exps) for exps in powers.values()), default=0)
    factors = [1] * length
    for prime, exps in powers.items():
        for i, exponent in enumerate(sorted(exps, reverse=True)):
            factors[length - 1 - i] *= prime**exponent
    return rank, tuple(factors)


class Ring(BaseModel):
    """
    The coefficient ring: the integers, or the integers modulo a prime power
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["Z", "Zmod"] = "Z"
    modulus: int = 0

    @model_validator(mode="after")
    def check_modulus(self) -> Self:
        if self.kind == "Z":
            if self.modulus != 0:
                raise ValueError("the integers carry no modulus")
        elif self.modulus < 2 or len(factorint(self.modulus)) != 1:
            raise ValueError(f"modulus {self.modulus} is not a prime power >= 2")
        return self

    @classmethod
    def integers(cls) -> Self:
        return cls()

    @classmethod
    def mod(cls, modulus: int) -> Self:
        return cls(kind="Zmod", modulus=modulus)

    @classmethod
    def parse(cls, text: str) -> Self:
        """
        Read "Z", "Zmod:p^k" or "Zmod:m"
        """
        text = text.strip()
        if text == "Z":
            return cls.integers()
        match = re.fullmatch(r"Zmod:(\d+)(?:\^(\d+))?", text)
        if not match:
            raise ValueError(f"unknown ring {text!r}; expected Z or Zmod:p^k")
        base = int(match.group(1))
        exponent = int(match.group(2)) if match.group(2) else 1
        return cls.mod(base**exponent)

    @property
    def prime(self) -> Optional[int]:
        if self.kind == "Z":
            return None
        return next(iter(factorint(self.modulus)))

    def reduce(self, value: int) -> int:
        return value % self.modulus if self.kind == "Zmod" else value

    def is_unit(self, value: int) -> bool:
        if self.kind == "Z":
            return value in (1, -1)
        return value % self.prime != 0

    def inverse(self, value: int) -> int:
        if not self.is_unit(value):
            raise ValueError(f"{value} is not a unit in {self}")
        if self.kind == "Z":
            return value
        return pow(value, -1, self.modulus)

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        prime = self.prime
        exponent = factorint(self.modulus)[prime]
        return f"Zmod:{prime}^{exponent}"


class FgMod(BaseModel):
    """
    A finitely generated module given by the orders of its coordinate generators
    """

    model_config = ConfigDict(frozen=True)

    ring: Ring = Field(default_factory=Ring)
    orders: Tuple[int, ...] = ()

    @field_validator("orders")
    @classmethod
    def valid_orders(cls, orders: Tuple[int, ...]) -> Tuple[int, ...]:
        for d in orders:
            if d < 0 or d == 1:
                raise ValueError(f"generator order {d} must be 0 (free) or at least 2")
        return orders

    @model_validator(mode="after")
    def fits_ring(self) -> Self:
        if self.ring.kind == "Zmod":
            for d in self.orders:
                if d == 0 or self.ring.modulus % d != 0:
                    raise ValueError(f"order {d} does not divide {self.ring.modulus} in {self.ring}")
        return self

    @classmethod
    def zero(cls, ring: Optional[Ring] = None) -> Self:
        return cls(ring=ring or Ring())

    @classmethod
    def free(cls, rank: int, ring: Optional[Ring] = None) -> Self:
        return cls(ring=ring or Ring(), orders=(0,) * rank)

    @classmethod
    def cyclic(cls, order: int, ring: Optional[Ring] = None) -> Self:
        return cls(ring=ring or Ring(), orders=(order,))

    @classmethod
    def parse(cls, literal: str, ring: Optional[Ring] = None) -> Self:
        """
        Read a module literal such as "Z^2 + Z/4 + Z/2" or "0"
        :param literal: the literal text
        :param ring: the coefficient ring; over Zmod:m the literal "R" stands for Z/m
        :return: the module, coordinates in literal order
        """
        ring = ring or Ring()
        text = literal.strip()
        if text in ("0", ""):
            return cls(ring=ring)
        orders: List[int] = []
        for term in text.split("+"):
            term = term.strip()
            match = re.fullmatch(r"([ZR])(?:\^(\d+))?", term)
            if match:
                count = int(match.group(2)) if match.group(2) else 1
                order = 0 if match.group(1) == "Z" else ring.modulus
                if match.group(1) == "R" and ring.kind == "Z":
                    order = 0
                orders.extend([order] * count)
                continue
            match = re.fullmatch(r"Z/(\d+)", term)
            if not match:
                raise ValueError(f"cannot read module term {term!r}")
            orders.append(int(match.group(1)))
        return cls(ring=ring, orders=tuple(orders))

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def rank(self) -> int:
        return invariant_factors(self.orders)[0]

    @property
    def torsion(self) -> Tuple[int, ...]:
        return invariant_factors(self.orders)[1]

    def canonical(self) -> Self:
        rank, torsion = invariant_factors(self.orders)
        return FgMod(ring=self.ring, orders=(0,) * rank + torsion)

    def is_isomorphic(self, other: Self) -> bool:
        return self.ring == other.ring and invariant_factors(self.orders) == invariant_factors(other.orders)

    def is_zero(self) -> bool:
        return not self.orders

    def cardinality(self) -> Optional[int]:
        """
        Number of elements, or None for an infinite module
        """
        if any(d == 0 for d in self.orders):
            return None
        return math.prod(self.orders)

    def normalize(self, vector: np.ndarray) -> np.ndarray:
        result = np.array([int(x) for x in vector], dtype=object)
        for i, d in enumerate(self.orders):
            if d:
                result[i] = result[i] % d
        return result

    def zero_element(self) -> np.ndarray:
        return zero_vector(self.n)

    def basis(self) -> List[np.ndarray]:
        vectors = []
        for i in range(self.n):
            vector = zero_vector(self.n)
            vector[i] = 1
            vectors.append(vector)
        return vectors

    def elements(self) -> Iterator[np.ndarray]:
        """
        Every element of a finite module, in lexicographic coordinate order
        """
        if self.cardinality() is None:
            raise ValueError("cannot enumerate an infinite module")
        for coords in itertools.product(*(range(d) for d in self.orders)):
            yield np.array(coords, dtype=object)

    def same_element(self, x: np.ndarray, y: np.ndarray) -> bool:
        return all(int(a) == int(b) for a, b in zip(self.normalize(x), self.normalize(y)))

    def relations(self) -> np.ndarray:
        """
        Columns d_i e_i for the torsion coordinates
        """
        columns = [i for i, d in enumerate(self.orders) if d]
        matrix = np.zeros((self.n, len(columns)), dtype=object)
        for j, i in enumerate(columns):
            matrix[i, j] = self.orders[i]
        return matrix

    def describe(self) -> str:
        """
        The canonical literal, e.g. "Z^2 + Z/2 + Z/6"
        """
        rank, torsion = invariant_factors(self.orders)
        terms = []
        if rank == 1:
            terms.append("Z")
        elif rank > 1:
            terms.append(f"Z^{rank}")
        terms.extend(f"Z/{d}" for d in torsion)
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.orders)


class ModHom(BaseModel):
    """
    A homomorphism between presented modules; column j is the image of generator j
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dom: FgMod
    cod: FgMod
    matrix: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def coerce_matrix(cls, values):
        if isinstance(values, dict) and "matrix" in values:
            dom, cod = values["dom"], values["cod"]
            raw = values["matrix"]
            if not isinstance(raw, np.ndarray):
                raw = int_matrix(raw, cod.n, dom.n)
            if raw.shape != (cod.n, dom.n):
                raise ValueError(f"matrix shape {raw.shape} does not match {cod.n}x{dom.n}")
            matrix = np.zeros(raw.shape, dtype=object)
            for i in range(cod.n):
                for j in range(dom.n):
                    value = int(raw[i, j])
                    matrix[i, j] = value % cod.orders[i] if cod.orders[i] else value
            matrix.flags.writeable = False
            values = {**values, "matrix": matrix}
        return values

    @model_validator(mode="after")
    def respects_relations(self) -> Self:
        if self.dom.ring != self.cod.ring:
            raise ValueError(f"ring mismatch {self.dom.ring} vs {self.cod.ring}")
        for j, d in enumerate(self.dom.orders):
            if not d:
                continue
            for i, e in enumerate(self.cod.orders):
                value = d * self.matrix[i, j]
                if (e == 0 and value != 0) or (e and value % e):
                    raise ValueError(
                        f"generator {j} of order {d} cannot map to {self.matrix[i, j]} in coordinate {i} of order {e}"
                    )
        return self

    @classmethod
    def identity(cls, module: FgMod) -> Self:
        return cls(dom=module, cod=module, matrix=identity_matrix(module.n))

    @classmethod
    def zero(cls, dom: FgMod, cod: FgMod) -> Self:
        return cls(dom=dom, cod=cod, matrix=np.zeros((cod.n, dom.n), dtype=object))

    @classmethod
    def scalar(cls, module: FgMod, factor: int) -> Self:
        return cls(dom=module, cod=module, matrix=identity_matrix(module.n) * int(factor))

    def __call__(self, vector: np.ndarray) -> np.ndarray:
        return self.cod.normalize(matmul(self.matrix, np.asarray(vector, dtype=object)))

    def __matmul__(self, other: Self) -> Self:
        """
        Composition self ∘ other
        """
        if other.cod != self.dom:
            raise ValueError(f"cannot compose: {other.cod} is not {self.dom}")
        return ModHom(dom=other.dom, cod=self.cod, matrix=matmul(self.matrix, other.matrix))

    def __add__(self, other: Self) -> Self:
        self._check_parallel(other)
        return ModHom(dom=self.dom, cod=self.cod, matrix=self.matrix + other.matrix)

    def __sub__(self, other: Self) -> Self:
        self._check_parallel(other)
        return ModHom(dom=self.dom, cod=self.cod, matrix=self.matrix - other.matrix)

    def __neg__(self) -> Self:
        return ModHom(dom=self.dom, cod=self.cod, matrix=-self.matrix)

    def scaled(self, factor: int) -> Self:
        return ModHom(dom=self.dom, cod=self.cod, matrix=self.matrix * int(factor))

    def _check_parallel(self, other: Self) -> None:
        if self.dom != other.dom or self.cod != other.cod:
            raise ValueError("homomorphisms are not parallel")

    def equals(self, other: Self) -> bool:
        if self.dom != other.dom or self.cod != other.cod:
            return False
        return bool(np.all(self.matrix == other.matrix)) if self.matrix.size else True

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModHom) and self.equals(other)

    __hash__ = None

    def is_zero(self) -> bool:
        return all(int(x) == 0 for x in self.matrix.flat)

    def first_difference(self, other: Self) -> Optional[int]:
        """
        Index of the first generator on which two parallel maps differ, if any
        """
        for j in range(self.dom.n):
            if any(int(self.matrix[i, j]) != int(other.matrix[i, j]) for i in range(self.cod.n)):
                return j
        return None

    def rows(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.matrix]

    def __str__(self) -> str:
        body = " ; ".join(" ".join(str(x) for x in row) for row in self.rows())
        return f"[{body}] : {self.dom} -> {self.cod}"
