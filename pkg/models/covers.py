"""
Objects and morphisms of the additive cover: finite formal sums of base objects
"""

from typing import Any, Sequence, Tuple

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, ConfigDict, model_validator


class AcObject(BaseModel):
    model_config = ConfigDict(frozen=True)

    terms: Tuple[Any, ...] = ()

    @classmethod
    def single(cls, obj: Any) -> Self:
        return cls(terms=(obj,))

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, index: int) -> Any:
        return self.terms[index]

    def __add__(self, other: Self) -> Self:
        return AcObject(terms=self.terms + other.terms)

    def __str__(self) -> str:
        return " ⊕ ".join(str(t) for t in self.terms) if self.terms else "0"


class AcMorphism(BaseModel):
    """
    A map f of indices and, for each source index j, a base morphism from term j to term f(j)
    """

    model_config = ConfigDict(frozen=True)

    dom: AcObject
    cod: AcObject
    index_map: Tuple[int, ...]
    components: Tuple[int, ...]

    @model_validator(mode="after")
    def aligned(self) -> Self:
        if len(self.index_map) != len(self.dom) or len(self.components) != len(self.dom):
            raise ValueError("one index and one component per source term are required")
        if any(i < 0 or i >= len(self.cod) for i in self.index_map):
            raise ValueError(f"index map {self.index_map} leaves the target {self.cod}")
        return self

    @classmethod
    def single(cls, src: Any, dst: Any, f: int) -> Self:
        return cls(dom=AcObject.single(src), cod=AcObject.single(dst), index_map=(0,), components=(f,))

    @classmethod
    def assemble(cls, dom: AcObject, cod: AcObject, pairs: Sequence[Tuple[int, int]]) -> Self:
        """
        Build from (target index, component) pairs listed per source term
        """
        return cls(dom=dom, cod=cod, index_map=tuple(i for i, _ in pairs), components=tuple(f for _, f in pairs))

    def __str__(self) -> str:
        body = ", ".join(f"{j}->{i}:{f}" for j, (i, f) in enumerate(zip(self.index_map, self.components)))
        return f"({body}) : {self.dom} -> {self.cod}"


class StrictTriple(BaseModel):
    """
    An apex Q′ with legs α′: Q′ -> R and β′: Q′ -> T
    """

    model_config = ConfigDict(frozen=True)

    apex: Any
    to_R: int
    to_T: int

    def key(self) -> Tuple[int, int]:
        return self.to_R, self.to_T


class Cone(BaseModel):
    """
    An ac-object with two legs, such as a direct product or a pull-back
    """

    model_config = ConfigDict(frozen=True)

    apex: AcObject
    left: AcMorphism
    right: AcMorphism
    triples: Tuple[StrictTriple, ...] = ()
    indices: Tuple[int, ...] = ()
