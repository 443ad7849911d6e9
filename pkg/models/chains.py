from typing import Any, Dict, List, Tuple
from pydantic import BaseModel, ConfigDict, model_validator
from models.categories import FinCat


class Chain(BaseModel):
    """
    A functor from the ordered set 0 < 1 < ... < n: objects q(0..n) and the arrows q(i-1 • i)
    """

    model_config = ConfigDict(frozen=True)

    objs: Tuple[Any, ...]
    arrows: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def degree(self) -> "Chain":
        if len(self.objs) != len(self.arrows) + 1:
            raise ValueError(f"{len(self.arrows)} arrows need {len(self.arrows) + 1} objects, got {len(self.objs)}")
        return self

    @property
    def n(self) -> int:
        return len(self.arrows)

    @property
    def start(self) -> Any:
        return self.objs[0]

    @classmethod
    def from_arrows(cls, cat: FinCat, arrows: Tuple[int, ...]) -> "Chain":
        objs = [cat.src(arrows[0])] + [cat.dst(f) for f in arrows]
        return cls(objs=tuple(objs), arrows=tuple(arrows))

    @classmethod
    def point(cls, obj: Any) -> "Chain":
        return cls(objs=(obj,))

    def is_composable(self, cat: FinCat) -> bool:
        return all(
            cat.src(f) == self.objs[i] and cat.dst(f) == self.objs[i + 1] for i, f in enumerate(self.arrows)
        )

    def label(self, cat: FinCat) -> str:
        if not self.arrows:
            return f"({self.objs[0]})"
        return "(" + " > ".join(cat.label(f) for f in self.arrows) + ")"


class ChainIso(BaseModel):
    """
    A natural isomorphism between chains: χ_i: q(i) -> q′(i)
    """

    model_config = ConfigDict(frozen=True)

    src: Chain
    dst: Chain
    components: Tuple[int, ...]


class Orbit(BaseModel):
    """
    A class of chains under natural G-isomorphisms

    transports[q] is a morphism τ: q(0) -> rep(0) with a_q = F(τ)(a_rep) for stable cochains;
    generators are the χ_0 components of the natural automorphisms of the representative.
    """

    model_config = ConfigDict(frozen=True)

    rep: Chain
    members: Tuple[Chain, ...]
    transports: Dict[Chain, int]
    generators: Tuple[int, ...]
    isos: Tuple[ChainIso, ...] = ()

    def transport(self, chain: Chain) -> int:
        return self.transports[chain]


def chain_index(orbits: List[Orbit]) -> Dict[Chain, int]:
    return {member: k for k, orbit in enumerate(orbits) for member in orbit.members}
