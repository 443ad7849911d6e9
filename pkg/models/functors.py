from typing import Any, Dict

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, ConfigDict, Field
from models.categories import FinCat
from models.errors import PreconditionError
from models.modules import FgMod, ModHom, Ring


class ContraFun(BaseModel):
    """
    A contravariant functor to modules: on_mor[φ] for φ: R -> Q maps F(Q) to F(R)
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    base: FinCat
    ring: Ring = Field(default_factory=Ring)
    on_obj: Dict[Any, FgMod]
    on_mor: Dict[int, ModHom]

    def at(self, obj: Any) -> FgMod:
        if obj not in self.on_obj:
            raise PreconditionError(f"{self.name or 'functor'} has no value at {obj}", witness=str(obj))
        return self.on_obj[obj]

    def __call__(self, f: int) -> ModHom:
        if f not in self.on_mor:
            raise PreconditionError(f"{self.name or 'functor'} has no map for morphism {f}", witness=str(f))
        return self.on_mor[f]

    def replace(self, f: int, hom: ModHom) -> Self:
        """
        A copy with the map of one morphism replaced
        """
        return ContraFun(
            name=self.name, base=self.base, ring=self.ring, on_obj=self.on_obj, on_mor={**self.on_mor, f: hom}
        )


class NatMap(BaseModel):
    """
    A natural map between contravariant functors on one base, one component per object
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    src: ContraFun
    dst: ContraFun
    components: Dict[Any, ModHom]

    def __getitem__(self, obj: Any) -> ModHom:
        return self.components[obj]

    def replace(self, obj: Any, hom: ModHom) -> Self:
        return NatMap(name=self.name, src=self.src, dst=self.dst, components={**self.components, obj: hom})
