from typing import Any, Dict, FrozenSet, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field
from models.categories import FinCat, Quotient, SemidirectProduct, SetFunctor
from models.reports import Report


class HomotopicSystem(BaseModel):
    """
    The data (I, I°, s, n, ν) over a category B with its bi-exterior quotient e: B -> B̃

    n is stored on objects and on the morphisms of s⋊B; ν_{(t,Q)}: n(t,Q) -> Q lives in B̃;
    to_final holds the unique Ã-morphism from every object of B̃ to the final object P.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    quotient: Quotient
    interior: Dict[Any, FrozenSet[int]] = Field(default_factory=dict)
    cointerior: Dict[Any, FrozenSet[int]] = Field(default_factory=dict)
    s: SetFunctor
    product: SemidirectProduct
    n_obj: Dict[Tuple[Any, Any], Any]
    n_mor: Dict[int, int]
    nu: Dict[Tuple[Any, Any], int]
    final: Any
    to_final: Dict[Any, int]

    @property
    def base(self) -> FinCat:
        return self.quotient.source

    @property
    def tilde(self) -> FinCat:
        return self.quotient.category

    def I(self, obj: Any) -> FrozenSet[int]:
        return self.interior.get(obj, frozenset({self.base.ident[obj]}))

    def I_co(self, obj: Any) -> FrozenSet[int]:
        return self.cointerior.get(obj, frozenset({self.base.ident[obj]}))

    def n(self, t: Any, phi: int) -> int:
        """
        n(t, φ) in B̃ for φ: R -> Q in B and t in s_R
        """
        return self.n_mor[self.product.lift(t, phi)]


class DegreeResult(BaseModel):
    """
    One row of a verification table
    """

    degree: int
    identity: Optional[bool] = None
    witness: str = ""
    cohomology: str = ""
    vanishes: Optional[bool] = None


class Verification(BaseModel):
    report: Report
    degrees: List[DegreeResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.report.ok
