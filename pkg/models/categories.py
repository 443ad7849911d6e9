"""
Finite categories as composition tables, with their markings and derived structures
"""

from functools import cached_property
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, ConfigDict, Field, model_validator
from models.errors import PreconditionError
from util.setup import max_morphisms


class Morphism(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    src: Any
    dst: Any
    label: str = ""

    @property
    def name(self) -> str:
        return self.label or str(self.id)


class Markings(BaseModel):
    """
    The optional structures carried by a category

    sub_A None means every morphism lies in A; sub_G None means G holds the identities only.
    interior and cointerior hold whole subgroups of the automorphism groups; objects left out
    carry the trivial subgroup.
    """

    model_config = ConfigDict(frozen=True)

    sub_A: Optional[FrozenSet[int]] = None
    sub_G: Optional[FrozenSet[int]] = None
    interior: Dict[Any, FrozenSet[int]] = Field(default_factory=dict)
    cointerior: Dict[Any, FrozenSet[int]] = Field(default_factory=dict)


class FinCat(BaseModel):
    """
    A finite category: objects, morphisms with global integer ids, a composition table keyed by
    (g, f) meaning g∘f, and the identity of each object. Hom-sets are derived indexes.
    The constructor checks only the shape of the data; validate_category checks the axioms.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    objects: Tuple[Any, ...]
    morphisms: Tuple[Morphism, ...]
    comp: Dict[Tuple[int, int], int]
    ident: Dict[Any, int]
    markings: Markings = Field(default_factory=Markings)

    @model_validator(mode="after")
    def bounded(self) -> Self:
        limit = max_morphisms()
        if len(self.morphisms) > limit:
            raise ValueError(f"{len(self.morphisms)} morphisms exceed the limit of {limit}")
        ids = [m.id for m in self.morphisms]
        if len(set(ids)) != len(ids):
            raise ValueError("morphism ids are not unique")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object names are not unique")
        return self

    @cached_property
    def by_id(self) -> Dict[int, Morphism]:
        return {m.id: m for m in self.morphisms}

    @cached_property
    def homs(self) -> Dict[Tuple[Any, Any], Tuple[int, ...]]:
        index: Dict[Tuple[Any, Any], List[int]] = {}
        for m in sorted(self.morphisms, key=lambda m: m.id):
            index.setdefault((m.src, m.dst), []).append(m.id)
        return {key: tuple(value) for key, value in index.items()}

    @cached_property
    def inverses(self) -> Dict[int, int]:
        result = {}
        for m in self.morphisms:
            for g in self.hom(m.dst, m.src):
                if self.comp.get((g, m.id)) == self.ident.get(m.src) and self.comp.get((m.id, g)) == self.ident.get(m.dst):
                    result[m.id] = g
                    break
        return result

    @cached_property
    def witnesses(self) -> Mapping[int, Tuple[int, int]]:
        """Read-only factorization witnesses φ = ι∘φ* over the marked A-morphisms."""
        members = self.a_morphisms
        found = {}
        for f in self.by_id:
            pair = self.factor(f, members)
            if pair is not None:
                found[f] = pair
        return MappingProxyType(found)

    def factor(self, phi: int, members: FrozenSet[int]) -> Optional[Tuple[int, int]]:
        """The first (φ*, ι) with φ* an isomorphism, ι in members and φ = ι∘φ*"""
        for star in self.out_of(self.src(phi)):
            if not self.is_iso(star):
                continue
            for iota in self.hom(self.dst(star), self.dst(phi)):
                if iota in members and self.comp[(iota, star)] == phi:
                    return star, iota
        return None

    @property
    def ids(self) -> List[int]:
        return sorted(self.by_id)

    def __contains__(self, f: int) -> bool:
        return f in self.by_id

    def src(self, f: int) -> Any:
        return self.by_id[f].src

    def dst(self, f: int) -> Any:
        return self.by_id[f].dst

    def label(self, f: int) -> str:
        return self.by_id[f].name

    def describe(self, f: int) -> str:
        m = self.by_id[f]
        return f"{m.name}: {m.src} -> {m.dst}"

    def identity(self, obj: Any) -> int:
        return self.ident[obj]

    def is_identity(self, f: int) -> bool:
        return self.ident.get(self.src(f)) == f

    def hom(self, src: Any, dst: Any) -> Tuple[int, ...]:
        """
        The morphisms src -> dst, by increasing id
        """
        return self.homs.get((src, dst), ())

    def auts(self, obj: Any) -> Tuple[int, ...]:
        return self.hom(obj, obj)

    def out_of(self, obj: Any) -> List[int]:
        return [m.id for m in sorted(self.morphisms, key=lambda m: m.id) if m.src == obj]

    def into(self, obj: Any) -> List[int]:
        return [m.id for m in sorted(self.morphisms, key=lambda m: m.id) if m.dst == obj]

    def composable(self, g: int, f: int) -> bool:
        return self.dst(f) == self.src(g)

    def compose(self, g: int, f: int) -> int:
        """
        g∘f, f applied first
        """
        if not self.composable(g, f):
            raise PreconditionError(f"cannot compose {self.label(g)} after {self.label(f)}", witness=f"({g}, {f})")
        result = self.comp.get((g, f))
        if result is None:
            raise PreconditionError("composition table has no entry", witness=f"({g}, {f})")
        return result

    def compose_path(self, arrows: Sequence[int]) -> int:
        """
        Composite of a path given in order of application
        """
        result = arrows[0]
        for arrow in arrows[1:]:
            result = self.compose(arrow, result)
        return result

    def is_iso(self, f: int) -> bool:
        return f in self.inverses

    def inverse(self, f: int) -> int:
        if f not in self.inverses:
            raise PreconditionError(f"{self.describe(f)} is not an isomorphism", witness=str(f))
        return self.inverses[f]

    def isomorphic(self, a: Any, b: Any) -> bool:
        return any(self.is_iso(f) for f in self.hom(a, b))

    @property
    def a_morphisms(self) -> FrozenSet[int]:
        if self.markings.sub_A is None:
            return frozenset(self.by_id)
        return self.markings.sub_A

    @property
    def g_morphisms(self) -> FrozenSet[int]:
        if self.markings.sub_G is None:
            return frozenset(self.ident.values())
        return self.markings.sub_G

    def in_A(self, f: int) -> bool:
        return f in self.a_morphisms

    def in_G(self, f: int) -> bool:
        return f in self.g_morphisms

    def interior(self, obj: Any) -> FrozenSet[int]:
        return self.markings.interior.get(obj, frozenset({self.ident[obj]}))

    def cointerior(self, obj: Any) -> FrozenSet[int]:
        return self.markings.cointerior.get(obj, frozenset({self.ident[obj]}))

    def closure(self, obj: Any, generators: Iterable[int]) -> FrozenSet[int]:
        """
        The submonoid of B(obj) generated by some endomorphisms; a subgroup for finite groups
        """
        result = {self.ident[obj]}
        frontier = list(result)
        gens = list(generators)
        for g in gens:
            if self.src(g) != obj or self.dst(g) != obj:
                raise PreconditionError(f"{self.describe(g)} is not an endomorphism of {obj}", witness=str(g))
        while frontier:
            current = frontier.pop()
            for g in gens:
                product = self.compose(g, current)
                if product not in result:
                    result.add(product)
                    frontier.append(product)
        return frozenset(result)

    def with_markings(self, **changes) -> Self:
        """
        A fresh category with some markings replaced; derived caches are rebuilt
        """
        markings = Markings(**{**self.markings.model_dump(), **changes})
        return FinCat(
            name=self.name,
            objects=self.objects,
            morphisms=self.morphisms,
            comp=self.comp,
            ident=self.ident,
            markings=markings,
        )


class SetFunctor(BaseModel):
    """
    A covariant functor to finite sets: a fiber per object and an element map per morphism
    """

    model_config = ConfigDict(frozen=True)

    on_obj: Dict[Any, Tuple[Any, ...]]
    on_mor: Dict[int, Dict[Any, Any]]

    def fiber(self, obj: Any) -> Tuple[Any, ...]:
        return self.on_obj.get(obj, ())

    def apply(self, f: int, element: Any) -> Any:
        return self.on_mor[f][element]

    @classmethod
    def constant(cls, cat: FinCat, elements: Sequence[Any]) -> Self:
        points = tuple(elements)
        return cls(
            on_obj={obj: points for obj in cat.objects},
            on_mor={f: {x: x for x in points} for f in cat.ids},
        )


class SemidirectProduct(BaseModel):
    """
    s⋊B with its forgetful functor; objects are pairs (s, Q), morphisms lift pairs (t, φ)
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    category: FinCat
    lifts: Dict[Tuple[Any, int], int]
    forget: Dict[int, int]
    element: Dict[int, Any]

    def lift(self, t: Any, phi: int) -> int:
        """
        The morphism (t, φ): (t, src φ) -> (s_φ(t), dst φ)
        """
        return self.lifts[(t, phi)]

    def base(self, mor: int) -> int:
        return self.forget[mor]


class Quotient(BaseModel):
    """
    A quotient of a category by morphism classes, with the quotient functor

    Each class is named by its least member, so the representative of a quotient morphism
    is the morphism of the source with the same id.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: FinCat
    category: FinCat
    on_mor: Dict[int, int]
    classes: Dict[int, Tuple[int, ...]]

    def __call__(self, f: int) -> int:
        return self.on_mor[f]

    def members(self, f: int) -> Tuple[int, ...]:
        return self.classes[f]

    def representative(self, f: int) -> int:
        return self.classes[f][0]
