"""
Contravariant module-valued functors: validation, naturality, additive extension and transfer,
and composition with functors between categories
"""

import logging
from typing import Any, Callable, Dict, Mapping, Optional
import numpy as np
from algebra.modules import direct_sum
from models.categories import FinCat, Quotient
from models.covers import AcMorphism, AcObject
from models.errors import PreconditionError
from models.functors import ContraFun, NatMap
from models.modules import FgMod, ModHom
from models.reports import Report

logger = logging.getLogger(__name__)


def validate_functor(F: ContraFun) -> Report:
    """
    Every object has a module over the functor's ring, every morphism a hom between the right
    modules, identities go to identities and F(g∘f) = F(f)∘F(g)
    :param F: the functor
    :return: the report, witnesses name the composable pair
    """
    cat = F.base
    report = Report(subject=F.name or "functor")
    for obj in cat.objects:
        module = F.on_obj.get(obj)
        if module is None:
            report.add("missing", f"no module at {obj}", obj)
        elif module.ring != F.ring:
            report.add("ring", f"module at {obj} is over {module.ring}, not {F.ring}", obj)
    if not report.ok:
        return report
    for f in cat.ids:
        hom = F.on_mor.get(f)
        if hom is None:
            report.add("missing", f"no map for {cat.describe(f)}", f)
        elif hom.dom != F.on_obj[cat.dst(f)] or hom.cod != F.on_obj[cat.src(f)]:
            report.add("endpoints", f"map of {cat.describe(f)} goes {hom.dom} -> {hom.cod}", f)
    if not report.ok:
        return report
    for obj in cat.objects:
        if not F.on_mor[cat.ident[obj]].equals(ModHom.identity(F.on_obj[obj])):
            report.add("identity", f"identity of {obj} does not map to the identity", cat.ident[obj])
    for (g, f), h in sorted(cat.comp.items()):
        expected = F.on_mor[f] @ F.on_mor[g]
        if not F.on_mor[h].equals(expected):
            column = F.on_mor[h].first_difference(expected)
            report.add(
                "functoriality",
                f"F({cat.label(g)}∘{cat.label(f)}) differs from F({cat.label(f)})∘F({cat.label(g)})",
                f"pair ({g}, {f}) at generator {column}",
            )
    return report


def require_functor(F: ContraFun) -> None:
    report = validate_functor(F)
    if not report.ok:
        raise PreconditionError(f"{F.name or 'functor'} is not a functor", witness=str(report.first()))


def check_natural(eta: NatMap) -> Report:
    """
    η_R∘F(φ) = G(φ)∘η_Q for every φ: R -> Q
    """
    cat = eta.src.base
    report = Report(subject=eta.name or "natural map")
    for obj in cat.objects:
        component = eta.components.get(obj)
        if component is None:
            report.add("missing", f"no component at {obj}", obj)
        elif component.dom != eta.src.at(obj) or component.cod != eta.dst.at(obj):
            report.add("endpoints", f"component at {obj} has the wrong endpoints", obj)
    if not report.ok:
        return report
    for phi in cat.ids:
        source, target = cat.src(phi), cat.dst(phi)
        left = eta.components[source] @ eta.src(phi)
        right = eta.dst(phi) @ eta.components[target]
        if not left.equals(right):
            column = left.first_difference(right)
            report.add("naturality", f"square at {cat.describe(phi)} does not commute", f"{phi} at generator {column}")
    return report


def identity_map(F: ContraFun) -> NatMap:
    return NatMap(
        name=f"id_{F.name}", src=F, dst=F, components={obj: ModHom.identity(F.at(obj)) for obj in F.base.objects}
    )


def scalar_map(F: ContraFun, factor: int) -> NatMap:
    return NatMap(
        name=f"{factor}·{F.name}",
        src=F,
        dst=F,
        components={obj: ModHom.scalar(F.at(obj), factor) for obj in F.base.objects},
    )


def constant_functor(cat: FinCat, module: FgMod, name: str = "") -> ContraFun:
    return ContraFun(
        name=name or f"const {module}",
        base=cat,
        ring=module.ring,
        on_obj={obj: module for obj in cat.objects},
        on_mor={f: ModHom.identity(module) for f in cat.ids},
    )


def restrict_along(
    F: ContraFun,
    base: FinCat,
    on_obj: Callable[[Any], Any],
    on_mor: Callable[[int], int],
    name: Optional[str] = None,
) -> ContraFun:
    """
    The composite F∘m for a functor m: base -> F.base
    """
    return ContraFun(
        name=name or f"{F.name}∘m",
        base=base,
        ring=F.ring,
        on_obj={obj: F.at(on_obj(obj)) for obj in base.objects},
        on_mor={f: F(on_mor(f)) for f in base.ids},
    )


def compose_with_quotient(F: ContraFun, quotient: Quotient) -> ContraFun:
    """
    ã∘e on the source of a quotient
    """
    return restrict_along(F, quotient.source, lambda obj: obj, quotient, name=f"{F.name}∘e")


class AdditiveExtension:
    """
    The additive extension of a contravariant functor to the additive cover
    Values on sums are products in the order of the terms.
    """

    def __init__(self, functor: ContraFun):
        self.functor = functor

    def at(self, obj: AcObject) -> FgMod:
        return direct_sum([self.functor.at(t) for t in obj.terms], self.functor.ring)

    def offsets(self, obj: AcObject) -> list:
        result, position = [], 0
        for t in obj.terms:
            result.append(position)
            position += self.functor.at(t).n
        return result

    def __call__(self, mor: AcMorphism) -> ModHom:
        """
        The j-component of the image reads the f(j)-component through F(φ_j)
        """
        F = self.functor
        dom, cod = self.at(mor.cod), self.at(mor.dom)
        rows, cols = self.offsets(mor.dom), self.offsets(mor.cod)
        matrix = np.zeros((cod.n, dom.n), dtype=object)
        for j, (i, phi) in enumerate(zip(mor.index_map, mor.components)):
            block = F(phi).matrix
            matrix[rows[j] : rows[j] + block.shape[0], cols[i] : cols[i] + block.shape[1]] = block
        return ModHom(dom=dom, cod=cod, matrix=matrix)


def additive_extension(F: ContraFun) -> AdditiveExtension:
    return AdditiveExtension(F)


def additive_transfer(transfer: ContraFun, mor: AcMorphism) -> ModHom:
    """
    The covariant extension of a wrong-way functor: the i-component of the image is the sum over
    j with f(j) = i of a°(φ_j) applied to the j-component
    :param transfer: a° stored as a contravariant functor on the opposite category
    :param mor: the ac-morphism
    :return: the map Π_j a°(R_j) -> Π_i a°(Q_i)
    """
    extension = AdditiveExtension(transfer)
    dom, cod = extension.at(mor.dom), extension.at(mor.cod)
    cols, rows = extension.offsets(mor.dom), extension.offsets(mor.cod)
    matrix = np.zeros((cod.n, dom.n), dtype=object)
    for j, (i, phi) in enumerate(zip(mor.index_map, mor.components)):
        block = transfer(phi).matrix
        matrix[rows[i] : rows[i] + block.shape[0], cols[j] : cols[j] + block.shape[1]] += block
    return ModHom(dom=dom, cod=cod, matrix=matrix)


class AcFunctor:
    """
    A functor from a category to its additive cover, given by object and morphism tables
    """

    def __init__(self, base: FinCat, on_obj: Mapping[Any, AcObject], on_mor: Mapping[int, AcMorphism], name: str = ""):
        self.base = base
        self.on_obj: Dict[Any, AcObject] = dict(on_obj)
        self.on_mor: Dict[int, AcMorphism] = dict(on_mor)
        self.name = name

    def obj(self, obj: Any) -> AcObject:
        return self.on_obj[obj]

    def __call__(self, f: int) -> AcMorphism:
        return self.on_mor[f]


def precompose(F: ContraFun, m: AcFunctor) -> ContraFun:
    """
    The composite F^ac∘m as a contravariant functor on m's base
    """
    extension = AdditiveExtension(F)
    result = ContraFun(
        name=f"{F.name}^ac∘{m.name or 'm'}",
        base=m.base,
        ring=F.ring,
        on_obj={obj: extension.at(m.obj(obj)) for obj in m.base.objects},
        on_mor={f: extension(m(f)) for f in m.base.ids},
    )
    logger.debug(f"{result.name}: values {[str(v) for v in result.on_obj.values()]}")
    return result
