"""
The additive cover of a finite category

Morphisms of ac(B) compose componentwise; direct products of base objects are sums over strict
triples, pull-backs are sub-sums of products. Everything is checked against the universal
properties by exhaustive search over single-object cones.
"""

import logging
from itertools import product
from typing import Any, Dict, List, Optional, Tuple
from algebra.categories import arrows_to_final, exterior_quotient, has_final_object
from algebra.functors import AcFunctor
from models.categories import FinCat, SetFunctor
from models.covers import AcMorphism, AcObject, Cone, StrictTriple
from models.errors import PreconditionError, PropertyFailure
from models.reports import Report

logger = logging.getLogger(__name__)


def ac_compose(cat: FinCat, second: AcMorphism, first: AcMorphism) -> AcMorphism:
    """
    second∘first: index maps compose, components compose in the base
    """
    if first.cod != second.dom:
        raise PreconditionError("ac-morphisms are not composable", witness=f"{first.cod} vs {second.dom}")
    index_map, components = [], []
    for i, phi in zip(first.index_map, first.components):
        index_map.append(second.index_map[i])
        components.append(cat.compose(second.components[i], phi))
    return AcMorphism(dom=first.dom, cod=second.cod, index_map=tuple(index_map), components=tuple(components))


def ac_identity(cat: FinCat, obj: AcObject) -> AcMorphism:
    return AcMorphism(
        dom=obj, cod=obj, index_map=tuple(range(len(obj))), components=tuple(cat.ident[t] for t in obj.terms)
    )


def ac_direct_sum(*objects: AcObject) -> AcObject:
    result = AcObject()
    for obj in objects:
        result = result + obj
    return result


def ac_fold(cat: FinCat, obj: Any, copies: int) -> AcMorphism:
    """
    The fold map from copies of one object to the object, identity components
    """
    return AcMorphism(
        dom=AcObject(terms=(obj,) * copies),
        cod=AcObject.single(obj),
        index_map=(0,) * copies,
        components=(cat.ident[obj],) * copies,
    )


def epi_violation(cat: FinCat) -> Optional[Tuple[int, int, int]]:
    """
    (ψ, φ, φ′) with φ∘ψ = φ′∘ψ and φ ≠ φ′, if any
    """
    for psi in cat.ids:
        seen: Dict[int, int] = {}
        for phi in cat.out_of(cat.dst(psi)):
            composite = cat.comp[(phi, psi)]
            if composite in seen:
                return psi, seen[composite], phi
            seen[composite] = phi
    return None


def all_epi(cat: FinCat) -> bool:
    return epi_violation(cat) is None


class AdditiveCover:
    """
    Cached enumeration of divisors, non-extendable sets and strict triples of one category
    """

    def __init__(self, cat: FinCat):
        self.cat = cat
        self._divisors: Dict[int, List[Tuple[int, int]]] = {}
        self._nonextendable: Dict[Tuple[Any, int], Tuple[int, ...]] = {}
        self._triples: Dict[Tuple[Any, Any], List[StrictTriple]] = {}
        self._products: Dict[Tuple[Any, Any], Cone] = {}

    def divisors(self, alpha: int) -> List[Tuple[int, int]]:
        """
        Every (θ′, α′) with α′∘θ′ = α, θ′ out of the source of α
        """
        if alpha not in self._divisors:
            cat = self.cat
            found = []
            for theta in cat.out_of(cat.src(alpha)):
                for quotient in cat.hom(cat.dst(theta), cat.dst(alpha)):
                    if cat.comp[(quotient, theta)] == alpha:
                        found.append((theta, quotient))
                        break
            self._divisors[alpha] = found
        return self._divisors[alpha]

    def proper_divisors(self, alpha: int) -> List[Tuple[int, int]]:
        return [(theta, quotient) for theta, quotient in self.divisors(alpha) if not self.cat.is_iso(theta)]

    def divisor_classes(self, alpha: int) -> List[Tuple[int, int]]:
        """
        One divisor per class under post-composition with isomorphisms; the isomorphism class is
        represented by (id, α) and comes first
        """
        cat = self.cat
        source = cat.src(alpha)
        classes = [(cat.ident[source], alpha)]
        covered = {theta for theta, _ in self.divisors(alpha) if cat.is_iso(theta)}
        for theta, quotient in self.proper_divisors(alpha):
            if theta in covered:
                continue
            classes.append((theta, quotient))
            for other in cat.objects:
                for iso in cat.hom(cat.dst(theta), other):
                    if cat.is_iso(iso):
                        covered.add(cat.comp[(iso, theta)])
        return classes

    def nonextendable(self, target: Any, alpha: int) -> Tuple[int, ...]:
        """
        The morphisms β from the source of α to target that factor through no proper divisor of α
        """
        key = (target, alpha)
        if key not in self._nonextendable:
            cat = self.cat
            source = cat.src(alpha)
            extendable = set()
            for theta, _ in self.proper_divisors(alpha):
                for beta in cat.hom(cat.dst(theta), target):
                    extendable.add(cat.comp[(beta, theta)])
            self._nonextendable[key] = tuple(b for b in cat.hom(source, target) if b not in extendable)
        return self._nonextendable[key]

    def is_strict(self, alpha: int, beta: int) -> bool:
        return beta in self.nonextendable(self.cat.dst(beta), alpha)

    def equivalent(self, triple: StrictTriple) -> List[StrictTriple]:
        """
        The triples (α∘θ⁻¹, Q₁, β∘θ⁻¹) for isomorphisms θ out of the apex
        """
        cat = self.cat
        result = []
        for theta in cat.out_of(triple.apex):
            if cat.is_iso(theta):
                back = cat.inverse(theta)
                result.append(
                    StrictTriple(
                        apex=cat.dst(theta), to_R=cat.comp[(triple.to_R, back)], to_T=cat.comp[(triple.to_T, back)]
                    )
                )
        return result

    def strict_triples(self, left: Any, right: Any) -> List[StrictTriple]:
        """
        One representative per class of strict triples over (left, right), least in
        (apex position, α′ id, β′ id)
        """
        key = (left, right)
        if key not in self._triples:
            cat = self.cat
            seen = set()
            representatives = []
            for apex in cat.objects:
                for alpha in cat.hom(apex, left):
                    for beta in self.nonextendable(right, alpha):
                        triple = StrictTriple(apex=apex, to_R=alpha, to_T=beta)
                        if triple in seen:
                            continue
                        representatives.append(triple)
                        seen.update(self.equivalent(triple))
            self._triples[key] = representatives
        return self._triples[key]

    def product(self, left: Any, right: Any) -> Cone:
        key = (left, right)
        if key not in self._products:
            triples = self.strict_triples(left, right)
            apex = AcObject(terms=tuple(t.apex for t in triples))
            first = AcMorphism(
                dom=apex, cod=AcObject.single(left), index_map=(0,) * len(triples), components=tuple(t.to_R for t in triples)
            )
            second = AcMorphism(
                dom=apex,
                cod=AcObject.single(right),
                index_map=(0,) * len(triples),
                components=tuple(t.to_T for t in triples),
            )
            self._products[key] = Cone(apex=apex, left=first, right=second, triples=tuple(triples))
        return self._products[key]

    def factor_through(self, cone: Cone, source: Any, gamma: int, delta: int) -> List[Tuple[int, int]]:
        """
        Every (i, φ) with left_i∘φ = γ and right_i∘φ = δ
        """
        cat = self.cat
        found = []
        for i, term in enumerate(cone.apex.terms):
            for phi in cat.hom(source, term):
                if cat.comp[(cone.left.components[i], phi)] == gamma and cat.comp[(cone.right.components[i], phi)] == delta:
                    found.append((i, phi))
        return found


def partition_rows(cat: FinCat, cover: Optional[AdditiveCover] = None) -> List[Dict[str, Any]]:
    """
    For each (Q, R, T, α: Q -> R), how B(T,Q) splits over the divisor classes of α
    """
    cover = cover or AdditiveCover(cat)
    rows = []
    for q, r in product(cat.objects, repeat=2):
        for alpha in cat.hom(q, r):
            classes = cover.divisor_classes(alpha)
            for t in cat.objects:
                hits: Dict[int, List[int]] = {beta: [] for beta in cat.hom(q, t)}
                sizes = []
                for theta, quotient in classes:
                    pieces = {cat.comp[(b, theta)] for b in cover.nonextendable(t, quotient)}
                    sizes.append(len(pieces))
                    for beta in pieces:
                        hits[beta].append(theta)
                rows.append(
                    {
                        "Q": q,
                        "R": r,
                        "T": t,
                        "alpha": alpha,
                        "classes": len(classes),
                        "sizes": tuple(sizes),
                        "uncovered": tuple(b for b, h in hits.items() if not h),
                        "overlaps": tuple((b, tuple(h)) for b, h in hits.items() if len(h) > 1),
                    }
                )
    return rows


def check_multiplicative(cat: FinCat, rows: Optional[List[Dict[str, Any]]] = None) -> Report:
    """
    All morphisms are epimorphisms and, for every α: Q -> R and T, B(T,Q) is the disjoint union
    of the sets B(T,Q′)_{α/θ′}∘θ′ over divisor classes θ′
    """
    report = Report(subject=f"{cat.name or 'category'} multiplicativity")
    witness = epi_violation(cat)
    if witness is not None:
        psi, phi, other = witness
        report.add("epi", f"{cat.label(psi)} is not an epimorphism", f"{phi}∘{psi} = {other}∘{psi}")
        return report
    for row in rows if rows is not None else partition_rows(cat):
        where = f"Q={row['Q']} R={row['R']} T={row['T']} α={cat.label(row['alpha'])}"
        for beta in row["uncovered"]:
            report.add("cover", f"{cat.label(beta)} lies in no piece", f"{where} β={beta}")
        for beta, thetas in row["overlaps"]:
            report.add("disjoint", f"{cat.label(beta)} lies in several pieces", f"{where} β={beta} θ′={list(thetas)}")
    return report


def require_multiplicative(cat: FinCat) -> None:
    report = check_multiplicative(cat)
    if not report.ok:
        raise PreconditionError(f"{cat.name or 'category'} is not multiplicative", witness=str(report.first()))


def check_product_cone(cat: FinCat, left: Any, right: Any, cone: Cone, cover: Optional[AdditiveCover] = None) -> Report:
    """
    Each pair (γ: U -> left, δ: U -> right) factors through the cone exactly once
    """
    cover = cover or AdditiveCover(cat)
    report = Report(subject=f"{left} × {right}")
    for source in cat.objects:
        for gamma in cat.hom(source, left):
            for delta in cat.hom(source, right):
                found = cover.factor_through(cone, source, gamma, delta)
                if len(found) != 1:
                    report.add(
                        "universal", f"cone ({cat.label(gamma)}, {cat.label(delta)}) factors {len(found)} times", f"{gamma} {delta}"
                    )
    return report


def direct_product(cat: FinCat, left: Any, right: Any, cover: Optional[AdditiveCover] = None, check: bool = True) -> Cone:
    """
    left × right as the sum over strict-triple representatives, with its two projections
    :param cat: a multiplicative category
    :param left: R
    :param right: T
    :param cover: a shared cache
    :param check: verify the universal property
    :return: the product cone
    """
    cover = cover or AdditiveCover(cat)
    cone = cover.product(left, right)
    if check:
        report = check_product_cone(cat, left, right, cone, cover)
        if not report.ok:
            raise PropertyFailure(f"{left} × {right} is not a product", witness=str(report.first()))
    return cone


def check_pullback_cones(cat: FinCat, alpha: int, beta: int, cone: Cone) -> Report:
    """
    The cone commutes over α and β and every commuting single-object cone factors exactly once
    """
    report = Report(subject=f"pull-back of {cat.label(alpha)}, {cat.label(beta)}")
    q, r = cat.src(alpha), cat.src(beta)
    for i in range(len(cone.apex)):
        if cat.comp[(alpha, cone.left.components[i])] != cat.comp[(beta, cone.right.components[i])]:
            report.add("commute", f"term {i} does not commute", i)
    cover = AdditiveCover(cat)
    for source in cat.objects:
        for gamma in cat.hom(source, q):
            for delta in cat.hom(source, r):
                if cat.comp[(alpha, gamma)] != cat.comp[(beta, delta)]:
                    continue
                found = cover.factor_through(cone, source, gamma, delta)
                if len(found) != 1:
                    report.add(
                        "universal", f"cone ({cat.label(gamma)}, {cat.label(delta)}) factors {len(found)} times", f"{gamma} {delta}"
                    )
    return report


def pull_back(cat: FinCat, alpha: int, beta: int, cover: Optional[AdditiveCover] = None, check: bool = True) -> Cone:
    """
    The sub-sum of Q × R on the terms whose legs close the square over α and β
    :param cat: a multiplicative category
    :param alpha: α: Q -> T
    :param beta: β: R -> T
    :return: the pull-back cone; indices name the kept product terms
    """
    if cat.dst(alpha) != cat.dst(beta):
        raise PreconditionError("pull-back legs have different targets", witness=f"{alpha} {beta}")
    cover = cover or AdditiveCover(cat)
    full = direct_product(cat, cat.src(alpha), cat.src(beta), cover, check=False)
    kept = tuple(
        i
        for i in range(len(full.apex))
        if cat.comp[(alpha, full.left.components[i])] == cat.comp[(beta, full.right.components[i])]
    )
    apex = AcObject(terms=tuple(full.apex.terms[i] for i in kept))
    cone = Cone(
        apex=apex,
        left=AcMorphism(
            dom=apex, cod=full.left.cod, index_map=(0,) * len(kept), components=tuple(full.left.components[i] for i in kept)
        ),
        right=AcMorphism(
            dom=apex, cod=full.right.cod, index_map=(0,) * len(kept), components=tuple(full.right.components[i] for i in kept)
        ),
        triples=tuple(full.triples[i] for i in kept),
        indices=kept,
    )
    if check:
        report = check_pullback_cones(cat, alpha, beta, cone)
        if not report.ok:
            raise PropertyFailure("pull-back fails its universal property", witness=str(report.first()))
    return cone


def cone_isomorphism(cat: FinCat, first: Cone, second: Cone) -> AcMorphism:
    """
    The ac-isomorphism between two cones over the same pair that commutes with the legs
    """
    index_map, components = [], []
    for i, term in enumerate(first.apex.terms):
        found = []
        for k, other in enumerate(second.apex.terms):
            for phi in cat.hom(term, other):
                if (
                    cat.is_iso(phi)
                    and cat.comp[(second.left.components[k], phi)] == first.left.components[i]
                    and cat.comp[(second.right.components[k], phi)] == first.right.components[i]
                ):
                    found.append((k, phi))
        if len(found) != 1:
            raise PropertyFailure(f"term {i} of the first cone matches {len(found)} terms", witness=str(found))
        index_map.append(found[0][0])
        components.append(found[0][1])
    if sorted(index_map) != list(range(len(second.apex))):
        raise PropertyFailure("cone terms do not match one to one", witness=str(index_map))
    return AcMorphism(dom=first.apex, cod=second.apex, index_map=tuple(index_map), components=tuple(components))


def exterior_multiplicative(cat: FinCat, interior=None) -> Report:
    """
    The exterior quotient is multiplicative and its strict triples are the images of strict triples
    """
    structure = cat.markings.interior if interior is None else interior
    report = Report(subject=f"{cat.name or 'category'} exterior quotient")
    for obj, members in structure.items():
        outside = sorted(f for f in members if not cat.in_A(f))
        if outside:
            report.add("interior", f"interior at {obj} leaves A", outside)
    quotient = exterior_quotient(cat, structure)
    tilde = quotient.category
    report.extend(check_multiplicative(tilde), prefix="quotient")
    if not report.ok:
        return report
    base_cover, tilde_cover = AdditiveCover(cat), AdditiveCover(tilde)
    for left, right in product(cat.objects, repeat=2):
        lifted = set()
        for apex in cat.objects:
            for alpha in cat.hom(apex, left):
                for beta in base_cover.nonextendable(right, alpha):
                    image = (apex, quotient(alpha), quotient(beta))
                    lifted.add(image)
                    if not tilde_cover.is_strict(image[1], image[2]):
                        report.add("image", "a strict triple maps to a non-strict triple", f"({alpha}, {apex}, {beta})")
        for apex in tilde.objects:
            for alpha in tilde.hom(apex, left):
                for beta in tilde_cover.nonextendable(right, alpha):
                    if (apex, alpha, beta) not in lifted:
                        report.add("lift", "a strict quotient triple has no strict lift", f"({alpha}, {apex}, {beta})")
    return report


class MPFunctor:
    """
    Q ↦ Q × P on a multiplicative category with P final in the A-marking, together with the
    index sets Ĩ_Q, the first projections ω̃ and the components of each φ × id_P
    """

    def __init__(
        self,
        cat: FinCat,
        final: Any,
        to_final: Dict[Any, int],
        triples: Dict[Any, Tuple[StrictTriple, ...]],
        functor: AcFunctor,
        indices: SetFunctor,
        omega: Dict[Any, AcMorphism],
    ):
        self.cat = cat
        self.final = final
        self.to_final = to_final
        self.triples = triples
        self.functor = functor
        self.indices = indices
        self.omega = omega

    def obj(self, obj: Any) -> AcObject:
        return self.functor.obj(obj)

    def __call__(self, f: int) -> AcMorphism:
        return self.functor(f)

    def component(self, f: int, triple: StrictTriple) -> int:
        """
        φ̃′ for the term of the source product named by the triple
        """
        k = self.triples[self.cat.src(f)].index(triple)
        return self.functor(f).components[k]


def _normalized(cover: AdditiveCover, cat: FinCat, obj: Any, final: Any, to_final: Dict[Any, int]) -> Tuple[StrictTriple, ...]:
    """
    Representatives of the strict triples over (obj, P) whose second leg is the unique A-morphism
    to P, with (id, obj, ι) chosen for its own class
    """
    preferred = StrictTriple(apex=obj, to_R=cat.ident[obj], to_T=to_final[obj])
    result = []
    for triple in cover.strict_triples(obj, final):
        members = [triple] + cover.equivalent(triple)
        if preferred in members:
            result.append(preferred)
            continue
        normal = sorted(
            (m for m in members if m.to_T == to_final[m.apex]),
            key=lambda m: (cat.objects.index(m.apex), m.to_R),
        )
        if not normal:
            raise PreconditionError(
                "a product term admits no second leg equal to the unique A-morphism to P", witness=str(triple)
            )
        result.append(normal[0])
    return tuple(result)


def m_P_functor(cat: FinCat, final: Optional[Any] = None, check: bool = True) -> MPFunctor:
    """
    The functor Q ↦ Q × P into the additive cover
    :param cat: the (quotient) category, multiplicative, with its A-marking
    :param final: P; defaults to the final object of the A-marking
    :param check: verify multiplicativity, functoriality and naturality of ω̃
    :return: the functor with its index sets and projections
    """
    if final is None:
        final = has_final_object(cat, within=cat.a_morphisms)
        if final is None:
            raise PreconditionError(f"{cat.name or 'category'} has no final object in A", witness=cat.name)
    to_final = arrows_to_final(cat, final, within=cat.a_morphisms)
    if check:
        require_multiplicative(cat)
    cover = AdditiveCover(cat)
    triples = {obj: _normalized(cover, cat, obj, final, to_final) for obj in cat.objects}
    on_obj = {obj: AcObject(terms=tuple(t.apex for t in triples[obj])) for obj in cat.objects}
    on_mor: Dict[int, AcMorphism] = {}
    index_maps: Dict[int, Dict[StrictTriple, StrictTriple]] = {}
    for phi in cat.ids:
        source, target = cat.src(phi), cat.dst(phi)
        targets = triples[target]
        cone = Cone(
            apex=on_obj[target],
            left=AcMorphism(
                dom=on_obj[target], cod=AcObject.single(target), index_map=(0,) * len(targets), components=tuple(t.to_R for t in targets)
            ),
            right=AcMorphism(
                dom=on_obj[target], cod=AcObject.single(final), index_map=(0,) * len(targets), components=tuple(t.to_T for t in targets)
            ),
        )
        pairs = []
        mapping = {}
        for triple in triples[source]:
            found = cover.factor_through(cone, triple.apex, cat.comp[(phi, triple.to_R)], to_final[triple.apex])
            if len(found) != 1:
                raise PropertyFailure(
                    f"{cat.label(phi)} × id_P is not determined on {triple}", witness=f"{len(found)} factorizations"
                )
            pairs.append(found[0])
            mapping[triple] = targets[found[0][0]]
        on_mor[phi] = AcMorphism.assemble(on_obj[source], on_obj[target], pairs)
        index_maps[phi] = mapping
    omega = {
        obj: AcMorphism(
            dom=on_obj[obj],
            cod=AcObject.single(obj),
            index_map=(0,) * len(triples[obj]),
            components=tuple(t.to_R for t in triples[obj]),
        )
        for obj in cat.objects
    }
    indices = SetFunctor(on_obj={obj: triples[obj] for obj in cat.objects}, on_mor=index_maps)
    functor = AcFunctor(cat, on_obj, on_mor, name="m_P")
    result = MPFunctor(cat, final, to_final, triples, functor, indices, omega)
    if check:
        report = check_m_P(result)
        if not report.ok:
            raise PropertyFailure("product with P is not a functor", witness=str(report.first()))
    logger.info(f"m_P on {cat.name}: P = {final}, |Ĩ| = {[len(triples[obj]) for obj in cat.objects]}")
    return result


def check_m_P(m: MPFunctor) -> Report:
    """
    Functoriality of Q ↦ Q × P and naturality of the first projections
    """
    cat = m.cat
    report = Report(subject="m_P")
    for obj in cat.objects:
        if m(cat.ident[obj]) != ac_identity(cat, m.obj(obj)):
            report.add("identity", f"identity of {obj} does not map to the identity", cat.ident[obj])
    for (g, f), h in sorted(cat.comp.items()):
        if ac_compose(cat, m(g), m(f)) != m(h):
            report.add("functoriality", f"m_P({cat.label(g)}∘{cat.label(f)}) is not the composite", f"{g} {f}")
    for phi in cat.ids:
        left = ac_compose(cat, m.omega[cat.dst(phi)], m(phi))
        right = ac_compose(cat, AcMorphism.single(cat.src(phi), cat.dst(phi), phi), m.omega[cat.src(phi)])
        if left != right:
            report.add("naturality", f"ω̃ is not natural at {cat.describe(phi)}", phi)
    return report


def check_g_components(m: MPFunctor) -> Report:
    """
    Every component of φ × id_P for a G-isomorphism φ is a G-isomorphism
    """
    cat = m.cat
    report = Report(subject="m_P on G")
    for phi in cat.ids:
        if not (cat.in_G(phi) and cat.is_iso(phi)):
            continue
        for triple, component in zip(m.triples[cat.src(phi)], m(phi).components):
            if not (cat.in_G(component) and cat.is_iso(component)):
                report.add(
                    "G", f"component of {cat.label(phi)} × id_P at {triple.apex} is not a G-isomorphism", f"{phi} {component}"
                )
    return report

