"""
Axiom checks and constructions on finite categories: validation, orderedness, A-categories,
interior structures, exterior quotients, final objects and semidirect products
"""

import logging
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, List, Mapping, Optional, Tuple
from models.categories import FinCat, Markings, Morphism, Quotient, SemidirectProduct, SetFunctor
from models.errors import PreconditionError, PropertyFailure
from models.reports import Report

logger = logging.getLogger(__name__)

Subgroups = Mapping[Any, FrozenSet[int]]


def validate_category(cat: FinCat) -> Report:
    """
    Check every category axiom; never raises on malformed tables
    :param cat: the category
    :return: a report with one violation per failed axiom instance
    """
    report = Report(subject=cat.name or "category")
    objects = set(cat.objects)
    known = cat.by_id
    for m in cat.morphisms:
        if m.src not in objects or m.dst not in objects:
            report.add("dangling", f"morphism {m.name} has an unknown endpoint", f"{m.id}: {m.src} -> {m.dst}")
    for obj in cat.objects:
        f = cat.ident.get(obj)
        if f is None:
            report.add("dangling", f"object {obj} has no identity", obj)
        elif f not in known:
            report.add("dangling", f"identity of {obj} is an unknown morphism", f)
        elif known[f].src != obj or known[f].dst != obj:
            report.add("identity", f"identity of {obj} is not an endomorphism of {obj}", f)
    for obj in cat.ident:
        if obj not in objects:
            report.add("dangling", f"identity declared for unknown object {obj}", obj)
    for (g, f), h in sorted(cat.comp.items()):
        if g not in known or f not in known or h not in known:
            report.add("dangling", "composition entry names an unknown morphism", f"{g} {f} {h}")
        elif known[f].dst != known[g].src:
            report.add("composability", "composition entry for a non-composable pair", f"{g} {f}")
        elif known[h].src != known[f].src or known[h].dst != known[g].dst:
            report.add("closure", f"{known[g].name}∘{known[f].name} has the wrong endpoints", f"{g} {f} -> {h}")
    if not report.ok:
        return report

    for f, g in product(cat.ids, repeat=2):
        if cat.dst(f) == cat.src(g) and (g, f) not in cat.comp:
            report.add("totality", f"no entry for {cat.label(g)}∘{cat.label(f)}", f"{g} {f}")
    if not report.ok:
        return report

    for f in cat.ids:
        if cat.comp[(f, cat.ident[cat.src(f)])] != f or cat.comp[(cat.ident[cat.dst(f)], f)] != f:
            report.add("identity", f"identity law at {cat.label(f)}", f)
    for f in cat.ids:
        for g in cat.out_of(cat.dst(f)):
            gf = cat.comp[(g, f)]
            for h in cat.out_of(cat.dst(g)):
                if cat.comp[(h, gf)] != cat.comp[(cat.comp[(h, g)], f)]:
                    report.add(
                        "associativity",
                        f"associativity fails at ({cat.label(h)}, {cat.label(g)}, {cat.label(f)})",
                        f"{h} {g} {f}",
                    )
    if report.ok:
        logger.debug(f"{report.subject}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms, valid")
    return report


def is_subgroup(cat: FinCat, obj: Any, members: FrozenSet[int]) -> bool:
    if cat.ident[obj] not in members:
        return False
    for f in members:
        if cat.src(f) != obj or cat.dst(f) != obj or not cat.is_iso(f) or cat.inverse(f) not in members:
            return False
    return all(cat.comp[(g, f)] in members for f in members for g in members)


def closed_under_composition(cat: FinCat, members: FrozenSet[int]) -> Optional[Tuple[int, int]]:
    for f in sorted(members):
        for g in sorted(members):
            if cat.composable(g, f) and cat.comp[(g, f)] not in members:
                return g, f
    return None


def validate_markings(cat: FinCat) -> Report:
    """
    A and G are subcategories on all objects, G is a groupoid, interiors are subgroups
    """
    report = Report(subject=f"{cat.name or 'category'} markings")
    identities = frozenset(cat.ident.values())
    for kind, members in (("A", cat.a_morphisms), ("G", cat.g_morphisms)):
        unknown = sorted(f for f in members if f not in cat)
        if unknown:
            report.add(kind, f"{kind} names unknown morphisms", unknown)
            continue
        missing = sorted(identities - members)
        if missing:
            report.add(kind, f"{kind} lacks identities", missing)
        pair = closed_under_composition(cat, members)
        if pair is not None:
            report.add(kind, f"{kind} is not closed under composition", f"{pair[0]}∘{pair[1]}")
    for f in sorted(cat.g_morphisms):
        if f in cat and (not cat.is_iso(f) or cat.inverse(f) not in cat.g_morphisms):
            report.add("G", f"{cat.describe(f)} is not invertible inside G", f)
    for kind, structure in (("interior", cat.markings.interior), ("cointerior", cat.markings.cointerior)):
        for obj, members in structure.items():
            if obj not in cat.ident or not is_subgroup(cat, obj, members):
                report.add(kind, f"{kind} at {obj} is not a subgroup of its automorphisms", sorted(members))
    return report


def is_ordered(cat: FinCat) -> bool:
    """
    Morphisms both ways between two objects are always isomorphisms
    """
    return ordered_violation(cat) is None


def ordered_violation(cat: FinCat) -> Optional[int]:
    for q in cat.objects:
        for r in cat.objects:
            back = cat.hom(r, q)
            if back and cat.hom(q, r):
                for f in back:
                    if not cat.is_iso(f):
                        return f
    return None


def check_endomorphism_groups(cat: FinCat) -> Report:
    report = Report(subject=f"{cat.name or 'category'} endomorphism groups")
    for obj in cat.objects:
        members = frozenset(cat.auts(obj))
        if not is_subgroup(cat, obj, members):
            witness = next((f for f in sorted(members) if not cat.is_iso(f)), None)
            report.add("group", f"B({obj}) is not a group", witness)
    return report


def factorization(cat: FinCat, phi: int, sub_A: Optional[FrozenSet[int]] = None) -> Optional[Tuple[int, int]]:
    """
    A witness φ = ι∘φ* with φ* a B-isomorphism and ι an A-morphism
    :param cat: the ambient category
    :param phi: the morphism to factor
    :param sub_A: the A-morphisms, defaulting to the category's marking
    :return: (φ*, ι) or None
    """
    if sub_A is None:
        return cat.witnesses.get(phi)
    return cat.factor(phi, frozenset(sub_A))


def check_a_category(cat: FinCat, sub_A: Optional[FrozenSet[int]] = None) -> Report:
    """
    Check that the category is an A-category: every morphism is an isomorphism followed by an
    A-morphism, and an isomorphism becoming an A-morphism after some A-morphism lies in A
    """
    members = cat.a_morphisms if sub_A is None else frozenset(sub_A)
    report = Report(subject=f"{cat.name or 'category'} A-category")
    if not is_ordered(cat):
        report.add("ordered", "the category is not ordered", ordered_violation(cat))
    if members - frozenset(cat.ids):
        report.add("A", "A names unknown morphisms", sorted(members - frozenset(cat.ids)))
        return report
    sub = cat.with_markings(sub_A=members)
    marking_report = validate_markings(sub)
    for violation in marking_report.violations:
        if violation.kind == "A":
            report.add("A", violation.message, violation.witness)
    a_only = _subcategory(cat, members)
    if not is_ordered(a_only):
        report.add("ordered", "the A-subcategory is not ordered", ordered_violation(a_only))
    for phi in cat.ids:
        if factorization(cat, phi, members) is None:
            report.add("factorization", f"{cat.describe(phi)} is no isomorphism followed by an A-morphism", phi)
    for tau in cat.ids:
        if not cat.is_iso(tau) or (tau in members and cat.inverse(tau) in members):
            continue
        for iota in cat.out_of(cat.dst(tau)):
            if iota in members and cat.comp[(iota, tau)] in members:
                report.add(
                    "rigidity",
                    f"{cat.label(iota)}∘{cat.label(tau)} lies in A but {cat.label(tau)} is not an A-isomorphism",
                    f"{iota} {tau}",
                )
                break
    return report


def _subcategory(cat: FinCat, members: FrozenSet[int]) -> FinCat:
    kept = [m for m in cat.morphisms if m.id in members]
    comp = {(g, f): h for (g, f), h in cat.comp.items() if g in members and f in members}
    return FinCat(name=f"{cat.name}|A", objects=cat.objects, morphisms=tuple(kept), comp=comp, ident=cat.ident)


def check_interior(cat: FinCat, interior: Optional[Subgroups] = None, kind: str = "interior") -> Report:
    """
    φ∘I(R) ⊂ I(Q)∘φ for every φ: R -> Q
    :param cat: the category
    :param interior: object -> subgroup; defaults to the interior marking
    :param kind: label used in violations
    :return: the report
    """
    structure = cat.markings.interior if interior is None else interior
    report = Report(subject=f"{cat.name or 'category'} {kind}")

    def at(obj):
        return structure.get(obj, frozenset({cat.ident[obj]}))

    for obj in cat.objects:
        if not is_subgroup(cat, obj, at(obj)):
            report.add("subgroup", f"{kind} at {obj} is not a subgroup", sorted(at(obj)))
    if not report.ok:
        return report
    for phi in cat.ids:
        source, target = cat.src(phi), cat.dst(phi)
        moved = {cat.comp[(chi, phi)] for chi in at(target)}
        for rho in sorted(at(source)):
            if cat.comp[(phi, rho)] not in moved:
                report.add("transport", f"{cat.label(phi)}∘{cat.label(rho)} is not absorbed at {target}", f"{phi} {rho}")
    return report


def check_cointerior(cat: FinCat, cointerior: Optional[Subgroups] = None) -> Report:
    """
    The interior test in the opposite category
    """
    structure = cat.markings.cointerior if cointerior is None else cointerior
    return check_interior(opposite(cat), structure, kind="cointerior")


def opposite(cat: FinCat) -> FinCat:
    morphisms = tuple(Morphism(id=m.id, src=m.dst, dst=m.src, label=m.label) for m in cat.morphisms)
    comp = {(f, g): h for (g, f), h in cat.comp.items()}
    markings = Markings(
        sub_A=cat.markings.sub_A,
        sub_G=cat.markings.sub_G,
        interior=cat.markings.cointerior,
        cointerior=cat.markings.interior,
    )
    return FinCat(
        name=f"{cat.name}^op", objects=cat.objects, morphisms=morphisms, comp=comp, ident=cat.ident, markings=markings
    )


def check_bi_interior(cat: FinCat, interior: Subgroups, cointerior: Subgroups) -> Report:
    report = Report(subject=f"{cat.name or 'category'} bi-interior")
    report.extend(check_interior(cat, interior))
    report.extend(check_cointerior(cat, cointerior))
    if not report.ok:
        return report
    for obj in cat.objects:
        for chi in sorted(interior.get(obj, frozenset({cat.ident[obj]}))):
            for rho in sorted(cointerior.get(obj, frozenset({cat.ident[obj]}))):
                if cat.comp[(chi, rho)] != cat.comp[(rho, chi)]:
                    report.add("centralize", f"{cat.label(chi)} and {cat.label(rho)} do not commute at {obj}", f"{chi} {rho}")
    return report


def bi_exterior_quotient(
    cat: FinCat, interior: Optional[Subgroups] = None, cointerior: Optional[Subgroups] = None
) -> Quotient:
    """
    The category with hom-sets I(Q)\\B(Q,R)/I°(R) and the quotient functor
    :param cat: a valid category
    :param interior: left acting subgroups; defaults to the interior marking
    :param cointerior: right acting subgroups; defaults to the cointerior marking
    :return: the quotient; markings are carried to their images
    """
    interior = cat.markings.interior if interior is None else interior
    cointerior = cat.markings.cointerior if cointerior is None else cointerior
    report = check_bi_interior(cat, interior, cointerior)
    if not report.ok:
        raise PreconditionError("not a bi-interior structure", witness=str(report.first()))

    def left(obj):
        return interior.get(obj, frozenset({cat.ident[obj]}))

    def right(obj):
        return cointerior.get(obj, frozenset({cat.ident[obj]}))

    on_mor: Dict[int, int] = {}
    classes: Dict[int, Tuple[int, ...]] = {}
    for f in cat.ids:
        if f in on_mor:
            continue
        members = sorted(
            {cat.comp[(chi, cat.comp[(f, rho)])] for chi in left(cat.dst(f)) for rho in right(cat.src(f))}
        )
        rep = members[0]
        classes[rep] = tuple(members)
        for g in members:
            on_mor[g] = rep

    morphisms = []
    for rep, members in classes.items():
        m = cat.by_id[rep]
        label = m.name if len(members) == 1 else f"[{m.name}]"
        morphisms.append(Morphism(id=rep, src=m.src, dst=m.dst, label=label))
    comp: Dict[Tuple[int, int], int] = {}
    for (g, f), h in cat.comp.items():
        key = (on_mor[g], on_mor[f])
        if key in comp and comp[key] != on_mor[h]:
            raise PropertyFailure(
                "composition is not well defined on double cosets", witness=f"{g}∘{f} in class {key}"
            )
        comp[key] = on_mor[h]

    def image(members: Optional[FrozenSet[int]]) -> Optional[FrozenSet[int]]:
        return None if members is None else frozenset(on_mor[f] for f in members)

    markings = Markings(
        sub_A=image(cat.markings.sub_A),
        sub_G=image(cat.markings.sub_G),
        interior={obj: image(members) for obj, members in cat.markings.interior.items()},
        cointerior={obj: image(members) for obj, members in cat.markings.cointerior.items()},
    )
    quotient = FinCat(
        name=f"{cat.name}~",
        objects=cat.objects,
        morphisms=tuple(sorted(morphisms, key=lambda m: m.id)),
        comp=comp,
        ident={obj: on_mor[f] for obj, f in cat.ident.items()},
        markings=markings,
    )
    logger.info(f"quotient of {cat.name}: {len(cat.morphisms)} -> {len(morphisms)} morphisms")
    return Quotient(source=cat, category=quotient, on_mor=on_mor, classes=classes)


def exterior_quotient(cat: FinCat, interior: Optional[Subgroups] = None) -> Quotient:
    return bi_exterior_quotient(cat, cat.markings.interior if interior is None else interior, {})


def co_exterior_quotient(cat: FinCat, cointerior: Optional[Subgroups] = None) -> Quotient:
    return bi_exterior_quotient(cat, {}, cat.markings.cointerior if cointerior is None else cointerior)


def compose_quotients(first: Quotient, second: Quotient) -> Quotient:
    """
    The functor between two quotients of one category when the second is coarser
    """
    on_mor: Dict[int, int] = {}
    for f, target in first.on_mor.items():
        image = second.on_mor[f]
        rep = target
        if rep in on_mor and on_mor[rep] != image:
            raise PreconditionError("second quotient is not coarser than the first", witness=f"{f}")
        on_mor[rep] = image
    classes: Dict[int, List[int]] = {}
    for f, image in sorted(on_mor.items()):
        classes.setdefault(image, []).append(f)
    return Quotient(
        source=first.category,
        category=second.category,
        on_mor=on_mor,
        classes={image: tuple(members) for image, members in classes.items()},
    )


def check_functor(
    src: FinCat, dst: FinCat, on_obj: Callable[[Any], Any], on_mor: Callable[[int], int], name: str = "functor"
) -> Report:
    """
    Endpoints, identities and composition are preserved
    """
    report = Report(subject=name)
    for obj in src.objects:
        if on_mor(src.ident[obj]) != dst.ident.get(on_obj(obj)):
            report.add("identity", f"identity of {obj} does not map to an identity", src.ident[obj])
    for f in src.ids:
        image = on_mor(f)
        if image not in dst or dst.src(image) != on_obj(src.src(f)) or dst.dst(image) != on_obj(src.dst(f)):
            report.add("endpoints", f"{src.describe(f)} maps to a morphism with wrong endpoints", f)
    if not report.ok:
        return report
    for (g, f), h in src.comp.items():
        if dst.comp.get((on_mor(g), on_mor(f))) != on_mor(h):
            report.add("composition", f"composite {src.label(g)}∘{src.label(f)} is not preserved", f"{g} {f}")
    return report


def check_quotient_functor(quotient: Quotient) -> Report:
    return check_functor(
        quotient.source, quotient.category, lambda obj: obj, quotient, name=f"{quotient.category.name} projection"
    )


def has_final_object(cat: FinCat, within: Optional[FrozenSet[int]] = None) -> Optional[Any]:
    """
    The first object P with exactly one morphism Q -> P from every object Q
    :param cat: the category
    :param within: restrict to these morphisms (a subcategory on the same objects)
    :return: P or None
    """
    for candidate in cat.objects:
        if all(_count(cat, obj, candidate, within) == 1 for obj in cat.objects):
            return candidate
    return None


def _count(cat: FinCat, src: Any, dst: Any, within: Optional[FrozenSet[int]]) -> int:
    arrows = cat.hom(src, dst)
    if within is None:
        return len(arrows)
    return sum(1 for f in arrows if f in within)


def arrows_to_final(cat: FinCat, final: Any, within: Optional[FrozenSet[int]] = None) -> Dict[Any, int]:
    """
    The unique morphism from each object to the final object
    """
    result = {}
    for obj in cat.objects:
        arrows = [f for f in cat.hom(obj, final) if within is None or f in within]
        if len(arrows) != 1:
            raise PreconditionError(f"{final} is not final from {obj}", witness=str(arrows))
        result[obj] = arrows[0]
    return result


def validate_set_functor(s: SetFunctor, cat: FinCat) -> Report:
    """
    Fibers are finite, element maps land in the right fibers, and s is functorial
    """
    report = Report(subject="set functor")
    for f in cat.ids:
        mapping = s.on_mor.get(f)
        source, target = s.fiber(cat.src(f)), s.fiber(cat.dst(f))
        if mapping is None:
            report.add("missing", f"no element map for {cat.label(f)}", f)
            continue
        if set(mapping) != set(source):
            report.add("domain", f"element map of {cat.label(f)} is not defined on its fiber", f)
        if any(value not in target for value in mapping.values()):
            report.add("codomain", f"element map of {cat.label(f)} leaves its target fiber", f)
    if not report.ok:
        return report
    for obj in cat.objects:
        identity = s.on_mor[cat.ident[obj]]
        for x in s.fiber(obj):
            if identity[x] != x:
                report.add("identity", f"identity of {obj} moves {x}", f"{cat.ident[obj]} {x}")
    for (g, f), h in sorted(cat.comp.items()):
        for x in s.fiber(cat.src(f)):
            if s.on_mor[g][s.on_mor[f][x]] != s.on_mor[h][x]:
                report.add("functoriality", f"s({cat.label(g)}∘{cat.label(f)}) differs at {x}", f"{g} {f} {x}")
                break
    return report


def semidirect_product(s: SetFunctor, cat: FinCat) -> SemidirectProduct:
    """
    The category of pairs (t, Q) with t in s_Q; morphisms (t, φ): (t, R) -> (s_φ(t), Q)
    :param s: a covariant functor to finite sets
    :param cat: its base
    :return: the semidirect product with its forgetful functor
    """
    report = validate_set_functor(s, cat)
    if not report.ok:
        raise PreconditionError("set functor is not valid", witness=str(report.first()))
    objects = tuple((t, obj) for obj in cat.objects for t in s.fiber(obj))
    lifts: Dict[Tuple[Any, int], int] = {}
    forget: Dict[int, int] = {}
    element: Dict[int, Any] = {}
    morphisms = []
    for phi in cat.ids:
        for t in s.fiber(cat.src(phi)):
            mid = len(morphisms)
            lifts[(t, phi)] = mid
            forget[mid] = phi
            element[mid] = t
            morphisms.append(
                Morphism(
                    id=mid,
                    src=(t, cat.src(phi)),
                    dst=(s.apply(phi, t), cat.dst(phi)),
                    label=f"({t},{cat.label(phi)})",
                )
            )
    comp = {}
    for (g, f), h in cat.comp.items():
        for t in s.fiber(cat.src(f)):
            comp[(lifts[(s.apply(f, t), g)], lifts[(t, f)])] = lifts[(t, h)]
    ident = {(t, obj): lifts[(t, cat.ident[obj])] for (t, obj) in objects}

    def lifted(members: FrozenSet[int]) -> FrozenSet[int]:
        return frozenset(mid for mid, phi in forget.items() if phi in members)

    markings = Markings(sub_A=lifted(cat.a_morphisms), sub_G=lifted(cat.g_morphisms))
    product_cat = FinCat(
        name=f"s⋊{cat.name}", objects=objects, morphisms=tuple(morphisms), comp=comp, ident=ident, markings=markings
    )
    logger.debug(f"semidirect product over {cat.name}: {len(objects)} objects, {len(morphisms)} morphisms")
    return SemidirectProduct(category=product_cat, lifts=lifts, forget=forget, element=element)
