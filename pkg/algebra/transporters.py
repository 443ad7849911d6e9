"""
Transporter categories of a p-subgroup, their exterior quotients, and the homotopic system of a
basic biset Ω with the section θ that splits H(a) for coefficients with a compatible complement

T has the subgroups of P as objects and pairs (x, u): R -> Q with x R x⁻¹ ⊆ Q and u in P;
composition is (y, v)∘(x, u) = (yx, vu). T_P keeps the pairs with x in P.
"""

import logging
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple
import numpy as np
from sympy.combinatorics.named_groups import CyclicGroup
from algebra.categories import (
    bi_exterior_quotient,
    check_a_category,
    compose_quotients,
    exterior_quotient,
    opposite,
    validate_category,
    validate_markings,
)
from algebra.covers import ac_compose, check_pullback_cones
from algebra.functors import AdditiveExtension, additive_transfer, compose_with_quotient, validate_functor
from algebra.homotopies import build_h_functor, HFunctor, homotopic_system, verify_contraction
from models.categories import FinCat, Morphism, Quotient, SetFunctor
from models.covers import AcMorphism, AcObject, Cone
from models.errors import PreconditionError, PropertyFailure
from models.functors import ContraFun, NatMap
from models.groups import FiniteGroup, GroupData, SpecialSquare, Stabilizer
from models.modules import FgMod, ModHom, Ring
from models.reports import Report
from models.systems import HomotopicSystem, Verification

logger = logging.getLogger(__name__)


def regular_group_data(group: FiniteGroup, p_subgroup: Iterable[int], name: str = "") -> GroupData:
    """
    Ω = G with G acting by left and P by right multiplication
    """
    P = sorted(p_subgroup)
    return GroupData(
        name=name or group.name,
        group=group,
        p_subgroup=tuple(P),
        points=group.order,
        left=tuple(tuple(group.mul(x, w) for w in group.elements) for x in group.elements),
        right={u: tuple(group.mul(w, u) for w in group.elements) for u in P},
    )


def cyclic_group_data(p: int, omega: Literal["regular", "double", "point"] = "regular") -> GroupData:
    """
    G = P = C_p with Ω = P, two copies of P, or a single fixed point
    :param p: the prime
    :param omega: which biset; only "regular" gives a basic set with |Ω|/|P| = 1
    :return: the group data
    """
    group = FiniteGroup.from_permutations(CyclicGroup(p), name=f"C{p}")
    data = regular_group_data(group, group.elements, name=f"C{p}")
    if omega == "regular":
        return data
    if omega == "double":
        return GroupData(
            name=f"C{p} on 2P",
            group=group,
            p_subgroup=data.p_subgroup,
            points=2 * p,
            left=tuple(row + tuple(w + p for w in row) for row in data.left),
            right={u: row + tuple(w + p for w in row) for u, row in data.right.items()},
        )
    if omega == "point":
        return GroupData(
            name=f"C{p} on a point",
            group=group,
            p_subgroup=data.p_subgroup,
            points=1,
            left=((0,),) * p,
            right={u: (0,) for u in data.p_subgroup},
        )
    raise PreconditionError(f"unknown biset {omega!r}", witness=omega)


def subgroup_labels(data: GroupData, subgroups: Optional[Sequence[FrozenSet[int]]] = None) -> Dict[str, FrozenSet[int]]:
    """
    Object names for the chosen subgroups of P: "1", "P" and Q1, Q2, ... by size
    :param data: the group data
    :param subgroups: a downward-closed family containing P; all subgroups when omitted
    :return: label -> subgroup, ordered by size
    """
    G, P = data.group, data.P
    every = G.subgroups(P)
    if subgroups is None:
        chosen = every
    else:
        chosen = sorted({frozenset(h) for h in subgroups}, key=lambda h: (len(h), sorted(h)))
        for h in chosen:
            if h not in every:
                raise PreconditionError("object is not a subgroup of P", witness=str(sorted(h)))
            below = [k for k in every if k <= h and k not in chosen]
            if below:
                raise PreconditionError(
                    f"objects are not closed under subgroups below {sorted(h)}", witness=str(sorted(below[0]))
                )
        if P not in chosen:
            raise PreconditionError("P must be an object", witness=str(sorted(P)))
    labels: Dict[str, FrozenSet[int]] = {}
    counter = 0
    for h in chosen:
        if h == P:
            label = "P"
        elif len(h) == 1:
            label = "1"
        else:
            counter += 1
            label = f"Q{counter}"
        labels[label] = h
    return labels


class Transporters:
    """
    T and T_P over the chosen subgroups of P with the quotients F̃ = T/(Q×P, C_G(Q)×1),
    T̃^x = T/(Q×P) and ẽ: T̃^x -> F̃

    Every morphism of the quotients is named by the least T-morphism of its class, so its
    concrete pair (x, u) is always available.
    """

    def __init__(
        self,
        data: GroupData,
        subgroups: Optional[Sequence[FrozenSet[int]]] = None,
        sub_G: Optional[FrozenSet[int]] = None,
    ):
        self.data = data
        self.labels = subgroup_labels(data, subgroups)
        self.lookup: Dict[Tuple[int, int, Any, Any], int] = {}
        self.pairs: Dict[int, Tuple[int, int]] = {}
        self.category = self._build(sub_G)
        self.quotient: Quotient = bi_exterior_quotient(self.category)
        self.exterior: Quotient = exterior_quotient(self.category)
        self.e_tilde: Quotient = compose_quotients(self.exterior, self.quotient)
        logger.info(
            f"transporters of {data.name}: {len(self.labels)} objects, {len(self.category.morphisms)} morphisms, "
            f"{len(self.fusion.morphisms)} in F̃"
        )

    def _build(self, sub_G: Optional[FrozenSet[int]]) -> FinCat:
        G, P = self.data.group, sorted(self.data.P)
        morphisms = []
        for src, R in self.labels.items():
            for dst, Q in self.labels.items():
                for x in G.transporter(R, Q):
                    for u in P:
                        mid = len(morphisms)
                        self.lookup[(x, u, src, dst)] = mid
                        self.pairs[mid] = (x, u)
                        morphisms.append(Morphism(id=mid, src=src, dst=dst, label=f"({x},{u})"))
        comp = {}
        for g in morphisms:
            y, v = self.pairs[g.id]
            for f in morphisms:
                if f.dst != g.src:
                    continue
                x, u = self.pairs[f.id]
                comp[(g.id, f.id)] = self.lookup[(G.mul(y, x), G.mul(v, u), f.src, g.dst)]
        ident = {obj: self.lookup[(G.identity, G.identity, obj, obj)] for obj in self.labels}
        sub_A = frozenset(m.id for m in morphisms if self.pairs[m.id][0] in self.data.P)
        interior = {
            obj: frozenset(self.lookup[(q, u, obj, obj)] for q in Q for u in P) for obj, Q in self.labels.items()
        }
        cointerior = {
            obj: frozenset(self.lookup[(c, G.identity, obj, obj)] for c in G.centralizer(Q))
            for obj, Q in self.labels.items()
        }
        draft = FinCat(
            name=f"T({self.data.name})",
            objects=tuple(self.labels),
            morphisms=tuple(morphisms),
            comp=comp,
            ident=ident,
        )
        if sub_G is None:
            sub_G = self.default_g_marking(draft)
        return draft.with_markings(sub_A=sub_A, sub_G=frozenset(sub_G), interior=interior, cointerior=cointerior)

    def default_g_marking(self, cat: FinCat) -> FrozenSet[int]:
        """
        The isomorphisms (x, u): R -> Q with x in P·C_G(R)
        """
        G = self.data.group
        result = set()
        for f in cat.ids:
            x, _ = self.pairs[f]
            R, Q = self.subgroup(cat.src(f)), self.subgroup(cat.dst(f))
            if len(R) != len(Q):
                continue
            if any(G.mul(p, c) == x for p in self.data.P for c in G.centralizer(R)):
                result.add(f)
        return frozenset(result)

    @property
    def fusion(self) -> FinCat:
        return self.quotient.category

    @property
    def tilde_x(self) -> FinCat:
        return self.exterior.category

    @cached_property
    def fusion_op(self) -> FinCat:
        return opposite(self.fusion)

    @cached_property
    def by_subgroup(self) -> Dict[FrozenSet[int], str]:
        return {h: label for label, h in self.labels.items()}

    def subgroup(self, obj: Any) -> FrozenSet[int]:
        return self.labels[obj]

    def label_of(self, members: Iterable[int]) -> str:
        members = frozenset(members)
        if members not in self.by_subgroup:
            raise PreconditionError("subgroup is not an object of the transporter category", witness=str(sorted(members)))
        return self.by_subgroup[members]

    def order(self, obj: Any) -> int:
        return len(self.labels[obj])

    def mor(self, x: int, u: int, src: Any, dst: Any) -> int:
        key = (x, u, src, dst)
        if key not in self.lookup:
            raise PreconditionError(f"({x},{u}) does not transport {src} into {dst}", witness=str(key))
        return self.lookup[key]

    def pair(self, f: int) -> Tuple[int, int]:
        return self.pairs[f]

    def representative(self, quotient: Quotient, f: int) -> Tuple[int, int]:
        """
        The pair (x, u) stored for a morphism of a quotient of T
        """
        if f not in quotient.category:
            raise PreconditionError(f"{f} is not a morphism of {quotient.category.name}", witness=str(f))
        return self.pairs[quotient.representative(f)]


def transporter_categories(
    data: GroupData, subgroups: Optional[Sequence[FrozenSet[int]]] = None, sub_G: Optional[FrozenSet[int]] = None
) -> Transporters:
    return Transporters(data, subgroups, sub_G)


def check_transporters(tr: Transporters) -> Report:
    """
    T is a category with valid markings, and T is a T_P-category
    """
    report = Report(subject=tr.category.name)
    report.extend(validate_category(tr.category), prefix="T")
    if not report.ok:
        return report
    report.extend(validate_markings(tr.category), prefix="markings")
    report.extend(check_a_category(tr.category), prefix="A-category")
    G = tr.data.group
    for src, R in tr.labels.items():
        for dst, Q in tr.labels.items():
            expected = len(G.transporter(R, Q)) * len(tr.data.P)
            if len(tr.category.hom(src, dst)) != expected:
                report.add("hom", f"|T({dst},{src})| differs from |T_G({src},{dst})|·|P|", f"{src} {dst}")
    return report


def stabilizer_data(tr: Transporters, obj: Any, point: int) -> Stabilizer:
    """
    Q_ω and the twist t with (Q×P)_ω = {(t v t⁻¹, v) | v in Q_ω}
    :param tr: the transporter categories
    :param obj: the object Q
    :param point: ω
    :return: the stabilizer; the twist is the least element that works
    """
    data, G = tr.data, tr.data.group
    Q = tr.subgroup(obj)
    stabilizer = [(q, v) for q in Q for v in data.P if data.act(q, point, v) == point]
    graph: Dict[int, int] = {}
    for q, v in stabilizer:
        if v in graph:
            raise PreconditionError(
                f"Ω is not basic: the stabilizer of {point} in {obj}×P is no twisted diagonal",
                witness=f"ω={point}, v={v}, q in {{{graph[v]}, {q}}}",
            )
        graph[v] = q
    second = frozenset(graph)
    for t in G.elements:
        if all(G.conj(t, v) == q for v, q in graph.items()):
            return Stabilizer(obj=obj, point=point, subgroup=second, label=tr.label_of(second), twist=t)
    raise PreconditionError(
        f"Ω is not basic: the stabilizer of {point} in {obj}×P is not conjugate to a diagonal",
        witness=f"ω={point}, pairs={sorted(graph.items())}",
    )


def stabilizers(tr: Transporters) -> Dict[Tuple[int, Any], Stabilizer]:
    return {(w, obj): stabilizer_data(tr, obj, w) for obj in tr.labels for w in tr.data.omega}


def check_stabilizer_compatibility(tr: Transporters, stabs: Dict[Tuple[int, Any], Stabilizer]) -> Report:
    """
    For (x, u): R -> Q and ω: u R_ω u⁻¹ ⊆ Q_{x·ω·u⁻¹} and x t^R_ω ∈ t^Q_{x·ω·u⁻¹} u C_G(R_ω)
    """
    data, G = tr.data, tr.data.group
    report = Report(subject="stabilizers")
    for f in tr.category.ids:
        x, u = tr.pair(f)
        src, dst = tr.category.src(f), tr.category.dst(f)
        for w in data.omega:
            inner, outer = stabs[(w, src)], stabs[(data.act(x, w, u), dst)]
            if not G.conjugate(u, inner.subgroup) <= outer.subgroup:
                report.add("transport", f"u R_ω u⁻¹ leaves Q_ω′ for ({x},{u})", f"{f} ω={w}")
                continue
            twist = G.mul(G.inv(G.mul(outer.twist, u)), x, inner.twist)
            if twist not in G.centralizer(inner.subgroup):
                report.add("congruence", f"x·t^R_ω and t^Q_ω′·u differ outside C_G(R_ω) for ({x},{u})", f"{f} ω={w}")
    return report


def mackey_system(tr: Transporters, stabs: Optional[Dict[Tuple[int, Any], Stabilizer]] = None) -> HomotopicSystem:
    """
    I(Q) = Q×P, I°(Q) = C_G(Q)×1, s = Ω with (x, u)·ω = x·ω·u⁻¹, n(ω, Q) = Q_ω,
    n(ω, (x, u)) = the class of (u, 1) and ν_{(ω,Q)} = the class of (t^Q_ω, 1)
    :raises PreconditionError: when Ω is not basic
    """
    data, G = tr.data, tr.data.group
    stabs = stabilizers(tr) if stabs is None else stabs
    cat = tr.category
    s = SetFunctor(
        on_obj={obj: tuple(data.omega) for obj in cat.objects},
        on_mor={f: {w: data.act(tr.pair(f)[0], w, tr.pair(f)[1]) for w in data.omega} for f in cat.ids},
    )

    def n_mor(w: int, f: int) -> int:
        x, u = tr.pair(f)
        image = data.act(x, w, u)
        return tr.quotient(tr.mor(u, G.identity, stabs[(w, cat.src(f))].label, stabs[(image, cat.dst(f))].label))

    return homotopic_system(
        cat,
        s,
        n_obj=lambda w, obj: stabs[(w, obj)].label,
        n_mor=n_mor,
        nu=lambda w, obj: tr.quotient(tr.mor(stabs[(w, obj)].twist, G.identity, stabs[(w, obj)].label, obj)),
        final=tr.by_subgroup[data.P],
        name=f"Ω over {cat.name}",
        quotient=tr.quotient,
    )


def special_square(
    tr: Transporters, alpha: int, beta: int, x: Optional[int] = None, y: Optional[int] = None
) -> SpecialSquare:
    """
    The square α∘γ = β∘δ over α̃: R -> Q and β̃: T -> Q in F̃ with apex ⊕_w U_w,
    U_w = w⁻¹α(R)w ∩ β(T) for w in the double cosets α(R)\\Q/β(T)
    :param tr: the transporter categories
    :param alpha: α̃
    :param beta: β̃
    :param x: a representative of α̃, the stored one when omitted
    :param y: a representative of β̃
    :return: the square, checked for commutativity
    """
    fusion, G = tr.fusion, tr.data.group
    stored_x, stored_y = tr.representative(tr.quotient, alpha)[0], tr.representative(tr.quotient, beta)[0]
    if fusion.dst(alpha) != fusion.dst(beta):
        raise PreconditionError("special square legs have different targets", witness=f"{alpha} {beta}")
    x = stored_x if x is None else x
    y = stored_y if y is None else y
    q, r, t = fusion.dst(alpha), fusion.src(alpha), fusion.src(beta)
    image_R, image_T = G.conjugate(x, tr.subgroup(r)), G.conjugate(y, tr.subgroup(t))
    words = G.double_cosets(image_R, image_T, tr.subgroup(q))
    terms, to_R, to_T = [], [], []
    for w in words:
        apex = tr.label_of(G.conjugate(G.inv(w), image_R) & image_T)
        terms.append(apex)
        to_R.append(tr.quotient(tr.mor(G.mul(G.inv(x), w), G.identity, apex, r)))
        to_T.append(tr.quotient(tr.mor(G.inv(y), G.identity, apex, t)))
    apex = AcObject(terms=tuple(terms))
    gamma = AcMorphism(dom=apex, cod=AcObject.single(r), index_map=(0,) * len(words), components=tuple(to_R))
    delta = AcMorphism(dom=apex, cod=AcObject.single(t), index_map=(0,) * len(words), components=tuple(to_T))
    left = ac_compose(fusion, AcMorphism.single(r, q, alpha), gamma)
    right = ac_compose(fusion, AcMorphism.single(t, q, beta), delta)
    if left != right:
        raise PropertyFailure("special square does not commute", witness=f"{left} vs {right}")
    return SpecialSquare(alpha=alpha, beta=beta, x=x, y=y, words=tuple(words), apex=apex, gamma=gamma, delta=delta)


def special_squares(tr: Transporters) -> List[SpecialSquare]:
    fusion = tr.fusion
    return [
        special_square(tr, alpha, beta)
        for q in fusion.objects
        for alpha in fusion.into(q)
        for beta in fusion.into(q)
    ]


def transporter_pullback(tr: Transporters, alpha: int, beta: int) -> Tuple[Cone, Tuple[int, ...]]:
    """
    The pull-back of x̃: R -> Q and ỹ: T -> Q in T̃^x: terms U_w = xRx⁻¹ ∩ (wy)T(wy)⁻¹ with legs
    (x⁻¹, 1) and ((wy)⁻¹, 1), w running over xRx⁻¹\\Q/yTy⁻¹
    :return: the cone and the words w
    """
    cat, G = tr.tilde_x, tr.data.group
    if cat.dst(alpha) != cat.dst(beta):
        raise PreconditionError("pull-back legs have different targets", witness=f"{alpha} {beta}")
    x, y = tr.representative(tr.exterior, alpha)[0], tr.representative(tr.exterior, beta)[0]
    q, r, t = cat.dst(alpha), cat.src(alpha), cat.src(beta)
    image_R, image_T = G.conjugate(x, tr.subgroup(r)), G.conjugate(y, tr.subgroup(t))
    words = G.double_cosets(image_R, image_T, tr.subgroup(q))
    terms, to_R, to_T = [], [], []
    for w in words:
        wy = G.mul(w, y)
        apex = tr.label_of(image_R & G.conjugate(wy, tr.subgroup(t)))
        terms.append(apex)
        to_R.append(tr.exterior(tr.mor(G.inv(x), G.identity, apex, r)))
        to_T.append(tr.exterior(tr.mor(G.inv(wy), G.identity, apex, t)))
    apex = AcObject(terms=tuple(terms))
    cone = Cone(
        apex=apex,
        left=AcMorphism(dom=apex, cod=AcObject.single(r), index_map=(0,) * len(words), components=tuple(to_R)),
        right=AcMorphism(dom=apex, cod=AcObject.single(t), index_map=(0,) * len(words), components=tuple(to_T)),
    )
    return cone, tuple(words)


def check_transporter_pullback(tr: Transporters, alpha: int, beta: int) -> Report:
    """
    The recipe cone is a pull-back in T̃^x and ẽ maps it onto the special square of ẽ(x̃), ẽ(ỹ)
    through the isomorphisms (w, 1) between the apex terms
    """
    cat, fusion, G = tr.tilde_x, tr.fusion, tr.data.group
    report = Report(subject=f"pull-back of {cat.label(alpha)}, {cat.label(beta)} in {cat.name}")
    cone, words = transporter_pullback(tr, alpha, beta)
    report.extend(check_pullback_cones(cat, alpha, beta, cone), prefix="pullback")
    x, y = tr.representative(tr.exterior, alpha)[0], tr.representative(tr.exterior, beta)[0]
    square = special_square(tr, tr.e_tilde(alpha), tr.e_tilde(beta), x=x, y=y)
    if square.words != words:
        report.add("words", "double coset representatives differ", f"{square.words} vs {words}")
        return report
    for k, w in enumerate(words):
        iso = tr.quotient(tr.mor(w, G.identity, square.apex[k], cone.apex[k]))
        if fusion.compose(tr.e_tilde(cone.left.components[k]), iso) != square.gamma.components[k]:
            report.add("image", f"ẽ of the left leg at term {k} is not α_w up to (w, 1)", f"w={w}")
        if fusion.compose(tr.e_tilde(cone.right.components[k]), iso) != square.delta.components[k]:
            report.add("image", f"ẽ of the right leg at term {k} is not β_w up to (w, 1)", f"w={w}")
    return report


def check_transporter_pullbacks(tr: Transporters) -> Report:
    cat = tr.tilde_x
    report = Report(subject=f"pull-backs in {cat.name}")
    for q in cat.objects:
        for alpha in cat.into(q):
            for beta in cat.into(q):
                report.extend(check_transporter_pullback(tr, alpha, beta))
    return report


def _coefficient_module(ring: Ring, order: Optional[int] = None) -> FgMod:
    if order is None:
        return FgMod.parse("R", ring)
    return FgMod.cyclic(order, ring)


def constant_coefficients(tr: Transporters, ring: Ring) -> Tuple[ContraFun, ContraFun]:
    """
    a = the ring on every object with identity maps, a°(φ) = |Q|/|R| for φ: R -> Q
    """
    fusion, op = tr.fusion, tr.fusion_op
    module = _coefficient_module(ring)
    a = ContraFun(
        name=f"const {ring}",
        base=fusion,
        ring=ring,
        on_obj={obj: module for obj in fusion.objects},
        on_mor={f: ModHom.identity(module) for f in fusion.ids},
    )
    transfer = ContraFun(
        name=f"transfer {ring}",
        base=op,
        ring=ring,
        on_obj={obj: module for obj in fusion.objects},
        on_mor={
            f: ModHom.scalar(module, tr.order(fusion.dst(f)) // tr.order(fusion.src(f))) for f in fusion.ids
        },
    )
    return a, transfer


def center_coefficients(tr: Transporters, ring: Ring) -> Tuple[ContraFun, ContraFun]:
    """
    The center functor of G = P = C_p: Z/p at P, zero at the trivial subgroup, identities on
    automorphisms; the complement is the identity on automorphisms and zero elsewhere
    """
    data, fusion, op = tr.data, tr.fusion, tr.fusion_op
    p = data.prime
    if p is None or len(data.P) != p or data.group.order != p:
        raise PreconditionError("center coefficients need G = P cyclic of prime order", witness=data.name)
    if ring.kind == "Zmod" and ring.prime != p:
        raise PreconditionError(f"{ring} is not a {p}-local ring", witness=str(ring))
    values = {obj: _coefficient_module(ring, p) if obj == "P" else FgMod.zero(ring) for obj in fusion.objects}

    def hom(dom: FgMod, cod: FgMod, f: int) -> ModHom:
        if fusion.src(f) == fusion.dst(f):
            return ModHom.identity(dom)
        return ModHom.zero(dom, cod)

    a = ContraFun(
        name=f"z {ring}",
        base=fusion,
        ring=ring,
        on_obj=values,
        on_mor={f: hom(values[fusion.dst(f)], values[fusion.src(f)], f) for f in fusion.ids},
    )
    transfer = ContraFun(
        name=f"z° {ring}",
        base=op,
        ring=ring,
        on_obj=values,
        on_mor={f: hom(values[fusion.src(f)], values[fusion.dst(f)], f) for f in fusion.ids},
    )
    return a, transfer


def check_compatible_complement(
    tr: Transporters, a: ContraFun, complement: ContraFun, squares: Optional[List[SpecialSquare]] = None
) -> Report:
    """
    a° has the object values of a, a°(φ)∘a(φ) = |Q|/|R| for φ: R -> Q, a°(φ) = a(φ⁻¹) on
    isomorphisms, and a(β̃)∘a°(α̃) = (a°)^ac(δ)∘a^ac(γ) on every special square
    :param tr: the transporter categories carrying F̃
    :param a: the coefficients on F̃
    :param complement: a° as a contravariant functor on the opposite of F̃
    :param squares: the squares to test; all of them when omitted
    :return: the report; kinds a.*, a°.*, objects, degree, iso and square
    """
    fusion = tr.fusion
    report = Report(subject=f"complement {complement.name}")
    if set(a.base.ids) != set(fusion.ids) or set(complement.base.ids) != set(fusion.ids):
        report.add("base", "coefficients do not live on F̃", f"{a.name} {complement.name}")
        return report
    report.extend(validate_functor(a), prefix="a")
    report.extend(validate_functor(complement), prefix="a°")
    for obj in fusion.objects:
        if obj in a.on_obj and a.on_obj[obj] != complement.on_obj.get(obj):
            report.add("objects", f"a({obj}) and a°({obj}) differ", obj)
    if not report.ok:
        return report
    for f in fusion.ids:
        source, target = fusion.src(f), fusion.dst(f)
        composite = complement(f) @ a(f)
        expected = ModHom.scalar(a.at(target), tr.order(target) // tr.order(source))
        if not composite.equals(expected):
            report.add("degree", f"a°∘a at {fusion.describe(f)} is not |{target}|/|{source}|", f"{f} at generator {composite.first_difference(expected)}")
        if fusion.is_iso(f) and not complement(f).equals(a(fusion.inverse(f))):
            report.add("iso", f"a° differs from a of the inverse at {fusion.describe(f)}", f)
    extension = AdditiveExtension(a)
    for square in special_squares(tr) if squares is None else squares:
        left = a(square.beta) @ complement(square.alpha)
        right = additive_transfer(complement, square.delta) @ extension(square.gamma)
        if not left.equals(right):
            report.add(
                "square",
                f"transfer fails on the square over {fusion.label(square.alpha)}, {fusion.label(square.beta)}",
                f"{square.alpha} {square.beta} at generator {left.first_difference(right)}",
            )
    return report


def mackey_scalar(tr: Transporters, ring: Ring) -> int:
    """
    The inverse of |Ω|/|P| in the coefficient ring
    """
    points, size = tr.data.points, len(tr.data.P)
    if points % size:
        raise PreconditionError(f"|Ω| = {points} is not a multiple of |P| = {size}", witness=tr.data.name)
    ratio = points // size
    if not ring.is_unit(ratio):
        raise PreconditionError(
            f"|Ω|/|P| = {ratio} is not a unit in {ring}; choose another ring or another Ω", witness=str(ratio)
        )
    return ring.inverse(ratio)


def mackey_section(
    tr: Transporters, hf: HFunctor, complement: ContraFun, choice: Literal["least", "greatest"] = "least"
) -> NatMap:
    """
    θ_Q(b) = (|Ω|/|P|)⁻¹ Σ_{ω in Γ_Q} a°(ν_{(ω,Q)})(b_ω) with Γ_Q one point per Q×P-orbit
    :param tr: the transporter categories
    :param hf: H(a) for the Mackey system
    :param complement: a°
    :param choice: which point of each orbit goes into Γ_Q
    :return: the section θ: H(a) -> a∘e
    """
    system = hf.system
    scalar = mackey_scalar(tr, hf.functor.ring)
    components = {}
    for obj in system.base.objects:
        target = hf.functor.at(obj)
        full = hf.extension.at(hf.ac_object(obj))
        matrix = np.zeros((target.n, full.n), dtype=object)
        blocks = hf.offsets(obj)
        for orbit in tr.data.orbits(tr.subgroup(obj)):
            w = orbit[0] if choice == "least" else orbit[-1]
            block = complement(system.nu[(w, obj)]).matrix
            matrix[:, blocks[w] : blocks[w] + block.shape[1]] += block * scalar
        components[obj] = ModHom(dom=full, cod=target, matrix=matrix) @ hf.inclusions[obj]
    return NatMap(
        name=f"θ({hf.functor.name})",
        src=hf.contra,
        dst=compose_with_quotient(hf.functor, system.quotient),
        components=components,
    )


def check_stabilizer_scalars(tr: Transporters, system: HomotopicSystem, a: ContraFun, complement: ContraFun) -> Report:
    """
    a°(ν)∘a(ν) = |Q|/|Q_ω| for every ν_{(ω,Q)}
    """
    report = Report(subject="stabilizer scalars")
    for (w, obj), nu in sorted(system.nu.items(), key=lambda item: (str(item[0][1]), item[0][0])):
        composite = complement(nu) @ a(nu)
        expected = ModHom.scalar(a.at(obj), tr.order(obj) // tr.order(system.n_obj[(w, obj)]))
        if not composite.equals(expected):
            report.add("scalar", f"a°(ν)∘a(ν) at ({w}, {obj}) is not |Q|/|Q_ω|", f"ω={w} {obj}")
    return report


def verify_mackey_contraction(
    tr: Transporters, a: ContraFun, complement: ContraFun, degree: Optional[int] = None, check: bool = True
) -> Verification:
    """
    A compatible complement makes a H-split over the Mackey system, so the stable cohomology of
    F̃ with coefficients a vanishes in positive degrees
    :param tr: the transporter categories
    :param a: coefficients on F̃
    :param complement: a° on the opposite of F̃
    :param degree: N
    :param check: verify stability of computed cochains
    :return: one row per degree; the report collects complement, stabilizer, section and contraction checks
    """
    report = Report(subject=f"trivial homotopy over {tr.data.name}")
    report.extend(check_compatible_complement(tr, a, complement), prefix="complement")
    if not report.ok:
        return Verification(report=report)
    stabs = stabilizers(tr)
    report.extend(check_stabilizer_compatibility(tr, stabs), prefix="stabilizer")
    system = mackey_system(tr, stabs)
    hf = build_h_functor(system, a)
    report.extend(check_stabilizer_scalars(tr, system, a, complement))
    theta = mackey_section(tr, hf, complement)
    other = mackey_section(tr, hf, complement, choice="greatest")
    for obj in system.base.objects:
        if not theta[obj].equals(other[obj]):
            report.add("representatives", f"θ at {obj} depends on the orbit representatives", obj)
    result = verify_contraction(hf, theta, degree, check=check)
    report.extend(result.report)
    logger.info(f"{report.subject}: {'holds' if report.ok else 'fails'}")
    return Verification(report=report, degrees=result.degrees)
