"""
Homotopic systems, the functor H(ã) with its splitting map Δ_H, interpolated chains and the
explicit contraction h of the stable complex

Cochains live on the quotient B̃ as coordinate vectors of the stable cochain modules; the
homotopy reads them on interpolated chains built from lifts of chains of B.
"""

import logging
from typing import Any, Callable, Dict, List, NamedTuple, Optional
import numpy as np
from algebra.categories import (
    arrows_to_final,
    bi_exterior_quotient,
    check_bi_interior,
    check_functor,
    has_final_object,
    semidirect_product,
    validate_set_functor,
)
from algebra.complexes import (
    StandardComplex,
    chain_isomorphisms,
    check_chain_iso,
    enumerate_chains,
    face,
    lift_chain_to_source,
    push_chain,
)
from algebra.covers import MPFunctor, check_g_components
from algebra.functors import AdditiveExtension, check_natural, compose_with_quotient, precompose, restrict_along
from algebra.modules import Preimage, fixed_submodule, stacked
from models.categories import FinCat, Quotient, SetFunctor
from models.chains import Chain, ChainIso
from models.covers import AcMorphism, AcObject, StrictTriple
from models.errors import PreconditionError, PropertyFailure
from models.functors import ContraFun, NatMap
from models.modules import ModHom, zero_vector
from models.reports import Report
from models.systems import DegreeResult, HomotopicSystem, Verification
from util.setup import max_degree

logger = logging.getLogger(__name__)


def homotopic_system(
    base: FinCat,
    s: SetFunctor,
    n_obj: Callable[[Any, Any], Any],
    n_mor: Callable[[Any, int], int],
    nu: Callable[[Any, Any], int],
    interior: Optional[Dict[Any, frozenset]] = None,
    cointerior: Optional[Dict[Any, frozenset]] = None,
    final: Optional[Any] = None,
    name: str = "",
    quotient: Optional[Quotient] = None,
) -> HomotopicSystem:
    """
    Assemble a system from rules on objects and lifted morphisms
    :param base: B with its A and G markings
    :param s: the covariant set functor on B
    :param n_obj: (t, Q) -> object of B̃
    :param n_mor: (t, φ) -> morphism of B̃
    :param nu: (t, Q) -> ν_{(t,Q)} in B̃
    :param interior: I; defaults to the interior marking of B
    :param cointerior: I°; defaults to the cointerior marking of B
    :param final: P; defaults to the final object of Ã
    :param name: label for reports
    :param quotient: the bi-exterior quotient when it is already built
    :return: the system, not yet validated
    """
    interior = dict(base.markings.interior if interior is None else interior)
    cointerior = dict(base.markings.cointerior if cointerior is None else cointerior)
    if quotient is None:
        quotient = bi_exterior_quotient(base, interior, cointerior)
    tilde = quotient.category
    if final is None:
        final = has_final_object(tilde, within=tilde.a_morphisms)
        if final is None:
            raise PreconditionError(f"{tilde.name} has no final object in Ã", witness=tilde.name)
    product = semidirect_product(s, base)
    return HomotopicSystem(
        name=name or f"system on {base.name}",
        quotient=quotient,
        interior=interior,
        cointerior=cointerior,
        s=s,
        product=product,
        n_obj={(t, obj): n_obj(t, obj) for (t, obj) in product.category.objects},
        n_mor={product.lift(t, phi): n_mor(t, phi) for (t, phi) in product.lifts},
        nu={(t, obj): nu(t, obj) for (t, obj) in product.category.objects},
        final=final,
        to_final=arrows_to_final(tilde, final, within=tilde.a_morphisms),
    )


def validate_system(system: HomotopicSystem) -> Report:
    """
    Check the axioms of a homotopic system exhaustively
    :param system: the system
    :return: violations with witnesses; kinds are interior, final, s.*, n.*, G, nu, naturality and G-iso
    """
    base, tilde = system.base, system.tilde
    report = Report(subject=system.name or "homotopic system")
    report.extend(check_bi_interior(base, system.interior, system.cointerior), prefix="bi-interior")
    for obj in base.objects:
        inner = system.I(obj)
        if not inner <= base.a_morphisms:
            report.add("interior", f"I({obj}) is not inside A", sorted(inner - base.a_morphisms))
        products = {base.comp[(xi, rho)] for xi in inner for rho in system.I_co(obj)}
        if not products <= base.g_morphisms:
            report.add("interior", f"I({obj})·I°({obj}) is not inside G", sorted(products - base.g_morphisms))
    for obj in tilde.objects:
        arrows = [f for f in tilde.hom(obj, system.final) if f in tilde.a_morphisms]
        if arrows != [system.to_final.get(obj)]:
            report.add("final", f"{system.final} is not final in Ã from {obj}", obj)
    report.extend(validate_set_functor(system.s, base), prefix="s")
    if not report.ok:
        return report

    product = system.product.category
    missing = [obj for obj in product.objects if obj not in system.n_obj or obj not in system.nu]
    missing += [f for f in product.ids if f not in system.n_mor]
    if missing:
        report.add("n", "n or ν is not defined everywhere", missing[0])
        return report
    report.extend(
        check_functor(product, tilde, lambda obj: system.n_obj[obj], lambda f: system.n_mor[f], name="n"), prefix="n"
    )
    for f in product.ids:
        image = system.n_mor[f]
        if image not in tilde.a_morphisms:
            report.add("n", f"n{product.label(f)} is not in Ã", f)
        if base.in_G(system.product.base(f)) and image not in tilde.g_morphisms:
            report.add("G", f"n{product.label(f)} is not in G̃", f)
    for key in product.objects:
        nu = system.nu[key]
        if nu not in tilde or tilde.src(nu) != system.n_obj[key] or tilde.dst(nu) != key[1]:
            report.add("nu", f"ν at {key} does not go n{key} -> {key[1]}", nu)
    if not report.ok:
        return report

    for f in product.ids:
        phi, t = system.product.base(f), system.product.element[f]
        left = tilde.compose(system.nu[(system.s.apply(phi, t), base.dst(phi))], system.n_mor[f])
        right = tilde.compose(system.quotient(phi), system.nu[(t, base.src(phi))])
        if left != right:
            report.add("naturality", f"ν is not natural at ({t}, {base.label(phi)})", f"{f}: {left} vs {right}")
    for obj in base.objects:
        products = sorted({base.comp[(xi, rho)] for xi in system.I(obj) for rho in system.I_co(obj)})
        for xi in products:
            for t in system.s.fiber(obj):
                image = system.n(t, xi)
                if not (tilde.in_G(image) and tilde.is_iso(image)):
                    report.add("G-iso", f"n({t}, {base.label(xi)}) is not a G̃-isomorphism", f"{xi} {t}")
    return report


class HFunctor:
    """
    H(ã): Q ↦ (Π_{t ∈ s_Q} ã(n(t,Q)))^{I(Q)} as a contravariant functor on B

    The t-component of the image of φ: R -> Q reads the s_φ(t)-component through ã(n(t, φ)).
    """

    def __init__(self, system: HomotopicSystem, functor: ContraFun):
        if set(functor.base.ids) != set(system.tilde.ids):
            raise PreconditionError("functor does not live on the quotient of the system", witness=functor.name)
        self.system = system
        self.functor = functor
        self.extension = AdditiveExtension(functor)
        base = system.base
        self.modules = {}
        self.inclusions: Dict[Any, ModHom] = {}
        self.solvers: Dict[Any, Preimage] = {}
        for obj in base.objects:
            full = self.extension.at(self.ac_object(obj))
            generators = [self.product_map(rho) for rho in sorted(system.I(obj)) if not base.is_identity(rho)]
            module, inclusion = fixed_submodule(full, generators)
            self.modules[obj] = module
            self.inclusions[obj] = inclusion
            self.solvers[obj] = Preimage(inclusion)
        self.contra = ContraFun(
            name=f"H({functor.name})",
            base=base,
            ring=functor.ring,
            on_obj=self.modules,
            on_mor={phi: self._restricted(phi) for phi in base.ids},
        )

    def ac_object(self, obj: Any) -> AcObject:
        return AcObject(terms=tuple(self.system.n_obj[(t, obj)] for t in self.system.s.fiber(obj)))

    def ac_morphism(self, phi: int) -> AcMorphism:
        system, base = self.system, self.system.base
        source, target = base.src(phi), base.dst(phi)
        targets = list(system.s.fiber(target))
        fiber = system.s.fiber(source)
        return AcMorphism(
            dom=self.ac_object(source),
            cod=self.ac_object(target),
            index_map=tuple(targets.index(system.s.apply(phi, t)) for t in fiber),
            components=tuple(system.n(t, phi) for t in fiber),
        )

    def product_map(self, phi: int) -> ModHom:
        """
        The map of full products before restriction to fixed points
        """
        return self.extension(self.ac_morphism(phi))

    def _restricted(self, phi: int) -> ModHom:
        base = self.system.base
        source, target = base.src(phi), base.dst(phi)
        composite = self.product_map(phi) @ self.inclusions[target]
        matrix = np.zeros((self.modules[source].n, self.modules[target].n), dtype=object)
        for j in range(self.modules[target].n):
            column = self.solvers[source](composite.matrix[:, j])
            if column is None:
                raise PropertyFailure(
                    f"H({base.label(phi)}) does not preserve the I-fixed elements", witness=f"{phi} at generator {j}"
                )
            matrix[:, j] = column
        return ModHom(dom=self.modules[target], cod=self.modules[source], matrix=matrix)

    def offsets(self, obj: Any) -> List[int]:
        return self.extension.offsets(self.ac_object(obj))

    def fixed(self, obj: Any, vector: np.ndarray) -> Optional[np.ndarray]:
        return self.solvers[obj](vector)


def build_h_functor(system: HomotopicSystem, functor: ContraFun) -> HFunctor:
    return HFunctor(system, functor)


def delta_h(hf: HFunctor) -> NatMap:
    """
    Δ_H(ã)_Q(a) = (ã(ν_{(t,Q)})(a))_t, a natural map from ã∘e to H(ã)
    """
    system, functor = hf.system, hf.functor
    source = compose_with_quotient(functor, system.quotient)
    components = {}
    for obj in system.base.objects:
        full = stacked([functor(system.nu[(t, obj)]) for t in system.s.fiber(obj)], functor.at(obj))
        matrix = np.zeros((hf.modules[obj].n, full.dom.n), dtype=object)
        for j in range(full.dom.n):
            column = hf.fixed(obj, full.matrix[:, j])
            if column is None:
                raise PropertyFailure(f"Δ_H at {obj} leaves the I-fixed elements", witness=f"{obj} at generator {j}")
            matrix[:, j] = column
        components[obj] = ModHom(dom=full.dom, cod=hf.modules[obj], matrix=matrix)
    return NatMap(name=f"Δ_H({functor.name})", src=source, dst=hf.contra, components=components)


def check_section(hf: HFunctor, theta: NatMap, delta: Optional[NatMap] = None) -> Report:
    """
    θ: H(ã) -> ã∘e is natural and θ∘Δ_H is the identity
    :param hf: the functor H(ã)
    :param theta: the candidate section
    :param delta: Δ_H, computed when omitted
    :return: the report; kinds Δ.*, θ.* and section
    """
    delta = delta_h(hf) if delta is None else delta
    report = Report(subject=theta.name or "section")
    report.extend(check_natural(delta), prefix="Δ")
    report.extend(check_natural(theta), prefix="θ")
    if not report.ok:
        return report
    for obj in hf.system.base.objects:
        composite = theta[obj] @ delta[obj]
        identity = ModHom.identity(delta.src.at(obj))
        if not composite.equals(identity):
            report.add("section", f"θ∘Δ is not the identity at {obj}", f"{obj} at generator {composite.first_difference(identity)}")
    return report


def lift_chain(system: HomotopicSystem, chain: Chain, t: Any) -> Chain:
    """
    The unique chain of s⋊B over q starting at (t, q(0))
    """
    if t not in system.s.fiber(chain.start):
        raise PreconditionError(f"{t} is not in the fiber over {chain.start}", witness=str(t))
    base = system.base
    objs = [(t, chain.start)]
    arrows = []
    for phi in chain.arrows:
        arrows.append(system.product.lift(t, phi))
        t = system.s.apply(phi, t)
        objs.append((t, base.dst(phi)))
    return Chain(objs=tuple(objs), arrows=tuple(arrows))


def interpolated_chain(system: HomotopicSystem, lifted: Chain, ell: int) -> Chain:
    """
    The chain of B̃ following n∘q̂ up to vertex ℓ, crossing by ν and continuing along e∘q;
    for ℓ = n+1 it follows n∘q̂ to the end and closes with the Ã-morphism to P
    :param system: the system
    :param lifted: a chain of s⋊B
    :param ell: 0 ≤ ℓ ≤ n+1
    :return: a chain of degree n+1
    """
    n = lifted.n
    if ell < 0 or ell > n + 1:
        raise PreconditionError(f"interpolation index {ell} outside 0..{n + 1}", witness=str(ell))
    images = [system.n_obj[key] for key in lifted.objs]
    moved = [system.n_mor[f] for f in lifted.arrows]
    if ell == n + 1:
        return Chain(objs=tuple(images) + (system.final,), arrows=tuple(moved) + (system.to_final[images[-1]],))
    rest = [system.quotient(system.product.base(f)) for f in lifted.arrows[ell:]]
    return Chain(
        objs=tuple(images[: ell + 1]) + tuple(obj for _, obj in lifted.objs[ell:]),
        arrows=tuple(moved[:ell]) + (system.nu[lifted.objs[ell]],) + tuple(rest),
    )


class HomotopyOperator:
    """
    h^n: C^{n+1} -> C^n on the stable complex of ã over B̃

    h^n(a)_q = Σ_ℓ (-1)^ℓ θ_{q(0)}((a at the ℓ-th interpolation of q̂_t)_t) for chains q of B.
    """

    def __init__(self, hf: HFunctor, theta: NatMap, complex: Optional[StandardComplex] = None, check: bool = True):
        self.hf = hf
        self.system = hf.system
        self.theta = theta
        self.complex = StandardComplex(hf.functor) if complex is None else complex
        self.check = check
        self._maps: Dict[int, ModHom] = {}

    def value(self, coords: np.ndarray, chain: Chain) -> np.ndarray:
        """
        h^n(a)_q for a chain q of B of degree n and a in C^{n+1} given by coordinates
        """
        obj = chain.start
        cochains = self.complex.module(chain.n + 1)
        lifts = [lift_chain(self.system, chain, t) for t in self.system.s.fiber(obj)]
        total = zero_vector(self.hf.functor.at(obj).n)
        for ell in range(chain.n + 2):
            parts = [
                np.asarray(cochains.value(coords, interpolated_chain(self.system, lifted, ell)), dtype=object)
                for lifted in lifts
            ]
            b = np.concatenate(parts) if parts else np.zeros(0, dtype=object)
            fixed = self.hf.fixed(obj, b)
            if fixed is None:
                raise PropertyFailure(
                    "interpolated values do not lie in H(ã)", witness=f"{chain.label(self.system.base)} at ℓ = {ell}"
                )
            total = total + (-1) ** ell * self.theta[obj](fixed)
        return self.hf.functor.at(obj).normalize(total)

    def map(self, n: int) -> ModHom:
        """
        The matrix of h^n between coordinate modules, with stability of the output checked
        """
        if n in self._maps:
            return self._maps[n]
        source, target = self.complex.module(n + 1), self.complex.module(n)
        quotient = self.system.quotient
        matrix = np.zeros((target.module.n, source.module.n), dtype=object)
        for j, vector in enumerate(source.basis()):
            cache: Dict[Chain, np.ndarray] = {}

            def values(chain: Chain) -> np.ndarray:
                if chain not in cache:
                    cache[chain] = self.value(vector, lift_chain_to_source(quotient, chain))
                return cache[chain]

            try:
                matrix[:, j] = target.coordinates(values, check=self.check)
            except PreconditionError as exc:
                raise PropertyFailure(f"h^{n} of a stable cochain is not stable", witness=f"basis vector {j}: {exc}") from exc
        self._maps[n] = ModHom(dom=source.module, cod=target.module, matrix=matrix)
        logger.debug(f"h^{n}: {source.module} -> {target.module}")
        return self._maps[n]

    def apply(self, values: Callable[[Chain], np.ndarray], n: int) -> np.ndarray:
        """
        h^n of a cochain of degree n+1 on B̃ given by its values; non-stable input is rejected
        """
        coords = self.complex.module(n + 1).coordinates(values, check=True)
        return self.map(n)(coords)

    def lift_independence(self, n: int) -> Report:
        """
        h^n(a)_q computed on any chain q of B agrees with the value at e∘q
        """
        report = Report(subject=f"h^{n} lifts")
        source, target = self.complex.module(n + 1), self.complex.module(n)
        h = self.map(n)
        for j, vector in enumerate(source.basis()):
            image = h(vector)
            for chain in enumerate_chains(self.system.base, n, self.complex.cap + 1):
                expected = target.value(image, push_chain(self.system.quotient, chain))
                if not self.hf.functor.at(chain.start).same_element(self.value(vector, chain), expected):
                    report.add("lift", "h depends on the lift of a chain", f"{chain.label(self.system.base)} basis {j}")
                    break
        return report


def verify_contraction(
    hf: HFunctor, theta: NatMap, degree: Optional[int] = None, check: bool = True, require_split: bool = True
) -> Verification:
    """
    d∘h + h∘d = id on C^1..C^N and H^k = 0 for 1 ≤ k ≤ N by Smith normal form
    :param hf: H(ã) for a system and a functor on its quotient
    :param theta: the section
    :param degree: N; defaults to the configured cap
    :param check: verify stability of every computed cochain
    :param require_split: stop when the system or the section fails validation
    :return: the verification with one row per degree
    """
    cap = max_degree(degree)
    report = Report(subject=f"contraction of {hf.functor.name or 'functor'}")
    report.extend(validate_system(hf.system), prefix="system")
    if report.ok:
        report.extend(check_section(hf, theta), prefix="section")
    if require_split and not report.ok:
        return Verification(report=report)

    complex = StandardComplex(hf.functor, cap=cap, check=check)
    operator = HomotopyOperator(hf, theta, complex, check=check)
    rows = {k: DegreeResult(degree=k) for k in range(cap + 1)}
    for n in range(cap):
        middle = complex.module(n + 1).module
        total = complex.differential(n) @ operator.map(n) + operator.map(n + 1) @ complex.differential(n + 1)
        identity = ModHom.identity(middle)
        column = total.first_difference(identity)
        rows[n + 1].identity = column is None
        if column is not None:
            witness = f"basis vector {column} of C^{n + 1}"
            rows[n + 1].witness = witness
            report.add("identity", f"d∘h + h∘d differs from the identity in degree {n + 1}", witness)
        logger.info(f"degree {n + 1}: d∘h + h∘d {'=' if column is None else '≠'} id on {middle}")
    for k in range(cap + 1):
        result = complex.cohomology(k)
        rows[k].cohomology = result.describe()
        rows[k].vanishes = result.is_zero()
        if k >= 1 and not result.is_zero():
            report.add("cohomology", f"H^{k} = {result.describe()} is not zero", k)
    return Verification(report=report, degrees=[rows[k] for k in sorted(rows)])


def check_interpolation_exchange(system: HomotopicSystem, degree: Optional[int] = None) -> Report:
    """
    Faces of interpolated chains are interpolations of faces, and neighbouring interpolations
    share the face between them
    """
    cap = max_degree(degree)
    base, tilde = system.base, system.tilde
    report = Report(subject="interpolation faces")

    def compare(first: Chain, second: Chain, witness: str) -> None:
        if first != second:
            report.add("exchange", f"faces disagree: {first.label(tilde)} vs {second.label(tilde)}", witness)

    for m in range(cap):
        for chain in enumerate_chains(base, m, cap):
            for t in system.s.fiber(chain.start):
                lifted = lift_chain(system, chain, t)
                h = [interpolated_chain(system, lifted, ell) for ell in range(m + 2)]
                label = f"{chain.label(base)} at {t}"
                compare(face(tilde, h[0], 0), push_chain(system.quotient, chain), f"{label}: δ_0 h_0")
                for ell in range(m + 1):
                    compare(face(tilde, h[ell], ell + 1), face(tilde, h[ell + 1], ell + 1), f"{label}: δ_{ell + 1} h_{ell}")
                if m == 0:
                    continue
                for ell in range(1, m + 2):
                    for i in range(ell):
                        start = system.s.apply(chain.arrows[0], t) if i == 0 else t
                        below = lift_chain(system, face(base, chain, i), start)
                        compare(face(tilde, h[ell], i), interpolated_chain(system, below, ell - 1), f"{label}: δ_{i} h_{ell}")
                for ell in range(m):
                    for i in range(ell + 2, m + 2):
                        below = lift_chain(system, face(base, chain, i - 1), t)
                        compare(face(tilde, h[ell], i), interpolated_chain(system, below, ell), f"{label}: δ_{i} h_{ell}")
    return report


def check_transported_interpolations(system: HomotopicSystem, degree: Optional[int] = None) -> Report:
    """
    A natural G-isomorphism χ: q ≅ q′ induces natural G̃-isomorphisms between the interpolations
    of q̂_t and q̂′_{s(χ_0)(t)}: n(t_i, χ_i) before the crossing, e(χ_i) after it, id_P at P
    """
    cap = max_degree(degree)
    base, tilde = system.base, system.tilde
    report = Report(subject="transported interpolations")
    for m in range(cap):
        for chain in enumerate_chains(base, m, cap):
            for iso in chain_isomorphisms(base, chain, base.g_morphisms):
                chi = iso.components
                for t in system.s.fiber(chain.start):
                    lifted = lift_chain(system, chain, t)
                    other = lift_chain(system, iso.dst, system.s.apply(chi[0], t))
                    lifted_chi = [system.n(key[0], chi[i]) for i, key in enumerate(lifted.objs)]
                    for ell in range(m + 2):
                        if ell == m + 1:
                            components = tuple(lifted_chi) + (tilde.ident[system.final],)
                        else:
                            components = tuple(lifted_chi[: ell + 1]) + tuple(system.quotient(c) for c in chi[ell:])
                        src = interpolated_chain(system, lifted, ell)
                        dst = interpolated_chain(system, other, ell)
                        witness = f"{chain.label(base)} at {t}, ℓ = {ell}, χ = {chi}"
                        if not _is_g_iso(tilde, ChainIso(src=src, dst=dst, components=components)):
                            report.add("transport", "interpolations are not G̃-isomorphic through χ", witness)
    return report


def _is_g_iso(cat: FinCat, iso: ChainIso) -> bool:
    for i, c in enumerate(iso.components):
        if cat.src(c) != iso.src.objs[i] or cat.dst(c) != iso.dst.objs[i]:
            return False
        if not (cat.in_G(c) and cat.is_iso(c)):
            return False
    return check_chain_iso(cat, iso)


class SplitInstance(NamedTuple):
    """
    A system, the functor H of a coefficient functor on its quotient, and a section
    """

    system: HomotopicSystem
    hf: HFunctor
    theta: NatMap


def direct_product_system(m: MPFunctor, name: str = "") -> HomotopicSystem:
    """
    The system over a multiplicative category with trivial bi-interior structure:
    s = Ĩ, n(u, Q) = apex of u, n on morphisms the components of φ × id_P, ν = first legs
    """
    report = check_g_components(m)
    if not report.ok:
        raise PreconditionError("φ × id_P sends G-isomorphisms outside G", witness=str(report.first()))
    base = m.cat.with_markings(interior={}, cointerior={})
    return homotopic_system(
        base,
        m.indices,
        n_obj=lambda u, obj: u.apex,
        n_mor=lambda u, phi: m.component(phi, u),
        nu=lambda u, obj: u.to_R,
        interior={},
        cointerior={},
        final=m.final,
        name=name or f"Q × P on {m.cat.name}",
    )


def direct_product_functor(system: HomotopicSystem, m: MPFunctor, functor: ContraFun) -> ContraFun:
    """
    ã^ac∘m̃_P moved onto the quotient of the direct-product system (same ids)
    """
    composite = precompose(functor, m.functor)
    return restrict_along(composite, system.tilde, lambda obj: obj, lambda f: f, name=f"{functor.name}^ac∘m_P")


def direct_product_section(hf: HFunctor, m: MPFunctor, functor: ContraFun) -> NatMap:
    """
    θ_Q(b)_u is the (id_{Q′}, Q′, ι_{Q′}) block of b_u for every term u = (α′, Q′, ι_{Q′}) of Q × P
    :param hf: H(ã^ac∘m̃_P)
    :param m: Q ↦ Q × P
    :param functor: ã
    :return: the section
    """
    system = hf.system
    outer = AdditiveExtension(functor)
    components = {}
    for obj in system.base.objects:
        target = hf.functor.at(obj)
        full = hf.extension.at(hf.ac_object(obj))
        projection = np.zeros((target.n, full.n), dtype=object)
        rows = outer.offsets(m.obj(obj))
        blocks = hf.offsets(obj)
        for k, u in enumerate(system.s.fiber(obj)):
            preferred = StrictTriple(apex=u.apex, to_R=m.cat.ident[u.apex], to_T=m.to_final[u.apex])
            if preferred not in m.triples[u.apex]:
                raise PreconditionError(f"(id, {u.apex}, ι) is not a product term", witness=str(preferred))
            inner = outer.offsets(m.obj(u.apex))[m.triples[u.apex].index(preferred)]
            for i in range(functor.at(u.apex).n):
                projection[rows[k] + i, blocks[k] + inner + i] = 1
        components[obj] = ModHom(dom=full, cod=target, matrix=projection) @ hf.inclusions[obj]
    return NatMap(
        name=f"θ({hf.functor.name})",
        src=hf.contra,
        dst=compose_with_quotient(hf.functor, system.quotient),
        components=components,
    )


def direct_product_instance(m: MPFunctor, functor: ContraFun) -> SplitInstance:
    """
    The split instance ã^ac∘m̃_P over the direct-product system
    :param m: Q ↦ Q × P on the category carrying ã
    :param functor: ã
    :return: the system, H(ã^ac∘m̃_P) and the canonical section
    """
    system = direct_product_system(m)
    hf = build_h_functor(system, direct_product_functor(system, m, functor))
    return SplitInstance(system, hf, direct_product_section(hf, m, functor))
