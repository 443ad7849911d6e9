"""
The standard cochain complex of a contravariant functor and its G-stable subcomplex

A degree-n cochain assigns to every chain q of n composable morphisms an element of F(q(0)).
Stable cochains are determined by their values on one representative per orbit of chains under
natural G-isomorphisms, and those values are fixed by the automorphisms of the representative.
"""

import logging
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional
import numpy as np
from algebra.functors import compose_with_quotient, require_functor
from algebra.modules import Preimage, direct_sum, fixed_submodule, complex_cohomology
from models.categories import FinCat, Quotient
from models.chains import Chain, ChainIso, Orbit, chain_index
from models.errors import PreconditionError, PropertyFailure
from models.functors import ContraFun
from models.modules import FgMod, ModHom, identity_matrix, zero_vector
from util.setup import max_degree

logger = logging.getLogger(__name__)


def enumerate_chains(cat: FinCat, n: int, cap: Optional[int] = None) -> List[Chain]:
    """
    Every chain of degree n, identities included, in lexicographic order of morphism ids
    :param cat: the category
    :param n: the degree
    :param cap: the degree limit; defaults to the configured one and may exceed it by one
    :return: the chains
    """
    limit = max_degree(cap, slack=1)
    if n < 0 or n > limit:
        raise PreconditionError(f"degree {n} is outside 0..{limit}", witness=str(n))
    if n == 0:
        return [Chain.point(obj) for obj in cat.objects]
    paths = [(f,) for f in cat.ids]
    for _ in range(n - 1):
        paths = [path + (g,) for path in paths for g in cat.out_of(cat.dst(path[-1]))]
    return [Chain.from_arrows(cat, path) for path in paths]


def face(cat: FinCat, chain: Chain, i: int) -> Chain:
    """
    Remove vertex i: end faces drop an end arrow, interior faces compose the two adjacent arrows
    """
    n = chain.n
    if n == 0 or i < 0 or i > n:
        raise PreconditionError(f"face {i} of a degree {n} chain", witness=str(chain.arrows))
    objs = chain.objs[:i] + chain.objs[i + 1 :]
    if i == 0:
        arrows = chain.arrows[1:]
    elif i == n:
        arrows = chain.arrows[:-1]
    else:
        merged = cat.compose(chain.arrows[i], chain.arrows[i - 1])
        arrows = chain.arrows[: i - 1] + (merged,) + chain.arrows[i + 1 :]
    return Chain(objs=objs, arrows=arrows)


def transport_chain(cat: FinCat, chain: Chain, components: tuple) -> Chain:
    """
    The chain q′ with q′(i-1 • i) = χ_i∘q(i-1 • i)∘χ_{i-1}⁻¹
    """
    arrows = tuple(
        cat.compose(components[i + 1], cat.compose(f, cat.inverse(components[i]))) for i, f in enumerate(chain.arrows)
    )
    return Chain(objs=tuple(cat.dst(chi) for chi in components), arrows=arrows)


def chain_isomorphisms(cat: FinCat, chain: Chain, g: FrozenSet[int]) -> Iterator[ChainIso]:
    """
    Every natural G-isomorphism out of a chain
    """
    choices = [[f for f in cat.out_of(obj) if f in g and cat.is_iso(f)] for obj in chain.objs]
    for components in product(*choices):
        yield ChainIso(src=chain, dst=transport_chain(cat, chain, components), components=components)


def check_chain_iso(cat: FinCat, iso: ChainIso) -> bool:
    for i, f in enumerate(iso.src.arrows):
        if cat.compose(iso.components[i + 1], f) != cat.compose(iso.dst.arrows[i], iso.components[i]):
            return False
    return True


def g_stable_decomposition(
    cat: FinCat, n: int, g: Optional[FrozenSet[int]] = None, reverse: bool = False, cap: Optional[int] = None
) -> List[Orbit]:
    """
    Orbits of degree-n chains under natural G-isomorphisms
    :param cat: the category
    :param n: the degree
    :param g: the G-morphisms; defaults to the category's marking
    :param reverse: pick representatives from the end of the enumeration
    :param cap: the degree limit
    :return: orbits in order of their representatives
    """
    g = cat.g_morphisms if g is None else g
    chains = enumerate_chains(cat, n, cap)
    if reverse:
        chains = list(reversed(chains))
    assigned = set()
    orbits = []
    for chain in chains:
        if chain in assigned:
            continue
        members: Dict[Chain, int] = {}
        isos: Dict[Chain, ChainIso] = {}
        generators = set()
        for iso in chain_isomorphisms(cat, chain, g):
            image = iso.dst
            if image == chain:
                generators.add(iso.components[0])
            if image not in members:
                members[image] = cat.inverse(iso.components[0])
                isos[image] = iso
        members[chain] = cat.ident[chain.start]
        ordered = [c for c in chains if c in members]
        assigned.update(ordered)
        orbits.append(
            Orbit(
                rep=chain,
                members=tuple(ordered),
                transports=members,
                generators=tuple(sorted(generators)),
                isos=tuple(isos[c] for c in ordered if c in isos),
            )
        )
    logger.debug(f"degree {n} of {cat.name}: {len(chains)} chains in {len(orbits)} orbits")
    return orbits


class StableCochainModule:
    """
    C^n_G(B, F) as the product over orbits of the fixed points of F(rep(0))
    """

    def __init__(self, functor: ContraFun, n: int, orbits: List[Orbit]):
        self.functor = functor
        self.n = n
        self.orbits = orbits
        self.index = chain_index(orbits)
        self.pieces: List[FgMod] = []
        self.inclusions: List[ModHom] = []
        for orbit in orbits:
            piece, inclusion = fixed_submodule(functor.at(orbit.rep.start), [functor(g) for g in orbit.generators])
            self.pieces.append(piece)
            self.inclusions.append(inclusion)
        self.module = direct_sum(self.pieces, functor.ring)
        self.offsets = []
        position = 0
        for piece in self.pieces:
            self.offsets.append(position)
            position += piece.n
        self.solvers = [Preimage(inclusion) for inclusion in self.inclusions]

    @property
    def chains(self) -> List[Chain]:
        return [member for orbit in self.orbits for member in orbit.members]

    def block(self, coords: np.ndarray, k: int) -> np.ndarray:
        return np.asarray(coords, dtype=object)[self.offsets[k] : self.offsets[k] + self.pieces[k].n]

    def value(self, coords: np.ndarray, chain: Chain) -> np.ndarray:
        """
        a_q for the cochain with the given coordinates
        """
        if chain not in self.index:
            raise PreconditionError(f"chain of degree {chain.n} is not in degree {self.n}", witness=str(chain.arrows))
        k = self.index[chain]
        orbit = self.orbits[k]
        at_rep = self.inclusions[k](self.block(coords, k))
        return self.functor(orbit.transport(chain))(at_rep)

    def values(self, coords: np.ndarray) -> Dict[Chain, np.ndarray]:
        return {chain: self.value(coords, chain) for chain in self.chains}

    def unstable_chain(self, values: Callable[[Chain], np.ndarray]) -> Optional[Chain]:
        """
        The first chain whose value is not transported from its representative, if any
        """
        for orbit in self.orbits:
            at_rep = values(orbit.rep)
            for generator in orbit.generators:
                if not self.functor.at(orbit.rep.start).same_element(self.functor(generator)(at_rep), at_rep):
                    return orbit.rep
            for member in orbit.members:
                expected = self.functor(orbit.transport(member))(at_rep)
                if not self.functor.at(member.start).same_element(values(member), expected):
                    return member
        return None

    def coordinates(self, values: Callable[[Chain], np.ndarray], check: bool = True) -> np.ndarray:
        """
        Coordinates of a stable cochain given by its values
        :param values: chain -> element of F(q(0))
        :param check: verify stability on every chain
        :return: the coordinate vector
        """
        if check:
            chain = self.unstable_chain(values)
            if chain is not None:
                raise PreconditionError("cochain is not G-stable", witness=chain.label(self.functor.base))
        coords = zero_vector(self.module.n)
        for k, orbit in enumerate(self.orbits):
            solution = self.solvers[k](values(orbit.rep))
            if solution is None:
                raise PreconditionError(
                    "cochain value is not fixed by the automorphisms of its chain", witness=orbit.rep.label(self.functor.base)
                )
            coords[self.offsets[k] : self.offsets[k] + self.pieces[k].n] = solution
        return self.module.normalize(coords)

    def full_module(self) -> FgMod:
        return direct_sum([self.functor.at(chain.start) for chain in self.chains], self.functor.ring)

    def embed(self) -> ModHom:
        """
        The inclusion of the stable cochains into the product over all chains
        """
        full = self.full_module()
        matrix = np.zeros((full.n, self.module.n), dtype=object)
        row = 0
        for chain in self.chains:
            k = self.index[chain]
            block = (self.functor(self.orbits[k].transport(chain)) @ self.inclusions[k]).matrix
            matrix[row : row + block.shape[0], self.offsets[k] : self.offsets[k] + self.pieces[k].n] = block
            row += block.shape[0]
        return ModHom(dom=self.module, cod=full, matrix=matrix)

    def basis(self) -> List[np.ndarray]:
        return self.module.basis()


def stable_cochain_module(
    functor: ContraFun, n: int, g: Optional[FrozenSet[int]] = None, reverse: bool = False
) -> StableCochainModule:
    require_functor(functor)
    return StableCochainModule(functor, n, g_stable_decomposition(functor.base, n, g, reverse=reverse))


def differential_value(functor: ContraFun, value: Callable[[Chain], np.ndarray], chain: Chain) -> np.ndarray:
    """
    d(a)_r = F(r(0 • 1))(a_{r∘δ_0}) + Σ_{i ≥ 1} (-1)^i a_{r∘δ_i}
    """
    cat = functor.base
    total = functor(chain.arrows[0])(value(face(cat, chain, 0)))
    for i in range(1, chain.n + 1):
        total = total + (-1) ** i * value(face(cat, chain, i))
    return functor.at(chain.start).normalize(total)


def stable_differential(source: StableCochainModule, target: StableCochainModule, check: bool = True) -> ModHom:
    """
    The differential restricted to stable cochains, as a map of coordinate modules
    :param source: degree n
    :param target: degree n+1
    :param check: verify that images are stable on every chain, not only on representatives
    :return: the matrix of d_n
    """
    functor = source.functor
    columns = []
    for j, vector in enumerate(source.basis()):
        cache: Dict[Chain, np.ndarray] = {}

        def value(chain: Chain) -> np.ndarray:
            if chain not in cache:
                cache[chain] = source.value(vector, chain)
            return cache[chain]

        def image(chain: Chain) -> np.ndarray:
            return differential_value(functor, value, chain)

        try:
            columns.append(target.coordinates(image, check=check))
        except PreconditionError as exc:
            raise PropertyFailure(
                f"differential leaves the stable cochains in degree {target.n}", witness=f"basis vector {j}: {exc}"
            ) from exc
    matrix = np.zeros((target.module.n, source.module.n), dtype=object)
    for j, column in enumerate(columns):
        matrix[:, j] = column
    return ModHom(dom=source.module, cod=target.module, matrix=matrix)


class StandardComplex:
    """
    Degree-wise stable cochain modules and differentials of one functor, built on demand

    Cohomology is available up to the degree cap, so modules are enumerated one degree above it.
    """

    def __init__(
        self, functor: ContraFun, g: Optional[FrozenSet[int]] = None, cap: Optional[int] = None, check: bool = True
    ):
        require_functor(functor)
        self.functor = functor
        self.g = functor.base.g_morphisms if g is None else g
        self.cap = max_degree(cap)
        self.check = check
        self._modules: Dict[int, StableCochainModule] = {}
        self._differentials: Dict[int, ModHom] = {}

    @classmethod
    def full(cls, functor: ContraFun, cap: Optional[int] = None) -> "StandardComplex":
        """
        The complex of all cochains (no stability condition)
        """
        return cls(functor, g=frozenset(functor.base.ident.values()), cap=cap)

    def module(self, n: int) -> StableCochainModule:
        if n not in self._modules:
            orbits = g_stable_decomposition(self.functor.base, n, self.g, cap=self.cap + 1)
            self._modules[n] = StableCochainModule(self.functor, n, orbits)
        return self._modules[n]

    def differential(self, n: int) -> ModHom:
        """
        d_n: C^n -> C^{n+1}; d_{-1} is the zero map out of the zero module
        """
        if n < 0:
            target = self.module(0).module
            return ModHom.zero(FgMod.zero(self.functor.ring), target)
        if n not in self._differentials:
            self._differentials[n] = stable_differential(self.module(n), self.module(n + 1), check=self.check)
        return self._differentials[n]

    def cohomology(self, n: int) -> FgMod:
        result = complex_cohomology(self.differential(n - 1), self.differential(n))
        logger.info(f"H^{n} of {self.functor.name or 'functor'} on {self.functor.base.name} = {result.describe()}")
        return result


def stable_cohomology(functor: ContraFun, n: int, g: Optional[FrozenSet[int]] = None) -> FgMod:
    return StandardComplex(functor, g).cohomology(n)


def push_chain(quotient: Quotient, chain: Chain) -> Chain:
    return Chain(objs=chain.objs, arrows=tuple(quotient(f) for f in chain.arrows))


def lift_chain_to_source(quotient: Quotient, chain: Chain) -> Chain:
    return Chain(objs=chain.objs, arrows=tuple(quotient.representative(f) for f in chain.arrows))


class QuotientIdentification:
    """
    Mutually inverse maps between stable cochains of ã on the quotient and of ã∘e on the source
    """

    def __init__(self, tilde: StableCochainModule, base: StableCochainModule, forward: ModHom, backward: ModHom):
        self.tilde = tilde
        self.base = base
        self.forward = forward
        self.backward = backward


def identify_quotient_cochains(quotient: Quotient, functor: ContraFun, n: int) -> QuotientIdentification:
    """
    a_q = ã_{e∘q} in both directions, with the round trips checked
    :param quotient: the quotient functor e
    :param functor: ã on the quotient category
    :param n: the degree
    :return: the identification
    """
    tilde = stable_cochain_module(functor, n)
    base = stable_cochain_module(compose_with_quotient(functor, quotient), n)

    def columns(src: StableCochainModule, dst: StableCochainModule, move: Callable[[Chain], Chain]) -> ModHom:
        matrix = np.zeros((dst.module.n, src.module.n), dtype=object)
        for j, vector in enumerate(src.basis()):
            matrix[:, j] = dst.coordinates(lambda chain: src.value(vector, move(chain)))
        return ModHom(dom=src.module, cod=dst.module, matrix=matrix)

    forward = columns(tilde, base, lambda chain: push_chain(quotient, chain))
    backward = columns(base, tilde, lambda chain: lift_chain_to_source(quotient, chain))
    for name, loop, module in (("quotient", backward @ forward, tilde.module), ("source", forward @ backward, base.module)):
        if not loop.equals(ModHom(dom=module, cod=module, matrix=identity_matrix(module.n))):
            raise PropertyFailure(f"identification round trip on the {name} side is not the identity", witness=str(loop))
    return QuotientIdentification(tilde, base, forward, backward)
