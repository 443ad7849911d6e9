"""
Exact linear algebra over Z and Z/p^k

Everything reduces to the Smith normal form of an integer matrix. Submodules and quotients are
computed on lattices of relations and then re-presented in canonical form (free coordinates
first, then the invariant factors in divisibility order).
"""

import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple
import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp
from models.errors import PreconditionError, PropertyFailure
from models.modules import FgMod, ModHom, Ring, identity_matrix, matmul, zero_vector

logger = logging.getLogger(__name__)


class SmithForm(NamedTuple):
    U: np.ndarray
    D: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> List[int]:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _to_numpy(matrix: Matrix) -> np.ndarray:
    result = np.zeros(matrix.shape, dtype=object)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            result[i, j] = int(matrix[i, j])
    return result


def _to_sympy(matrix: np.ndarray) -> Matrix:
    return Matrix(matrix.shape[0], matrix.shape[1], [int(x) for x in matrix.flat])


def _swap_rows(a: np.ndarray, i: int, j: int) -> None:
    a[[i, j], :] = a[[j, i], :]


def _swap_cols(a: np.ndarray, i: int, j: int) -> None:
    a[:, [i, j]] = a[:, [j, i]]


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _extended_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _enforce_chain(U: np.ndarray, D: np.ndarray, V: np.ndarray) -> None:
    """
    Make the diagonal nonnegative, push zeros to the end and force d_i | d_{i+1}, in place
    """
    k = min(D.shape)
    for i in range(k):
        if D[i, i] < 0:
            D[i, i] = -D[i, i]
            U[i, :] = -U[i, :]
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            a, b = int(D[i, i]), int(D[i + 1, i + 1])
            if a == 0 and b != 0:
                _swap_rows(U, i, i + 1)
                _swap_rows(D, i, i + 1)
                _swap_cols(D, i, i + 1)
                _swap_cols(V, i, i + 1)
                changed = True
            elif a != 0 and b % a != 0:
                # diag(a, b) -> diag(gcd, lcm) through unimodular 2x2 blocks
                g, s, t = _extended_gcd(a, b)
                left = np.array([[s, t], [-(b // g), a // g]], dtype=object)
                right = np.array([[1, -(t * b // g)], [1, s * a // g]], dtype=object)
                rows = [i, i + 1]
                U[rows, :] = matmul(left, U[rows, :])
                V[:, rows] = matmul(V[:, rows], right)
                D[i, i], D[i + 1, i + 1] = g, a * b // g
                changed = True


def smith_normal_form(matrix: np.ndarray) -> SmithForm:
    """
    Smith normal form with transforms
    :param matrix: an integer matrix (object dtype)
    :return: (U, D, V) with U·M·V = D, U and V unimodular, D diagonal with d_i | d_{i+1}
    """
    m, n = matrix.shape
    if m == 0 or n == 0 or all(int(x) == 0 for x in matrix.flat):
        return SmithForm(identity_matrix(m), np.zeros((m, n), dtype=object), identity_matrix(n))
    D, U, V = smith_normal_decomp(_to_sympy(matrix), domain=ZZ)
    U, D, V = _to_numpy(U), _to_numpy(D), _to_numpy(V)
    _enforce_chain(U, D, V)
    if not np.array_equal(matmul(matmul(U, matrix), V), D):
        raise PropertyFailure("Smith normal form transforms do not reproduce the diagonal", witness=str(matrix.tolist()))
    return SmithForm(U, D, V)


def unimodular_inverse(matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0]
    if n == 0:
        return identity_matrix(0)
    inverse = _to_sympy(matrix).inv()
    result = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            value = inverse[i, j]
            if not value.is_integer:
                raise PropertyFailure("matrix is not unimodular", witness=str(matrix.tolist()))
            result[i, j] = int(value)
    return result


def integer_kernel(matrix: np.ndarray) -> np.ndarray:
    """
    A Z-basis of {x : M x = 0}, as columns
    """
    m, n = matrix.shape
    if n == 0:
        return np.zeros((0, 0), dtype=object)
    snf = smith_normal_form(matrix)
    return snf.V[:, snf.rank :].copy()


def integer_solve(matrix: np.ndarray, target: np.ndarray) -> Optional[np.ndarray]:
    """
    One integer solution of M x = y, or None
    """
    return _Solver(matrix)(target)


class _Solver:
    """
    Reusable integer solver for a fixed matrix
    """

    def __init__(self, matrix: np.ndarray):
        self.shape = matrix.shape
        self.snf = smith_normal_form(matrix)
        self.diagonal = self.snf.diagonal

    def __call__(self, target: np.ndarray) -> Optional[np.ndarray]:
        m, n = self.shape
        y = matmul(self.snf.U, np.asarray(target, dtype=object))
        z = zero_vector(n)
        for i in range(m):
            d = self.diagonal[i] if i < len(self.diagonal) else 0
            if d == 0:
                if int(y[i]) != 0:
                    return None
            else:
                if int(y[i]) % d:
                    return None
                z[i] = int(y[i]) // d
        return matmul(self.snf.V, z)


def hstack(*blocks: np.ndarray) -> np.ndarray:
    rows = blocks[0].shape[0]
    width = sum(block.shape[1] for block in blocks)
    result = np.zeros((rows, width), dtype=object)
    offset = 0
    for block in blocks:
        result[:, offset : offset + block.shape[1]] = block
        offset += block.shape[1]
    return result


def vstack(*blocks: np.ndarray) -> np.ndarray:
    cols = blocks[0].shape[1]
    height = sum(block.shape[0] for block in blocks)
    result = np.zeros((height, cols), dtype=object)
    offset = 0
    for block in blocks:
        result[offset : offset + block.shape[0], :] = block
        offset += block.shape[0]
    return result


class Presentation(NamedTuple):
    """
    A module in canonical form with maps to and from the coordinates it was computed in
    """

    module: FgMod
    projection: np.ndarray  # canonical coordinates from the old ones
    lift: np.ndarray  # old coordinates of each canonical generator


def present(relations: np.ndarray, ring: Ring) -> Presentation:
    """
    Canonical form of Z^k / (column span of the relations)
    :param relations: k x r integer matrix
    :param ring: the ring the result lives over
    :return: the presentation
    """
    k = relations.shape[0]
    snf = smith_normal_form(relations)
    diagonal = snf.diagonal + [0] * (k - len(snf.diagonal))
    free = [i for i in range(k) if diagonal[i] == 0]
    torsion = [i for i in range(k) if diagonal[i] > 1]
    chosen = free + torsion
    module = FgMod(ring=ring, orders=tuple([0] * len(free) + [diagonal[i] for i in torsion]))
    projection = snf.U[chosen, :] if chosen else np.zeros((0, k), dtype=object)
    lift = unimodular_inverse(snf.U)[:, chosen] if chosen else np.zeros((k, 0), dtype=object)
    return Presentation(module, projection, lift)


def direct_sum(modules: Sequence[FgMod], ring: Optional[Ring] = None) -> FgMod:
    if not modules:
        return FgMod(ring=ring or Ring())
    base = modules[0].ring
    for module in modules:
        if module.ring != base:
            raise PreconditionError("direct sum over different rings", witness=f"{base} vs {module.ring}")
    return FgMod(ring=base, orders=tuple(d for module in modules for d in module.orders))


def block_diagonal(homs: Sequence[ModHom]) -> ModHom:
    dom = direct_sum([h.dom for h in homs])
    cod = direct_sum([h.cod for h in homs])
    matrix = np.zeros((cod.n, dom.n), dtype=object)
    row = col = 0
    for h in homs:
        matrix[row : row + h.cod.n, col : col + h.dom.n] = h.matrix
        row += h.cod.n
        col += h.dom.n
    return ModHom(dom=dom, cod=cod, matrix=matrix)


def stacked(homs: Sequence[ModHom], dom: FgMod) -> ModHom:
    """
    The map dom -> ⊕ cod_i with components homs
    """
    cod = direct_sum([h.cod for h in homs], dom.ring)
    matrix = vstack(*[h.matrix for h in homs]) if homs else np.zeros((0, dom.n), dtype=object)
    return ModHom(dom=dom, cod=cod, matrix=matrix)


def submodule(module: FgMod, generators: np.ndarray) -> Tuple[FgMod, ModHom]:
    """
    The submodule generated by some elements, in canonical form, with its inclusion
    :param module: the ambient module
    :param generators: columns are ambient coordinate vectors
    :return: (canonical submodule, inclusion hom)
    """
    g = generators.shape[1]
    relation_space = integer_kernel(hstack(generators, module.relations()))
    relations = relation_space[:g, :] if relation_space.size else np.zeros((g, 0), dtype=object)
    presented = present(relations, module.ring)
    inclusion = ModHom(dom=presented.module, cod=module, matrix=matmul(generators, presented.lift))
    return presented.module, inclusion


def kernel(h: ModHom) -> Tuple[FgMod, ModHom]:
    """
    :return: (canonical kernel, inclusion into h.dom)
    """
    n = h.dom.n
    solutions = integer_kernel(hstack(h.matrix, h.cod.relations()))
    generators = solutions[:n, :] if solutions.size else np.zeros((n, 0), dtype=object)
    return submodule(h.dom, generators)


def image(h: ModHom) -> Tuple[FgMod, ModHom]:
    """
    :return: (canonical image, inclusion into h.cod)
    """
    return submodule(h.cod, np.asarray(h.matrix, dtype=object).copy())


def cokernel(h: ModHom) -> Tuple[FgMod, ModHom]:
    """
    :return: (canonical cokernel, projection from h.cod)
    """
    presented = present(hstack(np.asarray(h.matrix, dtype=object), h.cod.relations()), h.cod.ring)
    projection = ModHom(dom=h.cod, cod=presented.module, matrix=presented.projection)
    return presented.module, projection


class Preimage:
    """
    Solve h(x) = y for many right-hand sides of one homomorphism
    """

    def __init__(self, h: ModHom):
        self.h = h
        self.solver = _Solver(hstack(np.asarray(h.matrix, dtype=object), h.cod.relations()))

    def __call__(self, y: np.ndarray) -> Optional[np.ndarray]:
        solution = self.solver(np.asarray(y, dtype=object))
        if solution is None:
            return None
        return self.h.dom.normalize(solution[: self.h.dom.n])


def solve(h: ModHom, y: np.ndarray) -> Optional[np.ndarray]:
    return Preimage(h)(y)


def is_injective(h: ModHom) -> bool:
    return kernel(h)[0].is_zero()


def is_surjective(h: ModHom) -> bool:
    return cokernel(h)[0].is_zero()


def is_automorphism(h: ModHom) -> bool:
    return h.dom == h.cod and is_injective(h) and is_surjective(h)


def fixed_submodule(module: FgMod, generators: Sequence[ModHom]) -> Tuple[FgMod, ModHom]:
    """
    The elements fixed by every generator, as the kernel of the stacked (g - id) maps
    :param module: the module acted on
    :param generators: automorphisms of the module
    :return: (canonical fixed submodule, inclusion)
    """
    for g in generators:
        if g.dom != module or g.cod != module or not is_automorphism(g):
            raise PreconditionError("fixed-point generator is not an automorphism", witness=str(g))
    identity = ModHom.identity(module)
    return kernel(stacked([g - identity for g in generators], module))


def first_nonzero_column(h: ModHom) -> Optional[int]:
    for j in range(h.dom.n):
        if any(int(x) != 0 for x in h.matrix[:, j]):
            return j
    return None


def complex_cohomology(d_prev: ModHom, d_next: ModHom) -> FgMod:
    """
    ker(d_next) / im(d_prev) in canonical form
    :param d_prev: the incoming differential
    :param d_next: the outgoing differential
    :return: the cohomology module
    """
    if d_prev.cod != d_next.dom:
        raise PreconditionError("differentials are not composable", witness=f"{d_prev.cod} vs {d_next.dom}")
    composite = d_next @ d_prev
    column = first_nonzero_column(composite)
    if column is not None:
        witness = d_prev.dom.basis()[column]
        raise PropertyFailure("d∘d is not zero", witness=f"basis vector {column} = {list(witness)}")
    _, inclusion = kernel(d_next)
    k = inclusion.dom.n
    middle = d_prev.cod
    lattice = integer_kernel(hstack(inclusion.matrix, np.asarray(d_prev.matrix, dtype=object), middle.relations()))
    relations = lattice[:k, :] if lattice.size else np.zeros((k, 0), dtype=object)
    result = present(relations, middle.ring).module
    logger.debug(f"cohomology of {d_prev.dom} -> {middle} -> {d_next.cod} is {result.describe()}")
    return result


def rank_nullity_holds(h: ModHom) -> bool:
    """
    rank(dom) = rank(ker) + rank(im), and for finite domains |dom| = |ker|·|im|
    """
    ker, _ = kernel(h)
    im, _ = image(h)
    if h.dom.rank != ker.rank + im.rank:
        return False
    size = h.dom.cardinality()
    if size is None:
        return True
    return size == (ker.cardinality() or 1) * (im.cardinality() or 1)


def determinant(matrix: np.ndarray) -> int:
    if matrix.shape[0] == 0:
        return 1
    return int(_to_sympy(matrix).det())
