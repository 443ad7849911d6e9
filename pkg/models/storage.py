"""
Line-oriented fixture files: categories (.cat), functors (.fun) and group data (.grp)

Every format uses `#` comments and capitalised section headers; readers raise ParseError with
the offending line, writers emit canonical text that reads back to the same object.
"""

import logging
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple, Union
from pydantic import ValidationError
from models.categories import FinCat, Markings, Morphism
from models.errors import InputError, ParseError, PreconditionError
from models.functors import ContraFun
from models.groups import FiniteGroup, GroupData
from models.modules import FgMod, ModHom, Ring, int_matrix
from util.setup import DEFAULT_FIXTURE_DIR

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Section = List[Tuple[int, str]]


def _ensure_dir(path: Path) -> None:
    if not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _sections(text: str, path: Optional[PathLike], known: Set[str], inline: Set[str]) -> Dict[str, Section]:
    """
    Split a file into its sections; inline keywords carry their value on the header line
    """
    sections: Dict[str, Section] = {}
    current = None
    for number, line in _lines(text):
        head, _, rest = line.partition(" ")
        if head in known and (not rest or head in inline):
            if head in sections:
                raise ParseError(path, number, f"section {head} appears twice")
            current = head
            sections[head] = [(number, rest.strip())] if rest.strip() else []
            continue
        if head.isalpha() and head.isupper() and len(head) > 1 and not rest:
            raise ParseError(path, number, f"unknown section {head}")
        if current is None:
            raise ParseError(path, number, "data before the first section header")
        sections[current].append((number, line))
    return sections


def _int(token: str, path: Optional[PathLike], number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(path, number, f"expected an integer, got {token!r}") from None


def _ints(text: str, path: Optional[PathLike], number: int) -> List[int]:
    return [_int(token, path, number) for token in text.split()]


def _keyed(line: str, path: Optional[PathLike], number: int) -> Tuple[str, str]:
    key, sep, value = line.partition(":")
    if not sep:
        raise ParseError(path, number, "expected 'key : value'")
    return key.strip(), value.strip()


def _read(path: PathLike) -> str:
    p = Path(path)
    if not p.exists():
        raise InputError(f"file not found: {p}")
    raw = p.read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw.count(b"\n", 0, exc.start) + 1
        raise ParseError(path, line, f"not valid UTF-8 at byte {exc.start}") from None


class CategoryFile:
    """Reader and writer for category files."""

    SECTIONS = {"NAME", "OBJECTS", "MORPHISMS", "IDENT", "COMP", "A", "G", "INTERIOR", "COINTERIOR"}
    INLINE = {"NAME", "OBJECTS"}

    @classmethod
    def parse(cls, text: str, path: Optional[PathLike] = None) -> FinCat:
        """
        Read a category; identity composites missing from COMP are filled in
        :param text: the file content
        :param path: used in error messages
        :return: the category, not yet validated
        """
        sections = _sections(text, path, cls.SECTIONS, cls.INLINE)
        for required in ("OBJECTS", "MORPHISMS", "IDENT"):
            if required not in sections:
                raise ParseError(path, 0, f"missing section {required}")
        name = " ".join(line for _, line in sections.get("NAME", []))
        objects: List[str] = []
        for number, line in sections["OBJECTS"]:
            for obj in line.split():
                if obj in cls.SECTIONS:
                    raise ParseError(path, number, f"object name {obj} is a section keyword")
                if obj in objects:
                    raise ParseError(path, number, f"object {obj} listed twice")
                objects.append(obj)

        morphisms: List[Morphism] = []
        seen: Set[int] = set()
        for number, line in sections["MORPHISMS"]:
            tokens = line.split()
            if len(tokens) not in (3, 4):
                raise ParseError(path, number, "expected 'id src dst [label]'")
            mid = _int(tokens[0], path, number)
            if mid in seen:
                raise ParseError(path, number, f"morphism {mid} defined twice")
            seen.add(mid)
            label = tokens[3] if len(tokens) == 4 else ""
            morphisms.append(Morphism(id=mid, src=tokens[1], dst=tokens[2], label=label))

        ident: Dict[str, int] = {}
        for number, line in sections["IDENT"]:
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(path, number, "expected 'object id'")
            ident[tokens[0]] = _int(tokens[1], path, number)

        comp: Dict[Tuple[int, int], int] = {}
        for number, line in sections.get("COMP", []):
            values = _ints(line, path, number)
            if len(values) != 3:
                raise ParseError(path, number, "expected 'g f result'")
            g, f, h = values
            if comp.get((g, f), h) != h:
                raise ParseError(path, number, f"conflicting entries for {g}∘{f}")
            comp[(g, f)] = h
        for m in morphisms:
            if m.src in ident:
                comp.setdefault((m.id, ident[m.src]), m.id)
            if m.dst in ident:
                comp.setdefault((ident[m.dst], m.id), m.id)

        try:
            cat = FinCat(name=name, objects=tuple(objects), morphisms=tuple(morphisms), comp=comp, ident=ident)
        except ValidationError as exc:
            raise InputError(f"{path or '<text>'}: {exc.errors()[0]['msg']}") from None

        def members(section: str) -> Optional[FrozenSet[int]]:
            if section not in sections:
                return None
            return frozenset(v for number, line in sections[section] for v in _ints(line, path, number))

        def structure(section: str) -> Dict[str, FrozenSet[int]]:
            result = {}
            for number, line in sections.get(section, []):
                obj, value = _keyed(line, path, number)
                if obj not in ident:
                    raise ParseError(path, number, f"unknown object {obj}")
                try:
                    result[obj] = cat.closure(obj, _ints(value, path, number))
                except (PreconditionError, KeyError) as exc:
                    raise ParseError(path, number, f"cannot close the generators at {obj}: {exc}") from None
            return result

        markings = Markings(
            sub_A=members("A"),
            sub_G=members("G"),
            interior=structure("INTERIOR"),
            cointerior=structure("COINTERIOR"),
        )
        logger.debug(f"parsed category {name or path}: {len(objects)} objects, {len(morphisms)} morphisms")
        return cat.with_markings(**markings.model_dump())

    @classmethod
    def read(cls, path: PathLike) -> FinCat:
        cat = cls.parse(_read(path), path)
        logger.info(f"loaded {path}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms")
        return cat

    @classmethod
    def dumps(cls, cat: FinCat) -> str:
        lines = []
        if cat.name:
            lines.append(f"NAME {cat.name}")
        lines.append("OBJECTS " + " ".join(str(obj) for obj in cat.objects))
        lines.append("MORPHISMS")
        for m in sorted(cat.morphisms, key=lambda m: m.id):
            lines.append(" ".join(str(v) for v in (m.id, m.src, m.dst)) + (f" {m.label}" if m.label else ""))
        lines.append("IDENT")
        for obj in cat.objects:
            if obj in cat.ident:
                lines.append(f"{obj} {cat.ident[obj]}")
        lines.append("COMP")
        identities = set(cat.ident.values())
        for (g, f), h in sorted(cat.comp.items()):
            if (g in identities and h == f) or (f in identities and h == g):
                continue
            lines.append(f"{g} {f} {h}")
        markings = cat.markings
        for section, members in (("A", markings.sub_A), ("G", markings.sub_G)):
            if members is not None:
                lines.append(section)
                lines.append(" ".join(str(f) for f in sorted(members)))
        for section, structure in (("INTERIOR", markings.interior), ("COINTERIOR", markings.cointerior)):
            if structure:
                lines.append(section)
                for obj in cat.objects:
                    if obj in structure:
                        lines.append(f"{obj} : " + " ".join(str(f) for f in sorted(structure[obj])))
        return "\n".join(lines) + "\n"

    @classmethod
    def write(cls, path: PathLike, cat: FinCat) -> None:
        p = Path(path)
        _ensure_dir(p)
        p.write_text(cls.dumps(cat), encoding="utf-8")


class FunctorFile:
    """
    Reader and writer for functor files

    A functor file names its category file (relative to itself) in CATEGORY, its ring in RING,
    one module literal per object and one matrix per morphism as rows separated by ';'.
    Unlisted morphisms map to the identity when both ends carry the same module.
    """

    SECTIONS = {"NAME", "CATEGORY", "RING", "MODULES", "MAPS"}
    INLINE = {"NAME", "CATEGORY", "RING"}

    @classmethod
    def category_path(cls, path: PathLike) -> Optional[Path]:
        sections = _sections(_read(path), path, cls.SECTIONS, cls.INLINE)
        if "CATEGORY" not in sections:
            return None
        return Path(path).parent / sections["CATEGORY"][0][1]

    @classmethod
    def parse(
        cls, text: str, cat: Optional[FinCat] = None, path: Optional[PathLike] = None, ring: Optional[Ring] = None
    ) -> ContraFun:
        """
        Read a functor on a category
        :param text: the file content
        :param cat: the base category; read from CATEGORY when omitted
        :param path: used for error messages and to resolve CATEGORY
        :param ring: overrides the RING line
        :return: the functor, not yet validated
        """
        sections = _sections(text, path, cls.SECTIONS, cls.INLINE)
        if cat is None:
            if "CATEGORY" not in sections:
                raise ParseError(path, 0, "no CATEGORY given and no category supplied")
            number, ref = sections["CATEGORY"][0]
            base_dir = Path(path).parent if path is not None else DEFAULT_FIXTURE_DIR
            cat = CategoryFile.read(base_dir / ref)
        if ring is None:
            ring_lines = sections.get("RING", [])
            try:
                ring = Ring.parse(ring_lines[0][1]) if ring_lines else Ring.integers()
            except (ValueError, ValidationError) as exc:
                raise ParseError(path, ring_lines[0][0], str(exc)) from None
        name = " ".join(line for _, line in sections.get("NAME", []))

        modules: Dict[str, FgMod] = {}
        for number, line in sections.get("MODULES", []):
            obj, literal = _keyed(line, path, number)
            if obj not in cat.ident:
                raise ParseError(path, number, f"unknown object {obj}")
            try:
                modules[obj] = FgMod.parse(literal, ring)
            except (ValueError, ValidationError) as exc:
                raise ParseError(path, number, f"bad module {literal!r}: {exc}") from None
        missing = [obj for obj in cat.objects if obj not in modules]
        if missing:
            raise ParseError(path, 0, f"no module given for {missing[0]}")

        maps: Dict[int, ModHom] = {}
        for number, line in sections.get("MAPS", []):
            key, body = _keyed(line, path, number)
            f = _int(key, path, number)
            if f not in cat:
                raise ParseError(path, number, f"unknown morphism {f}")
            dom, cod = modules[cat.dst(f)], modules[cat.src(f)]
            try:
                if body:
                    matrix = int_matrix([_ints(row, path, number) for row in body.split(";")], cod.n, dom.n)
                else:
                    matrix = int_matrix([[0] * dom.n for _ in range(cod.n)], cod.n, dom.n)
                maps[f] = ModHom(dom=dom, cod=cod, matrix=matrix)
            except (ValueError, ValidationError) as exc:
                raise ParseError(path, number, f"bad matrix for {f}: {exc}") from None
        for f in cat.ids:
            if f in maps:
                continue
            dom, cod = modules[cat.dst(f)], modules[cat.src(f)]
            if dom != cod:
                raise InputError(f"{path or '<text>'}: morphism {f} needs a map from {dom} to {cod}")
            maps[f] = ModHom.identity(dom)
        return ContraFun(name=name, base=cat, ring=ring, on_obj=modules, on_mor=maps)

    @classmethod
    def read(cls, path: PathLike, cat: Optional[FinCat] = None, ring: Optional[Ring] = None) -> ContraFun:
        functor = cls.parse(_read(path), cat, path, ring)
        logger.info(f"loaded {path}: functor {functor.name} over {functor.ring}")
        return functor

    @classmethod
    def dumps(cls, functor: ContraFun, category: Optional[str] = None) -> str:
        cat = functor.base
        lines = []
        if functor.name:
            lines.append(f"NAME {functor.name}")
        if category:
            lines.append(f"CATEGORY {category}")
        lines.append(f"RING {functor.ring}")
        lines.append("MODULES")
        for obj in cat.objects:
            lines.append(f"{obj} : {functor.at(obj)}")
        lines.append("MAPS")
        for f in cat.ids:
            hom = functor(f)
            if hom.dom == hom.cod and hom.equals(ModHom.identity(hom.dom)):
                continue
            if hom.is_zero():
                lines.append(f"{f} :")
                continue
            lines.append(f"{f} : " + " ; ".join(" ".join(str(v) for v in row) for row in hom.rows()))
        return "\n".join(lines) + "\n"

    @classmethod
    def write(cls, path: PathLike, functor: ContraFun, category: Optional[str] = None) -> None:
        p = Path(path)
        _ensure_dir(p)
        p.write_text(cls.dumps(functor, category), encoding="utf-8")



class GroupFile:
    """
    Reader and writer for group data

    TABLE holds the Cayley table row by row, P the elements of the p-subgroup and OMEGA either a
    number of points or `regular` (Ω = G with both multiplications). LEFT and RIGHT give the
    image of every point under each element as `g : images`.
    """

    SECTIONS = {"NAME", "TABLE", "P", "OMEGA", "LEFT", "RIGHT"}
    INLINE = {"NAME", "P", "OMEGA"}

    @classmethod
    def parse(cls, text: str, path: Optional[PathLike] = None) -> GroupData:
        sections = _sections(text, path, cls.SECTIONS, cls.INLINE)
        for required in ("TABLE", "P", "OMEGA"):
            if required not in sections:
                raise ParseError(path, 0, f"missing section {required}")
        name = " ".join(line for _, line in sections.get("NAME", []))
        table = tuple(tuple(_ints(line, path, number)) for number, line in sections["TABLE"])
        try:
            group = FiniteGroup(name=name, table=table)
        except ValidationError as exc:
            raise ParseError(path, sections["TABLE"][0][0], exc.errors()[0]["msg"]) from None
        P = tuple(v for number, line in sections["P"] for v in _ints(line, path, number))
        number, omega = sections["OMEGA"][0]
        try:
            if omega == "regular":
                points = group.order
                left = tuple(tuple(group.mul(x, w) for w in group.elements) for x in group.elements)
                right = {u: tuple(group.mul(w, u) for w in group.elements) for u in P}
            else:
                points = _int(omega, path, number)
                left_images = cls._action(sections.get("LEFT", []), path)
                missing = [x for x in group.elements if x not in left_images]
                if missing:
                    raise ParseError(path, 0, f"LEFT gives no images for element {missing[0]}")
                left = tuple(left_images[x] for x in group.elements)
                right = cls._action(sections.get("RIGHT", []), path)
            return GroupData(name=name, group=group, p_subgroup=P, points=points, left=left, right=right)
        except ValidationError as exc:
            raise InputError(f"{path or '<text>'}: {exc.errors()[0]['msg']}") from None

    @staticmethod
    def _action(section: Section, path: Optional[PathLike]) -> Dict[int, Tuple[int, ...]]:
        images: Dict[int, Tuple[int, ...]] = {}
        for number, line in section:
            key, body = _keyed(line, path, number)
            images[_int(key, path, number)] = tuple(_ints(body, path, number))
        return images

    @classmethod
    def read(cls, path: PathLike) -> GroupData:
        data = cls.parse(_read(path), path)
        logger.info(f"loaded {path}: |G| = {data.group.order}, |P| = {len(data.P)}, |Ω| = {data.points}")
        return data

    @classmethod
    def dumps(cls, data: GroupData) -> str:
        lines = []
        if data.name:
            lines.append(f"NAME {data.name}")
        lines.append("TABLE")
        lines.extend(" ".join(str(v) for v in row) for row in data.group.table)
        lines.append("P " + " ".join(str(u) for u in sorted(data.P)))
        lines.append(f"OMEGA {data.points}")
        lines.append("LEFT")
        lines.extend(f"{x} : " + " ".join(str(v) for v in row) for x, row in enumerate(data.left))
        lines.append("RIGHT")
        lines.extend(f"{u} : " + " ".join(str(v) for v in data.right[u]) for u in sorted(data.right))
        return "\n".join(lines) + "\n"

    @classmethod
    def write(cls, path: PathLike, data: GroupData) -> None:
        p = Path(path)
        _ensure_dir(p)
        p.write_text(cls.dumps(data), encoding="utf-8")
