"""
Homological data of a closed oriented 3-manifold with a spanning link.

The model is input, not computed: the free rank of H_1, its torsion
invariant factors, the link components with their homology classes and
framings, the pairing of a generating set of H_2 with the components, and
the surfaces bounded by nullhomologous combinations of components.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .graphs import STAR
from .linalg import hermite_normal_form, integer_left_kernel

__all__ = [
    "ModelError",
    "LinkComponent",
    "ObrSurface",
    "H2Generator",
    "ManifoldModel",
    "closed_rational_model",
    "load_model",
    "parse_model",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_#']*\Z")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class LinkComponent:
    name: str
    class_free: tuple
    class_torsion: tuple
    framing: int = 0


@dataclass(frozen=True)
class H2Generator:
    name: str
    pairing: tuple  # one entry per component


@dataclass(frozen=True)
class ObrSurface:
    kernel: tuple  # nullhomologous combination of components
    pairing: tuple  # intersection of the bounded surface with each component


@dataclass(frozen=True)
class ManifoldModel:
    b1: int
    torsion: tuple
    components: tuple
    h2: tuple = ()
    obr_surfaces: tuple = ()
    h2_complete: bool = True

    def __post_init__(self):
        if self.b1 < 0:
            raise ModelError("b1 must be nonnegative")
        for n in self.torsion:
            if n < 2:
                raise ModelError(f"torsion invariant factor {n} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ModelError("torsion factors must form a divisibility chain")
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ModelError("component names must be unique")
        for c in self.components:
            if not _NAME_RE.match(c.name):
                raise ModelError(f"bad component name {c.name!r}")
            if len(c.class_free) != self.b1:
                raise ModelError(f"class_free of {c.name} must have length b1={self.b1}")
            if len(c.class_torsion) != len(self.torsion):
                raise ModelError(f"class_torsion of {c.name} must have one entry per torsion factor")
        m = len(self.components)
        for s in self.h2:
            if len(s.pairing) != m:
                raise ModelError(f"h2 generator {s.name} needs one pairing per component")
        for surf in self.obr_surfaces:
            if len(surf.kernel) != m or len(surf.pairing) != m:
                raise ModelError("obr surface vectors need one entry per component")
            if not self.is_nullhomologous(surf.kernel):
                raise ModelError(f"obr kernel vector {surf.kernel} is not nullhomologous")

    # -- basic data

    @property
    def alphabet(self) -> tuple:
        return tuple(c.name for c in self.components)

    def index(self, name: str) -> int:
        for i, c in enumerate(self.components):
            if c.name == name:
                return i
        raise KeyError(name)

    @property
    def pairing_matrix(self) -> tuple:
        return tuple(s.pairing for s in self.h2)

    def pairing(self, s: int, name: str) -> int:
        return self.h2[s].pairing[self.index(name)]

    def class_of(self, vec) -> tuple:
        """Homology class of a component combination (free part, torsion residues)."""
        free = [0] * self.b1
        tors = [0] * len(self.torsion)
        for a, c in zip(vec, self.components):
            for i, x in enumerate(c.class_free):
                free[i] += a * x
            for i, x in enumerate(c.class_torsion):
                tors[i] += a * x
        return tuple(free), tuple(t % n for t, n in zip(tors, self.torsion))

    def is_nullhomologous(self, vec) -> bool:
        free, tors = self.class_of(vec)
        return not any(free) and not any(tors)

    def _relation_matrix(self):
        rows = [list(c.class_free) + list(c.class_torsion) for c in self.components]
        width = self.b1 + len(self.torsion)
        for i, n in enumerate(self.torsion):
            r = [0] * width
            r[self.b1 + i] = n
            rows.append(r)
        return rows, width

    # -- operations

    def validate_spanning(self) -> bool:
        """True iff the component classes generate H_1 = Z^b1 + sum Z/n_i."""
        rows, width = self._relation_matrix()
        if width == 0:
            return True
        if not rows:
            return False
        h, _ = hermite_normal_form(rows)
        hd = h.to_dense()
        return all(hd[i][i] == 1 for i in range(width)) if len(hd) >= width else False

    def kernel_lattice(self) -> list:
        """Hermite basis of the combinations of components that vanish in H_1."""
        m = len(self.components)
        if m == 0:
            return []
        rows, width = self._relation_matrix()
        if width == 0:
            return [[int(i == j) for j in range(m)] for i in range(m)]
        kern = integer_left_kernel(rows)
        proj = [r[:m] for r in kern if any(r[:m])]
        if not proj:
            return []
        h, _ = hermite_normal_form(proj)
        return [r for r in h.to_dense() if any(r)]

    def obr_generates_kernel(self) -> bool:
        basis = self.kernel_lattice()
        given = [list(s.kernel) for s in self.obr_surfaces if any(s.kernel)]
        if not basis:
            return not given
        if not given:
            return False
        h1, _ = hermite_normal_form(basis)
        h2, _ = hermite_normal_form(given)
        strip = lambda h: [r for r in h.to_dense() if any(r)]
        return strip(h1) == strip(h2)

    def validate(self):
        """Raise :class:`ModelError` naming the first violated invariant."""
        if not self.validate_spanning():
            raise ModelError("link does not span H_1 (validateSpanning failed)")
        if not self.obr_generates_kernel():
            raise ModelError("obr_surfaces kernel vectors do not generate the nullhomology lattice")
        return self

    def with_default_surfaces(self) -> ManifoldModel:
        """Fill in OBR surfaces from the kernel basis with zero pairing vectors."""
        m = len(self.components)
        surfaces = tuple(ObrSurface(tuple(k), (0,) * m) for k in self.kernel_lattice())
        return replace(self, obr_surfaces=surfaces)

    def restrict(self, names) -> ManifoldModel:
        """Sub-model on a subset of components (not necessarily spanning)."""
        idx = [self.index(n) for n in names]
        comps = tuple(self.components[i] for i in idx)
        h2 = tuple(H2Generator(s.name, tuple(s.pairing[i] for i in idx)) for s in self.h2)
        surfaces = []
        for s in self.obr_surfaces:
            if all(s.kernel[i] == 0 for i in range(len(self.components)) if i not in idx):
                surfaces.append(ObrSurface(tuple(s.kernel[i] for i in idx), tuple(s.pairing[i] for i in idx)))
        return replace(self, components=comps, h2=h2, obr_surfaces=tuple(surfaces))

    # -- serialization

    def to_dict(self) -> dict:
        names = self.alphabet
        return {
            "b1": self.b1,
            "torsion": list(self.torsion),
            "link": [
                {
                    "name": c.name,
                    "class_free": list(c.class_free),
                    "class_torsion": list(c.class_torsion),
                    "framing": c.framing,
                }
                for c in self.components
            ],
            "h2_generators": [
                {"name": s.name, "pairing": dict(zip(names, s.pairing))} for s in self.h2
            ],
            "h2_complete": self.h2_complete,
            "obr_surfaces": [
                {
                    "kernel": {n: a for n, a in zip(names, s.kernel) if a},
                    "pairing": dict(zip(names, s.pairing)),
                }
                for s in self.obr_surfaces
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _free_names(b1):
    return ["x", "y", "z", "w"][:b1] if b1 <= 4 else [f"x{i + 1}" for i in range(b1)]


def _torsion_names(t):
    return ["t", "s", "r"][:t] if t <= 3 else [f"t{i + 1}" for i in range(t)]


def closed_rational_model(b1: int, torsion=()) -> ManifoldModel:
    """Model with one component per free generator and per torsion factor.

    H_2 rows are dual to the free components; OBR surfaces come from the
    kernel basis with zero pairing vectors.
    """
    if b1 < 0:
        raise ModelError("b1 must be nonnegative")
    torsion = tuple(torsion)
    t = len(torsion)
    comps = []
    for i, name in enumerate(_free_names(b1)):
        comps.append(LinkComponent(name, tuple(int(i == j) for j in range(b1)), (0,) * t, 0))
    for i, name in enumerate(_torsion_names(t)):
        comps.append(LinkComponent(name, (0,) * b1, tuple(int(i == j) for j in range(t)), 0))
    m = len(comps)
    h2 = tuple(
        H2Generator(f"S_{comps[s].name}", tuple(int(i == s) for i in range(m))) for s in range(b1)
    )
    model = ManifoldModel(b1, torsion, tuple(comps), h2)
    return model.with_default_surfaces()


# ---------------------------------------------------------------------------
# model files

_TOP_KEYS = {"b1", "torsion", "link", "h2_generators", "h2_complete", "obr_surfaces"}
_LINK_KEYS = {"name", "class_free", "class_torsion", "framing"}


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ModelError(f"{where} must be an object")
    extra = set(obj) - allowed
    if extra:
        raise ModelError(f"unknown key(s) {sorted(extra)} in {where}")


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ModelError(f"{where} must be an integer")
    return x


def _int_list(xs, where):
    if not isinstance(xs, list):
        raise ModelError(f"{where} must be a list")
    return tuple(_int(x, where) for x in xs)


def _by_name(d, names, where):
    if not isinstance(d, dict):
        raise ModelError(f"{where} must map component names to integers")
    unknown = set(d) - set(names)
    if unknown:
        raise ModelError(f"{where} mentions unknown component(s) {sorted(unknown)}")
    return tuple(_int(d.get(n, 0), where) for n in names)


def parse_model(text: str) -> ManifoldModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"parse error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    _check_keys(data, _TOP_KEYS, "model")
    for key in ("b1", "link", "h2_complete"):
        if key not in data:
            raise ModelError(f"missing key {key!r}")
    if data["h2_complete"] is not True:
        raise ModelError("h2_complete must be true: H_2 rows must generate H_2(M, Z)")
    b1 = _int(data["b1"], "b1")
    torsion = _int_list(data.get("torsion", []), "torsion")
    comps = []
    for i, c in enumerate(data["link"]):
        _check_keys(c, _LINK_KEYS, f"link[{i}]")
        if "name" not in c or not isinstance(c["name"], str) or c["name"] == STAR:
            raise ModelError(f"link[{i}] needs a name")
        comps.append(
            LinkComponent(
                c["name"],
                _int_list(c.get("class_free", [0] * b1), f"link[{i}].class_free"),
                _int_list(c.get("class_torsion", [0] * len(torsion)), f"link[{i}].class_torsion"),
                _int(c.get("framing", 0), f"link[{i}].framing"),
            )
        )
    names = [c.name for c in comps]
    h2 = []
    for i, s in enumerate(data.get("h2_generators", [])):
        _check_keys(s, {"name", "pairing"}, f"h2_generators[{i}]")
        h2.append(H2Generator(str(s.get("name", f"S{i}")), _by_name(s.get("pairing", {}), names, f"h2_generators[{i}].pairing")))
    surfaces = []
    for i, s in enumerate(data.get("obr_surfaces", [])):
        _check_keys(s, {"kernel", "pairing"}, f"obr_surfaces[{i}]")
        if "kernel" not in s:
            raise ModelError(f"obr_surfaces[{i}] needs a kernel")
        surfaces.append(
            ObrSurface(
                _by_name(s["kernel"], names, f"obr_surfaces[{i}].kernel"),
                _by_name(s.get("pairing", {}), names, f"obr_surfaces[{i}].pairing"),
            )
        )
    model = ManifoldModel(b1, torsion, tuple(comps), tuple(h2), tuple(surfaces), True)
    if "obr_surfaces" not in data:
        model = model.with_default_surfaces()
    return model


def load_model(path) -> ManifoldModel:
    with open(path) as fh:
        return parse_model(fh.read())
