"""Fixture files: parsing, validation and construction of the algebraic objects."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema

from .compat import CompatReport, is_completely_compatible
from .errors import InvalidSpecError
from .lattice import DEFAULT_LATTICE_CAP, SubmoduleLattice, right_perfect_report, submodules
from .modules import (DEFAULT_TRUNCATION_CAP, FiniteModule, TruncatedInverseModule,
                      truncate, verify_module)
from .rings import (FiniteRing, RingMap, build_ring, derivation_from_table,
                    endomorphism_from_table, frobenius_map, identity_map, inner_derivation,
                    scale_map, truncated_derivative, verify_endomorphism, verify_ring,
                    verify_sigma_derivation, zero_derivation)
from .skew import DEFAULT_OPERATOR_DEPTH, SkewOreRing

DEFAULT_DEPTH = 2


def _schema() -> dict:
    text = resources.files("oredim").joinpath("schemas/fixture.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class FixtureSpec:
    id: str
    data: dict
    source: str = "<memory>"

    @property
    def depth(self) -> int:
        return int(self.data.get("depth", DEFAULT_DEPTH))

    @property
    def description(self) -> str:
        return self.data.get("description", "")


def validate_fixture(data, source: str = "<memory>") -> FixtureSpec:
    """Schema validation; raises InvalidSpecError naming the offending location."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        # oneOf failures are noisy; report the deepest concrete cause
        err = errors[0]
        while err.context:
            err = min(err.context, key=lambda e: (-len(e.absolute_path), e.message))
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InvalidSpecError(f"{source}: invalid fixture at {where}: {err.message}")
    return FixtureSpec(data["id"], data, source)


def parse_fixture(path) -> FixtureSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise InvalidSpecError(f"cannot read fixture {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return validate_fixture(data, str(path))


def _build_sigma(ring: FiniteRing, spec: dict) -> RingMap:
    kind = spec["kind"]
    if kind == "identity":
        return identity_map(ring)
    if kind == "frobenius":
        return frobenius_map(ring, spec.get("power", 1))
    if kind == "scale":
        return scale_map(ring, spec["unit"])
    if len(spec["table"]) != ring.size:
        raise InvalidSpecError(f"sigma table has {len(spec['table'])} entries, ring has {ring.size}")
    return endomorphism_from_table(ring, spec["table"])


def _build_delta(ring: FiniteRing, sigma: RingMap, spec: dict) -> RingMap:
    kind = spec["kind"]
    if kind == "zero":
        return zero_derivation(ring, sigma)
    if kind == "truncated_derivative":
        return truncated_derivative(ring, sigma, spec["power"])
    if kind == "inner":
        return inner_derivation(ring, sigma, spec["element"])
    if len(spec["table"]) != ring.size:
        raise InvalidSpecError(f"delta table has {len(spec['table'])} entries, ring has {ring.size}")
    return derivation_from_table(ring, sigma, spec["table"])


def build_module(ring: FiniteRing, spec: dict) -> FiniteModule:
    kind = spec["kind"]
    if kind == "regular":
        return FiniteModule.regular(ring)
    if kind == "zero":
        return FiniteModule.zero_module(ring)
    if kind == "quotient":
        parent = build_module(ring, spec.get("of", {"kind": "regular"}))
        bad = [g for g in spec["generators"] if g >= parent.size]
        if bad:
            raise InvalidSpecError(f"quotient generator {bad[0]} outside a module of size {parent.size}")
        return parent.quotient_by(spec["generators"], name=f"{parent.name}/<{','.join(map(str, spec['generators']))}>")
    if kind == "explicit":
        try:
            return FiniteModule.from_tables(ring, spec["add"], spec["action"], spec.get("zero", 0), spec.get("labels"))
        except (ValueError, IndexError) as exc:
            raise InvalidSpecError(f"explicit module tables are malformed: {exc}") from None
    summands = [build_module(ring, s) for s in spec["summands"]]
    out = summands[0]
    for s in summands[1:]:
        out = out.direct_sum(s)
    return out


@dataclass
class Caps:
    truncation: int = DEFAULT_TRUNCATION_CAP
    lattice: int = DEFAULT_LATTICE_CAP
    operator_depth: int = DEFAULT_OPERATOR_DEPTH


class Instance:
    """A fully built, verified fixture with lazily cached lattices."""

    def __init__(self, fid: str, ring: FiniteRing, sigma: RingMap, delta: RingMap,
                 module: FiniteModule, submodule=None, depth: int = DEFAULT_DEPTH,
                 description: str = "", caps: Caps | None = None, spec: dict | None = None):
        self.id = fid
        self.ring = ring
        self.sigma = sigma
        self.delta = delta
        self.module = module
        self.depth = depth
        self.description = description
        self.caps = caps or Caps()
        self.spec = spec
        self.A = SkewOreRing(ring, sigma, delta, self.caps.operator_depth)
        self.submodule_mask = None
        if submodule is not None:
            self.submodule_mask = module.submodule_mask(submodule)
        self._trunc: dict[int, TruncatedInverseModule] = {}
        self._tlat: dict[int, SubmoduleLattice] = {}
        self.laws = {
            "ring": verify_ring(ring),
            "sigma": verify_endomorphism(ring, sigma),
            "delta": verify_sigma_derivation(ring, sigma, delta),
            "module": verify_module(module),
        }

    def __repr__(self):
        return f"Instance({self.id})"

    @cached_property
    def lattice(self) -> SubmoduleLattice:
        return submodules(self.module, self.caps.lattice)

    @cached_property
    def compat(self) -> CompatReport:
        return is_completely_compatible(self.module, self.sigma, self.delta, self.lattice)

    @cached_property
    def perfect(self) -> dict:
        return right_perfect_report(self.ring)

    def truncation(self, d: int) -> TruncatedInverseModule:
        if d not in self._trunc:
            self._trunc[d] = truncate(self.A, self.module, d, self.caps.truncation)
        return self._trunc[d]

    def truncation_lattice(self, d: int) -> SubmoduleLattice:
        if d not in self._tlat:
            self._tlat[d] = submodules(self.truncation(d), self.caps.lattice)
        return self._tlat[d]

    def submodule_index(self) -> int | None:
        if self.submodule_mask is None:
            return None
        return self.lattice.find(self.submodule_mask)


def build_instance(spec: FixtureSpec, caps: Caps | None = None) -> Instance:
    """Construct every object in the fixture; LawViolationError carries the failing report."""
    data = spec.data
    try:
        ring = build_ring(data["ring"])
        sigma = _build_sigma(ring, data["sigma"])
        delta = _build_delta(ring, sigma, data["delta"])
        module = build_module(ring, data["module"])
    except (ValueError, IndexError, TypeError) as exc:
        raise InvalidSpecError(f"{spec.source}: {exc}") from None
    sub = None
    if "submodule" in data:
        sub = data["submodule"]["generators"]
        bad = [g for g in sub if g >= module.size]
        if bad:
            raise InvalidSpecError(f"{spec.source}: submodule generator {bad[0]} outside the module")
    return Instance(spec.id, ring, sigma, delta, module, sub, spec.depth, spec.description,
                    caps, data)


def load_instance(path, caps: Caps | None = None) -> Instance:
    return build_instance(parse_fixture(path), caps)


BUNDLED = ("zmod4", "gf4-frob", "qplane3", "jordan4", "f2sq", "swap", "ut2")


def bundled_dir() -> Path:
    return Path(str(resources.files("oredim").joinpath("fixtures")))


def bundled_paths() -> list[Path]:
    root = bundled_dir()
    return [root / f"{name}.json" for name in BUNDLED]


def corpus_paths(directory) -> list[Path]:
    """Fixture files of a corpus directory, sorted by name."""
    root = Path(directory)
    if not root.is_dir():
        raise InvalidSpecError(f"corpus directory {root} does not exist")
    return sorted(root.glob("*.json"))


def load_bundled(caps: Caps | None = None) -> list[Instance]:
    return [load_instance(p, caps) for p in bundled_paths()]


__all__ = [
    "BUNDLED", "Caps", "FixtureSpec", "Instance", "build_instance", "build_module",
    "bundled_dir", "bundled_paths", "corpus_paths", "load_bundled", "load_instance",
    "parse_fixture", "validate_fixture",
]
