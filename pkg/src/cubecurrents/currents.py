"""Rational geodesic currents and their intersection numbers with closed geodesics."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NonPrimitiveWeight, NotStabilized, ParseError
from .fuchsian import FuchsianRep, evaluate
from .hypgeo import translation_length
from .linking import SearchOptions, stable_crossings
from .words import ConjugacyClass, Word, enumerate_classes, format_word, parse_word


def parse_weight(text: str | int) -> Fraction:
    try:
        w = Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad weight {text!r}") from exc
    if w <= 0:
        raise NonPrimitiveWeight(f"weights must be positive, got {w}")
    return w


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class WeightedCurrent:
    """Finite positive rational combination of distinct primitive classes.

    A non-primitive class c = r^k entered as an atom contributes weight k to
    its root r.
    """

    genus: int
    atoms: tuple[tuple[ConjugacyClass, Fraction], ...]

    @classmethod
    def from_items(cls, genus: int, items: Iterable[tuple[ConjugacyClass | Word | str, Fraction | int | str]]
                   ) -> "WeightedCurrent":
        acc: dict[ConjugacyClass, Fraction] = {}
        for key, weight in items:
            if isinstance(key, str):
                key = ConjugacyClass.parse(key, genus)
            elif not isinstance(key, ConjugacyClass):
                key = ConjugacyClass.of(key, genus)
            root, k = key.root()
            acc[root] = acc.get(root, Fraction(0)) + k * parse_weight(weight)
        return cls(genus, tuple(sorted(acc.items(), key=lambda kv: kv[0].sort_key())))

    @classmethod
    def single(cls, c: ConjugacyClass) -> "WeightedCurrent":
        return cls.from_items(c.genus, [(c, 1)])

    @property
    def is_discrete(self) -> bool:
        return all(w == 1 for _, w in self.atoms)

    def to_dict(self) -> dict:
        return {"genus": self.genus,
                "atoms": [{"word": str(c), "weight": format_fraction(w)} for c, w in self.atoms]}

    @classmethod
    def from_dict(cls, data: Mapping, genus: int | None = None) -> "WeightedCurrent":
        if not isinstance(data, Mapping) or "atoms" not in data:
            raise ParseError("a current must be an object with an 'atoms' list")
        g = int(data.get("genus", genus if genus is not None else 2))
        items = []
        for k, atom in enumerate(data["atoms"]):
            if not isinstance(atom, Mapping) or "word" not in atom:
                raise ParseError(f"atom {k} must be an object with a 'word' field")
            items.append((parse_word(str(atom["word"]), g), atom.get("weight", "1")))
        return cls.from_items(g, items)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def __str__(self) -> str:
        return " + ".join(f"{format_fraction(w)}*[{c}]" if w != 1 else f"[{c}]" for c, w in self.atoms)


@dataclass(frozen=True)
class Witness:
    atom: ConjugacyClass
    conjugator: Word
    param: float

    def to_json(self) -> dict:
        return {"atom": str(self.atom), "conjugator": format_word(self.conjugator), "param": self.param}


@dataclass(frozen=True)
class LinkingCount:
    value: Fraction
    stabilized: bool
    radius_used: float
    witnesses: tuple[Witness, ...] = field(default=())


def intersection_number(alpha: WeightedCurrent, c: ConjugacyClass, rep: FuchsianRep,
                        opts: SearchOptions = SearchOptions()) -> LinkingCount:
    """Weighted count of translates of the atoms' axes crossing one period of c."""
    total = Fraction(0)
    stable = True
    radius = 0.0
    wits: list[Witness] = []
    for atom, weight in alpha.atoms:
        res = stable_crossings(rep, atom.word, c.word, 1, opts)
        total += weight * len(res.crossings)
        stable = stable and res.stabilized
        radius = max(radius, rep.covering_radius + res.margin)
        wits += [Witness(atom, x.conjugator, x.param) for x in res.crossings]
    wits.sort(key=lambda w: (w.param, w.atom.sort_key()))
    return LinkingCount(total, stable, radius, tuple(wits))


def stable_value(alpha: WeightedCurrent, c: ConjugacyClass, rep: FuchsianRep,
                 opts: SearchOptions = SearchOptions()) -> Fraction:
    """Intersection number, raising when the search did not stabilize."""
    res = intersection_number(alpha, c, rep, opts)
    if not res.stabilized:
        raise NotStabilized(f"no agreement for class {c} after {opts.doublings_cap} doublings")
    return res.value


def pair_with_hyperbolic(c: ConjugacyClass, rep: FuchsianRep) -> float:
    """Pairing with the Liouville current, i.e. the hyperbolic length of c."""
    return translation_length(evaluate(rep, c.word))


def self_intersection(c: ConjugacyClass, rep: FuchsianRep, opts: SearchOptions = SearchOptions()) -> int:
    """i(c, c): twice the number of transverse double points of the closed geodesic."""
    root, k = c.root()
    value = stable_value(WeightedCurrent.single(root), root, rep, opts)
    return int(value) * k * k


@dataclass(frozen=True)
class FillingReport:
    ok: bool
    failures: tuple[ConjugacyClass, ...]
    unstabilized: tuple[ConjugacyClass, ...]
    values: tuple[tuple[ConjugacyClass, Fraction], ...]


def weakly_filling_up_to(alpha: WeightedCurrent, L: int, rep: FuchsianRep,
                         opts: SearchOptions = SearchOptions(),
                         classes: list[ConjugacyClass] | None = None, early_exit: bool = False) -> FillingReport:
    """Bounded certificate that alpha pairs positively with every class of length <= L.

    With ``early_exit`` the scan stops at the first failing or unsettled class,
    and ``values`` covers only the classes examined.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if classes is None:
        classes = enumerate_classes(alpha.genus, L)
    failures, unstable, values = [], [], []
    for c in classes:
        res = intersection_number(alpha, c, rep, opts)
        values.append((c, res.value))
        if not res.stabilized:
            unstable.append(c)
        elif res.value <= 0:
            failures.append(c)
        if early_exit and (failures or unstable):
            break
    return FillingReport(not failures and not unstable, tuple(failures), tuple(unstable), tuple(values))
