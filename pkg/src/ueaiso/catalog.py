"""Built-in nilpotent Lie algebras under their usual short names.

Dimension-5 algebras ``L5.i`` and dimension-6 algebras ``K6.i`` use De Graaf's
numbering on homogeneous bases. Where De Graaf's basis is not homogeneous the
order differs (``L5.2`` lists the central weight-1 vectors before the
commutator).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .field import FieldSpec
from .lie import LieAlgebra, LieError


class CatalogError(LieError):
    pass


# (i, j, k, coeff) with 1-based indices; coeff "eps" marks the parameter
_Rel = Tuple[int, int, int, object]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    nilpotency_class: int
    lcs_dims: Tuple[int, ...]
    weights: Optional[Tuple[int, ...]] = None
    relations: Optional[Tuple[_Rel, ...]] = None
    parametric: bool = False
    min_char_excluded: Tuple[int, ...] = ()

    @property
    def has_table(self) -> bool:
        return self.relations is not None

    def admissible(self, F: FieldSpec) -> bool:
        return F.characteristic not in self.min_char_excluded

    def build(self, F: FieldSpec, param=None) -> LieAlgebra:
        if not self.has_table:
            raise CatalogError(f"{self.name} has no bundled multiplication table")
        if not self.admissible(F):
            raise CatalogError(
                f"{self.name} is only classified over fields of characteristic not "
                + ", ".join(map(str, self.min_char_excluded))
            )
        if self.parametric and param is None:
            raise CatalogError(f"{self.name} needs a parameter")
        if not self.parametric and param is not None:
            raise CatalogError(f"{self.name} takes no parameter")
        eps = F(param) if param is not None else None
        table: Dict[Tuple[int, int], Dict[int, object]] = {}
        for i, j, k, c in self.relations:
            c = eps if c == "eps" else F(c)
            if i > j:
                i, j, c = j, i, F.norm(-c)
            row = table.setdefault((i - 1, j - 1), {})
            row[k - 1] = F.norm(row.get(k - 1, F.zero) + c)
        name = self.name if param is None else f"{self.name}({param})"
        return LieAlgebra(F, self.dim, table, self.weights, name=name)


def _e(name, weights, rels, parametric=False, char_excl=()):
    w = tuple(weights)
    top = max(w)
    lcs = tuple(sum(1 for x in w if x >= i) for i in range(1, top + 1))
    return CatalogEntry(name, len(w), top, lcs, w, tuple(rels), parametric, tuple(char_excl))


_NO2 = (2,)

_ENTRIES: List[CatalogEntry] = [
    _e("L1.1", [1], []),
    _e("L2.1", [1, 1], []),
    _e("L3.1", [1, 1, 1], []),
    _e("L3.2", [1, 1, 2], [(1, 2, 3, 1)]),
    _e("L4.1", [1, 1, 1, 1], []),
    _e("L4.2", [1, 1, 1, 2], [(1, 2, 4, 1)]),
    _e("L4.3", [1, 1, 2, 3], [(1, 2, 3, 1), (1, 3, 4, 1)]),
    _e("L5.1", [1, 1, 1, 1, 1], []),
    _e("L5.2", [1, 1, 1, 1, 2], [(1, 2, 5, 1)]),
    _e("L5.3", [1, 1, 1, 2, 3], [(1, 2, 4, 1), (1, 4, 5, 1)]),
    _e("L5.4", [1, 1, 1, 1, 2], [(1, 2, 5, 1), (3, 4, 5, 1)]),
    _e("L5.5", [1, 1, 1, 2, 3], [(1, 2, 4, 1), (1, 4, 5, 1), (2, 3, 5, 1)]),
    _e("L5.6", [1, 1, 2, 3, 4], [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 3, 5, 1)]),
    _e("L5.7", [1, 1, 2, 3, 4], [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1)]),
    _e("L5.8", [1, 1, 1, 2, 2], [(1, 2, 4, 1), (1, 3, 5, 1)]),
    _e("L5.9", [1, 1, 2, 3, 3], [(1, 2, 3, 1), (1, 3, 4, 1), (2, 3, 5, 1)]),
    # family (1)
    _e("K6.3", [1, 1, 1, 1, 2, 3], [(1, 2, 5, 1), (1, 5, 6, 1)], char_excl=_NO2),
    _e("K6.5", [1, 1, 1, 1, 2, 3], [(1, 2, 5, 1), (1, 5, 6, 1), (2, 3, 6, 1)], char_excl=_NO2),
    _e("K6.10", [1, 1, 1, 1, 2, 3], [(1, 2, 5, 1), (1, 5, 6, 1), (3, 4, 6, 1)], char_excl=_NO2),
    # family (2)
    _e("K6.6", [1, 1, 1, 2, 3, 4], [(1, 2, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1), (2, 4, 6, 1)], char_excl=_NO2),
    _e("K6.7", [1, 1, 1, 2, 3, 4], [(1, 2, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1)], char_excl=_NO2),
    _e(
        "K6.11",
        [1, 1, 1, 2, 3, 4],
        [(1, 2, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1), (2, 4, 6, 1), (2, 3, 6, 1)],
        char_excl=_NO2,
    ),
    _e("K6.12", [1, 1, 1, 2, 3, 4], [(1, 2, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1), (2, 3, 6, 1)], char_excl=_NO2),
    _e(
        "K6.13",
        [1, 1, 1, 2, 3, 4],
        [(1, 2, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1), (2, 3, 5, 1), (4, 3, 6, 1)],
        char_excl=_NO2,
    ),
    # family (3)
    _e(
        "K6.14",
        [1, 1, 2, 3, 4, 5],
        [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 5, 6, 1), (3, 4, 6, -1), (2, 3, 5, 1)],
        char_excl=_NO2,
    ),
    _e(
        "K6.16",
        [1, 1, 2, 3, 4, 5],
        [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 5, 6, 1), (3, 4, 6, -1)],
        char_excl=_NO2,
    ),
    # family (4)
    _e(
        "K6.15",
        [1, 1, 2, 3, 4, 5],
        [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (2, 3, 5, 1), (1, 5, 6, 1), (2, 4, 6, 1)],
        char_excl=_NO2,
    ),
    _e(
        "K6.17",
        [1, 1, 2, 3, 4, 5],
        [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1), (2, 3, 6, 1)],
        char_excl=_NO2,
    ),
    _e("K6.18", [1, 1, 2, 3, 4, 5], [(1, 2, 3, 1), (1, 3, 4, 1), (1, 4, 5, 1), (1, 5, 6, 1)], char_excl=_NO2),
    # family (5)
    _e("K6.23", [1, 1, 1, 2, 2, 3], [(1, 2, 4, 1), (1, 4, 6, 1), (1, 3, 5, 1), (2, 3, 6, 1)], char_excl=_NO2),
    _e("K6.25", [1, 1, 1, 2, 2, 3], [(1, 2, 4, 1), (1, 4, 6, 1), (1, 3, 5, 1)], char_excl=_NO2),
    # family (6)
    _e("K6.9", [1, 1, 1, 2, 3, 3], [(1, 2, 4, 1), (1, 4, 5, 1), (2, 4, 6, 1)], char_excl=_NO2),
    _e(
        "K6.24",
        [1, 1, 1, 2, 3, 3],
        [(1, 2, 4, 1), (1, 4, 5, 1), (1, 3, 6, "eps"), (2, 4, 6, 1), (2, 3, 5, 1)],
        parametric=True,
        char_excl=_NO2,
    ),
]

CATALOG: Dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}

# Families of dimension-6 entries sharing gr L (the expected screening result).
DIM6_FAMILIES: Tuple[Tuple[str, ...], ...] = (
    ("K6.3", "K6.5", "K6.10"),
    ("K6.6", "K6.7", "K6.11", "K6.12", "K6.13"),
    ("K6.14", "K6.16"),
    ("K6.15", "K6.17", "K6.18"),
    ("K6.23", "K6.25"),
    ("K6.9", "K6.24"),
)


def _sort_key(name: str):
    head, _, num = name.partition(".")
    return (int(head[1:]), head[0], int(num))


def catalog_names(dim: Optional[int] = None) -> List[str]:
    names = [n for n, e in CATALOG.items() if dim is None or e.dim == dim]
    return sorted(names, key=_sort_key)


def catalog_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}") from None


def catalog_get(name: str, field: FieldSpec, param=None) -> LieAlgebra:
    return catalog_entry(name).build(field, param)


@dataclass(frozen=True)
class CatalogListing:
    name: str
    dim: int
    nilpotency_class: int
    lcs_dims: Tuple[int, ...]
    has_table: bool
    parametric: bool


def catalog_list(dim: Optional[int] = None, field: Optional[FieldSpec] = None) -> List[CatalogListing]:
    """Entries (admissible for ``field`` if given) in a fixed order."""
    out = []
    for n in catalog_names(dim):
        e = CATALOG[n]
        if field is not None and not e.admissible(field):
            continue
        out.append(CatalogListing(n, e.dim, e.nilpotency_class, e.lcs_dims, e.has_table, e.parametric))
    return out
