"""Group catalog: builders for small standard groups, the on-disk formats,
and the bundled table files (every nilpotent group of order <= 16).

File formats:
  * permutation groups:  `perm <n>` then one generator per line in cycle
    notation;
  * table groups:        `table <m> <label>` then m rows of m space-separated
    element indices, with index 0 the identity.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional

from .groups import FiniteGroup, Perm, direct_product, perm_group, symmetric_group, table_group


def _table_from_tuples(elements: list, mul: Callable, label: str) -> FiniteGroup:
    """Multiplication table over an explicit element list whose first entry
    is the identity."""
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return table_group(table, label)


def cyclic_group(n: int) -> FiniteGroup:
    return _table_from_tuples(list(range(n)), lambda a, b: (a + b) % n, f"Z{n}")


def abelian_group(orders: Iterable[int]) -> FiniteGroup:
    orders = list(orders)
    group = cyclic_group(orders[0])
    for n in orders[1:]:
        group = direct_product(group, cyclic_group(n))
    group.label = "x".join(f"Z{n}" for n in orders)
    return group


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n: pairs (rotation, flip)."""
    elements = [(i, s) for s in (0, 1) for i in range(n)]

    def mul(a, b):
        i, s = a
        j, t = b
        return ((i + (j if s == 0 else -j)) % n, (s + t) % 2)

    return _table_from_tuples(elements, mul, f"D{n}")


def quaternion_group(k: int) -> FiniteGroup:
    """Generalized quaternion group of order 4k: a^(2k) = e, b^2 = a^k,
    b^-1 a b = a^-1."""
    m = 2 * k
    elements = [(i, s) for s in (0, 1) for i in range(m)]

    def mul(a, b):
        i, s = a
        j, t = b
        i2 = (i + (j if s == 0 else -j)) % m
        if s + t == 2:
            return ((i2 + k) % m, 0)
        return (i2, s + t)

    return _table_from_tuples(elements, mul, f"Q{4 * k}")


def _metacyclic16(twist: int, label: str) -> FiniteGroup:
    # a^8 = b^2 = e, b a b^-1 = a^twist (twist^2 = 1 mod 8)
    elements = [(i, s) for s in (0, 1) for i in range(8)]

    def mul(a, b):
        i, s = a
        j, t = b
        return ((i + (twist ** s) * j) % 8, (s + t) % 2)

    return _table_from_tuples(elements, mul, label)


def semidihedral_16() -> FiniteGroup:
    return _metacyclic16(3, "SD16")


def modular_16() -> FiniteGroup:
    return _metacyclic16(5, "M16")


def c4_semidirect_c4() -> FiniteGroup:
    # a^4 = b^4 = e, b a b^-1 = a^-1
    elements = [(i, s) for s in range(4) for i in range(4)]

    def mul(a, b):
        i, s = a
        j, t = b
        return ((i + (j if s % 2 == 0 else -j)) % 4, (s + t) % 4)

    return _table_from_tuples(elements, mul, "Z4:Z4")


def c4xc2_semidirect_c2() -> FiniteGroup:
    # x^4 = y^2 = z^2 = e, xy = yx, z x z = xy, z y z = y
    elements = [(i, j, k) for k in (0, 1) for j in (0, 1) for i in range(4)]

    def mul(a, b):
        i, j, k = a
        p, q, r = b
        return ((i + p) % 4, (j + q + k * p) % 2, (k + r) % 2)

    return _table_from_tuples(elements, mul, "(Z4xZ2):Z2")


def central_product_c4_d4() -> FiniteGroup:
    """The central product of Z4 and D4 over their shared center, order 16;
    concretely the group generated by the Pauli matrices together with i*I,
    encoded as triples (power of i, X-part, Z-part)."""
    elements = [(s, p, q) for q in (0, 1) for p in (0, 1) for s in range(4)]

    def mul(a, b):
        s, p, q = a
        s2, p2, q2 = b
        # Z^q X^p2 = (-1)^(q*p2) X^p2 Z^q
        return ((s + s2 + 2 * q * p2) % 4, (p + p2) % 2, (q + q2) % 2)

    return _table_from_tuples(elements, mul, "Z4oD4")


_NILPOTENT_BUILDERS: dict[str, Callable[[], FiniteGroup]] = {
    "Z1": lambda: cyclic_group(1),
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "Z2xZ2": lambda: abelian_group([2, 2]),
    "Z5": lambda: cyclic_group(5),
    "Z6": lambda: cyclic_group(6),
    "Z7": lambda: cyclic_group(7),
    "Z8": lambda: cyclic_group(8),
    "Z4xZ2": lambda: abelian_group([4, 2]),
    "Z2xZ2xZ2": lambda: abelian_group([2, 2, 2]),
    "D4": lambda: dihedral_group(4),
    "Q8": lambda: quaternion_group(2),
    "Z9": lambda: cyclic_group(9),
    "Z3xZ3": lambda: abelian_group([3, 3]),
    "Z10": lambda: cyclic_group(10),
    "Z11": lambda: cyclic_group(11),
    "Z12": lambda: cyclic_group(12),
    "Z2xZ6": lambda: abelian_group([2, 6]),
    "Z13": lambda: cyclic_group(13),
    "Z14": lambda: cyclic_group(14),
    "Z15": lambda: cyclic_group(15),
    "Z16": lambda: cyclic_group(16),
    "Z8xZ2": lambda: abelian_group([8, 2]),
    "Z4xZ4": lambda: abelian_group([4, 4]),
    "Z4xZ2xZ2": lambda: abelian_group([4, 2, 2]),
    "Z2xZ2xZ2xZ2": lambda: abelian_group([2, 2, 2, 2]),
    "D8": lambda: dihedral_group(8),
    "SD16": semidihedral_16,
    "M16": modular_16,
    "Q16": lambda: quaternion_group(4),
    "Z4:Z4": c4_semidirect_c4,
    "(Z4xZ2):Z2": c4xc2_semidirect_c2,
    "Z4oD4": central_product_c4_d4,
    "D4xZ2": lambda: direct_product(dihedral_group(4), cyclic_group(2)),
    "Q8xZ2": lambda: direct_product(quaternion_group(2), cyclic_group(2)),
}

NILPOTENT_LE16_LABELS: tuple[str, ...] = tuple(_NILPOTENT_BUILDERS)


def build_nilpotent(label: str) -> FiniteGroup:
    """Construct a bundled nilpotent group from scratch (used to generate
    the data files; runtime loading goes through the files)."""
    try:
        return _NILPOTENT_BUILDERS[label]()
    except KeyError:
        raise ValueError(f"unknown nilpotent catalog label {label!r}") from None


def catalog_filename(label: str) -> str:
    safe = label.replace(":", "_s_").replace("(", "").replace(")", "").lower()
    return f"{safe}.grp"


def format_group_file(group: FiniteGroup) -> str:
    """Serialize in the table format."""
    lines = [f"table {group.order} {group.label}"]
    for a in group.elements():
        lines.append(" ".join(str(group.mul(a, b)) for b in group.elements()))
    return "\n".join(lines) + "\n"


def parse_group_file(text: str, default_label: str = "group") -> FiniteGroup:
    """Parse either on-disk format; table groups get full axiom validation."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines())
             if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty group file")
    head = lines[0].split()
    if head[0] == "perm":
        if len(head) != 2:
            raise ValueError(f"bad perm header {lines[0]!r}")
        n = int(head[1])
        gens = [Perm.parse(ln, n) for ln in lines[1:]]
        return perm_group(n, gens, label=default_label)
    if head[0] == "table":
        if len(head) < 2:
            raise ValueError(f"bad table header {lines[0]!r}")
        m = int(head[1])
        label = head[2] if len(head) > 2 else default_label
        if len(lines) - 1 != m:
            raise ValueError(f"expected {m} table rows, found {len(lines) - 1}")
        table = [[int(x) for x in ln.split()] for ln in lines[1:]]
        return table_group(table, label)
    raise ValueError(f"unknown group file header {lines[0]!r}")


def load_group_file(path) -> FiniteGroup:
    path = Path(path)
    return parse_group_file(path.read_text(), default_label=path.stem)


def _bundled_dir():
    return resources.files("conjlab").joinpath("data", "catalog")


def load_bundled(label: str) -> FiniteGroup:
    res = _bundled_dir().joinpath(catalog_filename(label))
    if not res.is_file():
        raise ValueError(f"no bundled group named {label!r}")
    return parse_group_file(res.read_text(), default_label=label)


def nilpotent_le16() -> list[FiniteGroup]:
    """All bundled nilpotent groups of order <= 16, in catalog order."""
    return [load_bundled(label) for label in NILPOTENT_LE16_LABELS]


def bundled_character_text(name: str) -> str:
    res = resources.files("conjlab").joinpath("data", "characters", f"{name}.chr")
    if not res.is_file():
        raise ValueError(f"no bundled character file named {name!r}")
    return res.read_text()


_SYMMETRIC_RE = re.compile(r"S([1-9][0-9]*)$")


def resolve_group_ref(ref: str, catalog_dirs: Iterable = (),
                      base_dir: Optional[Path] = None) -> FiniteGroup:
    """Resolve a group reference: builtin `S<n>`, a bundled catalog label,
    or a path to a .grp file (searched in catalog_dirs, then base_dir)."""
    m = _SYMMETRIC_RE.match(ref)
    if m:
        return symmetric_group(int(m.group(1)))
    if ref in NILPOTENT_LE16_LABELS:
        return load_bundled(ref)
    candidates = [Path(d) / ref for d in catalog_dirs]
    if base_dir is not None:
        candidates.append(Path(base_dir) / ref)
    candidates.append(Path(ref))
    for path in candidates:
        if path.is_file():
            return load_group_file(path)
    raise ValueError(f"cannot resolve group reference {ref!r}")
