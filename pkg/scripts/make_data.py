#!/usr/bin/env python3
"""Regenerate the bundled data files: nilpotent group tables (order <= 16)
and fixed-point characters of small symmetric groups."""

from pathlib import Path

from conjlab.catalog import (
    NILPOTENT_LE16_LABELS,
    build_nilpotent,
    catalog_filename,
    format_group_file,
)
from conjlab.groups import conjugacy_classes, symmetric_group

DATA = Path(__file__).resolve().parent.parent / "src" / "conjlab" / "data"


def write_catalog():
    out = DATA / "catalog"
    out.mkdir(parents=True, exist_ok=True)
    for label in NILPOTENT_LE16_LABELS:
        group = build_nilpotent(label)
        path = out / catalog_filename(label)
        path.write_text(format_group_file(group))
        print(f"wrote {path} (order {group.order})")


def write_characters():
    out = DATA / "characters"
    out.mkdir(parents=True, exist_ok=True)
    for n in range(2, 8):
        group = symmetric_group(n)
        partition = conjugacy_classes(group)
        lines = [f"char S{n} {partition.n_classes}"]
        for rep in partition.reps:
            lines.append(f"{group.perm(rep).fixed()} 0")
        path = out / f"fixed_point_s{n}.chr"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path} ({partition.n_classes} classes)")


if __name__ == "__main__":
    write_catalog()
    write_characters()
