"""Command-line surface.

Exit codes: 0 success / no witness, 1 usage error, 2 witness or violation
found, 3 certificate refuted.  All numbers print as exact p/q rationals or
12-significant-digit reals, and identical invocations (including seeds)
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .almosthom import AlmostHom, CosetSystem, exact_coset_ahom, is_ahom, iterate_amplify
from .conjgraph import build_graph, edge_lines, graph_norm, to_dot
from .errors import ConjlabError
from .groups import Perm, conjugacy_classes, perm_group
from .metrics import (
    HammingTarget,
    character_norm_as_norm,
    format_value,
    hamming_norm_on,
    parse_character,
    verify_norm_axioms,
)
from .separability import (
    NOracle,
    check_separation,
    closure_search,
    parse_certificate,
    parse_experiment_config,
    stabilization,
    verify_certificate,
)
from .words import GenImages

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_WITNESS = 2
EXIT_REFUTED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _parse_fraction(text: str):
    if "/" in text:
        return Fraction(text)
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return Fraction(int(text))


def _parse_class_spec(spec: str, partition) -> list[int]:
    """Class labels separated by ';' (labels themselves may contain commas)."""
    out = []
    for name in spec.split(";"):
        name = name.strip()
        if name:
            out.append(partition.class_by_label(name))
    return out


def _parse_hom(spec: str, degree: int) -> list[Perm]:
    return [Perm.parse(part, degree) for part in spec.split(";")]


def _write(out_path, text: str):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_group(ref: str, args):
    dirs = list(args.catalog or [])
    return catalog.resolve_group_ref(ref, catalog_dirs=dirs)


def _coset_ahom_from_flags(args) -> tuple[AlmostHom, CosetSystem, NOracle]:
    """Build an almost-homomorphism on the cosets of ker(F -> <images>) at
    the given radius, into the symmetric group with the Hamming metric;
    optionally corrupt some non-identity labels (seeded)."""
    images = _parse_hom(args.hom, args.degree)
    quotient = perm_group(args.degree, images, label=f"<hom image in S{args.degree}>")
    oracle = NOracle(GenImages(quotient, [quotient.index_of_perm(p) for p in images]))
    system = CosetSystem(oracle, args.radius)
    target = HammingTarget(args.degree)
    ah = exact_coset_ahom(system, GenImages(target, images))
    if getattr(args, "corrupt", 0):
        if args.seed is None:
            raise _UsageError("--corrupt requires an explicit --seed")
        import random

        rng = random.Random(args.seed)
        mapping = list(ah.mapping)
        candidates = [
            i for i in range(len(system.reps)) if i != system.mulset.identity_index
        ]
        if not candidates:
            raise _UsageError("nothing to corrupt: only the identity coset is labeled")
        for _ in range(args.corrupt):
            i = rng.choice(candidates)
            shuffled = list(range(args.degree))
            rng.shuffle(shuffled)
            mapping[i] = Perm(shuffled)
        ah = AlmostHom(system.mulset, target, mapping)
    return ah, system, oracle


def cmd_norm(args) -> int:
    group = _resolve_group(args.group, args)
    partition = conjugacy_classes(group)
    if args.kind == "hamming":
        norm = hamming_norm_on(group)
    elif args.kind == "graph":
        if not args.classes:
            raise _UsageError("graph norm needs --classes")
        cids = _parse_class_spec(args.classes, partition)
        gn = graph_norm(group, cids)
        scale = _parse_fraction(args.scale) if args.scale else 1
        norm = gn.to_norm(scale=scale)
    elif args.kind == "character":
        if args.char_file:
            text = Path(args.char_file).read_text()
            label = Path(args.char_file).stem
        else:
            name = f"{args.character}_{group.label.lower()}"
            text = catalog.bundled_character_text(name)
            label = args.character
        cd = parse_character(text, group, label=label)
        norm = character_norm_as_norm(cd)
    else:
        raise _UsageError(f"unknown norm kind {args.kind!r}")

    lines = [f"norm {norm.label} on {group.label} ({partition.n_classes} classes)"]
    lines.append("class\tsize\trep\tvalue")
    for cid in range(partition.n_classes):
        lines.append(
            f"{partition.class_label(cid)}\t{partition.sizes[cid]}"
            f"\t{group.element_repr(partition.reps[cid])}"
            f"\t{format_value(norm.class_values[cid])}"
        )
    report = verify_norm_axioms(group, norm)
    lines.append(report.format())
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_conjgraph(args) -> int:
    group = _resolve_group(args.group, args)
    partition = conjugacy_classes(group)
    cids = _parse_class_spec(args.classes, partition) if args.classes else []
    graph = build_graph(group, cids)
    if args.dot:
        text = to_dot(graph, name=f"{group.label}_conjgraph".replace("-", "_")) + "\n"
    else:
        lines = [
            f"conjugacy-class graph of {group.label},"
            f" generating classes [{';'.join(partition.class_label(c) for c in cids)}]:"
            f" {graph.n_vertices} vertices, {len(graph.edges())} edges"
        ]
        lines.extend(edge_lines(graph))
        text = "\n".join(lines) + "\n"
    _write(args.out, text)
    return EXIT_OK


def cmd_amplify(args) -> int:
    ah, system, _oracle = _coset_ahom_from_flags(args)
    target_margin = _parse_fraction(args.target_margin)
    run = iterate_amplify(ah, target_margin, cap_degree=args.cap_degree)
    lines = [
        f"coset domain: {len(system.reps)} labels at radius {args.radius}",
        run.format(),
    ]
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ahom_check(args) -> int:
    ah, system, _oracle = _coset_ahom_from_flags(args)
    eps = _parse_fraction(args.eps)
    alpha = _parse_fraction(args.alpha)
    _passed, report = is_ahom(ah, eps, alpha)
    _write(args.out, report.format() + "\n")
    return EXIT_OK


def cmd_separate(args) -> int:
    images = _parse_hom(args.hom, args.degree)
    target = HammingTarget(args.degree)
    gi = GenImages(target, images)
    if args.oracle_hom:
        odeg = args.oracle_degree or args.degree
        operms = _parse_hom(args.oracle_hom, odeg)
    else:
        odeg = args.degree
        operms = images
    quotient = perm_group(odeg, operms, label=f"<oracle image in S{odeg}>")
    oracle = NOracle(
        GenImages(quotient, [quotient.index_of_perm(p) for p in operms])
    )
    verdict = check_separation(
        gi, oracle, args.radius, _parse_fraction(args.eps), _parse_fraction(args.delta)
    )
    _write(args.out, verdict.format() + "\n")
    return EXIT_OK if verdict.passed else EXIT_WITNESS


def _witness_json(witness):
    return {
        "group": witness.group_label,
        "images": list(witness.image_reprs),
        "image_order": witness.image_order,
        "w_class": witness.w_class,
        "g_classes": list(witness.g_classes),
        "product_classes": list(witness.product_classes),
        "brute_force_verified": witness.brute_force_verified,
    }


def cmd_closure(args) -> int:
    config_path = Path(args.config)
    config = parse_experiment_config(config_path.read_text())
    mode = config.mode
    count = config.count
    seed = args.seed if args.seed is not None else config.seed
    if args.mode:
        if args.mode == "exhaustive":
            mode, count = "exhaustive", None
        elif args.mode.startswith("sampled:"):
            mode, count = "sampled", int(args.mode.split(":", 1)[1])
        else:
            raise _UsageError(f"unknown mode {args.mode!r}")
    dirs = list(args.catalog or [])
    groups = []
    for ref in config.group_refs:
        groups.append(
            catalog.resolve_group_ref(ref, catalog_dirs=dirs, base_dir=config_path.parent)
        )
    for family in config.families:
        groups.extend(catalog.nilpotent_le16())
    if args.cap_order:
        kept = []
        for g in groups:
            if g.order > args.cap_order:
                kept_note = f"order {g.order} over --cap-order {args.cap_order}"
                print(f"skipping {g.label}: {kept_note}", file=sys.stderr)
            else:
                kept.append(g)
        groups = kept

    run_id = hashlib.sha256(
        f"{config.raw_text}\n#mode={mode} count={count} seed={seed}".encode()
    ).hexdigest()[:12]
    result = closure_search(
        config.rank, config.g_words, config.w_word, groups,
        mode=mode, seed=seed, count=count,
    )
    lines = []
    for rec in result.records:
        obj = {
            "type": "group",
            "run_id": run_id,
            "group": rec.label,
            "order": rec.order,
            "mode": rec.mode,
            "tuples": rec.tuples,
            "inside": rec.inside,
        }
        if rec.skipped:
            obj["skipped"] = rec.skipped
        if rec.witness:
            obj["witness"] = _witness_json(rec.witness)
        lines.append(json.dumps(obj, separators=(",", ":")))
    summary = {
        "type": "summary",
        "run_id": run_id,
        "groups": len(result.records),
        "tuples": result.total_tuples,
        "inside": result.total_inside,
        "witness_found": result.witness is not None,
    }
    lines.append(json.dumps(summary, separators=(",", ":")))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_WITNESS if result.witness is not None else EXIT_OK


def cmd_stabilize(args) -> int:
    group = _resolve_group(args.group, args)
    elements = []
    for spec in args.elements:
        if group.is_perm_backed:
            elements.append(group.index_of_perm(Perm.parse(spec, group.degree)))
        else:
            elements.append(int(spec))
    result = stabilization(group, elements)
    lines = [
        f"stabilization in {group.label} (order {group.order})",
        f"paired-classes product: stabilized at n*={result.n_star},"
        f" set size {len(result.stabilized)}",
        f"symmetrized variant: stabilized at n*={result.variant_n_star},"
        f" set size {len(result.variant_stabilized)}",
        f"normal closure size: {len(result.normal_closure)}",
        f"paired-classes set equals normal closure: {result.literal_equals_closure}",
        f"symmetrized variant equals normal closure: {result.variant_equals_closure}",
    ]
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify_certificate(args) -> int:
    cert = parse_certificate(Path(args.certificate).read_text())
    result = verify_certificate(cert)
    _write(args.out, f"certificate {'VALID' if result.valid else 'REFUTED'}: {result.detail}\n")
    return EXIT_OK if result.valid else EXIT_REFUTED


def _add_catalog_flag(p):
    p.add_argument("--catalog", action="append", metavar="DIR",
                   help="extra directory searched for group files (repeatable)")


def _add_out_flag(p):
    p.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")


def _add_hom_flags(p):
    p.add_argument("--degree", type=int, required=True,
                   help="degree n of the symmetric target S_n")
    p.add_argument("--hom", required=True, metavar="CYCLES[;CYCLES...]",
                   help="generator images as cycle notation, one per free generator")
    p.add_argument("--radius", type=int, default=2,
                   help="ball radius for the coset domain (default 2)")
    p.add_argument("--corrupt", type=int, default=0, metavar="K",
                   help="corrupt K non-identity coset images (requires --seed)")
    p.add_argument("--seed", type=int, help="seed for corruption choices")


def build_parser() -> _Parser:
    parser = _Parser(prog="conjlab",
                     description="bi-invariant norms, conjugacy-class graphs and"
                                 " almost-homomorphism experiments on finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, text):
        return sub.add_parser(name, help=text, description=text)

    p = add_command("norm", "normalized Hamming, conjugacy-graph or"
                            " trace-character norm tables with axiom checks")
    p.add_argument("group", help="group reference: S<n>, bundled label, or file path")
    p.add_argument("kind", choices=["hamming", "graph", "character"])
    p.add_argument("--classes", metavar="SPEC",
                   help="generating classes for the graph norm, ';'-separated labels")
    p.add_argument("--scale", metavar="P/Q", help="scale factor for the graph norm")
    p.add_argument("--character", default="fixed_point",
                   help="bundled character name (default fixed_point)")
    p.add_argument("--char-file", metavar="PATH", help="explicit character file")
    _add_catalog_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=cmd_norm)

    p = add_command("conjgraph", "conjugacy-class graph as an edge list or DOT")
    p.add_argument("group")
    p.add_argument("--classes", metavar="SPEC", default="",
                   help="generating classes, ';'-separated labels")
    p.add_argument("--dot", action="store_true", help="emit DOT format")
    _add_catalog_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=cmd_conjgraph)

    p = add_command("amplify", "square a coset almost-homomorphism through"
                               " S_n x S_n -> S_{n^2} until the margin target")
    _add_hom_flags(p)
    p.add_argument("--target-margin", default="0.9", metavar="X",
                   help="margin to reach (default 0.9)")
    p.add_argument("--cap-degree", type=int, default=6 ** 4,
                   help="largest permitted amplified degree (default 1296)")
    _add_out_flag(p)
    p.set_defaults(func=cmd_amplify)

    p = add_command("ahom-check", "measure defect and margin of a coset"
                                  " almost-homomorphism and test thresholds")
    _add_hom_flags(p)
    p.add_argument("--eps", required=True, help="defect threshold")
    p.add_argument("--alpha", required=True, help="margin threshold")
    _add_out_flag(p)
    p.set_defaults(func=cmd_ahom_check)

    p = add_command("separate", "(r,eps,delta) separation check of a"
                                " homomorphism against a quotient model")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--hom", required=True, metavar="CYCLES[;CYCLES...]")
    p.add_argument("--radius", "-r", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--oracle-degree", type=int,
                   help="degree of the oracle quotient (defaults to --degree)")
    p.add_argument("--oracle-hom", metavar="CYCLES[;CYCLES...]",
                   help="oracle model images (defaults to --hom)")
    _add_out_flag(p)
    p.set_defaults(func=cmd_separate)

    p = add_command("closure", "search homomorphisms for a word escaping a"
                               " product of conjugacy classes (JSON-lines log)")
    p.add_argument("config", help="experiment config file")
    p.add_argument("--mode", metavar="exhaustive|sampled:<count>",
                   help="override the config mode")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--cap-order", type=int, metavar="M",
                   help="skip catalog groups of order above M")
    _add_catalog_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=cmd_closure)

    p = add_command("stabilize", "stabilize powers of the paired product of"
                                 " conjugacy classes against the normal closure")
    p.add_argument("group")
    p.add_argument("elements", nargs="+",
                   help="elements (cycle notation for permutation groups, indices otherwise)")
    _add_catalog_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=cmd_stabilize)

    p = add_command("verify-certificate", "replay a stored non-membership certificate")
    p.add_argument("certificate", help="certificate file")
    _add_out_flag(p)
    p.set_defaults(func=cmd_verify_certificate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConjlabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
