"""Command-line surface: every construction and check on document files.

Exit codes: 0 success or checked-true, 1 checked-false or invalid object,
2 parse or reference error, 3 precondition violation (for instance a search
space over the bound).  GERBE_MAX_SEARCH overrides the enumeration bound.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import textio
from .cech import cech_groupoid
from .cocycle import h1_classes, program_for
from .errors import (
    GerbeError,
    ParseError,
    PreconditionError,
    UnresolvedReference,
    ValidationError,
)
from .extension import adapt, cocycle_from_adapted, extension_from_cocycle, relabel_carriers
from .fingroup import automorphism_group
from .morita import (
    as_cover_extension,
    extensions_morita_equivalent,
    gerbe_class,
    iso_witness,
    over_point_base,
    transport,
)


def _load(path: str) -> textio.Document:
    with open(path, "r", encoding="utf-8") as fh:
        return textio.parse(fh.read())


def _closure(doc: textio.Document, kind: str, name: str) -> list[textio.Section]:
    """The named section plus everything it references, in dependency order."""
    _KIND_OF_REF = {"G": "group", "H": "group", "xmod": "xmod", "cover": "cover",
                    "ext": "extension", "ext2": "extension"}
    want: list[tuple[str, str]] = []
    stack = [(kind, name)]
    while stack:
        k, n = stack.pop()
        if (k, n) in want:
            continue
        want.append((k, n))
        if (k, n) not in doc.by_name:
            raise UnresolvedReference(n, k)
        sec = doc.by_name[(k, n)]
        for ref_kw, ref_name in sec.refs.items():
            stack.append((_KIND_OF_REF[ref_kw], ref_name))
    stage = {k: i for i, k in enumerate(textio._BUILD_ORDER)}
    want.sort(key=lambda kn: (stage[kn[0]], kn[1]))
    return [doc.by_name[kn] for kn in want]


def _write_doc(path: str, sections: list[textio.Section]) -> None:
    unique = []
    seen = set()
    for s in sections:
        if (s.kind, s.name) not in seen:
            seen.add((s.kind, s.name))
            unique.append(s)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(textio.serialize(textio.Document(sections=unique)))


def _print_cocycle_tables(c) -> None:
    prog = program_for(c.cm, c.cover)
    empty = True
    for slot, val in zip(prog.lam_slots, c.lam):
        if val:
            print(f"lam {slot[0]} {slot[1]} {slot[2]}: {val}")
            empty = False
    for slot, val in zip(prog.gg_slots, c.gg):
        if val:
            print(f"g {slot[0]} {slot[1]} {slot[2]} {slot[3]}: {val}")
            empty = False
    if empty:
        print("identity")


def _serializable(ext):
    try:
        textio._flat_int_tuples(ext.R.arrows, "")
        textio._flat_int_tuples(ext.bundle.total, "")
        return ext
    except ValidationError:
        r_labels = [(k,) for k in range(len(ext.R.arrows))]
        p_labels = [(k,) for k in range(len(ext.bundle.total))]
        return relabel_carriers(ext, r_labels, p_labels)


def _cmd_check(args, bound) -> int:
    _load(args.file)
    print("ok")
    return 0


def _cmd_aut(args, bound) -> int:
    doc = _load(args.file)
    G = doc.get("group", args.group)
    aut = automorphism_group(G)
    print(f"aut {args.group} order {aut.order}")
    for k, hom in enumerate(aut.elements):
        print(f"{k}: " + " ".join(str(v) for v in hom.map))
    return 0


def _cmd_h1(args, bound) -> int:
    doc = _load(args.file)
    cm = doc.get("xmod", args.xmod)
    cov = doc.get("cover", args.cover)
    classes = h1_classes(cm, cov, max_size=bound)
    print(f"classes {len(classes)}")
    if args.reps:
        for k, (rep, size) in enumerate(classes):
            print(f"class {k} size {size}")
            _print_cocycle_tables(rep)
    return 0


def _find_section(doc, kind, name) -> textio.Section:
    if (kind, name) not in doc.by_name:
        raise UnresolvedReference(name, kind)
    return doc.by_name[(kind, name)]


def _cmd_build(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "cocycle", args.cocycle)
    ext = extension_from_cocycle(sec.obj)
    out = _closure(doc, "cocycle", args.cocycle)
    out = [s for s in out if s.kind != "cocycle"]
    out.append(textio.Section(kind="extension", name=f"{args.cocycle}_ext", obj=ext,
                              refs=dict(sec.refs)))
    _write_doc(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _cmd_extract(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "extension", args.ext)
    c = cocycle_from_adapted(sec.obj)
    print(f"[cocycle {args.ext}_cocycle]")
    print(f"xmod {sec.refs['xmod']}")
    print(f"cover {sec.refs['cover']}")
    _print_cocycle_tables(c)
    return 0


def _cmd_roundtrip(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "cocycle", args.cocycle)
    c = sec.obj
    back = cocycle_from_adapted(extension_from_cocycle(c))
    if back == c:
        print("roundtrip ok")
        return 0
    print("roundtrip mismatch")
    return 1


def _cmd_adapt(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "extension", args.ext)
    adapted, iso = adapt(sec.obj)
    witness = iso_witness(over_point_base(adapted), over_point_base(sec.obj), iso)
    out = _closure(doc, "extension", args.ext)
    out.append(textio.Section(kind="extension", name=f"{args.ext}_adapted", obj=adapted,
                              refs=dict(sec.refs)))
    out.append(textio.Section(kind="morita", name=f"{args.ext}_witness", obj=witness,
                              refs={"ext": f"{args.ext}_adapted", "ext2": args.ext}))
    _write_doc(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _cmd_classify(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "extension", args.ext)
    e = over_point_base(sec.obj)
    rep = gerbe_class(e, max_size=bound)
    print(f"class xmod={sec.refs['xmod']} base={rep.cover.base_size}")
    _print_cocycle_tables(rep)
    return 0


def _cmd_equiv(args, bound) -> int:
    doc = _load(args.file)
    e1 = over_point_base(_find_section(doc, "extension", args.ext).obj)
    e2 = over_point_base(_find_section(doc, "extension", args.ext2).obj)
    if extensions_morita_equivalent(e1, e2, max_size=bound):
        print("equivalent")
        return 0
    print("not equivalent")
    return 1


def _cmd_transport(args, bound) -> int:
    doc = _load(args.file)
    sec = _find_section(doc, "extension", args.ext)
    bm = doc.get("basemorita", args.basemorita)
    moved = transport(bm, over_point_base(sec.obj))
    cov, ext = as_cover_extension(moved)
    ext = _serializable(ext)
    out = _closure(doc, "extension", args.ext)
    out = [s for s in out if s.kind not in ("extension",)]
    cover_name = f"{args.ext}_tcover"
    out.append(textio.Section(kind="cover", name=cover_name, obj=cov, refs={}))
    out.append(textio.Section(kind="extension", name=f"{args.ext}_transported", obj=ext,
                              refs={"xmod": sec.refs["xmod"], "cover": cover_name}))
    _write_doc(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _cmd_cech(args, bound) -> int:
    doc = _load(args.file)
    cov = doc.get("cover", args.cover)
    gpd = cech_groupoid(cov)
    print(f"objects {len(gpd.objects)} arrows {len(gpd.arrows)}")
    for k, (i, x) in enumerate(gpd.objects):
        print(f"object {k}: {i} {x}")
    for k, (i, j, x) in enumerate(gpd.arrows):
        print(f"arrow {k}: {i} {j} {x}")
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "aut": _cmd_aut,
    "h1": _cmd_h1,
    "build": _cmd_build,
    "extract": _cmd_extract,
    "roundtrip": _cmd_roundtrip,
    "adapt": _cmd_adapt,
    "classify": _cmd_classify,
    "equiv": _cmd_equiv,
    "transport": _cmd_transport,
    "cech": _cmd_cech,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gerbelab")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, *specs):
        p = sub.add_parser(name)
        p.add_argument("file")
        for flag in specs:
            p.add_argument(flag, required=True)
        return p

    cmd("check")
    cmd("aut", "--group")
    h1p = cmd("h1", "--xmod", "--cover")
    h1p.add_argument("--reps", action="store_true")
    cmd("build", "--cocycle", "--out")
    cmd("extract", "--ext")
    cmd("roundtrip", "--cocycle")
    cmd("adapt", "--ext", "--out")
    cmd("classify", "--ext")
    cmd("equiv", "--ext", "--ext2")
    cmd("transport", "--ext", "--basemorita", "--out")
    cmd("cech", "--cover")
    return parser


def run(argv) -> int:
    args = _parser().parse_args(argv)
    bound = None
    raw_bound = os.environ.get("GERBE_MAX_SEARCH")
    if raw_bound is not None:
        try:
            bound = int(raw_bound)
        except ValueError:
            print(f"GERBE_MAX_SEARCH must be a decimal integer, got {raw_bound!r}")
            return 2
    try:
        return _COMMANDS[args.command](args, bound)
    except (ParseError, UnresolvedReference) as exc:
        print(f"{type(exc).__name__}: {exc}")
        return 2
    except PreconditionError as exc:
        print(f"{type(exc).__name__}: {exc}")
        return 3
    except (ValidationError, GerbeError) as exc:
        print(f"{type(exc).__name__}: {exc}")
        return 1
    except OSError as exc:
        print(f"io error: {exc}")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
