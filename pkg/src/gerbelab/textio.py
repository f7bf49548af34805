"""Multi-section text documents holding every object kind, with a canonical
byte-exact serialization.

A document is a sequence of named sections.  Within a section, fixed header
lines (references, dimensions) come first, then keyword table lines.  The
canonical form sorts sections by (kind, name) and table lines by their numeric
key; parsing accepts any order.  Identity-valued cocycle and coboundary
entries are omitted, everything else is explicit.  Lines may carry trailing
`#` comments; blank lines are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cech import Cover, FiniteGroupoid, cech_groupoid, cover
from .cocycle import Cocycle, Coboundary, coboundary, program_for, validate_cocycle
from .errors import DomainMismatch, ParseError, UnresolvedReference, ValidationError
from .extension import BandElement, GHExtension, validate_gh_extension
from .fingroup import FiniteGroup, group_from_table
from .morita import (
    BaseMorita,
    MoritaWitness,
    base_morita,
    over_point_base,
    pullback_extension,
    validate_morita_witness,
)
from .xmod import CrossedModule, validate_crossed_module

KINDS = ("basemorita", "coboundary", "cocycle", "cover", "extension",
         "group", "morita", "xmod")

_HEADER = re.compile(r"^\[(\w+) ([A-Za-z0-9_.-]+)\]$")


@dataclass
class Section:
    kind: str
    name: str
    obj: object
    refs: dict = field(default_factory=dict)


@dataclass
class Document:
    sections: list

    def __post_init__(self):
        self.by_name = {}
        for s in self.sections:
            key = (s.kind, s.name)
            if key in self.by_name:
                raise ValidationError(f"duplicate section {s.kind} {s.name!r}")
            self.by_name[key] = s

    def get(self, kind: str, name: str):
        key = (kind, name)
        if key not in self.by_name:
            raise UnresolvedReference(name, kind)
        return self.by_name[key].obj

    def names(self, kind: str) -> list[str]:
        return [s.name for s in self.sections if s.kind == kind]


# --- parsing ---

def _split_sections(text: str):
    sections = []
    current = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m:
            kind, name = m.group(1), m.group(2)
            if kind not in KINDS:
                raise ParseError(lineno, f"unknown section kind {kind!r}")
            current = (kind, name, [])
            sections.append(current)
        elif current is None:
            raise ParseError(lineno, "content before the first section header")
        else:
            current[2].append((lineno, line.strip()))
    return sections


def _ints(lineno: int, text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {text!r}") from None


def _keyed_lines(lines, keyword: str):
    out = []
    for lineno, line in lines:
        parts = line.split(None, 1)
        if parts and parts[0] == keyword:
            rest = parts[1] if len(parts) > 1 else ""
            out.append((lineno, rest))
    return out


def _keyed_table(lines, keyword: str, n_key: int):
    """Lines `keyword k1 .. kn: v1 ..` as {key tuple: value list}."""
    table = {}
    for lineno, rest in _keyed_lines(lines, keyword):
        if ":" not in rest:
            raise ParseError(lineno, f"{keyword} line needs a ':'")
        left, right = rest.split(":", 1)
        key = tuple(_ints(lineno, left))
        if len(key) != n_key:
            raise ParseError(lineno, f"{keyword} line needs {n_key} key integers")
        if key in table:
            raise ParseError(lineno, f"duplicate {keyword} entry {key}")
        table[key] = (lineno, _ints(lineno, right))
    return table


def _single(lines, keyword: str, kind: str, name: str):
    found = _keyed_lines(lines, keyword)
    if len(found) != 1:
        where = found[0][0] if found else 0
        raise ParseError(where, f"[{kind} {name}] needs exactly one {keyword!r} line")
    return found[0]


def _parse_group(name, lines) -> FiniteGroup:
    lineno, rest = _single(lines, "order", "group", name)
    order = _ints(lineno, rest)
    if len(order) != 1:
        raise ParseError(lineno, "order line needs one integer")
    rows = [(ln, line) for ln, line in lines if not line.startswith("order")]
    if len(rows) != order[0]:
        where = rows[0][0] if rows else lineno
        raise ParseError(where, f"expected {order[0]} table rows, found {len(rows)}")
    table = []
    for ln, line in rows:
        row = _ints(ln, line)
        if len(row) != order[0]:
            raise ParseError(ln, f"table row has {len(row)} entries, expected {order[0]}")
        table.append(row)
    return group_from_table(order[0], table, name)


def _parse_cover(name, lines) -> Cover:
    lineno, rest = _single(lines, "base", "cover", name)
    base = _ints(lineno, rest)
    if len(base) != 1:
        raise ParseError(lineno, "base line needs one integer")
    sets = _keyed_table(lines, "set", 1)
    n = (max(k[0] for k in sets) + 1) if sets else 0
    if sorted(k[0] for k in sets) != list(range(n)):
        raise ParseError(lineno, "set indices must cover 0..n-1 without gaps")
    return cover(base[0], [sets[(i,)][1] for i in range(n)])


def _parse_xmod(name, lines, doc: Document) -> CrossedModule:
    _, g_name = _single(lines, "G", "xmod", name)
    _, h_name = _single(lines, "H", "xmod", name)
    G = doc.get("group", g_name.strip())
    H = doc.get("group", h_name.strip())
    lineno, rest = _single(lines, "rho", "xmod", name)
    rho = _ints(lineno, rest)
    act_lines = _keyed_table(lines, "act", 1)
    if sorted(k[0] for k in act_lines) != list(range(H.order)):
        raise ParseError(lineno, f"need one act line per element of H (0..{H.order - 1})")
    act = [act_lines[(h,)][1] for h in range(H.order)]
    return validate_crossed_module(G, H, rho, act)


def _scalar_table(lines, keyword: str, n_key: int):
    out = {}
    for key, (lineno, vals) in _keyed_table(lines, keyword, n_key).items():
        if len(vals) != 1:
            raise ParseError(lineno, f"{keyword} line needs one value")
        out[key] = vals[0]
    return out


def _cm_cover(lines, kind, name, doc):
    _, x_name = _single(lines, "xmod", kind, name)
    _, c_name = _single(lines, "cover", kind, name)
    cm = doc.get("xmod", x_name.strip())
    cov = doc.get("cover", c_name.strip())
    return cm, cov


def _parse_cocycle(name, lines, doc) -> Cocycle:
    cm, cov = _cm_cover(lines, "cocycle", name, doc)
    lam = _scalar_table(lines, "lam", 3)
    gg = _scalar_table(lines, "g", 4)
    try:
        return validate_cocycle(cm, cov, lam, gg)
    except DomainMismatch as exc:
        raise ValidationError(f"[cocycle {name}] {exc}") from exc


def _parse_coboundary(name, lines, doc) -> Coboundary:
    cm, cov = _cm_cover(lines, "coboundary", name, doc)
    r = _scalar_table(lines, "r", 2)
    v = _scalar_table(lines, "v", 3)
    try:
        return coboundary(cm, cov, r, v)
    except DomainMismatch as exc:
        raise ValidationError(f"[coboundary {name}] {exc}") from exc


def _tuple_lines(lines, keyword: str):
    out = []
    for lineno, rest in _keyed_lines(lines, keyword):
        out.append(tuple(_ints(lineno, rest)))
    return out


def _parse_extension(name, lines, doc) -> GHExtension:
    cm, cov = _cm_cover(lines, "extension", name, doc)
    base = cech_groupoid(cov)
    arrows = sorted(_tuple_lines(lines, "rarrow"))
    total = sorted(_tuple_lines(lines, "pelem"))
    if len(set(arrows)) != len(arrows) or len(set(total)) != len(total):
        raise ValidationError(f"[extension {name}] has duplicate carrier labels")
    phi_map = _scalar_table(lines, "phi", 1)
    if sorted(phi_map) != [(r,) for r in range(len(arrows))]:
        raise ValidationError(f"[extension {name}] phi table is not total")
    phi = [phi_map[(r,)] for r in range(len(arrows))]
    for r, a in enumerate(phi):
        if not 0 <= a < len(base.arrows):
            raise ValidationError(f"[extension {name}] phi({r}) out of range")
    src = [base.src[phi[r]] for r in range(len(arrows))]
    tgt = [base.tgt[phi[r]] for r in range(len(arrows))]
    prod = {k: v for k, v in _scalar_table(lines, "prod", 2).items()}
    R = FiniteGroupoid.from_product(base.objects, arrows, src, tgt, prod)
    proj_map = _scalar_table(lines, "proj", 1)
    if sorted(proj_map) != [(p,) for p in range(len(total))]:
        raise ValidationError(f"[extension {name}] proj table is not total")
    proj = [proj_map[(p,)] for p in range(len(total))]
    hact_map = _scalar_table(lines, "hact", 2)
    H, G = cm.H, cm.G
    try:
        hact = [[hact_map[(p, h)] for h in range(H.order)] for p in range(len(total))]
    except KeyError as exc:
        raise ValidationError(f"[extension {name}] hact table is not total") from exc
    gact = {k: v for k, v in _scalar_table(lines, "gact", 2).items()}
    chi_map = _scalar_table(lines, "chi", 2)
    chi = []
    for p in range(len(total)):
        try:
            iso = tuple(chi_map[(p, g)] for g in range(G.order))
        except KeyError as exc:
            raise ValidationError(f"[extension {name}] chi table is not total") from exc
        chi.append(BandElement(m=proj[p], iso=iso))
    return validate_gh_extension(cm, base, R, phi, (total, proj, hact, gact), chi)


def _parse_basemorita(name, lines, doc) -> BaseMorita:
    from .cech import trivial_groupoid
    ln1, rest1 = _single(lines, "base", "basemorita", name)
    ln2, rest2 = _single(lines, "base2", "basemorita", name)
    ln3, rest3 = _single(lines, "points", "basemorita", name)
    n1, n2, k = (_ints(ln1, rest1), _ints(ln2, rest2), _ints(ln3, rest3))
    if len(n1) != 1 or len(n2) != 1 or len(k) != 1:
        raise ParseError(ln1, "base, base2 and points lines need one integer each")
    f = _scalar_table(lines, "f", 1)
    g = _scalar_table(lines, "g", 1)
    if sorted(f) != [(t,) for t in range(k[0])] or sorted(g) != [(t,) for t in range(k[0])]:
        raise ValidationError(f"[basemorita {name}] f and g tables must be total")
    return base_morita(trivial_groupoid(n1[0]), trivial_groupoid(n2[0]),
                       tuple(range(k[0])),
                       [f[(t,)] for t in range(k[0])],
                       [g[(t,)] for t in range(k[0])])


def _parse_morita(name, lines, doc) -> MoritaWitness:
    from .cech import GroupoidMorphism
    from .extension import ExtIso
    _, e1_name = _single(lines, "ext", "morita", name)
    _, e2_name = _single(lines, "ext2", "morita", name)
    e1 = over_point_base(doc.get("extension", e1_name.strip()))
    e2 = over_point_base(doc.get("extension", e2_name.strip()))
    carrier = sorted(_tuple_lines(lines, "carrier"))
    p_map = _scalar_table(lines, "p", 1)
    p2_map = _scalar_table(lines, "p2", 1)
    if sorted(p_map) != [(m,) for m in range(len(carrier))] or sorted(p_map) != sorted(p2_map):
        raise ValidationError(f"[morita {name}] leg tables must be total")
    p = tuple(p_map[(m,)] for m in range(len(carrier)))
    p2 = tuple(p2_map[(m,)] for m in range(len(carrier)))
    pb1 = pullback_extension(e1, tuple(carrier), p)
    pb2 = pullback_extension(e2, tuple(carrier), p2)
    phir = _scalar_table(lines, "phir", 1)
    phip = _scalar_table(lines, "phip", 1)
    if sorted(phir) != [(r,) for r in range(len(pb1.ext.R.arrows))]:
        raise ValidationError(f"[morita {name}] phir table must be total")
    if sorted(phip) != [(x,) for x in range(len(pb1.ext.bundle.total))]:
        raise ValidationError(f"[morita {name}] phip table must be total")
    phi_r = GroupoidMorphism(pb1.ext.R, pb2.ext.R,
                             tuple(range(len(carrier))),
                             tuple(phir[(r,)] for r in range(len(pb1.ext.R.arrows))))
    phi_r.validate()
    iso = ExtIso(phi_r=phi_r, phi_p=tuple(phip[(x,)] for x in range(len(pb1.ext.bundle.total))))
    w = MoritaWitness(e1=e1, e2=e2, m2_labels=tuple(carrier), p=p, p2=p2, iso=iso)
    res = validate_morita_witness(w)
    if not res:
        raise ValidationError(f"[morita {name}] witness invalid: {res.reason}")
    return w


_BUILD_ORDER = ("group", "cover", "xmod", "cocycle", "coboundary",
                "extension", "basemorita", "morita")


def parse(text: str) -> Document:
    """Parse and validate a document; every section runs its full validator."""
    raw = _split_sections(text)
    seen = set()
    for kind, name, _ in raw:
        if (kind, name) in seen:
            raise ValidationError(f"duplicate section {kind} {name!r}")
        seen.add((kind, name))
    sections = []
    doc = Document(sections=[])
    for stage in _BUILD_ORDER:
        for kind, name, lines in raw:
            if kind != stage:
                continue
            if kind == "group":
                obj, refs = _parse_group(name, lines), {}
            elif kind == "cover":
                obj, refs = _parse_cover(name, lines), {}
            elif kind == "xmod":
                obj = _parse_xmod(name, lines, doc)
                refs = _ref_names(lines, ("G", "H"))
            elif kind == "cocycle":
                obj = _parse_cocycle(name, lines, doc)
                refs = _ref_names(lines, ("xmod", "cover"))
            elif kind == "coboundary":
                obj = _parse_coboundary(name, lines, doc)
                refs = _ref_names(lines, ("xmod", "cover"))
            elif kind == "extension":
                obj = _parse_extension(name, lines, doc)
                refs = _ref_names(lines, ("xmod", "cover"))
            elif kind == "basemorita":
                obj, refs = _parse_basemorita(name, lines, doc), {}
            else:
                obj = _parse_morita(name, lines, doc)
                refs = _ref_names(lines, ("ext", "ext2"))
            sections.append(Section(kind=kind, name=name, obj=obj, refs=refs))
            doc = Document(sections=sections)
    order = {(kind, name): k for k, (kind, name, _) in enumerate(raw)}
    sections.sort(key=lambda s: order[(s.kind, s.name)])
    return Document(sections=sections)


def _ref_names(lines, keywords) -> dict:
    refs = {}
    for kw in keywords:
        found = _keyed_lines(lines, kw)
        if found:
            refs[kw] = found[0][1].strip()
    return refs


# --- serialization ---

def _emit_group(s: Section) -> list[str]:
    g: FiniteGroup = s.obj
    lines = [f"order {g.order}"]
    lines += [" ".join(str(v) for v in row) for row in g.table]
    return lines


def _emit_cover(s: Section) -> list[str]:
    c: Cover = s.obj
    lines = [f"base {c.base_size}"]
    for i, pts in enumerate(c.sets):
        body = " ".join(str(x) for x in pts)
        lines.append(f"set {i}:{' ' + body if body else ''}")
    return lines


def _emit_xmod(s: Section) -> list[str]:
    cm: CrossedModule = s.obj
    lines = [f"G {s.refs['G']}", f"H {s.refs['H']}",
             "rho " + " ".join(str(v) for v in cm.rho.map)]
    for h, row in enumerate(cm.act):
        lines.append(f"act {h}: " + " ".join(str(v) for v in row))
    return lines


def _emit_cocycle(s: Section) -> list[str]:
    c: Cocycle = s.obj
    prog = program_for(c.cm, c.cover)
    lines = [f"xmod {s.refs['xmod']}", f"cover {s.refs['cover']}"]
    for slot, val in zip(prog.lam_slots, c.lam):
        if val:
            lines.append(f"lam {slot[0]} {slot[1]} {slot[2]}: {val}")
    for slot, val in zip(prog.gg_slots, c.gg):
        if val:
            lines.append(f"g {slot[0]} {slot[1]} {slot[2]} {slot[3]}: {val}")
    return lines


def _emit_coboundary(s: Section) -> list[str]:
    cb: Coboundary = s.obj
    prog = program_for(cb.cm, cb.cover)
    lines = [f"xmod {s.refs['xmod']}", f"cover {s.refs['cover']}"]
    for slot, val in zip(prog.r_slots, cb.r):
        if val:
            lines.append(f"r {slot[0]} {slot[1]}: {val}")
    for slot, val in zip(prog.lam_slots, cb.v):
        if val:
            lines.append(f"v {slot[0]} {slot[1]} {slot[2]}: {val}")
    return lines


def _flat_int_tuples(labels, what: str):
    for lab in labels:
        if not (isinstance(lab, tuple) and all(isinstance(v, int) for v in lab)):
            raise ValidationError(
                f"{what} labels must be flat integer tuples to serialize; "
                f"relabel the carriers first (got {lab!r})")
    if list(labels) != sorted(labels):
        raise ValidationError(f"{what} labels must be listed in sorted order to serialize")


def _emit_extension(s: Section) -> list[str]:
    e: GHExtension = s.obj
    _flat_int_tuples(e.R.arrows, "extension R-arrow")
    _flat_int_tuples(e.bundle.total, "extension bundle")
    lines = [f"xmod {s.refs['xmod']}", f"cover {s.refs['cover']}"]
    for lab in e.R.arrows:
        lines.append("rarrow " + " ".join(str(v) for v in lab))
    for lab in e.bundle.total:
        lines.append("pelem " + " ".join(str(v) for v in lab))
    for r, a in enumerate(e.phi):
        lines.append(f"phi {r}: {a}")
    for (a, b) in sorted(e.R.prod):
        lines.append(f"prod {a} {b}: {e.R.prod[(a, b)]}")
    for p, o in enumerate(e.bundle.proj):
        lines.append(f"proj {p}: {o}")
    for p, row in enumerate(e.bundle.hact):
        for h, q in enumerate(row):
            lines.append(f"hact {p} {h}: {q}")
    for (a, p) in sorted(e.bundle.gact):
        lines.append(f"gact {a} {p}: {e.bundle.gact[(a, p)]}")
    for p, b in enumerate(e.chi):
        for g, r in enumerate(b.iso):
            lines.append(f"chi {p} {g}: {r}")
    return lines


def _emit_basemorita(s: Section) -> list[str]:
    bm: BaseMorita = s.obj
    lines = [f"base {len(bm.B.objects)}", f"base2 {len(bm.B2.objects)}",
             f"points {len(bm.t_labels)}"]
    for t, n in enumerate(bm.f):
        lines.append(f"f {t}: {n}")
    for t, n in enumerate(bm.g):
        lines.append(f"g {t}: {n}")
    return lines


def _emit_morita(s: Section) -> list[str]:
    w: MoritaWitness = s.obj
    _flat_int_tuples(w.m2_labels, "morita carrier")
    lines = [f"ext {s.refs['ext']}", f"ext2 {s.refs['ext2']}"]
    for lab in w.m2_labels:
        lines.append("carrier " + " ".join(str(v) for v in lab))
    for m, i in enumerate(w.p):
        lines.append(f"p {m}: {i}")
    for m, i in enumerate(w.p2):
        lines.append(f"p2 {m}: {i}")
    for r, fr in enumerate(w.iso.phi_r.arrow_map):
        lines.append(f"phir {r}: {fr}")
    for x, fx in enumerate(w.iso.phi_p):
        lines.append(f"phip {x}: {fx}")
    return lines


_EMITTERS = {
    "group": _emit_group,
    "cover": _emit_cover,
    "xmod": _emit_xmod,
    "cocycle": _emit_cocycle,
    "coboundary": _emit_coboundary,
    "extension": _emit_extension,
    "basemorita": _emit_basemorita,
    "morita": _emit_morita,
}


def serialize(doc: Document) -> str:
    """Canonical text: sections sorted by (kind, name), one blank line between."""
    chunks = []
    for s in sorted(doc.sections, key=lambda s: (s.kind, s.name)):
        lines = [f"[{s.kind} {s.name}]"] + _EMITTERS[s.kind](s)
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n" if chunks else ""
