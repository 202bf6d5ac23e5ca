"""Parser and renderer for the ``.arq`` text format.

A document is a sequence of blocks::

    quiver A2 { vertices 1 2; arrow a: 1 -> 2 }
    rayquiver R { vertices 0; ray t: into 0 }
    rep S1 over A2 prime 32003 { dims { 1: 1; 2: 0 } }
    rep P1 over A2 prime 32003 { dims { 1: 1; 2: 1 } mat a = [[1]]; }
    subcat C over A2 { gens S1 P1 }
    torsion T over A2 { torsion S1; free P1 }
    fprep M over R prime 32003 { p1 = P[0]; p0 = P[t.1]; f = [[1]] }

``#`` starts a comment running to the end of the line, whitespace is
insignificant and the ``;`` before a closing brace may be omitted.  Omitted
arrow matrices are zero.  In an ``fprep`` block ``f`` has one row per ``p0``
summand and one column per ``p1`` summand; an entry is a scalar when at most
one path connects the two vertices, otherwise a list of coefficients over the
paths in canonical order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import exactfield as ef
from .infrep import FPRep
from .quiver import Arrow, Quiver, QuiverError, Ray, RayQuiver
from .repcore import Rep, RepError

_TOKEN = re.compile(r"\s+|#[^\n]*|->|[A-Za-z0-9_.]+|[{}\[\];:,=+\-]")
_ID = re.compile(r"[A-Za-z0-9_.]+\Z")


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, filename: str = "<input>"):
        super().__init__(message)
        self.message, self.line, self.col, self.filename = message, line, col, filename

    def __str__(self):
        return f"{self.filename}:{self.line}:{self.col}: {self.message}"


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SubcatDecl:
    name: str
    quiver: str
    gens: tuple[str, ...]


@dataclass(frozen=True)
class TorsionDecl:
    name: str
    quiver: str
    torsion: tuple[str, ...]
    free: tuple[str, ...]


@dataclass
class Document:
    quivers: dict[str, Quiver] = field(default_factory=dict)
    rayquivers: dict[str, RayQuiver] = field(default_factory=dict)
    reps: dict[str, Rep] = field(default_factory=dict)
    subcats: dict[str, SubcatDecl] = field(default_factory=dict)
    torsions: dict[str, TorsionDecl] = field(default_factory=dict)
    fpreps: dict[str, FPRep] = field(default_factory=dict)

    def names(self) -> set[str]:
        return (set(self.quivers) | set(self.rayquivers) | set(self.reps) | set(self.subcats)
                | set(self.torsions) | set(self.fpreps))

    def rep(self, name: str) -> Rep:
        if name not in self.reps:
            raise KeyError(f"no rep named {name}")
        return self.reps[name]

    def reps_over(self, quiver: str) -> dict[str, Rep]:
        return {n: r for n, r in self.reps.items() if r.quiver.name == quiver}


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    out, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col, filename)
        s = m.group(0)
        if not (s[0].isspace() or s[0] == "#"):
            out.append(Token(s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(Token("", line, col))
    return out


class _Parser:
    def __init__(self, text: str, filename: str, default_prime: int):
        self.toks = tokenize(text, filename)
        self.i = 0
        self.filename = filename
        self.default_prime = default_prime
        self.doc = Document()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        return DSLError(msg, tok.line, tok.col, self.filename)

    def expect(self, *texts: str) -> Token:
        t = self.tok
        if t.text not in texts:
            got = repr(t.text) if t.text else "end of input"
            raise self.error(f"expected {' or '.join(repr(x) for x in texts)}, got {got}")
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text:
            self.i += 1
            return True
        return False

    def ident(self, what: str = "identifier") -> Token:
        t = self.tok
        if not _ID.match(t.text):
            got = repr(t.text) if t.text else "end of input"
            raise self.error(f"expected {what}, got {got}")
        self.i += 1
        return t

    def integer(self) -> int:
        neg = self.accept("-")
        t = self.tok
        if not t.text.isdigit():
            raise self.error("expected integer")
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def end_statement(self):
        if self.tok.text != "}":
            self.expect(";")

    def fresh(self, tok: Token):
        if tok.text in self.doc.names():
            raise self.error(f"duplicate id {tok.text}", tok)

    # blocks

    def document(self) -> Document:
        while self.tok.text:
            kw = self.expect("quiver", "rayquiver", "rep", "subcat", "torsion", "fprep")
            getattr(self, "block_" + kw.text)()
        return self.doc

    def _quiver_body(self, name: str, allow_rays: bool):
        vertices: list[str] = []
        arrows: list[Arrow] = []
        rays: list[Ray] = []
        core_ref: Optional[Quiver] = None
        vpos: dict[str, Token] = {}
        ray_targets: list[Token] = []
        self.expect("{")
        while not self.accept("}"):
            kw = self.expect(*(("vertices", "arrow", "ray", "core") if allow_rays else ("vertices", "arrow")))
            if kw.text == "vertices":
                while self.tok.text not in (";", "}"):
                    t = self.ident("vertex id")
                    if t.text in vpos:
                        raise self.error(f"duplicate id {t.text}", t)
                    vpos[t.text] = t
                    vertices.append(t.text)
            elif kw.text == "arrow":
                a = self.ident("arrow id")
                if any(x.id == a.text for x in arrows):
                    raise self.error(f"duplicate id {a.text}", a)
                self.expect(":")
                s = self.ident("vertex id")
                self.expect("->")
                t = self.ident("vertex id")
                for v in (s, t):
                    if v.text not in vpos:
                        raise self.error(f"unknown vertex {v.text}", v)
                arrows.append(Arrow(a.text, s.text, t.text))
            elif kw.text == "ray":
                r = self.ident("ray id")
                self.expect(":")
                o = self.expect("into", "from")
                if o.text == "from":
                    raise self.error("rays oriented away from the core are not supported", o)
                at = self.ident("vertex id")
                rays.append(Ray(r.text, at.text))
                ray_targets.append(at)
            else:
                q = self.ident("quiver name")
                if q.text not in self.doc.quivers:
                    raise self.error(f"unknown quiver {q.text}", q)
                core_ref = self.doc.quivers[q.text]
            self.end_statement()
        known = set(vpos) | (set(core_ref.vertices) if core_ref is not None else set())
        for at in ray_targets:
            if at.text not in known:
                raise self.error(f"unknown vertex {at.text}", at)
        return vertices, arrows, rays, core_ref

    def block_quiver(self):
        name = self.ident("quiver name")
        self.fresh(name)
        vertices, arrows, _, _ = self._quiver_body(name.text, False)
        q = Quiver(name.text, tuple(vertices), tuple(arrows))
        if not q.is_acyclic:
            raise self.error(f"quiver {name.text} has an oriented cycle", name)
        self.doc.quivers[name.text] = q

    def block_rayquiver(self):
        name = self.ident("rayquiver name")
        self.fresh(name)
        vertices, arrows, rays, core_ref = self._quiver_body(name.text, True)
        if core_ref is not None:
            if vertices or arrows:
                raise self.error("a rayquiver takes either 'core' or inline vertices/arrows", name)
            core = core_ref
        else:
            core = Quiver(name.text + ".core", tuple(vertices), tuple(arrows))
        try:
            self.doc.rayquivers[name.text] = RayQuiver(name.text, core, tuple(rays))
        except QuiverError as e:
            raise self.error(str(e), name) from None

    def _matrix(self) -> list[list[int]]:
        rows: list[list[int]] = []
        self.expect("[")
        while not self.accept("]"):
            self.expect("[")
            row: list[int] = []
            while not self.accept("]"):
                row.append(self.integer())
                if self.tok.text != "]":
                    self.expect(",")
            rows.append(row)
            if self.tok.text != "]":
                self.expect(",")
        return rows

    def block_rep(self):
        name = self.ident("rep name")
        self.fresh(name)
        self.expect("over")
        qt = self.ident("quiver name")
        if qt.text not in self.doc.quivers:
            raise self.error(f"unknown quiver {qt.text}", qt)
        q = self.doc.quivers[qt.text]
        self.expect("prime")
        pt = self.tok
        p = self.integer()
        try:
            ef.check_prime(p)
        except ef.FieldError as e:
            raise self.error(str(e), pt) from None
        self.expect("{")
        dims: dict[str, int] = {}
        mats: dict[str, np.ndarray] = {}
        seen_dims = False
        while not self.accept("}"):
            kw = self.expect("dims", "mat")
            if kw.text == "dims":
                if seen_dims:
                    raise self.error("duplicate dims section", kw)
                seen_dims = True
                self.expect("{")
                while not self.accept("}"):
                    v = self.ident("vertex id")
                    if v.text not in q.index:
                        raise self.error(f"unknown vertex {v.text}", v)
                    if v.text in dims:
                        raise self.error(f"duplicate id {v.text}", v)
                    self.expect(":")
                    nt = self.tok
                    n = self.integer()
                    if n < 0:
                        raise self.error("dimension must be nonnegative", nt)
                    dims[v.text] = n
                    self.end_statement()
                self.accept(";")
                continue
            a = self.ident("arrow id")
            if a.text not in q.arrow:
                raise self.error(f"unknown arrow {a.text}", a)
            if a.text in mats:
                raise self.error(f"duplicate id {a.text}", a)
            self.expect("=")
            mt = self.tok
            rows = self._matrix()
            arr = q.arrow[a.text]
            shape = (dims.get(arr.target, 0), dims.get(arr.source, 0))
            ok = len(rows) == shape[0] and all(len(r) == shape[1] for r in rows)
            if not ok:
                got = (len(rows), len(rows[0]) if rows else 0)
                raise self.error(f"matrix for arrow {a.text} has shape {got[0]}x{got[1]}, "
                                 f"expected {shape[0]}x{shape[1]}", mt)
            mats[a.text] = ef.mat(rows, p, shape)
            self.end_statement()
        try:
            self.doc.reps[name.text] = Rep(q, p, dims, mats)
        except (RepError, QuiverError) as e:
            raise self.error(str(e), name) from None

    def _rep_list(self, quiver: str, stop=(";", "}")) -> tuple[str, ...]:
        out = []
        while self.tok.text not in stop:
            t = self.ident("rep name")
            if t.text not in self.doc.reps:
                raise self.error(f"unknown rep {t.text}", t)
            if self.doc.reps[t.text].quiver.name != quiver:
                raise self.error(f"rep {t.text} is not over quiver {quiver}", t)
            out.append(t.text)
        return tuple(out)

    def _over_quiver(self) -> str:
        self.expect("over")
        qt = self.ident("quiver name")
        if qt.text not in self.doc.quivers:
            raise self.error(f"unknown quiver {qt.text}", qt)
        return qt.text

    def block_subcat(self):
        name = self.ident("subcat name")
        self.fresh(name)
        q = self._over_quiver()
        self.expect("{")
        gens: tuple[str, ...] = ()
        while not self.accept("}"):
            self.expect("gens")
            gens += self._rep_list(q)
            self.end_statement()
        self.doc.subcats[name.text] = SubcatDecl(name.text, q, gens)

    def block_torsion(self):
        name = self.ident("torsion name")
        self.fresh(name)
        q = self._over_quiver()
        self.expect("{")
        tors: tuple[str, ...] = ()
        free: tuple[str, ...] = ()
        while not self.accept("}"):
            kw = self.expect("torsion", "free")
            if kw.text == "torsion":
                tors += self._rep_list(q)
            else:
                free += self._rep_list(q)
            self.end_statement()
        self.doc.torsions[name.text] = TorsionDecl(name.text, q, tors, free)

    def _proj_sum(self, rq: RayQuiver) -> tuple[str, ...]:
        if self.tok.text == "0":
            self.i += 1
            return ()
        out = []
        while True:
            self.expect("P")
            self.expect("[")
            v = self.ident("vertex id")
            try:
                rq.locate(v.text)
            except QuiverError:
                raise self.error(f"unknown vertex {v.text}", v) from None
            self.expect("]")
            out.append(v.text)
            if not self.accept("+"):
                return tuple(out)

    def block_fprep(self):
        name = self.ident("fprep name")
        self.fresh(name)
        self.expect("over")
        qt = self.ident("rayquiver name")
        if qt.text not in self.doc.rayquivers:
            raise self.error(f"unknown rayquiver {qt.text}", qt)
        rq = self.doc.rayquivers[qt.text]
        p = self.default_prime
        if self.accept("prime"):
            pt = self.tok
            p = self.integer()
            try:
                ef.check_prime(p)
            except ef.FieldError as e:
                raise self.error(str(e), pt) from None
        self.expect("{")
        p1: Optional[tuple[str, ...]] = None
        p0: Optional[tuple[str, ...]] = None
        entries = None
        ftok = name
        while not self.accept("}"):
            kw = self.expect("p1", "p0", "f")
            self.expect("=")
            if kw.text == "p1":
                p1 = self._proj_sum(rq)
            elif kw.text == "p0":
                p0 = self._proj_sum(rq)
            else:
                ftok = self.tok
                entries = self._entry_matrix()
            self.end_statement()
        if p0 is None:
            raise self.error("fprep needs a p0 line", name)
        p1 = p1 or ()
        q = rq.truncate(1 + max((rq.locate(v)[1] for v in p1 + p0), default=0)).quiver
        if entries is None:
            if p1:
                raise self.error("fprep with nonzero p1 needs an f line", name)
            entries = [[] for _ in p0]
        if len(entries) != len(p0) or any(len(r) != len(p1) for r in entries):
            raise self.error(f"f must be a {len(p0)}x{len(p1)} matrix (rows p0, columns p1)", ftok)
        blocks = []
        for j, y in enumerate(p0):
            row = []
            for i, x in enumerate(p1):
                n = len(q.paths(y, x))
                e = entries[j][i]
                coeffs = [e] if isinstance(e, int) else list(e)
                if isinstance(e, int) and n == 0:
                    if e % p:
                        raise self.error(f"no path from {y} to {x}: entry ({j}, {i}) must be 0", ftok)
                    coeffs = []
                if len(coeffs) != n:
                    raise self.error(f"entry ({j}, {i}) needs {n} path coefficients", ftok)
                row.append(tuple(c % p for c in coeffs))
            blocks.append(tuple(row))
        self.doc.fpreps[name.text] = FPRep(rq, p, p1, p0, tuple(blocks), name.text)

    def _entry_matrix(self):
        rows = []
        self.expect("[")
        while not self.accept("]"):
            self.expect("[")
            row = []
            while not self.accept("]"):
                if self.tok.text == "[":
                    self.i += 1
                    lst = []
                    while not self.accept("]"):
                        lst.append(self.integer())
                        if self.tok.text != "]":
                            self.expect(",")
                    row.append(tuple(lst))
                else:
                    row.append(self.integer())
                if self.tok.text != "]":
                    self.expect(",")
            rows.append(row)
            if self.tok.text != "]":
                self.expect(",")
        return rows


def parse(text: str, filename: str = "<input>", default_prime: int = ef.DEFAULT_PRIME) -> Document:
    """Parse a document; raises :class:`DSLError` with a ``file:line:col`` position."""
    return _Parser(text, filename, default_prime).document()


def parse_file(path: str, default_prime: int = ef.DEFAULT_PRIME) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path, default_prime)


# ---------------------------------------------------------------------------
# rendering


def _render_matrix(m: np.ndarray) -> str:
    return "[" + ", ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in m) + "]"


def _render_quiver_body(q: Quiver, indent: str = "  ") -> list[str]:
    out = []
    if q.vertices:
        out.append(f"{indent}vertices {' '.join(q.vertices)};")
    for a in q.arrows:
        out.append(f"{indent}arrow {a.id}: {a.source} -> {a.target};")
    return out


def render_quiver(q: Quiver) -> str:
    return "\n".join([f"quiver {q.name} {{"] + _render_quiver_body(q) + ["}"])


def render_rayquiver(rq: RayQuiver) -> str:
    lines = [f"rayquiver {rq.name} {{"]
    if rq.core.name == rq.name + ".core":
        lines += _render_quiver_body(rq.core)
    else:
        lines.append(f"  core {rq.core.name};")
    lines += [f"  ray {r.id}: into {r.attach};" for r in rq.rays]
    return "\n".join(lines + ["}"])


def render_rep(name: str, r: Rep) -> str:
    lines = [f"rep {name} over {r.quiver.name} prime {r.p} {{"]
    lines.append("  dims { " + " ".join(f"{v}: {r.dims[v]};" for v in r.quiver.vertices) + " }")
    for a in r.quiver.arrows:
        m = r.mats[a.id]
        if m.any():
            lines.append(f"  mat {a.id} = {_render_matrix(m)};")
    return "\n".join(lines + ["}"])


def render_fprep(m: FPRep) -> str:
    def proj(vs):
        return " + ".join(f"P[{v}]" for v in vs) if vs else "0"

    rows = []
    for row in m.blocks:
        cells = ["0" if not c else str(c[0]) if len(c) == 1 else "[" + ", ".join(str(x) for x in c) + "]" for c in row]
        rows.append("[" + ", ".join(cells) + "]")
    lines = [f"fprep {m.name} over {m.rq.name} prime {m.p} {{",
             f"  p1 = {proj(m.p1)};", f"  p0 = {proj(m.p0)};", f"  f = [{', '.join(rows)}];", "}"]
    return "\n".join(lines)


def render(doc: Document) -> str:
    """Canonical text of a document; ``parse(render(doc)) == doc``."""
    parts = []
    for q in doc.quivers.values():
        parts.append(render_quiver(q))
    for rq in doc.rayquivers.values():
        parts.append(render_rayquiver(rq))
    for name, r in doc.reps.items():
        parts.append(render_rep(name, r))
    for s in doc.subcats.values():
        parts.append(f"subcat {s.name} over {s.quiver} {{ gens {' '.join(s.gens)}; }}")
    for t in doc.torsions.values():
        parts.append(f"torsion {t.name} over {t.quiver} {{ torsion {' '.join(t.torsion)}; "
                     f"free {' '.join(t.free)}; }}")
    for m in doc.fpreps.values():
        parts.append(render_fprep(m))
    return "\n\n".join(parts) + "\n"


__all__ = ["DSLError", "Document", "SubcatDecl", "TorsionDecl", "tokenize", "parse", "parse_file", "render"]
