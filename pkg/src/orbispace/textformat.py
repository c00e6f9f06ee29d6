"""Line-oriented input format for complexes, actions, complexes of groups,
presentations and abelian sequences.  The grammar is documented in
``docs/input_format.md``; :func:`dump_cog` writes the same format back.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from orbispace import perm as P
from orbispace.cog import ComplexOfGroups
from orbispace.groups.permgroup import PermGroup
from orbispace.groups.words import Presentation
from orbispace.scwol import Cell, CellComplex, ComplexError, SimplicialAction

BUDGET_KEYS = ("cap-cosets", "cap-closure", "hom-degree")
SECTIONS = ("complex", "action", "cog", "presentation", "sequence")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass
class Document:
    complex: CellComplex | None = None
    action: SimplicialAction | None = None
    cog: ComplexOfGroups | None = None
    basepoint: str | None = None
    budgets: dict = field(default_factory=dict)
    presentations: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)       # name -> (src, dst, words)
    subgroup: list = field(default_factory=list)   # word texts
    sequence: tuple | None = None                  # (groups, matrices)
    lens: tuple | None = None


@dataclass
class _Line:
    no: int
    text: str
    indent: int

    @property
    def words(self):
        return self.text.split()

    def head_and_tail(self):
        """``(tokens before ':', text after ':' or None)``."""
        if ":" in self.text:
            head, tail = self.text.split(":", 1)
            return head.split(), tail.strip()
        return self.text.split(), None

    def col_of(self, token: str) -> int:
        k = self.text.find(token)
        return self.indent + (k + 1 if k >= 0 else 1)


def _lines(text: str) -> list:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            out.append(_Line(no, stripped, len(body) - len(stripped)))
    return out


def _split_list(tail: str) -> list:
    return [t.strip() for t in tail.split(",")] if tail.strip() else []


def parse_document(text: str, closure_cap: int | None = None) -> Document:
    """Parse a whole document; groups get ``closure_cap`` as their closure cap."""
    doc = Document()
    lines = _lines(text)
    i = 0
    raw_complex = raw_action = raw_cog = None
    while i < len(lines):
        ln = lines[i]
        w = ln.words
        key = w[0]
        if key in SECTIONS:
            j = i + 1
            while j < len(lines) and lines[j].words[0] != "end":
                j += 1
            if j == len(lines):
                raise ParseError(f"section '{key}' is not closed by 'end'", ln.no, 1)
            body = lines[i + 1:j]
            if key == "complex":
                if raw_complex is not None:
                    raise ParseError("duplicate complex section", ln.no, 1)
                raw_complex = (ln, body)
            elif key == "action":
                if raw_action is not None:
                    raise ParseError("duplicate action section", ln.no, 1)
                raw_action = (ln, body)
            elif key == "cog":
                if raw_cog is not None:
                    raise ParseError("duplicate cog section", ln.no, 1)
                raw_cog = (ln, body)
            elif key == "presentation":
                if len(w) != 2:
                    raise ParseError("expected 'presentation <name>'", ln.no, 1)
                if w[1] in doc.presentations:
                    raise ParseError(f"duplicate presentation {w[1]!r}", ln.no, ln.col_of(w[1]))
                doc.presentations[w[1]] = _parse_presentation(body, ln)
            elif key == "sequence":
                doc.sequence = _parse_sequence(body)
            i = j + 1
            continue
        if key == "basepoint":
            if len(w) != 2:
                raise ParseError("expected 'basepoint <cell>'", ln.no, 1)
            doc.basepoint = w[1]
        elif key == "budget":
            if len(w) != 3 or w[1] not in BUDGET_KEYS:
                raise ParseError(f"expected 'budget <key> <int>' with key in {BUDGET_KEYS}",
                                 ln.no, 1)
            doc.budgets[w[1]] = _positive(w[2], ln)
        elif key == "map":
            head, tail = ln.head_and_tail()
            if len(head) != 4 or tail is None:
                raise ParseError("expected 'map <name> <src> <dst> : <word>, ...'", ln.no, 1)
            doc.maps[head[1]] = (head[2], head[3], _split_list(tail))
        elif key == "subgroup":
            head, tail = ln.head_and_tail()
            if head != ["subgroup"] or tail is None:
                raise ParseError("expected 'subgroup : <word>, ...'", ln.no, 1)
            doc.subgroup.extend(_split_list(tail))
        elif key == "lens":
            if len(w) != 3:
                raise ParseError("expected 'lens <p> <q>'", ln.no, 1)
            doc.lens = (_positive(w[1], ln), _positive(w[2], ln))
        elif key == "end":
            raise ParseError("'end' without an open section", ln.no, 1)
        else:
            raise ParseError(f"unknown key {key!r}", ln.no, 1)
        i += 1
    if raw_complex is not None:
        doc.complex = _parse_complex(*raw_complex)
    if raw_action is not None and raw_cog is not None:
        raise ParseError("a document has either an action or a cog section, not both",
                         raw_cog[0].no, 1)
    if raw_action is not None:
        if doc.complex is None:
            raise ParseError("action section needs a complex section", raw_action[0].no, 1)
        doc.action = _parse_action(doc.complex, *raw_action, cap=closure_cap)
    if raw_cog is not None:
        if doc.complex is None:
            raise ParseError("cog section needs a complex section", raw_cog[0].no, 1)
        doc.cog = _parse_cog(doc.complex, *raw_cog, cap=closure_cap)
    if doc.basepoint is not None and (doc.complex is None or doc.basepoint not in doc.complex):
        raise ParseError(f"basepoint {doc.basepoint!r} is not a cell")
    return doc


def _positive(tok: str, ln: _Line) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", ln.no, ln.col_of(tok)) from None
    if v < 1:
        raise ParseError(f"expected a positive integer, got {v}", ln.no, ln.col_of(tok))
    return v


def _parse_complex(head: _Line, body) -> CellComplex:
    cells = []
    for ln in body:
        w = ln.words
        if w[0] != "cell" or len(w) < 3:
            raise ParseError("expected 'cell <id> <dim> [faces...]'", ln.no, 1)
        try:
            dim = int(w[2])
        except ValueError:
            raise ParseError(f"bad dimension {w[2]!r}", ln.no, ln.col_of(w[2])) from None
        try:
            cells.append(Cell(w[1], dim, tuple(w[3:])))
        except ComplexError as exc:
            raise ParseError(str(exc), ln.no, 1) from None
    try:
        return CellComplex(tuple(cells))
    except ComplexError as exc:
        raise ParseError(str(exc), head.no, 1) from None


def _perm(text: str, n: int, ln: _Line):
    try:
        return P.parse_cycles(text, n)
    except ValueError as exc:
        raise ParseError(str(exc), ln.no, ln.col_of(text)) from None


def _parse_action(X: CellComplex, head: _Line, body, cap=None) -> SimplicialAction:
    w = head.words
    if len(w) != 2:
        raise ParseError("expected 'action <degree>'", head.no, 1)
    n = _positive(w[1], head)
    gens, maps = [], []
    for ln in body:
        hw, tail = ln.head_and_tail()
        if hw[:1] != ["gen"] or tail is None:
            raise ParseError("expected 'gen <cycles> : <cell cycles>'", ln.no, 1)
        gtext = ln.text.split(":", 1)[0][3:].strip()
        gens.append(_perm(gtext, n, ln))
        m = {}
        try:
            cyc = P.split_cycles(tail) if tail else []
        except ValueError as exc:
            raise ParseError(str(exc), ln.no, ln.col_of(tail)) from None
        for c in cyc:
            for a, b in zip(c, c[1:] + c[:1]):
                if a not in X or b not in X:
                    bad = a if a not in X else b
                    raise ParseError(f"unknown cell {bad!r}", ln.no, ln.col_of(bad))
                if a in m:
                    raise ParseError(f"cell {a!r} repeated", ln.no, ln.col_of(a))
                m[a] = b
        maps.append(m)
    try:
        return SimplicialAction.from_cell_maps(X, _group(n, gens, cap), maps)
    except (ComplexError, ValueError) as exc:
        raise ParseError(str(exc), head.no, 1) from None


def _parse_cog(X: CellComplex, head: _Line, body, cap=None) -> ComplexOfGroups:
    groups, psi, twists = {}, {}, {}
    psi_lines = {}
    for ln in body:
        hw, tail = ln.head_and_tail()
        if tail is None:
            raise ParseError("expected ':' after the line head", ln.no, len(ln.text) + 1)
        kind = hw[0]
        for c in hw[1:] if kind != "group" else hw[1:2]:
            if c not in X:
                raise ParseError(f"unknown cell {c!r}", ln.no, ln.col_of(c))
        if kind == "group" and len(hw) == 3:
            n = _positive(hw[2], ln)
            if hw[1] in groups:
                raise ParseError(f"duplicate group for {hw[1]!r}", ln.no, 1)
            groups[hw[1]] = _group(n, [_perm(t, n, ln) for t in _split_list(tail)], cap)
        elif kind == "psi" and len(hw) == 3:
            a = (hw[1], hw[2])
            if a not in X.edge_set:
                raise ParseError(f"{a} is not a barycentric edge", ln.no, ln.col_of(hw[1]))
            psi_lines[a] = (ln, _split_list(tail))
        elif kind == "twist" and len(hw) == 4:
            twists[((hw[2], hw[3]), (hw[1], hw[2]))] = (ln, tail)
        else:
            raise ParseError(f"unknown cog line {ln.text!r}", ln.no, 1)
    for c in X.ids:
        groups.setdefault(c, _group(1, [], cap))
    for a in X.edges:
        if a in psi_lines:
            ln, items = psi_lines[a]
            n = groups[a[1]].degree
            psi[a] = tuple(_perm(t, n, ln) for t in items)
        elif groups[a[0]].is_trivial():
            psi[a] = tuple(P.identity(groups[a[1]].degree) for _ in groups[a[0]].generators)
        else:
            raise ParseError(f"missing psi for edge {a[0]} {a[1]}", head.no, 1)
    tw = {}
    for (a, b), (ln, tail) in twists.items():
        tw[(a, b)] = _perm(tail, groups[a[1]].degree, ln)
    try:
        return ComplexOfGroups(X, groups, psi, tw)
    except ValueError as exc:
        raise ParseError(str(exc), head.no, 1) from None


def _group(n, gens, cap):
    if cap is None:
        return PermGroup(n, tuple(gens))
    return PermGroup(n, tuple(gens), cap=cap)


def _parse_presentation(body, head: _Line) -> Presentation:
    if not body or body[0].words[0] != "generators":
        raise ParseError("presentation must start with a 'generators' line", head.no, 1)
    gens = tuple(body[0].words[1:])
    try:
        pres = Presentation(gens)
    except ValueError as exc:
        raise ParseError(str(exc), body[0].no, 1) from None
    rels = []
    for ln in body[1:]:
        if ln.words[0] != "relator":
            raise ParseError("expected 'relator <word>'", ln.no, 1)
        try:
            rels.append(pres.parse_word(ln.text[len("relator"):]))
        except ValueError as exc:
            raise ParseError(str(exc), ln.no, 1) from None
    return Presentation(gens, tuple(rels))


def _parse_sequence(body):
    groups, mats = [], []
    expect = "group"
    for ln in body:
        w = ln.words
        if w[0] != expect:
            raise ParseError(f"expected '{expect}'", ln.no, 1)
        if expect == "group":
            orders = []
            for t in w[1:]:
                try:
                    v = int(t)
                except ValueError:
                    raise ParseError(f"bad order {t!r}", ln.no, ln.col_of(t)) from None
                if v < 0 or v == 1:
                    raise ParseError("orders are 0 (for Z) or at least 2", ln.no, ln.col_of(t))
                orders.append(v)
            groups.append(tuple(orders))
            expect = "map"
        else:
            rows = [r.split() for r in ln.text[len("map"):].split(";")]
            try:
                mats.append([[int(x) for x in r] for r in rows if r])
            except ValueError:
                raise ParseError("matrix entries must be integers", ln.no, 1) from None
            expect = "group"
    if not groups or expect == "group":
        raise ParseError("sequence must start and end with a group")
    return tuple(groups), tuple(mats)


# -- writing -----------------------------------------------------------------

def _fmt_list(perms) -> str:
    return ", ".join(P.format_cycles(p) for p in perms)


def dump_complex(X: CellComplex) -> str:
    lines = ["complex"]
    for c in X.cells:
        lines.append("  " + " ".join(["cell", c.id, str(c.dim), *c.faces]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def dump_cog(C: ComplexOfGroups, basepoint=None) -> str:
    """Serialize ``C``; :func:`parse_document` reads it back to an equal value."""
    X = C.base
    lines = [dump_complex(C.base).rstrip("\n"), "cog"]
    for c in X.ids:
        G = C.group(c)
        lines.append(f"  group {c} {G.degree} : {_fmt_list(G.generators)}".rstrip())
    for a in X.edges:
        if C.psi[a]:
            lines.append(f"  psi {a[0]} {a[1]} : {_fmt_list(C.psi[a])}")
    for (a, b), g in sorted(C.twists.items()):
        lines.append(f"  twist {b[0]} {a[0]} {a[1]} : {P.format_cycles(g)}")
    lines.append("end")
    if basepoint is not None:
        lines.append(f"basepoint {basepoint}")
    return "\n".join(lines) + "\n"


def dump_action(act: SimplicialAction) -> str:
    X = act.complex
    lines = [dump_complex(X).rstrip("\n"), f"action {act.group.degree}"]
    for g, p in zip(act.group.generators, act.cell_images):
        cyc = "".join("(" + " ".join(X.ids[i] for i in c) + ")" for c in P.cycles(p)) or "()"
        lines.append(f"  gen {P.format_cycles(g)} : {cyc}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def dump_presentation(name: str, pres: Presentation) -> str:
    lines = [f"presentation {name}", "  generators " + " ".join(pres.generators)]
    lines += ["  relator " + pres.format_word(r) for r in pres.relators]
    lines.append("end")
    return "\n".join(lines) + "\n"
