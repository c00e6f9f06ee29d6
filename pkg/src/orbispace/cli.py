"""Command-line front end: ``orbispace <command> <input> [flags]``.

Every run prints one result document.  Machine output is JSON with sorted
keys, so identical inputs and budgets give identical bytes.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings

from orbispace import perm as P
from orbispace.cog import Ok, validate_cog
from orbispace.covering import (Developable, NotDevelopable, deck_sequence_check,
                                developability_check, finite_cover)
from orbispace.groups.coset import Overflow, todd_coxeter
from orbispace.groups.homs import Budget
from orbispace.groups.permgroup import CapExceeded
from orbispace.groups.snf import check_abelian_exact
from orbispace.groups.words import simplify
from orbispace.pi1 import pi1_presentation, svk_pushout
from orbispace.quotient import chi_orb, quotient_cog, twisted_sectors
from orbispace.scwol import euler_characteristic, regularize_action
from orbispace.textformat import ParseError, dump_cog, parse_document

SCHEMA_VERSION = 1
COMMANDS = ("validate", "pi1", "abel", "order", "devcheck", "quotient", "chiorb",
            "sectors", "cover", "svk", "exactseq")


class InputError(ValueError):
    """The document lacks what the command needs."""


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _perm_text(p):
    return P.format_cycles(p)


# -- group sources -----------------------------------------------------------

def _cog_source(doc):
    """``(cog, global_data)`` from a cog section or the quotient of an action."""
    if doc.cog is not None:
        return doc.cog, None
    if doc.action is not None:
        Y, act = regularize_action(doc.complex, doc.action)
        return quotient_cog(Y, act).cog, (doc.complex, doc.action)
    raise InputError("command needs a cog or an action section")


def _svk(doc, budget):
    need = {"P0", "P1", "P2"}
    if not need <= set(doc.presentations) or not {"j1", "j2"} <= set(doc.maps):
        raise InputError("svk needs presentations P0, P1, P2 and maps j1, j2")
    pres = doc.presentations
    imgs = {}
    for name, target in (("j1", "P1"), ("j2", "P2")):
        src, dst, words = doc.maps[name]
        if (src, dst) != ("P0", target):
            raise InputError(f"map {name} must go from P0 to {target}")
        try:
            imgs[name] = [pres[dst].parse_word(w) for w in words]
        except ValueError as exc:
            raise InputError(f"map {name}: {exc}") from None
    try:
        return svk_pushout(pres["P1"], pres["P2"], pres["P0"], imgs["j1"], imgs["j2"], budget)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _group_source(doc, budget):
    """Presentation of the group a document describes, and where it came from."""
    if doc.cog is not None or doc.action is not None:
        C, _ = _cog_source(doc)
        return pi1_presentation(C, doc.basepoint).presentation, "pi1"
    if doc.maps:
        return _svk(doc, budget), "svk"
    if len(doc.presentations) == 1:
        return next(iter(doc.presentations.values())), "presentation"
    raise InputError("no group: give a cog, an action, one presentation or svk data")


def _verdict(v) -> dict:
    out = {"verdict": type(v).__name__}
    if getattr(v, "reason", None):
        out["reason"] = v.reason
    if getattr(v, "details", None):
        out["details"] = dict(v.details)
    return out


def _violation(r) -> dict:
    if isinstance(r, Ok):
        return {"valid": True}
    out = {"valid": False, "condition": r.condition, "where": list(map(str, r.where)),
           "message": str(r)}
    if r.degenerate_edges:
        out["degenerate_edges"] = [list(e) for e in r.degenerate_edges]
    return out


def _local_groups(C) -> dict:
    return {c: C.group(c).order for c in C.base.ids}


# -- commands ----------------------------------------------------------------

def cmd_validate(doc, budget):
    if doc.cog is not None:
        return _violation(validate_cog(doc.cog))
    if doc.action is None:
        raise InputError("validate needs a cog or an action section")
    act = doc.action
    C, _ = _cog_source(doc)
    out = {"action": {"faithful": act.is_faithful(),
                      "without_inversion": act.is_without_inversion(),
                      "regular": act.is_regular(),
                      "group_order": act.group.order},
           "quotient": _violation(validate_cog(C))}
    out["valid"] = out["quotient"]["valid"]
    return out


def cmd_pi1(doc, budget):
    C, _ = _cog_source(doc)
    pp = pi1_presentation(C, doc.basepoint)
    simp = simplify(pp.presentation)
    return {"basepoint": pp.basepoint,
            "spanning_tree": [list(a) for a in pp.spanning_tree],
            "presentation": pp.presentation.to_text(),
            "generators": len(pp.presentation.generators),
            "relators": len(pp.presentation.relators),
            "simplified": simp.presentation.to_text()}


def cmd_abel(doc, budget):
    from orbispace.groups.snf import abelianization
    pres, source = _group_source(doc, budget)
    ab = abelianization(pres)
    return {"source": source, "torsion": list(ab.torsion), "free_rank": ab.free_rank,
            "group": str(ab)}


def cmd_order(doc, budget):
    pres, source = _group_source(doc, budget)
    small = simplify(pres).presentation
    t = todd_coxeter(small, (), budget.cap_cosets, budget)
    if isinstance(t, Overflow):
        return {"source": source, "order": None, "verdict": "Overflow",
                "cap": t.cap, "defined": t.defined}
    return {"source": source, "order": t.cosets, "verdict": "Finite"}


def cmd_devcheck(doc, budget):
    C, _ = _cog_source(doc)
    v = developability_check(C, budget, doc.basepoint)
    if isinstance(v, Developable):
        h = v.certificate
        return {"verdict": "Developable", "replay": v.replay(), "degree": h.degree,
                "image_order": h.image_group().order,
                "images": [_perm_text(p) for p in h.images]}
    if isinstance(v, NotDevelopable):
        return {"verdict": "NotDevelopable", "replay": v.replay(), "cell": v.cell,
                "element": _perm_text(v.element),
                "word": v.presentation.format_word(v.word)}
    return _verdict(v)


def _action(doc, name):
    if doc.action is None:
        raise InputError(f"{name} needs an action section")
    return doc.complex, doc.action


def cmd_quotient(doc, budget):
    Y, act = _action(doc, "quotient")
    Y2, act2 = regularize_action(Y, act)
    q = quotient_cog(Y2, act2)
    return {"subdivided": Y2 != Y, "cells": len(q.cog.base),
            "counts": list(q.cog.base.counts()), "local_group_orders": _local_groups(q.cog),
            "valid": isinstance(validate_cog(q.cog), Ok), "cog": dump_cog(q.cog)}


def cmd_chiorb(doc, budget):
    Y, act = _action(doc, "chiorb")
    c = chi_orb(Y, act)
    return {"by_pairs": int(c.by_pairs), "by_sectors": c.by_sectors, "equal": c.equal,
            "chi_Y": euler_characteristic(Y), "group_order": act.group.order}


def cmd_sectors(doc, budget):
    Y, act = _action(doc, "sectors")
    t = twisted_sectors(Y, act)
    rows = [{"representative": _perm_text(r.representative), "class_size": r.class_size,
             "centralizer_order": r.centralizer_order, "cells": len(r.complex),
             "chi": r.chi} for r in t.rows]
    return {"group_order": t.group_order, "rows": rows, "total": t.total}


def cmd_cover(doc, budget):
    C, global_data = _cog_source(doc)
    pp = pi1_presentation(C, doc.basepoint)
    try:
        words = [pp.presentation.parse_word(w) for w in doc.subgroup]
    except ValueError as exc:
        raise InputError(f"subgroup: {exc}") from None
    cd = finite_cover(C, words, budget.cap_cosets, doc.basepoint, budget)
    if isinstance(cd, Overflow):
        return {"verdict": "Overflow", "cap": cd.cap}
    seq = deck_sequence_check(cd, global_data)
    fibers = {c: list(v) for c, v in cd.fibers.items()}
    # deck_order is None when the sequence check could not settle K/C
    return {"index": cd.index, "deck_order": seq.details.get("deck_order"),
            "cog_deck_order": cd.deck_order,
            "cover_valid": isinstance(validate_cog(cd.cover), Ok),
            "cover_counts": list(cd.cover.base.counts()), "fibers": fibers,
            "sequence": _verdict(seq), "cover": dump_cog(cd.cover)}


def cmd_svk(doc, budget):
    pres = _svk(doc, budget)
    out = {"presentation": pres.to_text()}
    t = todd_coxeter(simplify(pres).presentation, (), budget.cap_cosets, budget)
    out["order"] = None if isinstance(t, Overflow) else t.cosets
    return out


def lens_sequence(p: int, q: int):
    """``0 -> Z -(x l)-> Z -(1 -> m)-> Z/p -(mod m)-> Z/m -> 0`` with
    ``l = gcd(p, q - 1)`` and ``m = p / l``."""
    from math import gcd
    l = gcd(p, q - 1)
    m = p // l
    groups = [(0,), (0,), (p,), (m,) if m > 1 else ()]
    maps = [[[l]], [[m]], [[1]] if m > 1 else []]
    return groups, maps


def cmd_exactseq(doc, budget):
    if doc.sequence is not None:
        groups, maps = doc.sequence
        groups, maps = [list(g) for g in groups], [list(m) for m in maps]
    elif doc.lens is not None:
        groups, maps = lens_sequence(*doc.lens)
    else:
        raise InputError("exactseq needs a sequence section or a lens line")
    try:
        rep = check_abelian_exact(groups, maps)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"groups": [list(g) for g in groups], "maps": [list(m) for m in maps],
           "exact": rep.exact}
    if not rep.exact:
        out.update({"failure": rep.failure, "reason": rep.reason})
    return out


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _document_budgets(text: str) -> dict:
    from orbispace.textformat import BUDGET_KEYS, _lines, _positive
    out = {}
    for ln in _lines(text):
        w = ln.words
        if w[0] == "budget" and len(w) == 3 and w[1] in BUDGET_KEYS:
            out[w[1].replace("-", "_")] = _positive(w[2], ln)
    return out


def run(command: str, text: str, budget: Budget, seed: int = 0) -> dict:
    """Parse ``text`` and run ``command``; raises ParseError/InputError on bad input."""
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    budgets = _document_budgets(text)
    for k, v in budgets.items():
        # a document budget applies unless its flag was moved off the default
        if getattr(budget, k) == getattr(Budget, k):
            setattr(budget, k, v)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            doc = parse_document(text, budget.cap_closure)
            outputs = HANDLERS[command](doc, budget)
        except CapExceeded as exc:
            outputs = {"verdict": "Unknown", "reason": str(exc)}
    return {"schema_version": SCHEMA_VERSION,
            "command": command,
            "input_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "seed": seed,
            "outputs": outputs,
            "warnings": sorted({str(w.message) for w in caught}),
            "budget": {"cap_cosets": budget.cap_cosets, "cap_closure": budget.cap_closure,
                       "hom_degree": budget.hom_degree,
                       "spent": dict(sorted(budget.spent.items()))}}


def render_machine(result: dict) -> str:
    return json.dumps(result, sort_keys=True, indent=2, default=str) + "\n"


def _human_lines(value, prefix=""):
    if isinstance(value, dict):
        for k in sorted(value):
            yield from _human_lines(value[k], f"{prefix}{k}." if prefix or k else "")
    elif isinstance(value, list) and value and isinstance(value[0], dict):
        for i, v in enumerate(value):
            yield from _human_lines(v, f"{prefix}{i}.")
    elif isinstance(value, str) and "\n" in value:
        yield f"{prefix[:-1]}:"
        yield from ("    " + ln for ln in value.rstrip("\n").splitlines())
    else:
        yield f"{prefix[:-1]}: {json.dumps(value, default=str)}"


def render_human(result: dict) -> str:
    head = f"{result['command']}  (sha256 {result['input_sha256'][:12]})"
    lines = [head] + list(_human_lines(result["outputs"]))
    lines += [f"warning: {w}" for w in result["warnings"]]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbispace",
                                description="Complexes of groups and finite group actions: "
                                            "fundamental groups, covers, developability, "
                                            "orbifold Euler characteristics.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="input document (see docs/input_format.md); '-' for stdin")
    p.add_argument("--cap-cosets", type=_positive_int, default=Budget.cap_cosets)
    p.add_argument("--cap-closure", type=_positive_int, default=Budget.cap_closure)
    p.add_argument("--hom-degree", type=_positive_int, default=Budget.hom_degree)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("human", "machine"), default="machine")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    budget = Budget(cap_cosets=args.cap_cosets, cap_closure=args.cap_closure,
                    hom_degree=args.hom_degree)
    try:
        result = run(args.command, text, budget, args.seed)
    except (ParseError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    render = render_machine if args.format == "machine" else render_human
    sys.stdout.write(render(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
