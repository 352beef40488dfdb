"""Readers and writers for the smodels numeric format and a small rule DSL.

smodels (lparse/gringo output)::

    1 h nb nn <neg> <pos>            basic rule
    2 h nb nn bound <neg> <pos>      cardinality constraint rule
    3 nh <heads> nb nn <neg> <pos>   choice rule
    0
    <id> <name>                      symbol table
    0
    B+ <ids> 0  B- <ids> 0  <nmodels>

Unnamed atoms listed under ``B-`` are the grounder's false atom and map onto the
reserved atom 0.  DSL::

    a :- b, not c, not not d.
    :- a, b.
    1 {a; b; c} 2 :- d.
    h :- 2 {a; not b; c}.
    :- 2 {a; b; c}.
    #show edge/2.
    % comment
"""
from __future__ import annotations

import re
from typing import Iterable, Optional

from .program import (FALSE_ATOM, Literal, Polarity, Program, ProgramBuilder,
                      ProgramError, Rule, RuleKind, basic, cardinality, choice,
                      constraint, neg, notnot, pos, predicate_of)


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class UnsupportedRule(ParseError):
    pass


def parse(text: bytes | str, format: str = "dsl") -> Program:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if format == "smodels":
        return parse_smodels(text)
    if format == "dsl":
        return parse_dsl(text)
    raise ValueError(f"unknown format {format!r}")


def serialize(program: Program, format: str = "dsl") -> bytes:
    if format == "smodels":
        return serialize_smodels(program).encode()
    if format == "dsl":
        return serialize_dsl(program).encode()
    raise ValueError(f"unknown format {format!r}")


# -- smodels -----------------------------------------------------------------

_UNSUPPORTED = {5: "weight rule", 6: "minimize statement", 8: "disjunctive rule"}


def parse_smodels(text: str) -> Program:
    lines = text.splitlines()
    i = 0
    raw_rules = []  # (line_no, type, head ids, neg ids, pos ids, bound)
    used: set[int] = set()

    def ints(ln, s):
        try:
            return [int(t) for t in s.split()]
        except ValueError:
            raise ParseError(f"expected integers, got {s!r}", ln) from None

    def take(ln, seq, k, what):
        if len(seq) < k:
            raise ParseError(f"truncated {what}", ln)
        return seq[:k], seq[k:]

    while True:
        if i >= len(lines):
            raise ParseError("missing 0 terminating the rule section", i)
        ln = i + 1
        s = lines[i].strip()
        i += 1
        if not s:
            continue
        nums = ints(ln, s)
        t, rest = nums[0], nums[1:]
        if t == 0:
            if rest:
                raise ParseError("trailing tokens after rule terminator", ln)
            break
        if t in _UNSUPPORTED:
            raise UnsupportedRule(f"unsupported smodels rule type {t} ({_UNSUPPORTED[t]})", ln)
        bound = None
        if t == 1:
            (h,), rest = take(ln, rest, 1, "head")
            heads = [h]
            (nb, nn), rest = take(ln, rest, 2, "body sizes")
        elif t == 2:
            (h,), rest = take(ln, rest, 1, "head")
            heads = [h]
            (nb, nn, bound), rest = take(ln, rest, 3, "body sizes")
        elif t == 3:
            (nh,), rest = take(ln, rest, 1, "head count")
            heads, rest = take(ln, rest, nh, "heads")
            (nb, nn), rest = take(ln, rest, 2, "body sizes")
        else:
            raise UnsupportedRule(f"unknown smodels rule type {t}", ln)
        if nn > nb or nb < 0 or nn < 0:
            raise ParseError("inconsistent body sizes", ln)
        if len(rest) != nb:
            raise ParseError(f"expected {nb} body literals, got {len(rest)}", ln)
        negs, poss = rest[:nn], rest[nn:]
        for a in [*heads, *negs, *poss]:
            if a <= 0:
                raise ParseError(f"invalid atom id {a}", ln)
            used.add(a)
        raw_rules.append((ln, t, heads, negs, poss, bound))

    names: dict[int, str] = {}
    while True:
        if i >= len(lines):
            raise ParseError("missing 0 terminating the symbol table", i)
        ln = i + 1
        s = lines[i].strip()
        i += 1
        if not s:
            continue
        if s == "0":
            break
        parts = s.split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"bad symbol table entry {s!r}", ln)
        try:
            a = int(parts[0])
        except ValueError:
            raise ParseError(f"bad atom id {parts[0]!r}", ln) from None
        names[a] = parts[1].strip()
        used.add(a)

    bplus: list[int] = []
    bminus: list[int] = []
    for tag, store in (("B+", bplus), ("B-", bminus)):
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines) or lines[i].strip() != tag:
            raise ParseError(f"expected {tag} section", i + 1)
        i += 1
        while True:
            if i >= len(lines):
                raise ParseError(f"unterminated {tag} section", i)
            ln = i + 1
            s = lines[i].strip()
            i += 1
            if not s:
                continue
            if s == "0":
                break
            try:
                store.append(int(s))
            except ValueError:
                raise ParseError(f"bad compute entry {s!r}", ln) from None
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        raise ParseError("missing model count", i)
    try:
        int(lines[i].strip())
    except ValueError:
        raise ParseError("bad model count", i + 1) from None
    used.update(bplus)
    used.update(bminus)

    false_ids = {a for a in bminus if a not in names}
    remap = {a: FALSE_ATOM for a in false_ids}
    b = ProgramBuilder()
    for a in sorted(used - false_ids):
        remap[a] = b.atom(names.get(a))

    for ln, t, heads, negs, poss, bound in raw_rules:
        body = [neg(remap[a]) for a in negs] + [pos(remap[a]) for a in poss]
        hs = [remap[a] for a in heads]
        if t == 3:
            b.add(choice([h for h in hs if h != FALSE_ATOM], body))
        elif t == 2:
            h = None if hs[0] == FALSE_ATOM else hs[0]
            b.add(cardinality(h, bound, body))
        elif hs[0] == FALSE_ATOM:
            b.add(constraint(*body))
        else:
            b.add(basic(hs[0], *body))
    for a in bplus:
        b.add(constraint(neg(remap[a])))
    for a in bminus:
        if a not in false_ids:
            b.add(constraint(pos(remap[a])))
    return b.build()


def lower_for_smodels(program: Program) -> Program:
    """Rewrite constructs smodels lacks (bounded choices, ``not not``) using aux atoms."""
    atoms = list(program.atoms)
    rules: list[Rule] = []
    nn_aux: dict[int, int] = {}

    def fresh() -> int:
        atoms.append(None)
        return len(atoms) - 1

    def body_of(lits):
        out = []
        for l in lits:
            if l.polarity is Polarity.NOTNOT:
                if l.atom not in nn_aux:
                    a = fresh()
                    nn_aux[l.atom] = a
                    rules.append(basic(a, neg(l.atom)))
                out.append(neg(nn_aux[l.atom]))
            else:
                out.append(l)
        return tuple(out)

    for r in program.rules:
        if r.kind is RuleKind.CHOICE:
            body = body_of(r.body)
            rules.append(choice(r.head, body))
            if r.bounds is not None:
                lo, hi = r.bounds
                heads = [pos(h) for h in r.head]
                if lo > 0:
                    ok = fresh()
                    rules.append(cardinality(ok, lo, heads))
                    rules.append(constraint(*body, neg(ok)))
                if hi < len(r.head):
                    over = fresh()
                    rules.append(cardinality(over, hi + 1, heads))
                    rules.append(constraint(*body, pos(over)))
        elif r.kind is RuleKind.CARDINALITY:
            rules.append(r)
        elif r.kind is RuleKind.BASIC:
            rules.append(basic(r.head[0], *body_of(r.body)))
        else:
            rules.append(constraint(*body_of(r.body)))
    return Program(tuple(atoms), tuple(rules), program.distinguished)


def serialize_smodels(program: Program) -> str:
    """smodels text; atom i is written as i+1 and smodels atom 1 is the false atom."""
    p = lower_for_smodels(program)

    def sid(a: int) -> int:
        return a + 1

    def body_txt(lits):
        negs = [sid(l.atom) for l in lits if l.polarity is Polarity.NEG]
        poss = [sid(l.atom) for l in lits if l.polarity is Polarity.POS]
        return [len(negs) + len(poss), len(negs), *negs, *poss]

    out = []
    for r in p.rules:
        if r.kind is RuleKind.CHOICE:
            bt = body_txt(r.body)
            out.append([3, len(r.head), *map(sid, r.head), *bt])
        elif r.kind is RuleKind.CARDINALITY:
            lower, lits = r.card
            h = sid(r.head[0]) if r.head else sid(FALSE_ATOM)
            nb, nn, *ids = body_txt(lits)
            out.append([2, h, nb, nn, lower, *ids])
        elif r.kind is RuleKind.BASIC:
            out.append([1, sid(r.head[0]), *body_txt(r.body)])
        else:
            out.append([1, sid(FALSE_ATOM), *body_txt(r.body)])
    lines = [" ".join(map(str, row)) for row in out]
    lines.append("0")
    for a in p.atom_ids():
        if p.atoms[a] is not None:
            lines.append(f"{sid(a)} {p.atoms[a]}")
    lines += ["0", "B+", "0", "B-", str(sid(FALSE_ATOM)), "0", "1"]
    return "\n".join(lines) + "\n"


# -- DSL ---------------------------------------------------------------------

_NAME = r"[a-z_][A-Za-z0-9_']*(?:\([^(){};]*(?:\([^(){};]*\)[^(){};]*)*\))?"
_CARD_RE = re.compile(r"^\s*(\d+)?\s*\{(.*)\}\s*(\d+)?\s*$", re.S)
_NAME_RE = re.compile(rf"^{_NAME}$")


def _strip_comment(line: str) -> str:
    k = line.find("%")
    return line if k < 0 else line[:k]


def _statements(text: str):
    """Yield (line_no, statement) split on periods outside parentheses/braces."""
    buf: list[str] = []
    start = None
    depth = 0
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        for ch in line:
            if start is None and not ch.isspace():
                start = ln
            if ch in "({":
                depth += 1
            elif ch in ")}":
                depth -= 1
            if ch == "." and depth == 0:
                yield start, "".join(buf).strip()
                buf, start = [], None
                continue
            buf.append(ch)
        buf.append(" ")
    if "".join(buf).strip():
        raise ParseError("statement not terminated by '.'", start)


def _split_top(s: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _norm_name(s: str) -> str:
    return re.sub(r"\s+", "", s)


def parse_dsl(text: str) -> Program:
    b = ProgramBuilder()
    shows: list[tuple[int, str]] = []

    def atom(tok: str, ln: int) -> int:
        tok = tok.strip()
        if tok == "_false":
            return FALSE_ATOM
        if not _NAME_RE.match(tok):
            raise ParseError(f"bad atom {tok!r}", ln)
        return b.atom(_norm_name(tok))

    def literal(tok: str, ln: int, allow_nn=True) -> Literal:
        t = tok.strip()
        m = re.match(r"^not\s+not\s+(.*)$", t, re.S)
        if m:
            if not allow_nn:
                raise ParseError("double negation not allowed here", ln)
            return notnot(atom(m.group(1), ln))
        m = re.match(r"^not\s+(.*)$", t, re.S)
        if m:
            return neg(atom(m.group(1), ln))
        return pos(atom(t, ln))

    for ln, st in _statements(text):
        if not st:
            raise ParseError("empty statement", ln)
        if st.startswith("#show"):
            shows.append((ln, st[5:].strip()))
            continue
        if ":-" in st:
            head_s, body_s = st.split(":-", 1)
        else:
            head_s, body_s = st, ""
        head_s = head_s.strip()
        body_s = body_s.strip()
        if ":-" in st and head_s and not body_s:
            raise ParseError("rule with ':-' needs a body", ln)

        # intern head atoms first so ids follow reading order
        if head_s and "{" not in head_s and _NAME_RE.match(head_s):
            atom(head_s, ln)
        elif "{" in head_s:
            hm0 = _CARD_RE.match(head_s)
            if hm0:
                for x in _split_top(hm0.group(2), ";"):
                    if x.strip() and _NAME_RE.match(x.strip()):
                        atom(x, ln)

        cm = _CARD_RE.match(body_s) if body_s else None
        if cm and "{" in body_s:
            if cm.group(3) is not None:
                raise ParseError("cardinality bodies take a lower bound only", ln)
            lower = int(cm.group(1) or 0)
            items = [x for x in _split_top(cm.group(2), ";") if x.strip()]
            lits = [literal(x, ln, allow_nn=False) for x in items]
            if head_s:
                if "{" in head_s:
                    raise ParseError("choice head with cardinality body is not supported", ln)
                b.add(cardinality(atom(head_s, ln), lower, lits))
            else:
                b.add(cardinality(None, lower, lits))
            continue
        if "{" in body_s:
            raise ParseError("cardinality body must stand alone", ln)
        body = [literal(x, ln) for x in _split_top(body_s, ",")] if body_s else []

        if not head_s:
            b.add(constraint(*body))
            continue
        hm = _CARD_RE.match(head_s)
        if hm and "{" in head_s:
            items = [x for x in _split_top(hm.group(2), ";") if x.strip()]
            heads = [atom(x, ln) for x in items]
            lo, hi = hm.group(1), hm.group(3)
            bounds = None
            if lo is not None or hi is not None:
                bounds = (int(lo or 0), int(hi) if hi is not None else len(heads))
            try:
                b.add(choice(heads, body, bounds))
            except ProgramError as e:
                raise ParseError(str(e), ln) from None
            continue
        b.add(basic(atom(head_s, ln), *body))

    program = b.build()
    if shows:
        selectors = []
        for ln, s in shows:
            s = _norm_name(s)
            if not (re.match(r"^[a-z_][A-Za-z0-9_']*/\d+$", s) or _NAME_RE.match(s)):
                raise ParseError(f"bad #show directive {s!r}", ln)
            if "/" not in s and s not in b.index:
                raise ParseError(f"#show of unknown atom {s!r}", ln)
            selectors.append(s)
        program = program.with_distinguished(selectors)
    return program


def _lit_txt(p: Program, l: Literal) -> str:
    prefix = {Polarity.POS: "", Polarity.NEG: "not ", Polarity.NOTNOT: "not not "}[l.polarity]
    return prefix + _atom_txt(p, l.atom)


def _atom_txt(p: Program, a: int) -> str:
    if a == FALSE_ATOM:
        return "_false"
    return p.key(a)


def serialize_dsl(program: Program) -> str:
    p = program
    out = []
    for r in p.rules:
        body = ", ".join(_lit_txt(p, l) for l in r.body)
        tail = f" :- {body}." if body else "."
        if r.kind is RuleKind.BASIC:
            out.append(_atom_txt(p, r.head[0]) + tail)
        elif r.kind is RuleKind.CONSTRAINT:
            out.append(f":- {body}." if body else ":-.")
        elif r.kind is RuleKind.CHOICE:
            inner = "{" + "; ".join(_atom_txt(p, h) for h in r.head) + "}"
            if r.bounds is not None:
                inner = f"{r.bounds[0]} {inner} {r.bounds[1]}"
            out.append(inner + tail)
        else:
            lower, lits = r.card
            card = f"{lower} {{" + "; ".join(_lit_txt(p, l) for l in lits) + "}"
            head = _atom_txt(p, r.head[0]) + " " if r.head else ""
            out.append(f"{head}:- {card}.")
    if p.distinguished is not None:
        out.extend(_show_lines(p))
    return "\n".join(out) + ("\n" if out else "")


def _show_lines(p: Program) -> list[str]:
    by_pred: dict[str, set[int]] = {}
    for a in p.atom_ids():
        if p.atoms[a] is not None:
            by_pred.setdefault(predicate_of(p.atoms[a]), set()).add(a)
    dist = set(p.distinguished)
    lines = []
    for sig in sorted(by_pred):
        members = by_pred[sig]
        if members <= dist:
            lines.append(f"#show {sig}.")
            dist -= members
    lines.extend(f"#show {p.key(a)}." for a in sorted(dist))
    return lines
