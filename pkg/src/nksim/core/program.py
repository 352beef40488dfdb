"""Ground program data model.

Atoms are dense integer ids; id 0 is the reserved always-false atom and never
appears in an interpretation.  Rules come in four kinds:

    basic        h :- body.
    constraint   :- body.
    choice       l {h1; ...; hm} u :- body.      (bounds optional)
    cardinality  h :- l {lits}.   or   :- l {lits}.
"""
from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

FALSE_ATOM = 0


class Polarity(enum.Enum):
    POS = "pos"
    NEG = "not"
    NOTNOT = "not not"


class RuleKind(enum.Enum):
    BASIC = "basic"
    CONSTRAINT = "constraint"
    CHOICE = "choice"
    CARDINALITY = "cardinality"


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    atom: int
    polarity: Polarity = Polarity.POS

    def __lt__(self, other):  # enums are not orderable
        return (self.atom, self.polarity.value) < (other.atom, other.polarity.value)

    @property
    def positive(self) -> bool:
        return self.polarity is Polarity.POS


def pos(a: int) -> Literal:
    return Literal(a, Polarity.POS)


def neg(a: int) -> Literal:
    return Literal(a, Polarity.NEG)


def notnot(a: int) -> Literal:
    return Literal(a, Polarity.NOTNOT)


@dataclass(frozen=True)
class Rule:
    kind: RuleKind
    head: tuple[int, ...] = ()
    body: tuple[Literal, ...] = ()
    bounds: Optional[tuple[int, int]] = None
    card: Optional[tuple[int, tuple[Literal, ...]]] = None

    def __post_init__(self):
        k = self.kind
        if k is RuleKind.BASIC and len(self.head) != 1:
            raise ProgramError("basic rule needs exactly one head atom")
        if k is RuleKind.CONSTRAINT and self.head:
            raise ProgramError("constraint has an empty head")
        if k is RuleKind.CHOICE:
            if self.bounds is not None:
                lo, hi = self.bounds
                if not 0 <= lo <= hi <= len(self.head):
                    raise ProgramError(f"choice bounds {self.bounds} out of range")
        elif self.bounds is not None:
            raise ProgramError("only choice rules carry head bounds")
        if k is RuleKind.CARDINALITY:
            if self.card is None or len(self.head) > 1:
                raise ProgramError("cardinality rule needs a cardinality body and at most one head")
            if self.body:
                raise ProgramError("cardinality body must stand alone")
            lower, lits = self.card
            if lower < 0:
                raise ProgramError("negative cardinality bound")
            if any(l.polarity is Polarity.NOTNOT for l in lits):
                raise ProgramError("double negation inside a cardinality body")
        elif self.card is not None:
            raise ProgramError("only cardinality rules carry a cardinality body")

    @property
    def is_constraint(self) -> bool:
        return not self.head and self.kind in (RuleKind.CONSTRAINT, RuleKind.CARDINALITY)

    def atoms(self) -> set[int]:
        out = set(self.head)
        out.update(l.atom for l in self.body)
        if self.card is not None:
            out.update(l.atom for l in self.card[1])
        return out


def basic(h: int, *body: Literal) -> Rule:
    return Rule(RuleKind.BASIC, (h,), tuple(body))


def constraint(*body: Literal) -> Rule:
    return Rule(RuleKind.CONSTRAINT, (), tuple(body))


def choice(heads: Iterable[int], body: Iterable[Literal] = (), bounds=None) -> Rule:
    return Rule(RuleKind.CHOICE, tuple(heads), tuple(body), bounds=bounds)


def cardinality(head: Optional[int], lower: int, lits: Iterable[Literal]) -> Rule:
    h = () if head is None else (head,)
    return Rule(RuleKind.CARDINALITY, h, (), card=(lower, tuple(lits)))


_ATOM_RE = re.compile(r"^\s*([a-z_][A-Za-z0-9_']*)\s*(?:\((.*)\))?\s*$")


def split_args(text: str) -> list[str]:
    """Split a comma-separated argument list at top-level commas."""
    args, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            args.append("".join(cur).strip())
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    args.append("".join(cur).strip())
    return args


@functools.lru_cache(maxsize=1 << 16)
def parse_atom_name(name: str) -> tuple[str, tuple[str, ...]]:
    """``edge(3,a)`` -> ``("edge", ("3", "a"))``; ``p`` -> ``("p", ())``."""
    m = _ATOM_RE.match(name)
    if not m:
        return name, ()
    pred, inner = m.group(1), m.group(2)
    if inner is None or not inner.strip():
        return pred, ()
    return pred, tuple(split_args(inner))


def predicate_of(name: str) -> str:
    p, args = parse_atom_name(name)
    return f"{p}/{len(args)}"


@dataclass(frozen=True)
class Program:
    """A ground program.  ``atoms[i]`` is the name of atom ``i`` (or None)."""

    atoms: tuple[Optional[str], ...] = (None,)
    rules: tuple[Rule, ...] = ()
    distinguished: Optional[frozenset[int]] = None
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.atoms or self.atoms[0] is not None:
            raise ProgramError("atom 0 is reserved and must be unnamed")
        index = {}
        for i, name in enumerate(self.atoms):
            if name is None:
                continue
            if name in index:
                raise ProgramError(f"duplicate atom name {name!r}")
            index[name] = i
        n = len(self.atoms)
        for r in self.rules:
            for a in r.atoms():
                if not 0 <= a < n:
                    raise ProgramError(f"rule references unknown atom {a}")
        if self.distinguished is not None:
            bad = [a for a in self.distinguished if not 0 < a < n]
            if bad:
                raise ProgramError(f"distinguished atoms {bad} not in the atom table")
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        """Number of atoms excluding the reserved false atom."""
        return len(self.atoms) - 1

    def atom_ids(self) -> range:
        return range(1, len(self.atoms))

    def lookup(self, name: str) -> int:
        return self._index[name]

    def get(self, name: str) -> Optional[int]:
        return self._index.get(name)

    def key(self, a: int) -> str:
        """Printable name; unnamed atoms get a ``_<id>`` placeholder."""
        name = self.atoms[a]
        return name if name is not None else f"_{a}"

    def distinguished_ids(self) -> frozenset[int]:
        if self.distinguished is not None:
            return self.distinguished
        return frozenset(i for i in self.atom_ids() if self.atoms[i] is not None)

    def with_distinguished(self, selectors: Iterable[str] | Iterable[int] | None) -> "Program":
        """Restrict the projection to predicates (``edge`` or ``edge/2``), names, or ids."""
        if selectors is None:
            return Program(self.atoms, self.rules, None)
        ids = set()
        for item in selectors:
            if isinstance(item, int):
                ids.add(item)
                continue
            # a predicate with no ground atoms contributes nothing
            for i in self.atom_ids():
                name = self.atoms[i]
                if name is None:
                    continue
                sig = predicate_of(name)
                if name == item or sig == item or sig.split("/")[0] == item:
                    ids.add(i)
        return Program(self.atoms, self.rules, frozenset(ids))

    def names(self, atoms: Iterable[int]) -> frozenset[str]:
        return frozenset(self.key(a) for a in atoms)

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self._index[n] for n in names)


class ProgramBuilder:
    """Interns atom names and collects rules."""

    def __init__(self):
        self.atoms: list[Optional[str]] = [None]
        self.index: dict[str, int] = {}
        self.rules: list[Rule] = []

    def atom(self, name: Optional[str] = None) -> int:
        if name is None:
            self.atoms.append(None)
            return len(self.atoms) - 1
        a = self.index.get(name)
        if a is None:
            a = len(self.atoms)
            self.atoms.append(name)
            self.index[name] = a
        return a

    def add(self, rule: Rule) -> None:
        self.rules.append(rule)

    def fact(self, name: str) -> int:
        a = self.atom(name)
        self.add(basic(a))
        return a

    def build(self, distinguished: Optional[Iterable[str]] = None) -> Program:
        p = Program(tuple(self.atoms), tuple(self.rules))
        if distinguished is not None:
            p = p.with_distinguished(distinguished)
        return p


def _canon_lits(p: Program, lits: Sequence[Literal]):
    return tuple(sorted((p.key(l.atom), l.polarity.value) for l in lits))


def canonical(p: Program):
    """Name-based normal form used for structural comparison."""
    rules = []
    for r in p.rules:
        card = None
        if r.card is not None:
            card = (r.card[0], _canon_lits(p, r.card[1]))
        rules.append((r.kind.value, tuple(sorted(p.key(a) for a in r.head)),
                      _canon_lits(p, r.body), r.bounds, card))
    # atoms outside every rule are false in all answer sets and carry no structure
    atoms = frozenset(p.key(a) for r in p.rules for a in r.atoms() if a != FALSE_ATOM)
    return atoms, sorted(rules, key=repr)


def structurally_equal(p: Program, q: Program) -> bool:
    return canonical(p) == canonical(q)


@dataclass(frozen=True)
class Solution:
    """Projection of an answer set onto the distinguished atoms."""

    atoms: frozenset[int]
    origin: frozenset[int] = frozenset()
    program: Optional[Program] = field(default=None, compare=False, hash=False, repr=False)

    @property
    def names(self) -> frozenset[str]:
        if self.program is None:
            return frozenset(str(a) for a in self.atoms)
        return self.program.names(self.atoms)

    def __repr__(self):
        return "Solution({" + ", ".join(sorted(self.names)) + "})"


def project(X: Iterable[int], program: Program) -> Solution:
    X = frozenset(X)
    return Solution(X & program.distinguished_ids(), X, program)
