"""A small EL ontology logic with nominals as existential fillers.

Axioms are normalised into three shapes::

    A1 and ... and Ak sub B      (B may be bot)
    A sub some r F               (F a name, top or a nominal {o})
    some r F sub B

and the ABox is saturated over the named individuals plus one anonymous
witness per existential filler.  The belief set is every derived concept
and role assertion between named individuals.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

from ..kernel import Atom, ContextLogic, EmcsError, InconsistencyError

TOP = "⊤"
BOT = "⊥"


class Concept:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Concept):
    def __str__(self):
        return "top"


@dataclass(frozen=True)
class Bottom(Concept):
    def __str__(self):
        return "bot"


@dataclass(frozen=True)
class Name(Concept):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Nominal(Concept):
    individual: str

    def __str__(self):
        from ..kernel import format_term
        return "{" + format_term(self.individual) + "}"


@dataclass(frozen=True)
class And(Concept):
    parts: tuple

    def __str__(self):
        return " and ".join(_wrap(p) for p in self.parts)


@dataclass(frozen=True)
class Some(Concept):
    role: str
    filler: Concept

    def __str__(self):
        return f"some {self.role} {_wrap(self.filler)}"


def _wrap(c: Concept) -> str:
    return f"({c})" if isinstance(c, (And, Some)) else str(c)


@dataclass(frozen=True)
class Sub:
    """A general concept inclusion ``lhs sub rhs``."""

    lhs: Concept
    rhs: Concept

    def __str__(self):
        return f"{self.lhs} sub {self.rhs}."


class UnsupportedAxiom(EmcsError):
    pass


def equiv(a: Concept, b: Concept) -> tuple[Sub, Sub]:
    return Sub(a, b), Sub(b, a)


@dataclass(frozen=True)
class Normalized:
    conj: tuple = ()     # (frozenset of lhs names, rhs name)
    exists_rhs: tuple = ()  # (lhs name, role, filler)
    exists_lhs: tuple = ()  # (role, filler, rhs name)


def _fresh(c: Concept) -> str:
    return f"⟨{c}⟩"


def _filler(c: Concept, out) -> tuple:
    if isinstance(c, Nominal):
        return ("nom", c.individual)
    if isinstance(c, Top):
        return ("top", None)
    return ("name", _lhs_name(c, out))


def _lhs_name(c: Concept, out) -> str:
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Top):
        return TOP
    if isinstance(c, And):
        x = _fresh(c)
        out["conj"].append((frozenset(_lhs_name(p, out) for p in c.parts), x))
        return x
    if isinstance(c, Some):
        x = _fresh(c)
        out["exists_lhs"].append((c.role, _filler(c.filler, out), x))
        return x
    raise UnsupportedAxiom(f"{c} cannot occur on the left of an inclusion")


def _add_rhs(lhs: frozenset, d: Concept, out):
    if isinstance(d, Name):
        out["conj"].append((lhs, d.name))
    elif isinstance(d, Bottom):
        out["conj"].append((lhs, BOT))
    elif isinstance(d, Top):
        pass
    elif isinstance(d, And):
        for p in d.parts:
            _add_rhs(lhs, p, out)
    elif isinstance(d, Some):
        if len(lhs) != 1:
            x = _fresh(And(tuple(Name(n) for n in sorted(lhs))))
            out["conj"].append((lhs, x))
            lhs = frozenset({x})
        (a,) = lhs
        f = d.filler
        if isinstance(f, (Name, Top, Nominal)):
            filler = _filler(f, out)
        else:
            y = _fresh(f)
            filler = ("name", y)
            _add_rhs(frozenset({y}), f, out)
        out["exists_rhs"].append((a, d.role, filler))
    else:
        raise UnsupportedAxiom(f"{d} cannot occur on the right of an inclusion")


@lru_cache(maxsize=4096)
def normalize(axiom: Sub) -> Normalized:
    out = {"conj": [], "exists_rhs": [], "exists_lhs": []}
    lhs = axiom.lhs
    if isinstance(lhs, Bottom):
        return Normalized()
    if isinstance(lhs, And):
        names = frozenset(_lhs_name(p, out) for p in lhs.parts)
    else:
        names = frozenset({_lhs_name(lhs, out)})
    _add_rhs(names, axiom.rhs, out)
    return Normalized(tuple(out["conj"]), tuple(out["exists_rhs"]), tuple(out["exists_lhs"]))


def _concept_names(c: Concept, out: set, roles: set, nominals: set):
    if isinstance(c, Name):
        out.add(c.name)
    elif isinstance(c, Nominal):
        nominals.add(c.individual)
    elif isinstance(c, And):
        for p in c.parts:
            _concept_names(p, out, roles, nominals)
    elif isinstance(c, Some):
        roles.add(c.role)
        _concept_names(c.filler, out, roles, nominals)


def _split(kb):
    axioms, abox = [], []
    for item in kb:
        (axioms if isinstance(item, Sub) else abox).append(item)
    return axioms, abox


def saturate(kb) -> tuple[dict, dict]:
    """Labels and role edges of the saturated canonical interpretation."""
    axioms, abox = _split(kb)
    conj_by_member = defaultdict(list)
    exists_rhs_by_lhs = defaultdict(list)
    exists_lhs_by_role = defaultdict(list)
    exists_lhs_by_filler = defaultdict(list)
    witnesses = set()
    nominals = set()
    for ax in axioms:
        nf = normalize(ax)
        for lhs, b in nf.conj:
            for m in lhs:
                conj_by_member[m].append((lhs, b))
        for a, r, f in nf.exists_rhs:
            exists_rhs_by_lhs[a].append((r, f))
            if f[0] == "nom":
                nominals.add(f[1])
            else:
                witnesses.add(f)
        for r, f, b in nf.exists_lhs:
            exists_lhs_by_role[r].append((f, b))
            if f[0] == "name":
                exists_lhs_by_filler[f[1]].append((r, b))
            elif f[0] == "nom":
                nominals.add(f[1])

    labels: dict = defaultdict(set)
    succ: dict = defaultdict(lambda: defaultdict(set))
    pred: dict = defaultdict(lambda: defaultdict(set))
    todo: list = []

    def add_concept(x, a):
        if a not in labels[x]:
            labels[x].add(a)
            todo.append((x, a))

    def add_edge(r, x, y):
        if y not in succ[r][x]:
            succ[r][x].add(y)
            pred[r][y].add(x)
            todo.append((r, x, y))

    def witness(f):
        return ("w",) + f

    def target(f):
        return f[1] if f[0] == "nom" else witness(f)

    for a in abox:
        if len(a.args) == 1:
            add_concept(a.args[0], TOP)
            add_concept(a.args[0], a.pred)
        elif len(a.args) == 2:
            add_concept(a.args[0], TOP)
            add_concept(a.args[1], TOP)
            add_edge(a.pred, a.args[0], a.args[1])
        else:
            raise UnsupportedAxiom(f"assertion {a} is neither a concept nor a role assertion")
    for o in nominals:
        add_concept(o, TOP)
    for f in witnesses:
        w = witness(f)
        add_concept(w, TOP)
        if f[0] == "name":
            add_concept(w, f[1])

    while todo:
        item = todo.pop()
        if len(item) == 2:
            x, a = item
            lab = labels[x]
            for lhs, b in conj_by_member.get(a, ()):
                if lhs <= lab:
                    add_concept(x, b)
            for r, f in exists_rhs_by_lhs.get(a, ()):
                add_edge(r, x, target(f))
            for r, b in exists_lhs_by_filler.get(a, ()):
                for p in list(pred[r][x]):
                    add_concept(p, b)
            if a == BOT:
                for r in list(pred):
                    for p in list(pred[r][x]):
                        add_concept(p, BOT)
        else:
            r, x, y = item
            for f, b in exists_lhs_by_role.get(r, ()):
                kind, val = f
                if kind == "top" or (kind == "name" and val in labels[y]) or (kind == "nom" and val == y):
                    add_concept(x, b)
            if BOT in labels[y]:
                add_concept(x, BOT)
    return labels, succ


def acc_el(kb) -> frozenset:
    labels, succ = saturate(kb)
    out = set()
    for x, lab in labels.items():
        if isinstance(x, tuple):
            continue
        if BOT in lab:
            raise InconsistencyError(x)
        for a in lab:
            if a != TOP and not a.startswith("⟨"):
                out.add(Atom(a, (x,)))
    for r, edges in succ.items():
        for x, ys in edges.items():
            if isinstance(x, tuple):
                continue
            for y in ys:
                if not isinstance(y, tuple):
                    out.add(Atom(r, (x, y)))
    return frozenset(out)


class ElLogic(ContextLogic):
    kind = "el"
    monotone = True

    def acc(self, kb, pool=frozenset()):
        return acc_el(kb)

    def signatures(self, kb):
        out = set()
        for item in kb:
            if isinstance(item, Sub):
                names, roles, noms = set(), set(), set()
                _concept_names(item.lhs, names, roles, noms)
                _concept_names(item.rhs, names, roles, noms)
                out.update((n, 1) for n in names)
                out.update((r, 2) for r in roles)
            else:
                out.add(item.signature)
        return out

    def constants(self, kb):
        out = set()
        for item in kb:
            if isinstance(item, Sub):
                names, roles, noms = set(), set(), set()
                _concept_names(item.lhs, names, roles, noms)
                _concept_names(item.rhs, names, roles, noms)
                out |= noms
            else:
                out.update(item.args)
        return out

    def dependencies(self, kb):
        def sig(name):
            return (name, 1)

        for item in kb:
            if not isinstance(item, Sub):
                continue
            nf = normalize(item)
            for lhs, b in nf.conj:
                if b == BOT:
                    continue
                for a in lhs:
                    if a != TOP:
                        yield (sig(a), sig(b))
            for a, r, f in nf.exists_rhs:
                if a == TOP:
                    continue
                yield (sig(a), (r, 2))
                if f[0] == "name":
                    yield (sig(a), sig(f[1]))
            for r, f, b in nf.exists_lhs:
                yield ((r, 2), sig(b))
                if f[0] == "name" and f[1] != TOP:
                    yield (sig(f[1]), sig(b))
