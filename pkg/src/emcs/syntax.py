"""Concrete syntax: ``.emcs`` system documents, ``.obs`` observation streams and
JSON-lines state records.

A system document looks like::

    constants { s1, '07020020' }
    context C1 : observation {
      vocab ShpmtCommod/2, CherryTomato/1;
    }
    context C3 : el {
      vocab CherryTomato/1, Tomato/1, HTSCode/2;
      kb {
        CherryTomato sub Tomato.
        CherryTomato equiv some HTSCode {'07020020'}.
      }
      bridge {
        add(CherryTomato(x)) <- (1:CherryTomato(x)).
      }
    }

Single lowercase letters in argument position are variables.  Rules in
``datalog``/``normal-lp`` knowledge bases use ``:-`` and ``not``; bridge
rules use ``<-`` and ``not (r:atom)`` where ``r`` is a context number or name.
"""
from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass

from .kernel import (
    Atom,
    BridgeLiteral,
    BridgeRule,
    EmcsError,
    Emcs,
    EvolvingContext,
    OpFormula,
    Var,
    format_term,
)
from .logics import LOGICS, ObservationLogic
from .logics.el import And, Bottom, Name, Nominal, Some, Sub, Top
from .logics.programs import Rule


class ParseError(EmcsError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col is not None else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)


class ObservationError(EmcsError):
    """A malformed or vocabulary-violating observation."""

    def __init__(self, message, line=None, instant=None):
        self.line, self.instant = line, instant
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class VocabularyInferenceWarning(UserWarning):
    pass


KINDS = ("observation", "identity", "datalog", "normal-lp", "el")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>:-|<-)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)
  | (?P<int>[0-9]+)
  | (?P<quoted>'(?:[^'\\]|\\.)*'|"(?:[^"\\]|\\.)*")
  | (?P<punct>[(){},.;:/~])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "ws":
            toks.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - start + 1))
    return toks


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "quoted"

    def eat(self, text) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> str:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t.text

    def term(self):
        t = self.tok
        if t.kind == "name":
            self.i += 1
            if len(t.text) == 1 and t.text.islower():
                return Var(t.text)
            return t.text
        if t.kind == "int":
            self.i += 1
            return t.text
        if t.kind == "quoted":
            self.i += 1
            return _unquote(t.text)
        raise self.error(f"expected a term, found {t.text or 'end of input'!r}")

    def atom(self) -> Atom:
        pred = self.name()
        args = []
        if self.at("("):
            self.eat("(")
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.eat(",")
                    args.append(self.term())
            self.eat(")")
        return Atom(pred, tuple(args))

    # -- knowledge bases ---------------------------------------------------

    def rule(self) -> Rule:
        head = self.atom()
        pos, neg = [], []
        if self.tok.kind == "arrow":
            self.i += 1
            while True:
                if self.at("not") or self.at("~"):
                    self.i += 1
                    neg.append(self.atom())
                else:
                    pos.append(self.atom())
                if not self.at(","):
                    break
                self.eat(",")
        self.eat(".")
        return Rule(head, tuple(pos), tuple(neg))

    def concept(self):
        parts = [self.unary()]
        while self.at("and"):
            self.eat("and")
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.at("top"):
            self.eat("top")
            return Top()
        if self.at("bot"):
            self.eat("bot")
            return Bottom()
        if self.at("some"):
            self.eat("some")
            role = self.name()
            return Some(role, self.unary())
        if self.at("("):
            self.eat("(")
            c = self.concept()
            self.eat(")")
            return c
        if self.at("{"):
            self.eat("{")
            o = self.term()
            if isinstance(o, Var):
                raise self.error("nominals must name an individual")
            self.eat("}")
            return Nominal(o)
        return Name(self.name())

    def el_statements(self) -> list:
        if self.tok.kind == "name" and self.peek().text in ("(", ".") and self.tok.text not in ("top", "bot", "some"):
            a = self.atom()
            self.eat(".")
            if not a.is_ground():
                raise self.error("assertions must be ground")
            return [a]
        lhs = self.concept()
        if self.at("sub"):
            self.eat("sub")
            rhs = self.concept()
            self.eat(".")
            return [Sub(lhs, rhs)]
        if self.at("equiv"):
            self.eat("equiv")
            rhs = self.concept()
            self.eat(".")
            return [Sub(lhs, rhs), Sub(rhs, lhs)]
        raise self.error("expected 'sub' or 'equiv'")

    def kb_block(self, kind) -> frozenset:
        self.eat("{")
        items = []
        while not self.at("}"):
            if kind in ("observation", "identity"):
                start = self.tok
                a = self.atom()
                self.eat(".")
                if not a.is_ground():
                    raise self.error("facts must be ground", start)
                items.append(a)
            elif kind == "el":
                items.extend(self.el_statements())
            else:
                start = self.tok
                r = self.rule()
                if kind == "datalog" and r.neg:
                    raise self.error("negation is not allowed in a datalog knowledge base", start)
                items.append(r)
        self.eat("}")
        return frozenset(items)

    # -- bridge rules --------------------------------------------------------

    def op_formula(self) -> OpFormula:
        if self.at("next") and self.peek().text == "(":
            self.eat("next")
            self.eat("(")
            inner = self.op_formula()
            self.eat(")")
            if inner.next:
                raise self.error("next cannot be nested")
            return OpFormula(inner.op, inner.atom, True)
        op = self.name()
        self.eat("(")
        a = self.atom()
        self.eat(")")
        return OpFormula(op, a)

    def bridge_literal(self):
        negated = False
        if self.at("not"):
            self.eat("not")
            negated = True
        self.eat("(")
        t = self.tok
        if t.kind == "int":
            ref = int(t.text)
        elif t.kind == "name":
            ref = t.text
        else:
            raise self.error("expected a context number or name")
        self.i += 1
        self.eat(":")
        a = self.atom()
        self.eat(")")
        return ref, a, negated, t

    def bridge_block(self) -> list:
        self.eat("{")
        rules = []
        while not self.at("}"):
            head = self.op_formula()
            body = []
            if self.tok.kind == "arrow":
                self.i += 1
                body.append(self.bridge_literal())
                while self.at(","):
                    self.eat(",")
                    body.append(self.bridge_literal())
            self.eat(".")
            rules.append((head, body))
        self.eat("}")
        return rules

    # -- documents -----------------------------------------------------------

    def document(self):
        constants = set()
        decls = []
        while self.tok.kind != "eof":
            if self.at("constants"):
                self.eat("constants")
                self.eat("{")
                if not self.at("}"):
                    constants.add(self._constant())
                    while self.at(","):
                        self.eat(",")
                        constants.add(self._constant())
                self.eat("}")
            elif self.at("context"):
                decls.append(self.context_decl())
            else:
                raise self.error(f"expected 'context' or 'constants', found {self.tok.text!r}")
        return constants, decls

    def _constant(self):
        t = self.term()
        if isinstance(t, Var):
            raise self.error("single lowercase letters are variables, quote the constant")
        return t

    def context_decl(self) -> dict:
        self.eat("context")
        name_tok = self.tok
        name = self.name()
        self.eat(":")
        kind_tok = self.tok
        kind = self.name()
        if kind not in KINDS:
            raise self.error(f"unknown context kind {kind!r}", kind_tok)
        self.eat("{")
        decl = {"name": name, "kind": kind, "vocab": None, "ops": None, "kb": frozenset(),
                "bridge": [], "tok": name_tok}
        while not self.at("}"):
            if self.at("vocab"):
                self.eat("vocab")
                sigs = set()
                if not self.at(";"):
                    sigs.add(self._sig())
                    while self.at(","):
                        self.eat(",")
                        sigs.add(self._sig())
                self.eat(";")
                decl["vocab"] = (decl["vocab"] or set()) | sigs
            elif self.at("ops"):
                self.eat("ops")
                ops = {self.name()}
                while self.at(","):
                    self.eat(",")
                    ops.add(self.name())
                self.eat(";")
                decl["ops"] = ops
            elif self.at("kb"):
                self.eat("kb")
                decl["kb"] = decl["kb"] | self.kb_block(kind)
            elif self.at("bridge"):
                self.eat("bridge")
                decl["bridge"].extend(self.bridge_block())
            else:
                raise self.error(f"expected 'vocab', 'ops', 'kb' or 'bridge', found {self.tok.text!r}")
        self.eat("}")
        return decl

    def _sig(self):
        pred = self.name()
        self.eat("/")
        t = self.tok
        if t.kind != "int":
            raise self.error("expected an arity")
        self.i += 1
        return (pred, int(t.text))


def _logic_for(kind):
    if kind in ("observation", "identity"):
        return ObservationLogic()
    return LOGICS[kind]()


def parse_system(text: str, infer_vocabulary: bool = True) -> Emcs:
    """Parse a system document.  Semantic checks are left to :func:`validate`.

    With ``infer_vocabulary``, a predicate queried in a bridge body but not
    declared by the referenced context is added to that context's
    vocabulary, with a :class:`VocabularyInferenceWarning`.
    """
    p = _Parser(text)
    constants, decls = p.document()
    names = {}
    for k, d in enumerate(decls, start=1):
        if d["name"] in names:
            raise ParseError(f"duplicate context name {d['name']!r}", d["tok"].line, d["tok"].col)
        names[d["name"]] = k
    vocabs = []
    for d in decls:
        logic = _logic_for(d["kind"])
        if d["vocab"] is None:
            voc = set(logic.signatures(d["kb"])) | {h.atom.signature for h, _ in d["bridge"]}
        else:
            voc = set(d["vocab"]) | set(logic.signatures(d["kb"]))
        vocabs.append(voc)
    resolved = []
    for d in decls:
        rules = []
        for head, body in d["bridge"]:
            lits = []
            for ref, a, negated, tok in body:
                if isinstance(ref, str):
                    if ref not in names:
                        raise ParseError(f"unknown context {ref!r}", tok.line, tok.col)
                    ref = names[ref]
                lits.append(BridgeLiteral(ref, a, negated))
                if infer_vocabulary and 1 <= ref <= len(decls) and a.signature not in vocabs[ref - 1]:
                    target = decls[ref - 1]["name"]
                    if not any(pr == a.pred for pr, _ in vocabs[ref - 1]):
                        warnings.warn(
                            f"line {tok.line}: {a.pred}/{a.arity} is not declared by context {target}; "
                            f"adding it to its vocabulary",
                            VocabularyInferenceWarning, stacklevel=2)
                        vocabs[ref - 1].add(a.signature)
            rules.append(BridgeRule(head, tuple(lits)))
        resolved.append(rules)
    contexts = []
    for d, voc, rules in zip(decls, vocabs, resolved):
        contexts.append(EvolvingContext(
            name=d["name"],
            logic=_logic_for(d["kind"]),
            kb=d["kb"],
            bridge_rules=tuple(rules),
            op_base=frozenset(d["ops"] or {"add"}),
            observation=d["kind"] == "observation",
            vocabulary=frozenset(voc),
        ))
    return Emcs(tuple(contexts), frozenset(constants))


def parse_atom(text: str, ground=True) -> Atom:
    p = _Parser(text)
    a = p.atom()
    if p.tok.kind != "eof":
        raise p.error(f"trailing input {p.tok.text!r}")
    if ground and not a.is_ground():
        raise ParseError(f"atom {text!r} is not ground")
    return a


# -- serialization -----------------------------------------------------------

def _kind(ctx) -> str:
    if isinstance(ctx.logic, ObservationLogic):
        return "observation" if ctx.observation else "identity"
    if ctx.observation:
        raise EmcsError(f"context {ctx.name}: observation contexts must use the observation logic to be serialized")
    return ctx.logic.kind


def format_kb_item(item) -> str:
    if isinstance(item, Atom):
        return f"{item}."
    return str(item)


def serialize_system(system: Emcs) -> str:
    lines = []
    if system.constants:
        lines.append("constants { " + ", ".join(format_term(c) for c in sorted(system.constants, key=str)) + " }")
    for ctx in system.contexts:
        lines.append(f"context {ctx.name} : {_kind(ctx)} {{")
        if ctx.vocabulary:
            sigs = ", ".join(f"{p}/{a}" for p, a in sorted(ctx.vocabulary))
            lines.append(f"  vocab {sigs};")
        if ctx.op_base != frozenset({"add"}):
            lines.append(f"  ops {', '.join(sorted(ctx.op_base))};")
        kb = getattr(ctx.kb, "rules", ctx.kb)
        if kb:
            lines.append("  kb {")
            lines.extend(f"    {s}" for s in sorted(format_kb_item(i) for i in kb))
            lines.append("  }")
        if ctx.bridge_rules:
            lines.append("  bridge {")
            lines.extend(f"    {r}" for r in ctx.bridge_rules)
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + "\n"


# -- observation streams and state records -------------------------------------

def _atoms_from(values, line, where, ground=True):
    if not isinstance(values, list):
        raise ObservationError(f"{where}: expected a list of atoms", line)
    out = set()
    for v in values:
        if not isinstance(v, str):
            raise ObservationError(f"{where}: atoms must be strings, got {v!r}", line)
        try:
            out.add(parse_atom(v, ground=ground))
        except ParseError as e:
            raise ObservationError(f"{where}: {e}", line) from None
    return frozenset(out)


def check_instant(system: Emcs, instant, pool=None, line=None, j=None):
    """Raise :class:`ObservationError` if an instant breaks vocabularies or the pool."""
    if len(instant) != system.obs_count:
        raise ObservationError(f"instant has {len(instant)} observations, system has {system.obs_count}", line, j)
    for ctx, o in zip(system.contexts, instant):
        for a in o:
            if not a.is_ground():
                raise ObservationError(f"{ctx.name}: observation {a} is not ground", line, j)
            if a.signature not in ctx.vocabulary:
                raise ObservationError(f"{ctx.name}: {a.pred}/{a.arity} outside the context vocabulary", line, j)
            if pool is not None:
                missing = [t for t in a.args if t not in pool]
                if missing:
                    raise ObservationError(f"{ctx.name}: constant {missing[0]!r} in {a} is not in the pool", line, j)


def parse_observations(text: str, system: Emcs) -> list[tuple]:
    """One JSON object per line mapping observation-context names to atom lists."""
    obs_names = [c.name for c in system.contexts[:system.obs_count]]
    seq = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ObservationError(f"malformed record: {e.msg}", lineno) from None
        if not isinstance(rec, dict):
            raise ObservationError("record must be an object", lineno)
        for key in rec:
            if key not in obs_names:
                raise ObservationError(f"unknown observation context {key!r}", lineno)
        instant = tuple(_atoms_from(rec.get(n, []), lineno, n) for n in obs_names)
        check_instant(system, instant, line=lineno)
        seq.append(instant)
    return seq


def serialize_observations(seq, system: Emcs) -> str:
    names = [c.name for c in system.contexts[:system.obs_count]]
    lines = []
    for instant in seq:
        rec = {n: sorted(str(a) for a in o) for n, o in zip(names, instant) if o}
        lines.append(json.dumps(rec))
    return "\n".join(lines) + ("\n" if lines else "")


def state_record(j: int, state, system: Emcs, **extra) -> dict:
    rec = {"instant": j, "state": {c.name: sorted(str(a) for a in s) for c, s in zip(system.contexts, state)}}
    rec.update(extra)
    return rec


def parse_states(text: str, system: Emcs) -> list[tuple]:
    """Belief states from JSON-lines records carrying a ``state`` object, in file order."""
    names = system.names
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ObservationError(f"malformed record: {e.msg}", lineno) from None
        st = rec.get("state") if isinstance(rec, dict) else None
        if not isinstance(st, dict):
            raise ObservationError("record lacks a 'state' object", lineno)
        for key in st:
            if key not in names:
                raise ObservationError(f"unknown context {key!r}", lineno)
        out.append(tuple(_atoms_from(st.get(n, []), lineno, n) for n in names))
    return out
