"""Core data model: atoms, bridge rules, contexts, systems and belief states.

Every value here is immutable.  Context indices in bridge literals are
1-based, as they are written in system documents; belief states are plain
tuples of frozensets indexed from 0.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, NamedTuple, Optional


class EmcsError(Exception):
    """Base class for engine errors."""


class OperationError(EmcsError):
    pass


class VocabularyError(EmcsError):
    pass


class InconsistencyError(EmcsError):
    """A knowledge base entails bottom for some individual."""

    def __init__(self, individual, message=None):
        self.individual = individual
        super().__init__(message or f"inconsistent knowledge base: bot({individual}) derived")


class PreconditionError(EmcsError):
    pass


class IntegrityError(EmcsError):
    """An iteration left the lattice it is guaranteed to stay in."""


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


class Atom(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(format_term(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    def is_ground(self) -> bool:
        return not any(type(a) is Var for a in self.args)

    def variables(self) -> set[Var]:
        return {a for a in self.args if type(a) is Var}

    def substitute(self, binding) -> "Atom":
        if not self.args:
            return self
        return Atom(self.pred, tuple(binding.get(a, a) if type(a) is Var else a for a in self.args))


def atom(pred: str, *args) -> Atom:
    """Shorthand: ``atom("P", "a", Var("x"))``."""
    return Atom(pred, tuple(args))


_KEYWORDS = frozenset({"not", "next", "sub", "equiv", "and", "some", "top", "bot"})


def format_term(term) -> str:
    if type(term) is Var:
        return term.name
    s = str(term)
    if (s[:1].isalpha() or s[:1] == "_") and s.replace("_", "a").isalnum():
        if not (len(s) == 1 and s.islower()) and s not in _KEYWORDS:
            return s
    return "'" + s.replace("\\", "\\\\").replace("'", "\\'") + "'"


@dataclass(frozen=True)
class OpFormula:
    """An operational formula ``op(atom)``, optionally wrapped in ``next``."""

    op: str
    atom: Atom
    next: bool = False

    def __str__(self):
        inner = f"{self.op}({self.atom})"
        return f"next({inner})" if self.next else inner

    def substitute(self, binding) -> "OpFormula":
        return OpFormula(self.op, self.atom.substitute(binding), self.next)

    def unwrapped(self) -> "OpFormula":
        return OpFormula(self.op, self.atom) if self.next else self


def add(a: Atom) -> OpFormula:
    return OpFormula("add", a)


def next_add(a: Atom) -> OpFormula:
    return OpFormula("add", a, True)


@dataclass(frozen=True)
class BridgeLiteral:
    context: int
    atom: Atom
    negated: bool = False

    def __str__(self):
        s = f"({self.context}:{self.atom})"
        return f"not {s}" if self.negated else s


def pos(context: int, a: Atom) -> BridgeLiteral:
    return BridgeLiteral(context, a)


def neg(context: int, a: Atom) -> BridgeLiteral:
    return BridgeLiteral(context, a, True)


@dataclass(frozen=True)
class BridgeRule:
    head: OpFormula
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} <- {', '.join(str(b) for b in self.body)}."

    @property
    def positive(self) -> tuple:
        return tuple(b for b in self.body if not b.negated)

    @property
    def negative(self) -> tuple:
        return tuple(b for b in self.body if b.negated)

    def variables(self) -> set[Var]:
        vs = self.head.atom.variables()
        for b in self.body:
            vs |= b.atom.variables()
        return vs

    def is_ground(self) -> bool:
        return not self.variables()

    def is_safe(self) -> bool:
        bound = set()
        for b in self.positive:
            bound |= b.atom.variables()
        return self.head.atom.variables() <= bound

    def substitute(self, binding) -> "BridgeRule":
        return BridgeRule(
            self.head.substitute(binding),
            tuple(BridgeLiteral(b.context, b.atom.substitute(binding), b.negated) for b in self.body),
        )


class ContextLogic:
    """A logic ``(KB, BS, ACC)`` with an optional reduction function.

    Subclasses implement :meth:`acc` and describe their knowledge bases.
    Knowledge bases are immutable collections; ``operations`` maps each
    supported management operation to whether it is monotone
    (``kb <= mng(op(s), kb)``).
    """

    kind = "abstract"
    monotone = False
    #: least element of BS; ``None`` when the logic is not normal
    least_element: Optional[frozenset] = frozenset()
    operations: dict = {"add": True}

    def empty_kb(self):
        return frozenset()

    def acc(self, kb, pool=frozenset()) -> frozenset:
        raise NotImplementedError

    def reduce(self, kb, belief_set, pool=frozenset()):
        if self.monotone:
            return kb
        raise PreconditionError(f"{self.kind} logic has no reduction function")

    @property
    def has_reduction(self) -> bool:
        return self.monotone

    def is_reduced(self, kb) -> bool:
        """Whether ``kb`` lies in KB*, i.e. is fixed by the reduction."""
        return self.monotone

    def is_reducible(self, kb) -> bool:
        return self.has_reduction

    def apply_op(self, op: str, atoms: frozenset, kb):
        if op == "add":
            return self.add_facts(kb, atoms)
        raise OperationError(f"{self.kind} logic does not implement operation {op!r}")

    def add_facts(self, kb, atoms):
        return kb | atoms

    def kb_leq(self, a, b) -> bool:
        return a <= b

    def signatures(self, kb) -> set:
        """Predicate signatures ``(name, arity)`` occurring in ``kb``."""
        raise NotImplementedError

    def constants(self, kb) -> set:
        raise NotImplementedError

    def dependencies(self, kb) -> Iterable[tuple]:
        """Syntactic predicate-level edges ``(source_sig, target_sig)`` within ``kb``."""
        return ()

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return f"{type(self).__name__}()"


@dataclass(frozen=True)
class EvolvingContext:
    name: str
    logic: ContextLogic
    kb: Any = frozenset()
    bridge_rules: tuple = ()
    op_base: frozenset = frozenset({"add"})
    observation: bool = False
    #: declared signatures; ``None`` means "whatever kb and bridge heads use"
    vocabulary: Optional[frozenset] = None

    def __post_init__(self):
        if not isinstance(self.bridge_rules, tuple):
            object.__setattr__(self, "bridge_rules", tuple(self.bridge_rules))
        if not isinstance(self.op_base, frozenset):
            object.__setattr__(self, "op_base", frozenset(self.op_base))
        if self.vocabulary is None:
            voc = set(self.logic.signatures(self.kb))
            voc.update(r.head.atom.signature for r in self.bridge_rules)
            object.__setattr__(self, "vocabulary", frozenset(voc))
        elif not isinstance(self.vocabulary, frozenset):
            object.__setattr__(self, "vocabulary", frozenset(self.vocabulary))

    def mng(self, ops: Iterable[OpFormula], kb=None):
        """Apply a set of (non-``next``) operational formulas to ``kb``."""
        kb = self.kb if kb is None else kb
        grouped: dict[str, set] = {}
        for o in ops:
            if o.next:
                raise OperationError(f"{self.name}: next-wrapped formula {o} passed to mng")
            if o.op not in self.op_base:
                raise OperationError(f"{self.name}: operation {o.op!r} not in management base")
            grouped.setdefault(o.op, set()).add(o.atom)
        for op in sorted(grouped):
            kb = self.logic.apply_op(op, frozenset(grouped[op]), kb)
        return kb

    def replace_kb(self, kb) -> "EvolvingContext":
        return dataclasses.replace(self, kb=kb)

    @property
    def monotone_ops(self) -> bool:
        return all(self.logic.operations.get(op, False) for op in self.op_base)


@dataclass(frozen=True)
class Emcs:
    contexts: tuple
    #: declared constants; the grounding pool is these plus all constants in the system
    constants: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.contexts, tuple):
            object.__setattr__(self, "contexts", tuple(self.contexts))
        if not isinstance(self.constants, frozenset):
            object.__setattr__(self, "constants", frozenset(self.constants))

    def __len__(self):
        return len(self.contexts)

    def __getitem__(self, i) -> EvolvingContext:
        return self.contexts[i]

    @property
    def obs_count(self) -> int:
        n = 0
        for c in self.contexts:
            if not c.observation:
                break
            n += 1
        return n

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.contexts]

    def index_of(self, name: str) -> int:
        """0-based position of the context called ``name``."""
        for i, c in enumerate(self.contexts):
            if c.name == name:
                return i
        raise KeyError(name)

    @cached_property
    def pool(self) -> frozenset:
        consts = set(self.constants)
        for c in self.contexts:
            consts |= c.logic.constants(c.kb)
            for r in c.bridge_rules:
                consts.update(a for a in r.head.atom.args if type(a) is not Var)
                for b in r.body:
                    consts.update(a for a in b.atom.args if type(a) is not Var)
        return frozenset(consts)

    @property
    def kbs(self) -> tuple:
        return tuple(c.kb for c in self.contexts)

    def with_kbs(self, kbs) -> "Emcs":
        return Emcs(tuple(c.replace_kb(k) for c, k in zip(self.contexts, kbs)), self.constants)

    def with_constants(self, constants) -> "Emcs":
        return Emcs(self.contexts, frozenset(constants))

    def least_state(self) -> tuple:
        out = []
        for c in self.contexts:
            if c.logic.least_element is None:
                raise PreconditionError(f"context {c.name}: logic {c.logic.kind} has no least belief set")
            out.append(frozenset(c.logic.least_element))
        return tuple(out)


def belief_state(*components) -> tuple:
    """Build a belief state from iterables of atoms (or atom names for arity 0)."""
    out = []
    for comp in components:
        out.append(frozenset(a if isinstance(a, Atom) else Atom(a) for a in comp))
    return tuple(out)


def state_leq(a, b) -> bool:
    """Componentwise inclusion of belief states."""
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    context: Optional[int] = None
    rule: Optional[str] = None

    def __str__(self):
        where = []
        if self.context is not None:
            where.append(f"context {self.context}")
        if self.rule is not None:
            where.append(self.rule)
        prefix = f"[{', '.join(where)}] " if where else ""
        return f"{prefix}{self.code}: {self.message}"


def _arity_clashes(vocab) -> list[str]:
    seen: dict[str, int] = {}
    bad = []
    for pred, ar in sorted(vocab):
        if pred in seen and seen[pred] != ar:
            bad.append(pred)
        seen.setdefault(pred, ar)
    return bad


def validate(system: Emcs) -> list[Diagnostic]:
    """Structural checks on a system; returns one diagnostic per violation."""
    diags: list[Diagnostic] = []
    n = len(system.contexts)
    seen_reasoning = False
    for i, ctx in enumerate(system.contexts, start=1):
        if ctx.observation and seen_reasoning:
            diags.append(Diagnostic("observation-order",
                                    f"observation context {ctx.name} follows a reasoning context", i))
        if not ctx.observation:
            seen_reasoning = True
        for pred in _arity_clashes(ctx.vocabulary):
            diags.append(Diagnostic("arity-clash", f"predicate {pred} declared with several arities", i))
        for sig in sorted(ctx.logic.signatures(ctx.kb) - ctx.vocabulary):
            diags.append(Diagnostic("unknown-predicate",
                                    f"kb uses {sig[0]}/{sig[1]} outside the vocabulary of {ctx.name}", i, "kb"))
        for k, rule in enumerate(ctx.bridge_rules):
            rid = f"{ctx.name}.bridge[{k}]"
            if rule.head.op not in ctx.op_base:
                diags.append(Diagnostic("undeclared-operation",
                                        f"head operation {rule.head.op!r} not in management base", i, rid))
            if rule.head.atom.signature not in ctx.vocabulary:
                sig = rule.head.atom.signature
                diags.append(Diagnostic("unknown-predicate",
                                        f"head atom {sig[0]}/{sig[1]} not in vocabulary of {ctx.name}", i, rid))
            if not rule.is_safe():
                diags.append(Diagnostic("unsafe-rule",
                                        "head variable missing from positive body", i, rid))
            for lit in rule.body:
                if not 1 <= lit.context <= n:
                    diags.append(Diagnostic("index-out-of-range",
                                            f"literal {lit} references context {lit.context} of {n}", i, rid))
                    continue
                target = system.contexts[lit.context - 1]
                if lit.atom.signature not in target.vocabulary:
                    sig = lit.atom.signature
                    diags.append(Diagnostic("unknown-predicate",
                                            f"{sig[0]}/{sig[1]} not in vocabulary of {target.name}", i, rid))
    return diags


def mng_apply(context: EvolvingContext, ops: Iterable[OpFormula]):
    return context.mng(ops)


def replace_kb(context: EvolvingContext, kb) -> EvolvingContext:
    extra = context.logic.signatures(kb) - context.vocabulary
    if extra:
        names = ", ".join(f"{p}/{a}" for p, a in sorted(extra))
        raise VocabularyError(f"{context.name}: {names} outside the context vocabulary")
    return context.replace_kb(kb)


def output_patterns(system: Emcs) -> list[list[Atom]]:
    """Per context, the body atoms (possibly schematic) that query it."""
    out: list[list[Atom]] = [[] for _ in system.contexts]
    for ctx in system.contexts:
        for rule in ctx.bridge_rules:
            for lit in rule.body:
                if 1 <= lit.context <= len(out):
                    out[lit.context - 1].append(lit.atom)
    return out


def _matches(pattern: Atom, a: Atom) -> bool:
    if pattern.pred != a.pred or len(pattern.args) != len(a.args):
        return False
    binding: dict = {}
    for p, x in zip(pattern.args, a.args):
        if type(p) is Var:
            if binding.setdefault(p, x) != x:
                return False
        elif p != x:
            return False
    return True


def output_projection(state, system: Emcs) -> tuple:
    """Restrict each component to beliefs mentioned in some bridge-rule body."""
    patterns = output_patterns(system)
    out = []
    for comp, pats in zip(state, patterns):
        ground = {p for p in pats if p.is_ground()}
        schematic = [p for p in pats if not p.is_ground()]
        out.append(frozenset(a for a in comp if a in ground or any(_matches(p, a) for p in schematic)))
    return tuple(out)
