"""Pattern matching of (possibly schematic) atoms against indexed fact sets."""
from __future__ import annotations

import itertools

from .kernel import Atom, Var


class AtomIndex:
    """Ground atoms grouped by signature, with lazily built argument indexes."""

    __slots__ = ("by_sig", "_positional")

    def __init__(self, atoms=()):
        self.by_sig: dict[tuple, set] = {}
        self._positional: dict[tuple, dict] = {}
        by_sig = self.by_sig
        for a in atoms:
            sig = (a.pred, len(a.args))
            rows = by_sig.get(sig)
            if rows is None:
                rows = by_sig[sig] = set()
            rows.add(a.args)

    def __contains__(self, a: Atom) -> bool:
        rows = self.by_sig.get((a.pred, len(a.args)))
        return rows is not None and a.args in rows

    def __len__(self):
        return sum(len(v) for v in self.by_sig.values())

    def add(self, a: Atom) -> bool:
        sig = (a.pred, len(a.args))
        rows = self.by_sig.get(sig)
        if rows is None:
            rows = self.by_sig[sig] = set()
        elif a.args in rows:
            return False
        rows.add(a.args)
        if self._positional:
            for (s, positions), table in self._positional.items():
                if s == sig:
                    table.setdefault(tuple(a.args[p] for p in positions), []).append(a.args)
        return True

    def atoms(self) -> frozenset:
        return frozenset(Atom(p, args) for (p, _), rows in self.by_sig.items() for args in rows)

    def has_sig(self, sig) -> bool:
        return bool(self.by_sig.get(sig))

    def candidates(self, pattern: Atom, binding: dict):
        """Argument tuples of stored atoms that may match ``pattern`` under ``binding``."""
        sig = (pattern.pred, len(pattern.args))
        rows = self.by_sig.get(sig)
        if not rows:
            return ()
        positions = []
        key = []
        for i, t in enumerate(pattern.args):
            if type(t) is Var:
                v = binding.get(t)
                if v is None:
                    continue
                t = v
            positions.append(i)
            key.append(t)
        if not positions:
            return rows
        if len(positions) == len(pattern.args):
            k = tuple(key)
            return (k,) if k in rows else ()
        positions = tuple(positions)
        table = self._positional.get((sig, positions))
        if table is None:
            table = {}
            for args in rows:
                table.setdefault(tuple(args[p] for p in positions), []).append(args)
            self._positional[(sig, positions)] = table
        return table.get(tuple(key), ())


def extend(pattern: Atom, args: tuple, binding: dict):
    """Extend ``binding`` so that ``pattern`` equals ``Atom(pred, args)``; None on clash."""
    new = None
    for p, a in zip(pattern.args, args):
        if type(p) is Var:
            cur = binding.get(p) if new is None else new.get(p)
            if cur is None:
                if new is None:
                    new = dict(binding)
                new[p] = a
            elif cur != a:
                return None
        elif p != a:
            return None
    return binding if new is None else new


def _bound_count(pattern: Atom, binding: dict) -> int:
    return sum(1 for t in pattern.args if type(t) is not Var or t in binding)


def solve(goals: list, binding: dict):
    """Yield every binding satisfying all ``(pattern, index)`` goals.

    The next goal is picked greedily as the one with most bound arguments.
    """
    if not goals:
        yield binding
        return
    if len(goals) == 1:
        best = 0
    else:
        best = max(range(len(goals)), key=lambda k: _bound_count(goals[k][0], binding))
    pattern, index = goals[best]
    rest = goals[:best] + goals[best + 1:]
    for args in index.candidates(pattern, binding):
        b = extend(pattern, args, binding)
        if b is not None:
            yield from solve(rest, b)


def complete(binding: dict, variables, pool):
    """Extend ``binding`` to every assignment of unbound ``variables`` over ``pool``."""
    free = [v for v in variables if v not in binding]
    if not free:
        yield binding
        return
    consts = sorted(pool, key=str)
    for combo in itertools.product(consts, repeat=len(free)):
        b = dict(binding)
        b.update(zip(free, combo))
        yield b


def variables_of(atoms) -> list:
    seen: dict = {}
    for a in atoms:
        for t in a.args:
            if type(t) is Var:
                seen.setdefault(t, None)
    return list(seen)
