"""Twelve derivable schemata of intuitionistic predicate logic.

Each entry maps metavariable instances (phi, psi, chi) to a formula; the
quantifier schemata additionally use the free variable ``x`` of phi and
substitute the variable ``t`` for it.
"""
from __future__ import annotations

from typing import Callable

from .formula import BOTTOM, And, Formula, Implies, Or, exists, forall, rename_free

Schema = Callable[[Formula, Formula, Formula], Formula]


def _imp(*fs: Formula) -> Formula:
    """Right-nested implication chain."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Implies(f, out)
    return out


SCHEMATA: dict[str, Schema] = {
    "identity": lambda p, q, r: _imp(p, p),
    "weakening": lambda p, q, r: _imp(p, q, p),
    "distribution": lambda p, q, r: _imp(_imp(p, q, r), _imp(p, q), _imp(p, r)),
    "and-elim-left": lambda p, q, r: _imp(And(p, q), p),
    "and-elim-right": lambda p, q, r: _imp(And(p, q), q),
    "and-intro": lambda p, q, r: _imp(p, q, And(p, q)),
    "or-intro-left": lambda p, q, r: _imp(p, Or(p, q)),
    "or-intro-right": lambda p, q, r: _imp(q, Or(p, q)),
    "or-elim": lambda p, q, r: _imp(_imp(p, r), _imp(q, r), _imp(Or(p, q), r)),
    "ex-falso": lambda p, q, r: _imp(BOTTOM, p),
    "forall-elim": lambda p, q, r: _imp(forall("x", p), rename_free(p, {"x": "t"})),
    "exists-intro": lambda p, q, r: _imp(rename_free(p, {"x": "t"}), exists("x", p)),
}

# Quantifier rules are sound only on inhabited carriers: over an empty
# domain ``forall x. false -> false`` fails, as in ordinary first-order logic.
NEEDS_INHABITED = frozenset({"forall-elim", "exists-intro"})
