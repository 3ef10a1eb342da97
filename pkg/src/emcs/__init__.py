"""Evolving multi-context systems: equilibria, grounded semantics and streams."""
from .bridge import app, app_next, app_now, ground
from .equilibria import (
    check_acyclic,
    gamma,
    grounded_equilibrium_definite,
    is_grounded_equilibrium,
    is_static_equilibrium,
    s_reduct,
    wfs,
)
from .evolution import (
    GroundedEquilibriumError,
    StreamDriver,
    check_evolving_equilibrium,
    evolving_grounded_equilibrium,
    evolving_wfs,
    stream_driver,
)
from .kernel import (
    Atom,
    BridgeRule,
    Emcs,
    EmcsError,
    EvolvingContext,
    InconsistencyError,
    IntegrityError,
    OperationError,
    PreconditionError,
    Var,
    VocabularyError,
    add,
    atom,
    belief_state,
    neg,
    next_add,
    pos,
    validate,
)
from .syntax import ParseError, parse_observations, parse_system, serialize_observations, serialize_system

__version__ = "0.1.0"

__all__ = [
    "app",
    "app_next",
    "app_now",
    "ground",
    "check_acyclic",
    "gamma",
    "grounded_equilibrium_definite",
    "is_grounded_equilibrium",
    "is_static_equilibrium",
    "s_reduct",
    "wfs",
    "GroundedEquilibriumError",
    "StreamDriver",
    "check_evolving_equilibrium",
    "evolving_grounded_equilibrium",
    "evolving_wfs",
    "stream_driver",
    "Atom",
    "BridgeRule",
    "Emcs",
    "EmcsError",
    "EvolvingContext",
    "InconsistencyError",
    "IntegrityError",
    "OperationError",
    "PreconditionError",
    "Var",
    "VocabularyError",
    "add",
    "atom",
    "belief_state",
    "neg",
    "next_add",
    "pos",
    "validate",
    "ParseError",
    "parse_observations",
    "parse_system",
    "serialize_observations",
    "serialize_system",
]
