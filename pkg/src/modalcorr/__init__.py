"""Correspondence engine for basic modal logic.

Classifies formulas into the Sahlqvist-style syntactic hierarchy
(closed, uniform, very simple Sahlqvist, Sahlqvist, atomic inductive),
computes local first-order frame correspondents by minimal-valuation
reduction, and certifies every output against a brute-force finite-frame
oracle plus order-theoretic checks on finite powerset algebras.
"""

from .errors import (
    ConjunctCapExceeded,
    CyclicDigraph,
    ModalCorrError,
    NotInClass,
    NotMeetPreserving,
    NotRegularAntecedent,
    NotResiduated,
    NotUniform,
    ParseError,
    ResourceCap,
    SharedLetters,
    UnboundVariable,
    Unsupported,
)
from .modal import (
    modal_depth,
    parse_modal,
    print_modal,
    prop_letters,
    substitute_prop,
)
from .fol import parse_fo, print_fo, to_tptp
from .semantics import (
    Counterexample,
    Frame,
    check_local_correspondence,
    enumerate_frames,
    eval_fo,
    eval_so,
    extension,
    frame_valid_at,
)
from .translate import second_order_translation, standard_translation

__all__ = [
    "ModalCorrError",
    "ParseError",
    "NotInClass",
    "NotRegularAntecedent",
    "NotUniform",
    "CyclicDigraph",
    "SharedLetters",
    "Unsupported",
    "ResourceCap",
    "ConjunctCapExceeded",
    "UnboundVariable",
    "NotMeetPreserving",
    "NotResiduated",
    "parse_modal",
    "print_modal",
    "modal_depth",
    "prop_letters",
    "substitute_prop",
    "parse_fo",
    "print_fo",
    "to_tptp",
    "Frame",
    "Counterexample",
    "extension",
    "frame_valid_at",
    "eval_fo",
    "eval_so",
    "enumerate_frames",
    "check_local_correspondence",
    "standard_translation",
    "second_order_translation",
]

__version__ = "0.1.0"
