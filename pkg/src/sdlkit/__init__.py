"""Standard deontic logic reasoning via translation into ALC."""

from .alc import (KnowledgeBase, export_kb, lift_global, parse_kb,
                  translate_formula, translate_system)
from .analysis import (GuaranteeQuery, Verdict, check_consistency,
                       compare_codes, guarantees_outcome)
from .errors import (BoundExceededError, DuplicateNameError, EmptySystemError,
                     ResourceLimitError, SDLSyntaxError, UnknownAtomError)
from .kripke import BoundedSearchSpec, KripkeModel, eval_formula, sat_oracle
from .syntax import (Atom, NormativeSystem, format_formula, modal_depth,
                     parse_formula, parse_system, to_nnf)
from .tableau import SatResult, is_satisfiable, model_check

__version__ = "0.1.0"
