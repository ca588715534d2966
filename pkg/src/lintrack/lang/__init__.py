from lintrack.lang.syntax import *  # noqa: F401,F403
from lintrack.lang.semantics import EvalError, eval_statement, eval_term, step_frame
from lintrack.lang.parser import (
    DSLError,
    ParseError,
    ValidationError,
    load_implementation,
    parse_value_set,
    parse_implementation,
)
from lintrack.lang.printer import pretty_print
