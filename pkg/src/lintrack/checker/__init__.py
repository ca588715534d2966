from lintrack.checker.explore import (
    BudgetExceeded,
    Counterexample,
    ExploreParams,
    LinearizableUpToBound,
    Stats,
    Stuck,
    StuckDiagnostic,
    Verdict,
    check,
    fuzz,
    random_run,
)
from lintrack.checker.oracle import is_linearizable, iter_linearizations, oracle_finals, oracle_linearizations
from lintrack.checker.witness import NoLinearization, extract_witness
from lintrack.checker.adequacy import AdequacyReport, Discrepancy, adequacy_crosscheck
