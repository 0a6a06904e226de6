"""Exception hierarchy shared across the library."""


class SentinetError(Exception):
    """Base class for all library errors."""


# -- network / inference ----------------------------------------------------

class CyclicGraphError(SentinetError):
    pass


class CptRowNotNormalizedError(SentinetError):
    def __init__(self, child: int, row: int, total: float):
        super().__init__(f"cpt row for variable {child}, row {row} sums to {total!r}")
        self.child = child
        self.row = row
        self.total = total


class ArityMismatchError(SentinetError):
    pass


class IncompleteAssignmentError(SentinetError):
    pass


class StateSpaceTooLargeError(SentinetError):
    pass


class ZeroProbabilityEvidenceError(SentinetError):
    pass


class NotChordalError(SentinetError):
    pass


class NotCalibratedError(SentinetError):
    pass


class UnknownVariableError(SentinetError):
    pass


class NetworkFormatError(SentinetError):
    """Malformed network / sectioning / scenario file."""


# -- sectioning -------------------------------------------------------------

class UnsoundDsepsetError(SentinetError):
    def __init__(self, variable: int, detail: str = ""):
        msg = f"variable {variable} breaks d-sepset soundness"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.variable = variable


class NotHypertreeError(SentinetError):
    pass


class UncoveredVariableError(SentinetError):
    pass


class NotAdjacentError(SentinetError):
    pass


# -- trust protocol ---------------------------------------------------------

class MajorityAssumptionViolatedError(SentinetError):
    pass


class UnknownHostError(SentinetError):
    pass


# -- simulation -------------------------------------------------------------

class SenderIsolatedError(SentinetError):
    pass


class TickLimitExceededError(SentinetError):
    pass


# -- agents -----------------------------------------------------------------

class DuplicateAgentIdError(SentinetError):
    pass


class UnknownAgentError(SentinetError):
    pass


class AlreadyResolvedError(SentinetError):
    pass


class TooFewConfirmedRecordsError(SentinetError):
    pass


class UnknownAlertIdError(SentinetError):
    pass


# -- dataset pipeline -------------------------------------------------------

class MalformedLineError(SentinetError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class UnknownLabelError(SentinetError):
    pass


class NotEnoughRecordsError(SentinetError):
    pass


class EmptyDatasetError(SentinetError):
    pass


class EmptyTestSetError(SentinetError):
    pass


class BundleMismatchError(SentinetError):
    pass


class UnknownStateError(SentinetError):
    pass


class DegenerateAttributeWarning(UserWarning):
    """Constant column collapsed to a single bin during discretization."""
