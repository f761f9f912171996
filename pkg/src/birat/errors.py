"""Exception hierarchy.  Every error carries a short machine-readable code."""


class BiratError(Exception):
    code = "error"
    exit_code = 3


class ComputationError(BiratError):
    exit_code = 3


class ValidationError(BiratError):
    code = "validation"
    exit_code = 2

    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check


class ParseError(BiratError):
    code = "parse"
    exit_code = 1

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {column})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


def _make(name, base=ComputationError):
    cls = type(name, (base,), {"code": name})
    return cls


ReduciblePolynomial = _make("ReduciblePolynomial")
FieldMismatch = _make("FieldMismatch")
NotZeroDimensional = _make("NotZeroDimensional")
NotIrreducible = _make("NotIrreducible")
NotContained = _make("NotContained")
SingularCentre = _make("SingularCentre")
GenericityFailure = _make("GenericityFailure")
PrecisionExhausted = _make("PrecisionExhausted")
UnexpectedSystemDimension = _make("UnexpectedSystemDimension")
PairSamplingExhausted = _make("PairSamplingExhausted")
SingularSection = _make("SingularSection")
DegenerateRepresentatives = _make("DegenerateRepresentatives")
IndeterminateAtAllSamples = _make("IndeterminateAtAllSamples")
IndeterminacyPoint = _make("IndeterminacyPoint")
AmbientMismatch = _make("AmbientMismatch")
SamplingExhausted = _make("SamplingExhausted")
InterpolationFailedAtAllCandidates = _make("InterpolationFailedAtAllCandidates")
NoMaximalCentre = _make("NoMaximalCentre")
NonTerminating = _make("NonTerminating")
ModularFailure = _make("ModularFailure")
# wrong centre degree is an input problem
WrongCentreDegree = _make("WrongCentreDegree", ValidationError)
