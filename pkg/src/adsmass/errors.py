"""Exception types raised by the library.

Every error carries a short machine-readable ``code`` which the CLI echoes
in its ``{"error": ...}`` payload.
"""


class AdsMassError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class NotInAlgebra(AdsMassError):
    code = "NotInAlgebra"


class NotInGroup(AdsMassError):
    code = "NotInGroup"


class NotTimelikeEnergyMomentum(AdsMassError):
    code = "NotTimelikeEnergyMomentum"


class BadIndex(AdsMassError):
    code = "BadIndex"


class NotInSpinorSet(AdsMassError):
    code = "NotInSpinorSet"


class DegenerateInput(AdsMassError):
    code = "DegenerateInput"


class ChartBoundary(AdsMassError):
    code = "ChartBoundary"


class NotTimelike(AdsMassError):
    code = "NotTimelike"


class NotObserver(AdsMassError):
    code = "NotObserver"


class BisectionFailure(AdsMassError):
    code = "BisectionFailure"


class NotPositive(AdsMassError):
    code = "NotPositive"


class Degenerate(AdsMassError):
    code = "Degenerate"
