"""Exception types raised by the library.

Every error carries a short ``code`` used by the CLI's JSON error object.
"""


class SwitchMixError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_dict(self):
        out = {"error": self.code, "message": str(self)}
        out.update({k: v for k, v in self.details.items()})
        return out


class RaggedInput(SwitchMixError):
    code = "RaggedInput"


class IsolatedVertex(SwitchMixError):
    code = "IsolatedVertex"


class UnbalancedGraph(SwitchMixError):
    code = "UnbalancedGraph"


class EmptySelection(SwitchMixError):
    code = "EmptySelection"


class TooLarge(SwitchMixError):
    code = "TooLarge"


class NoPerfectMatching(SwitchMixError):
    code = "NoPerfectMatching"


class NotConvexPresentation(SwitchMixError):
    code = "NotConvexPresentation"


class NotChainGraph(SwitchMixError):
    code = "NotChainGraph"


class NotGammaFree(SwitchMixError):
    code = "NotGammaFree"


class NotMonotone(SwitchMixError):
    code = "NotMonotone"


class NotMonotonePresentation(NotMonotone):
    code = "NotMonotonePresentation"


class Disconnected(SwitchMixError):
    code = "Disconnected"


class InvariantViolation(SwitchMixError):
    code = "InvariantViolation"


class TransitoryState(SwitchMixError):
    code = "TransitoryState"


class BadBoundary(SwitchMixError):
    code = "BadBoundary"


class TooShort(SwitchMixError):
    code = "TooShort"


class GenerationFailed(SwitchMixError):
    code = "GenerationFailed"


class NotAlternatingCycle(SwitchMixError):
    code = "NotAlternatingCycle"
