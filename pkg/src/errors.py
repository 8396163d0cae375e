from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for every error raised by a workbench module.

    Each error knows the module that raised it and a machine-readable code
    of the form ``"<module>.<ErrorName>"``. Domain errors exit with status 2,
    usage errors with status 1.
    """

    module = "workbench"
    exit_code = 2

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None,
                 module: Optional[str] = None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details or {}
        if module is not None:
            self.module = module

    @property
    def code(self) -> str:
        return f"{self.module}.{self.__class__.__name__}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'module': self.module,
            'code': self.code,
            'message': self.message,
            'details': self.details
        }


class UsageError(WorkbenchError):
    module = "cli"
    exit_code = 1


# rootsys
class InadmissibleSpec(WorkbenchError):
    module = "rootsys"

class ClassificationFailure(WorkbenchError):
    module = "rootsys"

class GroupTooLarge(WorkbenchError):
    module = "rootsys"

class NotDominant(WorkbenchError):
    module = "rootsys"


# faces
class ZeroVector(WorkbenchError):
    module = "faces"

class NotInChamber(WorkbenchError):
    module = "faces"


# wedge
class RankTooLarge(WorkbenchError):
    module = "wedge"

class NotHighestWeight(WorkbenchError):
    module = "wedge"

class DimensionMismatch(WorkbenchError):
    module = "wedge"

class InconsistentSizes(WorkbenchError):
    module = "wedge"


# su2harm
class NotProbability(WorkbenchError):
    module = "su2harm"

class QuadratureDivergence(WorkbenchError):
    module = "su2harm"

class DeltaOutOfRange(WorkbenchError):
    module = "su2harm"


# walkdio
class HeightOverflow(WorkbenchError):
    module = "walkdio"

class BadParameter(WorkbenchError):
    module = "walkdio"

class UndecidableMembership(WorkbenchError):
    module = "walkdio"


# multiscale
class EmptyCloud(WorkbenchError):
    module = "multiscale"

class TooFewSamples(WorkbenchError):
    module = "multiscale"

class BudgetExceeded(WorkbenchError):
    module = "multiscale"

class UnderResolved(WorkbenchError):
    module = "multiscale"


# proxdecay
class NotPrime(WorkbenchError):
    module = "proxdecay"

class NoExpandingPlace(WorkbenchError):
    module = "proxdecay"

class SingularProduct(WorkbenchError):
    module = "proxdecay"

class BadHyperplane(WorkbenchError):
    module = "proxdecay"


# stabcert
class EmptyNearSet(WorkbenchError):
    module = "stabcert"


# cli
class NotSymmetric(WorkbenchError):
    module = "cli"

class UnknownCommand(UsageError):
    pass

class InvalidMeasureFile(UsageError):
    pass

class ParseError(UsageError):
    pass
